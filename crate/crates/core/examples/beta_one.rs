// The weight a^k/(k!)^2 through Painlevé V with D = -8: a complex seed at
// level 0, the quadratic map from the main chain, and the level map.

use charlier::oracle::recurrence_from_hankel;
use charlier::painleve::beta1::beta1_table;
use charlier::{Lattice, MeasureSpec};
use rug::Rational;

pub fn run_example() -> charlier::Result<()> {
    let prec = 256;
    let n_max = 6;
    let spec = MeasureSpec::parse("1", "1", Lattice::N, None)?;
    let oracle = recurrence_from_hankel(&spec, n_max, prec)?;
    for eps in [-1i8, 1] {
        for root in [-1i8, 1] {
            let chain = beta1_table(&Rational::from(1), n_max, eps, root, prec)?;
            let worst = (0..=n_max)
                .map(|n| (&chain.b[n] - &oracle.b[n]).abs().to_f64())
                .fold(0.0, f64::max);
            println!("eps = {eps:>2}, root = {root:>2}: max |b_n - oracle| = {worst:.2e}");
        }
    }
    let chain = beta1_table(&Rational::from(1), n_max, -1, -1, prec)?;
    println!(
        "level 0 from the complex seed: Im b_0 = {:.1e}, seed residual = {:.1e}",
        chain.b0_imag.to_f64(),
        chain.seed_residual.to_f64()
    );
    for n in 0..=n_max {
        println!("  b_{n} = {}", chain.b[n].to_decimal(30));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
