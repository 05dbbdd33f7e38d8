// The n = 0 Painlevé V solution continued in t by the Taylor integrator
// and read back as b_0(a = t), against the Bessel ratio.

use charlier::laxchain::initial_b0;
use charlier::painleve::{bn_from_y, p5_integrate, seed_classical_y0, seed_flow_consistency, P5Params};
use charlier::{BigReal, Lattice, MeasureSpec};
use rug::Rational;

pub fn run_example() -> charlier::Result<()> {
    let prec = 256;
    let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None)?;
    let t0 = spec.a(prec);
    let seed = seed_classical_y0(&t0, &spec.beta(prec), &initial_b0(&spec, prec)?, prec)?;
    println!("seed at t = 1: y = {}, y' = {}", seed.y.to_decimal(30), seed.yp.to_decimal(30));

    let params = P5Params::recurrence(0, spec.beta_exact(), &Rational::from(1));
    let t1 = BigReal::parse("1.5", prec)?;
    let end = p5_integrate(&params, &seed, &t1, prec)?;
    let b_flow = bn_from_y(0, &spec.beta(end.prec()), &end)?;
    let b_direct = initial_b0(&spec.with_a(Rational::from((3, 2)))?, prec)?;
    println!("b_0(1.5) from the flow  {}", b_flow.to_decimal(40));
    println!("b_0(1.5) Bessel ratio   {}", b_direct.to_decimal(40));

    for (t, d) in seed_flow_consistency(&spec, &t1, 5, prec)? {
        println!("  t = {:<6} |difference| = {:.2e}", t.to_decimal(4), d.to_f64());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
