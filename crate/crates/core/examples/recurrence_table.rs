// Recurrence coefficients from moments, by Hankel determinants and by the
// discrete Stieltjes procedure, on all three lattices.

use charlier::oracle::{recurrence_from_hankel, recurrence_from_stieltjes};
use charlier::{Lattice, MeasureSpec};

pub fn run_example() -> charlier::Result<()> {
    let prec = 256;
    let n_max = 8;
    let specs = [
        MeasureSpec::parse("1", "1.5", Lattice::N, None)?,
        MeasureSpec::parse("1", "0.5", Lattice::Shifted, None)?,
        MeasureSpec::parse("1", "0.5", Lattice::BiLattice, Some("2"))?,
    ];
    for spec in &specs {
        let h = recurrence_from_hankel(spec, n_max, prec)?;
        let s = recurrence_from_stieltjes(spec, n_max, prec)?;
        let (da, db) = h.max_abs_diff(&s);
        println!("{} lattice, a = 1, beta = {}", spec.lattice(), spec.beta(64).to_decimal(3));
        println!("  n  a_n^2                    b_n");
        for n in 0..=n_max {
            println!("  {n:<2} {:<24} {}", h.a2[n].to_decimal(20), h.b[n].to_decimal(20));
        }
        println!("  hankel vs stieltjes: |da2| = {:.1e}, |db| = {:.1e}", da.to_f64(), db.to_f64());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
