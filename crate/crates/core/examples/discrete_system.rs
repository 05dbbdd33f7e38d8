// The nonlinear discrete system: forward recursion from the Bessel-ratio
// initial value, its residuals on the oracle table, and its instability.

use charlier::laxchain::{check_discrete_residuals, forward_from, initial_b0, recurrence_forward};
use charlier::oracle::recurrence_from_hankel;
use charlier::{BigReal, Lattice, MeasureSpec};

pub fn run_example() -> charlier::Result<()> {
    let prec = 512;
    let n_max = 20;
    let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None)?;
    let oracle = recurrence_from_hankel(&spec, n_max, prec)?;

    let report = check_discrete_residuals(&oracle, &spec);
    let worst = report.cells.iter().map(|c| c.max_residual_f64()).fold(0.0, f64::max);
    println!("oracle residuals in the discrete system: max {worst:.2e} ({})", report.summary_line());

    let forward = recurrence_forward(&spec, n_max, prec)?;
    let (da, db) = oracle.max_abs_diff(&forward);
    println!("forward recursion vs oracle, n <= {n_max}: |da2| {:.2e}, |db| {:.2e}", da.to_f64(), db.to_f64());

    // The same recursion at the same precision, started 1e-20 off.
    let wp = prec + 40 * n_max as u32 + 32;
    let b0 = initial_b0(&spec, wp)? + BigReal::parse("1e-20", wp)?;
    match forward_from(&spec, b0, n_max, prec) {
        Ok(t) => {
            for n in [5, 10, 15, 20] {
                println!("  perturbed start, n = {n:>2}: |b_n - oracle| = {:.2e}", (&t.b[n] - &oracle.b[n]).abs().to_f64());
            }
        }
        Err(e) => println!("  perturbed start breaks down: {e}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
