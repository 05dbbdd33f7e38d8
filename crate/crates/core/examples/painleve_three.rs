// From the chain to Painlevé III: parameter sets by sign choice, the four
// formulas for b_n in terms of u(z), and a finite-difference check of the
// equation itself.

use charlier::oracle::recurrence_from_hankel;
use charlier::painleve::p3::{btilde_pipeline, p3_branch_params, P3Trajectory};
use charlier::{BigReal, Lattice, MeasureSpec};

pub fn run_example() -> charlier::Result<()> {
    let prec = 256;
    let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None)?;
    let n = 2;
    for branch in 1..=4 {
        let p = p3_branch_params(branch, n as i64, spec.beta_exact())?;
        println!("set {branch}: alpha = {}, beta = {}", p.alpha, p.beta);
    }
    let oracle = recurrence_from_hankel(&spec, n, prec)?;
    println!("oracle b_{n}(1) = {}", oracle.b[n].to_decimal(30));
    for branch in 1..=4 {
        let b = btilde_pipeline(&spec, n, branch, prec)?;
        println!("  branch {branch}: {}  (diff {:.1e})", b.to_decimal(30), (&b - &oracle.b[n]).abs().to_f64());
    }

    let reach = BigReal::parse("0.1", prec)?;
    let traj = P3Trajectory::new(&spec, n, &reach, 1, prec)?;
    let zero = BigReal::zero(prec);
    for h in ["0.02", "0.01", "0.005"] {
        let r = traj.residual(&zero, &BigReal::parse(h, prec)?)?;
        println!("  five-point P3 residual at z = 2, h = {h}: {:.3e}", r.abs().to_f64());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
