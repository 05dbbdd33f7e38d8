// Toda equations in the parameter a, checked with five-point differences
// of oracle tables, and the fourth-order decay of the residual.

use charlier::toda::TodaStencil;
use charlier::{BigReal, Lattice, MeasureSpec};

pub fn run_example() -> charlier::Result<()> {
    let prec = 512;
    let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None)?;
    let a = spec.a(prec);
    let mut last: Option<f64> = None;
    for h in ["1e-2", "5e-3", "2.5e-3"] {
        let step = BigReal::parse(h, prec)?;
        let stencil = TodaStencil::new(&spec, &a, &step, 4, prec)?;
        let r = stencil.residuals(2);
        let v = r.toda_b.abs().to_f64();
        let ratio = last.map(|l| format!("  ratio {:.2}", l / v)).unwrap_or_default();
        println!(
            "h = {h:<7} toda: {:.2e} {:.2e}  x': {:.2e}  b': {:.2e}{ratio}",
            r.toda_x.abs().to_f64(),
            v,
            r.xprime.abs().to_f64(),
            r.bprime.abs().to_f64()
        );
        last = Some(v);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
