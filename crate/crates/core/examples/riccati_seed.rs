// b_0 as a ratio of Bessel functions on each lattice, the Riccati equation
// it satisfies, and the b_0 = m_1/m_0 identity.

use charlier::laxchain::initial_b0;
use charlier::measures::moments;
use charlier::toda::{riccati_b0_residual, riccati_symmetry_residual};
use charlier::{Lattice, MeasureSpec};

pub fn run_example() -> charlier::Result<()> {
    let prec = 256;
    for (lattice, beta, tau) in [
        (Lattice::N, "1.5", None),
        (Lattice::Shifted, "0.5", None),
        (Lattice::BiLattice, "0.5", Some("2")),
    ] {
        for a in ["0.1", "1", "10"] {
            let spec = MeasureSpec::parse(a, beta, lattice, tau)?;
            let b0 = initial_b0(&spec, prec)?;
            let m = moments(&spec, 2, prec)?;
            let ratio = &m.m[1] / &m.m[0];
            let ric = riccati_b0_residual(&spec, &spec.a(prec), prec)?;
            let sym = riccati_symmetry_residual(&spec, &spec.a(prec), prec)?;
            println!(
                "{lattice:<9} a = {a:<4} b0 = {}  |b0 - m1/m0| = {:.1e}  riccati {:.1e}  mirrored {:.1e}",
                b0.to_decimal(18),
                (&b0 - ratio).abs().to_f64(),
                ric.abs().to_f64(),
                sym.abs().to_f64()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
