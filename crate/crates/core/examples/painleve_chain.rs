// The whole table from one classical Painlevé V solution: seed at n = 0,
// then Bäcklund steps in n, compared with the moment oracle.

use charlier::painleve::p5_chain_verify;
use charlier::{Lattice, MeasureSpec};

pub fn run_example() -> charlier::Result<()> {
    let prec = 512;
    for (lattice, beta, tau) in [
        (Lattice::N, "1.5", None),
        (Lattice::Shifted, "0.5", None),
        (Lattice::BiLattice, "0.5", Some("1")),
    ] {
        let spec = MeasureSpec::parse("1", beta, lattice, tau)?;
        let (report, table) = p5_chain_verify(&spec, 10, prec)?;
        println!("{lattice} lattice, beta = {beta}: {}", report.summary_line());
        for cell in &report.cells {
            println!(
                "  n = {:>2}  b_n = {}  max residual {:.2e}",
                cell.n,
                table.b[cell.n as usize].to_decimal(24),
                cell.max_residual_f64()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
