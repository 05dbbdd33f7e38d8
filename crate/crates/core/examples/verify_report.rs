// Running verification suites over a small grid and writing the JSON
// report.

use charlier::suites::{run, Grid, Suite};
use charlier::VerificationReport;

pub fn run_example() -> charlier::Result<()> {
    let mut grid = Grid::standard(256).with_lists(Some("0.5,1"), Some("0.5,1.5"))?;
    grid.n_max = 6;
    let mut parts = Vec::new();
    for suite in [Suite::Riccati, Suite::Symmetry, Suite::P5Chain] {
        let r = run(suite, &grid)?;
        println!("{}", r.summary_line());
        parts.push(r);
    }
    let merged = charlier::report::merge(&parts)?;
    let json = merged.to_json()?;
    let back = VerificationReport::from_json(&json)?;
    println!("merged: {} ({} bytes of JSON, round trip {})", back.summary_line(), json.len(), back == merged);
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
