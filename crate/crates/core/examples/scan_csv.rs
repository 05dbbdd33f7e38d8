// Tables over a range of a in long CSV form, as written by `charlier scan`.

use charlier::cli::{compute_table, scan_csv, scan_points};
use charlier::measures::rational_decimal;
use charlier::mpnum::parse_decimal;
use charlier::{Lattice, MeasureSpec, Source};

pub fn run_example() -> charlier::Result<()> {
    let points = scan_points(&parse_decimal("0.5")?, &parse_decimal("2")?, 4)?;
    let mut tables = Vec::new();
    for a in &points {
        let spec = MeasureSpec::parse(&rational_decimal(a), "1.5", Lattice::N, None)?;
        tables.push(compute_table(&spec, 3, Source::Hankel, 128)?);
    }
    print!("{}", scan_csv(&tables));
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
