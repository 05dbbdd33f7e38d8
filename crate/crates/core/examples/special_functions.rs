// Modified Bessel functions and the gamma function at 256 bits.

use charlier::mpnum::{bessel_i, gamma, pochhammer, BigReal};

pub fn run_example() -> charlier::Result<()> {
    let p = 256;
    let two = BigReal::from_i64(2, p);
    for nu in ["0", "0.5", "1", "-1.5", "2.25"] {
        let v = bessel_i(&BigReal::parse(nu, p)?, &two, p)?;
        println!("I_{nu}(2) = {}", v.to_decimal(40));
    }
    // I_{1/2}(z) = sqrt(2/(πz)) sinh z
    let closed = (BigReal::from_i64(2, p) / (BigReal::pi(p) * &two)).sqrt() * two.sinh();
    let series = bessel_i(&BigReal::parse("0.5", p)?, &two, p)?;
    println!("|I_1/2(2) - closed form| = {:.3e}", (series - closed).abs().to_f64());

    let x = BigReal::parse("0.3", p)?;
    println!("Gamma(0.3) = {}", gamma(&x, p)?.to_decimal(40));
    println!("(0.3)_5 = {}", pochhammer(&x, 5, p).to_decimal(40));
    Ok(())
}

#[allow(dead_code)]
fn main() -> charlier::Result<()> {
    run_example()
}
