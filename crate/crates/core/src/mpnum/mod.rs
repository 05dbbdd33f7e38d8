//! Arbitrary-precision kernel: the `BigReal` type, Gamma, Pochhammer and `I_ν`.

mod bessel;
mod bigreal;
mod gamma;

pub use bessel::{bessel_i, bessel_i_series};
pub use bigreal::BigReal;
pub use gamma::{gamma, pochhammer};

/// Extra bits carried by every internal computation.
pub const GUARD_BITS: u32 = 32;

/// Result of a truncated series together with its tail certificate.
#[derive(Clone, Debug)]
pub struct SeriesSum {
    pub partial: BigReal,
    pub terms_used: u64,
    /// Absolute bound on the omitted remainder.
    pub tail_bound: BigReal,
}

/// Exact rational value of a decimal literal such as `"1.5"`, `"-2"`, `"1e-40"`.
pub fn parse_decimal(s: &str) -> crate::Result<rug::Rational> {
    use rug::{Integer, Rational};
    let bad = || crate::Error::Invalid(format!("not a decimal number: {s:?}"));
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(p) => (&mant[..p], &mant[p + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = Integer::from_str_radix(&digits, 10).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let value = if scale >= 0 {
        Rational::from(num * Integer::from(Integer::u_pow_u(10, scale as u32)))
    } else {
        Rational::from((num, Integer::from(Integer::u_pow_u(10, (-scale) as u32))))
    };
    Ok(value)
}

/// Correctly rounded `BigReal` for an exact rational.
pub fn rational_to_big(q: &rug::Rational, prec: u32) -> BigReal {
    BigReal::from_float(rug::Float::with_val(prec.max(BigReal::MIN_PREC), q))
}

#[cfg(test)]
mod parse_tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn decimal_literals() {
        assert_eq!(parse_decimal("1.5").unwrap(), Rational::from((3, 2)));
        assert_eq!(parse_decimal("-0.25").unwrap(), Rational::from((-1, 4)));
        assert_eq!(parse_decimal("1e-3").unwrap(), Rational::from((1, 1000)));
        assert_eq!(parse_decimal("2.5E2").unwrap(), Rational::from(250));
        assert_eq!(parse_decimal(".5").unwrap(), Rational::from((1, 2)));
        for bad in ["", "abc", "1.2.3", "1e", "--1", "."] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
    }
}
