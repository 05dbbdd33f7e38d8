use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision real number carrying its own working precision.
///
/// Binary arithmetic between two values is evaluated at the larger of the two
/// precisions; arithmetic with a machine scalar keeps the precision of the
/// `BigReal` operand. Rounding is always to nearest.
#[derive(Clone, Debug)]
pub struct BigReal(Float);

impl BigReal {
    /// Lowest precision a `BigReal` is ever created with.
    pub const MIN_PREC: u32 = 64;

    fn clamp(prec: u32) -> u32 {
        prec.max(Self::MIN_PREC)
    }

    pub fn from_float(f: Float) -> Self {
        if f.prec() < Self::MIN_PREC {
            BigReal(Float::with_val(Self::MIN_PREC, f))
        } else {
            BigReal(f)
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigReal(Float::new(Self::clamp(prec)))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigReal(Float::with_val(Self::clamp(prec), v))
    }

    /// Exact conversion of a binary double (no decimal rounding involved).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        BigReal(Float::with_val(Self::clamp(prec), v))
    }

    /// `p / q` correctly rounded.
    pub fn from_ratio(p: i64, q: i64, prec: u32) -> Self {
        let num = Float::with_val(Self::clamp(prec), p);
        BigReal(num / q)
    }

    /// Parses a decimal string such as `"1.5"`, `"-3e-4"` or `"1e-40"`.
    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| Error::Invalid(format!("cannot parse {s:?} as a decimal: {e}")))?;
        Ok(BigReal(Float::with_val(Self::clamp(prec), parsed)))
    }

    pub fn pi(prec: u32) -> Self {
        BigReal(Float::with_val(Self::clamp(prec), Constant::Pi))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    /// Same value rounded (or exactly extended) to `prec` bits.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigReal(Float::with_val(Self::clamp(prec), &self.0))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    /// True when the value is an exact integer.
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        BigReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        BigReal(self.0.clone().sqrt())
    }

    pub fn exp(&self) -> Self {
        BigReal(self.0.clone().exp())
    }

    pub fn ln(&self) -> Self {
        BigReal(self.0.clone().ln())
    }

    pub fn sin(&self) -> Self {
        BigReal(self.0.clone().sin())
    }

    pub fn cosh(&self) -> Self {
        BigReal(self.0.clone().cosh())
    }

    pub fn sinh(&self) -> Self {
        BigReal(self.0.clone().sinh())
    }

    pub fn recip(&self) -> Self {
        BigReal(self.0.clone().recip())
    }

    pub fn square(&self) -> Self {
        BigReal(self.0.clone().square())
    }

    pub fn powi(&self, e: i32) -> Self {
        BigReal(Float::with_val(self.prec(), (&self.0).pow(e)))
    }

    pub fn pow(&self, e: &BigReal) -> Self {
        let p = self.prec().max(e.prec());
        BigReal(Float::with_val(p, (&self.0).pow(&e.0)))
    }

    pub fn floor(&self) -> Self {
        BigReal(self.0.clone().floor())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Base-2 logarithm of `|self|` as a double (`-inf` for zero).
    pub fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (mantissa, exp) = self.0.to_f64_exp();
        mantissa.abs().log2() + f64::from(exp)
    }

    /// Decimal digits that faithfully represent `prec` bits.
    pub fn digits_for_prec(prec: u32) -> usize {
        ((f64::from(prec) * std::f64::consts::LOG10_2).floor() as usize).max(1)
    }

    /// Scientific decimal string with `digits` significant digits, e.g. `1.25e-3`.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let s = self.0.to_string_radix(10, Some(digits.max(1)));
        normalize_exponent(&s)
    }
}

/// rug prints `1.2500e-3`-style output; strip trailing zeros from the mantissa.
fn normalize_exponent(s: &str) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(pos) => (&s[..pos], Some(&s[pos + 1..])),
        None => (s, None),
    };
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    match exp {
        Some(e) => {
            let e: i64 = e.parse().unwrap_or(0);
            if e == 0 {
                mantissa.to_string()
            } else {
                format!("{mantissa}e{e}")
            }
        }
        None => mantissa.to_string(),
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| Self::digits_for_prec(self.prec()));
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! bin_op {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let p = self.prec().max(rhs.prec());
                BigReal(Float::with_val(p, (&self.0).$method(&rhs.0)))
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.$method(&rhs)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl $assign_tr<&BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: &BigReal) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_tr<BigReal> for BigReal {
            fn $assign_method(&mut self, rhs: BigReal) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

bin_op!(Add, add, AddAssign, add_assign);
bin_op!(Sub, sub, SubAssign, sub_assign);
bin_op!(Mul, mul, MulAssign, mul_assign);
bin_op!(Div, div, DivAssign, div_assign);

macro_rules! scalar_op {
    ($scalar:ty, $tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<$scalar> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: $scalar) -> BigReal {
                BigReal(Float::with_val(self.prec(), (&self.0).$method(rhs)))
            }
        }
        impl $tr<$scalar> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: $scalar) -> BigReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<&BigReal> for $scalar {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                BigReal(Float::with_val(rhs.prec(), self.$method(&rhs.0)))
            }
        }
        impl $tr<BigReal> for $scalar {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.$method(&rhs)
            }
        }
        impl $assign_tr<$scalar> for BigReal {
            fn $assign_method(&mut self, rhs: $scalar) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

macro_rules! scalar_ops {
    ($($scalar:ty),*) => {$(
        scalar_op!($scalar, Add, add, AddAssign, add_assign);
        scalar_op!($scalar, Sub, sub, SubAssign, sub_assign);
        scalar_op!($scalar, Mul, mul, MulAssign, mul_assign);
        scalar_op!($scalar, Div, div, DivAssign, div_assign);
    )*};
}

scalar_ops!(i64, f64);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(Float::with_val(self.prec(), -&self.0))
    }
}

impl<'a> std::iter::Sum<&'a BigReal> for BigReal {
    fn sum<I: Iterator<Item = &'a BigReal>>(iter: I) -> Self {
        let mut acc: Option<BigReal> = None;
        for x in iter {
            acc = Some(match acc {
                Some(a) => a + x,
                None => x.clone(),
            });
        }
        acc.unwrap_or_else(|| BigReal::zero(BigReal::MIN_PREC))
    }
}
