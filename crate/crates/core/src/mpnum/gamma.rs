//! Gamma function by upward argument shift and Stirling's series.
//!
//! For `X >= x_min`, `ln Γ(X) = (X - 1/2) ln X - X + ln(2π)/2 + Σ_k B_2k / (2k (2k-1) X^(2k-1)) + R_K`
//! with `|R_K|` bounded by the first omitted term. The Bernoulli numbers come
//! from exact integer tangent numbers, so no tabulated constants are needed.

use rug::{Integer, Rational};

use super::{BigReal, GUARD_BITS};
use crate::error::{Error, Result};

/// Tangent numbers `T_1..=T_n` (1, 2, 16, 272, ...) by the Brent–Harvey
/// in-place recurrence, all in exact integer arithmetic.
fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u64 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j as u64 - k as u64));
            let b = Integer::from(&t[j] * (j as u64 - k as u64 + 2));
            t[j] = a + b;
        }
    }
    t
}

/// Exact Bernoulli numbers `B_2, B_4, ..., B_2n` (index 0 holds `B_2`).
pub(crate) fn bernoulli_even(n: usize) -> Vec<Rational> {
    let t = tangent_numbers(n);
    (1..=n)
        .map(|k| {
            // B_2k = (-1)^(k-1) 2k T_k / (4^k (4^k - 1))
            let four_k = Integer::from(1) << (2 * k as u32);
            let den = Integer::from(&four_k * (Integer::from(&four_k - 1u32)));
            let mut num = Integer::from(&t[k] * (2 * k as u64));
            if k % 2 == 0 {
                num = -num;
            }
            Rational::from((num, den))
        })
        .collect()
}

/// `log2 |B_2k|` estimated in double precision from `2 (2k)! / (2π)^2k`.
fn log2_bernoulli_estimate(k: usize) -> f64 {
    let two_k = 2.0 * k as f64;
    let ln_fact = ln_factorial(2 * k);
    (std::f64::consts::LN_2 + ln_fact - two_k * (2.0 * std::f64::consts::PI).ln())
        / std::f64::consts::LN_2
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Smallest Stirling order K whose remainder bound is below `2^-bits` at `x`.
fn stirling_order(x: f64, bits: u32) -> usize {
    let mut k = 1usize;
    loop {
        let kk = k + 1;
        let log2_term = log2_bernoulli_estimate(kk)
            - ((2 * kk) as f64 * (2 * kk - 1) as f64).log2()
            - (2 * kk - 1) as f64 * x.log2();
        if log2_term < -(f64::from(bits)) - 4.0 {
            return k;
        }
        k += 1;
    }
}

/// `Γ(x)` for `x > 0` with relative error below `2^-prec`.
pub fn gamma(x: &BigReal, prec: u32) -> Result<BigReal> {
    if !x.is_positive() {
        return Err(Error::domain(format!("gamma requires x > 0, got {x}")));
    }
    let wp = prec + GUARD_BITS;
    let x = x.with_prec(wp);

    // Shift the argument far enough out that a modest number of Stirling
    // terms suffice; 0.2·wp keeps K around a quarter of wp.
    let x_min = (0.2 * f64::from(wp)).max(12.0);
    let shift = if x.to_f64() >= x_min {
        0
    } else {
        (x_min - x.to_f64()).ceil() as i64
    };
    let mut prod = BigReal::one(wp);
    for i in 0..shift {
        prod *= &x + i;
    }
    let big_x = &x + shift;
    let log_g = ln_gamma_stirling(&big_x, wp)?;
    Ok((log_g.exp() / prod).with_prec(prec))
}

/// Stirling series for `ln Γ(x)`, `x` already large; remainder checked with
/// the exact next Bernoulli number.
fn ln_gamma_stirling(x: &BigReal, wp: u32) -> Result<BigReal> {
    let k = stirling_order(x.to_f64(), wp);
    let bern = bernoulli_even(k + 1);

    let half = BigReal::from_ratio(1, 2, wp);
    let two_pi = BigReal::pi(wp) * 2i64;
    let mut sum = (x - &half) * x.ln() - x + two_pi.ln() * &half;

    let x_sq = x.square();
    let mut x_pow = x.clone(); // x^(2j-1)
    for (j, b) in bern.iter().take(k).enumerate() {
        let j = j as i64 + 1;
        let coeff = BigReal::from_float(rug::Float::with_val(wp, b));
        sum += coeff / ((2 * j) * (2 * j - 1)) / &x_pow;
        x_pow *= &x_sq;
    }

    let next = BigReal::from_float(rug::Float::with_val(wp, &bern[k]));
    let kk = k as i64 + 1;
    let remainder = (next / ((2 * kk) * (2 * kk - 1)) / &x_pow).abs();
    if remainder.log2_abs() > -f64::from(wp) + 2.0 {
        return Err(Error::Precision {
            msg: "Stirling remainder bound not met".into(),
            suggested_bits: wp * 2,
        });
    }
    Ok(sum)
}

/// `Γ(x)` for any real `x` that is not a non-positive integer, via
/// `Γ(x) = Γ(x + m) / (x (x+1) ... (x+m-1))`.
pub(crate) fn gamma_any(x: &BigReal, prec: u32) -> Result<BigReal> {
    if x.is_positive() {
        return gamma(x, prec);
    }
    if x.is_integer() {
        return Err(Error::domain(format!("gamma pole at x = {x}")));
    }
    let m = (-x.to_f64()).floor() as i64 + 1;
    let wp = prec + GUARD_BITS;
    let x = x.with_prec(wp);
    let mut prod = BigReal::one(wp);
    for i in 0..m {
        prod *= &x + i;
    }
    Ok((gamma(&(&x + m), wp)? / prod).with_prec(prec))
}

/// Rising factorial `β (β+1) ... (β+k-1)` as an explicit product.
pub fn pochhammer(beta: &BigReal, k: u64, prec: u32) -> BigReal {
    let beta = beta.with_prec(prec);
    let mut acc = BigReal::one(prec);
    for i in 0..k {
        acc *= &beta + i as i64;
    }
    acc
}
