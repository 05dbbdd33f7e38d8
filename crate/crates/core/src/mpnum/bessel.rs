//! Modified Bessel function of the first kind, `I_ν(z)` for real `ν` and `z > 0`.

use super::gamma::gamma_any;
use super::{BigReal, SeriesSum, GUARD_BITS};
use crate::error::{Error, Result};

/// Ascending series `Σ_k (z/2)^(ν+2k) / (k! Γ(ν+k+1))` with a certified tail.
///
/// Once the term ratio `r_k = (z/2)^2 / ((k+1)(ν+k+1))` is below one (and
/// hence decreasing), the omitted tail is at most `|t_k| r_k / (1 - r_k)`.
/// Summation stops when that bound drops below `2^-(prec+16)` relative to
/// the partial sum.
pub fn bessel_i_series(nu: &BigReal, z: &BigReal, prec: u32) -> Result<SeriesSum> {
    if !z.is_positive() {
        return Err(Error::domain(format!("bessel_i requires z > 0, got {z}")));
    }
    if nu.is_integer() && nu.is_negative() {
        // Γ(ν+k+1) has poles for k = 0..-ν-1.
        return Err(Error::domain(format!(
            "gamma pole in Bessel series at index k = 0 (nu = {nu})"
        )));
    }
    let wp = prec + GUARD_BITS;
    let nu = nu.with_prec(wp);
    let half_z = z.with_prec(wp) / 2i64;
    let q = half_z.square();

    let mut term = half_z.pow(&nu) / gamma_any(&(&nu + 1i64), wp)?;
    let mut partial = term.clone();
    let mut max_abs = term.abs();
    let eps_log2 = -(f64::from(prec) + 16.0);

    let mut k: i64 = 0;
    loop {
        let denom_nu = &nu + (k + 1);
        let ratio = &q / (&denom_nu * (k + 1));
        let next = &term * &ratio;

        if denom_nu.is_positive() && ratio < 1i64 {
            let tail = (&next.abs()) / (1i64 - &ratio);
            let rel = tail.log2_abs() - partial.log2_abs();
            if rel < eps_log2 || next.is_zero() {
                partial += &next;
                let cancel = max_abs.log2_abs() - partial.log2_abs();
                if cancel > f64::from(GUARD_BITS) - 8.0 {
                    return Err(Error::Precision {
                        msg: format!("Bessel series cancellation of {cancel:.0} bits"),
                        suggested_bits: prec + cancel.ceil() as u32 + GUARD_BITS,
                    });
                }
                return Ok(SeriesSum {
                    partial: partial.with_prec(prec),
                    terms_used: (k + 2) as u64,
                    tail_bound: (tail * &ratio).with_prec(prec),
                });
            }
        }
        partial += &next;
        let a = next.abs();
        if a > max_abs {
            max_abs = a;
        }
        term = next;
        k += 1;
        if k > 1_000_000 {
            return Err(Error::Precision {
                msg: "Bessel series did not terminate".into(),
                suggested_bits: prec,
            });
        }
    }
}

/// `I_ν(z)` to `2^-prec` relative accuracy.
///
/// Orders `ν > -1` use the series directly. Non-integer `ν <= -1` recur
/// downward with `I_(μ-1) = I_(μ+1) + (2μ/z) I_μ` from two orders in `(-1, 1)`.
/// Negative integer orders use `I_(-n) = I_n`.
pub fn bessel_i(nu: &BigReal, z: &BigReal, prec: u32) -> Result<BigReal> {
    if nu > &BigReal::from_i64(-1, 64) {
        return Ok(bessel_i_series(nu, z, prec)?.partial);
    }
    if nu.is_integer() {
        return bessel_i(&-nu, z, prec);
    }
    // Number of downward steps, and a precision budget that tracks them.
    let steps = (-1.0 - nu.to_f64()).floor() as i64 + 1;
    let mut wp = prec + GUARD_BITS + 8 * steps as u32;
    loop {
        let base = nu.with_prec(wp) + steps;
        let mut upper = bessel_i_series(&(&base + 1i64), z, wp)?.partial;
        let mut lower = bessel_i_series(&base, z, wp)?.partial;
        let z = z.with_prec(wp);
        let mut max_abs = upper.abs().max(lower.abs());
        let mut mu = base.clone();
        for _ in 0..steps {
            let next = &upper + &mu * 2i64 / &z * &lower;
            let shift = (&mu * 2i64 / &z * &lower).abs();
            if shift > max_abs {
                max_abs = shift;
            }
            upper = lower;
            lower = next;
            mu -= 1i64;
        }
        let lost = max_abs.log2_abs() - lower.log2_abs();
        if lost < f64::from(wp - prec) - 16.0 {
            return Ok(lower.with_prec(prec));
        }
        wp += lost.ceil() as u32 + GUARD_BITS;
    }
}
