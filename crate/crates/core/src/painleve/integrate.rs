//! Taylor-series continuation of P5.
//!
//! P5 is used in the polynomial form
//!
//! ```text
//! 2t²y(y-1) y'' = t²(3y-1) y'² - 2t y(y-1) y' + 2(y-1)³(A y² + B)
//!                 + 2C t y²(y-1) + 2D t² y²(y+1)
//! ```
//!
//! whose Taylor coefficients follow from Cauchy products computed one order
//! at a time. Each step keeps its coefficient vector, which doubles as the
//! dense-output interpolant on that step.

use super::{P5Params, P5Point};
use crate::error::{Error, Result};
use crate::mpnum::{BigReal, GUARD_BITS};

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    /// Local error target `2^-tol_bits` relative to `max(1, |y|)`.
    pub tol_bits: u32,
    /// Series order; `None` picks one from `tol_bits`.
    pub order: Option<usize>,
    pub max_steps: usize,
}

impl IntegrateOptions {
    pub fn for_bits(tol_bits: u32) -> Self {
        IntegrateOptions {
            tol_bits,
            order: None,
            max_steps: 10_000,
        }
    }

    /// With step `ρ/e²` the terms decay like `e^-2k`, so `tol_bits ln2 / 2`
    /// terms reach the target.
    fn order(&self) -> usize {
        self.order
            .unwrap_or_else(|| (0.5 * f64::from(self.tol_bits) * std::f64::consts::LN_2).ceil() as usize + 4)
            .max(6)
    }
}

/// One accepted step: `y(t0 + s) = Σ c_k s^k` for `s` between 0 and `h`.
#[derive(Clone, Debug)]
pub struct Segment {
    pub t0: BigReal,
    pub h: BigReal,
    pub coeffs: Vec<BigReal>,
}

impl Segment {
    fn contains(&self, t: &BigReal) -> bool {
        let s = t - &self.t0;
        if self.h.is_negative() {
            s <= 0i64 && s >= self.h
        } else {
            s >= 0i64 && s <= self.h
        }
    }

    /// `(y, y')` at `t0 + s` by Horner.
    pub fn eval_at(&self, s: &BigReal) -> (BigReal, BigReal) {
        let p = self.coeffs[0].prec();
        let mut y = BigReal::zero(p);
        let mut yp = BigReal::zero(p);
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            y = y * s + c;
            if k > 0 {
                yp = yp * s + c * k as i64;
            }
        }
        (y, yp)
    }
}

/// Integrated solution with dense output.
#[derive(Clone, Debug)]
pub struct P5Trajectory {
    pub params: P5Params,
    pub start: P5Point,
    pub end: P5Point,
    pub segments: Vec<Segment>,
}

impl P5Trajectory {
    /// `(t, y(t), y'(t))` for `t` on the integrated interval.
    pub fn eval(&self, t: &BigReal) -> Result<P5Point> {
        if *t == self.start.t {
            return Ok(self.start.clone());
        }
        let seg = self
            .segments
            .iter()
            .find(|s| s.contains(t))
            .ok_or_else(|| Error::Invalid(format!("t = {} outside the integrated range", t.to_decimal(20))))?;
        let (y, yp) = seg.eval_at(&(t - &seg.t0));
        Ok(P5Point::new(t.clone(), y, yp))
    }
}

fn cauchy(a: &[BigReal], b: &[BigReal], k: usize, prec: u32) -> BigReal {
    let mut acc = BigReal::zero(prec);
    for j in 0..=k {
        acc += &a[j] * &b[k - j];
    }
    acc
}

/// Coefficient `k` of `(t0 + s)·f` and `(t0 + s)²·f`.
fn times_t(f: &[BigReal], k: usize, t0: &BigReal) -> BigReal {
    let mut v = t0 * &f[k];
    if k >= 1 {
        v += &f[k - 1];
    }
    v
}

fn times_t2(f: &[BigReal], k: usize, t0: &BigReal, t0sq: &BigReal) -> BigReal {
    let mut v = t0sq * &f[k];
    if k >= 1 {
        v += t0 * 2i64 * &f[k - 1];
    }
    if k >= 2 {
        v += &f[k - 2];
    }
    v
}

/// Taylor coefficients `y_0..=y_order` of the solution through `pt`.
pub fn taylor_coefficients(params: &P5Params, pt: &P5Point, order: usize, wp: u32) -> Result<Vec<BigReal>> {
    let [ca, cb, cc, cd] = params.to_big(wp);
    let t0 = pt.t.with_prec(wp);
    let t0sq = t0.square();
    let zero = BigReal::zero(wp);
    let n = order + 1;
    let mut y = vec![zero.clone(); n + 1];
    y[0] = pt.y.with_prec(wp);
    y[1] = pt.yp.with_prec(wp);

    let mut ym1 = Vec::with_capacity(n);
    let mut yp = Vec::with_capacity(n);
    let mut p1 = Vec::with_capacity(n); // y(y-1)
    let mut yp2 = Vec::with_capacity(n); // y'²
    let mut q3 = Vec::with_capacity(n); // 3y-1
    let mut u = Vec::with_capacity(n); // (3y-1) y'²
    let mut v = Vec::with_capacity(n); // y(y-1) y'
    let mut s2 = Vec::with_capacity(n); // (y-1)²
    let mut s3 = Vec::with_capacity(n); // (y-1)³
    let mut ysq = Vec::with_capacity(n); // y²
    let mut w = Vec::with_capacity(n); // A y² + B
    let mut term3 = Vec::with_capacity(n); // (y-1)³(A y² + B)
    let mut x = Vec::with_capacity(n); // y²(y-1)
    let mut yp1 = Vec::with_capacity(n); // y+1
    let mut z = Vec::with_capacity(n); // y²(y+1)
    let mut lead = Vec::with_capacity(n); // 2t² y(y-1)
    let mut ypp = Vec::with_capacity(n);

    for k in 0..order.saturating_sub(1) {
        let delta = |c: i64| if k == 0 { BigReal::from_i64(c, wp) } else { zero.clone() };
        ym1.push(&y[k] - delta(1));
        yp1.push(&y[k] + delta(1));
        yp.push(&y[k + 1] * (k as i64 + 1));
        q3.push(&y[k] * 3i64 - delta(1));
        p1.push(cauchy(&y, &ym1, k, wp));
        yp2.push(cauchy(&yp, &yp, k, wp));
        u.push(cauchy(&q3, &yp2, k, wp));
        v.push(cauchy(&p1, &yp, k, wp));
        s2.push(cauchy(&ym1, &ym1, k, wp));
        s3.push(cauchy(&s2, &ym1, k, wp));
        ysq.push(cauchy(&y, &y, k, wp));
        w.push(&ca * &ysq[k] + if k == 0 { cb.clone() } else { zero.clone() });
        term3.push(cauchy(&s3, &w, k, wp));
        x.push(cauchy(&ysq, &ym1, k, wp));
        z.push(cauchy(&ysq, &yp1, k, wp));
        lead.push(times_t2(&p1, k, &t0, &t0sq) * 2i64);

        let mut rhs = times_t2(&u, k, &t0, &t0sq) - times_t(&v, k, &t0) * 2i64 + &term3[k] * 2i64;
        if !cc.is_zero() {
            rhs += &cc * 2i64 * times_t(&x, k, &t0);
        }
        if !cd.is_zero() {
            rhs += &cd * 2i64 * times_t2(&z, k, &t0, &t0sq);
        }
        if k == 0 && lead[0].is_zero() {
            return Err(Error::domain("P5 leading coefficient 2t²y(y-1) vanishes"));
        }
        for j in 1..=k {
            rhs -= &lead[j] * &ypp[k - j];
        }
        let next = rhs / &lead[0];
        y[k + 2] = &next / ((k as i64 + 1) * (k as i64 + 2));
        ypp.push(next);
    }
    y.truncate(order + 1);
    Ok(y)
}

/// Radius of convergence estimated from the last nonzero coefficients.
fn radius_estimate(c: &[BigReal]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for k in (c.len().saturating_sub(4)..c.len()).rev() {
        if k == 0 || c[k].is_zero() {
            continue;
        }
        let r = (-c[k].log2_abs() / k as f64).exp2();
        best = Some(best.map_or(r, |b: f64| b.min(r)));
    }
    best
}

/// Integrates from `start` to `t1` and returns the end point.
pub fn p5_integrate(params: &P5Params, start: &P5Point, t1: &BigReal, prec: u32) -> Result<P5Point> {
    let opts = IntegrateOptions::for_bits(prec);
    Ok(p5_integrate_dense(params, start, t1, &opts, prec + GUARD_BITS)?.end)
}

/// Integrates from `start` to `t1` keeping every step for dense output.
///
/// Fails with [`Error::Integration`] when the step collapses (a pole or a
/// branch point of the equation lies close to the path), when `y` comes
/// within `10·2^-tol_bits` of 0 or 1, or when `t` would reach 0.
pub fn p5_integrate_dense(params: &P5Params, start: &P5Point, t1: &BigReal, opts: &IntegrateOptions, wp: u32) -> Result<P5Trajectory> {
    let order = opts.order();
    let t1 = t1.with_prec(wp);
    let mut cur = P5Point::new(start.t.with_prec(wp), start.y.with_prec(wp), start.yp.with_prec(wp));
    if (t1.is_positive() && !cur.t.is_positive()) || (t1.is_negative() && !cur.t.is_negative()) || t1.is_zero() {
        return Err(Error::domain("P5 integration path must not cross t = 0"));
    }
    let forward = t1 >= cur.t;
    let mut segments = Vec::new();
    let tol_log2 = -f64::from(opts.tol_bits);
    let near = (10f64).log2() + tol_log2;
    let fail = |t: &BigReal, msg: String| Error::Integration {
        last_t: t.to_decimal(20),
        msg,
    };

    while cur.t != t1 {
        if segments.len() >= opts.max_steps {
            return Err(fail(&cur.t, "step limit reached".into()));
        }
        if cur.y.log2_abs() < near || (&cur.y - 1i64).log2_abs() < near {
            return Err(fail(&cur.t, "solution approaches y = 0 or y = 1".into()));
        }
        let coeffs = taylor_coefficients(params, &cur, order, wp).map_err(|e| fail(&cur.t, e.to_string()))?;
        let rho = radius_estimate(&coeffs).unwrap_or(f64::INFINITY);
        let remaining = (&t1 - &cur.t).abs();
        let mut h = if rho.is_finite() {
            BigReal::from_f64(rho / std::f64::consts::E.powi(2), wp)
        } else {
            remaining.clone()
        };
        if h > remaining {
            h = remaining.clone();
        }
        // Shrink until the last two terms meet the local tolerance.
        let scale = cur.y.abs().max(BigReal::one(wp)).log2_abs();
        let mut accepted = false;
        for _ in 0..60 {
            let tail = (&coeffs[order - 1] * h.powi(order as i32 - 1)).abs() + (&coeffs[order] * h.powi(order as i32)).abs();
            if tail.is_zero() || tail.log2_abs() - scale < tol_log2 - 4.0 {
                accepted = true;
                break;
            }
            h /= 2i64;
        }
        let t_mag = cur.t.abs().log2_abs();
        if !accepted || h.log2_abs() < t_mag - 40.0 {
            return Err(fail(&cur.t, format!("step size collapsed (radius estimate {rho:.3e})")));
        }
        let signed_h = if forward { h.clone() } else { -h.clone() };
        let seg = Segment {
            t0: cur.t.clone(),
            h: signed_h.clone(),
            coeffs,
        };
        let (y, yp) = seg.eval_at(&signed_h);
        let t_next = if h == remaining { t1.clone() } else { &cur.t + &signed_h };
        segments.push(seg);
        cur = P5Point::new(t_next, y, yp);
    }
    Ok(P5Trajectory {
        params: params.clone(),
        start: start.clone(),
        end: cur,
        segments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::painleve::p5_second_derivative;

    fn big(s: &str, p: u32) -> BigReal {
        BigReal::parse(s, p).unwrap()
    }

    #[test]
    fn second_coefficient_matches_equation() {
        let p = 192;
        let params = P5Params::new(1, (-9, 2), 2, 0);
        let pt = P5Point::new(big("1.2", p), big("-0.4", p), big("0.7", p));
        let c = taylor_coefficients(&params, &pt, 10, p).unwrap();
        let ypp = p5_second_derivative(&params, &pt).unwrap();
        assert!((&c[2] * 2i64 - ypp).log2_abs() < -170.0);
    }

    #[test]
    fn zero_length_returns_start() {
        let p = 128;
        let params = P5Params::new(0, 0, 2, 0);
        let pt = P5Point::new(big("1", p), big("-0.5", p), big("0.1", p));
        let end = p5_integrate(&params, &pt, &pt.t, p).unwrap();
        assert_eq!(end.y, pt.y.with_prec(p + GUARD_BITS));
        assert_eq!(end.yp, pt.yp.with_prec(p + GUARD_BITS));
    }

    #[test]
    fn constant_solution_is_preserved() {
        // A = B = C = D = 0 admits every constant.
        let p = 128;
        let params = P5Params::new(0, 0, 0, 0);
        let pt = P5Point::new(big("1", p), big("0.3", p), BigReal::zero(p));
        let end = p5_integrate(&params, &pt, &big("2", p), p).unwrap();
        assert!((end.y - &pt.y).abs() < 1e-30);
    }

    #[test]
    fn branch_point_start_is_rejected() {
        let p = 128;
        let params = P5Params::new(0, 0, 2, 0);
        let pt = P5Point::new(big("1", p), BigReal::one(p), BigReal::zero(p));
        assert!(matches!(
            p5_integrate(&params, &pt, &big("1.5", p), p),
            Err(Error::Integration { .. })
        ));
    }
}
