//! Painlevé V and III viewed through the recurrence coefficients.
//!
//! With `a = k₁ t`, the transformation
//!
//! ```text
//! B_n(t) = (1 + n + (β-3n-2) y + (1+2n-β) y² + t y') / (2 y (y-1))
//! ```
//!
//! sends a solution `y` of P5 with `A = (β-1)²/2, B = -(n+1)²/2, C = 2k₁, D = 0`
//! to `b_n(a)`. Bäcklund maps in `B` move `n` up and down, so the whole table
//! follows from a single classical solution at `n = 0`.
//!
//! Submodules: [`integrate`] (Taylor-series continuation of P5), [`beta1`]
//! (the `β = 1` reduction through P5 with `D = -8`) and [`p3`] (the bridge
//! to Painlevé III).

pub mod beta1;
pub mod integrate;
pub mod p3;

use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::laxchain::initial_b0;
use crate::measures::MeasureSpec;
use crate::mpnum::{rational_to_big, BigReal, GUARD_BITS};
use crate::oracle::{recurrence_from_hankel, RecurrenceTable, Source};
use crate::report::{Cell, CellParams, VerificationReport};

pub use integrate::{p5_integrate, p5_integrate_dense, IntegrateOptions, P5Trajectory};

/// P5 parameters, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P5Params {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl P5Params {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>, c: impl Into<Rational>, d: impl Into<Rational>) -> Self {
        P5Params {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    /// `((β-1)²/2, -(n+1)²/2, 2k₁, 0)`.
    pub fn recurrence(n: i64, beta: &Rational, k1: &Rational) -> Self {
        let bm1 = Rational::from(beta - 1u32);
        let np1 = Rational::from(n + 1);
        P5Params::new(
            Rational::from(bm1.square_ref()) / 2u32,
            -Rational::from(np1.square_ref()) / 2u32,
            Rational::from(k1 * 2u32),
            0,
        )
    }

    /// `(n²/8, -n²/8, 0, -8)`.
    pub fn beta1(n: i64) -> Self {
        let q = Rational::from((n * n, 8));
        P5Params::new(q.clone(), -q, 0, -8)
    }

    pub fn to_big(&self, prec: u32) -> [BigReal; 4] {
        [
            rational_to_big(&self.a, prec),
            rational_to_big(&self.b, prec),
            rational_to_big(&self.c, prec),
            rational_to_big(&self.d, prec),
        ]
    }
}

impl fmt::Display for P5Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(A={}, B={}, C={}, D={})", self.a, self.b, self.c, self.d)
    }
}

/// Exact square root of a non-negative rational that is a perfect square.
pub fn exact_sqrt(q: &Rational) -> Result<Rational> {
    if *q < 0 {
        return Err(Error::domain(format!("square root of negative parameter {q}")));
    }
    let (num, den) = (q.numer(), q.denom());
    let (rn, rd) = (Integer::from(num.sqrt_ref()), Integer::from(den.sqrt_ref()));
    if Integer::from(rn.square_ref()) != *num || Integer::from(rd.square_ref()) != *den {
        return Err(Error::domain(format!("parameter {q} is not a rational square")));
    }
    Ok(Rational::from((rn, rd)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct P5Point {
    pub t: BigReal,
    pub y: BigReal,
    pub yp: BigReal,
}

impl P5Point {
    pub fn new(t: BigReal, y: BigReal, yp: BigReal) -> Self {
        P5Point { t, y, yp }
    }

    pub fn prec(&self) -> u32 {
        self.y.prec()
    }

    /// The same solution in the variable `T = λ t`: `Y(T) = y(T/λ)`.
    pub fn rescaled(&self, lambda: &BigReal) -> P5Point {
        P5Point {
            t: &self.t * lambda,
            y: self.y.clone(),
            yp: &self.yp / lambda,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct P3Point {
    pub z: BigReal,
    pub u: BigReal,
    pub up: BigReal,
}

/// `|x|` must exceed `2^-(prec-8)` times `scale`.
pub(crate) fn nonvanishing(x: &BigReal, scale: &BigReal, what: &str) -> Result<()> {
    let floor = scale.log2_abs().max(0.0) - f64::from(x.prec()) + 8.0;
    if x.is_zero() || !x.is_finite() || x.log2_abs() < floor {
        return Err(Error::domain(format!("{what} vanishes to working precision")));
    }
    Ok(())
}

fn check_not_branch(y: &BigReal) -> Result<()> {
    let one = BigReal::one(y.prec());
    nonvanishing(y, &one, "y")?;
    nonvanishing(&(y - 1i64), &one, "y - 1")
}

/// `y''` from P5:
/// `(1/(2y) + 1/(y-1)) y'² - y'/t + (y-1)²/t² (A y + B/y) + C y/t + D y(y+1)/(y-1)`.
pub fn p5_second_derivative(params: &P5Params, pt: &P5Point) -> Result<BigReal> {
    check_not_branch(&pt.y)?;
    if pt.t.is_zero() {
        return Err(Error::domain("P5 at t = 0"));
    }
    let [a, b, c, d] = params.to_big(pt.prec());
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let ym1 = y - 1i64;
    let mut out = (y.recip() / 2i64 + ym1.recip()) * yp.square() - yp / t
        + ym1.square() / t.square() * (&a * y + &b / y)
        + &c * y / t;
    if !d.is_zero() {
        out += &d * y * (y + 1i64) / &ym1;
    }
    Ok(out)
}

/// Residual of the first-order second-degree equation satisfied by the
/// classical `n = 0` solution:
/// `(y-1)(1 + y((β-1)²y² - (4t+(β-1)²)y - 1)) + 2t(y-1)y' - t²y'²`.
pub fn first_order_residual(beta: &BigReal, pt: &P5Point) -> BigReal {
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let c = (beta - 1i64).square();
    let inner = 1i64 + y * (&c * y.square() - (t * 4i64 + &c) * y - 1i64);
    (y - 1i64) * inner + t * 2i64 * (y - 1i64) * yp - t.square() * yp.square()
}

/// `B_n(t)` from a point of the index-`n` solution.
pub fn bn_from_y(n: i64, beta: &BigReal, pt: &P5Point) -> Result<BigReal> {
    check_not_branch(&pt.y)?;
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let num = (1 + n) + (beta - (3 * n + 2)) * y + ((1 + 2 * n) - beta) * y.square() + t * yp;
    Ok(num / (y * (y - 1i64) * 2i64))
}

/// `b_(n+1)` from the index-`n` point:
/// `(1 + n + (β-3n-4) y + (3+2n-β) y² - t y') / (2 y (y-1))`.
pub fn bn_next_companion(n: i64, beta: &BigReal, pt: &P5Point) -> Result<BigReal> {
    check_not_branch(&pt.y)?;
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let num = (1 + n) + (beta - (3 * n + 4)) * y + ((3 + 2 * n) - beta) * y.square() - t * yp;
    Ok(num / (y * (y - 1i64) * 2i64))
}

/// Inverts [`bn_from_y`] for `y'`.
pub fn yprime_from_b(n: i64, beta: &BigReal, t: &BigReal, y: &BigReal, bn: &BigReal) -> Result<BigReal> {
    if t.is_zero() {
        return Err(Error::domain("yprime_from_b at t = 0"));
    }
    let num = y * (y - 1i64) * 2i64 * bn - (1 + n) - (beta - (3 * n + 2)) * y - ((1 + 2 * n) - beta) * y.square();
    Ok(num / t)
}

fn backlund(pt: &P5Point, n: i64, beta: &BigReal, sign: i64) -> Result<BigReal> {
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let ym1 = y - 1i64;
    if ym1.is_zero() {
        return Err(Error::singular(n, "Bäcklund map at y = 1"));
    }
    let num = t * 4i64 * &ym1 * y.square();
    let inner = &ym1 * (n + 1) + t * yp * sign;
    let den = (beta - 1i64).square() * ym1.square() * y.square() - inner.square();
    let scale = inner.square().abs().max(num.abs());
    if nonvanishing(&den, &scale, "Bäcklund denominator").is_err() {
        return Err(Error::singular(n, "Bäcklund denominator vanishes"));
    }
    Ok(1i64 - num / den)
}

/// `y_(n+1) = 1 - 4t(y-1)y² / ((β-1)²(y-1)²y² - ((n+1)(y-1) + t y')²)`.
pub fn backlund_up(pt: &P5Point, n: i64, beta: &BigReal) -> Result<BigReal> {
    backlund(pt, n, beta, 1)
}

/// `y_(n-1)`: as [`backlund_up`] with `-t y'` in the squared term.
pub fn backlund_down(pt: &P5Point, n: i64, beta: &BigReal) -> Result<BigReal> {
    backlund(pt, n, beta, -1)
}

/// The classical `n = 0` point with `B_0(t0) = b0`.
///
/// Eliminating `y'` between the first-order equation and the `n = 0`
/// transformation leaves a single admissible root,
/// `y = 1 - t/(b0 (b0 + β - 1))`, whatever the lattice.
pub fn seed_classical_y0(t0: &BigReal, beta: &BigReal, b0: &BigReal, prec: u32) -> Result<P5Point> {
    let wp = prec.max(b0.prec());
    let t = t0.with_prec(wp);
    let beta = beta.with_prec(wp);
    let b0 = b0.with_prec(wp);
    let q = &b0 * (&b0 + &beta - 1i64);
    if nonvanishing(&q, &b0, "b0 (b0 + β - 1)").is_err() {
        return Err(Error::singular(0, "no classical seed: b0 (b0 + β - 1) = 0"));
    }
    let y = 1i64 - &t / q;
    let yp = yprime_from_b(0, &beta, &t, &y, &b0)?;
    let pt = P5Point::new(t, y, yp);
    let res = first_order_residual(&beta, &pt);
    let scale = pt.y.abs().max(BigReal::one(wp)).powi(4) * pt.t.abs().max(BigReal::one(wp)).square();
    if !res.is_zero() && res.log2_abs() - scale.log2_abs() > -f64::from(prec) + 16.0 {
        return Err(Error::Precision {
            msg: format!("classical seed misses the first-order equation by {}", res.to_decimal(6)),
            suggested_bits: prec * 2,
        });
    }
    Ok(pt)
}

/// Chain points `y_0..=y_(n_max)` at a fixed `t`, with the `b_n` read off
/// along the way.
#[derive(Clone, Debug)]
pub struct P5Chain {
    pub beta: BigReal,
    pub points: Vec<P5Point>,
    pub b: Vec<BigReal>,
}

impl P5Chain {
    /// `x_(n+1) = a_(n+1)² = t y_n / (y_n - 1)`.
    pub fn x_next(&self, n: usize) -> BigReal {
        let p = &self.points[n];
        &p.t * &p.y / (&p.y - 1i64)
    }
}

/// Extra working bits per chain step.
pub const CHAIN_BITS_PER_STEP: u32 = 16;

/// Builds the chain from the classical seed. Each step uses only chain data:
/// `b_(n+1)` from the companion formula, `y_(n+1)` from [`backlund_up`] and
/// `y'_(n+1)` from [`yprime_from_b`].
pub fn build_chain(t: &BigReal, beta: &BigReal, b0: &BigReal, n_max: usize, prec: u32) -> Result<P5Chain> {
    let wp = prec.max(b0.prec());
    let beta = beta.with_prec(wp);
    let mut pt = seed_classical_y0(t, &beta, b0, wp)?;
    let mut points = Vec::with_capacity(n_max + 1);
    let mut b = vec![bn_from_y(0, &beta, &pt)?];
    for n in 0..n_max as i64 {
        let b_next = bn_next_companion(n, &beta, &pt).map_err(|e| Error::singular(n, e.to_string()))?;
        let y_next = backlund_up(&pt, n, &beta)?;
        let yp_next = yprime_from_b(n + 1, &beta, &pt.t, &y_next, &b_next)?;
        let next = P5Point::new(pt.t.clone(), y_next, yp_next);
        points.push(pt);
        b.push(b_next);
        pt = next;
    }
    points.push(pt);
    Ok(P5Chain { beta, points, b })
}

fn chain_prec(n_max: usize, prec: u32) -> u32 {
    prec + CHAIN_BITS_PER_STEP * n_max as u32 + GUARD_BITS
}

/// Chain output at one `a`: `a_n²` (with `a_0² = 0`), `b_n` and the
/// involution defects `down(up(y_n)) - y_n` for `n < n_max`.
#[derive(Clone, Debug)]
pub struct ChainValues {
    pub a2: Vec<BigReal>,
    pub b: Vec<BigReal>,
    pub involution: Vec<BigReal>,
    /// Set when a pole of some `y_n` sits at `a` and the values come from
    /// the punctured stencil.
    pub punctured: bool,
}

fn chain_values_at(spec: &MeasureSpec, t: &BigReal, n_max: usize, wp: u32) -> Result<ChainValues> {
    let b0 = crate::laxchain::initial_b0_at(spec, t, wp)?;
    let chain = build_chain(t, &spec.beta(wp), &b0, n_max, wp)?;
    let mut a2 = vec![BigReal::zero(wp)];
    let mut involution = Vec::with_capacity(n_max);
    for n in 0..n_max {
        a2.push(chain.x_next(n));
        let back = backlund_down(&chain.points[n + 1], n as i64 + 1, &chain.beta)?;
        involution.push(back - &chain.points[n].y);
    }
    Ok(ChainValues {
        a2,
        b: chain.b,
        involution,
        punctured: false,
    })
}

/// Chain values at `t = a`.
///
/// The Bäcklund step is `0/0` where `y_n` has a pole, although `a_n²` and
/// `b_n` stay analytic there. On such a singularity the values are rebuilt
/// from chains at `a(1 ± δ)`, `a(1 ± 2δ)`, `δ = 2^-(prec/8)`, through
/// `f(0) = (4(f₁ + f₋₁) - (f₂ + f₋₂))/6`, which is exact to `O(δ⁴)`.
pub fn chain_values(spec: &MeasureSpec, n_max: usize, prec: u32) -> Result<ChainValues> {
    let wp = chain_prec(n_max, prec);
    match chain_values_at(spec, &spec.a(wp), n_max, wp) {
        Err(Error::Singularity { .. }) => {}
        other => return other,
    }
    let wp = wp + prec / 2;
    let a = spec.a(wp);
    let delta = BigReal::from_i64(2, wp).powi(-((prec / 8) as i32));
    let mut around = Vec::with_capacity(4);
    for k in [-2i64, -1, 1, 2] {
        let t = &a * (&delta * k + 1i64);
        around.push(chain_values_at(spec, &t, n_max, wp)?);
    }
    let combine = |f: &dyn Fn(&ChainValues) -> &BigReal| {
        ((f(&around[1]) + f(&around[2])) * 4i64 - f(&around[0]) - f(&around[3])) / 6i64
    };
    let a2 = (0..=n_max).map(|n| combine(&|c| &c.a2[n])).collect();
    let b = (0..=n_max).map(|n| combine(&|c| &c.b[n])).collect();
    let involution = (0..n_max)
        .map(|n| {
            around
                .iter()
                .map(|c| c.involution[n].abs())
                .fold(BigReal::zero(wp), BigReal::max)
        })
        .collect();
    Ok(ChainValues {
        a2,
        b,
        involution,
        punctured: true,
    })
}

/// Recurrence table from the P5 chain at `t = a` (`k₁ = 1`).
pub fn recurrence_p5chain(spec: &MeasureSpec, n_max: usize, prec: u32) -> Result<RecurrenceTable> {
    let v = chain_values(spec, n_max, prec)?;
    Ok(table_from_values(spec, &v, n_max, prec))
}

fn table_from_values(spec: &MeasureSpec, v: &ChainValues, n_max: usize, prec: u32) -> RecurrenceTable {
    RecurrenceTable {
        spec: spec.clone(),
        n_max,
        a2: v.a2.iter().map(|x| x.with_prec(prec)).collect(),
        b: v.b.iter().map(|x| x.with_prec(prec)).collect(),
        prec,
        source: Source::P5Chain,
        certified_bits: vec![0; n_max + 1],
    }
}

/// Chain table against the Hankel oracle. Each cell holds
/// `[|Δb_n|, |Δa_n²|, |y_n - down(up(y_n))|]` with tolerance `tol`.
pub fn p5_chain_verify_tol(spec: &MeasureSpec, n_max: usize, prec: u32, tol: &BigReal) -> Result<(VerificationReport, RecurrenceTable)> {
    let v = chain_values(spec, n_max, prec)?;
    let table = table_from_values(spec, &v, n_max, prec);
    let oracle = recurrence_from_hankel(spec, n_max, prec)?;
    let params = CellParams::from(spec);
    let label = if v.punctured { "chain-vs-hankel-punctured" } else { "chain-vs-hankel" };
    let mut report = VerificationReport::new("p5chain", prec);
    for n in 0..=n_max {
        let mut r = vec![&table.b[n] - &oracle.b[n], &table.a2[n] - &oracle.a2[n]];
        if n < n_max {
            r.push(v.involution[n].clone());
        }
        report.push(Cell::new(params.clone(), n as i64, label, &r, tol));
    }
    Ok((report, table))
}

/// [`p5_chain_verify_tol`] with tolerance `10^-20`.
pub fn p5_chain_verify(spec: &MeasureSpec, n_max: usize, prec: u32) -> Result<(VerificationReport, RecurrenceTable)> {
    let tol = BigReal::parse("1e-20", prec)?;
    p5_chain_verify_tol(spec, n_max, prec, &tol)
}

/// Integrates the `n = 0` classical solution from `t0 = a` and compares
/// `B_0(t)` with the Bessel ratio at `a = t` on `points` equally spaced
/// nodes of `(t0, t1]`. Returns `(t, |ΔB_0|)` pairs.
pub fn seed_flow_consistency(spec: &MeasureSpec, t1: &BigReal, points: usize, prec: u32) -> Result<Vec<(BigReal, BigReal)>> {
    let wp = prec + GUARD_BITS;
    let t0 = spec.a(wp);
    let beta = spec.beta(wp);
    let seed = seed_classical_y0(&t0, &beta, &initial_b0(spec, wp)?, wp)?;
    let params = P5Params::recurrence(0, spec.beta_exact(), &Rational::from(1));
    let opts = IntegrateOptions::for_bits(prec + 8);
    let traj = p5_integrate_dense(&params, &seed, &t1.with_prec(wp), &opts, wp)?;
    let mut out = Vec::with_capacity(points);
    for k in 1..=points {
        let t = &t0 + (t1 - &t0) * k as i64 / points as i64;
        let pt = traj.eval(&t)?;
        let b_flow = bn_from_y(0, &beta, &pt)?;
        let b_ratio = crate::laxchain::initial_b0_at(spec, &t, wp)?;
        out.push((t.with_prec(prec), (b_flow - b_ratio).abs().with_prec(prec)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Lattice;

    fn big(s: &str, p: u32) -> BigReal {
        BigReal::parse(s, p).unwrap()
    }

    #[test]
    fn constant_solves_trivial_equation() {
        let params = P5Params::new(0, 0, 0, 0);
        let pt = P5Point::new(big("1.3", 128), big("0.4", 128), BigReal::zero(128));
        assert!(p5_second_derivative(&params, &pt).unwrap().is_zero());
        let bad = P5Point::new(big("1", 128), BigReal::one(128), BigReal::zero(128));
        assert!(p5_second_derivative(&params, &bad).is_err());
    }

    #[test]
    fn parameter_set_is_beta_symmetric() {
        let k1 = Rational::from(1);
        for n in 0..5 {
            let p = P5Params::recurrence(n, &Rational::from((3, 10)), &k1);
            let q = P5Params::recurrence(n, &Rational::from((17, 10)), &k1);
            assert_eq!(p, q);
        }
        assert_eq!(exact_sqrt(&Rational::from((9, 4))).unwrap(), Rational::from((3, 2)));
        assert!(exact_sqrt(&Rational::from(2)).is_err());
        assert!(exact_sqrt(&Rational::from(-1)).is_err());
    }

    #[test]
    fn yprime_round_trip() {
        let p = 192;
        let beta = big("1.5", p);
        let pt = P5Point::new(big("1.1", p), big("-0.7", p), big("0.3", p));
        for n in 0..4 {
            let b = bn_from_y(n, &beta, &pt).unwrap();
            let yp = yprime_from_b(n, &beta, &pt.t, &pt.y, &b).unwrap();
            assert!((yp - &pt.yp).log2_abs() < -180.0);
        }
        // δy' = 2y(y-1) δb / t
        let b = big("0.25", p);
        let db = big("1e-10", p);
        let d = yprime_from_b(2, &beta, &pt.t, &pt.y, &(&b + &db)).unwrap()
            - yprime_from_b(2, &beta, &pt.t, &pt.y, &b).unwrap();
        let want = &pt.y * (&pt.y - 1i64) * 2i64 * &db / &pt.t;
        assert!((d - want).log2_abs() < -150.0);
    }

    #[test]
    fn backlund_rejects_y_one() {
        let p = 128;
        let pt = P5Point::new(BigReal::one(p), BigReal::one(p), BigReal::one(p));
        assert!(backlund_up(&pt, 0, &big("1.5", p)).is_err());
        assert!(backlund_down(&pt, 1, &big("1.5", p)).is_err());
    }

    #[test]
    fn seed_contract() {
        let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None).unwrap();
        let p = 320;
        let b0 = initial_b0(&spec, p).unwrap();
        let pt = seed_classical_y0(&spec.a(p), &spec.beta(p), &b0, p).unwrap();
        let beta = spec.beta(p);
        assert!(first_order_residual(&beta, &pt).abs().log2_abs() < -(p as f64) + 16.0);
        assert!((bn_from_y(0, &beta, &pt).unwrap() - &b0).log2_abs() < -300.0);
    }

    #[test]
    fn chain_matches_oracle_small() {
        let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None).unwrap();
        let (report, table) = p5_chain_verify(&spec, 4, 256).unwrap();
        assert!(report.pass, "{}", report.to_json().unwrap());
        assert_eq!(table.source, Source::P5Chain);
    }
}
