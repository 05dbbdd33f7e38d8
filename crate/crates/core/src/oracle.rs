//! Ground-truth recurrence coefficients from the measure itself.
//!
//! Two independent routes are provided: ratios of Hankel determinants of the
//! moments, and the discretized Stieltjes procedure on the truncated lattice.
//! Both certify their output by recomputing at a higher working precision and
//! comparing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{self, MeasureSpec, MomentVector};
use crate::mpnum::{BigReal, GUARD_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Hankel,
    Stieltjes,
    Recursion,
    P5Chain,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Hankel => "hankel",
            Source::Stieltjes => "stieltjes",
            Source::Recursion => "recursion",
            Source::P5Chain => "p5chain",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hankel" => Ok(Source::Hankel),
            "stieltjes" => Ok(Source::Stieltjes),
            "recursion" | "forward" => Ok(Source::Recursion),
            "p5chain" | "p5" => Ok(Source::P5Chain),
            _ => Err(Error::Invalid(format!("unknown source {s:?}"))),
        }
    }
}

/// `(a_n², b_n)` for `n = 0..=n_max`.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    pub spec: MeasureSpec,
    pub n_max: usize,
    pub a2: Vec<BigReal>,
    pub b: Vec<BigReal>,
    /// Target precision of the entries.
    pub prec: u32,
    pub source: Source,
    /// Estimated number of correct bits per row (min over `a_n²` and `b_n`).
    pub certified_bits: Vec<u32>,
}

impl RecurrenceTable {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Largest `|a2 - other.a2|` and `|b - other.b|` over the common rows.
    pub fn max_abs_diff(&self, other: &RecurrenceTable) -> (BigReal, BigReal) {
        let p = self.prec.max(other.prec);
        let mut da = BigReal::zero(p);
        let mut db = BigReal::zero(p);
        for n in 0..self.len().min(other.len()) {
            da = da.max((&self.a2[n] - &other.a2[n]).abs());
            db = db.max((&self.b[n] - &other.b[n]).abs());
        }
        (da, db)
    }

    /// Rows `n..` removed.
    pub fn truncated(&self, n_max: usize) -> RecurrenceTable {
        let keep = (n_max + 1).min(self.len());
        RecurrenceTable {
            n_max: keep.saturating_sub(1),
            a2: self.a2[..keep].to_vec(),
            b: self.b[..keep].to_vec(),
            certified_bits: self.certified_bits[..keep].to_vec(),
            ..self.clone()
        }
    }
}

/// Correct bits of `x` given a reference `y` computed at higher precision;
/// `b_n` can be close to zero, so it is measured against `max(|y|, 1)`.
fn agreement_bits(x: &BigReal, y: &BigReal, absolute_floor: bool) -> f64 {
    let diff = (x - y).abs();
    if diff.is_zero() {
        return f64::INFINITY;
    }
    let scale = if absolute_floor {
        y.log2_abs().max(0.0)
    } else {
        y.log2_abs()
    };
    scale - diff.log2_abs()
}

/// Compares a table computed at working precision `wp` with one at `wp + 64`.
/// Returns the per-row certified bits, capped at `prec`.
pub(crate) fn certify_pair(lo: &[BigReal], lo_b: &[BigReal], hi: &[BigReal], hi_b: &[BigReal], prec: u32) -> Vec<u32> {
    lo.iter()
        .zip(lo_b)
        .zip(hi.iter().zip(hi_b))
        .map(|((a, b), (ah, bh))| {
            let ba = if ah.is_zero() && a.is_zero() {
                f64::INFINITY
            } else {
                agreement_bits(a, ah, false)
            };
            let bb = agreement_bits(b, bh, true);
            ba.min(bb).max(0.0).min(f64::from(prec)) as u32
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting on
/// the largest available pivot. The input is consumed.
pub fn det_bareiss(mut m: Vec<Vec<BigReal>>, prec: u32) -> BigReal {
    let n = m.len();
    if n == 0 {
        return BigReal::one(prec);
    }
    let mut sign = false;
    let mut prev = BigReal::one(prec);
    for k in 0..n - 1 {
        let pivot_row = (k..n)
            .max_by(|&i, &j| {
                m[i][k]
                    .abs()
                    .partial_cmp(&m[j][k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(k);
        if m[pivot_row][k].is_zero() {
            return BigReal::zero(prec);
        }
        if pivot_row != k {
            m.swap(pivot_row, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// `D_n = det(m_(i+j))_(i,j<n)`, with `D_0 = 1`.
pub fn hankel_det(m: &MomentVector, n: usize) -> Result<BigReal> {
    hankel_det_shifted(m, n, false)
}

/// `D_n` or, with `shift_last`, `D̃_n` whose last column uses `m_(i+n)` in
/// place of `m_(i+n-1)`.
fn hankel_det_shifted(m: &MomentVector, n: usize, shift_last: bool) -> Result<BigReal> {
    if n == 0 {
        return Ok(if shift_last {
            BigReal::zero(m.prec)
        } else {
            BigReal::one(m.prec)
        });
    }
    let needed = if shift_last { 2 * n } else { 2 * n - 1 };
    if m.m.len() < needed {
        return Err(Error::Invalid(format!(
            "Hankel determinant of order {n} needs {needed} moments, have {}",
            m.m.len()
        )));
    }
    let mat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let idx = if shift_last && j == n - 1 { i + j + 1 } else { i + j };
                    m.m[idx].clone()
                })
                .collect()
        })
        .collect();
    Ok(det_bareiss(mat, m.prec))
}

fn hankel_table_at(spec: &MeasureSpec, n_max: usize, wp: u32) -> Result<(Vec<BigReal>, Vec<BigReal>)> {
    let mv = measures::moments(spec, 2 * n_max + 2, wp)?;
    let d: Vec<BigReal> = (0..=n_max + 1)
        .map(|n| hankel_det(&mv, n))
        .collect::<Result<_>>()?;
    let dt: Vec<BigReal> = (0..=n_max + 1)
        .map(|n| hankel_det_shifted(&mv, n, true))
        .collect::<Result<_>>()?;
    let mut a2 = Vec::with_capacity(n_max + 1);
    let mut b = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if d[n + 1].is_zero() || !d[n + 1].is_positive() {
            return Err(Error::Precision {
                msg: format!("Hankel determinant D_{} not positive at {wp} bits", n + 1),
                suggested_bits: wp * 2,
            });
        }
        if n == 0 {
            a2.push(BigReal::zero(wp));
        } else {
            a2.push(&d[n - 1] * &d[n + 1] / d[n].square());
        }
        b.push(&dt[n + 1] / &d[n + 1] - &dt[n] / &d[n]);
    }
    Ok((a2, b))
}

/// Upper bound on the working precision any certified oracle run may use.
const MAX_WORK_PREC: u32 = 1 << 16;

/// Runs `compute` at `wp` and `wp + 64` until the two agree to `prec` bits on
/// every row, doubling `wp` on failure.
fn certified<F>(prec: u32, mut wp: u32, mut compute: F) -> Result<(Vec<BigReal>, Vec<BigReal>, Vec<u32>)>
where
    F: FnMut(u32) -> Result<(Vec<BigReal>, Vec<BigReal>)>,
{
    loop {
        let attempt = compute(wp).and_then(|lo| compute(wp + 64).map(|hi| (lo, hi)));
        match attempt {
            Ok(((a2, b), (a2h, bh))) => {
                let cert = certify_pair(&a2, &b, &a2h, &bh, prec);
                if cert.iter().all(|&c| c >= prec) {
                    let a2 = a2h.into_iter().map(|x| x.with_prec(prec)).collect();
                    let b = bh.into_iter().map(|x| x.with_prec(prec)).collect();
                    return Ok((a2, b, cert));
                }
            }
            Err(Error::Precision { .. }) => {}
            Err(e) => return Err(e),
        }
        wp *= 2;
        if wp > MAX_WORK_PREC {
            return Err(Error::Precision {
                msg: "certificate not reached within the precision cap".into(),
                suggested_bits: wp,
            });
        }
    }
}

/// Recurrence coefficients as Hankel determinant ratios:
/// `a_n² = D_(n-1) D_(n+1) / D_n²`, `b_n = D̃_(n+1)/D_(n+1) - D̃_n/D_n`.
///
/// Starts at `prec + 12·n_max` working bits and doubles until the dual-precision
/// check certifies every entry to `prec` bits.
pub fn recurrence_from_hankel(spec: &MeasureSpec, n_max: usize, prec: u32) -> Result<RecurrenceTable> {
    let wp = prec + 12 * n_max as u32 + GUARD_BITS;
    let (a2, b, certified_bits) = certified(prec, wp, |p| hankel_table_at(spec, n_max, p))?;
    Ok(RecurrenceTable {
        spec: spec.clone(),
        n_max,
        a2,
        b,
        prec,
        source: Source::Hankel,
        certified_bits,
    })
}

/// Nodes and masses of the measure restricted to the first `k_count` indices
/// of every component.
fn truncated_atoms(spec: &MeasureSpec, k_count: usize, wp: u32) -> Result<(Vec<BigReal>, Vec<BigReal>, Vec<measures::Component>)> {
    let mut nodes = Vec::new();
    let mut masses = Vec::new();
    let mut rest = Vec::new();
    for mut comp in measures::components(spec, wp)? {
        for _ in 0..k_count {
            nodes.push(comp.node().clone());
            masses.push(comp.mass().clone());
            comp.advance();
        }
        rest.push(comp);
    }
    Ok((nodes, masses, rest))
}

/// Discretized Stieltjes procedure on `(nodes, masses)`; also returns the
/// norms `<P_n, P_n>`.
fn stieltjes_on(nodes: &[BigReal], masses: &[BigReal], n_max: usize, wp: u32) -> (Vec<BigReal>, Vec<BigReal>, Vec<BigReal>) {
    let len = nodes.len();
    let mut p_prev = vec![BigReal::zero(wp); len];
    let mut p_cur = vec![BigReal::one(wp); len];
    let mut a2 = Vec::with_capacity(n_max + 1);
    let mut b = Vec::with_capacity(n_max + 1);
    let mut norms: Vec<BigReal> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut norm = BigReal::zero(wp);
        let mut moment_x = BigReal::zero(wp);
        for i in 0..len {
            let wp2 = &masses[i] * p_cur[i].square();
            moment_x += &wp2 * &nodes[i];
            norm += wp2;
        }
        let bn = &moment_x / &norm;
        let a2n = if n == 0 {
            BigReal::zero(wp)
        } else {
            &norm / &norms[n - 1]
        };
        if n < n_max {
            let next: Vec<BigReal> = (0..len)
                .map(|i| (&nodes[i] - &bn) * &p_cur[i] - &a2n * &p_prev[i])
                .collect();
            p_prev = std::mem::replace(&mut p_cur, next);
        }
        a2.push(a2n);
        b.push(bn);
        norms.push(norm);
    }
    (a2, b, norms)
}

/// Bound on `Σ_(k ≥ K) (2 x_k)^deg mass_k` for the omitted atoms of every
/// component, valid once the term ratio is below one.
fn omitted_mass_bound(rest: &mut [measures::Component], deg: i32, wp: u32) -> Option<BigReal> {
    let mut total = BigReal::zero(wp);
    for comp in rest.iter_mut() {
        let x = comp.node().clone();
        if x < 1i64 {
            return None;
        }
        let ratio = comp.mass_ratio() * ((&x + 1i64) / &x).powi(deg);
        if ratio >= 1i64 {
            return None;
        }
        let term = (&x * 2i64).powi(deg) * comp.mass();
        total += term / (1i64 - ratio);
    }
    Some(total)
}

fn stieltjes_table_at(spec: &MeasureSpec, n_max: usize, k_start: usize, wp: u32) -> Result<(Vec<BigReal>, Vec<BigReal>)> {
    let mut k_count = k_start;
    loop {
        let (nodes, masses, mut rest) = truncated_atoms(spec, k_count, wp)?;
        let (a2, b, norms) = stieltjes_on(&nodes, &masses, n_max, wp);

        // Zeros of P_n lie inside the Gershgorin discs of the Jacobi matrix;
        // beyond twice that radius |P_n(x)| <= (2x)^n.
        let radius = (0..=n_max)
            .map(|n| {
                let off = a2[n].abs().sqrt()
                    + a2.get(n + 1).map(|x| x.abs().sqrt()).unwrap_or_else(|| BigReal::zero(wp));
                b[n].abs() + off
            })
            .fold(BigReal::zero(wp), BigReal::max);
        let min_norm = norms.iter().cloned().fold(norms[0].clone(), |acc, x| if x < acc { x } else { acc });
        let first_omitted = rest
            .iter()
            .map(|c| c.node().clone())
            .fold(None::<BigReal>, |acc, x| match acc {
                Some(a) if a < x => Some(a),
                _ => Some(x),
            });
        let beyond = first_omitted.map(|x| x >= radius).unwrap_or(false);
        if beyond {
            if let Some(bound) = omitted_mass_bound(&mut rest, 2 * n_max as i32 + 1, wp) {
                if bound.log2_abs() - min_norm.log2_abs() < -(f64::from(wp)) {
                    return Ok((a2, b));
                }
            }
        }
        k_count *= 2;
        if k_count > 1 << 22 {
            return Err(Error::Precision {
                msg: format!("Stieltjes truncation not certified; try K > {k_count}"),
                suggested_bits: wp,
            });
        }
    }
}

/// Recurrence coefficients by the Stieltjes procedure with inner product
/// `<f, g> = Σ f(x_k) g(x_k) mass_k` over the truncated lattice. The truncation
/// starts at `K = max(50, 10 n_max + 20 √a)` indices per component and doubles
/// until the omitted mass is certified negligible.
pub fn recurrence_from_stieltjes(spec: &MeasureSpec, n_max: usize, prec: u32) -> Result<RecurrenceTable> {
    let sqrt_a = spec.a(64).sqrt().to_f64();
    let k_start = (50f64).max(10.0 * n_max as f64 + 20.0 * sqrt_a).ceil() as usize;
    let wp = prec + GUARD_BITS + 2 * n_max as u32;
    let (a2, b, certified_bits) = certified(prec, wp, |p| stieltjes_table_at(spec, n_max, k_start, p))?;
    Ok(RecurrenceTable {
        spec: spec.clone(),
        n_max,
        a2,
        b,
        prec,
        source: Source::Stieltjes,
        certified_bits,
    })
}
