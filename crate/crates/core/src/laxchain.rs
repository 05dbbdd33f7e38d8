//! The discrete system for `(a_n², b_n)` and its Bessel-ratio initial values.
//!
//! With `x_n = a_n²` the system reads
//!
//! ```text
//! b_n + b_(n-1) - n + β = a n / x_n                         (n >= 1)
//! (x_(n+1) - a)(x_n - a) = a (b_n - n)(b_n - n + β - 1)     (n >= 0)
//! ```
//!
//! and is solved forward from `x_0 = 0`. The forward direction is unstable,
//! so [`recurrence_forward`] spends extra working bits and the oracle tables
//! remain the accuracy authority.

use crate::error::{Error, Result};
use crate::measures::{Lattice, MeasureSpec};
use crate::mpnum::{bessel_i, BigReal, GUARD_BITS};
use crate::oracle::{RecurrenceTable, Source};
use crate::report::{Cell, CellParams, VerificationReport};

#[derive(Clone, Debug)]
pub struct DiscreteState {
    pub n: usize,
    pub x_n: BigReal,
    pub b_n: BigReal,
    /// `None` at `n = 0`.
    pub b_nm1: Option<BigReal>,
}

impl DiscreteState {
    pub fn initial(b0: BigReal) -> Self {
        DiscreteState {
            n: 0,
            x_n: BigReal::zero(b0.prec()),
            b_n: b0,
            b_nm1: None,
        }
    }
}

/// `b_0` as a Bessel ratio at `z = 2√a`:
/// `√a I_β/I_(β-1)` on N, `√a I_(-β)/I_(1-β)` on the shifted lattice and
/// `√a (I_β + τ I_(-β)) / (I_(β-1) + τ I_(1-β))` on the bi-lattice.
pub fn initial_b0(spec: &MeasureSpec, prec: u32) -> Result<BigReal> {
    initial_b0_at(spec, &spec.a(prec + GUARD_BITS), prec)
}

/// [`initial_b0`] with `a` replaced by an arbitrary positive `a`.
pub fn initial_b0_at(spec: &MeasureSpec, a: &BigReal, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD_BITS;
    let a = a.with_prec(wp);
    let (num, den) = bessel_pair(spec, &a, wp)?;
    finish_ratio(&a, num, den, prec)
}

fn finish_ratio(a: &BigReal, num: BigReal, den: BigReal, prec: u32) -> Result<BigReal> {
    if den.is_zero() || den.log2_abs() < num.log2_abs() - f64::from(prec) {
        return Err(Error::domain(format!(
            "b0 denominator vanishes at a = {}",
            a.to_decimal(20)
        )));
    }
    Ok((a.sqrt() * num / den).with_prec(prec))
}

/// Numerator and denominator of the `b_0` ratio (without `√a`).
pub(crate) fn bessel_pair(spec: &MeasureSpec, a: &BigReal, wp: u32) -> Result<(BigReal, BigReal)> {
    let z = a.sqrt() * 2i64;
    let beta = spec.beta(wp);
    let n_part = || -> Result<(BigReal, BigReal)> {
        Ok((bessel_i(&beta, &z, wp)?, bessel_i(&(&beta - 1i64), &z, wp)?))
    };
    let s_part = || -> Result<(BigReal, BigReal)> {
        Ok((bessel_i(&-&beta, &z, wp)?, bessel_i(&(1i64 - &beta), &z, wp)?))
    };
    match spec.lattice() {
        Lattice::N => n_part(),
        Lattice::Shifted => s_part(),
        Lattice::BiLattice => {
            let tau = spec.tau(wp).expect("bi-lattice spec carries tau");
            let (n_num, n_den) = n_part()?;
            let (s_num, s_den) = s_part()?;
            Ok((n_num + &tau * s_num, n_den + &tau * s_den))
        }
    }
}

/// One forward step `n -> n+1`:
/// `x_(n+1) = a (a + n(β-n-1) + (1+2n-β-b_n) b_n - x_n) / (a - x_n)` and
/// `b_(n+1) = a(n+1)/x_(n+1) - b_n + (n+1) - β`.
///
/// Fails when `|x_n - a| < 2^(-prec/2) a` or `x_(n+1)` vanishes, with `prec`
/// the precision of `state`.
pub fn step(a: &BigReal, beta: &BigReal, state: &DiscreteState) -> Result<DiscreteState> {
    let p = state.x_n.prec();
    let n = state.n as i64;
    let half = -(f64::from(p) / 2.0);
    let gap = a - &state.x_n;
    if gap.is_zero() || gap.log2_abs() - a.log2_abs() < half {
        return Err(Error::singular(n, "x_n = a to working precision"));
    }
    let b = &state.b_n;
    let inner = a + (beta - (n + 1)) * n + ((1 + 2 * n) - beta - b) * b - &state.x_n;
    let x_next = a * inner / &gap;
    if x_next.is_zero() || x_next.log2_abs() - a.log2_abs() < half {
        return Err(Error::singular(n + 1, "x_(n+1) vanishes"));
    }
    let b_next = a * (n + 1) / &x_next - b + (n + 1) - beta;
    Ok(DiscreteState {
        n: state.n + 1,
        x_n: x_next,
        b_n: b_next,
        b_nm1: Some(b.clone()),
    })
}

/// Extra working bits per recursion step.
pub const FORWARD_BITS_PER_STEP: u32 = 40;

/// Table produced by iterating [`step`] from `(x_0 = 0, b_0)`, working at
/// `prec + 40 n_max` bits. The result is not certified against the oracle.
pub fn recurrence_forward(spec: &MeasureSpec, n_max: usize, prec: u32) -> Result<RecurrenceTable> {
    let wp = prec + FORWARD_BITS_PER_STEP * n_max as u32 + GUARD_BITS;
    let b0 = initial_b0(spec, wp)?;
    forward_from(spec, b0, n_max, prec)
}

/// Forward recursion from a given `b_0`, at the precision of `b0`.
pub fn forward_from(spec: &MeasureSpec, b0: BigReal, n_max: usize, prec: u32) -> Result<RecurrenceTable> {
    let wp = b0.prec();
    let a = spec.a(wp);
    let beta = spec.beta(wp);
    let mut state = DiscreteState::initial(b0);
    let mut a2 = vec![state.x_n.clone()];
    let mut b = vec![state.b_n.clone()];
    for _ in 0..n_max {
        state = step(&a, &beta, &state)?;
        a2.push(state.x_n.clone());
        b.push(state.b_n.clone());
    }
    Ok(RecurrenceTable {
        spec: spec.clone(),
        n_max,
        a2: a2.into_iter().map(|x| x.with_prec(prec)).collect(),
        b: b.into_iter().map(|x| x.with_prec(prec)).collect(),
        prec,
        source: Source::Recursion,
        certified_bits: vec![0; n_max + 1],
    })
}

/// Residuals at row `n`: `[discrete1, discrete2]`, with `discrete1` omitted at
/// `n = 0` and `discrete2` omitted at the last row.
pub fn discrete_residuals(table: &RecurrenceTable, n: usize) -> Vec<BigReal> {
    let p = table.prec;
    let a = table.spec.a(p);
    let beta = table.spec.beta(p);
    let ni = n as i64;
    let mut out = Vec::with_capacity(2);
    if n >= 1 {
        let lhs = &table.b[n] + &table.b[n - 1] - ni + &beta;
        out.push(lhs - &a * ni / &table.a2[n]);
    }
    if n + 1 < table.len() {
        let lhs = (&table.a2[n + 1] - &a) * (&table.a2[n] - &a);
        let bn = &table.b[n] - ni;
        let rhs = &a * &bn * (&bn + &beta - 1i64);
        out.push(lhs - rhs);
    }
    out
}

/// Per-row residual report with tolerance `2^(-prec/2)`.
pub fn check_discrete_residuals(table: &RecurrenceTable, spec: &MeasureSpec) -> VerificationReport {
    let tol = BigReal::from_i64(2, 64).powi(-(table.prec as i32) / 2);
    check_discrete_residuals_tol(table, spec, &tol)
}

pub fn check_discrete_residuals_tol(table: &RecurrenceTable, spec: &MeasureSpec, tol: &BigReal) -> VerificationReport {
    let mut report = VerificationReport::new("discrete", table.prec);
    let params = CellParams::from(spec);
    for n in 0..table.len() {
        let r = discrete_residuals(table, n);
        report.push(Cell::new(params.clone(), n as i64, table.source.name(), &r, tol));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures;
    use crate::oracle::recurrence_from_hankel;

    fn spec(a: &str, beta: &str, lattice: Lattice, tau: Option<&str>) -> MeasureSpec {
        MeasureSpec::parse(a, beta, lattice, tau).unwrap()
    }

    #[test]
    fn b0_beta_one_value() {
        let b0 = initial_b0(&spec("1", "1", Lattice::N, None), 160).unwrap();
        let want = BigReal::parse("0.697774657964007982", 160).unwrap();
        assert!((b0 - want).abs() < 1e-17);
    }

    #[test]
    fn b0_matches_moment_ratio() {
        for s in [
            spec("1", "1.5", Lattice::N, None),
            spec("2", "0.3", Lattice::Shifted, None),
            spec("0.5", "1.9", Lattice::BiLattice, Some("3")),
        ] {
            let b0 = initial_b0(&s, 256).unwrap();
            let mv = measures::moments(&s, 2, 288).unwrap();
            let ratio = &mv.m[1] / &mv.m[0];
            assert!((b0 - ratio).log2_abs() < -240.0, "{s}");
        }
    }

    #[test]
    fn tiny_tau_is_the_n_lattice() {
        let n = initial_b0(&spec("1", "0.5", Lattice::N, None), 128).unwrap();
        let bi = initial_b0(&spec("1", "0.5", Lattice::BiLattice, Some("1e-40")), 128).unwrap();
        assert!((n - bi).log2_abs() < -100.0);
    }

    #[test]
    fn first_step_from_zero() {
        let p = 128;
        let a = BigReal::from_f64(1.25, p);
        let beta = BigReal::from_f64(0.5, p);
        let b0 = BigReal::from_f64(0.75, p);
        let s1 = step(&a, &beta, &DiscreteState::initial(b0.clone())).unwrap();
        let want = &a + (1i64 - &beta - &b0) * &b0;
        assert_eq!(s1.x_n, want);
        assert_eq!(s1.b_nm1.unwrap(), b0);
    }

    #[test]
    fn singular_step_reported() {
        let p = 128;
        let a = BigReal::one(p);
        let state = DiscreteState {
            n: 2,
            x_n: a.clone(),
            b_n: BigReal::one(p),
            b_nm1: Some(BigReal::one(p)),
        };
        let err = step(&a, &BigReal::one(p), &state).unwrap_err();
        assert!(matches!(err, Error::Singularity { n: 2, .. }));
    }

    #[test]
    fn forward_matches_oracle_first_rows() {
        let s = spec("1", "1.5", Lattice::N, None);
        let fwd = recurrence_forward(&s, 5, 256).unwrap();
        let orc = recurrence_from_hankel(&s, 5, 256).unwrap();
        let (da, db) = fwd.max_abs_diff(&orc);
        assert!(da.log2_abs() < -200.0 && db.log2_abs() < -200.0);
        assert!(fwd.a2[1..].iter().all(BigReal::is_positive));
    }

    #[test]
    fn corrupted_entry_shows_in_residual() {
        let s = spec("1", "1.5", Lattice::N, None);
        let mut t = recurrence_from_hankel(&s, 6, 256).unwrap();
        assert!(check_discrete_residuals(&t, &s).pass);
        t.b[3] += BigReal::parse("1e-6", 256).unwrap();
        let r = check_discrete_residuals(&t, &s);
        assert!(!r.pass);
        let bad: Vec<i64> = r.failures().map(|c| c.n).collect();
        assert!(bad.contains(&3));
        let r3 = r.cells[3].max_residual_f64();
        assert!(r3 > 1e-7 && r3 < 1e-5, "{r3}");
    }

    #[test]
    fn row_zero_skips_first_equation() {
        let s = spec("1", "1.5", Lattice::N, None);
        let t = recurrence_from_hankel(&s, 3, 128).unwrap();
        assert_eq!(discrete_residuals(&t, 0).len(), 1);
        assert_eq!(discrete_residuals(&t, 1).len(), 2);
        assert_eq!(discrete_residuals(&t, 3).len(), 1);
    }
}
