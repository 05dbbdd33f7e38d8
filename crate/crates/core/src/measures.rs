//! Generalized Charlier measures and their power moments.
//!
//! On `ℕ` the weight is `w_k = a^k / ((β)_k k!)`. On the shifted lattice
//! `ℕ + 1 - β` it is `v_k = w(k+1-β) = Γ(β) a^(1-β) / Γ(2-β) · a^k / (k! (2-β)_k)`.
//! The bi-lattice measure is `μ_ℕ + τ μ_shifted`.
//!
//! Parameters are held as exact rationals so that derived quantities such as
//! `2 - β`, `a ± h` and the shifted nodes `k + 1 - β` carry no rounding error
//! before they are materialized at a working precision.

use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpnum::{self, gamma, BigReal, GUARD_BITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lattice {
    /// `{0, 1, 2, ...}`
    #[serde(rename = "N")]
    N,
    /// `{1-β, 2-β, ...}`
    #[serde(rename = "shifted")]
    Shifted,
    /// union of the two, weighted `1 : τ`
    #[serde(rename = "bilattice")]
    BiLattice,
}

impl Lattice {
    pub const ALL: [Lattice; 3] = [Lattice::N, Lattice::Shifted, Lattice::BiLattice];

    pub fn name(self) -> &'static str {
        match self {
            Lattice::N => "N",
            Lattice::Shifted => "shifted",
            Lattice::BiLattice => "bilattice",
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "n" | "lattice" | "natural" => Ok(Lattice::N),
            "shifted" | "s" => Ok(Lattice::Shifted),
            "bilattice" | "bi" | "b" => Ok(Lattice::BiLattice),
            _ => Err(Error::Invalid(format!("unknown lattice {s:?}"))),
        }
    }
}

/// Parameters of the orthogonality measure.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    a: Rational,
    beta: Rational,
    lattice: Lattice,
    tau: Option<Rational>,
}

impl MeasureSpec {
    /// Validates the parameter window in which every weight is strictly positive:
    /// `a > 0`; `β > 0` on `ℕ`; `0 < β < 2, β ≠ 1` on the shifted lattice and the
    /// bi-lattice; `τ > 0` on the bi-lattice.
    pub fn new(a: Rational, beta: Rational, lattice: Lattice, tau: Option<Rational>) -> Result<Self> {
        if a <= 0 {
            return Err(Error::domain(format!("a must be positive, got {a}")));
        }
        match lattice {
            Lattice::N => {
                if beta <= 0 {
                    return Err(Error::domain(format!("lattice N requires beta > 0, got {beta}")));
                }
            }
            Lattice::Shifted | Lattice::BiLattice => {
                if beta <= 0 || beta >= 2 {
                    return Err(Error::domain(format!(
                        "lattice {lattice} requires 0 < beta < 2, got {beta}"
                    )));
                }
                if beta == 1 {
                    return Err(Error::domain(format!(
                        "lattice {lattice} is degenerate at beta = 1: both lattices coincide"
                    )));
                }
            }
        }
        let tau = match (lattice, tau) {
            (Lattice::BiLattice, Some(t)) if t > 0 => Some(t),
            (Lattice::BiLattice, Some(t)) => {
                return Err(Error::domain(format!("tau must be positive, got {t}")))
            }
            (Lattice::BiLattice, None) => {
                return Err(Error::domain("bilattice requires tau"));
            }
            (_, _) => None,
        };
        Ok(MeasureSpec { a, beta, lattice, tau })
    }

    /// Builds a spec from decimal strings, e.g. `("1", "1.5", N, None)`.
    pub fn parse(a: &str, beta: &str, lattice: Lattice, tau: Option<&str>) -> Result<Self> {
        let tau = tau.map(mpnum::parse_decimal).transpose()?;
        Self::new(mpnum::parse_decimal(a)?, mpnum::parse_decimal(beta)?, lattice, tau)
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn a_exact(&self) -> &Rational {
        &self.a
    }

    pub fn beta_exact(&self) -> &Rational {
        &self.beta
    }

    pub fn tau_exact(&self) -> Option<&Rational> {
        self.tau.as_ref()
    }

    pub fn a(&self, prec: u32) -> BigReal {
        mpnum::rational_to_big(&self.a, prec)
    }

    pub fn beta(&self, prec: u32) -> BigReal {
        mpnum::rational_to_big(&self.beta, prec)
    }

    pub fn tau(&self, prec: u32) -> Option<BigReal> {
        self.tau.as_ref().map(|t| mpnum::rational_to_big(t, prec))
    }

    /// Same measure family with `a` replaced.
    pub fn with_a(&self, a: Rational) -> Result<Self> {
        Self::new(a, self.beta.clone(), self.lattice, self.tau.clone())
    }

    pub fn with_beta(&self, beta: Rational) -> Result<Self> {
        Self::new(self.a.clone(), beta, self.lattice, self.tau.clone())
    }

    pub fn with_lattice(&self, lattice: Lattice, tau: Option<Rational>) -> Result<Self> {
        Self::new(self.a.clone(), self.beta.clone(), lattice, tau)
    }

    /// The `(a, β, lattice, τ)` quadruple as decimal strings.
    pub fn describe(&self) -> (String, String, String, Option<String>) {
        (
            rational_decimal(&self.a),
            rational_decimal(&self.beta),
            self.lattice.name().to_string(),
            self.tau.as_ref().map(rational_decimal),
        )
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, beta, lattice, tau) = self.describe();
        write!(f, "{lattice}(a={a}, beta={beta}")?;
        if let Some(t) = tau {
            write!(f, ", tau={t}")?;
        }
        f.write_str(")")
    }
}

/// Short decimal rendering of an exact rational (exact when the denominator
/// divides a power of ten, otherwise 40 significant digits).
pub fn rational_decimal(q: &Rational) -> String {
    let den = q.denom().clone();
    let mut d = den.clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while d.is_divisible_u(2) {
        d /= 2u32;
        twos += 1;
    }
    while d.is_divisible_u(5) {
        d /= 5u32;
        fives += 1;
    }
    if d == 1 {
        let scale = twos.max(fives);
        if scale == 0 {
            return q.numer().to_string();
        }
        let factor = rug::Integer::from(rug::Integer::u_pow_u(10, scale)) / den;
        let digits = (q.numer().clone() * factor).abs().to_string();
        let neg = if *q < 0 { "-" } else { "" };
        let scale = scale as usize;
        let padded = format!("{digits:0>width$}", width = scale + 1);
        let (ip, fp) = padded.split_at(padded.len() - scale);
        let fp = fp.trim_end_matches('0');
        if fp.is_empty() {
            format!("{neg}{ip}")
        } else {
            format!("{neg}{ip}.{fp}")
        }
    } else {
        mpnum::rational_to_big(q, 160).to_decimal(40)
    }
}

/// One atom of the measure: a node and its (scaled) mass.
#[derive(Clone, Debug)]
pub struct Atom {
    pub node: BigReal,
    pub mass: BigReal,
}

/// Walks the atoms of one lattice component in order `k = 0, 1, 2, ...`,
/// updating the weight by the exact ratio `a / ((b + k)(k + 1))`.
pub(crate) struct Component {
    a: BigReal,
    /// `β` on ℕ, `2 - β` on the shifted lattice.
    poch_base: BigReal,
    node: BigReal,
    mass: BigReal,
    k: u64,
}

impl Component {
    #[cfg(test)]
    pub(crate) fn atom(&self) -> Atom {
        Atom {
            node: self.node.clone(),
            mass: self.mass.clone(),
        }
    }

    pub(crate) fn node(&self) -> &BigReal {
        &self.node
    }

    pub(crate) fn mass(&self) -> &BigReal {
        &self.mass
    }

    /// Ratio `mass_(k+1) / mass_k`.
    pub(crate) fn mass_ratio(&self) -> BigReal {
        &self.a / ((&self.poch_base + self.k as i64) * (self.k as i64 + 1))
    }

    pub(crate) fn advance(&mut self) {
        self.mass = &self.mass * self.mass_ratio();
        self.node += 1i64;
        self.k += 1;
    }
}

/// The lattice components of `spec` at working precision `prec`, each
/// positioned at `k = 0` with its full prefactor (including `τ`) applied.
pub(crate) fn components(spec: &MeasureSpec, prec: u32) -> Result<Vec<Component>> {
    let a = spec.a(prec);
    let beta = spec.beta(prec);
    let mut out = Vec::with_capacity(2);
    if matches!(spec.lattice, Lattice::N | Lattice::BiLattice) {
        out.push(Component {
            a: a.clone(),
            poch_base: beta.clone(),
            node: BigReal::zero(prec),
            mass: BigReal::one(prec),
            k: 0,
        });
    }
    if matches!(spec.lattice, Lattice::Shifted | Lattice::BiLattice) {
        let mut v0 = shifted_prefactor(spec, prec)?;
        if let Some(tau) = spec.tau(prec) {
            v0 *= tau;
        }
        let shift = Rational::from(1) - &spec.beta;
        out.push(Component {
            a,
            poch_base: mpnum::rational_to_big(&(Rational::from(2) - &spec.beta), prec),
            node: mpnum::rational_to_big(&shift, prec),
            mass: v0,
            k: 0,
        });
    }
    Ok(out)
}

/// `Γ(β) a^(1-β) / Γ(2-β)`, the mass of the first shifted node.
pub fn shifted_prefactor(spec: &MeasureSpec, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD_BITS;
    let beta = spec.beta(wp);
    let a = spec.a(wp);
    let two_minus = mpnum::rational_to_big(&(Rational::from(2) - &spec.beta), wp);
    let g = gamma(&beta, wp)? / gamma(&two_minus, wp)?;
    Ok((g * a.pow(&(1i64 - &beta))).with_prec(prec))
}

/// Weight at lattice index `k`: `w_k` on ℕ, `v_k` (with prefactor) on the
/// shifted lattice. The bi-lattice has two atoms per index; see [`atoms_at`].
pub fn weight_at(spec: &MeasureSpec, k: u64, prec: u32) -> Result<BigReal> {
    match spec.lattice {
        Lattice::BiLattice => Err(Error::domain(
            "the bi-lattice has two atoms per index; use atoms_at",
        )),
        _ => Ok(atoms_at(spec, k, prec)?.remove(0).mass),
    }
}

/// All atoms with lattice index `k` (one, or two on the bi-lattice where the
/// shifted atom carries the factor `τ`).
pub fn atoms_at(spec: &MeasureSpec, k: u64, prec: u32) -> Result<Vec<Atom>> {
    let wp = prec + GUARD_BITS;
    let a = spec.a(wp);
    let beta = spec.beta(wp);
    let k_fact = (1..=k).fold(BigReal::one(wp), |acc, i| acc * i as i64);
    let a_k = a.powi(k as i32);
    let mut out = Vec::new();
    if matches!(spec.lattice, Lattice::N | Lattice::BiLattice) {
        let w = &a_k / (mpnum::pochhammer(&beta, k, wp) * &k_fact);
        out.push(Atom {
            node: BigReal::from_i64(k as i64, prec),
            mass: w.with_prec(prec),
        });
    }
    if matches!(spec.lattice, Lattice::Shifted | Lattice::BiLattice) {
        let two_minus = mpnum::rational_to_big(&(Rational::from(2) - &spec.beta), wp);
        let mut v = shifted_prefactor(spec, wp)? * &a_k / (mpnum::pochhammer(&two_minus, k, wp) * &k_fact);
        if let Some(tau) = spec.tau(wp) {
            v *= tau;
        }
        let node = Rational::from(k) + Rational::from(1) - &spec.beta;
        out.push(Atom {
            node: mpnum::rational_to_big(&node, prec),
            mass: v.with_prec(prec),
        });
    }
    Ok(out)
}

/// Residual of the Pearson equation `∇w(k) = ((a - k(β-1) - k²)/a) w(k)` on ℕ.
pub fn pearson_residual(spec: &MeasureSpec, k: u64, prec: u32) -> Result<BigReal> {
    pearson_residual_perturbed(spec, k, &BigReal::zero(prec), prec)
}

/// As [`pearson_residual`] with `ε` added to the right-hand polynomial factor,
/// so the residual becomes `-ε w_k`.
pub fn pearson_residual_perturbed(
    spec: &MeasureSpec,
    k: u64,
    eps: &BigReal,
    prec: u32,
) -> Result<BigReal> {
    if spec.lattice != Lattice::N {
        return Err(Error::domain("Pearson residual is defined on lattice N"));
    }
    if k == 0 {
        return Err(Error::domain("Pearson residual needs k >= 1"));
    }
    let wp = prec + GUARD_BITS;
    let a = spec.a(wp);
    let beta = spec.beta(wp);
    let wk = weight_at(spec, k, wp)?;
    let wkm1 = weight_at(spec, k - 1, wp)?;
    let x = BigReal::from_i64(k as i64, wp);
    let poly = (&a - &x * (&beta - 1i64) - x.square()) / &a + eps.with_prec(wp);
    Ok((&wk - &wkm1 - poly * &wk).with_prec(prec))
}

/// Power moments `m_0 .. m_(count-1)` of a measure.
#[derive(Clone, Debug)]
pub struct MomentVector {
    pub spec: MeasureSpec,
    pub m: Vec<BigReal>,
    pub prec: u32,
}

/// Sums `Σ_k node_k^j mass_k` for `j < count` over one component, stopping once
/// a geometric tail bound for every `j` is below `2^-(prec+GUARD)` relative to
/// the partial sum and the current term is below the same threshold.
fn component_moments(mut comp: Component, count: usize, prec: u32) -> Result<Vec<BigReal>> {
    let wp = prec + GUARD_BITS;
    let eps = -(f64::from(prec) + f64::from(GUARD_BITS));
    let mut sums = vec![BigReal::zero(wp); count];
    let mut iterations = 0u64;
    loop {
        let node = comp.node().clone();
        let mass = comp.mass().clone();
        let mut term = mass.clone();
        for s in sums.iter_mut() {
            *s += &term;
            term *= &node;
        }

        // Tail certificate for all j, valid once nodes are >= 1 and the term
        // ratio for the largest j is below one (ratios then only decrease).
        if node >= 1i64 {
            let next_node = &node + 1i64;
            let mass_ratio = comp.mass_ratio();
            let step = &next_node / &node;
            let mut ok = true;
            let mut term = mass.clone();
            let mut node_pow = BigReal::one(wp);
            for s in sums.iter() {
                let ratio = &mass_ratio * &node_pow;
                if ratio >= 1i64 {
                    ok = false;
                    break;
                }
                let tail = &term * &ratio / (1i64 - &ratio);
                if tail.log2_abs() - s.log2_abs() > eps || term.log2_abs() - s.log2_abs() > eps {
                    ok = false;
                    break;
                }
                term *= &node;
                node_pow *= &step;
            }
            if ok {
                return Ok(sums);
            }
        }
        comp.advance();
        iterations += 1;
        if iterations > 10_000_000 {
            return Err(Error::Precision {
                msg: "moment sum did not converge".into(),
                suggested_bits: prec,
            });
        }
    }
}

/// Moments `m_0 .. m_(count-1)` with certified truncation.
pub fn moments(spec: &MeasureSpec, count: usize, prec: u32) -> Result<MomentVector> {
    let wp = prec + GUARD_BITS;
    let mut total = vec![BigReal::zero(wp); count];
    for comp in components(spec, wp)? {
        for (t, s) in total.iter_mut().zip(component_moments(comp, count, wp)?) {
            *t += s;
        }
    }
    Ok(MomentVector {
        spec: spec.clone(),
        m: total.into_iter().map(|x| x.with_prec(prec)).collect(),
        prec,
    })
}

/// A single moment `m_j`.
pub fn moment(spec: &MeasureSpec, j: usize, prec: u32) -> Result<BigReal> {
    Ok(moments(spec, j + 1, prec)?.m.swap_remove(j))
}

/// Closed form `m_0(ℕ) = Γ(β) a^((1-β)/2) I_(β-1)(2√a)`.
pub fn total_mass_closed_form(spec: &MeasureSpec, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD_BITS;
    let a = spec.a(wp);
    let beta = spec.beta(wp);
    let z = a.sqrt() * 2i64;
    let base = gamma(&beta, wp)? * a.pow(&((1i64 - &beta) / 2i64));
    let i_n = mpnum::bessel_i(&(&beta - 1i64), &z, wp)?;
    let mut total = &base * i_n;
    if let Some(tau) = spec.tau(wp).filter(|_| spec.lattice == Lattice::BiLattice) {
        total += &base * tau * mpnum::bessel_i(&(1i64 - &beta), &z, wp)?;
    } else if spec.lattice == Lattice::Shifted {
        total = &base * mpnum::bessel_i(&(1i64 - &beta), &z, wp)?;
    }
    Ok(total.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: &str, beta: &str, lattice: Lattice, tau: Option<&str>) -> MeasureSpec {
        MeasureSpec::parse(a, beta, lattice, tau).unwrap()
    }

    #[test]
    fn validity_windows() {
        assert!(MeasureSpec::parse("0", "1", Lattice::N, None).is_err());
        assert!(MeasureSpec::parse("1", "0", Lattice::N, None).is_err());
        assert!(MeasureSpec::parse("1", "3", Lattice::N, None).is_ok());
        assert!(MeasureSpec::parse("1", "1", Lattice::Shifted, None).is_err());
        assert!(MeasureSpec::parse("1", "2", Lattice::Shifted, None).is_err());
        assert!(MeasureSpec::parse("1", "0.5", Lattice::BiLattice, None).is_err());
        assert!(MeasureSpec::parse("1", "0.5", Lattice::BiLattice, Some("-1")).is_err());
        assert!(MeasureSpec::parse("1", "0.5", Lattice::BiLattice, Some("2")).is_ok());
    }

    #[test]
    fn weights_small_cases() {
        let p = 128;
        let w0 = weight_at(&spec("2.5", "0.7", Lattice::N, None), 0, p).unwrap();
        assert_eq!(w0, 1i64);
        let w2 = weight_at(&spec("1", "2", Lattice::N, None), 2, p).unwrap();
        assert!(((w2 - BigReal::from_ratio(1, 12, p)) * 12i64).log2_abs() < -120.0);
        // Γ(1/2)/Γ(3/2) = 2
        let v0 = weight_at(&spec("1", "0.5", Lattice::Shifted, None), 0, p).unwrap();
        assert!((v0 - 2i64).log2_abs() < -120.0);
    }

    #[test]
    fn bilattice_atoms_carry_tau() {
        let p = 128;
        let s = spec("1", "0.5", Lattice::BiLattice, Some("3"));
        let atoms = atoms_at(&s, 0, p).unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[1].node, 0.5);
        assert!((&atoms[1].mass - 6i64).log2_abs() < -120.0);
        assert!(weight_at(&s, 0, p).is_err());
    }

    #[test]
    fn pearson_identity_and_perturbation() {
        let p = 256;
        for (a, b) in [("1", "2"), ("3", "0.7")] {
            let s = spec(a, b, Lattice::N, None);
            for k in [1, 5] {
                let wk = weight_at(&s, k, p).unwrap();
                let r = pearson_residual(&s, k, p).unwrap();
                assert!(r.log2_abs() - wk.log2_abs() < -(f64::from(p) - 8.0));
            }
        }
        let s = spec("1", "2", Lattice::N, None);
        let eps = BigReal::parse("1e-10", p).unwrap();
        let r = pearson_residual_perturbed(&s, 1, &eps, p).unwrap();
        let w1 = weight_at(&s, 1, p).unwrap();
        let want = -(&eps * &w1);
        assert!(((r - &want) / want).log2_abs() < -200.0);
        assert!(pearson_residual(&s, 0, p).is_err());
    }

    #[test]
    fn component_walk_matches_direct_weights() {
        let p = 192;
        let s = spec("1.3", "0.4", Lattice::BiLattice, Some("0.5"));
        let comps = components(&s, p).unwrap();
        for (c, mut comp) in comps.into_iter().enumerate() {
            for k in 0..12 {
                let direct = &atoms_at(&s, k, p).unwrap()[c];
                let atom = comp.atom();
                assert!(((&atom.mass - &direct.mass) / &direct.mass).log2_abs() < -180.0);
                assert_eq!(atom.node, direct.node);
                comp.advance();
            }
        }
    }

    #[test]
    fn rational_decimal_rendering() {
        assert_eq!(rational_decimal(&Rational::from((3, 2))), "1.5");
        assert_eq!(rational_decimal(&Rational::from(-2)), "-2");
        assert_eq!(rational_decimal(&mpnum::parse_decimal("1e-4").unwrap()), "0.0001");
        assert_eq!(rational_decimal(&Rational::from((1, 3))).len() > 30, true);
    }

    #[test]
    fn lattice_names_parse() {
        for l in Lattice::ALL {
            assert_eq!(l.name().parse::<Lattice>().unwrap(), l);
        }
        assert!("hex".parse::<Lattice>().is_err());
    }
}
