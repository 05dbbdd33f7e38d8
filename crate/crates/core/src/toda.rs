//! The Toda flow of the recurrence coefficients in the parameter `a`:
//!
//! ```text
//! d/da (a_n²) = (a_n² / a)(b_n - b_(n-1))
//! d/da b_n    = (a_(n+1)² - a_n²) / a
//! ```
//!
//! Derivatives of oracle data are taken with the 5-point central stencil,
//! whose truncation error is `O(h⁴)`. The `b_0` Riccati equation is checked
//! with an exact derivative from Bessel identities instead.

use rug::Rational;

use crate::error::{Error, Result};
use crate::laxchain::bessel_pair;
use crate::measures::{Lattice, MeasureSpec};
use crate::mpnum::{bessel_i, BigReal, GUARD_BITS};
use crate::oracle::{recurrence_from_hankel, RecurrenceTable};

/// Stencil offsets in units of `h`.
const OFFSETS: [i64; 4] = [-2, -1, 1, 2];

fn exact(x: &BigReal) -> Rational {
    x.as_float().to_rational().expect("finite stencil node")
}

/// Five-point derivative `(f(-2) - 8 f(-1) + 8 f(1) - f(2)) / 12h`.
pub fn five_point(f: [&BigReal; 4], h: &BigReal) -> BigReal {
    (f[0] - f[1] * 8i64 + f[2] * 8i64 - f[3]) / (h * 12i64)
}

/// A single `(spec, n)` probe with step `h`.
#[derive(Clone, Debug)]
pub struct TodaProbe {
    pub spec: MeasureSpec,
    pub n: usize,
    pub a_center: BigReal,
    pub h: BigReal,
    pub prec: u32,
}

impl TodaProbe {
    pub fn new(spec: &MeasureSpec, n: usize, h: &str, prec: u32) -> Result<Self> {
        let a_center = spec.a(prec);
        let h = BigReal::parse(h, prec)?;
        let probe = TodaProbe {
            spec: spec.clone(),
            n,
            a_center,
            h,
            prec,
        };
        probe.validate()?;
        Ok(probe)
    }

    fn validate(&self) -> Result<()> {
        if !self.h.is_positive() {
            return Err(Error::Invalid("stencil step must be positive".into()));
        }
        if !(&self.a_center - &self.h * 2i64).is_positive() {
            return Err(Error::domain("stencil reaches a <= 0"));
        }
        // Cancellation in the stencil costs log2(1/h) bits of the data.
        if -self.h.log2_abs() > f64::from(self.prec) / 2.0 {
            return Err(Error::Precision {
                msg: "stencil step too small for the precision budget".into(),
                suggested_bits: (-4.0 * self.h.log2_abs()) as u32,
            });
        }
        Ok(())
    }
}

/// Oracle tables at `a + k h` for `k = -2..=2`, rows `0..=n_max + 1`.
#[derive(Clone, Debug)]
pub struct TodaStencil {
    pub center: RecurrenceTable,
    pub sides: [RecurrenceTable; 4],
    pub h: BigReal,
}

/// All residuals at one row.
#[derive(Clone, Debug)]
pub struct TodaResiduals {
    /// First Toda equation; exactly zero at `n = 0`.
    pub toda_x: BigReal,
    pub toda_b: BigReal,
    pub xprime: BigReal,
    pub bprime: BigReal,
}

impl TodaResiduals {
    pub fn as_vec(&self) -> Vec<BigReal> {
        vec![self.toda_x.clone(), self.toda_b.clone(), self.xprime.clone(), self.bprime.clone()]
    }
}

impl TodaStencil {
    pub fn new(spec: &MeasureSpec, a_center: &BigReal, h: &BigReal, n_max: usize, prec: u32) -> Result<Self> {
        let table_at = |a: &BigReal| -> Result<RecurrenceTable> {
            recurrence_from_hankel(&spec.with_a(exact(a))?, n_max + 1, prec)
        };
        let center = table_at(a_center)?;
        let sides = OFFSETS
            .iter()
            .map(|&k| table_at(&(a_center + h * k)))
            .collect::<Result<Vec<_>>>()?;
        let sides: [RecurrenceTable; 4] = sides.try_into().expect("four stencil tables");
        Ok(TodaStencil {
            center,
            sides,
            h: h.clone(),
        })
    }

    pub fn from_probe(probe: &TodaProbe) -> Result<Self> {
        probe.validate()?;
        Self::new(&probe.spec, &probe.a_center, &probe.h, probe.n, probe.prec)
    }

    fn d_a2(&self, n: usize) -> BigReal {
        let s = &self.sides;
        five_point([&s[0].a2[n], &s[1].a2[n], &s[2].a2[n], &s[3].a2[n]], &self.h)
    }

    fn d_b(&self, n: usize) -> BigReal {
        let s = &self.sides;
        five_point([&s[0].b[n], &s[1].b[n], &s[2].b[n], &s[3].b[n]], &self.h)
    }

    pub fn residuals(&self, n: usize) -> TodaResiduals {
        let t = &self.center;
        let p = t.prec;
        let a = t.spec.a(p);
        let beta = t.spec.beta(p);
        let ni = n as i64;
        let x = &t.a2[n];
        let b = &t.b[n];
        let dx = self.d_a2(n);
        let db = self.d_b(n);

        let toda_x = if n == 0 {
            BigReal::zero(p)
        } else {
            &dx - x / &a * (b - &t.b[n - 1])
        };
        let toda_b = &db - (&t.a2[n + 1] - x) / &a;
        let xprime = &dx - ((&beta - ni + b * 2i64) * x - &a * ni) / &a;
        let num = &a * (ni - &a + ni * ni - &beta * ni) - &a * ((1 + 2 * ni) - &beta) * b
            + &a * b.square()
            + &a * x * 2i64
            - x.square();
        let bprime = &db - num / (&a * (x - &a));
        TodaResiduals {
            toda_x,
            toda_b,
            xprime,
            bprime,
        }
    }
}

/// `(r₁, r₂)` for the two Toda equations at the probe row.
pub fn toda_residual(probe: &TodaProbe) -> Result<(BigReal, BigReal)> {
    let r = TodaStencil::from_probe(probe)?.residuals(probe.n);
    Ok((r.toda_x, r.toda_b))
}

/// Residual of `x_n' = ((β - n + 2 b_n) x_n - a n) / a`.
pub fn xprime_residual(probe: &TodaProbe) -> Result<BigReal> {
    Ok(TodaStencil::from_probe(probe)?.residuals(probe.n).xprime)
}

/// Residual of the closed form for `b_n'`.
pub fn bprime_residual(probe: &TodaProbe) -> Result<BigReal> {
    Ok(TodaStencil::from_probe(probe)?.residuals(probe.n).bprime)
}

/// The `t = log a` form `d/dt a_n² = a_n² (b_n - b_(n-1))`,
/// `d/dt b_n = a_(n+1)² - a_n²`, checked at one point with a stencil on the
/// nodes `a e^(k h)`.
pub fn toda_t_form_residual(spec: &MeasureSpec, n: usize, h: &BigReal, prec: u32) -> Result<(BigReal, BigReal)> {
    let a = spec.a(prec);
    let table_at = |k: i64| -> Result<RecurrenceTable> {
        let node = &a * (h * k).exp();
        recurrence_from_hankel(&spec.with_a(exact(&node))?, n + 1, prec)
    };
    let c = table_at(0)?;
    let s: Vec<RecurrenceTable> = OFFSETS.iter().map(|&k| table_at(k)).collect::<Result<_>>()?;
    let dx = five_point([&s[0].a2[n], &s[1].a2[n], &s[2].a2[n], &s[3].a2[n]], h);
    let db = five_point([&s[0].b[n], &s[1].b[n], &s[2].b[n], &s[3].b[n]], h);
    let r1 = if n == 0 {
        BigReal::zero(prec)
    } else {
        dx - &c.a2[n] * (&c.b[n] - &c.b[n - 1])
    };
    let r2 = db - (&c.a2[n + 1] - &c.a2[n]);
    Ok((r1, r2))
}

/// `I_ν'(z) = I_(ν-1)(z) - (ν/z) I_ν(z)`.
fn bessel_i_prime(nu: &BigReal, z: &BigReal, prec: u32) -> Result<BigReal> {
    Ok(bessel_i(&(nu - 1i64), z, prec)? - nu / z * bessel_i(nu, z, prec)?)
}

/// `b_0(a)` and `d b_0 / da` for the spec's lattice, the latter from Bessel
/// derivative identities.
pub fn b0_with_derivative(spec: &MeasureSpec, a: &BigReal, prec: u32) -> Result<(BigReal, BigReal)> {
    let wp = prec + GUARD_BITS;
    let a = a.with_prec(wp);
    let z = a.sqrt() * 2i64;
    let beta = spec.beta(wp);
    let (num, den) = bessel_pair(spec, &a, wp)?;
    let n_d = || -> Result<(BigReal, BigReal)> {
        Ok((bessel_i_prime(&beta, &z, wp)?, bessel_i_prime(&(&beta - 1i64), &z, wp)?))
    };
    let s_d = || -> Result<(BigReal, BigReal)> {
        Ok((bessel_i_prime(&-&beta, &z, wp)?, bessel_i_prime(&(1i64 - &beta), &z, wp)?))
    };
    let (num_d, den_d) = match spec.lattice() {
        Lattice::N => n_d()?,
        Lattice::Shifted => s_d()?,
        Lattice::BiLattice => {
            let tau = spec.tau(wp).expect("bi-lattice spec carries tau");
            let (nn, nd) = n_d()?;
            let (sn, sd) = s_d()?;
            (nn + &tau * sn, nd + &tau * sd)
        }
    };
    // b0 = (z/2) num/den with dz/da = 2/z.
    let ratio = &num / &den;
    let b0 = &z / 2i64 * &ratio;
    let db_dz = &ratio / 2i64 + &z / 2i64 * (&num_d * &den - &num * &den_d) / den.square();
    let db_da = db_dz * 2i64 / &z;
    Ok((b0.with_prec(prec), db_da.with_prec(prec)))
}

/// `a² b' + a b² - a(1-β) b - a²`.
pub fn riccati_value(a: &BigReal, beta: &BigReal, b: &BigReal, b_prime: &BigReal) -> BigReal {
    a.square() * b_prime + a * b.square() - a * (1i64 - beta) * b - a.square()
}

/// Riccati residual of the lattice's `b_0` at `a`, with exact `b_0'`.
pub fn riccati_b0_residual(spec: &MeasureSpec, a: &BigReal, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD_BITS;
    let (b0, db) = b0_with_derivative(spec, a, wp)?;
    Ok(riccati_value(&a.with_prec(wp), &spec.beta(wp), &b0, &db).with_prec(prec))
}

/// The Riccati equation maps to itself under `β -> 2-β`, `b -> b - 1 + β`.
/// Returns the residual of the transformed pair in the transformed equation;
/// it vanishes when the original pair is a solution.
pub fn riccati_symmetry_residual(spec: &MeasureSpec, a: &BigReal, prec: u32) -> Result<BigReal> {
    let wp = prec + GUARD_BITS;
    let (b0, db) = b0_with_derivative(spec, a, wp)?;
    let beta = spec.beta(wp);
    let beta_hat = 2i64 - &beta;
    let b_hat = &b0 - 1i64 + &beta;
    Ok(riccati_value(&a.with_prec(wp), &beta_hat, &b_hat, &db).with_prec(prec))
}
