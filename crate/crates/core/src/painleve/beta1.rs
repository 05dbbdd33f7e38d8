//! The `β = 1` weight `a^k / (k!)²`.
//!
//! At `β = 1` the recurrence parameters degenerate to `A = 0`, and the table
//! is reached instead through P5 with `(n²/8, -n²/8, 0, -8)`:
//!
//! 1. take the main-chain solution at index `n-1`, with parameters `(0, -n²/2, 2, 0)`;
//! 2. apply `y -> 1/y`, giving `(n²/2, 0, -2, 0)`;
//! 3. invert `ỹ = (Y+1)²/(4Y)` with `t = z²`, giving `(n²/8, -n²/8, 0, -8)`;
//! 4. read off `b_n` with the explicit formula of [`bn_beta1`].
//!
//! Level `n + 1` also follows from level `n` by the `D ≠ 0` Bäcklund map
//! ([`example_map`]), and both signs `ε = ±1` give the same `b_n`.
//!
//! There is no index `-1` on the main chain, so level 0 needs its own seed.
//! The first-order equation for it has discriminant `-16 b² z²`, which is
//! negative, so the seed `Y = (b ± i z)² / (b² + z²)` is complex. `b_0` is
//! still real.

use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Rational;

use super::{build_chain, exact_sqrt, nonvanishing, p5_second_derivative, P5Params, P5Point};
use crate::error::{Error, Result};
use crate::measures::{Lattice, MeasureSpec};
use crate::mpnum::{BigReal, GUARD_BITS};

/// Signs `(ε₁, ε₂, ε₃)` of the three square roots.
pub type Signs = [i8; 3];

/// `y -> 1/y` maps `(A, B, C, D)` to `(-B, -A, -C, D)`.
pub fn reciprocal_params(p: &P5Params) -> P5Params {
    P5Params::new(-p.b.clone(), -p.a.clone(), -p.c.clone(), p.d.clone())
}

pub fn reciprocal_point(pt: &P5Point) -> P5Point {
    P5Point::new(pt.t.clone(), pt.y.recip(), -(&pt.yp / pt.y.square()))
}

/// Parameters for which `(Y+1)²/(4Y)` lands on `(α, 0, γ, 0)`, namely
/// `(α/4, -α/4, 0, 4γ)`.
pub fn transf1_source_params(target: &P5Params) -> Result<P5Params> {
    if target.b != 0 || target.d != 0 {
        return Err(Error::domain(format!("{target} is not of the form (α, 0, γ, 0)")));
    }
    let q = Rational::from(&target.a / 4u32);
    Ok(P5Params::new(q.clone(), -q, 0, Rational::from(&target.c * 4u32)))
}

/// `(α/4, -α/4, 0, 4γ) -> (α, 0, γ, 0)`.
pub fn transf1_params(source: &P5Params) -> Result<P5Params> {
    if source.c != 0 || Rational::from(&source.a + &source.b) != 0 {
        return Err(Error::domain(format!("{source} is not of the form (α/4, -α/4, 0, 4γ)")));
    }
    Ok(P5Params::new(
        Rational::from(&source.a * 4u32),
        0,
        Rational::from(&source.d / 4u32),
        0,
    ))
}

/// `ỹ(t) = (Y+1)²/(4Y)` at `t = z²`, with its `t`-derivative.
pub fn transf1_point(pt: &P5Point) -> P5Point {
    let (z, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let w = (y + 1i64).square() / (y * 4i64);
    let dw_dy = (y + 1i64) * (y - 1i64) / (y.square() * 4i64);
    P5Point::new(z.square(), w, dw_dy * yp / (z * 2i64))
}

/// Inverse of [`transf1_point`]: `Y = 2w - 1 + root·2√(w(w-1))` at `z = √t`,
/// `Y'(z) = 2z w'(t) / ((Y+1)(Y-1)/(4Y²))`. Fails when `w(w-1) < 0`.
pub fn transf1_inverse(pt: &P5Point, root: i8) -> Result<P5Point> {
    let w = &pt.y;
    let disc = w * (w - 1i64);
    if disc.is_negative() {
        return Err(Error::domain("transf1 inverse is complex here: w(w-1) < 0"));
    }
    let z = pt.t.sqrt();
    let y = w * 2i64 - 1i64 + disc.sqrt() * 2i64 * i64::from(root);
    let dw_dy = (&y + 1i64) * (&y - 1i64) / (y.square() * 4i64);
    nonvanishing(&dw_dy, &BigReal::one(y.prec()), "dw/dY")?;
    let yp = &z * 2i64 * &pt.yp / dw_dy;
    Ok(P5Point::new(z, y, yp))
}

/// The `D ≠ 0` Bäcklund map
/// `y₁ = 1 - 2d t y / (t y' - a y² + (a - b + d t) y + b)` with
/// `a = ε₁√(2A)`, `b = ε₂√(-2B)`, `d = ε₃√(-2D)`, and the new parameters
/// `A₁ = -(C + d(1-a-b))²/(16D)`, `B₁ = (C - d(1-a-b))²/(16D)`, `C₁ = d(b-a)`, `D₁ = D`.
pub fn backlund_general(pt: &P5Point, params: &P5Params, eps: Signs) -> Result<(BigReal, P5Params)> {
    let (y1, _, p1) = backlund_general_impl(pt, params, eps, false)?;
    Ok((y1, p1))
}

/// [`backlund_general`] including `y₁'`, which needs `y''` from P5.
pub fn backlund_general_point(pt: &P5Point, params: &P5Params, eps: Signs) -> Result<(P5Point, P5Params)> {
    let (y1, y1p, p1) = backlund_general_impl(pt, params, eps, true)?;
    Ok((P5Point::new(pt.t.clone(), y1, y1p.expect("derivative requested")), p1))
}

/// New parameters of [`backlund_general`], exactly.
pub fn backlund_general_params(params: &P5Params, eps: Signs) -> Result<(P5Params, [Rational; 3])> {
    if params.d == 0 {
        return Err(Error::domain("general Bäcklund map needs D ≠ 0"));
    }
    let sign = |e: i8, q: Rational| if e < 0 { -q } else { q };
    let a = sign(eps[0], exact_sqrt(&Rational::from(&params.a * 2u32))?);
    let b = sign(eps[1], exact_sqrt(&Rational::from(&params.b * -2i32))?);
    let d = sign(eps[2], exact_sqrt(&Rational::from(&params.d * -2i32))?);
    let s = Rational::from(1) - &a - &b;
    let ds = Rational::from(&d * &s);
    let d16 = Rational::from(&params.d * 16u32);
    let a1 = -Rational::from(&params.c + &ds).square() / &d16;
    let b1 = Rational::from(&params.c - &ds).square() / &d16;
    let c1 = Rational::from(&d * Rational::from(&b - &a));
    Ok((P5Params::new(a1, b1, c1, params.d.clone()), [a, b, d]))
}

fn backlund_general_impl(pt: &P5Point, params: &P5Params, eps: Signs, with_derivative: bool) -> Result<(BigReal, Option<BigReal>, P5Params)> {
    let (p1, [a, b, d]) = backlund_general_params(params, eps)?;
    let prec = pt.prec();
    let (a, b, d) = (
        crate::mpnum::rational_to_big(&a, prec),
        crate::mpnum::rational_to_big(&b, prec),
        crate::mpnum::rational_to_big(&d, prec),
    );
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let num = &d * 2i64 * t * y;
    let den = t * yp - &a * y.square() + (&a - &b + &d * t) * y + &b;
    let scale = (t * yp).abs().max(b.abs()).max(BigReal::one(prec));
    if nonvanishing(&den, &scale, "general Bäcklund denominator").is_err() {
        return Err(Error::singular(0, "general Bäcklund denominator vanishes"));
    }
    let y1 = 1i64 - &num / &den;
    let y1p = if with_derivative {
        let ypp = p5_second_derivative(params, pt)?;
        let dnum = &d * 2i64 * (y + t * yp);
        let dden = yp + t * &ypp - &a * 2i64 * y * yp + &d * y + (&a - &b + &d * t) * yp;
        Some(-(dnum * &den - &num * dden) / den.square())
    } else {
        None
    };
    Ok((y1, y1p, p1))
}

/// The specialization `y_(n+1) = 1 - 16 t ε y / (2 t y' + n y² + 8 t ε y - n)`
/// from `(n²/8, -n²/8, 0, -8)` to `((n+1)²/8, -(n+1)²/8, 0, -8)`: signs
/// `(-1, -1, ε)` of [`backlund_general`].
pub fn example_map(pt: &P5Point, n: i64, eps: i8) -> Result<P5Point> {
    let (next, params) = backlund_general_point(pt, &P5Params::beta1(n), [-1, -1, eps])?;
    debug_assert_eq!(params, P5Params::beta1(n + 1));
    Ok(next)
}

/// `b_n(t) = (n + 7n y² - n y³ - 2z y' - y(7n + 2z y')) / (8 y (y-1))`,
/// `t = z²`, for a point `(z, y, y')` of the solution with `(n²/8, -n²/8, 0, -8)`.
pub fn bn_beta1(n: i64, pt: &P5Point) -> Result<BigReal> {
    let (z, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let den = y * (y - 1i64) * 8i64;
    nonvanishing(&den, &BigReal::one(y.prec()), "8y(y-1)")?;
    let zyp = z * yp * 2i64;
    let num = y.square() * (7 * n) + n - y.powi(3) * n - &zyp - y * (&zyp + 7 * n);
    Ok(num / den)
}

/// `b_n(t)` with `t = z²` from a point solving `(n²/8, -n²/8, 0, -8)`.
pub fn beta1_chain(n: i64, z: &BigReal, pt: &P5Point, prec: u32) -> Result<BigReal> {
    if pt.t != *z {
        return Err(Error::Invalid("point and z disagree".into()));
    }
    Ok(bn_beta1(n, pt)?.with_prec(prec))
}

/// Level-`n` point (`n >= 1`) from the main-chain point at index `n - 1`.
pub fn level_from_main(main: &P5Point, root: i8) -> Result<P5Point> {
    transf1_inverse(&reciprocal_point(main), root)
}

/// Minimal complex arithmetic over [`BigReal`] for the level-0 seed.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: BigReal,
    pub im: BigReal,
}

impl Complex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Complex { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        let p = re.prec();
        Complex { re, im: BigReal::zero(p) }
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Complex {
        let n = self.norm_sqr();
        Complex::new(&self.re / &n, -(&self.im / &n))
    }

    pub fn scale(&self, s: &BigReal) -> Complex {
        Complex::new(&self.re * s, &self.im * s)
    }

    pub fn add_real(&self, s: i64) -> Complex {
        Complex::new(&self.re + s, self.im.clone())
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        self * &o.recip()
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

/// Level-0 seed `Y = (b + i·conj·z)²/(b² + z²)`, `Y' = -4bY(Y-1)/(z(1+Y))`,
/// where `b = b_0(a = z²)`.
pub fn complex_seed(z: &BigReal, b0: &BigReal, conj: i8) -> (Complex, Complex) {
    let im = z * i64::from(conj);
    let num = Complex::new(b0.clone(), im);
    let y = (&num * &num).scale(&(b0.square() + z.square()).recip());
    let yp = complex_seed_derivative(z, b0, &y);
    (y, yp)
}

fn complex_seed_derivative(z: &BigReal, b: &BigReal, y: &Complex) -> Complex {
    // -4b Y(Y-1) / (z(1+Y))
    let num = (y * &y.add_real(-1)).scale(&(b * -4i64));
    &num / &y.add_real(1).scale(z)
}

/// `b_0` from the complex seed through the real formula of [`bn_beta1`] at
/// `n = 0`, i.e. `-2z y'(1 + y) / (8 y (y-1))`. Returns the complex value.
pub fn bn_beta1_complex(n: i64, z: &BigReal, y: &Complex, yp: &Complex) -> Complex {
    let p = z.prec();
    let c = |v: i64| Complex::real(BigReal::from_i64(v, p));
    let zyp = yp.scale(&(z * 2i64));
    let y2 = y * y;
    let y3 = &y2 * y;
    let num = &(&(&(&c(n) + &(&y2 * &c(7 * n))) - &(&y3 * &c(n))) - &zyp) - &(y * &(&zyp + &c(7 * n)));
    let den = (y * &y.add_real(-1)).scale(&BigReal::from_i64(8, p));
    &num / &den
}

/// P5 residual `Y'' - rhs` of the complex seed for `(0, 0, 0, -8)`, with
/// `Y''` obtained by differentiating the first-order relation along
/// `b'(z) = 2z (1 - b²/z²)`.
pub fn complex_seed_p5_residual(z: &BigReal, b: &BigReal, y: &Complex, yp: &Complex) -> Complex {
    let p = z.prec();
    let yp1 = y.add_real(1);
    let ym1 = y.add_real(-1);
    // g = Y(Y-1)/(1+Y), g' = (Y² + 2Y - 1)/(1+Y)²
    let g = &(y * &ym1) / &yp1;
    let g_prime = &(&(y * y) + &y.scale(&BigReal::from_i64(2, p))).add_real(-1) / &(&yp1 * &yp1);
    let f_y = g_prime.scale(&(b * -4i64 / z));
    let f_z = g.scale(&(b * 4i64 / z.square()));
    let f_b = g.scale(&(BigReal::from_i64(-4, p) / z));
    let db_dz = z * 2i64 * (1i64 - b.square() / z.square());
    let ypp = &(&(&f_y * yp) + &f_z) + &f_b.scale(&db_dz);
    // rhs with A = B = C = 0, D = -8:
    // (1/(2Y) + 1/(Y-1)) Y'² - Y'/z - 8 Y(Y+1)/(Y-1)
    let two = BigReal::from_i64(2, p);
    let coeff = &y.scale(&two).recip() + &ym1.recip();
    let rhs = &(&(&coeff * &(yp * yp)) - &yp.scale(&z.recip())) - &(&(y * &yp1) / &ym1).scale(&BigReal::from_i64(8, p));
    &ypp - &rhs
}

/// `b_0..=b_(n_max)` for `a^k/(k!)²` at `a`.
///
/// `b_0` comes from the complex seed; level 1 from the main chain at index 0;
/// higher levels from [`example_map`] with sign `eps`.
#[derive(Clone, Debug)]
pub struct Beta1Chain {
    pub z: BigReal,
    pub levels: Vec<P5Point>,
    pub b: Vec<BigReal>,
    /// `Im b_0` from the complex seed, zero up to rounding.
    pub b0_imag: BigReal,
    /// `|P5 residual|` of the complex seed.
    pub seed_residual: BigReal,
}

pub fn beta1_table(a: &Rational, n_max: usize, eps: i8, root: i8, prec: u32) -> Result<Beta1Chain> {
    let wp = prec + 16 * n_max as u32 + GUARD_BITS;
    let spec = MeasureSpec::new(a.clone(), Rational::from(1), Lattice::N, None)?;
    let t = spec.a(wp);
    let z = t.sqrt();
    let beta = BigReal::one(wp);
    let b0 = crate::laxchain::initial_b0(&spec, wp)?;

    let (ys, yps) = complex_seed(&z, &b0, 1);
    let b0c = bn_beta1_complex(0, &z, &ys, &yps);
    let seed_residual = complex_seed_p5_residual(&z, &b0, &ys, &yps).abs();
    let mut b = vec![b0c.re.with_prec(prec)];
    let mut levels = Vec::new();
    if n_max >= 1 {
        let main = build_chain(&t, &beta, &b0, 0, wp)?;
        let mut level = level_from_main(&main.points[0], root)?;
        for n in 1..=n_max as i64 {
            b.push(bn_beta1(n, &level)?.with_prec(prec));
            let next = if (n as usize) < n_max { Some(example_map(&level, n, eps)?) } else { None };
            levels.push(level);
            match next {
                Some(l) => level = l,
                None => break,
            }
        }
    }
    Ok(Beta1Chain {
        z: z.with_prec(prec),
        levels,
        b,
        b0_imag: b0c.im.with_prec(prec),
        seed_residual: seed_residual.with_prec(prec),
    })
}

/// Level-`n` values `b_n` for `n = 1..=n_max`, each from the main chain at
/// index `n - 1` directly (no level-to-level maps).
pub fn beta1_direct(a: &Rational, n_max: usize, root: i8, prec: u32) -> Result<Vec<BigReal>> {
    let wp = prec + 16 * n_max as u32 + GUARD_BITS;
    let spec = MeasureSpec::new(a.clone(), Rational::from(1), Lattice::N, None)?;
    let t = spec.a(wp);
    let b0 = crate::laxchain::initial_b0(&spec, wp)?;
    let main = build_chain(&t, &BigReal::one(wp), &b0, n_max.saturating_sub(1), wp)?;
    (1..=n_max)
        .map(|n| {
            let level = level_from_main(&main.points[n - 1], root)?;
            Ok(bn_beta1(n as i64, &level)?.with_prec(prec))
        })
        .collect()
}
