//! From P5 with `D = 0`, `C = 1` to Painlevé III.
//!
//! With `k₁ = 1/2` the recurrence solution `Y(T)`, `T = 2a`, solves P5 with
//! `((β-1)²/2, -(n+1)²/2, 1, 0)`. Then
//!
//! ```text
//! u(z) = √(2T) Y / Φ,   z² = 2T,
//! Φ = T Y' - r_A Y² + (r_A + r_B) Y - r_B
//! ```
//!
//! with `r_A = s₁(β-1)`, `r_B = s₂(n+1)` solves
//! `u'' = u'²/u - u'/z + (α̃ u² + β̃)/z + u³ - 1/u`, where
//! `α̃ = 2(r_A - r_B - 1)` and `β̃ = 2(r_A + r_B)`.
//!
//! The `1/u` term carries coefficient `δ̃ = -1` in the convention
//! `... + γ̃ u³ + δ̃/u`.

use rug::Rational;

use super::integrate::{p5_integrate_dense, IntegrateOptions, P5Trajectory};
use super::{build_chain, nonvanishing, p5_second_derivative, P3Point, P5Params, P5Point, CHAIN_BITS_PER_STEP};
use crate::error::{Error, Result};
use crate::laxchain::initial_b0;
use crate::measures::MeasureSpec;
use crate::mpnum::{rational_to_big, BigReal, GUARD_BITS};

/// Signs `(s₁, s₂)` of the four numbered parameter sets.
pub const BRANCH_SIGNS: [(i8, i8); 4] = [(-1, -1), (1, 1), (1, -1), (-1, 1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P3Params {
    pub alpha: Rational,
    pub beta: Rational,
}

/// `(α̃, β̃)` for index `n`, weight parameter `β` and root signs `(s₁, s₂)`.
pub fn p3_params(n: i64, beta: &Rational, signs: (i8, i8)) -> P3Params {
    let r_a = Rational::from(beta - 1u32) * i32::from(signs.0);
    let r_b = Rational::from(n + 1) * i32::from(signs.1);
    P3Params {
        alpha: Rational::from(&r_a - &r_b) * 2u32 - 2u32,
        beta: Rational::from(&r_a + &r_b) * 2u32,
    }
}

/// Parameter set number `branch` (1 to 4).
pub fn p3_branch_params(branch: usize, n: i64, beta: &Rational) -> Result<P3Params> {
    Ok(p3_params(n, beta, branch_signs(branch)?))
}

/// Maps a point of `Y(T)` (parameters `params`, `C = 1`, `D = 0`) to `u` and
/// `u'` at `z = √(2T)`.
pub fn p3_from_p5(pt: &P5Point, params: &P5Params, n: i64, beta: &Rational, signs: (i8, i8)) -> Result<(P3Point, P3Params)> {
    if params.d != 0 || params.c.clone().square() != 1 {
        return Err(Error::domain(format!("P5 to P3 needs C² = 1 and D = 0, got {params}")));
    }
    let prec = pt.prec();
    let r_a = rational_to_big(&(Rational::from(beta - 1u32) * i32::from(signs.0)), prec);
    let r_b = BigReal::from_i64((n + 1) * i64::from(signs.1), prec);
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let ypp = p5_second_derivative(params, pt)?;

    let phi = t * yp - &r_a * y.square() + (&r_a + &r_b) * y - &r_b;
    nonvanishing(&phi, &BigReal::one(prec), "Φ")?;
    let dphi = yp + t * &ypp - &r_a * 2i64 * y * yp + (&r_a + &r_b) * yp;
    let s = (t * 2i64).sqrt();
    let u = &s * y / &phi;
    // du/dT, then dT/dz = z with z = s
    let du_dt = y / (&s * &phi) + &s * (yp * &phi - y * &dphi) / phi.square();
    let up = du_dt * &s;
    Ok((P3Point { z: s, u, up }, p3_params(n, beta, signs)))
}

/// `u'' ` from P3 with `γ̃ = 1`, `δ̃ = -1`.
pub fn p3_second_derivative(params: &P3Params, pt: &P3Point) -> Result<BigReal> {
    let prec = pt.u.prec();
    nonvanishing(&pt.u, &BigReal::one(prec), "u")?;
    let (z, u, up) = (&pt.z, &pt.u, &pt.up);
    let al = rational_to_big(&params.alpha, prec);
    let be = rational_to_big(&params.beta, prec);
    Ok(up.square() / u - up / z + (al * u.square() + be) / z + u.powi(3) - u.recip())
}

/// `B̃_n(z)` by branch:
///
/// 1 and 3: `-(z + u(2β - 2n - 1 + z u) + z u') / (4u)`;
/// 2: `(1 + 2n - 2β + z(8(n+1)/(z - u(z u + 2β - 2n - 5) - z u') - (u' + u² + 1)/u)) / 4`;
/// 4: `(1 + 2n - 2β + z(8(n+1)/(z + u(1 + 2n + 2β - z u) - z u') - (1 + u² + u')/u)) / 4`.
///
/// Branches 1 and 3 share one formula; they differ through the `u` fed in.
pub fn btilde_from_p3(branch: usize, z: &BigReal, u: &BigReal, up: &BigReal, n: i64, beta: &BigReal) -> Result<BigReal> {
    let prec = u.prec();
    let one = BigReal::one(prec);
    nonvanishing(u, &one, "u")?;
    let two_beta = beta * 2i64;
    match branch {
        1 | 3 => {
            let inner = &two_beta - (2 * n + 1) + z * u;
            Ok(-(z + u * inner + z * up) / (u * 4i64))
        }
        2 => {
            let den = z - u * (z * u + &two_beta - (2 * n + 5)) - z * up;
            nonvanishing(&den, &one, "branch 2 denominator")?;
            let inner = BigReal::from_i64(8 * (n + 1), prec) / den - (up + u.square() + 1i64) / u;
            Ok(((1 + 2 * n) - &two_beta + z * inner) / 4i64)
        }
        4 => {
            let den = z + u * ((1 + 2 * n) + &two_beta - z * u) - z * up;
            nonvanishing(&den, &one, "branch 4 denominator")?;
            let inner = BigReal::from_i64(8 * (n + 1), prec) / den - (u.square() + up + 1i64) / u;
            Ok(((1 + 2 * n) - &two_beta + z * inner) / 4i64)
        }
        _ => Err(Error::Invalid(format!("P3 branch {branch} not in 1..=4"))),
    }
}

/// Five-point second-derivative residual of P3 at `z0` with step `h`,
/// `u(z)` and `u'(z)` supplied by `eval`.
pub fn p3_residual_fd<F>(params: &P3Params, z0: &BigReal, h: &BigReal, mut eval: F) -> Result<BigReal>
where
    F: FnMut(&BigReal) -> Result<P3Point>,
{
    let pts: Vec<P3Point> = (-2i64..=2).map(|k| eval(&(z0 + h * k))).collect::<Result<_>>()?;
    let f: Vec<&BigReal> = pts.iter().map(|p| &p.u).collect();
    let upp = (-f[0].clone() + f[1] * 16i64 - f[2] * 30i64 + f[3] * 16i64 - f[4]) / (h.square() * 12i64);
    Ok(upp - p3_second_derivative(params, &pts[2])?)
}

/// Maps a main-chain point (`k₁ = 1`, `t = a`) at index `n` to P3 through
/// the `k₁ = 1/2` form: `T = 2t`, `Y(T) = y(t)`, `Y'(T) = y'(t)/2`.
pub fn p3_from_main(main: &P5Point, n: i64, beta: &Rational, signs: (i8, i8)) -> Result<(P3Point, P3Params)> {
    let lifted = main.rescaled(&BigReal::from_i64(2, main.prec()));
    let params = P5Params::recurrence(n, beta, &Rational::from((1, 2)));
    p3_from_p5(&lifted, &params, n, beta, signs)
}

/// Main-chain point at index `n` and `t = a` of `spec`.
pub fn main_point_at(spec: &MeasureSpec, n: usize, prec: u32) -> Result<P5Point> {
    let wp = prec + CHAIN_BITS_PER_STEP * n as u32 + GUARD_BITS;
    let b0 = initial_b0(spec, wp)?;
    let chain = build_chain(&spec.a(wp), &spec.beta(wp), &b0, n, wp)?;
    Ok(chain.points[n].clone())
}

fn branch_signs(branch: usize) -> Result<(i8, i8)> {
    BRANCH_SIGNS
        .get(branch.wrapping_sub(1))
        .copied()
        .ok_or_else(|| Error::Invalid(format!("P3 branch {branch} not in 1..=4")))
}

/// `B̃_n(z)` at `z = 2√a` through the full pipeline: chain at `t = a`, the
/// P3 map with the signs of `branch`, then the branch formula.
pub fn btilde_pipeline(spec: &MeasureSpec, n: usize, branch: usize, prec: u32) -> Result<BigReal> {
    let signs = branch_signs(branch)?;
    let main = main_point_at(spec, n, prec)?;
    let (pt, _) = p3_from_main(&main, n as i64, spec.beta_exact(), signs)?;
    let beta = spec.beta(main.prec());
    Ok(btilde_from_p3(branch, &pt.z, &pt.u, &pt.up, n as i64, &beta)?.with_prec(prec))
}

/// Dense solution of the level-`n` main equation around the spec's `a`,
/// covering `z0 - reach` to `z0 + reach` with `z0 = 2√a`, viewed as a P3
/// solution.
#[derive(Clone, Debug)]
pub struct P3Trajectory {
    pub n: i64,
    pub beta: Rational,
    pub signs: (i8, i8),
    pub params: P3Params,
    pub z0: BigReal,
    pub reach: BigReal,
    left: P5Trajectory,
    right: P5Trajectory,
}

impl P3Trajectory {
    pub fn new(spec: &MeasureSpec, n: usize, reach: &BigReal, branch: usize, prec: u32) -> Result<Self> {
        let signs = branch_signs(branch)?;
        let main = main_point_at(spec, n, prec)?;
        let wp = main.prec();
        let z0 = main.t.sqrt() * 2i64;
        let reach = reach.with_prec(wp);
        if reach >= z0 {
            return Err(Error::domain("P3 window must stay in z > 0"));
        }
        let params = P5Params::recurrence(n as i64, spec.beta_exact(), &Rational::from(1));
        let opts = IntegrateOptions::for_bits(prec + 8);
        let t_of = |z: &BigReal| z.square() / 4i64;
        let left = p5_integrate_dense(&params, &main, &t_of(&(&z0 - &reach)), &opts, wp)?;
        let right = p5_integrate_dense(&params, &main, &t_of(&(&z0 + &reach)), &opts, wp)?;
        Ok(P3Trajectory {
            n: n as i64,
            beta: spec.beta_exact().clone(),
            signs,
            params: p3_params(n as i64, spec.beta_exact(), signs),
            z0,
            reach,
            left,
            right,
        })
    }

    /// `(z, u(z), u'(z))`.
    pub fn eval(&self, z: &BigReal) -> Result<P3Point> {
        let t = z.square() / 4i64;
        let main = if *z < self.z0 { self.left.eval(&t)? } else { self.right.eval(&t)? };
        Ok(p3_from_main(&main, self.n, &self.beta, self.signs)?.0)
    }

    /// Five-point residual of P3 at `z0 + offset` with spacing `h`.
    pub fn residual(&self, offset: &BigReal, h: &BigReal) -> Result<BigReal> {
        let z = &self.z0 + offset;
        p3_residual_fd(&self.params, &z, h, |w| self.eval(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Lattice;
    use crate::oracle::recurrence_from_hankel;

    #[test]
    fn numbered_parameter_sets() {
        let b = Rational::from((3, 2));
        for n in 0..4i64 {
            let nq = Rational::from(n);
            let want = [
                (Rational::from(&nq + 1u32) - &b, -Rational::from(&nq + &b)),
                (-(Rational::from(&nq + 3u32) - &b), Rational::from(&nq + &b)),
                (Rational::from(&nq - 1u32) + &b, -(Rational::from(&nq + 2u32) - &b)),
                (-(Rational::from(&nq + 1u32) + &b), Rational::from(&nq + 2u32) - &b),
            ];
            for (k, (al, be)) in want.into_iter().enumerate() {
                let p = p3_branch_params(k + 1, n, &b).unwrap();
                assert_eq!(p.alpha, al * 2u32, "branch {} n {n}", k + 1);
                assert_eq!(p.beta, be * 2u32, "branch {} n {n}", k + 1);
            }
        }
        assert!(p3_branch_params(0, 1, &b).is_err());
        assert!(p3_branch_params(5, 1, &b).is_err());
    }

    #[test]
    fn beta_one_sets_collapse_to_two() {
        let one = Rational::from(1);
        for n in 0..4i64 {
            let a = P3Params {
                alpha: Rational::from(2 * n),
                beta: Rational::from(-2 * (n + 1)),
            };
            let b = P3Params {
                alpha: Rational::from(-2 * (n + 2)),
                beta: Rational::from(2 * (n + 1)),
            };
            for k in 1..=4 {
                let p = p3_branch_params(k, n, &one).unwrap();
                assert!(p == a || p == b);
            }
        }
    }

    #[test]
    fn branches_one_and_three_agree() {
        let p = 128;
        let z = BigReal::from_i64(2, p);
        let u = BigReal::parse("0.7", p).unwrap();
        let up = BigReal::parse("-0.2", p).unwrap();
        let beta = BigReal::parse("1.5", p).unwrap();
        assert_eq!(
            btilde_from_p3(1, &z, &u, &up, 2, &beta).unwrap(),
            btilde_from_p3(3, &z, &u, &up, 2, &beta).unwrap()
        );
    }

    #[test]
    fn every_branch_reproduces_oracle() {
        let p = 256;
        let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None).unwrap();
        let oracle = recurrence_from_hankel(&spec, 3, p).unwrap();
                for branch in 1..=4 {
            for n in 0..=3 {
                let b = btilde_pipeline(&spec, n, branch, p).unwrap();
                assert!((b - &oracle.b[n]).abs() < 1e-40, "branch {branch} n {n}");
            }
        }
    }

    #[test]
    fn residual_is_fourth_order() {
        let p = 192;
        let spec = MeasureSpec::parse("1", "1.5", Lattice::N, None).unwrap();
        let reach = BigReal::parse("0.1", p).unwrap();
        let traj = P3Trajectory::new(&spec, 2, &reach, 1, p).unwrap();
        let zero = BigReal::zero(p);
        let h1 = BigReal::parse("0.02", p).unwrap();
        let h2 = BigReal::parse("0.01", p).unwrap();
        let r1 = traj.residual(&zero, &h1).unwrap().abs();
        let r2 = traj.residual(&zero, &h2).unwrap().abs();
        let ratio = (r1 / r2).to_f64();
        assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
    }
}
