//! Verification suites over a parameter grid.
//!
//! Every suite returns a [`VerificationReport`]; a computation that fails
//! inside a cell becomes a failed cell whose label carries the error, so a
//! suite never aborts half-way.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use rug::Rational;

use crate::error::{Error, Result};
use crate::laxchain::{check_discrete_residuals, recurrence_forward};
use crate::measures::{pearson_residual, Lattice, MeasureSpec};
use crate::mpnum::{parse_decimal, BigReal};
use crate::oracle::{recurrence_from_hankel, recurrence_from_stieltjes};
use crate::painleve::beta1::{
    backlund_general_params, beta1_table, reciprocal_params, transf1_source_params, Signs,
};
use crate::painleve::p3::{btilde_pipeline, p3_branch_params, P3Params, P3Trajectory};
use crate::painleve::{p5_chain_verify_tol, seed_flow_consistency, P5Params};
use crate::report::{merge, Cell, CellParams, VerificationReport};
use crate::toda::{riccati_b0_residual, riccati_symmetry_residual, toda_t_form_residual, TodaStencil};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Discrete,
    Toda,
    Riccati,
    Pearson,
    Symmetry,
    P5Chain,
    P3,
    Beta1,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `All` runs them.
    pub const EACH: [Suite; 8] = [
        Suite::Discrete,
        Suite::Toda,
        Suite::Riccati,
        Suite::Pearson,
        Suite::Symmetry,
        Suite::P5Chain,
        Suite::P3,
        Suite::Beta1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Discrete => "discrete",
            Suite::Toda => "toda",
            Suite::Riccati => "riccati",
            Suite::Pearson => "pearson",
            Suite::Symmetry => "symmetry",
            Suite::P5Chain => "p5chain",
            Suite::P3 => "p3",
            Suite::Beta1 => "beta1",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == lower)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("unknown suite '{s}'")))
    }
}

/// Parameter grid. Invalid combinations (`β = 1` off ℕ) are skipped.
#[derive(Clone, Debug)]
pub struct Grid {
    pub a: Vec<Rational>,
    pub beta: Vec<Rational>,
    pub lattices: Vec<Lattice>,
    /// `τ` for bi-lattice entries.
    pub tau: Rational,
    pub n_max: usize,
    pub prec: u32,
}

impl Grid {
    /// `a = 1`, `β ∈ {1/2, 3/2}`, all lattices, `τ = 2`, `n ≤ 10`.
    ///
    /// At `τ = 1`, `β = 1/2` the bi-lattice weight is elementary and
    /// `a_2² = a` at `a = 1`, where the forward recursion and the closed
    /// form for `b_n'` are singular.
    pub fn standard(prec: u32) -> Self {
        Grid {
            a: vec![Rational::from(1)],
            beta: vec![Rational::from((1, 2)), Rational::from((3, 2))],
            lattices: vec![Lattice::N, Lattice::Shifted, Lattice::BiLattice],
            tau: Rational::from(2),
            n_max: 10,
            prec,
        }
    }

    /// Parses comma-separated decimal lists for `a` and `β`.
    pub fn with_lists(mut self, a: Option<&str>, beta: Option<&str>) -> Result<Self> {
        let list = |s: &str| -> Result<Vec<Rational>> {
            s.split(',').map(|x| parse_decimal(x.trim())).collect()
        };
        if let Some(a) = a {
            self.a = list(a)?;
        }
        if let Some(b) = beta {
            self.beta = list(b)?;
        }
        Ok(self)
    }

    pub fn specs(&self) -> Vec<MeasureSpec> {
        let mut out = Vec::new();
        for lattice in &self.lattices {
            for a in &self.a {
                for beta in &self.beta {
                    let tau = (*lattice == Lattice::BiLattice).then(|| self.tau.clone());
                    if let Ok(s) = MeasureSpec::new(a.clone(), beta.clone(), *lattice, tau) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    fn specs_on(&self, lattice: Lattice) -> Vec<MeasureSpec> {
        self.specs().into_iter().filter(|s| s.lattice() == lattice).collect()
    }
}

fn pow2(e: i64, prec: u32) -> BigReal {
    BigReal::from_i64(2, prec).powi(e as i32)
}

fn decimal(s: &str, prec: u32) -> BigReal {
    BigReal::parse(s, prec).expect("decimal literal")
}

fn error_cell(params: CellParams, n: i64, label: &str, err: &Error, tol: &BigReal) -> Cell {
    Cell::failed(params, n, format!("{label}: {err}"), tol)
}

/// Concatenates per-spec cell lists computed in parallel.
fn collect(suite: Suite, grid: &Grid, specs: Vec<MeasureSpec>, f: impl Fn(&MeasureSpec) -> Vec<Cell> + Sync) -> VerificationReport {
    let started = Instant::now();
    let cells: Vec<Vec<Cell>> = specs.par_iter().map(&f).collect();
    let mut report = VerificationReport::new(suite.name(), grid.prec);
    report.extend(cells.into_iter().flatten());
    report.timed(started)
}

pub fn run(suite: Suite, grid: &Grid) -> Result<VerificationReport> {
    let report = match suite {
        Suite::Discrete => discrete(grid),
        Suite::Toda => toda(grid),
        Suite::Riccati => riccati(grid),
        Suite::Pearson => pearson(grid),
        Suite::Symmetry => symmetry(grid),
        Suite::P5Chain => p5chain(grid),
        Suite::P3 => p3(grid),
        Suite::Beta1 => beta1(grid),
        Suite::All => {
            let started = Instant::now();
            let parts: Vec<VerificationReport> = Suite::EACH.par_iter().map(|s| run(*s, grid)).collect::<Result<_>>()?;
            let mut merged = merge(&parts)?;
            merged.suite = Suite::All.name().into();
            return Ok(merged.timed(started));
        }
    };
    Ok(report)
}

/// Oracle tables against the discrete system, the two oracles against each
/// other, and the forward recursion against the oracle.
pub fn discrete(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    let n_max = grid.n_max;
    collect(Suite::Discrete, grid, grid.specs(), |spec| {
        let params = CellParams::from(spec);
        let half = pow2(-i64::from(prec / 2), prec);
        let fwd_tol = decimal("1e-20", prec);
        let hankel = match recurrence_from_hankel(spec, n_max, prec) {
            Ok(t) => t,
            Err(e) => return vec![error_cell(params, 0, "hankel", &e, &half)],
        };
        let mut cells = check_discrete_residuals(&hankel, spec).cells;
        match recurrence_from_stieltjes(spec, n_max, prec) {
            Ok(st) => cells.extend((0..=n_max).map(|n| {
                let r = [&hankel.a2[n] - &st.a2[n], &hankel.b[n] - &st.b[n]];
                Cell::new(params.clone(), n as i64, "stieltjes-vs-hankel", &r, &half)
            })),
            Err(e) => cells.push(error_cell(params.clone(), 0, "stieltjes", &e, &half)),
        }
        match recurrence_forward(spec, n_max, prec) {
            Ok(fw) => cells.extend((0..=n_max).map(|n| {
                let r = [&hankel.a2[n] - &fw.a2[n], &hankel.b[n] - &fw.b[n]];
                Cell::new(params.clone(), n as i64, "forward-vs-hankel", &r, &fwd_tol)
            })),
            Err(e) => cells.push(error_cell(params.clone(), 0, "forward", &e, &fwd_tol)),
        }
        cells
    })
}

/// Step `2^-(prec/10)` and tolerance `2^16 (h⁴ + 2^-(prec/2)/h)`.
pub fn toda_step_and_tol(prec: u32) -> (BigReal, BigReal) {
    let e = i64::from(prec / 10);
    let h = pow2(-e, prec);
    let tol = (h.powi(4) + pow2(-i64::from(prec / 2) + e, prec)) * 65536i64;
    (h, tol)
}

/// Toda equations and the closed forms for `x_n'`, `b_n'` at every row,
/// plus the `t = log a` form at `n = 1`.
pub fn toda(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    let n_max = grid.n_max;
    collect(Suite::Toda, grid, grid.specs(), |spec| {
        let params = CellParams::from(spec);
        let (h, tol) = toda_step_and_tol(prec);
        let stencil = match TodaStencil::new(spec, &spec.a(prec), &h, n_max, prec) {
            Ok(s) => s,
            Err(e) => return vec![error_cell(params, 0, "toda", &e, &tol)],
        };
        let mut cells: Vec<Cell> = (0..=n_max)
            .map(|n| Cell::new(params.clone(), n as i64, "toda,xprime,bprime", &stencil.residuals(n).as_vec(), &tol))
            .collect();
        let n_t = 1.min(n_max);
        cells.push(match toda_t_form_residual(spec, n_t, &h, prec) {
            Ok((r1, r2)) => Cell::new(params.clone(), n_t as i64, "toda-log-a", &[r1, r2], &tol),
            Err(e) => error_cell(params, n_t as i64, "toda-log-a", &e, &tol),
        });
        cells
    })
}

/// The Riccati equation for `b_0` with an exact derivative, and its
/// invariance under `β → 2 - β`.
pub fn riccati(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    collect(Suite::Riccati, grid, grid.specs(), |spec| {
        let params = CellParams::from(spec);
        let tol = pow2(-i64::from(prec) + 16, prec);
        let a = spec.a(prec);
        let mut cells = Vec::with_capacity(2);
        for (label, r) in [
            ("riccati-b0", riccati_b0_residual(spec, &a, prec)),
            ("riccati-2-beta", riccati_symmetry_residual(spec, &a, prec)),
        ] {
            cells.push(match r {
                Ok(r) => Cell::new(params.clone(), 0, label, &[r], &tol),
                Err(e) => error_cell(params.clone(), 0, label, &e, &tol),
            });
        }
        cells
    })
}

/// Pearson equation of the weight on ℕ for `k = 1..=50`, relative to `w_k`.
pub fn pearson(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    collect(Suite::Pearson, grid, grid.specs_on(Lattice::N), |spec| {
        let params = CellParams::from(spec);
        let tol = pow2(-i64::from(prec) + 16, prec);
        (1..=50u64)
            .map(|k| {
                let rel = pearson_residual(spec, k, prec)
                    .and_then(|r| Ok(r / crate::measures::weight_at(spec, k, prec)?));
                match rel {
                    Ok(r) => Cell::new(params.clone(), k as i64, "pearson", &[r], &tol),
                    Err(e) => error_cell(params.clone(), k as i64, "pearson", &e, &tol),
                }
            })
            .collect()
    })
}

/// `â_n²(β) = a_n²(2 - β)` and `b̂_n(β) = b_n(2 - β) + 1 - β` between the
/// shifted lattice and ℕ, for `n ≤ max(15, n_max)`, tolerance `10^-30`.
pub fn symmetry(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    let n_sym = grid.n_max.max(15);
    let specs = grid.specs_on(Lattice::Shifted);
    collect(Suite::Symmetry, grid, specs, |spec| {
        let params = CellParams::from(spec);
        let tol = decimal("1e-30", prec);
        let mirrored = Rational::from(2) - spec.beta_exact();
        let tables = spec
            .with_lattice(Lattice::N, None)
            .and_then(|n| n.with_beta(mirrored))
            .and_then(|n| Ok((recurrence_from_hankel(spec, n_sym, prec)?, recurrence_from_hankel(&n, n_sym, prec)?)));
        let (hat, plain) = match tables {
            Ok(t) => t,
            Err(e) => return vec![error_cell(params, 0, "symmetry", &e, &tol)],
        };
        let shift = 1i64 - spec.beta(prec);
        (0..=n_sym)
            .map(|n| {
                let r = [&hat.a2[n] - &plain.a2[n], &hat.b[n] - &plain.b[n] - &shift];
                Cell::new(params.clone(), n as i64, "shifted-vs-n-mirror", &r, &tol)
            })
            .collect()
    })
}

/// Bäcklund chain against the oracle, and the `n = 0` seed transported by
/// the integrator over `[a, a + 1/2]` against the Bessel ratio.
pub fn p5chain(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    let n_max = grid.n_max;
    collect(Suite::P5Chain, grid, grid.specs(), |spec| {
        let params = CellParams::from(spec);
        let tol = decimal("1e-20", prec);
        let mut cells = match p5_chain_verify_tol(spec, n_max, prec, &tol) {
            Ok((r, _)) => r.cells,
            Err(e) => vec![error_cell(params.clone(), 0, "chain", &e, &tol)],
        };
        let t1 = spec.a(prec) + decimal("0.5", prec);
        match seed_flow_consistency(spec, &t1, 10, prec) {
            Ok(flow) => {
                let r: Vec<BigReal> = flow.into_iter().map(|(_, d)| d).collect();
                cells.push(Cell::new(params, 0, "seed-flow", &r, &tol));
            }
            Err(e) => cells.push(error_cell(params, 0, "seed-flow", &e, &tol)),
        }
        cells
    })
}

/// Reference `(α̃, β̃)` of the four parameter sets, written out per set.
pub fn p3_reference_params(branch: usize, n: i64, beta: &Rational) -> P3Params {
    let n = Rational::from(n);
    let (al, be) = match branch {
        1 => (Rational::from(&n + 1u32) - beta, -Rational::from(&n + beta)),
        2 => (-(Rational::from(&n + 3u32) - beta), Rational::from(&n + beta)),
        3 => (Rational::from(&n - 1u32) + beta, -(Rational::from(&n + 2u32) - beta)),
        _ => (-(Rational::from(&n + 1u32) + beta), Rational::from(&n + 2u32) - beta),
    };
    P3Params {
        alpha: al * 2u32,
        beta: be * 2u32,
    }
}

/// Parameter sets by sign enumeration against the reference ones, `B̃_n`
/// from all four branches against the oracle at `z = 2√a` (tolerance
/// `10^-15`), and the fourth-order decay of the finite-difference P3
/// residual at `n = min(2, n_max)`. Runs on the ℕ entries of the grid.
pub fn p3(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    let n_max = grid.n_max;
    collect(Suite::P3, grid, grid.specs_on(Lattice::N), |spec| {
        let params = CellParams::from(spec);
        let tol = decimal("1e-15", prec);
        let exact_tol = BigReal::zero(prec);
        let mut cells = Vec::new();
        for n in 0..=n_max as i64 {
            let mismatches = (1..=4)
                .filter(|&b| p3_branch_params(b, n, spec.beta_exact()).ok() != Some(p3_reference_params(b, n, spec.beta_exact())))
                .count();
            let r = [BigReal::from_i64(mismatches as i64, prec)];
            cells.push(Cell::new(params.clone(), n, "p3-parameter-sets", &r, &exact_tol));
        }
        let oracle = match recurrence_from_hankel(spec, n_max, prec) {
            Ok(t) => t,
            Err(e) => return vec![error_cell(params, 0, "hankel", &e, &tol)],
        };
        for n in 0..=n_max {
            let r: Result<Vec<BigReal>> = (1..=4)
                .map(|b| Ok(btilde_pipeline(spec, n, b, prec)? - &oracle.b[n]))
                .collect();
            cells.push(match r {
                Ok(r) => Cell::new(params.clone(), n as i64, "btilde-branches-1-4", &r, &tol),
                Err(e) => error_cell(params.clone(), n as i64, "btilde", &e, &tol),
            });
        }
        let n_fd = 2.min(n_max);
        let order_tol = decimal("0.25", prec);
        cells.push(match p3_order_defect(spec, n_fd, prec) {
            Ok(d) => Cell::new(params, n_fd as i64, "p3-fd-order", &[d], &order_tol),
            Err(e) => error_cell(params, n_fd as i64, "p3-fd-order", &e, &order_tol),
        });
        cells
    })
}

/// `|log₂(r(h)/r(h/2)) - 4|` for the five-point P3 residual at `z0 = 2√a`,
/// `h = z0/100`, branch 1.
pub fn p3_order_defect(spec: &MeasureSpec, n: usize, prec: u32) -> Result<BigReal> {
    let wp = prec.min(256);
    let z0 = spec.a(wp).sqrt() * 2i64;
    let h = &z0 / 100i64;
    let traj = P3Trajectory::new(spec, n, &(&h * 3i64), 1, wp)?;
    let zero = BigReal::zero(wp);
    let r1 = traj.residual(&zero, &h)?.abs();
    let r2 = traj.residual(&zero, &(&h / 2i64))?.abs();
    Ok(BigReal::from_f64(((r1 / r2).log2_abs() - 4.0).abs(), prec))
}

/// The `β = 1` reduction: parameter bookkeeping of the maps, the level-0
/// complex seed, and `b_n` for every sign of the transformation root and
/// of the level map against the oracle for `a^k/(k!)²`, tolerance `10^-15`.
pub fn beta1(grid: &Grid) -> VerificationReport {
    let prec = grid.prec;
    let n_max = grid.n_max;
    let specs: Vec<MeasureSpec> = grid
        .a
        .iter()
        .filter_map(|a| MeasureSpec::new(a.clone(), Rational::from(1), Lattice::N, None).ok())
        .collect();
    collect(Suite::Beta1, grid, specs, |spec| {
        let params = CellParams::from(spec);
        let tol = decimal("1e-15", prec);
        let zero = BigReal::zero(prec);
        let mut cells = Vec::new();
        for n in 0..=n_max as i64 {
            cells.push(Cell::new(params.clone(), n, "beta1-parameters", &[beta1_bookkeeping(n)], &zero));
        }
        let oracle = match recurrence_from_hankel(spec, n_max, prec) {
            Ok(t) => t,
            Err(e) => return vec![error_cell(params, 0, "hankel", &e, &tol)],
        };
        let seed_tol = pow2(-i64::from(prec / 2), prec);
        for eps in [-1i8, 1] {
            for root in [-1i8, 1] {
                let label = format!("beta1-chain eps={eps} root={root}");
                match beta1_table(spec.a_exact(), n_max, eps, root, prec) {
                    Ok(chain) => {
                        if eps == -1 && root == -1 {
                            let r = [chain.b0_imag.clone(), chain.seed_residual.clone()];
                            cells.push(Cell::new(params.clone(), 0, "beta1-complex-seed", &r, &seed_tol));
                        }
                        cells.extend((0..=n_max).map(|n| {
                            Cell::new(params.clone(), n as i64, label.clone(), &[&chain.b[n] - &oracle.b[n]], &tol)
                        }));
                    }
                    Err(e) => cells.push(error_cell(params.clone(), 0, &label, &e, &tol)),
                }
            }
        }
        cells
    })
}

/// Number of failed parameter identities at level `n`: `y → 1/y` then the
/// quadratic map take `(0, -(n+1)²/2, 2, 0)` to `((n+1)²/8, -(n+1)²/8, 0, -8)`,
/// and the level map with signs `(-, -, ±)` takes level `n` to `n + 1`.
pub fn beta1_bookkeeping(n: i64) -> BigReal {
    let mut bad = 0i64;
    let main = P5Params::recurrence(n, &Rational::from(1), &Rational::from(1));
    match transf1_source_params(&reciprocal_params(&main)) {
        Ok(p) if p == P5Params::beta1(n + 1) => {}
        _ => bad += 1,
    }
    for eps in [-1i8, 1] {
        let signs: Signs = [-1, -1, eps];
        match backlund_general_params(&P5Params::beta1(n), signs) {
            Ok((p, _)) if p == P5Params::beta1(n + 1) => {}
            _ => bad += 1,
        }
    }
    BigReal::from_i64(bad, 64)
}
