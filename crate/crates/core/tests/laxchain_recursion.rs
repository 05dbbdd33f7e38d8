use charlier::laxchain::{discrete_residuals, forward_from, initial_b0, recurrence_forward};
use charlier::oracle::recurrence_from_hankel;
use charlier::{BigReal, Lattice, MeasureSpec};

fn spec(a: &str, beta: &str, lattice: Lattice, tau: Option<&str>) -> MeasureSpec {
    MeasureSpec::parse(a, beta, lattice, tau).unwrap()
}

fn grid() -> Vec<MeasureSpec> {
    vec![
        spec("1", "1.5", Lattice::N, None),
        spec("0.7", "3", Lattice::N, None),
        spec("1", "0.5", Lattice::Shifted, None),
        spec("2.5", "1.3", Lattice::Shifted, None),
        spec("1", "0.5", Lattice::BiLattice, Some("2")),
        spec("1.2", "0.8", Lattice::BiLattice, Some("0.3")),
    ]
}

#[test]
fn oracle_satisfies_the_discrete_system() {
    let p = 512;
    let tol = BigReal::from_i64(2, 64).powi(-(p as i32) / 2);
    for s in grid() {
        let t = recurrence_from_hankel(&s, 12, p).unwrap();
        for n in 0..=12 {
            for r in discrete_residuals(&t, n) {
                assert!(r.abs() < tol, "{s} row {n}");
            }
        }
    }
}

#[test]
fn forward_recursion_tracks_the_oracle() {
    for s in grid() {
        let fwd = recurrence_forward(&s, 10, 512).unwrap();
        let orc = recurrence_from_hankel(&s, 10, 512).unwrap();
        let (da, db) = fwd.max_abs_diff(&orc);
        assert!(da.to_f64() < 1e-20 && db.to_f64() < 1e-20, "{s}");
    }
}

#[test]
fn perturbed_seed_loses_the_solution() {
    // the minimal solution is unstable under forward iteration
    let s = spec("1", "1.5", Lattice::N, None);
    let p = 512;
    let orc = recurrence_from_hankel(&s, 20, p).unwrap();
    let b0 = initial_b0(&s, p).unwrap() + BigReal::parse("1e-20", p).unwrap();
    let diverged = match forward_from(&s, b0, 20, p) {
        Err(_) => true,
        Ok(t) => (0..=20).any(|n| (&t.b[n] - &orc.b[n]).abs().to_f64() > 1.0),
    };
    assert!(diverged);
}

#[test]
fn corruption_shows_up_linearly_in_the_first_equation() {
    let s = spec("1.4", "2.2", Lattice::N, None);
    let p = 256;
    let mut t = recurrence_from_hankel(&s, 8, p).unwrap();
    let delta = BigReal::parse("1e-10", p).unwrap();
    t.b[4] += &delta;
    // b_n + b_(n-1) enters rows 4 and 5 with unit coefficient
    for n in [4, 5] {
        let r = &discrete_residuals(&t, n)[0];
        assert!(((r - &delta) / &delta).abs().to_f64() < 1e-60, "row {n}");
    }
    assert!(discrete_residuals(&t, 3)[0].abs().to_f64() < 1e-60);
    // the second equation responds at rows 3 and 4 only
    let tol = 1e-60;
    assert!(discrete_residuals(&t, 2)[1].abs().to_f64() < tol);
    assert!(discrete_residuals(&t, 4)[1].abs().to_f64() > 1e-12);
    assert!(discrete_residuals(&t, 5)[1].abs().to_f64() < tol);
}
