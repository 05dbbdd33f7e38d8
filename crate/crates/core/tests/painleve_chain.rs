use charlier::laxchain::initial_b0_at;
use charlier::oracle::recurrence_from_hankel;
use charlier::painleve::{
    backlund_down, bn_from_y, build_chain, first_order_residual, p5_integrate_dense, p5_second_derivative,
    seed_classical_y0, IntegrateOptions, P5Params, P5Point,
};
use charlier::{BigReal, Lattice, MeasureSpec};
use proptest::prelude::*;
use rug::Rational;

const P: u32 = 256;

fn spec(a: &str, beta: &str, lattice: Lattice, tau: Option<&str>) -> MeasureSpec {
    MeasureSpec::parse(a, beta, lattice, tau).unwrap()
}

fn specs() -> Vec<MeasureSpec> {
    vec![
        spec("1", "1.5", Lattice::N, None),
        spec("0.8", "2.5", Lattice::N, None),
        spec("1", "0.5", Lattice::Shifted, None),
        spec("1.3", "0.5", Lattice::BiLattice, Some("1")),
    ]
}

fn seed(s: &MeasureSpec, a: &BigReal) -> P5Point {
    let b0 = initial_b0_at(s, a, P).unwrap();
    seed_classical_y0(a, &s.beta(P), &b0, P).unwrap()
}

fn params(s: &MeasureSpec, n: i64) -> P5Params {
    P5Params::recurrence(n, s.beta_exact(), &Rational::from(1))
}

/// `y''` by differentiating `F(t, y, y') = 0` once:
/// `F = (y-1) g + 2t(y-1)y' - t² y'²`, `g = 1 + c y³ - (4t+c) y² - y`.
fn implicit_second_derivative(beta: &BigReal, pt: &P5Point) -> BigReal {
    let (t, y, yp) = (&pt.t, &pt.y, &pt.yp);
    let c = (beta - 1i64).square();
    let ym1 = y - 1i64;
    let g = 1i64 + &c * y.powi(3) - (t * 4i64 + &c) * y.square() - y;
    let dg = &c * y.square() * 3i64 - (t * 4i64 + &c) * y * 2i64 - 1i64;
    let f_t = -(y.square() * 4i64 * &ym1) + &ym1 * yp * 2i64 - t * yp.square() * 2i64;
    let f_y = g + &ym1 * dg + t * yp * 2i64;
    let f_yp = t * &ym1 * 2i64 - t.square() * yp * 2i64;
    -(f_t + f_y * yp) / f_yp
}

#[test]
fn seed_solves_both_equations() {
    for s in specs() {
        let pt = seed(&s, &s.a(P));
        assert!(first_order_residual(&s.beta(P), &pt).abs().log2_abs() < -200.0, "{s}");
        let ypp = p5_second_derivative(&params(&s, 0), &pt).unwrap();
        let implicit = implicit_second_derivative(&s.beta(P), &pt);
        assert!(((ypp - &implicit) / implicit).abs().log2_abs() < -200.0, "{s}");
        assert!((bn_from_y(0, &s.beta(P), &pt).unwrap() - initial_b0_at(&s, &s.a(P), P).unwrap()).abs().log2_abs() < -200.0);
    }
}

#[test]
fn dense_output_has_the_p5_curvature() {
    let s = spec("1", "1.5", Lattice::N, None);
    let a = s.a(P);
    let t1 = &a + BigReal::parse("0.1", P).unwrap();
    let traj = p5_integrate_dense(&params(&s, 0), &seed(&s, &a), &t1, &IntegrateOptions::for_bits(200), P).unwrap();
    let mid = &a + BigReal::parse("0.05", P).unwrap();
    let h = BigReal::parse("1e-3", P).unwrap();
    let yp = |k: i64| traj.eval(&(&mid + &h * k)).unwrap().yp;
    let fd = (yp(-2) - yp(-1) * 8i64 + yp(1) * 8i64 - yp(2)) / (&h * 12i64);
    let exact = p5_second_derivative(&params(&s, 0), &traj.eval(&mid).unwrap()).unwrap();
    assert!((fd - exact).abs().to_f64() < 1e-9);
}

#[test]
fn tightening_tolerance_converges() {
    let s = spec("1", "0.5", Lattice::Shifted, None);
    let a = s.a(P);
    let t1 = &a + BigReal::parse("0.1", P).unwrap();
    let start = seed(&s, &a);
    let end_y = |bits| p5_integrate_dense(&params(&s, 0), &start, &t1, &IntegrateOptions::for_bits(bits), P).unwrap().end.y;
    let reference = end_y(230);
    let loose = (end_y(60) - &reference).abs();
    let tight = (end_y(120) - &reference).abs();
    assert!(tight < loose || loose.log2_abs() < -100.0);
    assert!(tight.log2_abs() < -100.0);
}

#[test]
fn flow_keeps_the_seed_classical() {
    let s = spec("1", "1.5", Lattice::N, None);
    let a = s.a(P);
    let t1 = &a + BigReal::parse("0.1", P).unwrap();
    let traj = p5_integrate_dense(&params(&s, 0), &seed(&s, &a), &t1, &IntegrateOptions::for_bits(220), P).unwrap();
    let b_end = bn_from_y(0, &s.beta(P), &traj.end).unwrap();
    assert!((b_end - initial_b0_at(&s, &t1, P).unwrap()).abs().to_f64() < 1e-40);
}

#[test]
fn chain_matches_oracle_and_steps_back() {
    let p = 512;
    for s in specs() {
        let a = s.a(p + 300);
        let b0 = initial_b0_at(&s, &a, p + 300).unwrap();
        let chain = build_chain(&a, &s.beta(p + 300), &b0, 8, p).unwrap();
        let orc = recurrence_from_hankel(&s, 9, p).unwrap();
        let beta = s.beta(p + 300);
        for n in 0..=8 {
            assert!((&chain.b[n] - &orc.b[n]).abs().to_f64() < 1e-20, "{s} b_{n}");
            assert!((chain.x_next(n) - &orc.a2[n + 1]).abs().to_f64() < 1e-20, "{s} a2_{}", n + 1);
            if n >= 1 {
                let back = backlund_down(&chain.points[n], n as i64, &beta).unwrap();
                assert!((back - &chain.points[n - 1].y).abs().to_f64() < 1e-20, "{s} down {n}");
            }
        }
    }
}

proptest! {
    #[test]
    fn parameters_depend_on_beta_through_the_mirror(num in -400i64..400, n in 0i64..20) {
        let beta = Rational::from((num, 100));
        let mirror = Rational::from(2) - &beta;
        let k1 = Rational::from(1);
        prop_assert_eq!(P5Params::recurrence(n, &beta, &k1), P5Params::recurrence(n, &mirror, &k1));
    }
}
