use charlier::measures::moments;
use charlier::oracle::{det_bareiss, hankel_det, recurrence_from_hankel, recurrence_from_stieltjes};
use charlier::{BigReal, Lattice, MeasureSpec, Source};
use proptest::prelude::*;

fn spec(a: &str, beta: &str, lattice: Lattice, tau: Option<&str>) -> MeasureSpec {
    MeasureSpec::parse(a, beta, lattice, tau).unwrap()
}

#[test]
fn two_by_two_hankel_by_hand() {
    let p = 256;
    let s = spec("1", "2", Lattice::N, None);
    let m = moments(&s, 4, p).unwrap();
    let d2 = hankel_det(&m, 2).unwrap();
    let by_hand = &m.m[0] * &m.m[2] - m.m[1].square();
    assert!(((d2 - &by_hand) / by_hand).log2_abs() < -240.0);
    assert_eq!(hankel_det(&m, 0).unwrap(), BigReal::one(p));
}

#[test]
fn bareiss_handles_zero_leading_pivot() {
    let p = 128;
    let m = |v: i64| BigReal::from_i64(v, p);
    let mat = vec![vec![m(0), m(2), m(1)], vec![m(1), m(1), m(0)], vec![m(3), m(0), m(1)]];
    // 0(1) - 2(1) + 1(-3) = -5
    assert_eq!(det_bareiss(mat, p), m(-5));
}

#[test]
fn b0_is_the_bessel_ratio_on_n() {
    let p = 256;
    let s = spec("1", "2", Lattice::N, None);
    let t = recurrence_from_hankel(&s, 2, p).unwrap();
    let two = BigReal::from_i64(2, p);
    let ratio = charlier::mpnum::bessel_i(&two, &two, p).unwrap() / charlier::mpnum::bessel_i(&BigReal::one(p), &two, p).unwrap();
    assert!((&t.b[0] - ratio).abs().log2_abs() < -240.0);
    assert_eq!(t.source, Source::Hankel);
}

#[test]
fn bilattice_interpolates_between_lattices() {
    // deviation from either endpoint shrinks linearly in τ (resp. 1/τ)
    let p = 256;
    let dev = |tau: &str, target: &charlier::RecurrenceTable| {
        let t = recurrence_from_hankel(&spec("1", "0.4", Lattice::BiLattice, Some(tau)), 5, p).unwrap();
        let (da, db) = t.max_abs_diff(target);
        da.to_f64().max(db.to_f64())
    };
    let n_tab = recurrence_from_hankel(&spec("1", "0.4", Lattice::N, None), 5, p).unwrap();
    let s_tab = recurrence_from_hankel(&spec("1", "0.4", Lattice::Shifted, None), 5, p).unwrap();
    let (near, nearer) = (dev("1e-6", &n_tab), dev("1e-12", &n_tab));
    assert!(nearer < 1e-6 && (near / nearer - 1e6).abs() < 1e4);
    let (far, farther) = (dev("1e6", &s_tab), dev("1e12", &s_tab));
    assert!(farther < 1e-6 && (far / farther - 1e6).abs() < 1e4);
}

#[test]
fn classical_limit_is_approached() {
    // a -> βa with β large: a_n² -> n, b_n -> n + 1 at a = 1.
    let p = 256;
    let t = recurrence_from_hankel(&spec("1000", "1000", Lattice::N, None), 5, p).unwrap();
    for n in 1..=5 {
        assert!((&t.a2[n] - n as i64).abs() < 0.05);
        assert!((&t.b[n] - (n as i64 + 1)).abs() < 0.05);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn two_oracles_agree_and_a2_positive(
        a in 0.2f64..4.0,
        beta in 0.1f64..1.9,
        lat in 0usize..3,
    ) {
        prop_assume!((beta - 1.0).abs() > 0.05);
        let lattice = Lattice::ALL[lat];
        let tau = (lattice == Lattice::BiLattice).then_some("0.7");
        let s = spec(&format!("{a:.3}"), &format!("{beta:.3}"), lattice, tau);
        let p = 256;
        let h = recurrence_from_hankel(&s, 12, p).unwrap();
        let st = recurrence_from_stieltjes(&s, 12, p).unwrap();
        let (da, db) = h.max_abs_diff(&st);
        prop_assert!(da.log2_abs() < -128.0 && db.log2_abs() < -128.0);
        prop_assert!(h.a2[0].is_zero());
        prop_assert!(h.a2[1..].iter().all(|x| x.is_positive()));
    }
}
