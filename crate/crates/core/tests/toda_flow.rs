use charlier::toda::{
    riccati_b0_residual, riccati_symmetry_residual, toda_t_form_residual, xprime_residual, TodaProbe, TodaStencil,
};
use charlier::{BigReal, Lattice, MeasureSpec};

fn spec(a: &str, beta: &str, lattice: Lattice, tau: Option<&str>) -> MeasureSpec {
    MeasureSpec::parse(a, beta, lattice, tau).unwrap()
}

#[test]
fn closed_form_derivative_at_fixed_step() {
    let s = spec("2", "0.7", Lattice::N, None);
    let probe = TodaProbe::new(&s, 3, "1e-4", 256).unwrap();
    assert!(xprime_residual(&probe).unwrap().abs().to_f64() < 1e-12);
}

#[test]
fn stencil_error_is_fourth_order() {
    let p = 512;
    for s in [spec("1", "1.5", Lattice::N, None), spec("1", "0.5", Lattice::BiLattice, Some("2"))] {
        let a = s.a(p);
        let at = |h: &str| {
            let h = BigReal::parse(h, p).unwrap();
            TodaStencil::new(&s, &a, &h, 3, p).unwrap().residuals(2)
        };
        let (coarse, fine) = (at("0.02"), at("0.01"));
        for (c, f) in coarse.as_vec().iter().zip(fine.as_vec()) {
            let ratio = (c / &f).abs().to_f64();
            assert!((ratio - 16.0).abs() < 1.0, "{s}: ratio {ratio}");
        }
    }
}

#[test]
fn all_rows_satisfy_the_flow() {
    let p = 512;
    let s = spec("1", "0.5", Lattice::Shifted, None);
    let h = BigReal::parse("1e-4", p).unwrap();
    let st = TodaStencil::new(&s, &s.a(p), &h, 10, p).unwrap();
    for n in 0..=10 {
        for r in st.residuals(n).as_vec() {
            assert!(r.abs().to_f64() < 1e-12, "row {n}");
        }
    }
}

#[test]
fn log_variable_form() {
    let p = 512;
    let s = spec("1.5", "2.5", Lattice::N, None);
    let h = BigReal::parse("1e-4", p).unwrap();
    let (r1, r2) = toda_t_form_residual(&s, 1, &h, p).unwrap();
    assert!(r1.abs().to_f64() < 1e-12 && r2.abs().to_f64() < 1e-12);
}

#[test]
fn riccati_holds_across_a() {
    let p = 256;
    let bound = BigReal::from_i64(2, p).powi(-(p as i32) + 16);
    for s in [
        spec("1", "1.5", Lattice::N, None),
        spec("1", "0.5", Lattice::Shifted, None),
        spec("1", "0.5", Lattice::BiLattice, Some("10")),
    ] {
        for a in ["0.1", "0.9", "3.7", "10"] {
            let a = BigReal::parse(a, p).unwrap();
            assert!(riccati_b0_residual(&s, &a, p).unwrap().abs() < bound, "{s}");
            assert!(riccati_symmetry_residual(&s, &a, p).unwrap().abs() < bound, "{s}");
        }
    }
}
