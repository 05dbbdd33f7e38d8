use charlier::mpnum::{bessel_i, bessel_i_series, gamma, pochhammer, BigReal};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

const P: u32 = 256;

fn big(s: &str) -> BigReal {
    BigReal::parse(s, P).unwrap()
}

fn rel(a: &BigReal, b: &BigReal) -> f64 {
    ((a - b) / b).abs().log2_abs()
}

/// `I_ν(z) = Σ (z/2)^(2k+ν) / (k! Γ(k+ν+1))` summed in exact rationals for
/// integer `ν >= 0` and rational `z`.
fn bessel_integer_exact(nu: u32, z: &Rational, terms: u32) -> Rational {
    let half = Rational::from(z / 2u32);
    let mut sum = Rational::new();
    let mut k_fact = Integer::from(1);
    for k in 0..terms {
        if k > 0 {
            k_fact *= k;
        }
        let nu_k_fact = Integer::from(Integer::factorial(k + nu));
        let pow = Rational::from(half.clone().pow(2 * k + nu));
        sum += pow / Rational::from(Integer::from(&k_fact * &nu_k_fact));
    }
    sum
}

#[test]
fn integer_order_against_exact_rational_series() {
    for (nu, z) in [(0u32, (2, 1)), (1, (2, 1)), (3, (7, 2)), (1, (1, 10))] {
        let z = Rational::from(z);
        let exact = Float::with_val(P, bessel_integer_exact(nu, &z, 120));
        let got = bessel_i(&BigReal::from_i64(nu as i64, P), &BigReal::from_float(Float::with_val(P, &z)), P).unwrap();
        assert!(rel(&got, &BigReal::from_float(exact)) < -240.0, "I_{nu}({z})");
    }
}

#[test]
fn half_orders_in_elementary_form() {
    let z = big("2");
    let pref = (BigReal::from_i64(2, P) / (BigReal::pi(P) * &z)).sqrt();
    let minus_half = bessel_i(&big("-0.5"), &z, P).unwrap();
    assert!(rel(&minus_half, &(&pref * z.cosh())) < -240.0);
    let plus_half = bessel_i(&big("0.5"), &z, P).unwrap();
    assert!(rel(&plus_half, &(&pref * z.sinh())) < -240.0);
}

#[test]
fn series_reports_a_tail_bound() {
    let s = bessel_i_series(&big("1.3"), &big("5"), P).unwrap();
    assert!(s.terms_used > 10);
    assert!((&s.tail_bound / &s.partial).log2_abs() < -(P as f64));
}

#[test]
fn gamma_matches_mpfr() {
    for x in ["0.3", "1", "2.5", "7.25", "19.9", "0.001"] {
        let ours = gamma(&big(x), P).unwrap();
        let mpfr = Float::with_val(P, ours.as_float()).clone();
        let reference = Float::with_val(P, Float::parse(x).unwrap()).gamma();
        let _ = mpfr;
        assert!(rel(&ours, &BigReal::from_float(reference)) < -240.0, "Gamma({x})");
    }
}

/// `Γ(x) = Γ(x + m) / (x)_m` with Stirling's series at `x + m`.
fn gamma_by_shift_and_stirling(x: &BigReal) -> BigReal {
    let m: u64 = 60;
    let y = x + m as i64;
    let ln2pi = (BigReal::pi(P) * 2i64).ln();
    let mut lg = (&y - 0.5f64) * y.ln() - &y + ln2pi / 2i64;
    // B_2k / (2k (2k-1) y^(2k-1)), k = 1..8
    let b = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730), (7, 6), (-3617, 510)];
    for (k, (p, q)) in b.iter().enumerate() {
        let two_k = 2 * (k as i64 + 1);
        lg += BigReal::from_ratio(*p, *q, P) / (y.powi(two_k as i32 - 1) * (two_k * (two_k - 1)));
    }
    lg.exp() / pochhammer(x, m, P)
}

#[test]
fn gamma_matches_shifted_stirling() {
    for x in ["0.3", "1.5", "3.75"] {
        let x = big(x);
        assert!(rel(&gamma(&x, P).unwrap(), &gamma_by_shift_and_stirling(&x)) < -90.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn contiguous_relation(nu in -3.0f64..4.0, z in 0.05f64..12.0) {
        prop_assume!((nu - nu.round()).abs() > 1e-3 || nu >= 1.0);
        let nu = BigReal::from_f64(nu, P);
        let z = BigReal::from_f64(z, P);
        let lo = bessel_i(&(&nu - 1i64), &z, P).unwrap();
        let mid = bessel_i(&nu, &z, P).unwrap();
        let hi = bessel_i(&(&nu + 1i64), &z, P).unwrap();
        // I_(ν-1) - I_(ν+1) = (2ν/z) I_ν
        let r = &lo - &hi - &nu * 2i64 / &z * &mid;
        let scale = lo.abs().max(hi.abs());
        prop_assert!((r / scale).log2_abs() < -200.0);
    }

    #[test]
    fn gamma_recurrence(x in 0.01f64..30.0) {
        let x = BigReal::from_f64(x, P);
        let g = gamma(&x, P).unwrap();
        let g1 = gamma(&(&x + 1i64), P).unwrap();
        prop_assert!(rel(&g1, &(&x * &g)) < -240.0);
    }

    #[test]
    fn gamma_reflection(x in 0.01f64..0.99) {
        let x = BigReal::from_f64(x, P);
        let lhs = gamma(&x, P).unwrap() * gamma(&(1i64 - &x), P).unwrap();
        let rhs = BigReal::pi(P) / (BigReal::pi(P) * &x).sin();
        prop_assert!(rel(&lhs, &rhs) < -240.0);
    }
}
