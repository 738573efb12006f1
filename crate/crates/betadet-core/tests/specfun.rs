use approx::assert_abs_diff_eq;
use betadet_core::specfun::{binet_f, digamma, log_gamma, polygamma};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn log_gamma_recurrence(x in 1e-6f64..50.0) {
        let r = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap() - x.ln();
        prop_assert!(r.abs() < 1e-10, "x = {x}: residual {r}");
    }

    #[test]
    fn digamma_bounds(x in 1e-6f64..100.0) {
        let d = x.ln() - digamma(x).unwrap();
        prop_assert!(x * d > 0.0 && x * d <= 1.0);
        let d2 = d - 0.5 / x;
        prop_assert!(d2 > 0.0 && d2 <= 1.0 / (12.0 * x * x));
    }

    #[test]
    fn polygamma_remainder(x in 1e-3f64..100.0, q in 1u32..=3) {
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
        let lead = sign * fact(q - 1) * x.powi(-(q as i32));
        let r = polygamma(q, x).unwrap() - lead;
        prop_assert!(r.abs() <= fact(q) * x.powi(-(q as i32) - 1));
    }

    #[test]
    fn against_statrs(x in 1e-3f64..1e3) {
        let a = log_gamma(x).unwrap();
        let b = statrs::function::gamma::ln_gamma(x);
        prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "ln Γ({x}) {a} vs {b}");
        let a = digamma(x).unwrap();
        let b = statrs::function::gamma::digamma(x);
        prop_assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0), "Ψ({x}) {a} vs {b}");
    }
}

#[test]
fn binet_f_decreasing() {
    let mut prev = binet_f(0.0);
    for i in 1..=5000 {
        let v = binet_f(i as f64 * 0.01);
        assert!(v < prev, "f not decreasing at s = {}", i as f64 * 0.01);
        prev = v;
    }
}

#[test]
fn digamma_is_log_gamma_derivative() {
    for i in 0..100 {
        let x = 0.05 + 0.37 * i as f64;
        let h = 1e-5 * x.max(1.0);
        let fd = (log_gamma(x + h).unwrap() - log_gamma(x - h).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(fd, digamma(x).unwrap(), epsilon = 1e-6 * (1.0 + 1.0 / x));
    }
}

#[test]
fn trigamma_against_statrs_via_difference() {
    for x in [0.3, 1.0, 2.5, 10.0, 90.0] {
        let h = 1e-4 * x;
        let fd = (statrs::function::gamma::digamma(x + h) - statrs::function::gamma::digamma(x - h)) / (2.0 * h);
        assert_abs_diff_eq!(polygamma(1, x).unwrap(), fd, epsilon = 1e-6 * fd.abs().max(1.0));
    }
}
