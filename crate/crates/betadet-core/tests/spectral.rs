use approx::assert_abs_diff_eq;
use betadet_core::entropy::{energy_e, entropy_j};
use betadet_core::spectral::{
    a_pm, cc_moments, coordinate_maps, esd_vs_density, mckay_log_moment, mp_log_moment, tridiag_eigenvalues,
    CcSituation, SpectralDist,
};
use betadet_core::stats::ks_critical_one;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mp_mass_one(c in 0.05f64..4.0, s2 in 0.1f64..5.0) {
        let d = SpectralDist::mp(c, s2).unwrap();
        prop_assert!((d.expect(|_| 1.0) - 1.0).abs() < 1e-8);
        let (lo, hi) = d.support();
        for i in 0..=50 {
            prop_assert!(d.density(lo + (hi - lo) * i as f64 / 50.0) >= 0.0);
        }
    }

    #[test]
    fn mckay_mass_one(a in 0.01f64..0.98, w in 0.01f64..1.0) {
        let b = (a + w * (0.99 - a)).max(a + 1e-3);
        let d = SpectralDist::mckay(a, b).unwrap();
        prop_assert!((d.expect(|_| 1.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cc_mass_one_and_classification(u in 0.1f64..4.0, v in 0.1f64..4.0) {
        prop_assume!(u + v > 1.05);
        let Ok(d) = SpectralDist::cc(u, v) else { return Ok(()) };
        prop_assert!((d.expect(|_| 1.0) - 1.0).abs() < 1e-8);
        let m = cc_moments(u, v).unwrap();
        let want = match ((1.0 - u).max(0.0) > 0.0, (1.0 - v).max(0.0) > 0.0) {
            (false, false) => CcSituation::I,
            (true, false) => CcSituation::II,
            (false, true) => CcSituation::III,
            (true, true) => CcSituation::IV,
        };
        prop_assert_eq!(m.situation, want);
        let sw = cc_moments(v, u).unwrap();
        prop_assert!((sw.mean - (1.0 - m.mean)).abs() < 1e-15);
        prop_assert!((sw.variance - m.variance).abs() < 1e-15);
    }

    #[test]
    fn mp_log_moment_is_entropy(t in 1e-6f64..0.999_999) {
        prop_assert_eq!(mp_log_moment(t).unwrap(), -entropy_j(1.0 - t));
    }
}

#[test]
fn coordinate_maps_roundtrip() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..1000 {
        let b: f64 = rng.random_range(1e-3..0.999);
        let c: f64 = rng.random_range(b..0.9999);
        let (sm, sp) = coordinate_maps(b, c).unwrap();
        let (x, y) = a_pm(sm, sp).unwrap();
        assert_abs_diff_eq!(x, b, epsilon = 1e-12);
        assert_abs_diff_eq!(y, c, epsilon = 1e-12);
    }
}

#[test]
fn mckay_log_moment_matches_jacobi_lln() {
    for (u, v) in [(1.5, 2.0), (3.0, 1.2), (1.2, 0.5), (2.5, 0.8), (4.0, 0.3)] {
        let m = cc_moments(u, v).unwrap();
        let lhs = v.min(1.0) * mckay_log_moment(m.a_minus, m.a_plus).unwrap();
        assert_abs_diff_eq!(lhs, energy_e(u, v, 1.0).unwrap(), epsilon = 1e-10);
    }
}

fn tridiag_det(d: &[f64], e: &[f64]) -> f64 {
    // continuant recurrence, the LU pivots of a tridiagonal matrix
    let (mut p0, mut p1) = (1.0, d[0]);
    for i in 1..d.len() {
        let p2 = d[i] * p1 - e[i - 1] * e[i - 1] * p0;
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[test]
fn tridiag_trace_and_determinant() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(8);
    for _ in 0..50 {
        let d: Vec<f64> = (0..20).map(|_| rng.random_range(-2.0..2.0)).collect();
        let e: Vec<f64> = (0..19).map(|_| rng.random_range(-1.0..1.0)).collect();
        let ev = tridiag_eigenvalues(&d, &e).unwrap();
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        assert_abs_diff_eq!(ev.iter().sum::<f64>(), d.iter().sum::<f64>(), epsilon = 1e-10);
        let det = tridiag_det(&d, &e);
        let prod: f64 = ev.iter().product();
        assert!((prod - det).abs() <= 1e-8 * det.abs().max(1.0), "{prod} vs {det}");
    }
}

#[test]
fn ks_self_test_from_quantiles() {
    let d = SpectralDist::mp(0.5, 1.0).unwrap();
    let table = d.quantile_table(2000);
    let mut rng = rand::rngs::StdRng::seed_from_u64(21);
    let n = 10_000;
    let xs: Vec<f64> = (0..n).map(|_| table.quantile(rng.random::<f64>())).collect();
    assert!(esd_vs_density(&xs, &d).unwrap() < ks_critical_one(0.05, n));
    let shifted: Vec<f64> = xs.iter().map(|x| x + 10.0).collect();
    assert!(esd_vs_density(&shifted, &d).unwrap() > 0.999);
}

#[test]
fn ks_with_atoms() {
    let d = SpectralDist::cc(0.6, 2.0).unwrap();
    assert!(!d.atoms().is_empty());
    let table = d.quantile_table(2000);
    let mut rng = rand::rngs::StdRng::seed_from_u64(22);
    let n = 10_000;
    let xs: Vec<f64> = (0..n).map(|_| table.quantile(rng.random::<f64>())).collect();
    assert!(esd_vs_density(&xs, &d).unwrap() < ks_critical_one(0.05, n));
}
