use approx::assert_abs_diff_eq;
use betadet_core::entropy::limiting_cgf_density_g;
use betadet_core::ldp::{
    affine_slope, check_inf_i, dual_multiplier, legendre_dual_la, inf_convolution_check, interior_endpoint,
    legendre_transform_numeric, lln_value, marginal_rate, optimal_path_value, optimal_path_value_dtheta, theta_floor,
    Branch,
};
use betadet_core::moments::integrated_drift;
use betadet_core::sampler::{sample_det_process, RngStream};
use betadet_core::{EnsembleKind, EnsembleParams};
use proptest::prelude::*;

fn cases() -> Vec<(EnsembleParams, f64)> {
    vec![
        (EnsembleParams::gram(2.0, 10).unwrap(), 0.5),
        (EnsembleParams::laguerre(2.0, 10).unwrap(), 0.5),
        (EnsembleParams::jacobi(2.0, 10, 1.0, 2.0).unwrap(), 0.4),
        (EnsembleParams::jacobi(2.0, 10, 2.0, 1.5).unwrap(), 1.2),
    ]
}

#[test]
fn multiplier_map_increasing() {
    for (p, t) in cases() {
        let lo = theta_floor(&p, t);
        let mut prev = optimal_path_value(&p, lo, t);
        for i in 1..=2000 {
            let th = lo + i as f64 * 5e-3;
            let v = optimal_path_value(&p, th, t);
            assert!(v > prev, "{:?} θ = {th}", p.kind);
            assert!(optimal_path_value_dtheta(&p, th, t) > 0.0);
            prev = v;
        }
    }
}

#[test]
fn branch_continuity() {
    for (p, t) in cases() {
        let end = interior_endpoint(&p, t);
        let h = 1e-6;
        let at = marginal_rate(&p, t, end).unwrap();
        let left = marginal_rate(&p, t, end - h).unwrap();
        let right = marginal_rate(&p, t, end + h).unwrap();
        assert_eq!(left.branch, Branch::AffineTail);
        assert_eq!(right.branch, Branch::Interior);
        assert_abs_diff_eq!((at.rate - left.rate) / h, affine_slope(&p, t), epsilon = 1e-9);
        assert_abs_diff_eq!(right.theta.unwrap(), affine_slope(&p, t), epsilon = 1e-6);
        let fd = (right.rate - at.rate) / h;
        assert_abs_diff_eq!(fd, affine_slope(&p, t), epsilon = 1e-3);
    }
}

#[test]
fn nonnegative_with_unique_zero() {
    for (p, t) in cases() {
        let lln = lln_value(&p, t);
        let end = interior_endpoint(&p, t);
        let top = if matches!(p.kind, EnsembleKind::Laguerre) { 1.0 } else { -1e-3 };
        for i in 0..=400 {
            let xi = end - 0.5 + (top - end + 0.5) * i as f64 / 400.0;
            let r = marginal_rate(&p, t, xi).unwrap();
            assert!(r.rate >= -1e-14, "{:?} ξ = {xi}: {}", p.kind, r.rate);
            if (xi - lln).abs() > 1e-2 {
                assert!(r.rate > 1e-8, "{:?} ξ = {xi} gives a second zero", p.kind);
            }
        }
        assert!(marginal_rate(&p, t, lln).unwrap().rate.abs() < 1e-12);
    }
}

#[test]
fn rate_is_midpoint_convex() {
    for (p, t) in cases() {
        let end = interior_endpoint(&p, t);
        let top = if matches!(p.kind, EnsembleKind::Laguerre) { 0.5 } else { -1e-2 };
        let xs: Vec<f64> = (0..=200).map(|i| end - 0.3 + (top - end + 0.3) * i as f64 / 200.0).collect();
        let rs: Vec<f64> = xs.iter().map(|&x| marginal_rate(&p, t, x).unwrap().rate).collect();
        for w in rs.windows(3) {
            assert!(w[1] <= 0.5 * (w[0] + w[2]) + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn double_legendre_returns_la(k in 0usize..3, tf in 0.05f64..0.9, y in -3.0f64..-0.05) {
        let (p, t_max) = cases()[k];
        let t = tf * t_max;
        let g = |th: f64| limiting_cgf_density_g(&p, t, th);
        let lo = theta_floor(&p, t) + 0.0;
        let lo = if p.kind == EnsembleKind::Jacobi { t - p.tau1 } else { lo.min(t - 1.0) };
        let (v, arg) = legendre_transform_numeric(g, y, lo, 200.0);
        let la = legendre_dual_la(&p, t, y);
        prop_assert!((v - la).abs() < 1e-6, "{:?} t = {t} y = {y}: {v} vs {la}", p.kind);
        let want = dual_multiplier(&p, t, y).unwrap();
        if want < 150.0 {
            prop_assert!((arg - want).abs() < 1e-3 * (1.0 + want.abs()));
        }
        // and back: g(t, θ) = sup_y {θy - L_a(t, y)}
        let (gv, _) = legendre_transform_numeric(|z| legendre_dual_la(&p, t, z), arg, -40.0, 10.0);
        prop_assert!((gv - g(arg)).abs() < 1e-6);
    }
}

#[test]
fn inf_convolution_on_fifty_points() {
    let t = 0.5;
    let lag = EnsembleParams::laguerre(2.0, 10).unwrap();
    let end = interior_endpoint(&lag, t);
    let grid: Vec<f64> = (0..50).map(|i| end + 0.02 + (0.8 - end) * i as f64 / 49.0).collect();
    let gap = inf_convolution_check(t, &grid).unwrap();
    assert!(gap < 1e-4, "gap {gap}");
    let lln = lln_value(&lag, t);
    assert!(inf_convolution_check(t, &[lln]).unwrap() < 1e-8);
}

#[test]
fn jacobi_spectral_side_vanishes_at_lln() {
    let p = EnsembleParams::jacobi(2.0, 10, 1.0, 2.0).unwrap();
    let c = check_inf_i(1.0, 2.0, 0.4, lln_value(&p, 0.4)).unwrap();
    assert!(c.lhs.abs() < 1e-3 && c.rhs.abs() < 1e-3, "{c:?}");
}

#[test]
fn t_at_horizon_rejected() {
    let g = EnsembleParams::gram(2.0, 10).unwrap();
    assert!(marginal_rate(&g, 1.0, -0.5).is_err());
    let j = EnsembleParams::jacobi(2.0, 10, 1.0, 2.0).unwrap();
    assert!(marginal_rate(&j, 1.0, -0.5).is_err());
}

#[test]
fn monte_carlo_small_deviation_order() {
    let (beta, n, t) = (2.0, 120, 0.5);
    let p = EnsembleParams::gram(beta, n).unwrap();
    let scale = 2.0 / (beta * (n * n) as f64);
    let k = p.index_at(t);
    let paths = 200_000u64;
    let mut xs: Vec<f64> = (0..paths)
        .map(|s| sample_det_process(&p, &mut RngStream::new(123, s)).unwrap().value(k) / n as f64)
        .collect();
    xs.sort_by(f64::total_cmp);
    // ξ at empirical probability 1e-3
    let prob = 1e-3;
    let xi = xs[(prob * paths as f64) as usize];
    assert!(xi < lln_value(&p, t));
    let est = -scale * prob.ln();
    let raw = est / marginal_rate(&p, t, xi).unwrap().rate;
    // the O(1) drift of log Δ shifts ξ by ∫d/n at this size
    let shifted = xi - integrated_drift(&p, t).unwrap() / n as f64;
    let ratio = est / marginal_rate(&p, t, shifted).unwrap().rate;
    assert!((0.5..=2.0).contains(&ratio), "drift-corrected ratio {ratio} (raw {raw}) at ξ = {xi}");
}
