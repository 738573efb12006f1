//! Large deviations of the determinant processes: the local rate
//! integrands L_a/L_s, limiting and finite-n cgfs, path and marginal rate
//! functions with their optimal paths, and the spectral-side identities.
//!
//! Rates are extended reals; `f64::INFINITY` stands for +∞. The scale is
//! 2/(βn²) throughout, so none of the functions here depend on β.

use crate::entropy::{bernoulli_h_raw, entropy_j, energy_e_raw, free_energy_b, laguerre_free_energy, prim_f};
use crate::error::{domain, Error, Result};
use crate::params::{EnsembleKind, EnsembleParams};
use crate::quad::{self, compensated_sum};
use crate::specfun::log_gamma;
use crate::spectral::{a_pm, log_energy_mp, log_energy_quadrature, mckay_log_moment, SpectralDist};
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Number of cells used for the optimal paths attached to a [`RateResult`].
pub const PATH_CELLS: usize = 200;

const BISECT_REL_WIDTH: f64 = 1e-12;
const NEWTON_POLISH: usize = 3;

/// A candidate path: a piecewise-constant slope of the absolutely continuous
/// part on `grid`, plus singular atoms (time, mass).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathMeasure {
    pub grid: Vec<f64>,
    pub ac_density: Vec<f64>,
    pub atoms: Vec<(f64, f64)>,
}

impl PathMeasure {
    /// Uniform grid on [0, T] with the slope sampled at cell midpoints.
    pub fn from_slope<F: FnMut(f64) -> f64>(big_t: f64, cells: usize, mut slope: F) -> Self {
        let cells = cells.max(1);
        let h = big_t / cells as f64;
        let grid: Vec<f64> = (0..=cells).map(|i| i as f64 * h).collect();
        let ac_density = (0..cells).map(|i| slope((i as f64 + 0.5) * h)).collect();
        Self { grid, ac_density, atoms: Vec::new() }
    }

    pub fn with_atom(mut self, t: f64, mass: f64) -> Self {
        self.atoms.push((t, mass));
        self
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().unwrap_or(&0.0)
    }

    /// v(T) = ∫ slope + Σ atom masses.
    pub fn terminal_value(&self) -> f64 {
        let ac = self.grid.windows(2).zip(&self.ac_density).map(|(w, y)| y * (w[1] - w[0]));
        compensated_sum(ac.chain(self.atoms.iter().map(|a| a.1)))
    }

    /// (t, slope) at cell midpoints.
    pub fn midpoint_slopes(&self) -> Vec<(f64, f64)> {
        self.grid.windows(2).zip(&self.ac_density).map(|(w, &y)| (0.5 * (w[0] + w[1]), y)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Branch {
    Interior,
    AffineTail,
    Infinite,
}

/// Marginal rate I_T(ξ) with its multiplier and optimal path.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RateResult {
    pub ensemble: EnsembleKind,
    #[cfg_attr(feature = "serde", serde(rename = "T"))]
    pub big_t: f64,
    pub xi: f64,
    pub theta: Option<f64>,
    #[cfg_attr(feature = "serde", serde(with = "crate::ext_real"))]
    pub rate: f64,
    pub branch: Branch,
    #[cfg_attr(feature = "serde", serde(rename = "path"))]
    pub optimal_path: Option<PathMeasure>,
}

fn check_horizon(params: &EnsembleParams, big_t: f64) -> Result<()> {
    let end = if params.kind == EnsembleKind::Jacobi { params.tau1 } else { 1.0 };
    if big_t > 0.0 && big_t < end {
        Ok(())
    } else {
        Err(domain!("horizon T = {big_t} must lie in (0, {end}) for {}", params.kind.name()))
    }
}

/// Absolutely continuous rate integrand L_a(t, y).
pub fn legendre_dual_la(params: &EnsembleParams, t: f64, y: f64) -> f64 {
    match params.kind {
        EnsembleKind::Gram if y < 0.0 => bernoulli_h_raw(1.0 - t, y.exp()),
        EnsembleKind::Laguerre => y.exp_m1() - (1.0 - t) * y + entropy_j(1.0 - t),
        EnsembleKind::Jacobi if y < 0.0 => {
            let s = params.tau1 + params.tau2 - t;
            s * bernoulli_h_raw((params.tau1 - t) / s, y.exp())
        }
        EnsembleKind::AuxS => y.exp_m1() - y,
        _ => f64::INFINITY,
    }
}

/// Recession integrand L_s(t, y) applied to atoms.
pub fn recession_ls(params: &EnsembleParams, t: f64, y: f64) -> f64 {
    if y > 0.0 {
        return f64::INFINITY;
    }
    match params.kind {
        EnsembleKind::Gram | EnsembleKind::Laguerre => -(1.0 - t) * y,
        EnsembleKind::Jacobi => -(params.tau1 - t) * y,
        EnsembleKind::AuxS => -y,
    }
}

/// The θ attaining sup_θ {θy - g(t, θ)}, or None where L_a is infinite.
pub fn dual_multiplier(params: &EnsembleParams, t: f64, y: f64) -> Option<f64> {
    match params.kind {
        EnsembleKind::Gram if y < 0.0 => Some(-(1.0 - t / (-y.exp_m1()))),
        EnsembleKind::Laguerre => Some(y.exp() - (1.0 - t)),
        EnsembleKind::Jacobi if y < 0.0 => Some(-(params.tau1 - t) + params.tau2 / (-y).exp_m1()),
        EnsembleKind::AuxS => Some(y.exp_m1()),
        _ => None,
    }
}

/// ∫ L_a over the absolutely continuous part (midpoint rule per cell) plus
/// L_s on the atoms.
pub fn path_rate(params: &EnsembleParams, path: &PathMeasure) -> f64 {
    let mut terms = Vec::with_capacity(path.ac_density.len() + path.atoms.len());
    for (w, &y) in path.grid.windows(2).zip(&path.ac_density) {
        let l = legendre_dual_la(params, 0.5 * (w[0] + w[1]), y);
        if !l.is_finite() {
            return f64::INFINITY;
        }
        terms.push(l * (w[1] - w[0]));
    }
    for &(t, m) in &path.atoms {
        let l = recession_ls(params, t, m);
        if !l.is_finite() {
            return f64::INFINITY;
        }
        terms.push(l);
    }
    compensated_sum(terms)
}

/// Lower end of the multiplier range on [0, T]: the cgf is finite for
/// θ ≥ this value.
pub fn theta_floor(params: &EnsembleParams, big_t: f64) -> f64 {
    match params.kind {
        EnsembleKind::Gram | EnsembleKind::Laguerre => -(1.0 - big_t),
        EnsembleKind::Jacobi => big_t - params.tau1,
        EnsembleKind::AuxS => -1.0,
    }
}

fn fdiff(a: f64, b: f64) -> f64 {
    prim_f(a) - prim_f(b)
}

/// L_T(θ) = ∫₀ᵀ g(t, θ) dt in closed form.
pub fn limiting_cgf_lt(params: &EnsembleParams, big_t: f64, theta: f64) -> Result<f64> {
    check_horizon(params, big_t)?;
    if theta < theta_floor(params, big_t) {
        return Ok(f64::INFINITY);
    }
    let t = big_t;
    Ok(match params.kind {
        EnsembleKind::Gram => fdiff(1.0 + theta, 1.0 - t + theta) - fdiff(1.0, 1.0 - t) - t * entropy_j(1.0 + theta),
        EnsembleKind::Laguerre => fdiff(1.0 + theta, 1.0 - t + theta) - fdiff(1.0, 1.0 - t),
        EnsembleKind::Jacobi => {
            let (t1, t2) = (params.tau1, params.tau2);
            fdiff(t1 + theta, t1 + theta - t) - fdiff(t1, t1 - t) - fdiff(t1 + t2 + theta, t1 + t2 + theta - t)
                + fdiff(t1 + t2, t1 + t2 - t)
        }
        EnsembleKind::AuxS => t * entropy_j(1.0 + theta),
    })
}

/// L_T(θ) by adaptive quadrature of g, for cross-checking the closed form.
pub fn limiting_cgf_lt_quadrature(params: &EnsembleParams, big_t: f64, theta: f64) -> Result<f64> {
    check_horizon(params, big_t)?;
    if theta < theta_floor(params, big_t) {
        return Ok(f64::INFINITY);
    }
    let g = |t: f64| crate::entropy::cgf_density(params.kind, params.tau1, params.tau2, t, theta);
    Ok(quad::integrate(g, 0.0, big_t, 1e-14))
}

/// Finite-n normalized cgf (1/(β'n²)) Σ_{k ≤ ⌊nT⌋} log E ρ_k^{β'nθ} from
/// exact log-gamma sums, for a constant test function θ.
pub fn finite_n_cgf(params: &EnsembleParams, big_t: f64, theta: f64) -> Result<f64> {
    let params = params.validated()?;
    check_horizon(&params, big_t)?;
    let bp = params.beta_prime();
    let n = params.n as f64;
    let s = bp * n * theta;
    let p = params.index_at(big_t).min(params.horizon_index());
    let mut terms = Vec::with_capacity(p);
    let gamma_term = |a: f64| -> Result<f64> {
        if a + s <= 0.0 {
            return Err(domain!("finite-n cgf infinite: shape {a} + {s} ≤ 0"));
        }
        Ok(log_gamma(a + s)? - log_gamma(a)?)
    };
    for k in 1..=p {
        let kf = k as f64;
        let v = match params.kind {
            EnsembleKind::Gram => {
                if k == 1 {
                    0.0
                } else {
                    let a = bp * (n - kf + 1.0);
                    gamma_term(a)? - gamma_term(bp * n)?
                }
            }
            EnsembleKind::Laguerre => gamma_term(bp * (n - kf + 1.0))? - s * (bp * n).ln(),
            EnsembleKind::Jacobi => {
                let (n1, n2) = (params.n1() as f64, params.n2() as f64);
                let a = bp * (n1 - kf + 1.0);
                gamma_term(a)? - gamma_term(a + bp * n2)?
            }
            EnsembleKind::AuxS => gamma_term(bp * n)? - s * (bp * n).ln(),
        };
        terms.push(v);
    }
    Ok(compensated_sum(terms) / (bp * n * n))
}

/// φ(θ; t): terminal value at time t of the optimal path with multiplier θ.
pub fn optimal_path_value(params: &EnsembleParams, theta: f64, t: f64) -> f64 {
    match params.kind {
        EnsembleKind::Gram => entropy_j(1.0 + theta) - entropy_j(1.0 - t + theta) - t * (1.0 + theta).ln(),
        EnsembleKind::Laguerre => entropy_j(1.0 + theta) - entropy_j(1.0 - t + theta),
        EnsembleKind::Jacobi => energy_e_raw(theta + params.tau1, params.tau2, t),
        EnsembleKind::AuxS => t * (1.0 + theta).ln(),
    }
}

/// ∂φ/∂t (θ; t), the slope of the optimal path.
pub fn optimal_path_slope(params: &EnsembleParams, theta: f64, t: f64) -> f64 {
    match params.kind {
        EnsembleKind::Gram => (-t / (1.0 + theta)).ln_1p(),
        EnsembleKind::Laguerre => (1.0 - t + theta).ln(),
        EnsembleKind::Jacobi => {
            let x = theta + params.tau1 - t;
            x.ln() - (x + params.tau2).ln()
        }
        EnsembleKind::AuxS => (1.0 + theta).ln(),
    }
}

/// ∂φ/∂θ (θ; T), positive on the multiplier range.
pub fn optimal_path_value_dtheta(params: &EnsembleParams, theta: f64, big_t: f64) -> f64 {
    match params.kind {
        EnsembleKind::Gram => {
            let r = big_t / (1.0 + theta);
            -((-r).ln_1p() + r)
        }
        EnsembleKind::Laguerre => (1.0 + theta).ln() - (1.0 - big_t + theta).ln(),
        EnsembleKind::Jacobi => {
            let (a, b) = (theta + params.tau1, theta + params.tau1 + params.tau2);
            (-big_t / b).ln_1p() - (-big_t / a).ln_1p()
        }
        EnsembleKind::AuxS => big_t / (1.0 + theta),
    }
}

/// Low end of the interior range: ξ at θ = theta_floor.
pub fn interior_endpoint(params: &EnsembleParams, big_t: f64) -> f64 {
    let t = big_t;
    match params.kind {
        EnsembleKind::Gram => -t,
        EnsembleKind::Laguerre => entropy_j(t) - 1.0,
        EnsembleKind::Jacobi => {
            let t2 = params.tau2;
            entropy_j(t2) + entropy_j(t) - entropy_j(t + t2) - 1.0
        }
        EnsembleKind::AuxS => f64::NEG_INFINITY,
    }
}

/// Slope of the affine tail below the interior range.
pub fn affine_slope(params: &EnsembleParams, big_t: f64) -> f64 {
    match params.kind {
        EnsembleKind::Gram | EnsembleKind::Laguerre => -(1.0 - big_t),
        EnsembleKind::Jacobi => -(params.tau1 - big_t),
        EnsembleKind::AuxS => -1.0,
    }
}

/// LLN value of the process at time T, where the rate vanishes.
pub fn lln_value(params: &EnsembleParams, big_t: f64) -> f64 {
    match params.kind {
        EnsembleKind::Gram | EnsembleKind::Laguerre => -entropy_j(1.0 - big_t),
        EnsembleKind::Jacobi => energy_e_raw(params.tau1, params.tau2, big_t),
        EnsembleKind::AuxS => 0.0,
    }
}

/// Solves φ(θ; T) = ξ on [theta_floor, ∞): bisection to relative width
/// 1e-12, then Newton polish kept inside the bracket.
pub fn solve_multiplier(params: &EnsembleParams, big_t: f64, xi: f64) -> Result<f64> {
    let f = |th: f64| optimal_path_value(params, th, big_t) - xi;
    let mut lo = theta_floor(params, big_t);
    if params.kind == EnsembleKind::AuxS {
        // explicit inverse
        return Ok((xi / big_t).exp_m1());
    }
    if f(lo) >= 0.0 {
        return Ok(lo);
    }
    let mut hi = lo.abs().max(1.0);
    let mut grow = 0;
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 1100 || !hi.is_finite() {
            return Err(Error::NoConvergence(alloc::format!("no multiplier bracket for ξ = {xi}")));
        }
    }
    while hi - lo > BISECT_REL_WIDTH * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut th = 0.5 * (lo + hi);
    for _ in 0..NEWTON_POLISH {
        let d = optimal_path_value_dtheta(params, th, big_t);
        if !(d > 0.0) {
            break;
        }
        let next = th - f(th) / d;
        if next < lo || next > hi {
            break;
        }
        th = next;
    }
    Ok(th)
}

fn interior_rate(params: &EnsembleParams, big_t: f64, xi: f64, theta: f64) -> Result<f64> {
    Ok(theta * xi - limiting_cgf_lt(params, big_t, theta)?)
}

/// Marginal rate function I_T(ξ) with branch selection.
pub fn marginal_rate(params: &EnsembleParams, big_t: f64, xi: f64) -> Result<RateResult> {
    check_horizon(params, big_t)?;
    if xi.is_nan() {
        return Err(domain!("marginal_rate: ξ is NaN"));
    }
    let kind = params.kind;
    let infinite = || RateResult {
        ensemble: kind,
        big_t,
        xi,
        theta: None,
        rate: f64::INFINITY,
        branch: Branch::Infinite,
        optimal_path: None,
    };
    if matches!(kind, EnsembleKind::Gram | EnsembleKind::Jacobi) && xi >= 0.0 {
        return Ok(infinite());
    }
    let end = interior_endpoint(params, big_t);
    let path_for = |theta: f64| PathMeasure::from_slope(big_t, PATH_CELLS, |t| optimal_path_slope(params, theta, t));
    if xi >= end {
        let theta = solve_multiplier(params, big_t, xi)?;
        return Ok(RateResult {
            ensemble: kind,
            big_t,
            xi,
            theta: Some(theta),
            rate: interior_rate(params, big_t, xi, theta)?,
            branch: Branch::Interior,
            optimal_path: Some(path_for(theta)),
        });
    }
    let theta = theta_floor(params, big_t);
    let at_end = interior_rate(params, big_t, end, theta)?;
    Ok(RateResult {
        ensemble: kind,
        big_t,
        xi,
        theta: Some(theta),
        rate: at_end + affine_slope(params, big_t) * (xi - end),
        branch: Branch::AffineTail,
        optimal_path: Some(path_for(theta).with_atom(big_t, xi - end)),
    })
}

/// I_T^G(-T) = 2T(1-T) + F(1) - F(1-T) - F(T) + T² log T.
pub fn gram_endpoint_rate(big_t: f64) -> Result<f64> {
    if !(big_t > 0.0 && big_t < 1.0) {
        return Err(domain!("gram_endpoint_rate: T must lie in (0, 1), got {big_t}"));
    }
    let t = big_t;
    Ok(2.0 * t * (1.0 - t) + prim_f(1.0) - prim_f(1.0 - t) - prim_f(t) + t * t * t.ln())
}

/// Discretized oracle: minimizes Σ L_a(t_i, y_i)Δt subject to Σ y_iΔt = ξ on a
/// uniform grid. The problem is separable and convex, so it is solved
/// exactly through its dual: an outer bisection on the multiplier and an
/// inner bisection on the sign of a finite-difference ∂L_a/∂y per cell. Only
/// L_a is evaluated.
pub fn discretized_path_rate(params: &EnsembleParams, big_t: f64, xi: f64, cells: usize) -> Result<(f64, PathMeasure)> {
    check_horizon(params, big_t)?;
    let cells = cells.max(1);
    let h = big_t / cells as f64;
    let mids: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
    let la = |t: f64, y: f64| legendre_dual_la(params, t, y);
    let y_max = if matches!(params.kind, EnsembleKind::Gram | EnsembleKind::Jacobi) { -1e-300 } else { 60.0 };
    let best_y = |t: f64, lam: f64| -> f64 {
        // argmin_y L_a(t, y) - λy on [-60, y_max]; derivative sign by finite differences
        let dl = |y: f64| {
            let e = 1e-7 * y.abs().max(1e-3);
            (la(t, y + e) - la(t, y - e)) / (2.0 * e) - lam
        };
        let (mut a, mut b) = (-60.0, y_max);
        if dl(b.min(-1e-9).max(a)) < 0.0 && y_max < 0.0 {
            b = -1e-12;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if dl(m) > 0.0 {
                b = m;
            } else {
                a = m;
            }
            if b - a < 1e-13 {
                break;
            }
        }
        0.5 * (a + b)
    };
    let total = |lam: f64| -> f64 { mids.iter().map(|&t| best_y(t, lam)).sum::<f64>() * h };
    let (mut lo, mut hi) = (-50.0, 50.0);
    while total(hi) < xi && hi < 1e12 {
        hi *= 4.0;
    }
    while total(lo) > xi && lo > -1e12 {
        lo *= 4.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if total(m) < xi {
            lo = m;
        } else {
            hi = m;
        }
        if hi - lo < 1e-12 * hi.abs().max(1.0) {
            break;
        }
    }
    let lam = 0.5 * (lo + hi);
    let ys: Vec<f64> = mids.iter().map(|&t| best_y(t, lam)).collect();
    let path = PathMeasure {
        grid: (0..=cells).map(|i| i as f64 * h).collect(),
        ac_density: ys,
        atoms: Vec::new(),
    };
    Ok((path_rate(params, &path), path))
}

/// Numerical Legendre transform sup_θ∈[lo,hi] {θy - f(θ)} of a convex f by
/// golden-section search; returns (value, argmax).
pub fn legendre_transform_numeric<F: Fn(f64) -> f64>(f: F, y: f64, lo: f64, hi: f64) -> (f64, f64) {
    let obj = |th: f64| {
        let v = f(th);
        if v.is_finite() {
            th * y - v
        } else {
            f64::NEG_INFINITY
        }
    };
    let (th, v) = golden_max(obj, lo, hi, 1e-12);
    (v, th)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..400 {
        if (b - a).abs() <= tol * (1.0 + c.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Both sides of an equality check.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EqualityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl EqualityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, gap: (lhs - rhs).abs() }
    }
}

/// I^spL_T(π^c_{σ²}) = -T²Σ + T∫(x - (1-T) log x) + 2B(T) for c ≤ 1, from
/// the closed-form energy, mean and log-moment of MP laws.
pub fn spectral_rate_laguerre(c: f64, sigma2: f64, big_t: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0 && sigma2 > 0.0) {
        return Err(domain!("spectral_rate_laguerre needs 0 < c ≤ 1 and σ² > 0, got ({c}, {sigma2})"));
    }
    let t = big_t;
    let sigma = sigma2.ln() + log_energy_mp(c)?;
    let log_moment = sigma2.ln() - entropy_j(1.0 - c) / c;
    Ok(-t * t * sigma + t * (sigma2 - (1.0 - t) * log_moment) + laguerre_free_energy(t)?)
}

/// I_T^L(ξ) against I^spL_T(π^{T/σ²}_{σ²}) with σ² = 1 + θ.
pub fn check_inf_iw(big_t: f64, xi: f64) -> Result<EqualityCheck> {
    let params = EnsembleParams { kind: EnsembleKind::Laguerre, beta: 2.0, n: 1, tau1: 1.0, tau2: 1.0 };
    check_horizon(&params, big_t)?;
    if xi < interior_endpoint(&params, big_t) {
        return Err(domain!("check_inf_iw: ξ = {xi} below ξ_T"));
    }
    let r = marginal_rate(&params, big_t, xi)?;
    let sigma2 = 1.0 + r.theta.unwrap_or(0.0);
    let c = (big_t / sigma2).min(1.0);
    Ok(EqualityCheck::new(r.rate, spectral_rate_laguerre(c, sigma2, big_t)?))
}

/// I^spJ_T(π_{a₋,a₊}). Σ by nested quadrature, ∫log x by the closed form and
/// ∫log(1-x) through the reflection x ↦ 1-x.
pub fn spectral_rate_jacobi(a_minus: f64, a_plus: f64, big_t: f64, tau1: f64, tau2: f64) -> Result<f64> {
    if !(big_t > 0.0 && big_t < tau1.min(tau2)) {
        return Err(domain!("spectral_rate_jacobi needs 0 < T < min(τ₁, τ₂), got T = {big_t}"));
    }
    let d = SpectralDist::mckay(a_minus, a_plus)?;
    let t = big_t;
    let sigma = log_energy_quadrature(&d)?;
    let lx = mckay_log_moment(a_minus, a_plus)?;
    let l1x = mckay_log_moment(1.0 - a_plus, 1.0 - a_minus)?;
    Ok(-t * t * sigma - t * ((tau1 - t) * lx + (tau2 - t) * l1x)
        + t * t * free_energy_b((tau1 - t) / t, (tau2 - t) / t)?)
}

/// McKay parameters (ã₋, ã₊) = a±(s̃₋, s̃₊) of the optimal spectral law.
pub fn jacobi_optimal_mckay(params: &EnsembleParams, big_t: f64, theta: f64) -> Result<(f64, f64)> {
    let (t1, t2) = (params.tau1, params.tau2);
    let d = t1 + t2 + theta;
    a_pm((t1 + theta) / d, (t1 + theta + t2 - big_t) / d)
}

/// I_T^J(ξ) against I^spJ_T(π_{ã₋,ã₊}) for ξ strictly inside (ξ_T^J, 0).
pub fn check_inf_i(tau1: f64, tau2: f64, big_t: f64, xi: f64) -> Result<EqualityCheck> {
    let params = EnsembleParams { kind: EnsembleKind::Jacobi, beta: 2.0, n: 1, tau1, tau2 };
    if !(big_t > 0.0 && big_t < tau1.min(tau2)) {
        return Err(domain!("check_inf_i needs 0 < T < min(τ₁, τ₂), got T = {big_t}"));
    }
    if !(xi > interior_endpoint(&params, big_t) && xi < 0.0) {
        return Err(domain!("check_inf_i: ξ = {xi} outside the open interior range"));
    }
    let r = marginal_rate(&params, big_t, xi)?;
    let theta = r.theta.unwrap_or(0.0);
    let (am, ap) = jacobi_optimal_mckay(&params, big_t, theta)?;
    Ok(EqualityCheck::new(r.rate, spectral_rate_jacobi(am, ap, big_t, tau1, tau2)?))
}

/// The marginal rate of the auxiliary process, I_T^S(ξ) = sup_θ {θξ - T J(1+θ)}.
pub fn aux_rate(big_t: f64, xi: f64) -> Result<f64> {
    let params = EnsembleParams { kind: EnsembleKind::AuxS, beta: 2.0, n: 1, tau1: 1.0, tau2: 1.0 };
    Ok(marginal_rate(&params, big_t, xi)?.rate)
}

/// max over the grid of |I_T^L(ξ) - min_{ξ₁} [I_T^G(ξ₁) + I_T^S(ξ - ξ₁)]|.
pub fn inf_convolution_check(big_t: f64, xis: &[f64]) -> Result<f64> {
    let gram = EnsembleParams { kind: EnsembleKind::Gram, beta: 2.0, n: 1, tau1: 1.0, tau2: 1.0 };
    let lag = gram.with_kind(EnsembleKind::Laguerre);
    let mut worst: f64 = 0.0;
    for &xi in xis {
        let lhs = marginal_rate(&lag, big_t, xi)?.rate;
        let rhs = inf_convolution_value(big_t, xi)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// min_{ξ₁<0} I_T^G(ξ₁) + I_T^S(ξ - ξ₁) by golden-section search.
pub fn inf_convolution_value(big_t: f64, xi: f64) -> Result<f64> {
    let gram = EnsembleParams { kind: EnsembleKind::Gram, beta: 2.0, n: 1, tau1: 1.0, tau2: 1.0 };
    let obj = |x1: f64| -> f64 {
        let g = marginal_rate(&gram, big_t, x1).map(|r| r.rate).unwrap_or(f64::INFINITY);
        let s = aux_rate(big_t, xi - x1).unwrap_or(f64::INFINITY);
        -(g + s)
    };
    let lo = (xi - 10.0).min(-big_t - 10.0);
    let (_, v) = golden_max(obj, lo, -1e-12, 1e-13);
    Ok(-v)
}
