//! Deterministic building blocks: the entropy J, its primitive F, the free
//! energies B, the Jacobi energy E, the Bernoulli relative entropy H, and
//! the drift, diffusion and limiting cgf densities of the three ensembles.
//!
//! Extended-real results use `f64::INFINITY`.

use crate::error::{domain, Result};
use crate::params::{EnsembleKind, EnsembleParams};
#[allow(unused_imports)]
use num_traits::Float;

/// x log x with the convention 0 log 0 = 0.
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// J(u) = u log u - u + 1 for u ≥ 0 (J(0) = 1), +∞ for u < 0.
pub fn entropy_j(u: f64) -> f64 {
    if u < 0.0 {
        f64::INFINITY
    } else if u == 0.0 {
        1.0
    } else {
        u * u.ln() - u + 1.0
    }
}

/// J'(u) = log u.
pub fn entropy_j_prime(u: f64) -> f64 {
    u.ln()
}

pub(crate) fn prim_f(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        0.5 * t * t * t.ln() - 0.75 * t * t + t
    }
}

/// F(t) = ∫₀ᵗ J = (t²/2) log t - 3t²/4 + t.
pub fn primitive_f(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain!("primitive_F: t must be nonnegative, got {t}"));
    }
    Ok(prim_f(t))
}

fn half_sq_log(x: f64) -> f64 {
    0.5 * x * xlogx(x)
}

fn check_nonneg2(name: &str, s: f64, t: f64) -> Result<()> {
    if s >= 0.0 && t >= 0.0 {
        Ok(())
    } else {
        Err(domain!("{name}: arguments must be nonnegative, got ({s}, {t})"))
    }
}

/// The free energy B(s, t), written with the (x²/2) log x terms.
pub fn free_energy_b(s: f64, t: f64) -> Result<f64> {
    check_nonneg2("free_energy_B", s, t)?;
    Ok(half_sq_log(1.0 + s) - half_sq_log(s) + half_sq_log(1.0 + t) - half_sq_log(t)
        - half_sq_log(2.0 + s + t)
        + half_sq_log(1.0 + s + t))
}

/// The same quantity written through F.
pub fn free_energy_b_via_f(s: f64, t: f64) -> Result<f64> {
    check_nonneg2("free_energy_B", s, t)?;
    Ok(prim_f(1.0 + s) - prim_f(s) + prim_f(1.0 + t) - prim_f(t) - prim_f(2.0 + s + t)
        + prim_f(1.0 + s + t)
        - 1.75)
}

/// The Laguerre free energy 2B(T) = -(3T - T² log T + (1-T)² log(1-T))/2.
pub fn laguerre_free_energy(big_t: f64) -> Result<f64> {
    if !(big_t > 0.0 && big_t < 1.0) {
        return Err(domain!("laguerre free energy: T must lie in (0, 1), got {big_t}"));
    }
    let u = 1.0 - big_t;
    Ok(-0.5 * (3.0 * big_t - big_t * xlogx(big_t) + u * xlogx(u)))
}

fn check_energy_domain(x: f64, y: f64, z: f64) -> Result<()> {
    if x >= 0.0 && x - z >= 0.0 && x + y >= 0.0 && x + y - z >= 0.0 {
        Ok(())
    } else {
        Err(domain!("energy_E: J arguments must be nonnegative at ({x}, {y}, {z})"))
    }
}

/// E(x, y, z) = J(x) - J(x-z) - J(x+y) + J(x+y-z).
///
/// Defined whenever all four J arguments are nonnegative, which contains
/// the region x, y > 0, 0 ≤ z ≤ x and also allows the negative z met by
/// the Jacobi cgf.
pub fn energy_e(x: f64, y: f64, z: f64) -> Result<f64> {
    check_energy_domain(x, y, z)?;
    Ok(energy_e_raw(x, y, z))
}

pub(crate) fn energy_e_raw(x: f64, y: f64, z: f64) -> f64 {
    // the J form; the linear and constant parts cancel
    xlogx(x) - xlogx(x - z) - xlogx(x + y) + xlogx(x + y - z)
}

/// E₁ = ∂E/∂x = log[x (x+y-z) / ((x-z)(x+y))].
pub fn energy_e1(x: f64, y: f64, z: f64) -> Result<f64> {
    check_energy_domain(x, y, z)?;
    Ok(x.ln() + (x + y - z).ln() - (x - z).ln() - (x + y).ln())
}

/// Relative entropy of Bernoulli(x) with respect to Bernoulli(p), +∞ when
/// x lies outside [0, 1].
pub fn bernoulli_entropy_h(x: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain!("bernoulli_entropy_H: p must lie in (0, 1), got {p}"));
    }
    Ok(bernoulli_h_raw(x, p))
}

pub(crate) fn bernoulli_h_raw(x: f64, p: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return f64::INFINITY;
    }
    let q = 1.0 - x;
    let a = if x == 0.0 { 0.0 } else { x * (x.ln() - p.ln()) };
    let b = if q == 0.0 { 0.0 } else { q * (q.ln() - (-p).ln_1p()) };
    a + b
}

fn check_time(params: &EnsembleParams, t: f64) -> Result<()> {
    let end = params.time_horizon();
    let ok = match params.kind {
        EnsembleKind::AuxS => (0.0..=1.0).contains(&t),
        _ => t >= 0.0 && t < end,
    };
    if ok {
        Ok(())
    } else {
        Err(domain!("time t = {t} outside the {} interval", params.kind.name()))
    }
}

/// (d(t), σ(t)²): drift and squared diffusion coefficient of the limiting
/// Gaussian diffusion.
pub fn drift_diffusion(params: &EnsembleParams, t: f64) -> Result<(f64, f64)> {
    check_time(params, t)?;
    let b = params.beta;
    let half_minus = 0.5 - 1.0 / b;
    Ok(match params.kind {
        EnsembleKind::Gram => (1.0 / b + half_minus / (1.0 - t), 2.0 * t / (b * (1.0 - t))),
        EnsembleKind::Laguerre => (half_minus / (1.0 - t), 2.0 / (b * (1.0 - t))),
        EnsembleKind::Jacobi => {
            let s2 = jacobi_sigma2(params.tau1, params.tau2, t);
            (half_minus * s2, 2.0 / b * s2)
        }
        EnsembleKind::AuxS => (-1.0 / b, 2.0 / b),
    })
}

/// σ²(t) = τ₂ / ((τ₁-t)(τ₁+τ₂-t)) = ∂E₁(τ₁, τ₂, t)/∂t.
pub fn jacobi_sigma2(tau1: f64, tau2: f64, t: f64) -> f64 {
    tau2 / ((tau1 - t) * (tau1 + tau2 - t))
}

/// Limiting cgf density g(t, θ); +∞ outside its finiteness region.
pub fn limiting_cgf_density_g(params: &EnsembleParams, t: f64, theta: f64) -> f64 {
    cgf_density(params.kind, params.tau1, params.tau2, t, theta)
}

pub(crate) fn cgf_density(kind: EnsembleKind, tau1: f64, tau2: f64, t: f64, theta: f64) -> f64 {
    match kind {
        EnsembleKind::Gram => {
            entropy_j(1.0 - t + theta) - entropy_j(1.0 - t) - entropy_j(1.0 + theta)
        }
        EnsembleKind::Laguerre => entropy_j(1.0 - t + theta) - entropy_j(1.0 - t),
        EnsembleKind::Jacobi => {
            let x = tau1 - t + theta;
            if x < 0.0 {
                f64::INFINITY
            } else {
                energy_e_raw(x, tau2, theta)
            }
        }
        EnsembleKind::AuxS => entropy_j(1.0 + theta),
    }
}
