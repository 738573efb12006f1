//! Exact finite-n moments of the log-determinant processes and their
//! first-order asymptotics.
//!
//! A Gamma(a, c) factor has E log X = Ψ(a) - log c and Var log X = Ψ'(a);
//! a Beta(a, b) factor has Ψ(a) - Ψ(a+b) and Ψ'(a) - Ψ'(a+b). The process
//! moments are sums of these over the independent factors.

use crate::entropy::{energy_e, entropy_j, jacobi_sigma2};
use crate::error::{domain, Result};
use crate::params::{EnsembleKind, EnsembleParams};
use crate::quad::{self, compensated_sum};
use crate::specfun::{binet_f, digamma, polygamma, EULER_GAMMA};
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentReport {
    pub params: EnsembleParams,
    pub p: usize,
    pub t: f64,
    pub exact_mean: f64,
    pub exact_var: f64,
    pub asymptotic_mean: f64,
    pub asymptotic_var: f64,
    pub gap_mean: f64,
    pub gap_var: f64,
}

fn check_index(params: &EnsembleParams, p: usize) -> Result<()> {
    let h = params.horizon_index();
    if p == 0 || p > h {
        Err(domain!("index p = {p} outside 1..={h}"))
    } else {
        Ok(())
    }
}

/// E log ρ_j for the j-th factor (1-based).
pub fn factor_log_mean(params: &EnsembleParams, j: usize) -> Result<f64> {
    let bp = params.beta_prime();
    let n = params.n as f64;
    let j = j as f64;
    Ok(match params.kind {
        EnsembleKind::Gram if j == 1.0 => 0.0,
        EnsembleKind::Gram => digamma(bp * (n - j + 1.0))? - digamma(bp * n)?,
        // log(ρ/(βn)) with ρ ~ Gamma(β'(n-j+1), 1/2): Ψ + log 2 - log βn
        EnsembleKind::Laguerre => digamma(bp * (n - j + 1.0))? - (bp * n).ln(),
        EnsembleKind::Jacobi => {
            let (n1, n2) = (params.n1() as f64, params.n2() as f64);
            digamma(bp * (n1 - j + 1.0))? - digamma(bp * (n1 + n2 - j + 1.0))?
        }
        EnsembleKind::AuxS => digamma(bp * n)? - (bp * n).ln(),
    })
}

/// Var log ρ_j for the j-th factor (1-based).
pub fn factor_log_var(params: &EnsembleParams, j: usize) -> Result<f64> {
    let bp = params.beta_prime();
    let n = params.n as f64;
    let j = j as f64;
    Ok(match params.kind {
        EnsembleKind::Gram if j == 1.0 => 0.0,
        EnsembleKind::Gram => polygamma(1, bp * (n - j + 1.0))? - polygamma(1, bp * n)?,
        EnsembleKind::Laguerre => polygamma(1, bp * (n - j + 1.0))?,
        EnsembleKind::Jacobi => {
            let (n1, n2) = (params.n1() as f64, params.n2() as f64);
            polygamma(1, bp * (n1 - j + 1.0))? - polygamma(1, bp * (n1 + n2 - j + 1.0))?
        }
        EnsembleKind::AuxS => polygamma(1, bp * n)?,
    })
}

fn factor_sum(params: &EnsembleParams, p: usize, f: fn(&EnsembleParams, usize) -> Result<f64>) -> Result<f64> {
    let params = params.validated()?;
    check_index(&params, p)?;
    if params.kind == EnsembleKind::AuxS {
        // identical factors
        return Ok(p as f64 * f(&params, 1)?);
    }
    let terms = (1..=p).map(|j| f(&params, j)).collect::<Result<alloc::vec::Vec<f64>>>()?;
    Ok(compensated_sum(terms))
}

/// E log Δ_{n,p}.
pub fn exact_mean_logdet(params: &EnsembleParams, p: usize) -> Result<f64> {
    factor_sum(params, p, factor_log_mean)
}

/// Var log Δ_{n,p}.
pub fn exact_var_logdet(params: &EnsembleParams, p: usize) -> Result<f64> {
    factor_sum(params, p, factor_log_var)
}

fn check_open_time(params: &EnsembleParams, t: f64) -> Result<()> {
    let end = params.time_horizon();
    let ok = match params.kind {
        EnsembleKind::AuxS => (0.0..=1.0).contains(&t),
        _ => t >= 0.0 && t < end,
    };
    if ok {
        Ok(())
    } else {
        Err(domain!("t = {t} outside the open {} time interval", params.kind.name()))
    }
}

/// ln[τ₁(τ₁+τ₂-t) / ((τ₁-t)(τ₁+τ₂))] = ∫₀ᵗ τ₂/((τ₁-s)(τ₁+τ₂-s)) ds.
fn jacobi_sigma2_integral(tau1: f64, tau2: f64, t: f64) -> f64 {
    (-t / (tau1 + tau2)).ln_1p() - (-t / tau1).ln_1p()
}

/// ∫₀ᵗ d(s) ds in closed form.
pub fn integrated_drift(params: &EnsembleParams, t: f64) -> Result<f64> {
    check_open_time(params, t)?;
    let b = params.beta;
    let hm = 0.5 - 1.0 / b;
    Ok(match params.kind {
        EnsembleKind::Gram => t / b - hm * (-t).ln_1p(),
        EnsembleKind::Laguerre => -hm * (-t).ln_1p(),
        EnsembleKind::Jacobi => hm * jacobi_sigma2_integral(params.tau1, params.tau2, t),
        EnsembleKind::AuxS => -t / b,
    })
}

/// ∫₀ᵗ σ(s)² ds in closed form.
pub fn integrated_var(params: &EnsembleParams, t: f64) -> Result<f64> {
    check_open_time(params, t)?;
    let c = 2.0 / params.beta;
    Ok(match params.kind {
        EnsembleKind::Gram => c * (-t - (-t).ln_1p()),
        EnsembleKind::Laguerre => -c * (-t).ln_1p(),
        EnsembleKind::Jacobi => c * jacobi_sigma2_integral(params.tau1, params.tau2, t),
        EnsembleKind::AuxS => c * t,
    })
}

/// Deterministic first-order centering: -nJ(1-⌊nt⌋/n) (Gram, Laguerre) or
/// E(n₁, n₂, ⌊nt⌋) (Jacobi); zero for the auxiliary process.
pub fn lln_centering(params: &EnsembleParams, t: f64) -> Result<f64> {
    let n = params.n as f64;
    let p = params.index_at(t) as f64;
    Ok(match params.kind {
        EnsembleKind::Gram | EnsembleKind::Laguerre => -n * entropy_j(1.0 - p / n),
        EnsembleKind::Jacobi => energy_e(params.n1() as f64, params.n2() as f64, p)?,
        EnsembleKind::AuxS => 0.0,
    })
}

/// Centering plus ∫₀ᵗ d.
pub fn asymptotic_mean(params: &EnsembleParams, t: f64) -> Result<f64> {
    let params = params.validated()?;
    Ok(lln_centering(&params, t)? + integrated_drift(&params, t)?)
}

/// ∫₀ᵗ σ².
pub fn asymptotic_var(params: &EnsembleParams, t: f64) -> Result<f64> {
    let params = params.validated()?;
    integrated_var(&params, t)
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(domain!("beta must be positive, got {beta}"))
    }
}

/// ∫₀^∞ k(s)/(e^{βs/2}-1) ds computed in u = βs/2.
fn bose_integral<K: Fn(f64) -> f64>(beta: f64, kernel: K) -> f64 {
    let c = 2.0 / beta;
    quad::adaptive(
        |u: f64| {
            let s = c * u;
            c * kernel(s) / u.exp_m1()
        },
        0.0,
        80.0,
        1e-15,
        1e-14,
        2000,
    )
    .value
}

/// K¹_β = log(2π)/2 + (1-γ)/β - ∫₀^∞ s f(s)/(e^{βs/2}-1) ds.
pub fn constant_k1(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(0.5 * (2.0 * PI).ln() + (1.0 - EULER_GAMMA) / beta - bose_integral(beta, |s| s * binet_f(s)))
}

/// K²_β = 2(γ-1)/β + ∫₀^∞ s(s f(s) + 1/2)/(e^{βs/2}-1) ds.
pub fn constant_k2(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(2.0 * (EULER_GAMMA - 1.0) / beta + bose_integral(beta, |s| s * (s * binet_f(s) + 0.5)))
}

/// Limits at the right end of the time interval:
/// E log Δ(end) - centering + (1/β - 1/2) log n → mean constant and
/// Var log Δ(end) - (2/β) log n → variance constant, where the centering is
/// -n (Gram, Laguerre) or E(n₁, n₂, n₁) (Jacobi).
///
/// Gram gives (K¹, K²). The Laguerre normalisation by βn adds
/// n(Ψ(β'n) - log β'n) → -1/β to the mean and nΨ'(β'n) → 2/β to the
/// variance; Jacobi inherits the same two terms through its n₂-side sum.
pub fn endpoint_constants(params: &EnsembleParams) -> Result<(f64, f64)> {
    let b = params.beta;
    let (k1, k2) = (constant_k1(b)?, constant_k2(b)?);
    Ok(match params.kind {
        EnsembleKind::Gram => (k1, k2),
        EnsembleKind::Laguerre => (k1 - 1.0 / b, k2 + 2.0 / b),
        EnsembleKind::Jacobi => jacobi_endpoint_corrections(params)?,
        EnsembleKind::AuxS => return Err(domain!("the auxiliary process has no endpoint singularity")),
    })
}

/// The Jacobi endpoint constants at t = τ₁:
/// mean (1/2 - 1/β) log(τ₁τ₂/(τ₁+τ₂)) + K¹ - 1/β,
/// variance (2/β) log(τ₁τ₂/(τ₁+τ₂)) + K² + 2/β.
pub fn jacobi_endpoint_corrections(params: &EnsembleParams) -> Result<(f64, f64)> {
    let b = params.beta;
    let l = (params.tau1 * params.tau2 / (params.tau1 + params.tau2)).ln();
    Ok((
        (0.5 - 1.0 / b) * l + constant_k1(b)? - 1.0 / b,
        2.0 / b * l + constant_k2(b)? + 2.0 / b,
    ))
}

/// Predicted E log Δ at the last index, from [`endpoint_constants`].
pub fn endpoint_mean_prediction(params: &EnsembleParams) -> Result<f64> {
    let n = params.n as f64;
    let centering = match params.kind {
        EnsembleKind::Jacobi => energy_e(params.n1() as f64, params.n2() as f64, params.n1() as f64)?,
        _ => -n,
    };
    Ok(centering - (1.0 / params.beta - 0.5) * n.ln() + endpoint_constants(params)?.0)
}

/// Predicted Var log Δ at the last index.
pub fn endpoint_var_prediction(params: &EnsembleParams) -> Result<f64> {
    Ok(2.0 / params.beta * (params.n as f64).ln() + endpoint_constants(params)?.1)
}

/// Exact and asymptotic moments at index p. At the last index of a
/// Gram/Laguerre/Jacobi process the asymptotic values come from the
/// endpoint constants.
pub fn moment_report(params: &EnsembleParams, p: usize) -> Result<MomentReport> {
    let params = params.validated()?;
    let exact_mean = exact_mean_logdet(&params, p)?;
    let exact_var = exact_var_logdet(&params, p)?;
    let t = p as f64 / params.n as f64;
    let at_end = p == params.horizon_index() && params.kind != EnsembleKind::AuxS;
    let (asymptotic_mean, asymptotic_var) = if at_end {
        (endpoint_mean_prediction(&params)?, endpoint_var_prediction(&params)?)
    } else {
        (asymptotic_mean(&params, t)?, asymptotic_var(&params, t)?)
    };
    Ok(MomentReport {
        params,
        p,
        t,
        exact_mean,
        exact_var,
        asymptotic_mean,
        asymptotic_var,
        gap_mean: exact_mean - asymptotic_mean,
        gap_var: exact_var - asymptotic_var,
    })
}

/// Raw σ² of the Jacobi diffusion (without the 2/β factor).
pub fn jacobi_sigma2_raw(params: &EnsembleParams, t: f64) -> f64 {
    jacobi_sigma2(params.tau1, params.tau2, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::drift_diffusion;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gram_small_cases() {
        let p = EnsembleParams::gram(1.0, 4).unwrap();
        assert_eq!(exact_mean_logdet(&p, 1).unwrap(), 0.0);
        assert_eq!(exact_var_logdet(&p, 1).unwrap(), 0.0);
        let want = digamma(1.5).unwrap() - digamma(2.0).unwrap();
        assert_abs_diff_eq!(exact_mean_logdet(&p, 2).unwrap(), want, epsilon = 1e-14);
        assert!(exact_mean_logdet(&p, 5).is_err());
        assert!(exact_mean_logdet(&p, 0).is_err());
    }

    #[test]
    fn antiderivatives_match_drift_diffusion() {
        let base = EnsembleParams::jacobi(0.7, 10, 1.0, 2.0).unwrap();
        let h = 1e-5;
        for kind in [EnsembleKind::Gram, EnsembleKind::Laguerre, EnsembleKind::Jacobi, EnsembleKind::AuxS] {
            let p = base.with_kind(kind);
            for t in [0.1, 0.4, 0.8] {
                let (d, s2) = drift_diffusion(&p, t).unwrap();
                let fd_d = (integrated_drift(&p, t + h).unwrap() - integrated_drift(&p, t - h).unwrap()) / (2.0 * h);
                let fd_v = (integrated_var(&p, t + h).unwrap() - integrated_var(&p, t - h).unwrap()) / (2.0 * h);
                assert_abs_diff_eq!(fd_d, d, epsilon = 1e-7);
                assert_abs_diff_eq!(fd_v, s2, epsilon = 1e-7);
            }
            assert_eq!(integrated_var(&p, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn gram_var_example() {
        let p = EnsembleParams::gram(2.0, 10).unwrap();
        assert_abs_diff_eq!(asymptotic_var(&p, 0.5).unwrap(), 2f64.ln() - 0.5, epsilon = 1e-15);
    }

    #[test]
    fn k_constants_at_beta_two() {
        // β = 2: K¹ = 1 and K² = γ
        assert_abs_diff_eq!(constant_k1(2.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(constant_k2(2.0).unwrap(), EULER_GAMMA, epsilon = 1e-12);
        assert!(constant_k2(1.0).unwrap() > 2.0 * (EULER_GAMMA - 1.0));
        assert!(constant_k1(0.0).is_err());
    }

    #[test]
    fn jacobi_corrections_symmetric_case() {
        let p = EnsembleParams::jacobi(2.0, 10, 1.0, 1.0).unwrap();
        let (m, v) = jacobi_endpoint_corrections(&p).unwrap();
        assert_abs_diff_eq!(m, constant_k1(2.0).unwrap() - 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(v, -(2f64.ln()) + constant_k2(2.0).unwrap() + 1.0, epsilon = 1e-14);
    }

    #[test]
    fn aux_moments() {
        let p = EnsembleParams::aux(1.0, 50).unwrap();
        let m = exact_mean_logdet(&p, 50).unwrap();
        assert_abs_diff_eq!(m, 50.0 * (digamma(25.0).unwrap() - 25f64.ln()), epsilon = 1e-12);
    }
}
