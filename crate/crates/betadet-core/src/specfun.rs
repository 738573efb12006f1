//! Log-gamma, digamma and polygamma from Binet's integral
//!
//! ```text
//! log Γ(x) = (x - 1/2) log x - x + log(2π)/2 + ∫₀^∞ f(s) e^{-sx} ds,
//! f(s)     = (1/2 - 1/s + 1/(e^s - 1)) / s.
//! ```
//!
//! Arguments below [`SHIFT_TARGET`] are moved up with the recurrences, then
//! the Laplace integral is evaluated by composite 16-point Gauss-Legendre
//! in u = s·x over [0, [`U_MAX`]].

use crate::error::{domain, Result};
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Arguments are shifted by the recurrences until they reach this value.
pub const SHIFT_TARGET: f64 = 8.0;
/// Truncation of the Laplace integral in the scaled variable u = s·x.
pub const U_MAX: f64 = 50.0;
/// Below this, f is evaluated from its Taylor series.
pub const TAYLOR_CUTOFF: f64 = 0.5;

const PANELS: [f64; 11] = [0.0, 1.0, 2.0, 4.0, 7.0, 11.0, 16.0, 22.0, 30.0, 40.0, U_MAX];

const GL16_X: [f64; 8] = [
    0.095_012_509_837_637_45,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_37,
    0.617_876_244_402_643_8,
    0.755_404_408_355_003,
    0.865_631_202_387_831_8,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_W: [f64; 8] = [
    0.189_450_610_455_068_6,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_6,
    0.149_595_988_816_576_76,
    0.124_628_971_255_534_03,
    0.095_158_511_682_492_59,
    0.062_253_523_938_647_706,
    0.027_152_459_411_754_037,
];

/// Bernoulli coefficients B_{2k}/(2k)! for k = 1..6.
const TAYLOR: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
];

/// Description of the quadrature used for a Binet integral at argument x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per panel.
    pub nodes: usize,
    pub panels: usize,
    /// Truncation point S in the original variable s.
    pub truncation: f64,
    pub tol: f64,
}

impl QuadratureSpec {
    pub fn for_argument(x: f64) -> Self {
        Self { nodes: 16, panels: PANELS.len() - 1, truncation: U_MAX / x, tol: DEFAULT_TOL }
    }

    /// Bound on the dropped tail of ∫ f(s)e^{-sx} ds, using 0 < f ≤ 1/12.
    pub fn tail_bound(&self, x: f64) -> f64 {
        (-self.truncation * x).exp() / (12.0 * x)
    }
}

/// Binet's kernel f(s). Even in s, with f(0) = 1/12.
pub fn binet_f(s: f64) -> f64 {
    let s = s.abs();
    if s < TAYLOR_CUTOFF {
        let s2 = s * s;
        let mut acc = 0.0;
        for c in TAYLOR.iter().rev() {
            acc = acc * s2 + c;
        }
        acc
    } else {
        (0.5 - 1.0 / s + 1.0 / s.exp_m1()) / s
    }
}

/// s·f(s) + 1/2, which lies in (1/2, 1) for s > 0.
fn binet_g(s: f64) -> f64 {
    s * binet_f(s) + 0.5
}

/// ∫₀^∞ k(s) e^{-sx} ds for x ≥ SHIFT_TARGET, computed in u = s·x.
fn laplace<K: Fn(f64) -> f64>(kernel: K, x: f64) -> f64 {
    let mut acc = 0.0;
    for w in PANELS.windows(2) {
        let (m, h) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        let mut part = 0.0;
        for (xi, wi) in GL16_X.iter().zip(&GL16_W) {
            let (u1, u2) = (m - h * xi, m + h * xi);
            part += wi * (kernel(u1 / x) * (-u1).exp() + kernel(u2 / x) * (-u2).exp());
        }
        acc += part * h;
    }
    acc / x
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain!("{name}: argument must be positive and finite, got {x}"))
    }
}

/// log Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    let (mut z, mut prod) = (x, 1.0);
    while z < SHIFT_TARGET {
        prod *= z;
        z += 1.0;
    }
    let stirling = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln();
    Ok(stirling + laplace(binet_f, z) - prod.ln())
}

/// Digamma Ψ(x) = (log Γ)'(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    let (mut z, mut shift) = (x, 0.0);
    while z < SHIFT_TARGET {
        shift += 1.0 / z;
        z += 1.0;
    }
    Ok(z.ln() - 0.5 / z - laplace(|s| s * binet_f(s), z) - shift)
}

/// Highest polygamma order supported.
pub const MAX_POLYGAMMA_ORDER: u32 = 3;

/// Polygamma Ψ^{(q)}(x) for q in 1..=3 and x > 0, from
/// Ψ^{(q)}(z) = (-1)^{q-1} [(q-1)! z^{-q} + ∫ e^{-sz} s^q (s f(s) + 1/2) ds].
pub fn polygamma(q: u32, x: f64) -> Result<f64> {
    check_positive("polygamma", x)?;
    if q == 0 || q > MAX_POLYGAMMA_ORDER {
        return Err(domain!("polygamma: order must be in 1..={MAX_POLYGAMMA_ORDER}, got {q}"));
    }
    let qi = q as i32;
    let fact = factorial(q);
    let lead = factorial(q - 1);
    let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
    let (mut z, mut shift) = (x, 0.0);
    while z < SHIFT_TARGET {
        shift += z.powi(-(qi + 1));
        z += 1.0;
    }
    let body = lead * z.powi(-qi) + laplace(|s| s.powi(qi) * binet_g(s), z);
    Ok(sign * (body + fact * shift))
}

fn factorial(q: u32) -> f64 {
    (1..=q).map(f64::from).product()
}

/// H_p = 1 + 1/2 + ... + 1/p with compensated summation.
pub fn harmonic(p: u64) -> f64 {
    crate::quad::compensated_sum((1..=p).rev().map(|k| 1.0 / k as f64))
}

/// log(n (n-1) ... (n-r+1)) = log Γ(n+1) - log Γ(n-r+1).
pub fn log_falling_factorial(n: u64, r: u64) -> Result<f64> {
    if r > n {
        return Err(domain!("log_falling_factorial: r = {r} exceeds n = {n}"));
    }
    if r == 0 {
        return Ok(0.0);
    }
    Ok(log_gamma(n as f64 + 1.0)? - log_gamma((n - r) as f64 + 1.0)?)
}

/// ∫₀^∞ f(s)(e^{-sx} - e^{-s}) ds form: log Γ(x) - ((x - 1/2) log x - x + 1).
pub fn binet_remainder_unit_anchor(x: f64) -> Result<f64> {
    Ok(log_gamma(x)? - ((x - 0.5) * x.ln() - x + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::vec::Vec;

    fn series_f(s: f64) -> f64 {
        // 2 Σ 1/(s²+4π²k²) to 10⁶ terms plus the integral tail bound
        let n = 1_000_000u64;
        let c = 4.0 * PI * PI;
        let sum: f64 = (1..=n).rev().map(|k| 1.0 / (s * s + c * (k * k) as f64)).sum();
        let kk = n as f64 + 0.5;
        let tail = (1.0 / (2.0 * PI * s)) * (PI / 2.0 - (2.0 * PI * kk / s).atan());
        2.0 * (sum + tail)
    }

    #[test]
    fn f_at_zero_and_one() {
        assert_eq!(binet_f(0.0), 1.0 / 12.0);
        assert_abs_diff_eq!(binet_f(1.0), series_f(1.0), epsilon = 1e-12);
    }

    #[test]
    fn f_taylor_crossover_matches_series() {
        for s in [0.01, 0.3, TAYLOR_CUTOFF - 1e-12, TAYLOR_CUTOFF, 0.8] {
            assert_abs_diff_eq!(binet_f(s), series_f(s), epsilon = 1e-13);
        }
    }

    #[test]
    fn log_gamma_known_values() {
        assert_abs_diff_eq!(log_gamma(1.0).unwrap(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(log_gamma(0.5).unwrap(), 0.5 * PI.ln(), epsilon = 1e-13);
        assert_abs_diff_eq!(log_gamma(10.0).unwrap(), 362_880f64.ln(), epsilon = 1e-12);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.0).is_err());
    }

    #[test]
    fn log_gamma_against_libm() {
        for &x in &[1e-8, 0.01, 0.3, 1.7, 7.999, 8.0, 23.5, 315.25, 1e4, 1e7] {
            let want = libm::lgamma(x);
            let got = log_gamma(x).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "x={x} {got} {want}");
        }
    }

    #[test]
    fn digamma_known_values() {
        assert_abs_diff_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma(0.5).unwrap(), -EULER_GAMMA - 2.0 * 2f64.ln(), epsilon = 1e-13);
    }

    #[test]
    fn polygamma_known_values() {
        assert_abs_diff_eq!(polygamma(1, 1.0).unwrap(), PI * PI / 6.0, epsilon = 1e-13);
        // Ψ'''(2) = Σ_{k≥0} 6/(2+k)⁴ = π⁴/15 - 6
        let direct: f64 = (0..200_000u64).rev().map(|k| 6.0 / ((2 + k) as f64).powi(4)).sum();
        let want = PI.powi(4) / 15.0 - 6.0;
        assert_abs_diff_eq!(direct, want, epsilon = 1e-12);
        assert_abs_diff_eq!(polygamma(3, 2.0).unwrap(), want, epsilon = 1e-12);
        assert_abs_diff_eq!(polygamma(2, 1.0).unwrap(), -2.0 * 1.202_056_903_159_594_2, epsilon = 1e-12);
        assert!(polygamma(0, 1.0).is_err());
        assert!(polygamma(4, 1.0).is_err());
    }

    #[test]
    fn harmonic_values() {
        assert_eq!(harmonic(0), 0.0);
        assert_abs_diff_eq!(harmonic(3), 11.0 / 6.0, epsilon = 1e-15);
        let p = 1_000_000u64;
        let asym = (p as f64).ln() + EULER_GAMMA + 0.5 / p as f64;
        assert_abs_diff_eq!(harmonic(p), asym, epsilon = 1e-6);
    }

    #[test]
    fn falling_factorial() {
        assert_eq!(log_falling_factorial(5, 0).unwrap(), 0.0);
        assert_abs_diff_eq!(log_falling_factorial(5, 5).unwrap(), 120f64.ln(), epsilon = 1e-12);
        let direct: f64 = (0..30).map(|j| (100.0 - j as f64).ln()).sum();
        assert_abs_diff_eq!(log_falling_factorial(100, 30).unwrap(), direct, epsilon = 1e-10);
        assert!(log_falling_factorial(3, 4).is_err());
    }

    #[test]
    fn unit_anchored_form_constant() {
        // ∫ f(s) e^{-s} ds = 1 - log(2π)/2; the unit-anchored remainder vanishes at x = 1
        assert_abs_diff_eq!(binet_remainder_unit_anchor(1.0).unwrap(), 0.0, epsilon = 1e-13);
        let direct = crate::quad::integrate(|s| binet_f(s) * (-s).exp(), 0.0, 60.0, 1e-14);
        assert_abs_diff_eq!(direct, 1.0 - 0.5 * (2.0 * PI).ln(), epsilon = 1e-12);
    }

    #[test]
    fn tail_bound_below_tolerance() {
        for x in [8.0, 100.0, 1e6] {
            let q = QuadratureSpec::for_argument(x);
            assert!(q.nodes >= 16);
            assert!(q.tail_bound(x) < q.tol);
        }
    }

    #[test]
    fn f_strictly_decreasing() {
        let grid: Vec<f64> = (0..=5000).map(|i| i as f64 * 0.01).collect();
        for w in grid.windows(2) {
            assert!(binet_f(w[1]) < binet_f(w[0]), "f not decreasing at {}", w[1]);
        }
    }
}
