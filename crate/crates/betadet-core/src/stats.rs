//! Sample summaries and Kolmogorov-Smirnov statistics.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

pub fn mean(xs: &[f64]) -> f64 {
    crate::quad::compensated_sum(xs.iter().copied()) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    crate::quad::compensated_sum(xs.iter().map(|x| (x - m) * (x - m))) / (xs.len() as f64 - 1.0)
}

/// Standard error of the sample mean.
pub fn std_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Asymptotic Kolmogorov critical constant c(α) = √(-ln(α/2)/2).
pub fn ks_critical_constant(alpha: f64) -> f64 {
    (-0.5 * (0.5 * alpha).ln()).sqrt()
}

/// Critical value of the one-sample statistic at level α.
pub fn ks_critical_one(alpha: f64, n: usize) -> f64 {
    ks_critical_constant(alpha) / (n as f64).sqrt()
}

/// Critical value of the two-sample statistic at level α.
pub fn ks_critical_two(alpha: f64, n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_critical_constant(alpha) * ((n + m) / (n * m)).sqrt()
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

/// sup_x |F_N(x) - F(x)| for a distribution that may have atoms.
///
/// `cdf` is right-continuous; `cdf_left(x)` is its left limit F(x-). Ties
/// in the sample are grouped, so atoms are compared on both sides of the
/// jump.
pub fn ks_one_sample<F, G>(samples: &[f64], cdf: F, cdf_left: G) -> f64
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let xs = sorted(samples);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let below = i as f64 / n;
        let upto = j as f64 / n;
        d = d.max((cdf_left(v) - below).abs()).max((upto - cdf(v)).abs());
        i = j;
    }
    d
}

/// Two-sample statistic sup_x |F_N(x) - G_M(x)|.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (xa, xb) = (sorted(a), sorted(b));
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let v = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= v {
            i += 1;
        }
        while j < xb.len() && xb[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
