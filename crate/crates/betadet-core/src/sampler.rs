//! Exact samplers for the determinant processes.
//!
//! Every process is a partial sum of independent log factors:
//! Laguerre log(ρ/(βn)) with ρ ~ Gamma(β'(n-j+1), 1/2),
//! Gram log ρ with ρ ~ Beta(β'(n-j+1), β'(j-1)) (ρ₁ = 1),
//! Jacobi log ρ with ρ ~ Beta(β'(n₁-j+1), β'n₂),
//! and the auxiliary process S with factors Gamma(β'n, β'n).
//! Gamma laws use the rate parameterisation (mean = shape/rate).

use crate::error::{domain, Error, Result};
use crate::params::{EnsembleKind, EnsembleParams};
use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, Gamma, Open01};

/// A seeded ChaCha8 stream. The pair (seed, stream) fixes the sequence.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn check_shape(name: &str, a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(domain!("{name}: parameter must be positive and finite, got {a}"))
    }
}

/// log of a Gamma(shape, 1) draw.
///
/// For shape < 1 the boost γ(a) = γ(a+1)·U^{1/a} is applied in log space,
/// so tiny shapes give large negative logs instead of underflowing to 0.
pub fn sample_log_gamma_unit<R: RngCore + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    check_shape("sample_gamma", shape)?;
    if shape >= 1.0 {
        let g = Gamma::new(shape, 1.0).map_err(|e| domain!("sample_gamma: {e}"))?;
        Ok(g.sample(rng).ln())
    } else {
        let g = Gamma::new(shape + 1.0, 1.0).map_err(|e| domain!("sample_gamma: {e}"))?;
        let u: f64 = Open01.sample(rng);
        Ok(g.sample(rng).ln() + u.ln() / shape)
    }
}

/// log of a Gamma(shape, rate) draw.
pub fn sample_log_gamma<R: RngCore + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    check_shape("sample_gamma rate", rate)?;
    Ok(sample_log_gamma_unit(shape, rng)? - rate.ln())
}

/// One Gamma(shape, rate) draw.
pub fn sample_gamma<R: RngCore + ?Sized>(shape: f64, rate: f64, rng: &mut R) -> Result<f64> {
    Ok(sample_log_gamma(shape, rate, rng)?.exp())
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// (log β, log(1-β)) for β = γ(a)/(γ(a)+γ(b)) ~ Beta(a, b).
pub fn sample_log_beta<R: RngCore + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<(f64, f64)> {
    let la = sample_log_gamma_unit(a, rng)?;
    let lb = sample_log_gamma_unit(b, rng)?;
    let s = log_add_exp(la, lb);
    Ok((la - s, lb - s))
}

/// One Beta(a, b) draw, as γ(a)/(γ(a)+γ(b)).
pub fn sample_beta<R: RngCore + ?Sized>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    Ok(sample_log_beta(a, b, rng)?.0.exp())
}

/// One realisation p ↦ log Δ_{n,p}, p = 1..=horizon.
///
/// `cumlog` holds the process as defined (Laguerre already divided by βn
/// per factor). The un-normalised sum of log factors is
/// `cumlog[p] + p·log_scale`, exposed by [`DetProcessPath::raw_cumlog`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetProcessPath {
    pub params: EnsembleParams,
    pub seed: u64,
    pub stream: u64,
    log_scale: f64,
    cumlog: Vec<f64>,
}

impl DetProcessPath {
    pub fn from_increments(
        params: EnsembleParams,
        seed: u64,
        stream: u64,
        log_scale: f64,
        increments: impl IntoIterator<Item = f64>,
    ) -> Self {
        let mut acc = 0.0;
        let cumlog = increments
            .into_iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        Self { params, seed, stream, log_scale, cumlog }
    }

    pub fn len(&self) -> usize {
        self.cumlog.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumlog.is_empty()
    }

    /// Values at p = 1..=len.
    pub fn cumlog(&self) -> &[f64] {
        &self.cumlog
    }

    /// log Δ_{n,p}; p = 0 gives 0.
    pub fn value(&self, p: usize) -> f64 {
        if p == 0 {
            0.0
        } else {
            self.cumlog[p - 1]
        }
    }

    /// log Δ_n(t) = log Δ_{n,⌊nt⌋}.
    pub fn value_at_time(&self, t: f64) -> f64 {
        self.value(self.params.index_at(t).min(self.len()))
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.cumlog
            .iter()
            .map(|&c| {
                let d = c - prev;
                prev = c;
                d
            })
            .collect()
    }

    /// Σ_{k≤p} log ρ_k without the per-factor normalisation.
    pub fn raw_cumlog(&self) -> Vec<f64> {
        self.cumlog
            .iter()
            .enumerate()
            .map(|(i, &c)| c + (i + 1) as f64 * self.log_scale)
            .collect()
    }

    /// t = p/n for p = 1..=len.
    pub fn times(&self) -> Vec<f64> {
        let n = self.params.n as f64;
        (1..=self.len()).map(|p| p as f64 / n).collect()
    }
}

/// log(βn), the per-factor Laguerre normalisation.
pub fn laguerre_log_scale(params: &EnsembleParams) -> f64 {
    (params.beta * params.n as f64).ln()
}

/// Raw log factors (log ρ_j) of one path, with the normalisation to apply.
fn raw_factors<R: RngCore + ?Sized>(params: &EnsembleParams, rng: &mut R) -> Result<(Vec<f64>, f64)> {
    let bp = params.beta_prime();
    let n = params.n;
    let mut out = Vec::with_capacity(params.horizon_index());
    let scale = match params.kind {
        EnsembleKind::Laguerre => {
            for j in 1..=n {
                out.push(sample_log_gamma(bp * (n - j + 1) as f64, 0.5, rng)?);
            }
            laguerre_log_scale(params)
        }
        EnsembleKind::Gram => {
            out.push(0.0);
            for j in 2..=n {
                out.push(sample_log_beta(bp * (n - j + 1) as f64, bp * (j - 1) as f64, rng)?.0);
            }
            0.0
        }
        EnsembleKind::Jacobi => {
            let (n1, n2) = (params.n1(), params.n2());
            for j in 1..=n1 {
                out.push(sample_log_beta(bp * (n1 - j + 1) as f64, bp * n2 as f64, rng)?.0);
            }
            0.0
        }
        EnsembleKind::AuxS => {
            let a = bp * n as f64;
            for _ in 0..n {
                out.push(sample_log_gamma(a, a, rng)?);
            }
            0.0
        }
    };
    Ok((out, scale))
}

/// Samples one path of the requested process.
pub fn sample_det_process(params: &EnsembleParams, rng: &mut RngStream) -> Result<DetProcessPath> {
    let params = params.validated()?;
    let (raw, scale) = raw_factors(&params, rng)?;
    Ok(DetProcessPath::from_increments(
        params,
        rng.seed(),
        rng.stream(),
        scale,
        raw.into_iter().map(|x| x - scale),
    ))
}

/// Laguerre path as log Δ^G + S, index by index.
pub fn couple_laguerre_from_gram(gram: &DetProcessPath, aux: &DetProcessPath) -> Result<DetProcessPath> {
    let (g, s) = (&gram.params, &aux.params);
    if g.kind != EnsembleKind::Gram || s.kind != EnsembleKind::AuxS {
        return Err(Error::Mismatch(format!(
            "expected (gram, aux) paths, got ({}, {})",
            g.kind.name(),
            s.kind.name()
        )));
    }
    if g.beta != s.beta || g.n != s.n || gram.len() != aux.len() {
        return Err(Error::Mismatch(format!(
            "gram (beta {}, n {}) and aux (beta {}, n {}) differ",
            g.beta, g.n, s.beta, s.n
        )));
    }
    let params = g.with_kind(EnsembleKind::Laguerre);
    let cumlog = gram.cumlog.iter().zip(&aux.cumlog).map(|(a, b)| a + b).collect();
    Ok(DetProcessPath {
        params,
        seed: gram.seed,
        stream: gram.stream,
        log_scale: laguerre_log_scale(&params),
        cumlog,
    })
}

/// Raw log draws of Gamma(β'n₂, 1/2), one per Jacobi index. Adding these
/// to the factors of a Laguerre path of size n₁ yields the first n₁
/// factors of a Laguerre path of size n₁ + n₂.
pub fn sample_laguerre_complement(target: &EnsembleParams, rng: &mut RngStream) -> Result<Vec<f64>> {
    let target = jacobi_target(target)?;
    let a = target.beta_prime() * target.n2() as f64;
    (0..target.n1()).map(|_| sample_log_gamma(a, 0.5, rng)).collect()
}

fn jacobi_target(target: &EnsembleParams) -> Result<EnsembleParams> {
    let t = target.validated()?;
    if t.kind != EnsembleKind::Jacobi {
        return Err(Error::Mismatch(format!("target must be jacobi, got {}", t.kind.name())));
    }
    Ok(t)
}

fn check_lag_n1(lag_n1: &DetProcessPath, target: &EnsembleParams, complement: &[f64]) -> Result<()> {
    let l = &lag_n1.params;
    if l.kind != EnsembleKind::Laguerre || l.n != target.n1() || l.beta != target.beta {
        return Err(Error::Mismatch(format!(
            "need a laguerre path with n = n1 = {} and beta = {}, got {} n = {} beta = {}",
            target.n1(),
            target.beta,
            l.kind.name(),
            l.n,
            l.beta
        )));
    }
    if complement.len() != target.n1() || lag_n1.len() != target.n1() {
        return Err(Error::Mismatch(format!(
            "complement has {} entries and path {}, expected n1 = {}",
            complement.len(),
            lag_n1.len(),
            target.n1()
        )));
    }
    Ok(())
}

/// First n₁ indices of the Laguerre path of size n₁ + n₂ obtained by
/// adding the complement draws to the factors of `lag_n1`.
pub fn merge_laguerre(lag_n1: &DetProcessPath, target: &EnsembleParams, complement: &[f64]) -> Result<DetProcessPath> {
    let target = jacobi_target(target)?;
    check_lag_n1(lag_n1, &target, complement)?;
    let params = EnsembleParams::laguerre(target.beta, target.n1() + target.n2())?;
    let scale = laguerre_log_scale(&params);
    let raw = raw_increments(lag_n1);
    Ok(DetProcessPath::from_increments(
        params,
        lag_n1.seed,
        lag_n1.stream,
        scale,
        raw.iter().zip(complement).map(|(&a, &c)| log_add_exp(a, c) - scale),
    ))
}

fn raw_increments(path: &DetProcessPath) -> Vec<f64> {
    path.increments().into_iter().map(|d| d + path.log_scale).collect()
}

/// Jacobi path from a Laguerre path of size n₁ and the complement draws:
/// log Δ^J_{n,r} = log Δ^L_{n₁,r} - log Δ^L_{n₁+n₂,r} + r log(n₁/(n₁+n₂)),
/// with each Jacobi factor ρ^L_{n₁} / (ρ^L_{n₁} + complement) a Beta draw.
pub fn couple_jacobi_from_laguerre(
    lag_n1: &DetProcessPath,
    target: &EnsembleParams,
    complement: &[f64],
) -> Result<DetProcessPath> {
    let target = jacobi_target(target)?;
    check_lag_n1(lag_n1, &target, complement)?;
    let raw = raw_increments(lag_n1);
    Ok(DetProcessPath::from_increments(
        target,
        lag_n1.seed,
        lag_n1.stream,
        0.0,
        raw.iter().zip(complement).map(|(&a, &c)| a - log_add_exp(a, c)),
    ))
}

/// The r×r lower-bidiagonal β-Laguerre model: diagonal
/// √Gamma(β'(n-i+1), 1/2) and subdiagonal B_{i,i-1} = √Gamma(β'(r-i+1), 1/2).
pub fn sample_bidiagonal_laguerre(
    n: usize,
    r: usize,
    beta: f64,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if r == 0 || r > n {
        return Err(domain!("sample_bidiagonal_laguerre: need 1 <= r <= n, got r = {r}, n = {n}"));
    }
    check_shape("sample_bidiagonal_laguerre beta", beta)?;
    let bp = 0.5 * beta;
    let mut diag = Vec::with_capacity(r);
    for i in 1..=r {
        diag.push((0.5 * sample_log_gamma(bp * (n - i + 1) as f64, 0.5, rng)?).exp());
    }
    let mut sub = Vec::with_capacity(r - 1);
    for i in 2..=r {
        sub.push((0.5 * sample_log_gamma(bp * (r - i + 1) as f64, 0.5, rng)?).exp());
    }
    Ok((diag, sub))
}

/// Tridiagonal B·Bᵀ for lower-bidiagonal B: diagonal b_i² + c_i², and
/// off-diagonal c_{i+1}·b_i.
pub fn bidiagonal_gram(diag: &[f64], sub: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let d = diag
        .iter()
        .enumerate()
        .map(|(i, b)| b * b + if i == 0 { 0.0 } else { sub[i - 1] * sub[i - 1] })
        .collect();
    let e = sub.iter().zip(diag).map(|(c, b)| c * b).collect();
    (d, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let p = EnsembleParams::gram(1.0, 50).unwrap();
        let a = sample_det_process(&p, &mut RngStream::new(7, 3)).unwrap();
        let b = sample_det_process(&p, &mut RngStream::new(7, 3)).unwrap();
        let c = sample_det_process(&p, &mut RngStream::new(7, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.cumlog(), c.cumlog());
    }

    #[test]
    fn tiny_shapes_stay_finite() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..1000 {
            let x = sample_log_gamma_unit(1e-3, &mut rng).unwrap();
            assert!(x.is_finite());
        }
        assert!(sample_gamma(0.0, 1.0, &mut rng).is_err());
        assert!(sample_beta(1.0, -1.0, &mut rng).is_err());
    }

    #[test]
    fn gram_first_increment_is_zero_and_path_nonpositive() {
        let p = EnsembleParams::gram(0.3, 40).unwrap();
        let path = sample_det_process(&p, &mut RngStream::new(11, 0)).unwrap();
        assert_eq!(path.value(1), 0.0);
        assert!(path.cumlog().iter().all(|&c| c <= 0.0));
    }

    #[test]
    fn coupled_laguerre_is_indexwise_sum() {
        let g = EnsembleParams::gram(1.0, 30).unwrap();
        let s = g.with_kind(EnsembleKind::AuxS);
        let pg = sample_det_process(&g, &mut RngStream::new(5, 0)).unwrap();
        let ps = sample_det_process(&s, &mut RngStream::new(5, 1)).unwrap();
        let l = couple_laguerre_from_gram(&pg, &ps).unwrap();
        for p in 1..=30 {
            assert_eq!(l.value(p), pg.value(p) + ps.value(p));
        }
        assert!(couple_laguerre_from_gram(&ps, &pg).is_err());
    }

    #[test]
    fn jacobi_identity_holds_pathwise() {
        let target = EnsembleParams::jacobi(1.0, 20, 1.0, 2.0).unwrap();
        let lag = EnsembleParams::laguerre(1.0, target.n1()).unwrap();
        let l1 = sample_det_process(&lag, &mut RngStream::new(9, 0)).unwrap();
        let comp = sample_laguerre_complement(&target, &mut RngStream::new(9, 1)).unwrap();
        let j = couple_jacobi_from_laguerre(&l1, &target, &comp).unwrap();
        let l12 = merge_laguerre(&l1, &target, &comp).unwrap();
        let (n1, n2) = (target.n1() as f64, target.n2() as f64);
        assert_eq!(j.value(0), 0.0);
        for r in 1..=target.n1() {
            let rhs = l1.value(r) - l12.value(r) + r as f64 * (n1 / (n1 + n2)).ln();
            assert!((j.value(r) - rhs).abs() < 1e-9, "r = {r}");
            assert!(j.value(r) <= 0.0);
        }
    }

    #[test]
    fn bidiagonal_determinant() {
        let (d, s) = sample_bidiagonal_laguerre(10, 6, 2.0, &mut RngStream::new(3, 0)).unwrap();
        assert_eq!((d.len(), s.len()), (6, 5));
        let (td, te) = bidiagonal_gram(&d, &s);
        // determinant of the tridiagonal by the continuant recurrence
        let (mut f0, mut f1) = (1.0, td[0]);
        for i in 1..td.len() {
            let f2 = td[i] * f1 - te[i - 1] * te[i - 1] * f0;
            f0 = f1;
            f1 = f2;
        }
        let want: f64 = d.iter().map(|b| 2.0 * b.ln()).sum();
        assert!((f1.ln() - want).abs() < 1e-10);
        assert!(sample_bidiagonal_laguerre(5, 6, 2.0, &mut RngStream::new(3, 0)).is_err());
    }
}
