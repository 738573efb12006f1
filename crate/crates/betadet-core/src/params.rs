use crate::error::{invalid, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Which random-matrix model a process belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum EnsembleKind {
    Laguerre,
    Gram,
    Jacobi,
    /// The auxiliary process S with Gamma(β'n, β'n) factors that links Gram
    /// to Laguerre.
    #[cfg_attr(feature = "serde", serde(rename = "aux"))]
    AuxS,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Laguerre => "laguerre",
            Self::Gram => "gram",
            Self::Jacobi => "jacobi",
            Self::AuxS => "aux",
        }
    }
}

impl core::str::FromStr for EnsembleKind {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "laguerre" | "wishart" => Ok(Self::Laguerre),
            "gram" => Ok(Self::Gram),
            "jacobi" => Ok(Self::Jacobi),
            "aux" | "auxs" | "s" => Ok(Self::AuxS),
            other => Err(invalid!("unknown ensemble '{other}'")),
        }
    }
}

/// Ensemble, Dyson index β, base size n and (Jacobi only) the ratios τ₁, τ₂
/// giving n₁ = ⌊nτ₁⌋ and n₂ = ⌊nτ₂⌋.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleParams {
    pub kind: EnsembleKind,
    pub beta: f64,
    pub n: usize,
    pub tau1: f64,
    pub tau2: f64,
}

impl EnsembleParams {
    pub fn new(kind: EnsembleKind, beta: f64, n: usize) -> Result<Self> {
        Self { kind, beta, n, tau1: 1.0, tau2: 1.0 }.validated()
    }

    pub fn laguerre(beta: f64, n: usize) -> Result<Self> {
        Self::new(EnsembleKind::Laguerre, beta, n)
    }

    pub fn gram(beta: f64, n: usize) -> Result<Self> {
        Self::new(EnsembleKind::Gram, beta, n)
    }

    pub fn aux(beta: f64, n: usize) -> Result<Self> {
        Self::new(EnsembleKind::AuxS, beta, n)
    }

    pub fn jacobi(beta: f64, n: usize, tau1: f64, tau2: f64) -> Result<Self> {
        Self { kind: EnsembleKind::Jacobi, beta, n, tau1, tau2 }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(invalid!("beta must be positive and finite, got {}", self.beta));
        }
        if self.n == 0 {
            return Err(invalid!("n must be at least 1"));
        }
        if self.kind == EnsembleKind::Jacobi {
            if !(self.tau1 > 0.0 && self.tau2 > 0.0 && self.tau1.is_finite() && self.tau2.is_finite()) {
                return Err(invalid!("tau1, tau2 must be positive, got {}, {}", self.tau1, self.tau2));
            }
            if self.n1() == 0 || self.n2() == 0 {
                return Err(invalid!(
                    "n = {} too small for tau = ({}, {}): floor(n tau) must be >= 1",
                    self.n,
                    self.tau1,
                    self.tau2
                ));
            }
        }
        Ok(self)
    }

    /// β' = β/2.
    pub fn beta_prime(&self) -> f64 {
        0.5 * self.beta
    }

    pub fn n1(&self) -> usize {
        (self.n as f64 * self.tau1).floor() as usize
    }

    pub fn n2(&self) -> usize {
        (self.n as f64 * self.tau2).floor() as usize
    }

    /// Last index of the process: n₁ for Jacobi, n otherwise.
    pub fn horizon_index(&self) -> usize {
        match self.kind {
            EnsembleKind::Jacobi => self.n1(),
            _ => self.n,
        }
    }

    /// Right end of the time interval: τ₁ for Jacobi, 1 otherwise.
    pub fn time_horizon(&self) -> f64 {
        match self.kind {
            EnsembleKind::Jacobi => self.tau1,
            _ => 1.0,
        }
    }

    /// ⌊nt⌋, tolerant of representation error in products such as 100·0.29.
    pub fn index_at(&self, t: f64) -> usize {
        let x = self.n as f64 * t;
        (x + 1e-9 * x.abs().max(1.0)).floor().max(0.0) as usize
    }

    pub fn with_kind(mut self, kind: EnsembleKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_sizes_are_floors() {
        let p = EnsembleParams::jacobi(1.0, 200, 1.0, 2.0).unwrap();
        assert_eq!((p.n1(), p.n2(), p.horizon_index()), (200, 400, 200));
        assert_eq!(EnsembleParams::gram(1.0, 100).unwrap().index_at(0.29), 29);
        let q = EnsembleParams::jacobi(1.0, 10, 0.55, 0.39).unwrap();
        assert_eq!((q.n1(), q.n2()), (5, 3));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(EnsembleParams::gram(0.0, 10).is_err());
        assert!(EnsembleParams::gram(f64::NAN, 10).is_err());
        assert!(EnsembleParams::laguerre(1.0, 0).is_err());
        assert!(EnsembleParams::jacobi(1.0, 3, 0.2, 1.0).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("Gram".parse::<EnsembleKind>().unwrap(), EnsembleKind::Gram);
        assert_eq!("aux".parse::<EnsembleKind>().unwrap(), EnsembleKind::AuxS);
        assert!("wigner".parse::<EnsembleKind>().is_err());
    }
}
