//! Limiting spectral laws: Marčenko-Pastur, generalized McKay and the
//! Capitaine-Casalis mixture, with log-moments, logarithmic energy, the
//! σ±/a± coordinate maps and a symmetric tridiagonal eigensolver.

use crate::entropy::{entropy_j, xlogx};
use crate::error::{domain, invalid, Error, Result};
use crate::quad::{self, GaussLegendre};
use crate::stats;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
#[allow(unused_imports)]
use num_traits::Float;

/// McKay parameters closer than this to 0 or 1 are rejected.
pub const MCKAY_EDGE_GUARD: f64 = 1e-10;

const QUAD_TOL: f64 = 1e-13;
const EIGEN_MAX_ITER: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "law", rename_all = "lowercase"))]
pub enum SpectralDist {
    /// π^c_{σ²}: atom (1 - 1/c)₊ at 0, continuous part on σ²[a(c), b(c)].
    Mp { c: f64, sigma2: f64 },
    /// π_{a₋,a₊} on [a₋, a₊] ⊂ (0, 1).
    McKay { a_minus: f64, a_plus: f64 },
    /// CC_{u',v'} = (1-u')⁺δ₀ + (1-v')⁺δ₁ + rest·π_{a₋,a₊}.
    Cc { u_prime: f64, v_prime: f64 },
}

/// Atom structure of CC_{u',v'}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CcSituation {
    /// min(u', v') ≥ 1: no atom.
    I,
    /// u' < 1 ≤ v': atom at 0.
    II,
    /// v' < 1 ≤ u': atom at 1.
    III,
    /// max(u', v') < 1: atoms at 0 and 1.
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CcMoments {
    pub mean: f64,
    pub variance: f64,
    pub situation: CcSituation,
    pub mass_zero: f64,
    pub mass_one: f64,
    pub a_minus: f64,
    pub a_plus: f64,
}

/// σ±(b, c) = [1 + √(bc) ± √((1-b)(1-c))]/2, returned as (σ₋, σ₊).
pub fn coordinate_maps(b: f64, c: f64) -> Result<(f64, f64)> {
    check_unit_square("coordinate_maps", b, c)?;
    let (r, q) = ((b * c).sqrt(), ((1.0 - b) * (1.0 - c)).sqrt());
    Ok((0.5 * (1.0 + r - q), 0.5 * (1.0 + r + q)))
}

/// a±(x, y) = (√((1-x)(1-y)) ± √(xy))², returned as (a₋, a₊).
pub fn a_pm(x: f64, y: f64) -> Result<(f64, f64)> {
    check_unit_square("a_pm", x, y)?;
    let (p, q) = (((1.0 - x) * (1.0 - y)).sqrt(), (x * y).sqrt());
    Ok(((p - q) * (p - q), (p + q) * (p + q)))
}

fn check_unit_square(name: &str, x: f64, y: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0 {
        Ok(())
    } else {
        Err(domain!("{name}: arguments must lie in (0,1)², got ({x}, {y})"))
    }
}

/// MP edges a(c) = (1-√c)², b(c) = (1+√c)².
pub fn mp_edges(c: f64) -> (f64, f64) {
    let r = c.sqrt();
    ((1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r))
}

/// C_{a₋,a₊} from C⁻¹ = [1 - √(a₋a₊) - √((1-a₋)(1-a₊))]/2.
pub fn mckay_normalization(a_minus: f64, a_plus: f64) -> Result<f64> {
    check_mckay(a_minus, a_plus)?;
    Ok(mckay_c(a_minus, a_plus))
}

fn mckay_c(a_minus: f64, a_plus: f64) -> f64 {
    2.0 / (1.0 - (a_minus * a_plus).sqrt() - ((1.0 - a_minus) * (1.0 - a_plus)).sqrt())
}

fn check_mckay(a_minus: f64, a_plus: f64) -> Result<()> {
    if a_minus >= MCKAY_EDGE_GUARD && a_plus <= 1.0 - MCKAY_EDGE_GUARD && a_minus < a_plus {
        Ok(())
    } else {
        Err(invalid!("McKay parameters need 0 < a₋ < a₊ < 1 away from the edges, got ({a_minus}, {a_plus})"))
    }
}

impl SpectralDist {
    pub fn mp(c: f64, sigma2: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite() && sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(invalid!("MP needs c > 0 and σ² > 0, got ({c}, {sigma2})"));
        }
        Ok(Self::Mp { c, sigma2 })
    }

    pub fn mckay(a_minus: f64, a_plus: f64) -> Result<Self> {
        check_mckay(a_minus, a_plus)?;
        Ok(Self::McKay { a_minus, a_plus })
    }

    pub fn cc(u_prime: f64, v_prime: f64) -> Result<Self> {
        if !(u_prime > 0.0 && v_prime > 0.0 && u_prime + v_prime > 1.0) {
            return Err(invalid!("CC needs u', v' > 0 and u'+v' > 1, got ({u_prime}, {v_prime})"));
        }
        let d = Self::Cc { u_prime, v_prime };
        let (am, ap) = d.mckay_part();
        check_mckay(am, ap)?;
        Ok(d)
    }

    /// For CC, the parameters of the continuous McKay component; for the
    /// other laws the support of the continuous part.
    fn mckay_part(&self) -> (f64, f64) {
        match *self {
            Self::Cc { u_prime, v_prime } => {
                let s = u_prime + v_prime;
                // a_pm cannot fail here: both arguments lie in (0,1)
                a_pm(u_prime / s, 1.0 - 1.0 / s).unwrap_or((0.0, 1.0))
            }
            _ => self.support(),
        }
    }

    /// Support [lo, hi] of the continuous part.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Mp { c, sigma2 } => {
                let (a, b) = mp_edges(c);
                (sigma2 * a, sigma2 * b)
            }
            Self::McKay { a_minus, a_plus } => (a_minus, a_plus),
            Self::Cc { .. } => self.mckay_part(),
        }
    }

    /// Atoms as (location, mass), zero masses omitted.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        match *self {
            Self::Mp { c, .. } => {
                if c > 1.0 {
                    out.push((0.0, 1.0 - 1.0 / c));
                }
            }
            Self::McKay { .. } => {}
            Self::Cc { u_prime, v_prime } => {
                if u_prime < 1.0 {
                    out.push((0.0, 1.0 - u_prime));
                }
                if v_prime < 1.0 {
                    out.push((1.0, 1.0 - v_prime));
                }
            }
        }
        out
    }

    /// Total mass of the continuous part.
    pub fn continuous_mass(&self) -> f64 {
        1.0 - self.atoms().iter().map(|a| a.1).sum::<f64>()
    }

    /// Density of the continuous part (it integrates to `continuous_mass`).
    pub fn density(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if !(x > lo && x < hi) {
            return 0.0;
        }
        let root = ((x - lo) * (hi - x)).sqrt();
        match *self {
            Self::Mp { c, sigma2 } => root / (2.0 * PI * sigma2 * c * x),
            Self::McKay { a_minus, a_plus } => mckay_c(a_minus, a_plus) * root / (2.0 * PI * x * (1.0 - x)),
            Self::Cc { .. } => self.continuous_mass() * mckay_c(lo, hi) * root / (2.0 * PI * x * (1.0 - x)),
        }
    }

    /// ∫ f dμ_c over the continuous part, by the sine substitution.
    pub fn integrate_continuous<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let (lo, hi) = self.support();
        quad::integrate_sine(|x| f(x) * self.density(x), lo, hi, QUAD_TOL)
    }

    /// ∫ f dμ including atoms.
    pub fn expect<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let atoms: f64 = self.atoms().iter().map(|&(x, w)| w * f(x)).sum();
        atoms + self.integrate_continuous(f)
    }

    fn phi_of(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        ((x - m) / h).clamp(-1.0, 1.0).asin()
    }

    /// Sine-substituted continuous density on φ ∈ [-π/2, π/2].
    fn phi_integrand(&self, phi: f64) -> f64 {
        let (lo, hi) = self.support();
        let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        self.density((m + h * phi.sin()).clamp(lo, hi)) * h * phi.cos()
    }

    fn continuous_cdf_between(&self, phi_a: f64, phi_b: f64) -> f64 {
        if phi_b <= phi_a {
            return 0.0;
        }
        quad::integrate(|p| self.phi_integrand(p), phi_a, phi_b, 1e-15)
    }

    /// Right-continuous CDF F(x) = μ((-∞, x]).
    pub fn cdf(&self, x: f64) -> f64 {
        let atoms: f64 = self.atoms().iter().filter(|a| a.0 <= x).map(|a| a.1).sum();
        atoms + self.continuous_cdf(x)
    }

    /// Left limit F(x-) = μ((-∞, x)).
    pub fn cdf_left(&self, x: f64) -> f64 {
        let atoms: f64 = self.atoms().iter().filter(|a| a.0 < x).map(|a| a.1).sum();
        atoms + self.continuous_cdf(x)
    }

    fn continuous_cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            0.0
        } else if x >= hi {
            self.continuous_mass()
        } else {
            self.continuous_cdf_between(-FRAC_PI_2, self.phi_of(x))
        }
    }

    /// Continuous-part CDF at ascending points, accumulated panel by panel.
    fn continuous_cdf_sorted(&self, xs: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.support();
        let mut out = Vec::with_capacity(xs.len());
        let (mut phi_prev, mut acc) = (-FRAC_PI_2, 0.0);
        for &x in xs {
            if x <= lo {
                out.push(0.0);
            } else if x >= hi {
                out.push(self.continuous_mass());
            } else {
                let phi = self.phi_of(x);
                acc += self.continuous_cdf_between(phi_prev, phi);
                phi_prev = phi.max(phi_prev);
                out.push(acc);
            }
        }
        out
    }

    /// Tabulated inverse CDF on `k` φ-panels, for inverse-transform sampling.
    pub fn quantile_table(&self, k: usize) -> QuantileTable {
        let k = k.max(2);
        let (lo, hi) = self.support();
        let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let gl = GaussLegendre::new(8);
        let mut xs = Vec::with_capacity(k + 1);
        let mut ps = Vec::with_capacity(k + 1);
        let mass0: f64 = self.atoms().iter().filter(|a| a.0 <= lo).map(|a| a.1).sum();
        let mut acc = mass0;
        let mut phi_prev = -FRAC_PI_2;
        xs.push(lo);
        ps.push(acc);
        for i in 1..=k {
            let phi = -FRAC_PI_2 + PI * i as f64 / k as f64;
            acc += gl.integrate(phi_prev, phi, |p| self.phi_integrand(p));
            xs.push(m + h * phi.sin());
            ps.push(acc);
            phi_prev = phi;
        }
        QuantileTable { lo_atom: mass0, xs, ps, atoms: self.atoms() }
    }

    /// ∫ log x over the continuous part (−∞ contributions from an atom at 0
    /// are excluded).
    pub fn continuous_log_moment(&self) -> f64 {
        self.integrate_continuous(|x| x.ln())
    }
}

/// Piecewise-linear inverse CDF.
#[derive(Debug, Clone)]
pub struct QuantileTable {
    lo_atom: f64,
    xs: Vec<f64>,
    ps: Vec<f64>,
    atoms: Vec<(f64, f64)>,
}

impl QuantileTable {
    pub fn quantile(&self, p: f64) -> f64 {
        if p < self.lo_atom {
            return self.atoms.first().map_or(self.xs[0], |a| a.0);
        }
        let last = *self.ps.last().unwrap_or(&1.0);
        if p >= last {
            return match self.atoms.iter().find(|a| a.0 > self.xs[0]) {
                Some(a) => a.0,
                None => *self.xs.last().unwrap_or(&0.0),
            };
        }
        let i = self.ps.partition_point(|&q| q <= p).clamp(1, self.ps.len() - 1);
        let (p0, p1) = (self.ps[i - 1], self.ps[i]);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        if p1 <= p0 {
            x0
        } else {
            x0 + (x1 - x0) * (p - p0) / (p1 - p0)
        }
    }
}

/// T ∫ log x dπ₁^T = (T-1) log(1-T) - T = -J(1-T).
pub fn mp_log_moment(big_t: f64) -> Result<f64> {
    if !(big_t > 0.0 && big_t < 1.0) {
        return Err(domain!("mp_log_moment: T must lie in (0, 1), got {big_t}"));
    }
    Ok(-entropy_j(1.0 - big_t))
}

/// ∫ log x dπ_{a₋,a₊} in closed form through σ± = σ±(a₋, a₊).
pub fn mckay_log_moment(a_minus: f64, a_plus: f64) -> Result<f64> {
    check_mckay(a_minus, a_plus)?;
    let (sm, sp) = coordinate_maps(a_minus, a_plus)?;
    let s = sm + sp - 1.0;
    Ok((xlogx(sp) + xlogx(sm) - xlogx(s)) / (1.0 - sp))
}

/// Mean, variance, atom masses and situation of CC_{u',v'}.
pub fn cc_moments(u_prime: f64, v_prime: f64) -> Result<CcMoments> {
    if !(u_prime > 0.0 && v_prime > 0.0 && u_prime + v_prime > 1.0) {
        return Err(domain!("cc_moments needs u', v' > 0 and u'+v' > 1, got ({u_prime}, {v_prime})"));
    }
    let s = u_prime + v_prime;
    let situation = match (u_prime < 1.0, v_prime < 1.0) {
        (false, false) => CcSituation::I,
        (true, false) => CcSituation::II,
        (false, true) => CcSituation::III,
        (true, true) => CcSituation::IV,
    };
    let (a_minus, a_plus) = a_pm(u_prime / s, 1.0 - 1.0 / s)?;
    Ok(CcMoments {
        mean: u_prime / s,
        variance: u_prime * v_prime / (s * s * s),
        situation,
        mass_zero: (1.0 - u_prime).max(0.0),
        mass_one: (1.0 - v_prime).max(0.0),
        a_minus,
        a_plus,
    })
}

/// Σ(π₁^c) = -1 + (1/c + log c + (1/c - 1)² log(1-c))/2 for 0 < c ≤ 1.
pub fn log_energy_mp(c: f64) -> Result<f64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(domain!("log_energy_mp: c must lie in (0, 1], got {c}"));
    }
    let r = 1.0 / c - 1.0;
    let tail = if c == 1.0 { 0.0 } else { r * r * (-c).ln_1p() };
    Ok(-1.0 + 0.5 * (1.0 / c + c.ln() + tail))
}

/// Σ(π^c_{σ²}) = log σ² + Σ(π₁^c).
pub fn log_energy_mp_scaled(c: f64, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(domain!("log_energy_mp_scaled: σ² must be positive, got {sigma2}"));
    }
    Ok(sigma2.ln() + log_energy_mp(c)?)
}

/// Logarithmic potential U(x) = ∫ log|x - y| dμ_c(y) of the continuous part,
/// split at the singular point.
pub fn log_potential(dist: &SpectralDist, x: f64) -> f64 {
    let (lo, hi) = dist.support();
    let (m, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let g = |p: f64| {
        let y = (m + h * p.sin()).clamp(lo, hi);
        let d = (x - y).abs();
        if d == 0.0 {
            0.0
        } else {
            d.ln() * dist.density(y) * h * p.cos()
        }
    };
    if x <= lo || x >= hi {
        return quad::integrate(g, -FRAC_PI_2, FRAC_PI_2, 1e-14);
    }
    let p0 = dist.phi_of(x);
    quad::integrate(g, -FRAC_PI_2, p0, 1e-14) + quad::integrate(g, p0, FRAC_PI_2, 1e-14)
}

/// Σ(μ) = ∫∫ log|x - y| dμ dμ by nested quadrature of the log potential.
/// Laws with atoms have Σ = -∞ and are rejected.
pub fn log_energy_quadrature(dist: &SpectralDist) -> Result<f64> {
    if !dist.atoms().is_empty() {
        return Err(domain!("logarithmic energy of a law with atoms is -∞"));
    }
    Ok(dist.integrate_continuous(|x| log_potential(dist, x)))
}

/// Minimizer of -Σ(μ) - 2ζ₁∫log x dμ - 2ζ₂∫log(1-x) dμ on [0, 1] through
/// the [-1, 1] parametrization b± = θ₂² - θ₁² ± √Δ. The weight ζ₁ sits on
/// log(1-y) there, so the map back to [0, 1] is y ↦ (1-y)/2.
pub fn lemma_min_endpoints(zeta1: f64, zeta2: f64) -> Result<(f64, f64)> {
    if !(zeta1 > 0.0 && zeta2 > 0.0) {
        return Err(domain!("lemma_min_endpoints: ζ₁, ζ₂ must be positive, got ({zeta1}, {zeta2})"));
    }
    let s = 1.0 + zeta1 + zeta2;
    let (t1, t2) = (zeta1 / s, zeta2 / s);
    let delta = (1.0 - (t1 + t2) * (t1 + t2)) * (1.0 - (t1 - t2) * (t1 - t2));
    let (bm, bp) = (t2 * t2 - t1 * t1 - delta.sqrt(), t2 * t2 - t1 * t1 + delta.sqrt());
    Ok((0.5 * (1.0 - bp), 0.5 * (1.0 - bm)))
}

/// The same minimizer through a±(s₋, s₊).
pub fn lemma_min_via_a_pm(zeta1: f64, zeta2: f64) -> Result<(f64, f64)> {
    if !(zeta1 > 0.0 && zeta2 > 0.0) {
        return Err(domain!("lemma_min_via_a_pm: ζ₁, ζ₂ must be positive, got ({zeta1}, {zeta2})"));
    }
    let d = 2.0 * (1.0 + zeta1 + zeta2);
    a_pm((1.0 + 2.0 * zeta1) / d, (1.0 + 2.0 * zeta1 + 2.0 * zeta2) / d)
}

/// Eigenvalues of the symmetric tridiagonal matrix with the given diagonal
/// and off-diagonal, ascending. Implicit QL with Wilkinson shifts.
pub fn tridiag_eigenvalues(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if offdiag.len() + 1 != n {
        return Err(Error::Mismatch(alloc::format!(
            "tridiagonal: {} diagonal entries need {} off-diagonal entries, got {}",
            n,
            n - 1,
            offdiag.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > EIGEN_MAX_ITER {
                return Err(Error::NoConvergence(alloc::format!(
                    "tridiagonal QL: eigenvalue {l} not converged after {EIGEN_MAX_ITER} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and
/// `dist`, atoms included.
pub fn esd_vs_density(samples: &[f64], dist: &SpectralDist) -> Result<f64> {
    if samples.is_empty() {
        return Err(domain!("esd_vs_density: no samples"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let cont = dist.continuous_cdf_sorted(&xs);
    let atoms = dist.atoms();
    let atoms_upto = |x: f64, strict: bool| -> f64 {
        atoms.iter().filter(|a| if strict { a.0 < x } else { a.0 <= x }).map(|a| a.1).sum()
    };
    // the continuous part is atomless, so F(x-) and F(x) differ by atoms only
    let lookup = |x: f64| xs.partition_point(|&y| y < x);
    let cdf = |x: f64| atoms_upto(x, false) + cont[lookup(x).min(cont.len() - 1)];
    let cdf_left = |x: f64| atoms_upto(x, true) + cont[lookup(x).min(cont.len() - 1)];
    Ok(stats::ks_one_sample(&xs, cdf, cdf_left))
}

/// One row of a density table.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityRow {
    pub x: f64,
    pub pdf: f64,
    pub cdf: f64,
}

/// Density and CDF on a caller-supplied grid (any order).
pub fn density_table(dist: &SpectralDist, grid: &[f64]) -> Vec<DensityRow> {
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| grid[i].total_cmp(&grid[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| grid[i]).collect();
    let cont = dist.continuous_cdf_sorted(&sorted);
    let atoms = dist.atoms();
    let mut rows = alloc::vec![DensityRow { x: 0.0, pdf: 0.0, cdf: 0.0 }; grid.len()];
    for (k, &i) in order.iter().enumerate() {
        let x = grid[i];
        let a: f64 = atoms.iter().filter(|a| a.0 <= x).map(|a| a.1).sum();
        rows[i] = DensityRow { x, pdf: dist.density(x), cdf: a + cont[k] };
    }
    rows
}
