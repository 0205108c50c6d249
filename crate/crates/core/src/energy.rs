//! Output energy `∫₀^η ‖CT(t)x‖² dt` as an exact Hermitian quadratic form.
//!
//! For a diagonal system the energy of `x` is `x* G(η) x` with
//! `G(η)ₘₙ = c̄ₘ cₙ φ(λ̄ₘ + λₙ, η)` and `φ(z, η) = (e^{zη} − 1)/z`. The best
//! constant `K_η` is the square root of the largest eigenvalue of `G(η)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::hermitian::{extreme_eigenvalues, ExtremeEigen};
use crate::numerics::span_decades;
use crate::profile::DEFAULT_DECAY_RATIO;
use crate::system::DiagonalSystem;

/// Relative accuracy demanded of the extreme eigenvalues.
pub const EIGEN_REL_TOL: f64 = 1e-10;

const SERIES_CUTOFF: f64 = 1e-4;

/// `e^w − 1` without cancellation for small `|w|`.
pub fn exp_m1(w: Complex64) -> Complex64 {
    let (a, b) = (w.re, w.im);
    let half_sin = (0.5 * b).sin();
    Complex64::new(
        a.exp_m1() * b.cos() - 2.0 * half_sin * half_sin,
        a.exp() * b.sin(),
    )
}

/// `φ(z, η) = ∫₀^η e^{zt} dt` for `z ≠ 0`.
pub fn phi(z: Complex64, eta: f64) -> Complex64 {
    let w = z * eta;
    if w.norm() < SERIES_CUTOFF {
        eta * (1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0)
    } else {
        exp_m1(w) / z
    }
}

/// `∫₀^η e^{(λ̄ₘ+λₙ)t} dt`, switching to the exact value `η` when the exponent
/// vanishes relative to the eigenvalue scale.
pub fn energy_kernel(lambda_m: Complex64, lambda_n: Complex64, eta: f64) -> Complex64 {
    let z = lambda_m.conj() + lambda_n;
    if z.norm() < 1e-14 * (1.0 + lambda_m.norm() + lambda_n.norm()) {
        Complex64::new(eta, 0.0)
    } else {
        phi(z, eta)
    }
}

/// Gram matrix of the output map on `[0, η]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    matrix: DMatrix<Complex64>,
    horizon: f64,
}

impl HermitianForm {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `x* G x`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length must match the form");
        let mut acc = 0.0;
        for m in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for (k, xk) in x.iter().enumerate() {
                row += self.matrix[(m, k)] * xk;
            }
            acc += (x[m].conj() * row).re;
        }
        acc
    }

    pub fn extremes(&self) -> Result<ExtremeEigen> {
        extreme_eigenvalues(&self.matrix, EIGEN_REL_TOL)
    }

    /// Largest eigenvalue, the squared norm of the output map.
    pub fn largest_eigenvalue(&self) -> Result<f64> {
        Ok(self.extremes()?.largest)
    }

    /// Norm of the output map `x ↦ CT(·)x` into `L²(0, η)`.
    pub fn operator_norm(&self) -> Result<f64> {
        Ok(self.largest_eigenvalue()?.max(0.0).sqrt())
    }
}

pub fn gram_matrix(system: &DiagonalSystem, eta: f64) -> Result<HermitianForm> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(format!(
            "horizon must be positive, got {eta}"
        )));
    }
    let modes = system.modes();
    let n = modes.len();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for m in 0..n {
        let (lm, cm) = (modes[m].eigenvalue, modes[m].coefficient);
        for k in m..n {
            let (lk, ck) = (modes[k].eigenvalue, modes[k].coefficient);
            let entry = cm.conj() * ck * energy_kernel(lm, lk, eta);
            if k == m {
                matrix[(m, m)] = Complex64::new(entry.re, 0.0);
            } else {
                matrix[(m, k)] = entry;
                matrix[(k, m)] = entry.conj();
            }
        }
    }
    Ok(HermitianForm {
        matrix,
        horizon: eta,
    })
}

/// Best constant `K_η` in `∫₀^η ‖CT(t)x‖² dt ≤ K_η² ‖x‖²` for the system.
pub fn admissibility_constant(system: &DiagonalSystem, eta: f64) -> Result<f64> {
    gram_matrix(system, eta)?.operator_norm()
}

/// Closed-form energy of a single mode on `[0, η]`, i.e. `√G(η)ₙₙ`.
pub fn single_mode_constant(coefficient: Complex64, eigenvalue: Complex64, eta: f64) -> f64 {
    let a = eigenvalue.re;
    let base = if a == 0.0 {
        eta
    } else {
        -(2.0 * a * eta).exp_m1() / (-2.0 * a)
    };
    coefficient.norm() * base.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KVerdict {
    ZeroClassConsistent,
    BoundedAwayFromZero,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KSample {
    pub eta: f64,
    #[serde(rename = "K")]
    pub k: f64,
}

/// Sampled `η ↦ K_η` together with a heuristic zero-class verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KProfile {
    /// Samples in the order requested (decreasing η).
    pub samples: Vec<KSample>,
    pub verdict: KVerdict,
    /// `K(η_min) / K(η_max)`.
    pub ratio: f64,
    pub threshold: f64,
    pub heuristic: bool,
}

pub fn k_profile(system: &DiagonalSystem, etas: &[f64], threshold: f64) -> Result<KProfile> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::invalid(format!(
            "decay ratio threshold must lie in (0, 1), got {threshold}"
        )));
    }
    if etas.len() < 3 {
        return Err(Error::invalid("a K profile needs at least three horizons"));
    }
    if etas.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::invalid("horizons must be positive"));
    }
    if !etas.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::invalid("horizons must be strictly decreasing"));
    }
    if span_decades(etas) < 2.0 - 1e-12 {
        return Err(Error::invalid("horizons must span at least two decades"));
    }

    let ks = etas
        .par_iter()
        .map(|&eta| admissibility_constant(system, eta))
        .collect::<Result<Vec<f64>>>()?;
    let samples: Vec<KSample> = etas
        .iter()
        .zip(&ks)
        .map(|(&eta, &k)| KSample { eta, k })
        .collect();

    let k_first = ks[0];
    let k_last = *ks.last().unwrap();
    let ratio = if k_first > 0.0 { k_last / k_first } else { 0.0 };
    let nonincreasing = ks.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let verdict = if ratio < threshold && nonincreasing {
        KVerdict::ZeroClassConsistent
    } else if ratio > 1.0 - (1.0 - threshold) / 4.0 {
        KVerdict::BoundedAwayFromZero
    } else {
        KVerdict::Inconclusive
    };
    Ok(KProfile {
        samples,
        verdict,
        ratio,
        threshold,
        heuristic: true,
    })
}

pub fn default_k_profile(system: &DiagonalSystem, etas: &[f64]) -> Result<KProfile> {
    k_profile(system, etas, DEFAULT_DECAY_RATIO)
}
