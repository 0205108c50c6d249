//! Resolvent norms and the Weiss-type profiles `r ↦ m_r` and `τ ↦ K_τ`.
//!
//! For a scalar-output diagonal system on an orthonormal eigenbasis,
//! `‖C(sI − A)⁻¹‖² = Σ |cₙ|² / |s − λₙ|²`. As a function of `ω = Im s` this is
//! a sum of Lorentzian bumps centred at the ordinates `Im λₙ`, so its supremum
//! over a vertical line is found by evaluating the centres and golden-section
//! refining each gap between neighbouring centres.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::energy::phi;
use crate::error::{Error, Result};
use crate::numerics::golden::{sup_over_line, LineSup};
use crate::numerics::GeometricGrid;
use crate::profile::{tail_trend, TailTrend, Toward, DEFAULT_DECAY_RATIO, RATIO_DECADES};
use crate::system::DiagonalSystem;

/// Relative bracket tolerance of the golden-section refinement.
pub const OMEGA_REL_TOL: f64 = 1e-8;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

/// `Σ |cₙ|² / |r + iω − λₙ|²`.
pub fn resolvent_norm_sq(system: &DiagonalSystem, r: f64, omega: f64) -> f64 {
    system
        .modes()
        .iter()
        .map(|m| {
            let dr = r - m.eigenvalue.re;
            let dw = omega - m.eigenvalue.im;
            m.weight() / (dr * dr + dw * dw)
        })
        .sum()
}

/// `‖C(sI − A)⁻¹‖` for `Re s > 0`.
pub fn resolvent_norm(system: &DiagonalSystem, s: Complex64) -> Result<f64> {
    if !(s.re > 0.0) {
        return Err(Error::invalid(format!(
            "resolvent bound is only defined for Re s > 0, got {s}"
        )));
    }
    Ok(resolvent_norm_sq(system, s.re, s.im).sqrt())
}

fn distance_to_gap(y: f64, a: f64, b: f64) -> f64 {
    if y < a {
        a - y
    } else if y > b {
        y - b
    } else {
        0.0
    }
}

/// `sup_ω ‖C((r + iω)I − A)⁻¹‖²` with the maximizing ordinate.
pub fn sup_resolvent_sq(system: &DiagonalSystem, r: f64) -> LineSup {
    let centres: Vec<f64> = system.eigenvalues().map(|l| l.im).collect();
    let modes = system.modes();
    let bound = |a: f64, b: f64| -> f64 {
        modes
            .iter()
            .map(|m| {
                let dr = r - m.eigenvalue.re;
                let d = distance_to_gap(m.eigenvalue.im, a, b);
                m.weight() / (dr * dr + d * d)
            })
            .sum()
    };
    sup_over_line(
        |w| resolvent_norm_sq(system, r, w),
        &centres,
        bound,
        OMEGA_REL_TOL,
    )
}

/// `m(r) = √r · sup_ω ‖C((r + iω)I − A)⁻¹‖`.
pub fn weiss_m(system: &DiagonalSystem, r: f64) -> Result<f64> {
    check_positive("r", r)?;
    Ok((r * sup_resolvent_sq(system, r).value).sqrt())
}

/// Default points per decade of the profile grids.
pub const DEFAULT_PER_DECADE: usize = 8;

/// Default `r` and `τ` grids for a system.
///
/// For truncations of infinite families the `r` grid stops a decade below
/// the spectral scale and the `τ` grid starts at its reciprocal, so that
/// the finite spectrum is not mistaken for asymptotics. Both span four
/// decades there; explicit systems get `r ∈ [1e-2, 1e6]`, `τ ∈ [1e-6, 1e2]`.
pub fn default_grids(system: &DiagonalSystem) -> (GeometricGrid, GeometricGrid) {
    let scale = system.spectral_scale();
    if system.is_truncation() && scale > 0.0 {
        let r_max = scale / 10.0;
        (
            GeometricGrid::new(r_max * 1e-4, r_max, DEFAULT_PER_DECADE).unwrap(),
            GeometricGrid::new(1.0 / r_max, 1e4 / r_max, DEFAULT_PER_DECADE).unwrap(),
        )
    } else {
        (
            GeometricGrid::new(1e-2, 1e6, DEFAULT_PER_DECADE).unwrap(),
            GeometricGrid::new(1e-6, 1e2, DEFAULT_PER_DECADE).unwrap(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MVerdict {
    #[serde(rename = "B1-consistent")]
    B1Consistent,
    #[serde(rename = "A1-only-consistent")]
    A1OnlyConsistent,
    #[serde(rename = "unbounded")]
    Unbounded,
}

impl MVerdict {
    /// Verdict for a trend measured toward large `r`.
    pub fn from_trend(trend: &TailTrend, threshold: f64) -> Self {
        if trend.decaying(threshold) {
            MVerdict::B1Consistent
        } else if trend.growing(threshold) {
            MVerdict::Unbounded
        } else {
            MVerdict::A1OnlyConsistent
        }
    }

    pub fn is_decaying(self) -> bool {
        self == MVerdict::B1Consistent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MSample {
    pub r: f64,
    pub m: f64,
    /// Ordinate at which the supremum was found.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupDiagnostics {
    pub max_candidates: usize,
    pub max_refined: usize,
    pub max_residual: f64,
}

impl SupDiagnostics {
    fn collect<'a>(sups: impl Iterator<Item = &'a LineSup>) -> Self {
        sups.fold(
            SupDiagnostics {
                max_candidates: 0,
                max_refined: 0,
                max_residual: 0.0,
            },
            |acc, s| SupDiagnostics {
                max_candidates: acc.max_candidates.max(s.candidates),
                max_refined: acc.max_refined.max(s.refined),
                max_residual: acc.max_residual.max(s.residual),
            },
        )
    }
}

/// Sampled `r ↦ m_r` with a heuristic verdict on its behaviour as `r → ∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MProfile {
    pub samples: Vec<MSample>,
    /// Largest sampled `m`, the grid estimate of the constant in the
    /// unmodified resolvent condition.
    pub uniform_bound: f64,
    pub verdict: MVerdict,
    pub trend: TailTrend,
    pub threshold: f64,
    pub heuristic: bool,
    pub diagnostics: SupDiagnostics,
}

pub(crate) fn validate_increasing(name: &str, xs: &[f64]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::invalid(format!("{name} grid is empty")));
    }
    for &x in xs {
        check_positive(name, x)?;
    }
    if !xs.windows(2).all(|w| w[1] > w[0]) {
        return Err(Error::invalid(format!(
            "{name} grid must be strictly increasing"
        )));
    }
    Ok(())
}

pub fn weiss_m_profile(system: &DiagonalSystem, rs: &[f64]) -> Result<MProfile> {
    weiss_m_profile_with(system, rs, DEFAULT_DECAY_RATIO)
}

pub fn weiss_m_profile_with(
    system: &DiagonalSystem,
    rs: &[f64],
    threshold: f64,
) -> Result<MProfile> {
    validate_increasing("r", rs)?;
    let sups: Vec<LineSup> = rs
        .par_iter()
        .map(|&r| sup_resolvent_sq(system, r))
        .collect();
    Ok(m_profile_from_sups(rs, &sups, threshold))
}

/// Builds an m-profile from per-`r` suprema of `‖C(sI − A)⁻¹‖²`.
pub(crate) fn m_profile_from_sups(rs: &[f64], sups: &[LineSup], threshold: f64) -> MProfile {
    let samples: Vec<MSample> = rs
        .iter()
        .zip(sups)
        .map(|(&r, s)| MSample {
            r,
            m: (r * s.value).sqrt(),
            omega: s.argmax,
        })
        .collect();
    let ms: Vec<f64> = samples.iter().map(|s| s.m).collect();
    let trend = tail_trend(rs, &ms, Toward::Large, RATIO_DECADES);
    let verdict = MVerdict::from_trend(&trend, threshold);
    MProfile {
        uniform_bound: ms.iter().copied().fold(0.0, f64::max),
        samples,
        verdict,
        trend,
        threshold,
        heuristic: true,
        diagnostics: SupDiagnostics::collect(sups.iter()),
    }
}

/// `(e^{zτ} − 1) / z` with the limit `τ` at `z = 0`.
pub(crate) fn window_kernel(lambda: Complex64, omega: f64, tau: f64) -> Complex64 {
    let z = lambda + Complex64::new(0.0, omega);
    if z.norm() < 1e-14 * (1.0 + lambda.norm() + omega.abs()) {
        Complex64::new(tau, 0.0)
    } else {
        phi(z, tau)
    }
}

/// `τ⁻¹ ‖∫₀^τ e^{iωt} CT(t) · dt‖²`, the squared windowed output norm.
pub fn b2_norm_sq(system: &DiagonalSystem, tau: f64, omega: f64) -> f64 {
    system
        .modes()
        .iter()
        .map(|m| m.weight() * window_kernel(m.eigenvalue, omega, tau).norm_sqr())
        .sum::<f64>()
        / tau
}

/// `sup_ω τ⁻¹ ‖∫₀^τ e^{iωt} CT(t) · dt‖²` with the maximizing ω.
pub fn sup_b2_sq(system: &DiagonalSystem, tau: f64) -> LineSup {
    // e^{iωt} e^{λt} resonates at ω = −Im λ.
    let centres: Vec<f64> = system.eigenvalues().map(|l| -l.im).collect();
    let modes = system.modes();
    let bound = |a: f64, b: f64| -> f64 {
        modes
            .iter()
            .map(|m| {
                let re = m.eigenvalue.re;
                let d = distance_to_gap(-m.eigenvalue.im, a, b);
                let z2 = re * re + d * d;
                let k2 = if z2 > 0.0 {
                    (tau * tau).min(4.0 / z2)
                } else {
                    tau * tau
                };
                m.weight() * k2
            })
            .sum::<f64>()
            / tau
    };
    sup_over_line(
        |w| b2_norm_sq(system, tau, w),
        &centres,
        bound,
        OMEGA_REL_TOL,
    )
}

/// Best constant `K_τ` of the windowed oscillatory output bound.
pub fn b2_constant(system: &DiagonalSystem, tau: f64) -> Result<f64> {
    check_positive("tau", tau)?;
    Ok(sup_b2_sq(system, tau).value.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TauVerdict {
    #[serde(rename = "B2-consistent")]
    B2Consistent,
    #[serde(rename = "A2-only-consistent")]
    A2OnlyConsistent,
    #[serde(rename = "unbounded")]
    Unbounded,
}

impl TauVerdict {
    /// Verdict for a trend measured toward small `τ`.
    pub fn from_trend(trend: &TailTrend, threshold: f64) -> Self {
        if trend.decaying(threshold) {
            TauVerdict::B2Consistent
        } else if trend.growing(threshold) {
            TauVerdict::Unbounded
        } else {
            TauVerdict::A2OnlyConsistent
        }
    }

    pub fn is_decaying(self) -> bool {
        self == TauVerdict::B2Consistent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauSample {
    pub tau: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub omega: f64,
}

/// Sampled `τ ↦ K_τ` with a heuristic verdict on its behaviour as `τ → 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauProfile {
    pub samples: Vec<TauSample>,
    pub uniform_bound: f64,
    pub verdict: TauVerdict,
    pub trend: TailTrend,
    pub threshold: f64,
    pub heuristic: bool,
    pub diagnostics: SupDiagnostics,
}

pub fn b2_profile(system: &DiagonalSystem, taus: &[f64]) -> Result<TauProfile> {
    b2_profile_with(system, taus, DEFAULT_DECAY_RATIO)
}

pub fn b2_profile_with(
    system: &DiagonalSystem,
    taus: &[f64],
    threshold: f64,
) -> Result<TauProfile> {
    validate_increasing("tau", taus)?;
    let sups: Vec<LineSup> = taus.par_iter().map(|&t| sup_b2_sq(system, t)).collect();
    Ok(tau_profile_from_sups(taus, &sups, threshold))
}

/// Builds a τ-profile from per-`τ` suprema of the squared windowed norm.
pub(crate) fn tau_profile_from_sups(taus: &[f64], sups: &[LineSup], threshold: f64) -> TauProfile {
    let samples: Vec<TauSample> = taus
        .iter()
        .zip(sups)
        .map(|(&tau, s)| TauSample {
            tau,
            k: s.value.sqrt(),
            omega: s.argmax,
        })
        .collect();
    let ks: Vec<f64> = samples.iter().map(|s| s.k).collect();
    let trend = tail_trend(taus, &ks, Toward::Small, RATIO_DECADES);
    let verdict = TauVerdict::from_trend(&trend, threshold);
    TauProfile {
        uniform_bound: ks.iter().copied().fold(0.0, f64::max),
        samples,
        verdict,
        trend,
        threshold,
        heuristic: true,
        diagnostics: SupDiagnostics::collect(sups.iter()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::golden::grid_max;
    use crate::system::{heat_system, wave_system};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn single() -> DiagonalSystem {
        DiagonalSystem::from_pairs(
            [(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0))],
            "single",
        )
        .unwrap()
    }

    #[test]
    fn single_mode_resolvent() {
        let w = resolvent_norm(&single(), Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(w, 0.5, max_relative = 1e-15);
        assert!(resolvent_norm(&single(), Complex64::new(0.0, 1.0)).is_err());
        assert!(resolvent_norm(&single(), Complex64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn heat_resolvent_matches_direct_sum() {
        let w = resolvent_norm(&heat_system(3).unwrap(), Complex64::new(1.0, 0.0)).unwrap();
        let p2 = PI * PI;
        let oracle = (2.0 / 1.0 + 2.0 / (1.0 + p2).powi(2) + 2.0 / (1.0 + 4.0 * p2).powi(2)).sqrt();
        assert_relative_eq!(w, oracle, max_relative = 1e-15);
    }

    #[test]
    fn measure_identity() {
        for sys in [heat_system(20).unwrap(), wave_system(7).unwrap()] {
            let mu = sys.to_point_measure();
            for s in [Complex64::new(0.3, 2.0), Complex64::new(5.0, -1.0)] {
                let w = resolvent_norm(&sys, s).unwrap();
                assert_relative_eq!(w * w, mu.resolvent_integral(s), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn single_mode_m_closed_form() {
        assert_relative_eq!(weiss_m(&single(), 1.0).unwrap(), 0.5, max_relative = 1e-14);
        let m100 = weiss_m(&single(), 100.0).unwrap();
        assert_relative_eq!(m100, 10.0 / 101.0, max_relative = 1e-14);
        assert_relative_eq!(m100, 0.0990, epsilon = 1e-4);
    }

    #[test]
    fn wave_sup_matches_dense_grid() {
        let sys = wave_system(16).unwrap();
        for r in [0.05, 1.0, 20.0] {
            let sup = sup_resolvent_sq(&sys, r);
            let (_, grid) = grid_max(|w| resolvent_norm_sq(&sys, r, w), -60.0, 60.0, 4096);
            assert!(
                sup.value >= grid * (1.0 - 1e-12),
                "r={r}: {} < {grid}",
                sup.value
            );
        }
    }

    #[test]
    fn single_mode_b2() {
        let k = b2_constant(&single(), 1.0).unwrap();
        assert_relative_eq!(k, 1.0 - (-1.0f64).exp(), max_relative = 1e-10);
        assert!(b2_constant(&single(), 0.0).is_err());
    }

    #[test]
    fn wave_degenerate_window() {
        let sys = wave_system(1).unwrap();
        let tau = 2.0;
        // At ω = −π the mode λ = iπ is resonant and contributes τ/√τ.
        let lambda = Complex64::new(0.0, PI);
        assert_eq!(window_kernel(lambda, -PI, tau), Complex64::new(tau, 0.0));
        let total = b2_norm_sq(&sys, tau, -PI).sqrt();
        // The other mode, λ = −iπ, sits a full period away and integrates to 0.
        assert_relative_eq!(total, 2f64.sqrt(), max_relative = 1e-12);
        assert!(b2_constant(&sys, tau).unwrap() >= total * (1.0 - 1e-12));
    }

    #[test]
    fn zero_system_profile() {
        let sys = DiagonalSystem::from_pairs(
            (1..5).map(|k| (Complex64::new(-(k as f64), 1.0), Complex64::new(0.0, 0.0))),
            "zero",
        )
        .unwrap();
        let p = b2_profile(&sys, &[1e-3, 1e-2, 1e-1, 1.0]).unwrap();
        assert!(p.samples.iter().all(|s| s.k == 0.0));
        assert_eq!(p.uniform_bound, 0.0);
    }

    #[test]
    fn grids_validated() {
        assert!(weiss_m_profile(&single(), &[]).is_err());
        assert!(weiss_m_profile(&single(), &[2.0, 1.0]).is_err());
        assert!(b2_profile(&single(), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn default_grids_respect_truncation() {
        let heat = heat_system(200).unwrap();
        let (r, t) = default_grids(&heat);
        assert!((r.max - heat.spectral_scale() / 10.0).abs() < 1e-9 * r.max);
        assert!((t.min * r.max - 1.0).abs() < 1e-12);
        let (r, _) = default_grids(&single());
        assert_eq!((r.min, r.max), (1e-2, 1e6));
    }
}
