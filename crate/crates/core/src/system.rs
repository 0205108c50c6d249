//! Diagonal semigroup observation systems.
//!
//! A system is a finite list of eigenpairs `(λₙ, cₙ)` of a generator acting
//! diagonally on an orthonormal eigenbasis, with `cₙ = Cφₙ` the scalar
//! observation of the n-th eigenvector. Infinite eigenfamilies are carried as
//! explicit truncations together with a note describing what was truncated.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One eigenpair of a diagonal generator together with its observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralMode {
    pub eigenvalue: Complex64,
    pub coefficient: Complex64,
}

impl SpectralMode {
    pub fn new(eigenvalue: Complex64, coefficient: Complex64) -> Result<Self> {
        if !(eigenvalue.re.is_finite() && eigenvalue.im.is_finite()) {
            return Err(Error::invalid("eigenvalue must be finite"));
        }
        if eigenvalue.re > 0.0 {
            return Err(Error::invalid(format!(
                "eigenvalue {eigenvalue} has positive real part"
            )));
        }
        if !(coefficient.re.is_finite() && coefficient.im.is_finite()) {
            return Err(Error::invalid("observation coefficient must be finite"));
        }
        Ok(Self {
            eigenvalue,
            coefficient,
        })
    }

    /// `|cₙ|²`, the mass this mode contributes to the induced measure.
    pub fn weight(&self) -> f64 {
        self.coefficient.norm_sqr()
    }
}

/// A finite diagonal observation system. Mode order is the canonical index
/// order and is preserved by every operation.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSystem {
    modes: Vec<SpectralMode>,
    label: String,
    truncation_note: Option<String>,
}

impl DiagonalSystem {
    pub fn new(modes: Vec<SpectralMode>, label: impl Into<String>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::invalid("a system needs at least one mode"));
        }
        Ok(Self {
            modes,
            label: label.into(),
            truncation_note: None,
        })
    }

    /// Builds a system from raw `(λ, c)` pairs, validating each one.
    pub fn from_pairs(
        pairs: impl IntoIterator<Item = (Complex64, Complex64)>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let modes = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (l, c))| {
                SpectralMode::new(l, c).map_err(|e| match e {
                    Error::InvalidArgument(msg) => Error::invalid(format!("mode {i}: {msg}")),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(modes, label)
    }

    /// Realizes a point measure as a system with `λ = −location`, `c = √mass`.
    pub fn from_measure(measure: &PointMeasure, label: impl Into<String>) -> Result<Self> {
        Self::from_pairs(
            measure
                .atoms()
                .iter()
                .map(|a| (-a.location, Complex64::new(a.mass.sqrt(), 0.0))),
            label,
        )
    }

    pub fn with_truncation_note(mut self, note: impl Into<String>) -> Self {
        self.truncation_note = Some(note.into());
        self
    }

    pub fn modes(&self) -> &[SpectralMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn truncation_note(&self) -> Option<&str> {
        self.truncation_note.as_deref()
    }

    /// Whether this system is a finite cut of an infinite eigenfamily.
    pub fn is_truncation(&self) -> bool {
        self.truncation_note.is_some()
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.modes.iter().map(|m| m.eigenvalue)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.modes.iter().map(|m| m.coefficient)
    }

    /// Largest eigenvalue modulus. Beyond this frequency scale a truncated
    /// family no longer resembles the infinite one.
    pub fn spectral_scale(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m.eigenvalue.norm())
            .fold(0.0, f64::max)
    }

    /// `Σ|cₙ|²`.
    pub fn total_weight(&self) -> f64 {
        self.modes.iter().map(SpectralMode::weight).sum()
    }

    pub fn to_point_measure(&self) -> PointMeasure {
        let atoms = self
            .modes
            .iter()
            .filter(|m| m.weight() > 0.0)
            .map(|m| Atom {
                location: -m.eigenvalue,
                mass: m.weight(),
            })
            .collect();
        PointMeasure { atoms }
    }
}

/// Neumann heat equation on `[0, 1]` observed at `ξ = 0`:
/// `λₙ = −π²n²`, `cₙ = √2`, `n = 0, 1, …, num_modes − 1`.
pub fn heat_system(num_modes: usize) -> Result<DiagonalSystem> {
    if num_modes == 0 {
        return Err(Error::invalid("heat system needs num_modes >= 1"));
    }
    let c = Complex64::new(2f64.sqrt(), 0.0);
    let modes = (0..num_modes)
        .map(|n| {
            let n2 = (n * n) as f64;
            SpectralMode {
                eigenvalue: Complex64::new(-(PI * PI * n2), 0.0),
                coefficient: c,
            }
        })
        .collect();
    Ok(DiagonalSystem {
        modes,
        label: format!("heat({num_modes})"),
        truncation_note: Some(format!(
            "Neumann heat eigenfamily n = 0..{}, lambda_n = -pi^2 n^2",
            num_modes - 1
        )),
    })
}

/// Observation of the n-th normalized wave eigenvector
/// `φₙ = λₙ⁻¹ (sin(nπx), λₙ sin(nπx))` through `w ↦ w₁'(0)`.
fn wave_coefficient(n: i64) -> Complex64 {
    let lambda = Complex64::new(0.0, n as f64 * PI);
    // d/dx [sin(nπx)] at 0 is nπ.
    Complex64::new(n as f64 * PI, 0.0) / lambda
}

/// Dirichlet wave equation on `[0, 1]` with Neumann observation at `ξ = 0`:
/// `λₙ = inπ` for `n ∈ {−N, …, −1, 1, …, N}`, ordered by `n`.
pub fn wave_system(num_modes: usize) -> Result<DiagonalSystem> {
    if num_modes == 0 {
        return Err(Error::invalid("wave system needs num_modes >= 1"));
    }
    let big_n = num_modes as i64;
    let modes = (-big_n..=big_n)
        .filter(|&n| n != 0)
        .map(|n| SpectralMode {
            eigenvalue: Complex64::new(0.0, n as f64 * PI),
            coefficient: wave_coefficient(n),
        })
        .collect();
    Ok(DiagonalSystem {
        modes,
        label: format!("wave({num_modes})"),
        truncation_note: Some(format!(
            "Dirichlet wave eigenfamily n = +-1..+-{num_modes}, lambda_n = i n pi"
        )),
    })
}

/// Blocks of a weighted orthogonal sum. Block `k` enters with its
/// coefficients multiplied by `weights[k] * scalings[k]`.
#[derive(Debug, Clone)]
pub struct DirectSumSpec {
    pub blocks: Vec<DiagonalSystem>,
    pub weights: Vec<f64>,
    pub scalings: Vec<f64>,
}

/// Slack allowed on `Σ weights ≤ 1` for weights produced by renormalization.
const WEIGHT_SUM_SLACK: f64 = 1e-12;

pub fn direct_sum(spec: &DirectSumSpec) -> Result<DiagonalSystem> {
    if spec.blocks.len() != spec.weights.len() || spec.blocks.len() != spec.scalings.len() {
        return Err(Error::invalid(format!(
            "direct sum lists differ in length: {} blocks, {} weights, {} scalings",
            spec.blocks.len(),
            spec.weights.len(),
            spec.scalings.len()
        )));
    }
    if spec.blocks.is_empty() {
        return Err(Error::invalid("direct sum needs at least one block"));
    }
    if let Some(w) = spec.weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::invalid(format!(
            "weight {w} is not a nonnegative number"
        )));
    }
    if let Some(s) = spec.scalings.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::invalid(format!(
            "scaling {s} is not a positive number"
        )));
    }
    let total: f64 = spec.weights.iter().sum();
    if total > 1.0 + WEIGHT_SUM_SLACK {
        return Err(Error::invalid(format!("weights sum to {total} > 1")));
    }

    let mut modes = Vec::with_capacity(spec.blocks.iter().map(DiagonalSystem::len).sum());
    for ((block, w), s) in spec.blocks.iter().zip(&spec.weights).zip(&spec.scalings) {
        let factor = w * s;
        modes.extend(block.modes.iter().map(|m| SpectralMode {
            eigenvalue: m.eigenvalue,
            coefficient: m.coefficient * factor,
        }));
    }
    let label = spec
        .blocks
        .iter()
        .map(DiagonalSystem::label)
        .collect::<Vec<_>>()
        .join(" (+) ");
    let mut out = DiagonalSystem::new(modes, label)?;
    if spec.blocks.iter().any(DiagonalSystem::is_truncation) {
        out.truncation_note = Some("direct sum containing truncated blocks".to_string());
    }
    Ok(out)
}

/// An atom `mass · δ_location` in the closed right half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: Complex64,
    pub mass: f64,
}

/// Finite atomic measure `Σ massᵢ δ_{locationᵢ}` on the closed right half-plane.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointMeasure {
    atoms: Vec<Atom>,
}

impl PointMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::invalid(format!(
                    "atom {i}: mass {} must be positive",
                    a.mass
                )));
            }
            if !(a.location.re.is_finite() && a.location.im.is_finite()) || a.location.re < 0.0 {
                return Err(Error::invalid(format!(
                    "atom {i}: location {} is not in the closed right half-plane",
                    a.location
                )));
            }
        }
        Ok(Self { atoms })
    }

    /// Unit masses at `1, 2, …, n` on the real axis.
    pub fn integer_deltas(n: usize) -> Self {
        Self {
            atoms: (1..=n)
                .map(|k| Atom {
                    location: Complex64::new(k as f64, 0.0),
                    mass: 1.0,
                })
                .collect(),
        }
    }

    /// Masses `k⁻²` at `1/k`, `k = 1..=n`.
    pub fn inverse_square_deltas(n: usize) -> Self {
        Self {
            atoms: (1..=n)
                .map(|k| {
                    let k = k as f64;
                    Atom {
                        location: Complex64::new(1.0 / k, 0.0),
                        mass: 1.0 / (k * k),
                    }
                })
                .collect(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Largest atom modulus (0 for the empty measure).
    pub fn extent(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.location.norm())
            .fold(0.0, f64::max)
    }

    /// Shifts every atom vertically by `offset`.
    pub fn translated(&self, offset: f64) -> Self {
        Self {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: a.location + Complex64::new(0.0, offset),
                    mass: a.mass,
                })
                .collect(),
        }
    }

    /// `∫ dμ(λ) / |s + λ|²`.
    pub fn resolvent_integral(&self, s: Complex64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.mass / (s + a.location).norm_sqr())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn heat_single_mode() {
        let s = heat_system(1).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.modes()[0].eigenvalue, c(0.0, 0.0));
        assert_eq!(s.modes()[0].coefficient, c(2f64.sqrt(), 0.0));
    }

    #[test]
    fn heat_eigenvalues_bit_exact() {
        let s = heat_system(3).unwrap();
        let ev: Vec<f64> = s.eigenvalues().map(|l| l.re).collect();
        assert_eq!(ev, vec![-0.0, -(PI * PI), -(PI * PI * 4.0)]);
        for (n, m) in heat_system(50).unwrap().modes().iter().enumerate() {
            assert_eq!(m.eigenvalue.re, -(PI * PI * (n * n) as f64));
            assert_eq!(m.eigenvalue.im, 0.0);
        }
    }

    #[test]
    fn empty_builtins_rejected() {
        assert!(matches!(heat_system(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(wave_system(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn wave_coefficients_match_finite_difference_derivative() {
        // Observation is the derivative of the first component sin(nπx)/λₙ at 0.
        let h = 1e-6;
        for n in [-3i64, -1, 1, 2, 7] {
            let lambda = c(0.0, n as f64 * PI);
            let f = |x: f64| Complex64::new((n as f64 * PI * x).sin(), 0.0) / lambda;
            let fd = (f(h) - f(-h)) / (2.0 * h);
            let exact = wave_coefficient(n);
            assert!((fd - exact).norm() < 1e-8, "n={n}: {fd} vs {exact}");
            assert_relative_eq!(exact.norm(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn wave_modes() {
        let w1 = wave_system(1).unwrap();
        assert_eq!(w1.len(), 2);
        assert_eq!(w1.modes()[0].eigenvalue, c(0.0, -PI));
        assert_eq!(w1.modes()[1].eigenvalue, c(0.0, PI));
        let w2 = wave_system(2).unwrap();
        assert_eq!(w2.len(), 4);
        for m in w2.modes() {
            assert_eq!(m.eigenvalue.re, 0.0);
            assert_relative_eq!(m.coefficient.norm(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn direct_sum_identity_and_scaling() {
        let one = DiagonalSystem::from_pairs([(c(-1.0, 0.0), c(1.0, 0.0))], "one").unwrap();
        let same = direct_sum(&DirectSumSpec {
            blocks: vec![one.clone()],
            weights: vec![1.0],
            scalings: vec![1.0],
        })
        .unwrap();
        assert_eq!(same.modes(), one.modes());

        let halves = direct_sum(&DirectSumSpec {
            blocks: vec![one.clone(), one.clone()],
            weights: vec![0.5, 0.5],
            scalings: vec![1.0, 1.0],
        })
        .unwrap();
        assert_eq!(halves.len(), 2);
        for m in halves.modes() {
            assert_eq!(m.coefficient, c(0.5, 0.0));
            assert_eq!(m.eigenvalue, c(-1.0, 0.0));
        }
    }

    #[test]
    fn direct_sum_rejects_bad_specs() {
        let one = DiagonalSystem::from_pairs([(c(-1.0, 0.0), c(1.0, 0.0))], "one").unwrap();
        let bad_len = DirectSumSpec {
            blocks: vec![one.clone()],
            weights: vec![0.5, 0.5],
            scalings: vec![1.0],
        };
        assert!(matches!(
            direct_sum(&bad_len),
            Err(Error::InvalidArgument(_))
        ));
        let too_heavy = DirectSumSpec {
            blocks: vec![one.clone(), one.clone()],
            weights: vec![0.7, 0.7],
            scalings: vec![1.0, 1.0],
        };
        assert!(direct_sum(&too_heavy).is_err());
        let zero_scale = DirectSumSpec {
            blocks: vec![one],
            weights: vec![1.0],
            scalings: vec![0.0],
        };
        assert!(direct_sum(&zero_scale).is_err());
    }

    #[test]
    fn heat_measure() {
        let mu = heat_system(3).unwrap().to_point_measure();
        let locs: Vec<f64> = mu.atoms().iter().map(|a| a.location.re).collect();
        assert_eq!(locs, vec![0.0, PI * PI, 4.0 * PI * PI]);
        for a in mu.atoms() {
            assert_relative_eq!(a.mass, 2.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn wave_measure_on_imaginary_axis() {
        let mu = wave_system(2).unwrap().to_point_measure();
        let ims: Vec<f64> = mu.atoms().iter().map(|a| a.location.im).collect();
        assert_eq!(ims, vec![2.0 * PI, PI, -PI, -2.0 * PI]);
        for a in mu.atoms() {
            assert_eq!(a.location.re, 0.0);
            assert_relative_eq!(a.mass, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn zero_coefficients_drop_out_of_measure() {
        let s = DiagonalSystem::from_pairs(
            [(c(-1.0, 0.0), c(0.0, 0.0)), (c(-2.0, 1.0), c(0.0, 0.0))],
            "zero",
        )
        .unwrap();
        assert!(s.to_point_measure().is_empty());
    }

    #[test]
    fn unstable_modes_rejected_with_index() {
        let err = DiagonalSystem::from_pairs(
            [(c(-1.0, 0.0), c(1.0, 0.0)), (c(0.5, 0.0), c(1.0, 0.0))],
            "bad",
        )
        .unwrap_err();
        assert!(err.to_string().contains("mode 1"), "{err}");
    }

    #[test]
    fn measure_round_trips_through_system() {
        let mu = PointMeasure::inverse_square_deltas(5);
        let sys = DiagonalSystem::from_measure(&mu, "mu").unwrap();
        let back = sys.to_point_measure();
        for (a, b) in mu.atoms().iter().zip(back.atoms()) {
            assert_relative_eq!(a.mass, b.mass, max_relative = 1e-15);
            assert_eq!(a.location, b.location);
        }
    }
}
