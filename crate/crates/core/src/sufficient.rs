//! Sufficient conditions for zero-class admissibility: the log-factor
//! resolvent criterion, the fractional-power bound for analytic semigroups,
//! and the sector-region bound for normal semigroups.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::loglog_slope;
use crate::system::DiagonalSystem;
use crate::weiss::resolvent_norm;

/// A positive, monotonically increasing function on `(0, ∞)`.
#[derive(Clone)]
pub struct GrowthFunction {
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    monotone_increasing: bool,
    description: String,
}

impl fmt::Debug for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrowthFunction")
            .field("description", &self.description)
            .field("monotone_increasing", &self.monotone_increasing)
            .finish()
    }
}

impl GrowthFunction {
    /// Wraps `g`. Positivity is required; monotonicity is spot-checked on a
    /// geometric grid over `[1e-6, 1e12]` and recorded.
    pub fn new<F>(g: F, description: impl Into<String>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let ts: Vec<f64> = (0..=90)
            .map(|i| 10f64.powf(-6.0 + i as f64 * 0.2))
            .collect();
        let vals: Vec<f64> = ts.iter().map(|&t| g(t)).collect();
        if let Some(i) = vals.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!(
                "growth function must be positive, g({}) = {}",
                ts[i], vals[i]
            )));
        }
        let monotone_increasing = vals.windows(2).all(|w| w[1] >= w[0]);
        Ok(Self {
            evaluator: Arc::new(g),
            monotone_increasing,
            description: description.into(),
        })
    }

    /// `g(t) = (ln(2 + t))^p`.
    pub fn log_power(p: f64) -> Result<Self> {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(Error::invalid(format!(
                "log power must be nonnegative, got {p}"
            )));
        }
        Self::new(move |t| (2.0 + t).ln().powf(p), format!("(ln(2+t))^{p}"))
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(move |_| c, format!("{c}"))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.evaluator)(t)
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone_increasing
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Summability {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZwartSummability {
    pub verdict: Summability,
    /// `Σ_{n=0}^{N} g(baseⁿ)⁻²` over the terms evaluated.
    pub partial_sum: f64,
    pub terms_used: usize,
    /// Log-log slope of the terms against `n` over the last decade.
    pub tail_slope: f64,
    /// Power-law extrapolation of the remaining tail.
    pub tail_estimate: f64,
    pub heuristic: bool,
}

/// Slope margin around −1 separating summable from non-summable tails.
pub const SLOPE_MARGIN: f64 = 0.05;

/// One-sided summability test of `Σ_{n≥0} g(baseⁿ)⁻²`.
///
/// Exponents are capped where `baseⁿ` would overflow a double.
pub fn zwart_summability(
    g: &GrowthFunction,
    base: f64,
    n_max: usize,
    tail_tolerance: f64,
) -> Result<ZwartSummability> {
    if !(base > 1.0 && base.is_finite()) {
        return Err(Error::invalid(format!("base must exceed 1, got {base}")));
    }
    if n_max < 10 {
        return Err(Error::invalid("need at least ten terms to judge the tail"));
    }
    if !(tail_tolerance > 0.0) {
        return Err(Error::invalid("tail tolerance must be positive"));
    }
    if !g.is_monotone() {
        return Err(Error::invalid(format!(
            "growth function {} is not monotonically increasing",
            g.description()
        )));
    }
    let n_cap = (700.0 / base.ln()).floor() as usize;
    let n_eff = n_max.min(n_cap);
    let gs: Vec<f64> = (0..=n_eff).map(|n| g.eval(base.powi(n as i32))).collect();
    if gs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(format!(
            "growth function {} decreases along base^n",
            g.description()
        )));
    }
    let terms: Vec<f64> = gs.iter().map(|v| 1.0 / (v * v)).collect();
    let partial_sum: f64 = terms.iter().rev().sum();

    let start = (n_eff / 10).max(1);
    let ns: Vec<f64> = (start..=n_eff).map(|n| n as f64).collect();
    let tail = &terms[start..=n_eff];
    let last = *tail.last().unwrap();

    let (verdict, tail_slope, tail_estimate) = if last == 0.0 {
        (Summability::Converges, f64::NEG_INFINITY, 0.0)
    } else {
        let slope = loglog_slope(&ns, tail).unwrap_or(0.0);
        let est = if slope < -1.0 {
            last * n_eff as f64 / (-slope - 1.0)
        } else {
            f64::INFINITY
        };
        let verdict = if slope < -(1.0 + SLOPE_MARGIN) && est <= tail_tolerance * partial_sum {
            Summability::Converges
        } else if slope > -(1.0 - SLOPE_MARGIN) {
            Summability::Diverges
        } else {
            Summability::Inconclusive
        };
        (verdict, slope, est)
    };

    Ok(ZwartSummability {
        verdict,
        partial_sum,
        terms_used: n_eff + 1,
        tail_slope,
        tail_estimate,
        heuristic: true,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZwartBoundReport {
    /// `max W(s) g(Re s) √(Re s) / m` over the grid; `≤ 1` means the bound holds.
    pub worst_ratio: f64,
    pub worst_s_re: f64,
    pub worst_s_im: f64,
    /// Smallest `m` for which the bound holds on the grid.
    pub smallest_m: f64,
    pub holds: bool,
}

/// Evaluates `‖C(sI − A)⁻¹‖ ≤ m / (g(Re s) √Re s)` on a grid in the open
/// right half-plane.
pub fn check_zwart_bound(
    system: &DiagonalSystem,
    m: f64,
    g: &GrowthFunction,
    s_grid: &[Complex64],
) -> Result<ZwartBoundReport> {
    if !(m > 0.0) {
        return Err(Error::invalid(format!("m must be positive, got {m}")));
    }
    if s_grid.is_empty() {
        return Err(Error::invalid("empty s grid"));
    }
    let vals = s_grid
        .par_iter()
        .map(|&s| Ok(resolvent_norm(system, s)? * g.eval(s.re) * s.re.sqrt()))
        .collect::<Result<Vec<f64>>>()?;
    let (idx, worst) =
        vals.iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
            );
    Ok(ZwartBoundReport {
        worst_ratio: worst / m,
        worst_s_re: s_grid[idx].re,
        worst_s_im: s_grid[idx].im,
        smallest_m: worst,
        holds: worst <= m,
    })
}

/// Cartesian grid `{r + iω}`.
pub fn half_plane_grid(rs: &[f64], omegas: &[f64]) -> Vec<Complex64> {
    rs.iter()
        .flat_map(|&r| omegas.iter().map(move |&w| Complex64::new(r, w)))
        .collect()
}

/// `‖S‖ M √(η^{1−2α} / (1 − 2α))`, the bound on `K_η` for `C = S(−A)^α`
/// when `‖(−A)^α T(t)‖ ≤ M t^{−α}`.
pub fn analytic_alpha_bound(s_norm: f64, big_m: f64, alpha: f64, eta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, 1/2), got {alpha}"
        )));
    }
    if !(s_norm >= 0.0 && big_m > 0.0 && eta > 0.0) {
        return Err(Error::invalid("need ||S|| >= 0, M > 0 and eta > 0"));
    }
    let p = 1.0 - 2.0 * alpha;
    Ok(s_norm * big_m * (eta.powf(p) / p).sqrt())
}

/// `{v + iw : v ≥ 0, |w| ≤ a + b v^β}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorRegion {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
}

impl SectorRegion {
    pub fn new(a: f64, b: f64, beta: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0 && beta > 0.0) {
            return Err(Error::invalid(format!(
                "sector region needs a, b >= 0 and beta > 0, got ({a}, {b}, {beta})"
            )));
        }
        Ok(Self { a, b, beta })
    }

    /// Membership of `z`, closed at `v = 0`.
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= 0.0 && z.im.abs() <= self.a + self.b * z.re.powf(self.beta)
    }

    /// Upper end of the admissible exponent interval `(0, min(1/2, 1/(2β)))`.
    pub fn alpha_limit(&self) -> f64 {
        0.5f64.min(1.0 / (2.0 * self.beta))
    }
}

/// Whether every `−λₙ` lies in the region.
pub fn spectrum_in_region(system: &DiagonalSystem, region: &SectorRegion) -> bool {
    system.eigenvalues().all(|l| region.contains(-l))
}

/// `c₂ √(∫₀^η max(1, t^{−α}, t^{−αβ})² dt)` in closed form.
pub fn sector_bound(region: &SectorRegion, alpha: f64, eta: f64, c2: f64) -> Result<f64> {
    let limit = region.alpha_limit();
    if !(alpha > 0.0 && alpha < limit) {
        return Err(Error::invalid(format!(
            "alpha must lie in (0, {limit}), got {alpha}"
        )));
    }
    if !(eta > 0.0 && c2 > 0.0) {
        return Err(Error::invalid("need eta > 0 and c2 > 0"));
    }
    // Below t = 1 the steeper power dominates; above it the constant 1 does.
    let p = 2.0 * alpha * region.beta.max(1.0);
    let integral = if eta <= 1.0 {
        eta.powf(1.0 - p) / (1.0 - p)
    } else {
        1.0 / (1.0 - p) + (eta - 1.0)
    };
    Ok(c2 * integral.sqrt())
}
