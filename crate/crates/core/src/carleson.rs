//! Carleson box conditions for atomic measures on the closed right half-plane.
//!
//! `Q_{r,ω} = [0, r] × [ω − r/2, ω + r/2]` (closed). The box ratio
//! `h(r) = sup_ω μ(Q_{r,ω}) / r` is computed exactly: as a function of the
//! centre ω the box mass is piecewise constant and only changes when an edge
//! crosses an atom ordinate, so the supremum is attained by a window whose
//! lower or upper edge sits on an atom.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::span_decades;
use crate::profile::{tail_trend, TailTrend, Toward, DEFAULT_DECAY_RATIO, RATIO_DECADES};
use crate::system::PointMeasure;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlesonBox {
    pub r: f64,
    pub omega: f64,
}

impl CarlesonBox {
    pub fn new(r: f64, omega: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite() && omega.is_finite()) {
            return Err(Error::invalid(format!(
                "box needs r > 0 and finite centre, got r = {r}, omega = {omega}"
            )));
        }
        Ok(Self { r, omega })
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        let half = 0.5 * self.r;
        re >= 0.0 && re <= self.r && im >= self.omega - half && im <= self.omega + half
    }
}

/// `μ(Q)`, boundary atoms included.
pub fn box_mass(measure: &PointMeasure, q: &CarlesonBox) -> f64 {
    measure
        .atoms()
        .iter()
        .filter(|a| q.contains(a.location.re, a.location.im))
        .map(|a| a.mass)
        .sum()
}

/// Atoms with `Re ≤ r`, sorted by ordinate, with prefix sums of mass.
struct Column {
    ys: Vec<f64>,
    prefix: Vec<f64>,
}

impl Column {
    fn new(measure: &PointMeasure, r: f64) -> Self {
        let mut atoms: Vec<(f64, f64)> = measure
            .atoms()
            .iter()
            .filter(|a| a.location.re <= r)
            .map(|a| (a.location.im, a.mass))
            .collect();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut prefix = Vec::with_capacity(atoms.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &(_, m) in &atoms {
            acc += m;
            prefix.push(acc);
        }
        Self {
            ys: atoms.into_iter().map(|a| a.0).collect(),
            prefix,
        }
    }

    /// Mass with ordinate in the closed interval `[lo, hi]`.
    fn mass_in(&self, lo: f64, hi: f64) -> f64 {
        let i = self.ys.partition_point(|&y| y < lo);
        let j = self.ys.partition_point(|&y| y <= hi);
        if j > i {
            self.prefix[j] - self.prefix[i]
        } else {
            0.0
        }
    }

    /// Largest mass in a closed window of height `width` whose centre lies
    /// in `[c_lo, c_hi]`.
    fn sup_window(&self, width: f64, c_lo: f64, c_hi: f64) -> f64 {
        let half = 0.5 * width;
        let mut best: f64 = 0.0;
        for &y in &self.ys {
            // Window starting at the atom.
            let c = y + half;
            if c >= c_lo && c <= c_hi {
                best = best.max(self.mass_in(y, y + width));
            }
            // Window ending at the atom.
            let c = y - half;
            if c >= c_lo && c <= c_hi {
                best = best.max(self.mass_in(y - width, y));
            }
        }
        for c in [c_lo, c_hi] {
            if c.is_finite() {
                best = best.max(self.mass_in(c - half, c + half));
            }
        }
        best
    }
}

/// `h(r) = sup_ω μ(Q_{r,ω}) / r`.
pub fn sup_box_ratio(measure: &PointMeasure, r: f64) -> f64 {
    if !(r > 0.0) {
        return 0.0;
    }
    Column::new(measure, r).sup_window(r, f64::NEG_INFINITY, f64::INFINITY) / r
}

/// `sup { μ(Q_{r,ω}) / r : |ω| ≥ omega_min }`.
pub fn sup_box_ratio_far(measure: &PointMeasure, r: f64, omega_min: f64) -> f64 {
    let col = Column::new(measure, r);
    let up = col.sup_window(r, omega_min, f64::INFINITY);
    let down = col.sup_window(r, f64::NEG_INFINITY, -omega_min);
    up.max(down) / r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CarlesonClass {
    NotCarleson,
    Carleson,
    ZeroClassCarleson,
    VanishingCarleson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxSample {
    pub r: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassifyOptions {
    /// Size of the exhausting compact `[ε, 1/ε] × [−1/ε, 1/ε]` and the
    /// vanishing threshold.
    pub epsilon: f64,
    /// Sampled ratios above this count as unbounded.
    pub cap: f64,
    pub decay_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-2,
            cap: 1e6,
            decay_threshold: DEFAULT_DECAY_RATIO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxRatioProfile {
    pub samples: Vec<BoxSample>,
    pub small_box_samples: Vec<BoxSample>,
    pub classification: CarlesonClass,
    pub max_ratio: f64,
    pub trend: TailTrend,
    /// Largest ratio over probe boxes centred outside the exhausting compact.
    pub escape_ratio: f64,
    /// Largest atom modulus; a truncated measure is only representative
    /// below this scale.
    pub measure_extent: f64,
    pub options: ClassifyOptions,
    pub heuristic: bool,
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::invalid(format!(
            "{name} must contain positive sides"
        )));
    }
    if span_decades(grid) < 3.0 - 1e-12 {
        return Err(Error::invalid(format!(
            "{name} must span at least three decades"
        )));
    }
    Ok(())
}

pub fn classify(
    measure: &PointMeasure,
    r_grid: &[f64],
    small_box_grid: &[f64],
    options: ClassifyOptions,
) -> Result<BoxRatioProfile> {
    check_grid("r grid", r_grid)?;
    check_grid("small box grid", small_box_grid)?;
    let eps = options.epsilon;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!(
            "epsilon must lie in (0, 1), got {eps}"
        )));
    }

    let sample = |rs: &[f64]| -> Vec<BoxSample> {
        rs.par_iter()
            .map(|&r| BoxSample {
                r,
                h: sup_box_ratio(measure, r),
            })
            .collect()
    };
    let samples = sample(r_grid);
    let small_box_samples = sample(small_box_grid);

    let max_ratio = samples
        .iter()
        .chain(&small_box_samples)
        .map(|s| s.h)
        .fold(0.0, f64::max);
    let hs: Vec<f64> = samples.iter().map(|s| s.h).collect();
    let trend = tail_trend(r_grid, &hs, Toward::Large, RATIO_DECADES);

    // Boxes with centre (r/2, ω) outside [ε, 1/ε] × [−1/ε, 1/ε].
    let escape_ratio = samples
        .iter()
        .chain(&small_box_samples)
        .map(|s| {
            if s.r / 2.0 < eps || s.r / 2.0 > 1.0 / eps {
                s.h
            } else {
                sup_box_ratio_far(measure, s.r, 1.0 / eps)
            }
        })
        .fold(0.0, f64::max);

    let classification = if !(max_ratio <= options.cap) {
        CarlesonClass::NotCarleson
    } else if !trend.decaying(options.decay_threshold) {
        CarlesonClass::Carleson
    } else if escape_ratio >= eps {
        CarlesonClass::ZeroClassCarleson
    } else {
        CarlesonClass::VanishingCarleson
    };

    Ok(BoxRatioProfile {
        samples,
        small_box_samples,
        classification,
        max_ratio,
        trend,
        escape_ratio,
        measure_extent: measure.extent(),
        options,
        heuristic: true,
    })
}
