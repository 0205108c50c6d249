//! Trend tests on sampled profiles.
//!
//! All zero-class style statements are limits; on a finite grid they are
//! judged by how much a profile drops over the last decades toward the
//! relevant end of the grid. These are heuristics and reported as such.

use serde::Serialize;

/// Which end of the abscissa the limit is taken toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Toward {
    Large,
    Small,
}

/// Default ratio below which a profile counts as decaying.
pub const DEFAULT_DECAY_RATIO: f64 = 0.5;

/// Decades over which the decay ratio is measured.
pub const RATIO_DECADES: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailTrend {
    /// Value at the extreme sample divided by the value at the reference.
    pub ratio: f64,
    /// Abscissa of the extreme sample.
    pub end: f64,
    /// Abscissa of the reference sample.
    pub reference: f64,
    /// Whether values are nonincreasing toward the end over the last decade.
    pub monotone: bool,
}

impl TailTrend {
    pub fn decaying(&self, threshold: f64) -> bool {
        self.ratio < threshold && self.monotone
    }

    pub fn growing(&self, threshold: f64) -> bool {
        self.ratio > 1.0 / threshold
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        // 0/0: an identically vanishing tail.
        0.0
    }
}

/// Measures the trend of `ys` over the last `decades` of `xs` toward `toward`.
/// `xs` must be positive; order does not matter.
pub fn tail_trend(xs: &[f64], ys: &[f64], toward: Toward, decades: f64) -> TailTrend {
    assert!(!xs.is_empty() && xs.len() == ys.len());
    let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if toward == Toward::Small {
        pairs.reverse();
    }
    // pairs now runs away from the limit end toward it.
    let (end_x, end_y) = *pairs.last().unwrap();
    let dist = |x: f64| (x / end_x).log10().abs();
    let (ref_x, ref_y) = pairs
        .iter()
        .copied()
        .min_by(|a, b| {
            (dist(a.0) - decades)
                .abs()
                .total_cmp(&(dist(b.0) - decades).abs())
        })
        .unwrap();
    let monotone = pairs
        .windows(2)
        .filter(|w| dist(w[0].0) <= 1.0 + 1e-9)
        .all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-12));
    TailTrend {
        ratio: ratio(end_y, ref_y),
        end: end_x,
        reference: ref_x,
        monotone,
    }
}

/// Whether `ys` is nonincreasing as `xs` moves toward `toward` over the whole grid.
pub fn monotone_toward(xs: &[f64], ys: &[f64], toward: Toward) -> bool {
    let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if toward == Toward::Small {
        pairs.reverse();
    }
    pairs.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-12))
}
