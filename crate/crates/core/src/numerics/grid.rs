use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logarithmically spaced samples `min ..= max` with a fixed density per decade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricGrid {
    pub min: f64,
    pub max: f64,
    pub per_decade: usize,
}

impl GeometricGrid {
    pub fn new(min: f64, max: f64, per_decade: usize) -> Result<Self> {
        if !(min > 0.0 && max.is_finite() && max >= min) {
            return Err(Error::invalid(format!(
                "grid bounds must satisfy 0 < min <= max, got {min}, {max}"
            )));
        }
        if per_decade == 0 {
            return Err(Error::invalid("grid needs at least one point per decade"));
        }
        Ok(Self {
            min,
            max,
            per_decade,
        })
    }

    /// Parses `"min,max,points_per_decade"`; bounds accept scientific notation.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!(
                "grid '{text}' must be min,max,points_per_decade"
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::invalid(format!("'{s}' is not a number")))
        };
        let ppd = parts[2]
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("'{}' is not a point count", parts[2])))?;
        Self::new(num(parts[0])?, num(parts[1])?, ppd)
    }

    pub fn decades(&self) -> f64 {
        (self.max / self.min).log10()
    }

    pub fn points(&self) -> Vec<f64> {
        if self.max == self.min {
            return vec![self.min];
        }
        let count = (self.decades() * self.per_decade as f64).ceil().max(1.0) as usize;
        let (lmin, lmax) = (self.min.log10(), self.max.log10());
        (0..=count)
            .map(|i| {
                if i == 0 {
                    self.min
                } else if i == count {
                    self.max
                } else {
                    10f64.powf(lmin + (lmax - lmin) * i as f64 / count as f64)
                }
            })
            .collect()
    }
}

/// Number of decades spanned by positive samples.
pub fn span_decades(values: &[f64]) -> f64 {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(0.0, f64::max);
    if lo > 0.0 && hi > 0.0 {
        (hi / lo).log10()
    } else {
        0.0
    }
}
