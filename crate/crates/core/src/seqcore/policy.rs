use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub base: f64,
    pub count: usize,
}

/// Finite-truncation surrogate for limits at infinity.
///
/// `min_window` is the smallest log-scale window `h` entering the δ
/// estimators and `run_resolution` the shortest flat run of the log
/// profile that is kept as a plateau rather than bridged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub t_grid: GridSpec,
    pub h_grid: GridSpec,
    pub head_discard_fraction: f64,
    pub tolerance: f64,
    pub min_window: f64,
    pub run_resolution: f64,
    pub eccentricity_threshold: f64,
    pub decay_epsilon: f64,
    pub growth_threshold: f64,
    pub stability_band: f64,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            t_grid: GridSpec {
                base: 1.05,
                count: 200,
            },
            h_grid: GridSpec {
                base: 1.25,
                count: 40,
            },
            head_discard_fraction: 0.4,
            tolerance: 1e-3,
            min_window: 1.0,
            run_resolution: 2.5,
            eccentricity_threshold: 0.1,
            decay_epsilon: 1e-3,
            growth_threshold: 1.5,
            stability_band: 0.02,
        }
    }
}

impl WindowPolicy {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (name, g) in [("t_grid", self.t_grid), ("h_grid", self.h_grid)] {
            if !(g.base > 1.0) {
                problems.push(format!("{name}.base must exceed 1"));
            }
            if g.count == 0 {
                problems.push(format!("{name}.count must be positive"));
            }
        }
        if !(0.0..1.0).contains(&self.head_discard_fraction) {
            problems.push("head_discard_fraction must lie in [0,1)".into());
        }
        for (name, v) in [
            ("tolerance", self.tolerance),
            ("min_window", self.min_window),
            ("eccentricity_threshold", self.eccentricity_threshold),
            ("decay_epsilon", self.decay_epsilon),
            ("stability_band", self.stability_band),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                problems.push(format!("{name} must be positive"));
            }
        }
        if !(self.run_resolution >= 0.0) {
            problems.push("run_resolution must be nonnegative".into());
        }
        if !(self.growth_threshold > 1.0) {
            problems.push("growth_threshold must exceed 1".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }

    /// Geometric window lengths `min_window·base^k` not exceeding `span`.
    pub fn windows(&self, span: f64) -> Vec<f64> {
        (0..self.h_grid.count)
            .map(|k| self.min_window * self.h_grid.base.powi(k as i32))
            .take_while(|&h| h <= span)
            .collect()
    }

    /// Start of the asymptotic part of a log-scale range `[start, end]`.
    pub fn head(&self, start: f64, end: f64) -> f64 {
        start + self.head_discard_fraction * (end - start)
    }
}
