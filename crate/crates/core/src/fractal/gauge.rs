use serde::Serialize;

use crate::error::{Error, Result};

/// A gauge `h` with `h(0) = 0`, increasing near zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GaugeFunction {
    /// `h(t) = t^d`.
    Power { d: f64 },
    /// `h(t) = t^d · log(1/t)^γ` for `t < 1`.
    PowerLog { d: f64, gamma: f64 },
    /// Monotone table of `(t, h(t))`, interpolated in log-log scale.
    Tabulated { points: Vec<(f64, f64)> },
}

impl GaugeFunction {
    pub fn power(d: f64) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Invalid(format!(
                "gauge exponent must be positive, got {d}"
            )));
        }
        Ok(GaugeFunction::Power { d })
    }

    pub fn tabulated(mut points: Vec<(f64, f64)>) -> Result<Self> {
        points.sort_by(|x, y| x.0.total_cmp(&y.0));
        if points.len() < 2 || points.iter().any(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
            return Err(Error::Invalid(
                "a tabulated gauge needs at least two positive points".into(),
            ));
        }
        if points
            .windows(2)
            .any(|w| !(w[1].0 > w[0].0 && w[1].1 > w[0].1))
        {
            return Err(Error::Invalid(
                "a tabulated gauge must be strictly increasing".into(),
            ));
        }
        Ok(GaugeFunction::Tabulated { points })
    }

    /// The exponent `d` of the family `G_d` the gauge belongs to.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            GaugeFunction::Power { d } | GaugeFunction::PowerLog { d, .. } => Some(*d),
            GaugeFunction::Tabulated { points } => {
                let (p, q) = (points[0], points[1]);
                Some((q.1.ln() - p.1.ln()) / (q.0.ln() - p.0.ln()))
            }
        }
    }

    pub fn h(&self, t: f64) -> f64 {
        match self {
            GaugeFunction::Power { d } => t.powf(*d),
            GaugeFunction::PowerLog { d, gamma } => t.powf(*d) * (-t.ln()).powf(*gamma),
            GaugeFunction::Tabulated { points } => {
                let lt = t.ln();
                let i = points
                    .partition_point(|p| p.0 < t)
                    .clamp(1, points.len() - 1);
                let (p, q) = (points[i - 1], points[i]);
                let s = (q.1.ln() - p.1.ln()) / (q.0.ln() - p.0.ln());
                (p.1.ln() + s * (lt - p.0.ln())).exp()
            }
        }
    }

    /// `g(x) = h^{-1}(1/x)`.
    pub fn g(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Invalid(format!(
                "gauge inverse needs x > 0, got {x}"
            )));
        }
        match self {
            GaugeFunction::Power { d } => Ok(x.powf(-1.0 / d)),
            _ => self.invert(1.0 / x),
        }
    }

    /// Bisection on `log t`, valid where `h` is increasing.
    fn invert(&self, y: f64) -> Result<f64> {
        let peak = match self {
            GaugeFunction::PowerLog { d, gamma } if *gamma > 0.0 => -gamma / d,
            _ => -1e-9,
        };
        let (mut lo, mut hi) = (-700.0_f64, peak);
        let f = |lt: f64| self.h(lt.exp()) - y;
        if !(f(lo) <= 0.0 && f(hi) >= 0.0) {
            return Err(Error::Invalid(format!(
                "gauge does not attain {y} on (0, 1)"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }

    /// Checks strict increase on the sampled points.
    pub fn check_increasing(&self, samples: &[f64]) -> Result<()> {
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        for w in sorted.windows(2) {
            if w[1] > w[0] && !(self.h(w[1]) > self.h(w[0])) {
                return Err(Error::Invalid(format!(
                    "gauge is not increasing between {} and {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_inverse() {
        let g = GaugeFunction::power(0.5).unwrap();
        assert!((g.g(10.0).unwrap() - 0.01).abs() < 1e-15);
        assert!((g.h(0.01) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn power_log_inverse_roundtrip() {
        let g = GaugeFunction::PowerLog { d: 0.5, gamma: 1.0 };
        let t = g.g(1000.0).unwrap();
        assert!((g.h(t) - 1e-3).abs() < 1e-12);
    }
}
