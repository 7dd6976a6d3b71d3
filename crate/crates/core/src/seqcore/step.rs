use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub value: f64,
    pub width: f64,
}

/// A non-increasing step function `μ` on `[0, W)`, stored as strictly
/// decreasing values with positive widths.
///
/// `truncated` marks that `μ` is unknown past the last step; otherwise
/// `μ` vanishes there.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    steps: Vec<Step>,
    ends: Vec<f64>,
    masses: Vec<f64>,
    /// `suffix[k]` is the mass of steps `k..`, summed from the end.
    suffix: Vec<f64>,
    truncated: bool,
}

impl StepFunction {
    /// Sorts, coalesces equal values and validates. The result is not truncated.
    pub fn build<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut steps = Vec::new();
        for (value, width) in pairs {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Invalid(format!(
                    "step value must be positive, got {value}"
                )));
            }
            if !(width.is_finite() && width > 0.0) {
                return Err(Error::Invalid(format!(
                    "step width must be positive, got {width}"
                )));
            }
            steps.push(Step { value, width });
        }
        steps.sort_by(|a, b| b.value.total_cmp(&a.value));
        Ok(Self::from_sorted(steps, false))
    }

    /// Takes steps already sorted by non-increasing value.
    pub(crate) fn from_sorted(sorted: Vec<Step>, truncated: bool) -> Self {
        let mut steps: Vec<Step> = Vec::with_capacity(sorted.len());
        for s in sorted {
            debug_assert!(s.value > 0.0 && s.width > 0.0);
            match steps.last_mut() {
                Some(last) if last.value == s.value => last.width += s.width,
                Some(last) => {
                    debug_assert!(last.value > s.value);
                    steps.push(s);
                }
                None => steps.push(s),
            }
        }
        let mut ends = Vec::with_capacity(steps.len());
        let mut masses = Vec::with_capacity(steps.len());
        let (mut w, mut m) = (0.0, 0.0);
        for s in &steps {
            w += s.width;
            m += s.value * s.width;
            ends.push(w);
            masses.push(m);
        }
        let mut suffix = vec![0.0; steps.len() + 1];
        for (k, s) in steps.iter().enumerate().rev() {
            suffix[k] = suffix[k + 1] + s.value * s.width;
        }
        Self {
            steps,
            ends,
            masses,
            suffix,
            truncated,
        }
    }

    pub fn with_truncation(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn total_width(&self) -> f64 {
        self.ends.last().copied().unwrap_or(0.0)
    }

    /// Total mass `∫μ` over the known range.
    pub fn total_mass(&self) -> f64 {
        self.masses.last().copied().unwrap_or(0.0)
    }

    /// Cumulative right ends `W_k`.
    pub fn right_ends(&self) -> &[f64] {
        &self.ends
    }

    pub fn left_end(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.ends[k - 1]
        }
    }

    pub fn smallest_value(&self) -> Option<f64> {
        self.steps.last().map(|s| s.value)
    }

    fn check_known(&self, x: f64) -> Result<()> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Invalid(format!(
                "argument must be nonnegative, got {x}"
            )));
        }
        if self.truncated && x > self.total_width() {
            return Err(Error::TailUnknown {
                known: self.total_width(),
                requested: x,
            });
        }
        Ok(())
    }

    /// Index of the step containing `x`, or `len()` past the end.
    fn locate(&self, x: f64) -> usize {
        self.ends.partition_point(|&w| w <= x)
    }

    pub fn mu_at(&self, x: f64) -> Result<f64> {
        self.check_known(x)?;
        let k = self.locate(x);
        match self.steps.get(k) {
            Some(s) => Ok(s.value),
            None if self.truncated => Err(Error::TailUnknown {
                known: self.total_width(),
                requested: x,
            }),
            None => Ok(0.0),
        }
    }

    /// `−log μ(e^t)`, with `+∞` where `μ` vanishes.
    pub fn log_profile(&self, t: f64) -> Result<f64> {
        let mu = self.mu_at(t.exp())?;
        Ok(if mu == 0.0 { f64::INFINITY } else { -mu.ln() })
    }

    /// `S↑(x) = ∫₀ˣ μ`.
    pub fn integral_up(&self, x: f64) -> Result<f64> {
        self.check_known(x)?;
        Ok(self.integral_up_clamped(x))
    }

    pub(crate) fn integral_up_clamped(&self, x: f64) -> f64 {
        let k = self.locate(x);
        if k >= self.steps.len() {
            return self.total_mass();
        }
        let before = if k == 0 { 0.0 } else { self.masses[k - 1] };
        before + self.steps[k].value * (x - self.left_end(k))
    }

    /// `∫ₓ^W μ` over the known range, accurate even when it is tiny
    /// compared with the total mass.
    pub(crate) fn mass_after_clamped(&self, x: f64) -> f64 {
        let k = self.locate(x);
        if k >= self.steps.len() {
            return 0.0;
        }
        self.suffix[k + 1] + self.steps[k].value * (self.ends[k] - x.max(self.left_end(k)))
    }

    /// `∫_lo^hi μ`, subtracting whichever cumulative sum is smaller.
    pub(crate) fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        let up = self.integral_up_clamped(lo);
        let down = self.mass_after_clamped(lo);
        if up <= down {
            (self.integral_up_clamped(hi) - up).max(0.0)
        } else {
            (down - self.mass_after_clamped(hi)).max(0.0)
        }
    }

    /// `∫ₓ^W μ` over the known range only.
    pub fn integral_known_tail(&self, x: f64) -> Result<f64> {
        self.check_known(x)?;
        Ok(self.mass_after_clamped(x))
    }

    pub fn power(&self, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Invalid(format!(
                "power exponent must be positive, got {gamma}"
            )));
        }
        if gamma == 1.0 {
            return Ok(self.clone());
        }
        self.map_values(|v| v.powf(gamma))
    }

    /// `c·μ(x)`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Invalid(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        self.map_values(|v| v * c)
    }

    /// `x ↦ μ(λx)`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Invalid(format!(
                "dilation must be positive, got {lambda}"
            )));
        }
        let steps = self
            .steps
            .iter()
            .map(|s| Step {
                value: s.value,
                width: s.width / lambda,
            })
            .collect();
        Ok(Self::from_sorted(steps, self.truncated))
    }

    fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut steps = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            let value = f(s.value);
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Invalid(format!(
                    "value {} maps outside the positive reals",
                    s.value
                )));
            }
            steps.push(Step {
                value,
                width: s.width,
            });
        }
        Ok(Self::from_sorted(steps, self.truncated))
    }

    /// Non-increasing rearrangement of the union of both multisets.
    ///
    /// When an input is truncated, values below its last known value are
    /// not determined, so the result keeps only values at or above the
    /// largest such floor.
    pub fn direct_sum(&self, other: &StepFunction) -> StepFunction {
        let floor = [self, other]
            .iter()
            .filter(|m| m.truncated)
            .filter_map(|m| m.smallest_value())
            .fold(0.0_f64, f64::max);
        let mut merged = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.steps.len() || j < other.steps.len() {
            let take_self = match (self.steps.get(i), other.steps.get(j)) {
                (Some(a), Some(b)) => a.value >= b.value,
                (Some(_), None) => true,
                _ => false,
            };
            let s = if take_self {
                i += 1;
                self.steps[i - 1]
            } else {
                j += 1;
                other.steps[j - 1]
            };
            if s.value < floor {
                break;
            }
            merged.push(s);
        }
        StepFunction::from_sorted(merged, self.truncated || other.truncated)
    }

    /// Pointwise maximum `α ∨ β`.
    pub fn pointwise_max(&self, other: &StepFunction) -> StepFunction {
        self.combine(other, f64::max)
    }

    /// Pointwise product, the eigenvalue function of two commuting diagonal operators.
    pub fn pointwise_product(&self, other: &StepFunction) -> StepFunction {
        self.combine(other, |a, b| a * b)
    }

    fn combine(&self, other: &StepFunction, op: impl Fn(f64, f64) -> f64) -> StepFunction {
        let limit = [self, other]
            .iter()
            .filter(|m| m.truncated)
            .map(|m| m.total_width())
            .fold(f64::INFINITY, f64::min);
        let truncated = limit.is_finite();
        let limit = if truncated {
            limit
        } else {
            self.total_width().max(other.total_width())
        };
        let value_at = |m: &StepFunction, k: usize| m.steps.get(k).map_or(0.0, |s| s.value);
        let mut out = Vec::new();
        let (mut i, mut j, mut x) = (0usize, 0usize, 0.0_f64);
        while x < limit {
            let ei = self.ends.get(i).copied().unwrap_or(f64::INFINITY);
            let ej = other.ends.get(j).copied().unwrap_or(f64::INFINITY);
            let next = ei.min(ej).min(limit);
            let v = op(value_at(self, i), value_at(other, j));
            if v <= 0.0 {
                break;
            }
            if next > x {
                out.push(Step {
                    value: v,
                    width: next - x,
                });
            }
            x = next;
            if ei <= x {
                i += 1;
            }
            if ej <= x {
                j += 1;
            }
        }
        StepFunction::from_sorted(out, truncated)
    }
}

/// Alias for [`StepFunction::build`].
pub fn build_step_function<I>(pairs: I) -> Result<StepFunction>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    StepFunction::build(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(n: usize) -> StepFunction {
        StepFunction::build((0..n).map(|k| (0.5_f64.powi(k as i32), 1.0)))
            .unwrap()
            .with_truncation(true)
    }

    #[test]
    fn build_coalesces_and_sorts() {
        let m = StepFunction::build([(1.0, 1.0), (1.0, 1.0), (0.5, 2.0)]).unwrap();
        assert_eq!(
            m.steps(),
            &[
                Step {
                    value: 1.0,
                    width: 2.0
                },
                Step {
                    value: 0.5,
                    width: 2.0
                }
            ]
        );
        let m = StepFunction::build([(0.5, 1.0), (1.0, 1.0)]).unwrap();
        assert_eq!(m.steps()[0].value, 1.0);
        assert_eq!(m.steps()[1].value, 0.5);
        assert!(StepFunction::build([(1.0, 1.0), (-1.0, 1.0)]).is_err());
        assert!(StepFunction::build([(1.0, 0.0)]).is_err());
    }

    #[test]
    fn evaluation_at_points() {
        assert_eq!(geometric(10).mu_at(2.5).unwrap(), 0.25);
        assert_eq!(geometric(10).mu_at(2.0).unwrap(), 0.25);
        let single = StepFunction::build([(1.0, 1.0)]).unwrap();
        assert_eq!(single.mu_at(5.0).unwrap(), 0.0);
        let trunc = StepFunction::build([(1.0, 10.0)])
            .unwrap()
            .with_truncation(true);
        assert!(matches!(trunc.mu_at(11.0), Err(Error::TailUnknown { .. })));
    }

    #[test]
    fn log_profile_reads_steps() {
        // 1/⌊x⌋ capped at 1 near zero
        let harmonic = StepFunction::build(
            std::iter::once((1.0, 2.0)).chain((2..=100).map(|k| (1.0 / k as f64, 1.0))),
        )
        .unwrap();
        assert_eq!(harmonic.log_profile(0.0).unwrap(), 0.0);
        let expo = StepFunction::build((0..40).map(|k| ((-(k as f64)).exp(), 1.0))).unwrap();
        assert!((expo.log_profile(3f64.ln()).unwrap() - 3.0).abs() <= 1.0);
        let unit = StepFunction::build([(1.0, 1.0)]).unwrap();
        assert_eq!(unit.log_profile(-3.0).unwrap(), 0.0);
        assert_eq!(unit.log_profile(1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn direct_sum_merges() {
        let a = StepFunction::build([(1.0, 1.0)]).unwrap();
        let b = StepFunction::build([(0.5, 1.0)]).unwrap();
        let s = a.direct_sum(&b);
        assert_eq!(s.steps().len(), 2);
        let g = geometric(6);
        let gg = g.direct_sum(&g);
        for k in 0..6 {
            assert_eq!(gg.mu_at(2.0 * k as f64 + 0.5).unwrap(), 0.5_f64.powi(k));
        }
    }

    #[test]
    fn power_of_values() {
        let m = StepFunction::build([(1.0, 1.0), (0.25, 1.0)]).unwrap();
        let p = m.power(0.5).unwrap();
        assert_eq!(p.steps()[1].value, 0.5);
        assert_eq!(m.power(1.0).unwrap(), m);
        assert!(m.power(0.0).is_err());
    }

    #[test]
    fn combine_respects_truncation() {
        let a = geometric(4);
        let b = StepFunction::build([(0.9, 10.0)]).unwrap();
        let mx = a.pointwise_max(&b);
        assert!(mx.is_truncated());
        assert_eq!(mx.total_width(), 4.0);
        assert_eq!(mx.mu_at(0.5).unwrap(), 1.0);
        assert_eq!(mx.mu_at(1.5).unwrap(), 0.9);
    }
}
