use serde::Serialize;

use super::policy::WindowPolicy;
use super::step::StepFunction;
use crate::error::{Error, Result};
use crate::ext::ExtReal;

/// Piecewise-linear surrogate of the log profile `t ↦ −log μ(e^t)`.
///
/// Vertices sit at the right corners of the steps in log scale. A step
/// whose run in `log x` exceeds the policy's run resolution also keeps
/// its left corner, so long plateaus survive while short ones are bridged.
#[derive(Debug, Clone)]
pub struct LogProfile {
    t: Vec<f64>,
    f: Vec<f64>,
}

impl LogProfile {
    pub fn new(mu: &StepFunction, run_resolution: f64) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InsufficientData("empty step function".into()));
        }
        let steps = mu.steps();
        let ends = mu.right_ends();
        let mut t = Vec::with_capacity(2 * steps.len());
        let mut f = Vec::with_capacity(2 * steps.len());
        for (k, s) in steps.iter().enumerate() {
            let right = ends[k].ln();
            let level = -s.value.ln();
            if k > 0 {
                let left = ends[k - 1].ln();
                if right - left > run_resolution {
                    t.push(left);
                    f.push(level);
                }
            }
            t.push(right);
            f.push(level);
        }
        Ok(Self { t, f })
    }

    pub fn start(&self) -> f64 {
        self.t[0]
    }

    pub fn end(&self) -> f64 {
        *self.t.last().unwrap()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.t.iter().copied().zip(self.f.iter().copied())
    }

    fn interpolate(&self, idx: usize, q: f64) -> f64 {
        if idx == 0 {
            return self.f[0];
        }
        if idx >= self.t.len() {
            return *self.f.last().unwrap();
        }
        let (t0, t1) = (self.t[idx - 1], self.t[idx]);
        let (f0, f1) = (self.f[idx - 1], self.f[idx]);
        if t1 <= t0 {
            return f1;
        }
        f0 + (f1 - f0) * (q - t0) / (t1 - t0)
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, q: f64) -> f64 {
        let idx = self.t.partition_point(|&t| t <= q);
        self.interpolate(idx, q)
    }

    /// Left limit at `q`.
    pub fn eval_left(&self, q: f64) -> f64 {
        let idx = self.t.partition_point(|&t| t < q);
        if idx < self.t.len() && self.t[idx] == q {
            return self.f[idx];
        }
        self.interpolate(idx, q)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowStat {
    pub h: f64,
    pub phi_sup: f64,
    pub phi_inf: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexDiagnostics {
    pub t_head: f64,
    pub t_end: f64,
    pub windows: Vec<WindowStat>,
    /// Extremes of `(f(t) − f(t_head)) / (t − t_head)` over the late tail.
    pub secant_sup: f64,
    pub secant_inf: f64,
    /// `(t, f(t)/t)` on the policy's geometric scale grid.
    pub profile_samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceabilityInterval {
    pub lower: ExtReal,
    pub upper: ExtReal,
    /// Whether `d̄` lies in `[lower, upper]`.
    pub contains_d_upper: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub d_lower: ExtReal,
    pub d_upper: ExtReal,
    pub delta_lower: ExtReal,
    pub delta_upper: ExtReal,
    pub tolerance: f64,
    pub traceability_interval: TraceabilityInterval,
    pub diagnostics: IndexDiagnostics,
}

impl IndexReport {
    pub fn ordering_holds(&self) -> bool {
        let tol = self.tolerance;
        self.delta_lower.le_within(self.d_lower, tol)
            && self.d_lower.le_within(self.d_upper, tol)
            && self.d_upper.le_within(self.delta_upper, tol)
    }
}

/// Extremes of `φ(t, h) = (f(t+h) − f(t))/h` over `t ∈ [lo, hi − h]`.
///
/// `φ(·, h)` is piecewise linear with breakpoints at vertices and at
/// vertices shifted by `−h`, so both one-sided values at those points
/// and at the range ends give the exact extremes.
fn phi_extremes(p: &LogProfile, lo: f64, hi: f64, h: f64) -> (f64, f64) {
    let last = hi - h;
    let mut candidates = vec![lo, last];
    for &t in &p.t {
        for c in [t, t - h] {
            if c > lo && c < last {
                candidates.push(c);
            }
        }
    }
    let (mut sup, mut inf) = (f64::NEG_INFINITY, f64::INFINITY);
    for &c in &candidates {
        let right = (p.eval(c + h) - p.eval(c)) / h;
        sup = sup.max(right);
        inf = inf.min(right);
        if c > lo {
            let left = (p.eval_left(c + h) - p.eval_left(c)) / h;
            sup = sup.max(left);
            inf = inf.min(left);
        }
    }
    (sup, inf)
}

/// Extremes of secants anchored at `anchor` over `t ∈ [from, to]`.
fn secant_extremes(p: &LogProfile, anchor: f64, from: f64, to: f64) -> (f64, f64) {
    let base = p.eval(anchor);
    let mut candidates = vec![from, to];
    candidates.extend(p.t.iter().copied().filter(|&t| t > from && t < to));
    let (mut sup, mut inf) = (f64::NEG_INFINITY, f64::INFINITY);
    for &c in &candidates {
        let mut vals = vec![p.eval(c)];
        if c > from {
            vals.push(p.eval_left(c));
        }
        for v in vals {
            let s = (v - base) / (c - anchor);
            sup = sup.max(s);
            inf = inf.min(s);
        }
    }
    (sup, inf)
}

/// Estimates `d̲, d̄, δ̲, δ̄` from the tail of the log profile.
///
/// The `d` indices come from secants anchored at the head of the tail
/// and the `δ` indices from all windows of length at least
/// `min_window`; anchored secants are windows themselves, so the
/// ordering `δ̲ ≤ d̲ ≤ d̄ ≤ δ̄` holds by construction.
pub fn indices(mu: &StepFunction, policy: &WindowPolicy) -> Result<IndexReport> {
    policy.validate()?;
    let profile = LogProfile::new(mu, policy.run_resolution)?;
    let (t_start, t_end) = (profile.start(), profile.end());
    let t_head = policy.head(t_start, t_end);
    let span = t_end - t_head;
    let hs = policy.windows(span);
    if hs.len() < 3 {
        let needed = policy.min_window * policy.h_grid.base.powi(2);
        return Err(Error::InsufficientData(format!(
            "indices need a tail of at least {needed:.3} in log x after discarding the head \
             (3 window lengths); the data give {span:.3}"
        )));
    }
    let windows: Vec<WindowStat> = hs
        .iter()
        .map(|&h| {
            let (phi_sup, phi_inf) = phi_extremes(&profile, t_head, t_end, h);
            WindowStat {
                h,
                phi_sup,
                phi_inf,
            }
        })
        .collect();
    let from = t_head + policy.min_window.max(span / 2.0);
    let (secant_sup, secant_inf) = secant_extremes(&profile, t_head, from.min(t_end), t_end);

    let phi_sup = windows.iter().map(|w| w.phi_sup).fold(secant_sup, f64::max);
    let phi_inf = windows.iter().map(|w| w.phi_inf).fold(secant_inf, f64::min);

    let d_lower = ExtReal::reciprocal(secant_sup);
    let d_upper = ExtReal::reciprocal(secant_inf);
    let delta_lower = ExtReal::reciprocal(phi_sup);
    let delta_upper = ExtReal::reciprocal(phi_inf);

    let profile_samples = sample_profile(&profile, t_head, t_end, policy);
    let tolerance = policy.tolerance;
    let contains =
        delta_lower.le_within(d_upper, tolerance) && d_upper.le_within(delta_upper, tolerance);
    Ok(IndexReport {
        d_lower,
        d_upper,
        delta_lower,
        delta_upper,
        tolerance,
        traceability_interval: TraceabilityInterval {
            lower: delta_lower,
            upper: delta_upper,
            contains_d_upper: contains,
        },
        diagnostics: IndexDiagnostics {
            t_head,
            t_end,
            windows,
            secant_sup,
            secant_inf,
            profile_samples,
        },
    })
}

fn sample_profile(
    p: &LogProfile,
    t_head: f64,
    t_end: f64,
    policy: &WindowPolicy,
) -> Vec<(f64, f64)> {
    let step = policy.t_grid.base.ln();
    (0..policy.t_grid.count)
        .map(|k| t_head + k as f64 * step)
        .take_while(|&t| t <= t_end)
        .filter(|&t| t != 0.0)
        .map(|t| (t, p.eval(t) / t))
        .collect()
}

/// `[δ̲, δ̄] ∩ (0, ∞)`, the set of singular traceability exponents up to
/// endpoint attainment.
pub fn traceability_interval(
    mu: &StepFunction,
    policy: &WindowPolicy,
) -> Result<TraceabilityInterval> {
    Ok(indices(mu, policy)?.traceability_interval)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reciprocal_geometric(x_max: f64, ratio: f64) -> StepFunction {
        // μ(x) = 1/x sampled on a geometric partition, capped at 1
        let mut pairs = vec![(1.0, 1.0)];
        let mut x = 1.0;
        while x < x_max {
            let next = x * ratio;
            pairs.push((1.0 / next, next - x));
            x = next;
        }
        StepFunction::build(pairs).unwrap().with_truncation(true)
    }

    #[test]
    fn reciprocal_has_unit_indices() {
        let r = indices(&reciprocal_geometric(1e12, 1.1), &WindowPolicy::default()).unwrap();
        for v in [r.d_lower, r.d_upper, r.delta_lower, r.delta_upper] {
            assert!((v.as_f64() - 1.0).abs() < 0.02, "{v}");
        }
        assert!(r.ordering_holds());
    }

    #[test]
    fn short_data_is_rejected() {
        let mu = StepFunction::build([(1.0, 1.0), (0.5, 1.0)])
            .unwrap()
            .with_truncation(true);
        assert!(matches!(
            indices(&mu, &WindowPolicy::default()),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn profile_keeps_long_plateaus() {
        let mu = StepFunction::build([(1.0, 1.0), (0.5, 100.0)]).unwrap();
        let p = LogProfile::new(&mu, 2.5).unwrap();
        assert_eq!(p.vertices().count(), 3);
        assert_eq!(p.eval(0.0), -(0.5f64).ln());
        assert_eq!(p.eval_left(0.0), 0.0);
    }
}
