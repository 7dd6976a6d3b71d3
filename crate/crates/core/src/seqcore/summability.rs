use serde::Serialize;
use std::f64::consts::LN_2;

use super::policy::WindowPolicy;
use super::step::StepFunction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Summability {
    /// `tail` estimates `∫_W^∞ μ` beyond the known range.
    Summable {
        tail: f64,
    },
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummabilityReport {
    pub verdict: Summability,
    /// Exponential decay rate of block masses per unit of `log x`.
    pub decay: Option<f64>,
    pub blocks: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Up,
    Down,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralReport {
    pub value: Option<f64>,
    pub branch: Branch,
}

/// Block masses of `μ` over consecutive `log 2` windows of `log x` in the
/// tail, aligned so the last block ends at the end of the known range.
fn block_masses(mu: &StepFunction, policy: &WindowPolicy) -> (Vec<f64>, f64) {
    let t_start = mu.right_ends()[0].ln();
    let t_end = mu.total_width().ln();
    let t_head = policy.head(t_start, t_end);
    let count = ((t_end - t_head) / LN_2).floor().max(0.0) as usize;
    let blocks = (0..count)
        .rev()
        .map(|j| {
            let hi = if j == 0 {
                mu.total_width()
            } else {
                (t_end - j as f64 * LN_2).exp()
            };
            let lo = (t_end - (j + 1) as f64 * LN_2).exp();
            mu.mass_between(lo, hi)
        })
        .collect();
    (blocks, t_head)
}

fn slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mx;
        num += dx * (y - my);
        den += dx * dx;
    }
    num / den
}

/// Decides whether `μ ∈ L¹` from the tail of its known range.
pub fn classify(mu: &StepFunction, policy: &WindowPolicy) -> SummabilityReport {
    if mu.is_empty() {
        return SummabilityReport {
            verdict: Summability::Summable { tail: 0.0 },
            decay: None,
            blocks: 0,
        };
    }
    if !mu.is_truncated() {
        return SummabilityReport {
            verdict: Summability::Summable { tail: 0.0 },
            decay: None,
            blocks: 0,
        };
    }
    let (blocks, t_head) = block_masses(mu, policy);
    if blocks.len() < 3 || blocks.iter().any(|&b| !(b > 0.0)) {
        return SummabilityReport {
            verdict: Summability::Inconclusive,
            decay: None,
            blocks: blocks.len(),
        };
    }
    let logs: Vec<f64> = blocks.iter().map(|b| b.ln()).collect();
    let decay = -slope(&logs) / LN_2;
    let eps = policy.decay_epsilon;
    let verdict = if decay > eps {
        Summability::Summable {
            tail: tail_estimate(mu, *blocks.last().unwrap(), decay),
        }
    } else if decay < -eps {
        Summability::Divergent
    } else {
        let head_mass = mu.integral_up_clamped(t_head.exp());
        if head_mass > 0.0 && mu.total_mass() / head_mass >= policy.growth_threshold {
            Summability::Divergent
        } else {
            Summability::Inconclusive
        }
    };
    SummabilityReport {
        verdict,
        decay: Some(decay),
        blocks: blocks.len(),
    }
}

/// Larger of a geometric extrapolation of block masses and of entry masses.
fn tail_estimate(mu: &StepFunction, last_block: f64, decay: f64) -> f64 {
    let q = (-decay * LN_2).exp();
    let by_blocks = last_block * q / (1.0 - q);
    let steps = mu.steps();
    let n = steps.len();
    if n >= 4 {
        let m = |k: usize| steps[k].value * steps[k].width;
        let ratio = (n - 3..n).map(|k| m(k) / m(k - 1)).fold(0.0, f64::max);
        let by_entries = m(n - 1) * ratio / (1.0 - ratio);
        // entries decaying geometrically pin the tail down exactly
        if ratio < 0.9 {
            return by_entries;
        }
        if ratio < 1.0 {
            return by_blocks.max(by_entries);
        }
    }
    by_blocks
}

/// `S↑(x)` for non-summable `μ`, `S↓(x)` for summable `μ`.
pub fn integral_s(
    mu: &StepFunction,
    x: f64,
    policy: &WindowPolicy,
) -> crate::Result<IntegralReport> {
    let known_up = mu.integral_up(x)?;
    Ok(match classify(mu, policy).verdict {
        Summability::Summable { tail } => IntegralReport {
            value: Some(mu.integral_known_tail(x)? + tail),
            branch: Branch::Down,
        },
        Summability::Divergent => IntegralReport {
            value: Some(known_up),
            branch: Branch::Up,
        },
        Summability::Inconclusive => IntegralReport {
            value: None,
            branch: Branch::Inconclusive,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_tail_is_down() {
        let mu = StepFunction::build((0..60).map(|k| (0.5_f64.powi(k), 1.0)))
            .unwrap()
            .with_truncation(true);
        let r = integral_s(&mu, 2.0, &WindowPolicy::default()).unwrap();
        assert_eq!(r.branch, Branch::Down);
        assert!((r.value.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn harmonic_is_up() {
        let mu = StepFunction::build((1..=10_000).map(|k| (1.0 / k as f64, 1.0)))
            .unwrap()
            .with_truncation(true);
        let r = integral_s(&mu, 4.0, &WindowPolicy::default()).unwrap();
        assert_eq!(r.branch, Branch::Up);
        assert!((r.value.unwrap() - (1.0 + 0.5 + 1.0 / 3.0 + 0.25)).abs() < 1e-12);
    }

    #[test]
    fn short_truncation_is_inconclusive() {
        let mu = StepFunction::build((1..=10).map(|k| (1.0 / k as f64, 1.0)))
            .unwrap()
            .with_truncation(true);
        let r = integral_s(&mu, 4.0, &WindowPolicy::default()).unwrap();
        assert_eq!(r.branch, Branch::Inconclusive);
        assert_eq!(r.value, None);
    }

    #[test]
    fn finite_function_is_summable() {
        let mu = StepFunction::build([(1.0, 1.0), (0.5, 1.0)]).unwrap();
        assert_eq!(
            classify(&mu, &WindowPolicy::default()).verdict,
            Summability::Summable { tail: 0.0 }
        );
    }
}
