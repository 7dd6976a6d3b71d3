use serde::Serialize;

use super::policy::WindowPolicy;
use super::step::StepFunction;
use super::summability::{classify, Branch, Summability};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EccentricityVerdict {
    Eccentric,
    NotEccentric,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct EccentricityReport {
    pub verdict: EccentricityVerdict,
    pub branch: Branch,
    /// Scales `x_k` where `xμ(x)/S(x)` falls below the threshold.
    pub witness: Vec<f64>,
    pub infimum: Option<f64>,
    pub late_infimum: Option<f64>,
    /// Extreme of `S(λx)/S(x)` over the tail: the infimum on the up
    /// branch, the supremum on the down branch.
    pub dilation_ratio: Option<f64>,
}

impl EccentricityReport {
    fn inconclusive(branch: Branch) -> Self {
        Self {
            verdict: EccentricityVerdict::Inconclusive,
            branch,
            witness: Vec::new(),
            infimum: None,
            late_infimum: None,
            dilation_ratio: None,
        }
    }
}

/// Tests `liminf xμ(x)/S(x) = 0` on the tail of the known range.
///
/// On each step the ratio is smallest at the left endpoint, so those
/// are the sampled scales.
pub fn eccentricity(
    mu: &StepFunction,
    lambda: f64,
    policy: &WindowPolicy,
) -> Result<EccentricityReport> {
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(Error::Invalid(format!(
            "dilation λ must exceed 1, got {lambda}"
        )));
    }
    policy.validate()?;
    if mu.is_empty() {
        return Err(Error::InsufficientData("empty step function".into()));
    }
    let summability = classify(mu, policy).verdict;
    let (branch, tail) = match summability {
        Summability::Summable { tail } => (Branch::Down, tail),
        Summability::Divergent => (Branch::Up, 0.0),
        Summability::Inconclusive => {
            return Ok(EccentricityReport::inconclusive(Branch::Inconclusive))
        }
    };
    let s_of = |x: f64| match branch {
        Branch::Up => mu.integral_up_clamped(x),
        _ => mu.mass_after_clamped(x) + tail,
    };

    let t_start = mu.right_ends()[0].ln();
    let t_end = mu.total_width().ln();
    let x_head = policy.head(t_start, t_end).exp();
    let x_mid = policy.head(t_start, t_end).midpoint(t_end).exp();
    let mut samples = Vec::new();
    for (k, s) in mu.steps().iter().enumerate().skip(1) {
        let x = mu.left_end(k);
        if x < x_head {
            continue;
        }
        let denom = s_of(x);
        if denom > 0.0 {
            samples.push((x, x * s.value / denom));
        }
    }
    if samples.len() < 3 {
        return Ok(EccentricityReport::inconclusive(branch));
    }
    let threshold = policy.eccentricity_threshold;
    let infimum = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let early = samples
        .iter()
        .filter(|s| s.0 < x_mid)
        .map(|s| s.1)
        .fold(f64::INFINITY, f64::min);
    let late = samples
        .iter()
        .filter(|s| s.0 >= x_mid)
        .map(|s| s.1)
        .fold(f64::INFINITY, f64::min);
    let witness: Vec<f64> = samples
        .iter()
        .filter(|s| s.1 < threshold)
        .map(|s| s.0)
        .collect();

    let dilation_ratio = {
        let ratios = samples
            .iter()
            .filter(|s| s.0 * lambda <= mu.total_width())
            .map(|s| s_of(s.0 * lambda) / s_of(s.0));
        match branch {
            Branch::Up => ratios.fold(None, |acc: Option<f64>, r| {
                Some(acc.map_or(r, |a| a.min(r)))
            }),
            _ => ratios.fold(None, |acc: Option<f64>, r| {
                Some(acc.map_or(r, |a| a.max(r)))
            }),
        }
    };

    let verdict = if infimum < threshold {
        EccentricityVerdict::Eccentric
    } else if late.is_finite()
        && late >= 2.0 * threshold
        && (!early.is_finite() || late >= 0.9 * early)
    {
        EccentricityVerdict::NotEccentric
    } else {
        EccentricityVerdict::Inconclusive
    };
    Ok(EccentricityReport {
        verdict,
        branch,
        witness,
        infimum: Some(infimum),
        late_infimum: late.is_finite().then_some(late),
        dilation_ratio,
    })
}
