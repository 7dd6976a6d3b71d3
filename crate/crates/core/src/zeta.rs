//! Zeta functions of spectra and their abscissa of convergence.

use serde::Serialize;

use crate::dirac::{GeneratorData, LevelRatios, Spectrum, SpectrumKind};
use crate::error::{Error, Result};
use crate::fractal::{FractalSpec, SymmetricSequences};
use crate::seqcore::{classify, Summability, WindowPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    Converged,
    Diverged,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZetaReport {
    pub alpha: f64,
    pub partial_sum: f64,
    pub n_used: u64,
    /// Exact remainder beyond the terms summed, when the generator is known.
    pub tail_bound: Option<f64>,
    pub converged: Convergence,
}

impl ZetaReport {
    pub fn total(&self) -> Option<f64> {
        self.tail_bound.map(|t| self.partial_sum + t)
    }
}

/// Sum over the levels `cutoff+1, cutoff+2, …` of `weight(level)` times the
/// product of ratio sums before (or through) that level.
fn tail_series<F>(data: &GeneratorData, alpha: f64, through: bool, weight: F) -> Option<f64>
where
    F: Fn(&LevelRatios) -> f64,
{
    let mut prod = 1.0;
    let mut sum = 0.0;
    let term = |lr: &LevelRatios, prod: &mut f64| {
        let s = lr.ratio_sum(alpha);
        if through {
            *prod *= s;
            weight(lr) * *prod
        } else {
            let t = weight(lr) * *prod;
            *prod *= s;
            t
        }
    };
    for lr in &data.transient {
        sum += term(lr, &mut prod);
    }
    if data.period.is_empty() {
        return Some(sum);
    }
    let start = prod;
    let mut one_period = 0.0;
    for lr in &data.period {
        one_period += term(lr, &mut prod);
    }
    let rho = prod / start;
    if rho >= 1.0 {
        return if one_period > 0.0 { None } else { Some(sum) };
    }
    Some(sum + one_period / (1.0 - rho))
}

impl GeneratorData {
    /// `Σ` of `value^α` over eigenvalues of levels beyond the cutoff, or
    /// `None` when that series diverges.
    pub fn zeta_tail(&self, kind: SpectrumKind, alpha: f64) -> Result<Option<f64>> {
        let prefix: f64 = self.levels.iter().map(|lr| lr.ratio_sum(alpha)).product();
        let scale = 2.0 * self.span.powf(alpha) * prefix;
        let filled = || tail_series(self, alpha, true, |_| 1.0);
        let lacunary = || tail_series(self, alpha, false, |lr| lr.gap_sum(alpha));
        let tail = match kind {
            SpectrumKind::Filled => filled(),
            SpectrumKind::Lacunary => lacunary(),
            SpectrumKind::Full => filled().zip(lacunary()).map(|(f, l)| f + l),
            other => return Err(Error::Invalid(format!("{other} spectra have no generator"))),
        };
        Ok(tail.map(|t| scale * t))
    }
}

/// `Σ value^α` over the first `n` eigenvalues counted with multiplicity.
pub fn zeta_partial(s: &Spectrum, alpha: f64, n: u64) -> Result<ZetaReport> {
    if !(alpha > 0.0) {
        return Err(Error::Invalid(format!(
            "zeta exponent must be positive, got {alpha}"
        )));
    }
    let mut left = n;
    let mut partial = 0.0;
    let mut rest = 0.0;
    for e in &s.entries {
        let take = e.multiplicity.min(left);
        left -= take;
        let v = e.value.powf(alpha);
        partial += take as f64 * v;
        rest += (e.multiplicity - take) as f64 * v;
    }
    let n_used = n - left;
    let generator_tail = match &s.generator {
        Some(g) => Some(g.zeta_tail(s.kind, alpha)?),
        None => None,
    };
    let (tail_bound, converged) = match generator_tail {
        Some(Some(t)) => (Some(rest + t), Convergence::Converged),
        Some(None) => (None, Convergence::Diverged),
        None => (None, Convergence::Unknown),
    };
    Ok(ZetaReport {
        alpha,
        partial_sum: partial,
        n_used,
        tail_bound,
        converged,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BisectionStep {
    pub alpha: f64,
    pub summable: bool,
    pub inconclusive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AbscissaReport {
    pub estimate: f64,
    pub bracket: (f64, f64),
    pub tolerance: f64,
    pub steps: Vec<BisectionStep>,
}

impl AbscissaReport {
    pub fn inconclusive_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.inconclusive).count()
    }
}

/// Summability of `μ^α`; an inconclusive verdict falls back to the sign
/// of the fitted decay.
fn summable_at(s: &Spectrum, alpha: f64, policy: &WindowPolicy) -> Result<BisectionStep> {
    if alpha <= 0.0 {
        return Ok(BisectionStep {
            alpha,
            summable: false,
            inconclusive: false,
        });
    }
    let mu = s.to_complete_step_function()?.power(alpha)?;
    let report = classify(&mu, policy);
    let (summable, inconclusive) = match report.verdict {
        Summability::Summable { .. } => (true, false),
        Summability::Divergent => (false, false),
        Summability::Inconclusive => (report.decay.is_some_and(|d| d > 0.0), true),
    };
    Ok(BisectionStep {
        alpha,
        summable,
        inconclusive,
    })
}

/// Abscissa of convergence of `Σ μ_n^α` by bisection on the summability
/// verdict of the truncated eigenvalue function, cut where later levels
/// could still add eigenvalues.
pub fn abscissa(
    s: &Spectrum,
    bracket: (f64, f64),
    tolerance: f64,
    policy: &WindowPolicy,
) -> Result<AbscissaReport> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !(tolerance > 0.0) {
        return Err(Error::Invalid(format!(
            "bad bracket ({lo}, {hi}) or tolerance {tolerance}"
        )));
    }
    let at_lo = summable_at(s, lo, policy)?;
    let at_hi = summable_at(s, hi, policy)?;
    if at_lo.summable || !at_hi.summable {
        return Err(Error::NotStraddling {
            lo,
            hi,
            reason: format!(
                "summable at lower end: {}, summable at upper end: {}",
                at_lo.summable, at_hi.summable
            ),
        });
    }
    let mut steps = vec![at_lo, at_hi];
    while hi - lo > tolerance {
        let mid = lo.midpoint(hi);
        let step = summable_at(s, mid, policy)?;
        if step.summable {
            hi = mid;
        } else {
            lo = mid;
        }
        steps.push(step);
    }
    Ok(AbscissaReport {
        estimate: lo.midpoint(hi),
        bracket: (lo, hi),
        tolerance,
        steps,
    })
}

/// Root of `Σ ratios^d = 1` on `[0, 1]`, to `1e-12`.
pub fn similarity_dimension(ratios: &[f64]) -> Result<f64> {
    let f = |d: f64| ratios.iter().map(|r| r.powf(d)).sum::<f64>() - 1.0;
    if ratios.is_empty() || f(1.0) > 0.0 {
        return Err(Error::Invalid(
            "ratios must be nonempty with sum at most 1".into(),
        ));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-13 {
        let mid = lo.midpoint(hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo.midpoint(hi))
}

/// Closed forms of the zeta functions of a self-similar fractal.
#[derive(Debug, Clone, Serialize)]
pub struct SelfSimilarReport {
    pub dimension: f64,
    pub span: f64,
    pub ratios: Vec<f64>,
    /// Gap lengths relative to the span.
    pub gaps: Vec<f64>,
    pub residue_filled: f64,
    pub residue_lacunary: f64,
}

impl SelfSimilarReport {
    fn denominator(&self, s: f64) -> f64 {
        1.0 - self.ratios.iter().map(|r| r.powf(s)).sum::<f64>()
    }

    /// `2 (b−a)^s / (1 − Σ λ_j^s)` for `s` above the dimension.
    pub fn zeta_filled(&self, s: f64) -> f64 {
        2.0 * self.span.powf(s) / self.denominator(s)
    }

    pub fn zeta_lacunary(&self, s: f64) -> f64 {
        2.0 * self.span.powf(s) * self.gaps.iter().map(|c| c.powf(s)).sum::<f64>()
            / self.denominator(s)
    }
}

pub fn selfsimilar_report(spec: &FractalSpec) -> Result<SelfSimilarReport> {
    if !spec.is_self_similar() {
        return Err(Error::Invalid("spec is not self-similar".into()));
    }
    let ratios = spec.ratios(1)?;
    let gaps = spec.relative_gaps(1)?;
    let dimension = similarity_dimension(&ratios)?;
    let span = spec.span();
    let moment: f64 = ratios
        .iter()
        .map(|r| r.powf(dimension) * (1.0 / r).ln())
        .sum();
    let scale = 2.0 * span.powf(dimension) / moment;
    Ok(SelfSimilarReport {
        dimension,
        span,
        residue_filled: scale,
        residue_lacunary: scale * gaps.iter().map(|c| c.powf(dimension)).sum::<f64>(),
        ratios,
        gaps,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetricIndices {
    pub d: f64,
    pub delta_lower: Option<f64>,
    pub delta_upper: Option<f64>,
    /// True when the sequences are periodic and the values are exact limits.
    pub exact: bool,
    pub withheld: Option<String>,
}

/// Largest `p_n λ_n` allowed for the window formulas.
const UNIFORM_MARGIN: f64 = 0.01;

/// Dimension and Matuszewska indices of a symmetric fractal from its
/// generating sequences.
pub fn symmetric_dimension_and_delta(
    seq: &SymmetricSequences,
    policy: &WindowPolicy,
) -> Result<SymmetricIndices> {
    policy.validate()?;
    let logs: Vec<(f64, f64)> = (1..=seq.stored_len())
        .map(|n| {
            let (p, l) = seq.get(n).expect("stored level");
            (f64::from(p).ln(), (1.0 / l).ln())
        })
        .collect();
    let ratio = |w: &[(f64, f64)]| {
        let (a, b) = w
            .iter()
            .fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
        a / b
    };
    let (d, windows, exact) = match seq.period {
        Some(k) => {
            let block = &logs[logs.len() - k..];
            let doubled: Vec<_> = block.iter().chain(block).copied().collect();
            let windows: Vec<f64> = (0..k)
                .flat_map(|start| (1..=k).map(move |len| (start, len)))
                .map(|(start, len)| ratio(&doubled[start..start + len]))
                .collect();
            (ratio(block), windows, true)
        }
        None => {
            let n = logs.len();
            let d = (n.div_ceil(2).max(1)..=n)
                .map(|m| ratio(&logs[..m]))
                .fold(f64::NEG_INFINITY, f64::max);
            let windows: Vec<f64> = (0..n)
                .flat_map(|start| (start + 1..=n).map(move |end| (start, end)))
                .map(|(start, end)| ratio(&logs[start..end]))
                .collect();
            (d, windows, false)
        }
    };
    let worst = (1..=seq.stored_len())
        .map(|n| {
            let (p, l) = seq.get(n).expect("stored level");
            f64::from(p) * l
        })
        .fold(0.0, f64::max);
    if worst > 1.0 - UNIFORM_MARGIN {
        return Ok(SymmetricIndices {
            d,
            delta_lower: None,
            delta_upper: None,
            exact,
            withheld: Some(format!(
                "not uniformly generated: sup p·λ = {worst} exceeds {}",
                1.0 - UNIFORM_MARGIN
            )),
        });
    }
    Ok(SymmetricIndices {
        d,
        delta_lower: Some(windows.iter().copied().fold(f64::INFINITY, f64::min)),
        delta_upper: Some(windows.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        exact,
        withheld: None,
    })
}
