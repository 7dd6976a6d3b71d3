//! Eigenvalue streams of the lacunary, filled, full and tensor Dirac operators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal::{intervals, scale_classes, Family, FractalSpec, SymmetricSequences};
use crate::multiset::{coalesce, overflow, total_multiplicity, Eigen};
use crate::seqcore::{Step, StepFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Lacunary,
    Filled,
    Full,
    Tensor,
    External,
}

impl SpectrumKind {
    pub fn family(self) -> Result<Family> {
        match self {
            SpectrumKind::Lacunary => Ok(Family::Lacunae),
            SpectrumKind::Filled => Ok(Family::Cells),
            SpectrumKind::Full => Ok(Family::Both),
            other => Err(Error::Invalid(format!(
                "{other} spectra have no interval family"
            ))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            SpectrumKind::Lacunary => "lacunary",
            SpectrumKind::Filled => "filled",
            SpectrumKind::Full => "full",
            SpectrumKind::Tensor => "tensor",
            SpectrumKind::External => "external",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SpectrumKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lacunary" => Ok(SpectrumKind::Lacunary),
            "filled" => Ok(SpectrumKind::Filled),
            "full" => Ok(SpectrumKind::Full),
            "tensor" => Ok(SpectrumKind::Tensor),
            "external" => Ok(SpectrumKind::External),
            _ => Err(Error::Invalid(format!("unknown spectrum kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockFamily {
    Lacunary,
    Filled,
}

/// Eigenvalues contributed by one level of the construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelBlock {
    pub level: usize,
    pub family: BlockFamily,
    pub entries: Vec<Eigen>,
}

/// Ratios and relative gaps of one generator level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRatios {
    pub ratios: Vec<f64>,
    pub gaps: Vec<f64>,
}

impl LevelRatios {
    pub fn ratio_sum(&self, alpha: f64) -> f64 {
        self.ratios.iter().map(|r| r.powf(alpha)).sum()
    }

    pub fn gap_sum(&self, alpha: f64) -> f64 {
        self.gaps.iter().map(|c| c.powf(alpha)).sum()
    }
}

/// Generator data behind a spectrum, enough to sum the levels beyond the
/// cutoff in closed form when the generator is eventually periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorData {
    pub span: f64,
    /// Levels `1..=cutoff`.
    pub levels: Vec<LevelRatios>,
    /// Levels after the cutoff that precede the repeating block.
    pub transient: Vec<LevelRatios>,
    /// One period of the repeating block; empty when the generator stops.
    pub period: Vec<LevelRatios>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub level_cutoff: usize,
    /// Merged eigenvalues of `|D|^{-1}`, strictly decreasing, with multiplicities.
    pub entries: Vec<Eigen>,
    pub levels: Vec<LevelBlock>,
    pub generator: Option<GeneratorData>,
    pub provenance: String,
}

impl Spectrum {
    /// A spectrum given directly by its eigenvalues.
    pub fn external(entries: Vec<Eigen>, provenance: impl Into<String>) -> Result<Self> {
        if entries
            .iter()
            .any(|e| !(e.value > 0.0 && e.value.is_finite()))
        {
            return Err(Error::Invalid("eigenvalues must be positive".into()));
        }
        Ok(Self {
            kind: SpectrumKind::External,
            level_cutoff: 0,
            entries: coalesce(entries)?,
            levels: Vec::new(),
            generator: None,
            provenance: provenance.into(),
        })
    }

    /// Lacunary spectrum of a gap sequence: each gap contributes its
    /// length twice.
    pub fn from_gaps(gaps: &[f64]) -> Result<Self> {
        Self::external(
            gaps.iter()
                .map(|&value| Eigen {
                    value,
                    multiplicity: 2,
                })
                .collect(),
            format!("gap sequence of {} lengths", gaps.len()),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_multiplicity(&self) -> Result<u64> {
        total_multiplicity(&self.entries)
    }

    /// Eigenvalue function with widths equal to multiplicities; the tail
    /// beyond the cutoff is unknown.
    pub fn to_step_function(&self) -> Result<StepFunction> {
        if self.entries.is_empty() {
            return Err(Error::InsufficientData("spectrum has no entries".into()));
        }
        let steps = self
            .entries
            .iter()
            .map(|e| Step {
                value: e.value,
                width: e.multiplicity as f64,
            })
            .collect();
        Ok(StepFunction::from_sorted(steps, true))
    }

    /// Largest eigenvalue a level beyond the cutoff can contribute; every
    /// eigenvalue above it is present. `None` when the generator is unknown.
    pub fn complete_above(&self) -> Option<f64> {
        let g = self.generator.as_ref()?;
        let Some(next) = g.transient.first().or(g.period.first()) else {
            return Some(0.0);
        };
        let widest = |xs: &[f64]| xs.iter().copied().fold(0.0, f64::max);
        let scale: f64 = g.span * g.levels.iter().map(|l| widest(&l.ratios)).product::<f64>();
        let factor = match self.kind {
            SpectrumKind::Lacunary => widest(&next.gaps),
            SpectrumKind::Filled => widest(&next.ratios),
            _ => widest(&next.gaps).max(widest(&next.ratios)),
        };
        Some(scale * factor)
    }

    /// Eigenvalue function of the complete part of the spectrum only.
    pub fn to_complete_step_function(&self) -> Result<StepFunction> {
        let bound = self.complete_above().unwrap_or(0.0);
        let steps: Vec<Step> = self
            .entries
            .iter()
            .take_while(|e| e.value > bound)
            .map(|e| Step {
                value: e.value,
                width: e.multiplicity as f64,
            })
            .collect();
        if steps.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no eigenvalue lies above the completeness bound {bound:e}"
            )));
        }
        Ok(StepFunction::from_sorted(steps, true))
    }

    /// Cumulative multiplicity through each level `0..=cutoff`.
    pub fn level_scales(&self) -> Vec<f64> {
        let top = self.levels.iter().map(|b| b.level).max();
        let Some(top) = top else { return Vec::new() };
        let mut per_level = vec![0.0; top + 1];
        for b in &self.levels {
            per_level[b.level] += b.entries.iter().map(|e| e.multiplicity as f64).sum::<f64>();
        }
        per_level
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .filter(|&x| x > 0.0)
            .collect()
    }
}

fn generator_data(spec: &FractalSpec, cutoff: usize) -> Result<GeneratorData> {
    let ratios_at = |n: usize| -> Result<LevelRatios> {
        Ok(LevelRatios {
            ratios: spec.ratios(n)?,
            gaps: spec.relative_gaps(n)?,
        })
    };
    let levels = (1..=cutoff).map(ratios_at).collect::<Result<Vec<_>>>()?;
    let (transient, period) = match spec.tail_period() {
        Some(k) => {
            let stored = spec.stored_levels().len();
            let start = cutoff.max(stored - k);
            let transient = (cutoff + 1..=start)
                .map(ratios_at)
                .collect::<Result<Vec<_>>>()?;
            let period = (start + 1..=start + k)
                .map(ratios_at)
                .collect::<Result<Vec<_>>>()?;
            (transient, period)
        }
        None => {
            let last = spec.max_level().unwrap_or(cutoff);
            (
                (cutoff + 1..=last)
                    .map(ratios_at)
                    .collect::<Result<Vec<_>>>()?,
                Vec::new(),
            )
        }
    };
    Ok(GeneratorData {
        span: spec.span(),
        levels,
        transient,
        period,
    })
}

fn doubled(items: &[Eigen], scale: f64) -> Result<Vec<Eigen>> {
    items
        .iter()
        .map(|e| {
            Ok(Eigen {
                value: scale * e.value,
                multiplicity: e
                    .multiplicity
                    .checked_mul(2)
                    .ok_or_else(|| overflow("multiplicity"))?,
            })
        })
        .collect()
}

/// Spectrum of `|D|^{-1}` for the lacunary, filled or full triple, cut at
/// `level`: lacunae born at levels `1..=level`, cells of levels `0..=level`,
/// every interval contributing its length with multiplicity two.
pub fn spectrum(
    spec: &FractalSpec,
    kind: SpectrumKind,
    level: usize,
    budget: u64,
) -> Result<Spectrum> {
    let family = kind.family()?;
    let span = spec.span();
    let scales = scale_classes(spec, level, budget)?;
    let mut blocks = Vec::new();
    for (k, classes) in scales.iter().enumerate() {
        if k >= 1 && matches!(family, Family::Lacunae | Family::Both) {
            let gaps = spec.relative_gaps(k)?;
            let mut items = Vec::new();
            for r in &scales[k - 1] {
                for &c in &gaps {
                    items.push(Eigen {
                        value: span * c * r.value,
                        multiplicity: r
                            .multiplicity
                            .checked_mul(2)
                            .ok_or_else(|| overflow("multiplicity"))?,
                    });
                }
            }
            blocks.push(LevelBlock {
                level: k,
                family: BlockFamily::Lacunary,
                entries: coalesce(items)?,
            });
        }
        if matches!(family, Family::Cells | Family::Both) {
            blocks.push(LevelBlock {
                level: k,
                family: BlockFamily::Filled,
                entries: doubled(classes, span)?,
            });
        }
    }
    let entries = coalesce(
        blocks
            .iter()
            .flat_map(|b| b.entries.iter().copied())
            .collect(),
    )?;
    Ok(Spectrum {
        kind,
        level_cutoff: level,
        entries,
        levels: blocks,
        generator: Some(generator_data(spec, level)?),
        provenance: format!("{spec} (hash {})", spec.content_hash()),
    })
}

/// Closed-form eigenvalues of a symmetric fractal at level `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormLevel {
    pub level: usize,
    /// Gaps born at level `k + 1`.
    pub lacunary_value: f64,
    pub lacunary_multiplicity: u64,
    pub filled_value: f64,
    pub filled_multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricClosedForm {
    pub levels: Vec<ClosedFormLevel>,
}

impl SymmetricClosedForm {
    /// Levels `k = 0..=depth`; the lacunary value at `k` needs `p_{k+1}`.
    pub fn new(span: f64, seq: &SymmetricSequences, depth: usize) -> Result<Self> {
        let mut levels = Vec::with_capacity(depth + 1);
        let (mut prod_lambda, mut prod_p) = (1.0_f64, 1u64);
        for k in 0..=depth {
            if k >= 1 {
                let (p, l) = seq.get(k).ok_or(Error::LevelOutOfRange { level: k })?;
                prod_lambda *= l;
                prod_p = prod_p
                    .checked_mul(u64::from(p))
                    .ok_or_else(|| overflow("multiplicity"))?;
            }
            let (p_next, l_next) = seq
                .get(k + 1)
                .ok_or(Error::LevelOutOfRange { level: k + 1 })?;
            if !(f64::from(p_next) * l_next < 1.0) || p_next < 2 {
                return Err(Error::Validation(vec![format!(
                    "level {}: p·λ = {} violates p·λ < 1",
                    k + 1,
                    f64::from(p_next) * l_next
                )]));
            }
            let gap = (1.0 - f64::from(p_next) * l_next) / f64::from(p_next - 1);
            let twice = |m: u64| m.checked_mul(2).ok_or_else(|| overflow("multiplicity"));
            levels.push(ClosedFormLevel {
                level: k,
                lacunary_value: span * gap * prod_lambda,
                lacunary_multiplicity: twice(
                    u64::from(p_next - 1)
                        .checked_mul(prod_p)
                        .ok_or_else(|| overflow("multiplicity"))?,
                )?,
                filled_value: span * prod_lambda,
                filled_multiplicity: twice(prod_p)?,
            });
        }
        Ok(Self { levels })
    }
}

/// Symmetric spectrum cut at `cutoff` from the closed forms, without
/// enumerating cells.
pub fn symmetric_spectrum(
    interval: (f64, f64),
    seq: &SymmetricSequences,
    kind: SpectrumKind,
    cutoff: usize,
) -> Result<Spectrum> {
    let family = kind.family()?;
    let span = interval.1 - interval.0;
    let closed = SymmetricClosedForm::new(span, seq, cutoff)?;
    let mut blocks = Vec::new();
    for c in &closed.levels {
        if c.level >= 1 && matches!(family, Family::Lacunae | Family::Both) {
            let prev = &closed.levels[c.level - 1];
            blocks.push(LevelBlock {
                level: c.level,
                family: BlockFamily::Lacunary,
                entries: vec![Eigen {
                    value: prev.lacunary_value,
                    multiplicity: prev.lacunary_multiplicity,
                }],
            });
        }
        if matches!(family, Family::Cells | Family::Both) {
            blocks.push(LevelBlock {
                level: c.level,
                family: BlockFamily::Filled,
                entries: vec![Eigen {
                    value: c.filled_value,
                    multiplicity: c.filled_multiplicity,
                }],
            });
        }
    }
    let spec = FractalSpec::symmetric(interval, seq.clone());
    let entries = coalesce(
        blocks
            .iter()
            .flat_map(|b| b.entries.iter().copied())
            .collect(),
    )?;
    Ok(Spectrum {
        kind,
        level_cutoff: cutoff,
        entries,
        levels: blocks,
        generator: Some(generator_data(&spec, cutoff)?),
        provenance: format!("{spec} closed form"),
    })
}

/// Eigenvalues `(μ_i^{-2} + μ_j^{-2})^{-1/2}` of the product triple that
/// are at least `cutoff`, with multiplicities multiplied.
pub fn tensor_spectrum(s1: &Spectrum, s2: &Spectrum, cutoff: f64, budget: u64) -> Result<Spectrum> {
    if !(cutoff > 0.0) {
        return Err(Error::Invalid("tensor cutoff must be positive".into()));
    }
    let mut items = Vec::new();
    for a in s1.entries.iter().take_while(|a| a.value >= cutoff) {
        let ia = a.value.powi(-2);
        for b in &s2.entries {
            let value = (ia + b.value.powi(-2)).powf(-0.5);
            if value < cutoff {
                break;
            }
            items.push(Eigen {
                value,
                multiplicity: a
                    .multiplicity
                    .checked_mul(b.multiplicity)
                    .ok_or_else(|| overflow("multiplicity"))?,
            });
            if items.len() as u64 > budget {
                return Err(Error::Budget {
                    what: "tensor pairs",
                    required: items.len() as u128,
                    budget: budget.into(),
                });
            }
        }
    }
    Ok(Spectrum {
        kind: SpectrumKind::Tensor,
        level_cutoff: s1.level_cutoff.min(s2.level_cutoff),
        entries: coalesce(items)?,
        levels: Vec::new(),
        generator: None,
        provenance: format!(
            "tensor of [{}] and [{}] down to eigenvalue {cutoff}, multiplicity constant 1",
            s1.provenance, s2.provenance
        ),
    })
}

/// `sup |f(v) − f(u)| / |v − u|` over the intervals of the truncated triple.
pub fn commutator_norm<F>(
    spec: &FractalSpec,
    kind: SpectrumKind,
    level: usize,
    f: F,
    budget: u64,
) -> Result<f64>
where
    F: Fn(f64) -> Option<f64>,
{
    let eval = |x: f64| f(x).ok_or_else(|| Error::Invalid(format!("function undefined at {x}")));
    let mut best: f64 = 0.0;
    for i in intervals(spec, kind.family()?, level, budget)? {
        let q = (eval(i.right)? - eval(i.left)?).abs() / i.length();
        best = best.max(q);
    }
    Ok(best)
}
