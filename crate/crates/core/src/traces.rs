//! Singular traces evaluated along concrete limit procedures.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::dirac::{Spectrum, SpectrumKind};
use crate::error::{Error, Result};
use crate::fractal::{
    intervals, largest_length_at, minkowski_content, EpsGrid, FractalSpec, GapList, GaugeFunction,
    MinkowskiReport,
};
use crate::functions::TestFunction;
use crate::seqcore::{
    eccentricity, integral_s, Branch, EccentricityVerdict, StepFunction, WindowPolicy,
};

/// Scales below `x_max^ANCHOR_EXPONENT` only serve as the anchor of the
/// increments, so the constant part of `S` cancels.
pub const ANCHOR_EXPONENT: f64 = 0.4;

/// A stand-in for a generalized limit: which scales `x_k` to read and how
/// to combine the ratios found there.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitProcedure {
    /// Difference of late-half and early-half averages over a log grid.
    CesaroLog { points: usize },
    /// `x_k = x0 · ratio^k`, reading the last value.
    GeometricSubsequence { x0: f64, ratio: f64 },
    /// `x_k` = cumulative multiplicity through level `k`.
    LevelSequence,
    /// `x_k` where the eccentricity test finds `xμ(x)/S(x)` small.
    WitnessSequence,
}

impl LimitProcedure {
    pub fn cesaro_log() -> Self {
        LimitProcedure::CesaroLog { points: 64 }
    }

    pub fn geometric() -> Self {
        LimitProcedure::GeometricSubsequence {
            x0: 1.0,
            ratio: 2.0,
        }
    }

    /// Cesàro, geometric and level procedures.
    pub fn standard() -> Vec<Self> {
        vec![
            Self::cesaro_log(),
            Self::geometric(),
            LimitProcedure::LevelSequence,
        ]
    }
}

impl fmt::Display for LimitProcedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitProcedure::CesaroLog { points } => write!(f, "cesaro_log:{points}"),
            LimitProcedure::GeometricSubsequence { x0, ratio } => {
                write!(f, "geometric:{x0},{ratio}")
            }
            LimitProcedure::LevelSequence => f.write_str("level"),
            LimitProcedure::WitnessSequence => f.write_str("witness"),
        }
    }
}

/// Parses `cesaro_log[:points]`, `geometric[:x0,ratio]`, `level` or `witness`.
impl FromStr for LimitProcedure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = s.split_once(':').unwrap_or((s, ""));
        let bad = || Error::Invalid(format!("bad limit procedure {s:?}"));
        let proc = match (head, arg) {
            ("cesaro_log", "") => Self::cesaro_log(),
            ("cesaro_log", n) => LimitProcedure::CesaroLog {
                points: n.parse().map_err(|_| bad())?,
            },
            ("geometric", "") => Self::geometric(),
            ("geometric", params) => {
                let (x0, ratio) = params.split_once(',').ok_or_else(bad)?;
                LimitProcedure::GeometricSubsequence {
                    x0: x0.parse().map_err(|_| bad())?,
                    ratio: ratio.parse().map_err(|_| bad())?,
                }
            }
            ("level", "") => LimitProcedure::LevelSequence,
            ("witness", "") => LimitProcedure::WitnessSequence,
            _ => return Err(bad()),
        };
        match proc {
            LimitProcedure::CesaroLog { points } if points < 4 => Err(bad()),
            LimitProcedure::GeometricSubsequence { x0, ratio } if !(x0 > 0.0 && ratio > 1.0) => {
                Err(bad())
            }
            p => Ok(p),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub value: f64,
    pub procedure: LimitProcedure,
    pub anchor: f64,
    pub scale_range: (f64, f64),
    pub samples: usize,
    /// Range of the anchored ratios over the last decade of scales.
    pub spread: f64,
    pub warning: Option<String>,
}

/// Where the scales of level and witness procedures come from.
pub struct ScaleSource<'a> {
    pub x_max: f64,
    pub levels: &'a [f64],
    pub witness: Box<dyn FnOnce() -> Result<Vec<f64>> + 'a>,
}

fn resolve_scales(proc: &LimitProcedure, src: ScaleSource<'_>) -> Result<Vec<f64>> {
    let x_max = src.x_max;
    let anchor = x_max.powf(ANCHOR_EXPONENT);
    let mut xs: Vec<f64> = match proc {
        LimitProcedure::CesaroLog { points } => {
            let (lo, hi) = (anchor.ln(), x_max.ln());
            (0..*points)
                .map(|i| (lo + (hi - lo) * i as f64 / (*points - 1) as f64).exp())
                .collect()
        }
        LimitProcedure::GeometricSubsequence { x0, ratio } => {
            std::iter::successors(Some(*x0), |x| Some(x * ratio))
                .take_while(|&x| x <= x_max * (1.0 + 1e-12))
                .collect()
        }
        LimitProcedure::LevelSequence => {
            if src.levels.is_empty() {
                return Err(Error::InsufficientData(
                    "no level structure for the level procedure".into(),
                ));
            }
            src.levels.to_vec()
        }
        LimitProcedure::WitnessSequence => (src.witness)()?,
    };
    xs.retain(|&x| x > 1.0 && x <= x_max * (1.0 + 1e-12));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    Ok(xs)
}

/// Emulated `Lim_ω` of `num(x)/den(x)` along the procedure's scales,
/// using increments from an anchor scale.
fn emulate(
    proc: &LimitProcedure,
    xs: &[f64],
    num: &dyn Fn(f64) -> f64,
    den: &dyn Fn(f64) -> f64,
    x_max: f64,
) -> Result<TraceReport> {
    let target = x_max.powf(ANCHOR_EXPONENT).ln();
    let anchor_index = match proc {
        LimitProcedure::CesaroLog { .. } => 0,
        _ => {
            let usable = xs.len().saturating_sub(2);
            (0..usable)
                .min_by(|&i, &j| {
                    (xs[i].ln() - target)
                        .abs()
                        .total_cmp(&(xs[j].ln() - target).abs())
                })
                .unwrap_or(0)
        }
    };
    let tail = &xs[(anchor_index + 1).min(xs.len())..];
    if tail.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{proc} has {} scales beyond the anchor, need at least 2",
            tail.len()
        )));
    }
    let xa = xs[anchor_index];
    let (na, da) = (num(xa), den(xa));
    let anchored: Vec<(f64, f64)> = tail
        .iter()
        .map(|&x| (x, (num(x) - na) / (den(x) - da)))
        .collect();
    let value = match proc {
        LimitProcedure::CesaroLog { .. } => {
            let half = xs.len() / 2;
            let mean = |f: &dyn Fn(f64) -> f64, part: &[f64]| {
                part.iter().map(|&x| f(x)).sum::<f64>() / part.len() as f64
            };
            let (early, late) = xs.split_at(half);
            (mean(num, late) - mean(num, early)) / (mean(den, late) - mean(den, early))
        }
        _ => anchored.last().expect("nonempty").1,
    };
    let x_last = anchored.last().expect("nonempty").0;
    let mut decade: Vec<f64> = anchored
        .iter()
        .filter(|a| a.0 >= x_last / 10.0)
        .map(|a| a.1)
        .collect();
    if decade.len() < 2 {
        decade = anchored[anchored.len() - 2..].iter().map(|a| a.1).collect();
    }
    let spread = decade.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - decade.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TraceReport {
        value,
        procedure: proc.clone(),
        anchor: xa,
        scale_range: (tail[0], x_last),
        samples: tail.len(),
        spread,
        warning: None,
    })
}

fn witness_of(mu: &StepFunction, policy: &WindowPolicy) -> Result<Vec<f64>> {
    let report = eccentricity(mu, 2.0, policy)?;
    if report.witness.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no witness scales (eccentricity verdict {:?})",
            report.verdict
        )));
    }
    Ok(report.witness)
}

/// `Lim_ω S↑_μ(x) / log x` for a step function `μ`.
pub fn dixmier_step(
    mu: &StepFunction,
    levels: &[f64],
    proc: &LimitProcedure,
    policy: &WindowPolicy,
) -> Result<TraceReport> {
    if mu.is_empty() {
        return Err(Error::InsufficientData("empty eigenvalue function".into()));
    }
    let x_max = mu.total_width();
    let xs = resolve_scales(
        proc,
        ScaleSource {
            x_max,
            levels,
            witness: Box::new(|| witness_of(mu, policy)),
        },
    )?;
    let num = |x: f64| mu.integral_up(x.min(x_max)).unwrap_or(f64::NAN);
    emulate(proc, &xs, &num, &|x: f64| x.ln(), x_max)
}

/// Dixmier trace of `|D|^{-exponent}`.
pub fn dixmier(
    s: &Spectrum,
    exponent: f64,
    proc: &LimitProcedure,
    policy: &WindowPolicy,
) -> Result<TraceReport> {
    if !(exponent > 0.0) {
        return Err(Error::Invalid(format!(
            "exponent must be positive, got {exponent}"
        )));
    }
    let mu = s.to_step_function()?.power(exponent)?;
    dixmier_step(&mu, &s.level_scales(), proc, policy)
}

/// `Lim_ω S_target(x_k) / S_reference(x_k)`, the singular trace normalized
/// on `reference`.
pub fn singular_trace_ratio(
    reference: &StepFunction,
    target: &StepFunction,
    levels: &[f64],
    proc: &LimitProcedure,
    policy: &WindowPolicy,
) -> Result<TraceReport> {
    if reference.is_empty() || target.is_empty() {
        return Err(Error::InsufficientData("empty eigenvalue function".into()));
    }
    let ecc = eccentricity(reference, 2.0, policy)?;
    let warning = (ecc.verdict != EccentricityVerdict::Eccentric)
        .then(|| format!("reference eccentricity verdict is {:?}", ecc.verdict));
    let x_max = reference.total_width().min(target.total_width());
    let witness = ecc.witness.clone();
    let xs = resolve_scales(
        proc,
        ScaleSource {
            x_max,
            levels,
            witness: Box::new(move || {
                if witness.is_empty() {
                    Err(Error::InsufficientData("no witness scales".into()))
                } else {
                    Ok(witness)
                }
            }),
        },
    )?;
    let mut report = match ecc.branch {
        Branch::Down => {
            let s = |mu: &StepFunction, x: f64| {
                integral_s(mu, x, policy)
                    .ok()
                    .and_then(|r| r.value)
                    .unwrap_or(f64::NAN)
            };
            let ratios: Vec<f64> = xs.iter().map(|&x| s(target, x) / s(reference, x)).collect();
            if ratios.len() < 2 {
                return Err(Error::InsufficientData("fewer than 2 scales".into()));
            }
            let tail = &ratios[ratios.len() / 2..];
            TraceReport {
                value: *ratios.last().expect("nonempty"),
                procedure: proc.clone(),
                anchor: xs[0],
                scale_range: (xs[0], *xs.last().expect("nonempty")),
                samples: xs.len(),
                spread: tail.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                    - tail.iter().copied().fold(f64::INFINITY, f64::min),
                warning: None,
            }
        }
        _ => {
            let num = |x: f64| target.integral_up(x.min(x_max)).unwrap_or(f64::NAN);
            let den = |x: f64| reference.integral_up(x.min(x_max)).unwrap_or(f64::NAN);
            emulate(proc, &xs, &num, &den, x_max)?
        }
    };
    report.warning = warning;
    Ok(report)
}

/// Values sorted non-increasing with prefix sums, evaluated as a step
/// function of unit widths.
struct PartialSums {
    values: Vec<f64>,
    prefix: Vec<f64>,
}

impl PartialSums {
    /// `values` must be nonnegative, so their bit patterns sort like the values.
    fn new(values: Vec<f64>) -> Self {
        let mut bits: Vec<u64> = values.into_iter().map(f64::to_bits).collect();
        bits.par_sort_unstable_by(|a, b| b.cmp(a));
        let values: Vec<f64> = bits.into_iter().map(f64::from_bits).collect();
        let mut prefix = Vec::with_capacity(values.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for v in &values {
            acc += v;
            prefix.push(acc);
        }
        Self { values, prefix }
    }

    fn at(&self, x: f64) -> f64 {
        let k = (x.floor() as usize).min(self.values.len());
        let frac = if k < self.values.len() {
            (x - k as f64) * self.values[k]
        } else {
            0.0
        };
        self.prefix[k] + frac
    }

    fn count_above(&self, threshold: f64) -> usize {
        self.values.partition_point(|&v| v > threshold)
    }

    fn to_step_function(&self) -> Result<StepFunction> {
        Ok(
            StepFunction::build(self.values.iter().filter(|&&v| v > 0.0).map(|&v| (v, 1.0)))?
                .with_truncation(true),
        )
    }
}

/// The Hausdorff–Besicovitch functional `f ↦ τ_ω(f|D|^{-s}) / τ_ω(|D|^{-s})`
/// of one truncated triple, ready to be read along any limit procedure.
///
/// Each interval `I` carries the eigenvalue pair `|I|^s f(u), |I|^s f(v)`
/// at its endpoints; sign-changing `f` is split into positive and negative parts.
pub struct HbFunctional {
    reference: PartialSums,
    parts: Vec<(f64, PartialSums)>,
    levels: Vec<f64>,
    /// Eigenvalues above this bound are all present in the truncation.
    beyond: f64,
}

impl HbFunctional {
    pub fn new(
        spec: &FractalSpec,
        kind: SpectrumKind,
        s: f64,
        f: &TestFunction,
        level: usize,
        budget: u64,
    ) -> Result<Self> {
        let family = kind.family()?;
        let ivs = intervals(spec, family, level, budget)?;
        let mut reference = Vec::with_capacity(2 * ivs.len());
        let mut plus = Vec::with_capacity(2 * ivs.len());
        let mut minus = Vec::new();
        let mut levels = vec![0.0; level + 1];
        for i in &ivs {
            let w = i.length().powf(s);
            levels[i.level] += 2.0;
            for x in [i.left, i.right] {
                let v = f.eval_or_err(x)?;
                reference.push(w);
                if v > 0.0 {
                    plus.push(w * v);
                } else if v < 0.0 {
                    minus.push(-w * v);
                }
            }
        }
        let levels = levels
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .collect();
        let beyond = match spec.max_level() {
            Some(m) if m <= level => 0.0,
            _ => largest_length_at(spec, family, level + 1)?.powf(s),
        };
        let parts = [(1.0, plus), (-1.0, minus)]
            .into_iter()
            .filter(|(_, p)| !p.is_empty())
            .map(|(sign, p)| (sign, PartialSums::new(p)))
            .collect();
        Ok(Self {
            reference: PartialSums::new(reference),
            parts,
            levels,
            beyond,
        })
    }

    /// Scales up to which the part's sorted eigenvalues are complete.
    fn valid_range(&self, part: &PartialSums) -> f64 {
        let x_ref = self.reference.count_above(self.beyond);
        let f_max = part.values[0] / self.reference.values[0];
        x_ref.min(part.count_above(self.beyond * f_max).max(1)) as f64
    }

    pub fn evaluate(&self, proc: &LimitProcedure, policy: &WindowPolicy) -> Result<TraceReport> {
        let mut total: Option<TraceReport> = None;
        for (sign, part) in &self.parts {
            let x_max = self.valid_range(part);
            let xs = resolve_scales(
                proc,
                ScaleSource {
                    x_max,
                    levels: &self.levels,
                    witness: Box::new(|| witness_of(&self.reference.to_step_function()?, policy)),
                },
            )?;
            let r = emulate(proc, &xs, &|x| part.at(x), &|x| self.reference.at(x), x_max)?;
            total = Some(match total {
                None => TraceReport {
                    value: sign * r.value,
                    ..r
                },
                Some(t) => TraceReport {
                    value: t.value + sign * r.value,
                    spread: t.spread + r.spread,
                    ..t
                },
            });
        }
        Ok(total.unwrap_or(TraceReport {
            value: 0.0,
            procedure: proc.clone(),
            anchor: 0.0,
            scale_range: (0.0, 0.0),
            samples: 0,
            spread: 0.0,
            warning: Some("function vanishes at every endpoint".into()),
        }))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn hb_functional(
    spec: &FractalSpec,
    kind: SpectrumKind,
    s: f64,
    f: &TestFunction,
    proc: &LimitProcedure,
    level: usize,
    budget: u64,
    policy: &WindowPolicy,
) -> Result<TraceReport> {
    HbFunctional::new(spec, kind, s, f, level, budget)?.evaluate(proc, policy)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpreadReport {
    pub reports: Vec<TraceReport>,
    pub spread: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Largest difference of the functional between procedures.
#[allow(clippy::too_many_arguments)]
pub fn measurability_spread(
    spec: &FractalSpec,
    kind: SpectrumKind,
    s: f64,
    f: &TestFunction,
    procedures: &[LimitProcedure],
    level: usize,
    budget: u64,
    policy: &WindowPolicy,
) -> Result<SpreadReport> {
    if procedures.len() < 2 {
        return Err(Error::Invalid(
            "measurability needs at least two procedures".into(),
        ));
    }
    let hb = HbFunctional::new(spec, kind, s, f, level, budget)?;
    let reports = procedures
        .iter()
        .map(|p| hb.evaluate(p, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(spread_of(reports, policy.tolerance))
}

pub fn spread_of(reports: Vec<TraceReport>, tolerance: f64) -> SpreadReport {
    let hi = reports
        .iter()
        .map(|r| r.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = reports
        .iter()
        .map(|r| r.value)
        .fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    SpreadReport {
        reports,
        spread,
        tolerance,
        pass: spread < tolerance,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeTraceReport {
    pub exponent: f64,
    pub trace: TraceReport,
    pub minkowski: Option<MinkowskiReport>,
    /// `2^d (1 − d) M_h`, the value the trace should equal for
    /// Minkowski-measurable sets.
    pub predicted: Option<f64>,
}

/// `Lim_ω S_a(x)/S_{g^d}(x)` with `a = |D_ℓ|^{-d}` built from the gaps.
pub fn gauge_trace(
    gaps: &[f64],
    gauge: &GaugeFunction,
    proc: &LimitProcedure,
    grid: Option<&EpsGrid>,
    policy: &WindowPolicy,
) -> Result<GaugeTraceReport> {
    let d = gauge
        .exponent()
        .filter(|d| *d > 0.0 && *d < 1.0)
        .ok_or_else(|| Error::Invalid("gauge exponent must lie in (0, 1)".into()))?;
    let mu = Spectrum::from_gaps(gaps)?.to_step_function()?.power(d)?;
    let x_max = mu.total_width();
    let n = x_max.ceil() as usize;
    let reference = (1..=n)
        .into_par_iter()
        .map(|k| gauge.g(k as f64).map(|g| g.powf(d)))
        .collect::<Result<Vec<_>>>()?;
    let reference = PartialSums::new(reference);
    let xs = resolve_scales(
        proc,
        ScaleSource {
            x_max,
            levels: &[],
            witness: Box::new(|| witness_of(&mu, policy)),
        },
    )?;
    let trace = emulate(
        proc,
        &xs,
        &|x| mu.integral_up(x.min(x_max)).unwrap_or(f64::NAN),
        &|x| reference.at(x),
        x_max,
    )?;
    let minkowski = match grid {
        Some(grid) => Some(minkowski_content(
            &GapList::from_lengths(gaps)?,
            gauge,
            grid,
        )?),
        None => None,
    };
    let predicted = minkowski
        .as_ref()
        .map(|m| 2f64.powf(d) * (1.0 - d) * m.estimate);
    Ok(GaugeTraceReport {
        exponent: d,
        trace,
        minkowski,
        predicted,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HalvingReport {
    /// `(n, μ_n / μ_{2n})` over a log grid of the tail.
    pub ratios: Vec<(f64, f64)>,
    pub estimate: f64,
    pub band: (f64, f64),
    pub stable: bool,
    pub implied_dimension: Option<f64>,
}

/// Estimate of `lim μ_n / μ_{2n}` and the dimension `log 2 / log(lim)` it implies.
pub fn halving_ratio(mu: &StepFunction, policy: &WindowPolicy) -> Result<HalvingReport> {
    policy.validate()?;
    if mu.is_empty() {
        return Err(Error::InsufficientData("empty eigenvalue function".into()));
    }
    let x_max = mu.total_width();
    let lo = policy.head(mu.right_ends()[0].ln(), x_max.ln()).exp();
    let hi = (x_max - 1.0) / 2.0;
    let count = policy.t_grid.count;
    if !(hi > lo) || hi.ln() - lo.ln() < 2.0 * policy.t_grid.base.ln() {
        return Err(Error::InsufficientData(format!(
            "known range up to {x_max} is too short for halving ratios"
        )));
    }
    let mut ratios: Vec<(f64, f64)> = (0..count)
        .map(|i| {
            (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64)
                .exp()
                .floor()
        })
        .map(|n| Ok((n, mu.mu_at(n)? / mu.mu_at(2.0 * n)?)))
        .collect::<Result<_>>()?;
    ratios.dedup_by(|a, b| a.0 == b.0);
    let mut sorted: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    sorted.sort_by(f64::total_cmp);
    let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
    let estimate = q(0.5);
    let band = (q(0.1), q(0.9));
    let stable = (band.1 - band.0) <= policy.stability_band * estimate;
    Ok(HalvingReport {
        ratios,
        estimate,
        band,
        stable,
        implied_dimension: (stable && estimate > 1.0).then(|| 2f64.ln() / estimate.ln()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::spectrum;
    use crate::fractal::DEFAULT_BUDGET;
    use std::f64::consts::LN_2;

    fn d_cantor() -> f64 {
        2f64.ln() / 3f64.ln()
    }

    #[test]
    fn procedure_parsing() {
        assert_eq!(
            "level".parse::<LimitProcedure>().unwrap(),
            LimitProcedure::LevelSequence
        );
        assert_eq!(
            "geometric:1,3".parse::<LimitProcedure>().unwrap(),
            LimitProcedure::GeometricSubsequence {
                x0: 1.0,
                ratio: 3.0
            }
        );
        assert!("geometric:1,0.5".parse::<LimitProcedure>().is_err());
        assert!("cesaro_log:2".parse::<LimitProcedure>().is_err());
    }

    #[test]
    fn cantor_dixmier() {
        let policy = WindowPolicy::default();
        let s = spectrum(
            &FractalSpec::cantor(),
            SpectrumKind::Lacunary,
            30,
            DEFAULT_BUDGET,
        )
        .unwrap();
        for proc in LimitProcedure::standard() {
            let r = dixmier(&s, d_cantor(), &proc, &policy).unwrap();
            assert!((r.value * LN_2 - 1.0).abs() < 0.01, "{proc}: {}", r.value);
        }
        let r = dixmier(&s, 1.0, &LimitProcedure::cesaro_log(), &policy).unwrap();
        assert!(r.value.abs() < 1e-3);
    }

    #[test]
    fn ratio_normalization() {
        let policy = WindowPolicy::default();
        let s = spectrum(
            &FractalSpec::cantor(),
            SpectrumKind::Lacunary,
            25,
            DEFAULT_BUDGET,
        )
        .unwrap();
        let mu = s.to_step_function().unwrap().power(d_cantor()).unwrap();
        let r = singular_trace_ratio(
            &mu,
            &mu,
            &s.level_scales(),
            &LimitProcedure::LevelSequence,
            &policy,
        )
        .unwrap();
        assert_eq!(r.value, 1.0);
        let twice = mu.scaled(2.0).unwrap();
        let r = singular_trace_ratio(
            &mu,
            &twice,
            &s.level_scales(),
            &LimitProcedure::cesaro_log(),
            &policy,
        )
        .unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hb_constant_and_indicator() {
        let policy = WindowPolicy::default();
        let spec = FractalSpec::cantor();
        let proc = LimitProcedure::LevelSequence;
        let one = hb_functional(
            &spec,
            SpectrumKind::Lacunary,
            d_cantor(),
            &TestFunction::constant(1.0),
            &proc,
            14,
            DEFAULT_BUDGET,
            &policy,
        )
        .unwrap();
        assert_eq!(one.value, 1.0);
        let f = TestFunction::indicator(0.0, 1.0 / 3.0).unwrap();
        let half = hb_functional(
            &spec,
            SpectrumKind::Full,
            d_cantor(),
            &f,
            &proc,
            18,
            DEFAULT_BUDGET,
            &policy,
        )
        .unwrap();
        assert!((half.value - 0.5).abs() < 1e-3, "{}", half.value);
    }

    #[test]
    fn halving_of_reciprocal() {
        let mu = StepFunction::build((1..=100_000).map(|n| (1.0 / n as f64, 1.0)))
            .unwrap()
            .with_truncation(true);
        let r = halving_ratio(&mu, &WindowPolicy::default()).unwrap();
        assert!((r.estimate - 2.0).abs() < 0.01 && r.stable);
        assert!((r.implied_dimension.unwrap() - 1.0).abs() < 0.01);
    }
}
