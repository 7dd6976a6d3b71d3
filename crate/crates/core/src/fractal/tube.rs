use serde::Serialize;

use super::gauge::GaugeFunction;
use super::geometry::{gap_classes, largest_length_at, Family};
use super::lebesgue::{fit_slope, lebesgue_zero, MeasureVerdict};
use super::spec::FractalSpec;
use crate::error::{Error, Result};
use crate::multiset::{coalesce, Eigen};
use crate::seqcore::WindowPolicy;

/// Relative band width below which the content is declared measurable.
pub const MINKOWSKI_THRESHOLD: f64 = 0.01;
/// Fewest gaps accepted by the box-dimension estimator.
pub const MIN_GAPS: usize = 16;
/// Exactly ranked gaps needed before the box secants are trusted.
pub const MIN_RANKED_GAPS: f64 = 1000.0;

/// Gap lengths of a compact subset of `[a, b]` with counts, plus what is
/// known about the gaps that were not enumerated.
#[derive(Debug, Clone, Serialize)]
pub struct GapList {
    groups: Vec<Eigen>,
    span: f64,
    fractal_measure: f64,
    /// Total length of gaps beyond the enumeration.
    unresolved_total: f64,
    /// Upper bound on any single unenumerated gap.
    unresolved_max: f64,
    /// Fitted `q` in `ℓ_n ~ n^{−q}` when the tail was extrapolated.
    tail_exponent: Option<f64>,
    #[serde(skip)]
    counts_before: Vec<f64>,
    #[serde(skip)]
    mass_from: Vec<f64>,
}

impl GapList {
    fn assemble(
        groups: Vec<Eigen>,
        span: f64,
        fractal_measure: f64,
        unresolved_total: f64,
        unresolved_max: f64,
        tail_exponent: Option<f64>,
    ) -> Self {
        let mut counts_before = Vec::with_capacity(groups.len() + 1);
        let mut c = 0.0;
        for g in &groups {
            counts_before.push(c);
            c += g.multiplicity as f64;
        }
        counts_before.push(c);
        let mut mass_from = vec![0.0; groups.len() + 1];
        for i in (0..groups.len()).rev() {
            mass_from[i] = mass_from[i + 1] + groups[i].value * groups[i].multiplicity as f64;
        }
        Self {
            groups,
            span,
            fractal_measure,
            unresolved_total,
            unresolved_max,
            tail_exponent,
            counts_before,
            mass_from,
        }
    }

    /// An explicit non-increasing gap sequence of a null set. The tail
    /// past the last gap is extrapolated from a power-law fit of the last
    /// decade.
    pub fn from_lengths(lengths: &[f64]) -> Result<Self> {
        check_gaps(lengths)?;
        let n = lengths.len();
        let first = (n / 10).max(1);
        let stride = ((n - first) / 64).max(1);
        let points: Vec<(f64, f64)> = (first..=n)
            .step_by(stride)
            .map(|i| ((i as f64).ln(), lengths[i - 1].ln()))
            .collect();
        let q = -fit_slope(&points);
        let last = lengths[n - 1];
        let (tail, tail_exponent) = if q > 1.0 {
            (last * n as f64 / (q - 1.0), Some(q))
        } else {
            (0.0, None)
        };
        let groups = coalesce(
            lengths
                .iter()
                .map(|&value| Eigen {
                    value,
                    multiplicity: 1,
                })
                .collect(),
        )?;
        let enumerated: f64 = lengths.iter().sum();
        Ok(Self::assemble(
            groups,
            enumerated + tail,
            0.0,
            tail,
            last,
            tail_exponent,
        ))
    }

    /// Lacunae of a limit fractal up to `level`, with the unenumerated
    /// remainder known from the Lebesgue measure of `F`.
    pub fn from_spec(spec: &FractalSpec, level: usize, budget: u64) -> Result<Self> {
        let groups = coalesce(
            gap_classes(spec, level, budget)?
                .into_iter()
                .flatten()
                .collect(),
        )?;
        let span = spec.span();
        let lebesgue = lebesgue_zero(spec, level.max(64));
        let measure = match lebesgue.verdict {
            MeasureVerdict::Zero => 0.0,
            _ => lebesgue.product * span,
        };
        let enumerated: f64 = groups.iter().map(|g| g.value * g.multiplicity as f64).sum();
        let unresolved_total = (span - measure - enumerated).max(0.0);
        let unresolved_max = largest_length_at(spec, Family::Lacunae, level + 1).unwrap_or(0.0);
        Ok(Self::assemble(
            groups,
            span,
            measure,
            unresolved_total,
            unresolved_max,
            None,
        ))
    }

    pub fn groups(&self) -> &[Eigen] {
        &self.groups
    }

    pub fn count(&self) -> u64 {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn fractal_measure(&self) -> f64 {
        self.fractal_measure
    }

    pub fn unresolved_total(&self) -> f64 {
        self.unresolved_total
    }

    pub fn tail_exponent(&self) -> Option<f64> {
        self.tail_exponent
    }

    /// An ε grid where the tube volume is resolved: two decades above the
    /// largest unenumerated gap, or four decades starting a hundred times
    /// above the last gap when the tail is extrapolated.
    pub fn default_grid(&self) -> EpsGrid {
        let (lo, decades) = match self.tail_exponent {
            Some(_) => (100.0 * self.unresolved_max, 4),
            None => (self.unresolved_max.max(f64::MIN_POSITIVE), 2),
        };
        let eps_min = 10f64.powf(lo.log10().ceil());
        EpsGrid {
            eps_min,
            eps_max: eps_min * 10f64.powi(decades),
            per_decade: 20,
        }
    }

    /// `Σ_n min(ℓ_n, 2ε)` over the enumerated gaps.
    fn covered(&self, eps: f64) -> f64 {
        let two = 2.0 * eps;
        let i = self.groups.partition_point(|g| g.value > two);
        two * self.counts_before[i] + self.mass_from[i]
    }

    /// Limsup surrogate of `log n / |log ℓ_n|`.
    ///
    /// Only gaps longer than every unenumerated one have their true rank.
    /// Over that range, past the policy head, the slope of `log n` against
    /// `|log ℓ_n|` is fitted by least squares: it has the same limit as the
    /// ratio but drops the constant offset of `log ℓ_n` and averages out the
    /// jumps of clustered multiplicities.
    pub fn box_dimension(&self, policy: &WindowPolicy) -> Result<f64> {
        let total = self.count();
        if total < MIN_GAPS as u64 {
            return Err(Error::InsufficientData(format!(
                "box dimension needs at least {MIN_GAPS} gaps, got {total}"
            )));
        }
        let ranked: Vec<(f64, f64)> = self
            .groups
            .iter()
            .enumerate()
            .take_while(|(_, g)| g.value > self.unresolved_max)
            .filter(|(_, g)| g.value < 1.0)
            .map(|(i, g)| (self.counts_before[i + 1].ln(), -g.value.ln()))
            .collect();
        let exact_total = ranked.last().map_or(0.0, |r| r.0);
        if exact_total < MIN_RANKED_GAPS.ln() {
            return Err(Error::InsufficientData(format!(
                "only {:.0} gaps are longer than every unenumerated gap",
                exact_total.exp()
            )));
        }
        let head = exact_total * policy.head_discard_fraction;
        let tail: Vec<(f64, f64)> = ranked.into_iter().filter(|r| r.0 >= head).collect();
        let m = tail.len() as f64;
        let mean_n = tail.iter().map(|r| r.0).sum::<f64>() / m;
        let mean_l = tail.iter().map(|r| r.1).sum::<f64>() / m;
        let cov: f64 = tail.iter().map(|r| (r.0 - mean_n) * (r.1 - mean_l)).sum();
        let var: f64 = tail.iter().map(|r| (r.1 - mean_l).powi(2)).sum();
        let slope = cov / var;
        if slope.is_finite() {
            Ok(slope)
        } else {
            Err(Error::InsufficientData(
                "the tail of exactly ranked gaps is a single length".into(),
            ))
        }
    }
}

fn check_gaps(lengths: &[f64]) -> Result<()> {
    if lengths.len() < MIN_GAPS {
        return Err(Error::InsufficientData(format!(
            "at least {MIN_GAPS} gaps are required, got {}",
            lengths.len()
        )));
    }
    if lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::Invalid("gap lengths must be positive".into()));
    }
    if lengths.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Invalid("gap lengths must be non-increasing".into()));
    }
    if lengths[0] == lengths[lengths.len() - 1] {
        return Err(Error::Invalid("gap lengths must decrease to zero".into()));
    }
    Ok(())
}

/// Upper box dimension from a non-increasing gap sequence.
pub fn box_dim_from_gaps(gaps: &[f64], policy: &WindowPolicy) -> Result<f64> {
    check_gaps(gaps)?;
    let groups = coalesce(
        gaps.iter()
            .map(|&value| Eigen {
                value,
                multiplicity: 1,
            })
            .collect(),
    )?;
    GapList::assemble(groups, gaps.iter().sum(), 0.0, 0.0, 0.0, None).box_dimension(policy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeVolume {
    pub value: f64,
    /// Zero when every unenumerated gap is at most `2ε`.
    pub remainder_bound: f64,
}

/// `vol S_ε(F) = 2ε + |F| + Σ_n min(ℓ_n, 2ε)`.
pub fn tube_volume(gaps: &GapList, eps: f64) -> Result<TubeVolume> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Invalid(format!("ε must be positive, got {eps}")));
    }
    let remainder_bound = if gaps.unresolved_max <= 2.0 * eps {
        0.0
    } else {
        gaps.unresolved_total
    };
    Ok(TubeVolume {
        value: 2.0 * eps + gaps.fractal_measure + gaps.covered(eps) + gaps.unresolved_total,
        remainder_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsGrid {
    pub eps_min: f64,
    pub eps_max: f64,
    pub per_decade: usize,
}

impl EpsGrid {
    pub fn points(&self) -> Vec<f64> {
        let decades = (self.eps_max / self.eps_min).log10();
        let count = (decades * self.per_decade as f64).round().max(1.0) as usize;
        (0..=count)
            .map(|i| self.eps_min * 10f64.powf(decades * i as f64 / count as f64))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentTrend {
    Stationary,
    Divergent,
    Vanishing,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinkowskiReport {
    /// Geometric mean over the smallest decade of `ε`.
    pub estimate: f64,
    pub band: (f64, f64),
    pub relative_band: f64,
    pub measurable: bool,
    pub previous_relative_band: Option<f64>,
    /// Whether the band of the last decade reproduces that of the one before.
    pub stable_band: Option<bool>,
    pub trend: ContentTrend,
    pub max_remainder: f64,
    pub fractal_measure_subtracted: f64,
    pub samples: Vec<(f64, f64)>,
}

fn band(values: &[f64]) -> (f64, f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gm = (values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64).exp();
    (lo, hi, gm)
}

/// Evaluates `(vol S_ε(F) − |F|)·h(ε)/ε` on the grid.
pub fn minkowski_content(
    gaps: &GapList,
    gauge: &GaugeFunction,
    grid: &EpsGrid,
) -> Result<MinkowskiReport> {
    if !(grid.eps_min > 0.0
        && grid.eps_max > grid.eps_min * 10.0 * (1.0 - 1e-12)
        && grid.per_decade >= 2)
    {
        return Err(Error::Invalid(
            "ε grid must span at least one decade with two points per decade".into(),
        ));
    }
    let eps = grid.points();
    gauge.check_increasing(&eps)?;
    let mut samples = Vec::with_capacity(eps.len());
    let mut max_remainder: f64 = 0.0;
    for &e in &eps {
        let vol = tube_volume(gaps, e)?;
        max_remainder = max_remainder.max(vol.remainder_bound);
        samples.push((e, (vol.value - gaps.fractal_measure) * gauge.h(e) / e));
    }
    let decade = |lo: f64, hi: f64| -> Vec<f64> {
        samples
            .iter()
            .filter(|s| s.0 >= lo * (1.0 - 1e-12) && s.0 <= hi * (1.0 + 1e-12))
            .map(|s| s.1)
            .collect()
    };
    let last = decade(grid.eps_min, grid.eps_min * 10.0);
    let (lo, hi, estimate) = band(&last);
    let relative_band = (hi - lo) / estimate;
    let previous = (grid.eps_max >= grid.eps_min * 100.0 * (1.0 - 1e-12))
        .then(|| decade(grid.eps_min * 10.0, grid.eps_min * 100.0));
    let (previous_relative_band, stable_band, trend) = match previous {
        Some(prev) => {
            let (plo, phi, pgm) = band(&prev);
            let prb = (phi - plo) / pgm;
            let stable = (relative_band - prb).abs() <= 0.25 * relative_band.max(prb)
                || relative_band.max(prb) < MINKOWSKI_THRESHOLD;
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let drift = mean(&last) / mean(&prev) - 1.0;
            let trend = if drift > 0.05 {
                ContentTrend::Divergent
            } else if drift < -0.05 {
                ContentTrend::Vanishing
            } else {
                ContentTrend::Stationary
            };
            (Some(prb), Some(stable), trend)
        }
        None => (None, None, ContentTrend::Stationary),
    };
    Ok(MinkowskiReport {
        estimate,
        band: (lo, hi),
        relative_band,
        measurable: relative_band < MINKOWSKI_THRESHOLD && trend == ContentTrend::Stationary,
        previous_relative_band,
        stable_band,
        trend,
        max_remainder,
        fractal_measure_subtracted: gaps.fractal_measure,
        samples,
    })
}
