//! Homogeneous measures on limit fractals and integration against them.

use serde::Serialize;

use crate::dirac::SpectrumKind;
use crate::error::{Error, Result};
use crate::fractal::{cells_at_level, FractalSpec};
use crate::functions::TestFunction;
use crate::seqcore::WindowPolicy;
use crate::traces::{HbFunctional, LimitProcedure};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedCell {
    pub sigma: Vec<u32>,
    pub interval: (f64, f64),
    pub weight: f64,
}

/// Masses of the level-`n` cells under the homogeneous measure `μ_α`.
#[derive(Debug, Clone, Serialize)]
pub struct CellMeasure {
    pub level: usize,
    pub alpha: f64,
    /// Sorted by left endpoint.
    pub cells: Vec<WeightedCell>,
    pub warning: Option<String>,
}

impl CellMeasure {
    pub fn total(&self) -> f64 {
        self.cells.iter().map(|c| c.weight).sum()
    }

    pub fn weight_of(&self, sigma: &[u32]) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.sigma == sigma)
            .map(|c| c.weight)
    }

    /// Largest `|w(σ) − Σ_children w|` against a measure one level finer.
    pub fn refinement_defect(&self, finer: &CellMeasure) -> Result<f64> {
        if finer.level != self.level + 1 {
            return Err(Error::Invalid("refinement needs consecutive levels".into()));
        }
        let mut children = std::collections::BTreeMap::<&[u32], f64>::new();
        for c in &finer.cells {
            *children.entry(&c.sigma[..self.level]).or_default() += c.weight;
        }
        Ok(self
            .cells
            .iter()
            .map(|c| (c.weight - children.get(&c.sigma[..]).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max))
    }
}

/// `μ_α(w_σ) = λ_σ^α / Σ_{|σ'|=n} λ_{σ'}^α`, computed level by level as
/// `∏_j λ_{j,σ_j}^α / Σ_i λ_{j,i}^α`.
pub fn homogeneous_measure(
    spec: &FractalSpec,
    alpha: f64,
    level: usize,
    budget: u64,
) -> Result<CellMeasure> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Invalid(format!(
            "alpha must be a nonnegative real, got {alpha}"
        )));
    }
    let warning =
        (!(alpha > 0.0 && alpha < 1.0)).then(|| format!("alpha = {alpha} lies outside (0, 1)"));
    let normalized = (1..=level)
        .map(|k| {
            let ratios = spec.ratios(k)?;
            let z: f64 = ratios.iter().map(|l| l.powf(alpha)).sum();
            Ok(ratios.iter().map(|l| l.powf(alpha) / z).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let cells = cells_at_level(spec, level, budget)?
        .into_iter()
        .map(|c| WeightedCell {
            weight: c
                .sigma
                .iter()
                .zip(&normalized)
                .map(|(&i, w)| w[i as usize])
                .product(),
            sigma: c.sigma,
            interval: c.interval,
        })
        .collect();
    Ok(CellMeasure {
        level,
        alpha,
        cells,
        warning,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error_bound: f64,
}

/// `Σ_σ f(left(σ)) μ(σ)`; the bound sums each cell's weight times the
/// oscillation of `f` over it, taking a full jump for cells that straddle one.
pub fn integrate(measure: &CellMeasure, f: &TestFunction) -> Result<Integral> {
    let mut value = 0.0;
    let mut error_bound = 0.0;
    for c in &measure.cells {
        let (lo, hi) = c.interval;
        value += c.weight * f.eval_or_err(lo)?;
        let osc = match f.oscillation(lo, hi) {
            Some(o) => o,
            None => match f {
                TestFunction::Indicator { .. } => 1.0,
                _ => {
                    return Err(Error::Invalid(format!(
                        "no oscillation bound for {f} on [{lo}, {hi}]"
                    )))
                }
            },
        };
        error_bound += c.weight * osc;
    }
    Ok(Integral { value, error_bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct HbComparison {
    pub hb: f64,
    pub integral: Integral,
    pub difference: f64,
    pub pass: bool,
}

/// The trace state and the integral against `μ_s` side by side.
#[allow(clippy::too_many_arguments)]
pub fn hb_vs_measure(
    spec: &FractalSpec,
    kind: SpectrumKind,
    s: f64,
    f: &TestFunction,
    proc: &LimitProcedure,
    level: usize,
    budget: u64,
    policy: &WindowPolicy,
) -> Result<HbComparison> {
    let hb = HbFunctional::new(spec, kind, s, f, level, budget)?
        .evaluate(proc, policy)?
        .value;
    let integral = integrate(&homogeneous_measure(spec, s, level, budget)?, f)?;
    let difference = (hb - integral.value).abs();
    Ok(HbComparison {
        hb,
        integral,
        difference,
        pass: difference < policy.tolerance + integral.error_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{Similarity, DEFAULT_BUDGET};

    #[test]
    fn cantor_weights() {
        let m = homogeneous_measure(&FractalSpec::cantor(), 0.3, 5, DEFAULT_BUDGET).unwrap();
        assert!(m.cells.iter().all(|c| c.weight == 0.5f64.powi(5)));
        let finer = homogeneous_measure(&FractalSpec::cantor(), 0.3, 6, DEFAULT_BUDGET).unwrap();
        assert!(m.refinement_defect(&finer).unwrap() < 1e-15);
    }

    #[test]
    fn two_ratio_golden_weight() {
        let spec = FractalSpec::self_similar(
            (0.0, 1.0),
            vec![Similarity::new(0.5, 0.0), Similarity::new(0.25, 0.75)],
        );
        let d = crate::zeta::similarity_dimension(&[0.5, 0.25]).unwrap();
        let m = homogeneous_measure(&spec, d, 1, DEFAULT_BUDGET).unwrap();
        assert!((m.cells[0].weight - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn integrals() {
        let m = homogeneous_measure(&FractalSpec::cantor(), 0.63, 4, DEFAULT_BUDGET).unwrap();
        let one = integrate(&m, &TestFunction::constant(3.0)).unwrap();
        assert_eq!((one.value, one.error_bound), (3.0, 0.0));
        let ind = integrate(&m, &TestFunction::indicator(0.0, 1.0 / 9.0).unwrap()).unwrap();
        assert_eq!((ind.value, ind.error_bound), (0.25, 0.0));
        let lin = integrate(&m, &TestFunction::Linear).unwrap();
        assert!((lin.value - 0.5).abs() <= lin.error_bound);
    }
}
