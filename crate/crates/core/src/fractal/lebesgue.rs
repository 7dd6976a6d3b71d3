use serde::Serialize;

use super::spec::FractalSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureVerdict {
    Zero,
    Positive,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct LebesgueReport {
    pub verdict: MeasureVerdict,
    /// Estimate of `∏_n Σ_i λ_{ni}`, the measure of `F` relative to `b − a`.
    pub product: f64,
    pub partial_products: Vec<f64>,
    /// Fitted exponent `q` of `−log Σ_i λ_{ni} ~ n^{−q}` for non-periodic data.
    pub decay_exponent: Option<f64>,
}

const ZERO_PRODUCT: f64 = 1e-12;
const DIVERGENT_EXPONENT: f64 = 1.1;

/// Decides whether `∏_n Σ_i λ_{ni}` vanishes.
///
/// A periodic tail decides it exactly: the product over one period is
/// below one. Otherwise the deficits `a_n = −log Σ_i λ_{ni}` are fitted
/// by a power law, whose sum diverges when the exponent is at most one.
pub fn lebesgue_zero(spec: &FractalSpec, max_levels: usize) -> LebesgueReport {
    let stored = spec.stored_levels().len();
    let levels = match spec.max_level() {
        Some(m) => m.min(max_levels),
        None => stored.max(max_levels.min(stored + 64)),
    };
    let sums: Vec<f64> = (1..=levels)
        .map_while(|n| spec.ratios(n).ok())
        .map(|r| r.iter().sum())
        .collect();
    let mut partial = Vec::with_capacity(sums.len());
    let mut running = 1.0;
    for s in &sums {
        running *= s;
        partial.push(running);
    }
    let last = partial.last().copied().unwrap_or(1.0);

    if let Some(k) = spec.tail_period() {
        let per_period: f64 = (stored - k + 1..=stored).map(|n| sums[n - 1]).product();
        let verdict = if per_period < 1.0 {
            MeasureVerdict::Zero
        } else {
            MeasureVerdict::Positive
        };
        let product = if per_period < 1.0 { 0.0 } else { last };
        return LebesgueReport {
            verdict,
            product,
            partial_products: partial,
            decay_exponent: None,
        };
    }

    if last < ZERO_PRODUCT {
        return LebesgueReport {
            verdict: MeasureVerdict::Zero,
            product: 0.0,
            partial_products: partial,
            decay_exponent: None,
        };
    }
    if sums.len() < 4 {
        return LebesgueReport {
            verdict: MeasureVerdict::Inconclusive,
            product: last,
            partial_products: partial,
            decay_exponent: None,
        };
    }
    let half = sums.len() / 2;
    let points: Vec<(f64, f64)> = sums
        .iter()
        .enumerate()
        .skip(half)
        .filter_map(|(i, s)| {
            let a = -s.ln();
            (a > 0.0).then(|| (((i + 1) as f64).ln(), a.ln()))
        })
        .collect();
    if points.len() < 2 {
        // deficits vanish to machine precision: the product has converged
        return LebesgueReport {
            verdict: MeasureVerdict::Positive,
            product: last,
            partial_products: partial,
            decay_exponent: None,
        };
    }
    let q = -fit_slope(&points);
    if q <= DIVERGENT_EXPONENT {
        return LebesgueReport {
            verdict: MeasureVerdict::Zero,
            product: 0.0,
            partial_products: partial,
            decay_exponent: Some(q),
        };
    }
    let n = sums.len() as f64;
    let a_last = -sums.last().unwrap().ln();
    let remaining = a_last.max(0.0) * n / (q - 1.0);
    LebesgueReport {
        verdict: MeasureVerdict::Positive,
        product: last * (-remaining).exp(),
        partial_products: partial,
        decay_exponent: Some(q),
    }
}

pub(crate) fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let den: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    num / den
}
