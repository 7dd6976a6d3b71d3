#![allow(dead_code)]

use fractal_traces::fractal::{FractalSpec, Similarity, SymmetricSequences};
use fractal_traces::seqcore::{build_step_function, StepFunction};

pub fn cantor_dimension() -> f64 {
    2f64.ln() / 3f64.ln()
}

/// Gaps `n^{-2}`, `n = 1..=count`.
pub fn a_string(count: usize) -> Vec<f64> {
    (1..=count).map(|k| (k as f64).powi(-2)).collect()
}

/// Two cells per level with ratio `(1 − 3^{-n}) / 2`: measure `∏(1 − 3^{-n})`.
pub fn fat_cantor() -> FractalSpec {
    let lambda: Vec<f64> = (1..=24).map(|n| (1.0 - 3f64.powi(-n)) / 2.0).collect();
    FractalSpec::symmetric(
        (0.0, 1.0),
        SymmetricSequences::new(vec![2; 24], lambda, None).unwrap(),
    )
}

pub fn fat_cantor_measure() -> f64 {
    (1..=60).map(|n| 1.0 - 3f64.powi(-n)).product()
}

/// `p = (2, 3, 2, 3, …)`, `λ = (1/4, 1/6, …)`.
pub fn alternating() -> FractalSpec {
    FractalSpec::symmetric(
        (0.0, 1.0),
        SymmetricSequences::new(vec![2, 3], vec![0.25, 1.0 / 6.0], Some(2)).unwrap(),
    )
}

/// Ratios `1/2` and `1/4`; the left cell weighs `(√5 − 1)/2`.
pub fn two_ratio() -> FractalSpec {
    FractalSpec::self_similar(
        (0.0, 1.0),
        vec![Similarity::new(0.5, 0.0), Similarity::new(0.25, 0.75)],
    )
}

pub fn two_map(left: f64, right: f64) -> FractalSpec {
    FractalSpec::self_similar(
        (0.0, 1.0),
        vec![
            Similarity::new(left, 0.0),
            Similarity::new(right, 1.0 - right),
        ],
    )
}

/// Log profile equal to `t` on the blocks `(n², (n+1)²]` of one parity,
/// jumping to `(n+1)²` and staying flat on the others.
pub fn alternating_profile(t: f64, linear_on_even: bool) -> f64 {
    let n = t.sqrt().floor();
    let even = (n as u64).is_multiple_of(2);
    if even == linear_on_even {
        t
    } else {
        (n + 1.0).powi(2)
    }
}

/// `μ(x) = e^{−f(log x)}` sampled on a grid of step `dt` in `log x`.
pub fn from_profile(profile: impl Fn(f64) -> f64, t_max: f64, dt: f64) -> StepFunction {
    let steps = (t_max / dt) as usize;
    let pairs = (0..steps).map(|k| {
        let (t0, t1) = (k as f64 * dt, (k + 1) as f64 * dt);
        ((-profile(t1)).exp(), t1.exp() - t0.exp())
    });
    build_step_function(pairs).unwrap().with_truncation(true)
}

pub fn power_law(exponent: f64, n: usize) -> StepFunction {
    build_step_function((1..=n).map(|k| ((k as f64).powf(-exponent), 1.0)))
        .unwrap()
        .with_truncation(true)
}

/// Geometric stream: value `ratio^k` with width `growth^k`.
pub fn geometric_stream(ratio: f64, growth: f64, levels: i32) -> StepFunction {
    build_step_function((0..levels).map(|k| (ratio.powi(k), growth.powi(k))))
        .unwrap()
        .with_truncation(true)
}
