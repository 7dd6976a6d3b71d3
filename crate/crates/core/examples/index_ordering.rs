//! Matuszewska and dimension indices for a handful of eigenvalue
//! sequences, including two whose log profiles alternate between slope
//! one and flat runs, and their direct sum.

use fractal_traces::seqcore::{build_step_function, indices, StepFunction, WindowPolicy};

fn power_law(exponent: f64, n: usize) -> fractal_traces::Result<StepFunction> {
    build_step_function((1..=n).map(|k| ((k as f64).powf(-exponent), 1.0)))
}

/// Log profile `f(t) = −log μ(e^t)` that follows `t` on the blocks
/// `(n², (n+1)²]` of one parity and jumps to the block's right end and
/// stays flat on the others.
fn alternating_profile(t: f64, linear_on_even: bool) -> f64 {
    let n = t.sqrt().floor();
    let even = (n as u64).is_multiple_of(2);
    if even == linear_on_even {
        t
    } else {
        (n + 1.0).powi(2)
    }
}

fn from_profile(
    profile: impl Fn(f64) -> f64,
    t_max: f64,
    dt: f64,
) -> fractal_traces::Result<StepFunction> {
    let steps = (t_max / dt) as usize;
    let pairs = (0..steps).map(|k| {
        let (t0, t1) = (k as f64 * dt, (k + 1) as f64 * dt);
        ((-profile(t1)).exp(), t1.exp() - t0.exp())
    });
    Ok(build_step_function(pairs)?.with_truncation(true))
}

fn main() -> fractal_traces::Result<()> {
    let policy = WindowPolicy::default();
    let oscillating = from_profile(|t| alternating_profile(t, true), 400.0, 0.05)?;
    let mirrored = from_profile(|t| alternating_profile(t, false), 400.0, 0.05)?;
    let cases = [
        ("n^-1", power_law(1.0, 200_000)?),
        ("n^-1/2", power_law(0.5, 200_000)?),
        ("n^-3", power_law(3.0, 200_000)?),
        ("oscillating", oscillating.clone()),
        ("mirrored", mirrored.clone()),
        (
            "min profile",
            from_profile(
                |t| alternating_profile(t, true).min(alternating_profile(t, false)),
                400.0,
                0.05,
            )?,
        ),
        // within a factor 2 of the min profile, so only the long windows see slope one
        ("direct sum", oscillating.direct_sum(&mirrored)),
    ];
    for (name, mu) in cases {
        let r = indices(&mu, &policy)?;
        println!(
            "{name:>12}: {:.3} <= {:.3} <= {:.3} <= {:.3}  ordered: {}",
            r.delta_lower.as_f64(),
            r.d_lower.as_f64(),
            r.d_upper.as_f64(),
            r.delta_upper.as_f64(),
            r.ordering_holds()
        );
    }
    Ok(())
}
