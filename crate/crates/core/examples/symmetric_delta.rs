//! Exact and estimated Matuszewska indices of a symmetric fractal whose
//! generating sequences alternate between `(2, 1/4)` and `(3, 1/6)`.

use fractal_traces::dirac::{spectrum, SpectrumKind};
use fractal_traces::fractal::{FractalSpec, SymmetricSequences, DEFAULT_BUDGET};
use fractal_traces::seqcore::{indices, WindowPolicy};
use fractal_traces::zeta::symmetric_dimension_and_delta;

fn main() -> fractal_traces::Result<()> {
    let seq = SymmetricSequences::new(vec![2, 3], vec![0.25, 1.0 / 6.0], Some(2))?;
    let policy = WindowPolicy::default();
    let exact = symmetric_dimension_and_delta(&seq, &policy)?;
    let show = |v: Option<f64>| v.map_or_else(|| "withheld".to_string(), |v| format!("{v:.5}"));
    println!(
        "windows: d = {:.5}, lower delta = {}, upper delta = {}",
        exact.d,
        show(exact.delta_lower),
        show(exact.delta_upper)
    );
    let spec = FractalSpec::symmetric((0.0, 1.0), seq);
    let mu = spectrum(&spec, SpectrumKind::Lacunary, 25, DEFAULT_BUDGET)?.to_step_function()?;
    let r = indices(&mu, &policy)?;
    println!(
        "eigenvalue stream: {:.5} <= {:.5} <= {:.5} <= {:.5}",
        r.delta_lower.as_f64(),
        r.d_lower.as_f64(),
        r.d_upper.as_f64(),
        r.delta_upper.as_f64()
    );
    Ok(())
}
