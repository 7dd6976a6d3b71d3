//! The fractal string with gaps `n^{-2}`: its Dixmier trace at `d = 1/2`
//! and the Minkowski content it predicts.

use fractal_traces::fractal::{EpsGrid, GaugeFunction};
use fractal_traces::seqcore::WindowPolicy;
use fractal_traces::traces::{gauge_trace, LimitProcedure};

fn main() -> fractal_traces::Result<()> {
    let n = 1_000_000;
    let gaps: Vec<f64> = (1..=n).map(|k| (k as f64).powi(-2)).collect();
    let grid = EpsGrid {
        eps_min: 1e-10,
        eps_max: 1e-6,
        per_decade: 20,
    };
    let r = gauge_trace(
        &gaps,
        &GaugeFunction::power(0.5)?,
        &LimitProcedure::cesaro_log(),
        Some(&grid),
        &WindowPolicy::default(),
    )?;
    let m = r.minkowski.as_ref().expect("grid given");
    println!("trace of |D|^(-1/2): {:.5}", r.trace.value);
    println!(
        "Minkowski content:   {:.5} (measurable: {})",
        m.estimate, m.measurable
    );
    println!(
        "2^d (1-d) M_d:       {:.5}",
        r.predicted.unwrap_or(f64::NAN)
    );
    Ok(())
}
