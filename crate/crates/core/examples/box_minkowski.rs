//! Gap-counting dimension and Minkowski content: Cantor oscillates, the
//! `n^{-2}` string does not.

use fractal_traces::fractal::{
    minkowski_content, FractalSpec, GapList, GaugeFunction, DEFAULT_BUDGET,
};
use fractal_traces::seqcore::WindowPolicy;

fn main() -> fractal_traces::Result<()> {
    let policy = WindowPolicy::default();
    let cantor = GapList::from_spec(&FractalSpec::cantor(), 24, DEFAULT_BUDGET)?;
    let d = 2f64.ln() / 3f64.ln();
    let m = minkowski_content(&cantor, &GaugeFunction::power(d)?, &cantor.default_grid())?;
    println!(
        "Cantor: box dim {:.5}, content band [{:.4}, {:.4}], measurable {}, stable band {:?}",
        cantor.box_dimension(&policy)?,
        m.band.0,
        m.band.1,
        m.measurable,
        m.stable_band
    );
    let lengths: Vec<f64> = (1..=100_000).map(|k| (k as f64).powi(-2)).collect();
    let string = GapList::from_lengths(&lengths)?;
    let m = minkowski_content(&string, &GaugeFunction::power(0.5)?, &string.default_grid())?;
    println!(
        "n^-2 string: box dim {:.5}, content {:.5}, measurable {}",
        string.box_dimension(&policy)?,
        m.estimate,
        m.measurable
    );
    Ok(())
}
