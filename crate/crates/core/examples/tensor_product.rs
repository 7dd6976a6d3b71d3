//! Spectrum of the product of two Cantor triples; its abscissa is the
//! sum of the dimensions.

use fractal_traces::dirac::{spectrum, tensor_spectrum, SpectrumKind};
use fractal_traces::fractal::{FractalSpec, DEFAULT_BUDGET};
use fractal_traces::seqcore::WindowPolicy;
use fractal_traces::zeta::abscissa;

fn main() -> fractal_traces::Result<()> {
    let s = spectrum(
        &FractalSpec::cantor(),
        SpectrumKind::Filled,
        16,
        DEFAULT_BUDGET,
    )?;
    let product = tensor_spectrum(&s, &s, 3f64.powi(-12), DEFAULT_BUDGET)?;
    println!("{} distinct product eigenvalues", product.entries.len());
    let r = abscissa(&product, (0.0, 4.0), 1e-3, &WindowPolicy::default())?;
    println!(
        "abscissa {:.4}, twice the Cantor dimension {:.4}",
        r.estimate,
        2.0 * 2f64.ln() / 3f64.ln()
    );
    Ok(())
}
