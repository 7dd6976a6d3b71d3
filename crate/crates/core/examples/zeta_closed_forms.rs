//! Partial zeta sums against the closed forms `2(b−a)^s / (1 − Σλ^s)`.

use fractal_traces::dirac::{spectrum, SpectrumKind};
use fractal_traces::fractal::{FractalSpec, DEFAULT_BUDGET};
use fractal_traces::zeta::{selfsimilar_report, zeta_partial};

fn main() -> fractal_traces::Result<()> {
    let cantor = FractalSpec::cantor();
    let closed = selfsimilar_report(&cantor)?;
    for s in [0.7, 1.0, 2.0] {
        for (kind, exact) in [
            (SpectrumKind::Filled, closed.zeta_filled(s)),
            (SpectrumKind::Lacunary, closed.zeta_lacunary(s)),
        ] {
            let sp = spectrum(&cantor, kind, 40, DEFAULT_BUDGET)?;
            let r = zeta_partial(&sp, s, u64::MAX)?;
            let direct = r.partial_sum;
            println!(
                "s = {s}: {kind:>8} direct {direct:.9}, with exact tail {:.9}, closed form {exact:.9}",
                r.total().unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
