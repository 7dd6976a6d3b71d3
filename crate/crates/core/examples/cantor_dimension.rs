//! Dimension of the middle-third Cantor set three ways: zeta abscissa of
//! each spectrum, the self-similar closed form, and gap counting.

use fractal_traces::dirac::{spectrum, SpectrumKind};
use fractal_traces::fractal::{FractalSpec, GapList, DEFAULT_BUDGET};
use fractal_traces::seqcore::WindowPolicy;
use fractal_traces::zeta::{abscissa, selfsimilar_report};

fn main() -> fractal_traces::Result<()> {
    let cantor = FractalSpec::cantor();
    let policy = WindowPolicy::default();
    for kind in [
        SpectrumKind::Lacunary,
        SpectrumKind::Filled,
        SpectrumKind::Full,
    ] {
        let s = spectrum(&cantor, kind, 35, DEFAULT_BUDGET)?;
        let r = abscissa(&s, (0.0, 4.0), 1e-4, &policy)?;
        println!(
            "{kind:>8}: abscissa {:.5} in [{:.5}, {:.5}]",
            r.estimate, r.bracket.0, r.bracket.1
        );
    }
    let closed = selfsimilar_report(&cantor)?;
    println!(
        "closed form: {:.12} (log 2 / log 3 = {:.12})",
        closed.dimension,
        2f64.ln() / 3f64.ln()
    );
    let gaps = GapList::from_spec(&cantor, 20, DEFAULT_BUDGET)?;
    println!("gap counting: {:.5}", gaps.box_dimension(&policy)?);
    Ok(())
}
