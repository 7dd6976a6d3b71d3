//! Dixmier traces of the Cantor triples under each limit procedure, next
//! to the residues of the zeta functions divided by the dimension.

use fractal_traces::dirac::{spectrum, SpectrumKind};
use fractal_traces::fractal::{FractalSpec, DEFAULT_BUDGET};
use fractal_traces::seqcore::WindowPolicy;
use fractal_traces::traces::{dixmier, LimitProcedure};
use fractal_traces::zeta::selfsimilar_report;

fn main() -> fractal_traces::Result<()> {
    let cantor = FractalSpec::cantor();
    let closed = selfsimilar_report(&cantor)?;
    let d = closed.dimension;
    let policy = WindowPolicy::default();
    let residues = [
        (SpectrumKind::Lacunary, closed.residue_lacunary),
        (SpectrumKind::Filled, closed.residue_filled),
        (
            SpectrumKind::Full,
            closed.residue_lacunary + closed.residue_filled,
        ),
    ];
    for (kind, residue) in residues {
        let s = spectrum(&cantor, kind, 35, DEFAULT_BUDGET)?;
        print!("{kind:>8}  residue/d {:.6}", residue / d);
        for p in LimitProcedure::standard() {
            print!("  {p} {:.6}", dixmier(&s, d, &p, &policy)?.value);
        }
        println!();
    }
    Ok(())
}
