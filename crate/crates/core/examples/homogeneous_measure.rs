//! Cell weights of the homogeneous measure and the integral of `x`
//! against it, for Cantor and a two-ratio set.

use fractal_traces::fractal::{FractalSpec, Similarity, DEFAULT_BUDGET};
use fractal_traces::functions::TestFunction;
use fractal_traces::measures::{homogeneous_measure, integrate};
use fractal_traces::zeta::similarity_dimension;

fn main() -> fractal_traces::Result<()> {
    let cantor = FractalSpec::cantor();
    let d = similarity_dimension(&[1.0 / 3.0, 1.0 / 3.0])?;
    let m = homogeneous_measure(&cantor, d, 12, DEFAULT_BUDGET)?;
    let coarse = homogeneous_measure(&cantor, d, 11, DEFAULT_BUDGET)?;
    println!(
        "Cantor level 12: {} cells of weight {:e}",
        m.cells.len(),
        m.cells[0].weight
    );
    println!("refinement defect: {:e}", coarse.refinement_defect(&m)?);
    let lin = integrate(&m, &TestFunction::Linear)?;
    println!("integral of x: {:.6} +- {:.1e}", lin.value, lin.error_bound);

    let two = FractalSpec::self_similar(
        (0.0, 1.0),
        vec![Similarity::new(0.5, 0.0), Similarity::new(0.25, 0.75)],
    );
    let d = similarity_dimension(&[0.5, 0.25])?;
    let m = homogeneous_measure(&two, d, 1, DEFAULT_BUDGET)?;
    println!(
        "two-ratio left weight {:.12}, golden {:.12}",
        m.cells[0].weight,
        (5f64.sqrt() - 1.0) / 2.0
    );
    Ok(())
}
