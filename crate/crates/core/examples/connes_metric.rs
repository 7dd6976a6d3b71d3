//! Connes distance on the full Cantor triple, and the lacunary gap-sum
//! bound that separates null sets from fat ones.

use fractal_traces::dirac::SpectrumKind;
use fractal_traces::fractal::{FractalSpec, SymmetricSequences, DEFAULT_BUDGET};
use fractal_traces::metric::{build_graph, connes_distance, lacunary_gap_sum_bound};

fn main() -> fractal_traces::Result<()> {
    let cantor = FractalSpec::cantor();
    let g = build_graph(&cantor, SpectrumKind::Full, 6, DEFAULT_BUDGET)?;
    let vs = g.vertices();
    let mut worst: f64 = 0.0;
    for &x in &vs {
        for &y in &vs {
            worst = worst.max((connes_distance(&g, x, y)?.as_f64() - (x - y).abs()).abs());
        }
    }
    println!("{} endpoints, largest |dist - |x-y||: {worst:e}", vs.len());

    let lambda: Vec<f64> = (1..=24).map(|n| (1.0 - 3f64.powi(-n)) / 2.0).collect();
    let fat = FractalSpec::symmetric(
        (0.0, 1.0),
        SymmetricSequences::new(vec![2; 24], lambda, None)?,
    );
    for level in [4, 8, 12] {
        let c = lacunary_gap_sum_bound(&cantor, 0.0, 1.0, level, DEFAULT_BUDGET)?;
        let f = lacunary_gap_sum_bound(&fat, 0.0, 1.0, level, DEFAULT_BUDGET)?;
        println!(
            "level {level:>2}: deficit Cantor {:.6}, fat Cantor {:.6}",
            c.deficit, f.deficit
        );
    }
    Ok(())
}
