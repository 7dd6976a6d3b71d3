//! Co-Weyl and Weyl inequalities on random matrices, and the Hölder
//! inequality for singular traces on diagonal operators.

use fractal_traces::oporacle::{appendix_suite, holder_constant};
use fractal_traces::seqcore::WindowPolicy;

fn main() -> fractal_traces::Result<()> {
    let r = appendix_suite(7, 100_000, &WindowPolicy::default())?;
    println!(
        "{} random checks on {}x{} pairs, smallest slack {:.4}",
        r.sweep.checks, r.sweep.dimension, r.sweep.dimension, r.sweep.min_slack
    );
    for p in [1.0, 1.5, 2.0, 4.0] {
        println!("C_{p} = {:.6}", holder_constant(p)?);
    }
    for (name, h) in &r.holder {
        println!(
            "{name}: {:.5} <= {:.5} ({})",
            h.lhs,
            h.rhs,
            if h.pass { "ok" } else { "FAIL" }
        );
    }
    println!("all pass: {}", r.pass);
    Ok(())
}
