//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use fractal_traces::dirac::{spectrum, Spectrum, SpectrumKind};
use fractal_traces::fractal::{
    minkowski_content, EpsGrid, FractalSpec, GapList, GaugeFunction, SymmetricSequences,
    DEFAULT_BUDGET,
};
use fractal_traces::functions::TestFunction;
use fractal_traces::measures::{homogeneous_measure, integrate};
use fractal_traces::metric::{build_graph, lacunary_gap_sum_bound};
use fractal_traces::oporacle::{appendix_suite, holder_constant};
use fractal_traces::seqcore::{indices, StepFunction, WindowPolicy};
use fractal_traces::traces::{dixmier, gauge_trace, HbFunctional, LimitProcedure};
use fractal_traces::zeta::{
    abscissa, selfsimilar_report, similarity_dimension, symmetric_dimension_and_delta, zeta_partial,
};
use fractal_traces::ExtReal;

type Outcome = Result<(), String>;
type Criterion = fn(&mut Verdict) -> Outcome;

/// Collects failed conditions and a short summary of the measured values.
#[derive(Default)]
struct Verdict {
    notes: Vec<String>,
    failures: Vec<String>,
}

impl Verdict {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn within(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        self.check(
            (value - target).abs() <= tol,
            format!("{label} {value:.6} vs {target:.6} (±{tol:e})"),
        );
    }

    fn relative(&mut self, label: &str, value: f64, target: f64, rel: f64) {
        let err = (value - target).abs() / target.abs();
        self.check(
            err <= rel,
            format!("{label} {value:.6} vs {target:.6} (rel {err:.1e} ≤ {rel:e})"),
        );
    }

    fn faster(&mut self, label: &str, took: Duration, limit: Duration) {
        self.check(took < limit, format!("{label} {took:.2?} < {limit:?}"));
    }
}

fn lib<T>(r: fractal_traces::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn cantor_dimension(v: &mut Verdict) -> Outcome {
    let d = common::cantor_dimension();
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fractal-traces"))
        .args(["dim", "--spec"])
        .arg(data("cantor.json"))
        .output()
        .map_err(|e| e.to_string())?;
    v.faster("dim", start.elapsed(), Duration::from_secs(1));
    v.check(
        out.status.success(),
        format!("exit {:?}", out.status.code()),
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    for kind in ["lacunary", "filled", "full"] {
        let a = doc["abscissa"][kind]["estimate"]
            .as_f64()
            .ok_or(format!("no {kind} abscissa"))?;
        v.within(&format!("{kind} abscissa"), a, d, 1e-2);
    }
    let closed = doc["selfsimilar"]["dimension"]
        .as_f64()
        .ok_or("no closed form")?;
    v.within("closed form", closed, d, 1e-9);
    v.within(
        "library closed form",
        lib(selfsimilar_report(&FractalSpec::cantor()))?.dimension,
        d,
        1e-9,
    );
    Ok(())
}

fn zeta_closed_forms(v: &mut Verdict) -> Outcome {
    let start = Instant::now();
    let cantor = FractalSpec::cantor();
    let closed = lib(selfsimilar_report(&cantor))?;
    v.within("closed ζ_f(1)", closed.zeta_filled(1.0), 6.0, 1e-12);
    v.within("closed ζ_ℓ(1)", closed.zeta_lacunary(1.0), 2.0, 1e-12);
    for (kind, exact) in [(SpectrumKind::Filled, 6.0), (SpectrumKind::Lacunary, 2.0)] {
        let s = lib(spectrum(&cantor, kind, 40, DEFAULT_BUDGET))?;
        let r = lib(zeta_partial(&s, 1.0, u64::MAX))?;
        v.relative(&format!("{kind} direct sum"), r.partial_sum, exact, 1e-6);
    }
    v.faster("total", start.elapsed(), Duration::from_secs(1));
    Ok(())
}

fn dixmier_values(v: &mut Verdict) -> Outcome {
    let start = Instant::now();
    let cantor = FractalSpec::cantor();
    let closed = lib(selfsimilar_report(&cantor))?;
    let d = closed.dimension;
    let policy = WindowPolicy::default();
    let ln2 = 2f64.ln();
    let mut by_kind = Vec::new();
    for (kind, residue) in [
        (SpectrumKind::Lacunary, closed.residue_lacunary),
        (SpectrumKind::Filled, closed.residue_filled),
        (
            SpectrumKind::Full,
            closed.residue_lacunary + closed.residue_filled,
        ),
    ] {
        let s = lib(spectrum(&cantor, kind, 35, DEFAULT_BUDGET))?;
        let values = LimitProcedure::standard()
            .iter()
            .map(|p| lib(dixmier(&s, d, p, &policy)).map(|r| (p.to_string(), r.value)))
            .collect::<Result<Vec<_>, _>>()?;
        for (p, value) in &values {
            v.relative(
                &format!("{kind} {p} vs residue/d"),
                *value,
                residue / d,
                0.02,
            );
        }
        by_kind.push(values);
    }
    for (i, (p, _)) in by_kind[0].iter().enumerate() {
        let (lac, fil, full) = (by_kind[0][i].1, by_kind[1][i].1, by_kind[2][i].1);
        v.relative(&format!("lacunary {p}"), lac, 1.0 / ln2, 0.01);
        v.relative(&format!("filled {p}"), fil, 2.0 / ln2, 0.01);
        v.relative(&format!("full {p} vs sum"), full, lac + fil, 0.02);
    }
    v.faster("total", start.elapsed(), Duration::from_secs(5));
    Ok(())
}

fn a_string_grid() -> EpsGrid {
    EpsGrid {
        eps_min: 1e-10,
        eps_max: 1e-6,
        per_decade: 20,
    }
}

fn a_string(v: &mut Verdict) -> Outcome {
    let start = Instant::now();
    let gaps = common::a_string(1_000_000);
    let r = lib(gauge_trace(
        &gaps,
        &lib(GaugeFunction::power(0.5))?,
        &LimitProcedure::cesaro_log(),
        Some(&a_string_grid()),
        &WindowPolicy::default(),
    ))?;
    v.relative("trace", r.trace.value, 2.0, 0.02);
    let predicted = r.predicted.ok_or("no Minkowski prediction")?;
    v.relative("trace vs 2^d(1-d)M_d", r.trace.value, predicted, 0.03);
    v.faster("total", start.elapsed(), Duration::from_secs(10));
    Ok(())
}

fn symmetric_delta(v: &mut Verdict) -> Outcome {
    let seq = lib(SymmetricSequences::new(
        vec![2, 3],
        vec![0.25, 1.0 / 6.0],
        Some(2),
    ))?;
    let policy = WindowPolicy::default();
    let exact = lib(symmetric_dimension_and_delta(&seq, &policy))?;
    let lower = exact.delta_lower.ok_or("lower index withheld")?;
    let upper = exact.delta_upper.ok_or("upper index withheld")?;
    // d = log(p1 p2) / |log(λ1 λ2)| over one period
    let d_period = (2.0f64 * 3.0).ln() / (0.25f64 / 6.0).ln().abs();
    v.within("exact lower δ", lower, 0.5, 1e-5);
    v.within("exact upper δ", upper, 0.61315, 1e-5);
    v.within("exact d", exact.d, 0.56380, 1e-5);
    v.within("exact d vs period", exact.d, d_period, 1e-9);
    let spec = FractalSpec::symmetric((0.0, 1.0), seq);
    let mu =
        lib(lib(spectrum(&spec, SpectrumKind::Lacunary, 25, DEFAULT_BUDGET))?.to_step_function())?;
    let r = lib(indices(&mu, &policy))?;
    v.within("stream lower δ", r.delta_lower.as_f64(), lower, 0.05);
    v.within("stream lower d", r.d_lower.as_f64(), exact.d, 0.05);
    v.within("stream upper d", r.d_upper.as_f64(), exact.d, 0.05);
    v.within("stream upper δ", r.delta_upper.as_f64(), upper, 0.05);
    Ok(())
}

fn index_ordering(v: &mut Verdict) -> Outcome {
    let policy = WindowPolicy::default();
    let profile = |linear_on_even| move |t| common::alternating_profile(t, linear_on_even);
    let oscillating = common::from_profile(profile(true), 400.0, 0.05);
    let mirrored = common::from_profile(profile(false), 400.0, 0.05);
    let min_profile =
        common::from_profile(|t| profile(true)(t).min(profile(false)(t)), 400.0, 0.05);
    let stream = |spec: &FractalSpec, level| -> Result<StepFunction, String> {
        lib(lib(spectrum(
            spec,
            SpectrumKind::Lacunary,
            level,
            DEFAULT_BUDGET,
        ))?
        .to_step_function())
    };
    let suite: Vec<(&str, StepFunction)> = vec![
        ("n^-1", common::power_law(1.0, 200_000)),
        ("n^-1/2", common::power_law(0.5, 200_000)),
        ("n^-3", common::power_law(3.0, 200_000)),
        ("geometric", common::geometric_stream(0.5, 3.0, 30)),
        ("cantor", stream(&FractalSpec::cantor(), 20)?),
        ("two ratio", stream(&common::two_ratio(), 24)?),
        ("alternating", stream(&common::alternating(), 20)?),
        ("oscillating", oscillating.clone()),
        ("mirrored", mirrored.clone()),
        ("direct sum", oscillating.direct_sum(&mirrored)),
        ("min profile", min_profile.clone()),
    ];
    for (name, mu) in &suite {
        let r = lib(indices(mu, &policy))?;
        v.check(
            r.ordering_holds(),
            format!(
                "{name}: {:.3} ≤ {:.3} ≤ {:.3} ≤ {:.3}",
                r.delta_lower.as_f64(),
                r.d_lower.as_f64(),
                r.d_upper.as_f64(),
                r.delta_upper.as_f64()
            ),
        );
    }
    let osc = lib(indices(&oscillating, &policy))?;
    v.check(
        osc.delta_lower.as_f64() < 0.1,
        format!("oscillating lower δ {:.3} ≈ 0", osc.delta_lower.as_f64()),
    );
    v.check(
        osc.delta_upper == ExtReal::Infinity,
        format!("oscillating upper δ {:?} is the sentinel", osc.delta_upper),
    );
    let m = lib(indices(&min_profile, &policy))?;
    let [a, b, c, d] = [m.delta_lower, m.d_lower, m.d_upper, m.delta_upper].map(|e| e.as_f64());
    for (label, x) in [
        ("lower δ", a),
        ("lower d", b),
        ("upper d", c),
        ("upper δ", d),
    ] {
        v.within(&format!("min profile {label}"), x, 1.0, 0.05);
    }
    Ok(())
}

fn measurability(v: &mut Verdict) -> Outcome {
    let start = Instant::now();
    let cantor = FractalSpec::cantor();
    let d = common::cantor_dimension();
    let policy = WindowPolicy::default();
    let level = 20;
    let measure = lib(homogeneous_measure(&cantor, d, level, DEFAULT_BUDGET))?;
    for (f, target) in [
        (TestFunction::Constant { value: 1.0 }, 1.0),
        (
            TestFunction::Indicator {
                a: 0.0,
                b: 1.0 / 3.0,
            },
            0.5,
        ),
        (TestFunction::Linear, 0.5),
    ] {
        let hb = lib(HbFunctional::new(
            &cantor,
            SpectrumKind::Full,
            d,
            &f,
            level,
            DEFAULT_BUDGET,
        ))?;
        let values = LimitProcedure::standard()
            .iter()
            .map(|p| lib(hb.evaluate(p, &policy)).map(|r| r.value))
            .collect::<Result<Vec<_>, _>>()?;
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        v.check(hi - lo < 1e-3, format!("{f:?} spread {:.1e}", hi - lo));
        let integral = lib(integrate(&measure, &f))?;
        for x in values {
            v.within(&format!("{f:?}"), x, target, 1e-3);
            v.within(&format!("{f:?} vs integral"), x, integral.value, 1e-3);
        }
    }
    v.notes.push(format!("took {:.2?}", start.elapsed()));
    Ok(())
}

fn homogeneous_measures(v: &mut Verdict) -> Outcome {
    let cantor = FractalSpec::cantor();
    let d = common::cantor_dimension();
    let mut previous = None;
    for level in 1..=12 {
        let m = lib(homogeneous_measure(&cantor, d, level, DEFAULT_BUDGET))?;
        let w = 0.5f64.powi(level as i32);
        v.check(
            m.cells.iter().all(|c| c.weight == w),
            format!("level {level} weights 2^-{level}"),
        );
        if let Some(coarse) = previous.replace(m.clone()) {
            let defect = lib(fractal_traces::measures::CellMeasure::refinement_defect(
                &coarse, &m,
            ))?;
            v.check(
                defect <= 1e-12,
                format!("Cantor refinement {level} defect {defect:e}"),
            );
        }
    }
    let two = common::two_ratio();
    let d2 = lib(similarity_dimension(&[0.5, 0.25]))?;
    let m = lib(homogeneous_measure(&two, d2, 1, DEFAULT_BUDGET))?;
    v.within(
        "golden weight",
        m.cells[0].weight,
        (5f64.sqrt() - 1.0) / 2.0,
        1e-9,
    );
    for level in 1..10 {
        let coarse = lib(homogeneous_measure(&two, d2, level, DEFAULT_BUDGET))?;
        let fine = lib(homogeneous_measure(&two, d2, level + 1, DEFAULT_BUDGET))?;
        let defect = lib(coarse.refinement_defect(&fine))?;
        v.check(
            defect <= 1e-12,
            format!("two-ratio refinement {level} defect {defect:e}"),
        );
    }
    Ok(())
}

fn metric(v: &mut Verdict) -> Outcome {
    let g = lib(build_graph(
        &FractalSpec::cantor(),
        SpectrumKind::Full,
        6,
        DEFAULT_BUDGET,
    ))?;
    let mut worst: f64 = 0.0;
    for x in g.vertices() {
        for (y, dist) in lib(g.distances_from(x))? {
            worst = worst.max((dist.as_f64() - (x - y).abs()).abs());
        }
    }
    v.check(
        worst <= 1e-12,
        format!(
            "{} endpoints, worst |dist − |x−y|| {worst:e}",
            g.vertex_count()
        ),
    );
    let deficit = |spec: &FractalSpec, level| {
        lib(lacunary_gap_sum_bound(
            spec,
            0.0,
            1.0,
            level,
            DEFAULT_BUDGET,
        ))
        .map(|b| b.deficit)
    };
    let cantor: Vec<f64> = [4, 8, 12, 16]
        .iter()
        .map(|&l| deficit(&FractalSpec::cantor(), l))
        .collect::<Result<_, _>>()?;
    v.check(
        cantor.windows(2).all(|w| w[1] < w[0]),
        format!("Cantor deficits decrease {cantor:?}"),
    );
    v.check(
        cantor[3] < 2e-3,
        format!("Cantor deficit at level 16 {:.2e}", cantor[3]),
    );
    let fat = deficit(&common::fat_cantor(), 16)?;
    v.within("fat Cantor deficit", fat, 0.5601, 1e-3);
    Ok(())
}

fn appendix(v: &mut Verdict) -> Outcome {
    let start = Instant::now();
    let r = lib(appendix_suite(7, 100_000, &WindowPolicy::default()))?;
    v.check(
        r.sweep.pairs == 200 && r.sweep.dimension == 8,
        format!(
            "{} pairs of {}x{}",
            r.sweep.pairs, r.sweep.dimension, r.sweep.dimension
        ),
    );
    v.check(
        r.sweep.failures.is_empty() && r.sweep.min_slack >= -1e-10,
        format!(
            "{} checks, min slack {:.4}",
            r.sweep.checks, r.sweep.min_slack
        ),
    );
    v.check(lib(holder_constant(2.0))? == 2.0, "C_2 = 2");
    v.check(r.constants_pass, "C_p ≤ 2 on the grid");
    for (name, h) in &r.holder {
        v.check(h.pass, format!("{name}: {:.4} ≤ {:.4}", h.lhs, h.rhs));
    }
    v.faster("total", start.elapsed(), Duration::from_secs(5));
    Ok(())
}

fn box_dimension(v: &mut Verdict) -> Outcome {
    let policy = WindowPolicy::default();
    let abscissa_of =
        |s: &Spectrum| lib(abscissa(s, (0.0, 4.0), 1e-3, &policy)).map(|r| r.estimate);
    let suite = [
        ("cantor", FractalSpec::cantor()),
        ("two ratio", common::two_ratio()),
        ("alternating", common::alternating()),
        ("uneven", common::two_map(0.3, 0.2)),
        ("narrow", common::two_map(0.05, 0.05)),
        ("wide", common::two_map(0.45, 0.45)),
    ];
    for (name, spec) in &suite {
        let a = abscissa_of(&lib(spectrum(
            spec,
            SpectrumKind::Lacunary,
            30,
            DEFAULT_BUDGET,
        ))?)?;
        let b = lib(lib(GapList::from_spec(spec, 30, DEFAULT_BUDGET))?.box_dimension(&policy))?;
        v.within(&format!("{name} box vs abscissa"), b, a, 0.02);
    }
    let gaps = common::a_string(1_000_000);
    let a = abscissa_of(&lib(Spectrum::from_gaps(&gaps))?)?;
    let string = lib(GapList::from_lengths(&gaps))?;
    v.within(
        "a-string box vs abscissa",
        lib(string.box_dimension(&policy))?,
        a,
        0.02,
    );
    let m = lib(minkowski_content(
        &string,
        &lib(GaugeFunction::power(0.5))?,
        &a_string_grid(),
    ))?;
    v.check(
        m.measurable,
        format!("a-string measurable, content {:.4}", m.estimate),
    );

    let cantor = lib(GapList::from_spec(
        &FractalSpec::cantor(),
        24,
        DEFAULT_BUDGET,
    ))?;
    let gauge = lib(GaugeFunction::power(common::cantor_dimension()))?;
    let m = lib(minkowski_content(&cantor, &gauge, &cantor.default_grid()))?;
    v.check(
        !m.measurable && m.stable_band == Some(true),
        format!(
            "Cantor not measurable, band [{:.4}, {:.4}] stable {:?}",
            m.band.0, m.band.1, m.stable_band
        ),
    );
    Ok(())
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("Cantor dimension", cantor_dimension),
        ("zeta closed forms", zeta_closed_forms),
        ("Dixmier values", dixmier_values),
        ("a-string", a_string),
        ("symmetric indices", symmetric_delta),
        ("index ordering", index_ordering),
        ("measurability", measurability),
        ("homogeneous measure", homogeneous_measures),
        ("metric", metric),
        ("appendix inequalities", appendix),
        ("box dimension", box_dimension),
    ];
    let verbose = std::env::args().any(|a| a == "--verbose");
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut v = Verdict::default();
        if let Err(e) = run(&mut v) {
            v.failures.push(format!("error: {e}"));
        }
        let status = if v.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("{status} {:>2} {name} ({:.2?})", i + 1, start.elapsed());
        for f in &v.failures {
            println!("       failed: {f}");
        }
        if verbose {
            for n in &v.notes {
                println!("       ok: {n}");
            }
        }
        failed += usize::from(!v.failures.is_empty());
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
