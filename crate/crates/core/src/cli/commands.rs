use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::{exit, with_header, Command, Depth, PolicyArgs, RunConfig, Source};
use crate::dirac::{spectrum, Spectrum, SpectrumKind};
use crate::error::{Error, Result};
use crate::fractal::{lebesgue_zero, EpsGrid, FractalSpec, GapList, GaugeFunction, MeasureVerdict};
use crate::functions::TestFunction;
use crate::io::{canonical_json, load_spec, read_gaps, write_curve, write_spectrum, SpectrumCache};
use crate::measures::{homogeneous_measure, integrate};
use crate::metric::{build_graph, connes_distance, lacunary_gap_sum_bound};
use crate::oporacle::appendix_suite;
use crate::seqcore::{
    classify, eccentricity, indices, EccentricityVerdict, Summability, WindowPolicy,
};
use crate::traces::{dixmier, halving_ratio, spread_of, HbFunctional, LimitProcedure};
use crate::zeta::{
    abscissa, selfsimilar_report, similarity_dimension, symmetric_dimension_and_delta, zeta_partial,
};

/// Bracket searched for the zeta abscissa.
const ABSCISSA_BRACKET: (f64, f64) = (0.0, 4.0);
/// Levels used by `report`, which runs everything at once.
const REPORT_LEVEL_CAP: u32 = 20;
const REPORT_MEASURE_LEVEL: usize = 10;
const PLOT_POINTS: usize = 200;

enum Input {
    Spec(FractalSpec),
    Gaps(Vec<f64>),
}

impl Input {
    fn load(src: &Source) -> Result<Self> {
        match (&src.spec, &src.gaps) {
            (Some(p), None) => Ok(Input::Spec(load_valid(p)?)),
            (None, Some(p)) => Ok(Input::Gaps(read_gaps(p)?)),
            _ => Err(Error::Invalid(
                "give exactly one of --spec and --gaps".into(),
            )),
        }
    }

    fn describe(&self) -> Value {
        match self {
            Input::Spec(s) => json!({ "spec_hash": s.content_hash() }),
            Input::Gaps(g) => json!({ "gaps": g.len() }),
        }
    }
}

fn load_valid(path: &Path) -> Result<FractalSpec> {
    Ok(load_spec(path)?.validate()?.into_inner())
}

struct Ctx {
    cache: Option<SpectrumCache>,
}

impl Ctx {
    fn spectrum(&self, input: &Input, kind: SpectrumKind, depth: &Depth) -> Result<Spectrum> {
        match input {
            Input::Spec(spec) => self.spec_spectrum(spec, kind, depth.level as usize, depth.budget),
            Input::Gaps(g) if kind == SpectrumKind::Lacunary => Spectrum::from_gaps(g),
            Input::Gaps(_) => Err(Error::Invalid(format!(
                "gap input has only the lacunary spectrum, not {kind}"
            ))),
        }
    }

    fn spec_spectrum(
        &self,
        spec: &FractalSpec,
        kind: SpectrumKind,
        level: usize,
        budget: u64,
    ) -> Result<Spectrum> {
        match &self.cache {
            Some(c) => c.load_or_build(spec, kind, level, budget),
            None => spectrum(spec, kind, level, budget),
        }
    }
}

fn policy_of(args: &PolicyArgs) -> Result<WindowPolicy> {
    let mut p: WindowPolicy = match &args.policy {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => WindowPolicy::default(),
    };
    p.tolerance = args.tolerance;
    p.validate()?;
    Ok(p)
}

fn parse_function(s: &str) -> Result<TestFunction> {
    s.parse()
}

/// A sub-result as JSON, errors inlined so one failing part does not hide the rest.
fn part<T: Serialize>(r: Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).unwrap_or(Value::Null),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn finish(command: &str, body: Value, code: i32) -> Result<(String, i32)> {
    Ok((canonical_json(&with_header(command, body))?, code))
}

/// Dimension from the best available route, with the route's name.
fn dimension(
    ctx: &Ctx,
    input: &Input,
    depth: &Depth,
    policy: &WindowPolicy,
) -> Result<(f64, &'static str)> {
    if let Input::Spec(spec) = input {
        if spec.is_self_similar() {
            return Ok((similarity_dimension(&spec.ratios(1)?)?, "self_similar"));
        }
        if let Some(seq) = spec.symmetric_sequences() {
            return Ok((symmetric_dimension_and_delta(seq, policy)?.d, "symmetric"));
        }
    }
    let s = ctx.spectrum(input, SpectrumKind::Lacunary, depth)?;
    Ok((
        abscissa(&s, ABSCISSA_BRACKET, policy.tolerance, policy)?.estimate,
        "abscissa",
    ))
}

pub(super) fn dispatch(config: &RunConfig) -> Result<(String, i32)> {
    let ctx = Ctx {
        cache: config
            .cache_dir
            .as_ref()
            .map(SpectrumCache::new)
            .transpose()?,
    };
    let name = config.command.name();
    match &config.command {
        Command::Validate(args) => {
            let spec = load_spec(&args.spec)?;
            let problems = spec.problems();
            if !problems.is_empty() {
                return Err(Error::Validation(problems));
            }
            let body = json!({
                "valid": true,
                "spec_hash": spec.content_hash(),
                "self_similar": spec.is_self_similar(),
                "symmetric": spec.symmetric_sequences().is_some(),
                "stored_levels": spec.stored_levels().len(),
                "tail_period": spec.tail_period(),
                "interval": spec.interval(),
            });
            finish(name, body, exit::SUCCESS)
        }
        Command::Spectrum {
            source,
            kind,
            depth,
            csv,
        } => {
            let input = Input::load(source)?;
            let s = ctx.spectrum(&input, *kind, depth)?;
            if let Some(path) = csv {
                let hash = match &input {
                    Input::Spec(spec) => Some(spec.content_hash()),
                    Input::Gaps(_) => None,
                };
                write_spectrum(path, &s, hash.as_deref())?;
            }
            let body = json!({
                "input": input.describe(),
                "kind": s.kind,
                "level_cutoff": s.level_cutoff,
                "distinct_values": s.entries.len(),
                "total_multiplicity": s.total_multiplicity()?,
                "largest": s.entries.first().map(|e| e.value),
                "smallest": s.entries.last().map(|e| e.value),
                "has_generator": s.generator.is_some(),
                "provenance": s.provenance,
            });
            finish(name, body, exit::SUCCESS)
        }
        Command::Dim {
            source,
            kind,
            depth,
            policy,
        } => {
            let policy = policy_of(policy)?;
            let input = Input::load(source)?;
            let kinds = match (kind, &input) {
                (Some(k), _) => vec![*k],
                (None, Input::Spec(_)) => vec![
                    SpectrumKind::Lacunary,
                    SpectrumKind::Filled,
                    SpectrumKind::Full,
                ],
                (None, Input::Gaps(_)) => vec![SpectrumKind::Lacunary],
            };
            let mut by_kind = serde_json::Map::new();
            let mut estimates = Vec::new();
            for k in kinds {
                let r = ctx
                    .spectrum(&input, k, depth)
                    .and_then(|s| abscissa(&s, ABSCISSA_BRACKET, policy.tolerance, &policy));
                if let Ok(r) = &r {
                    estimates.push(r.estimate);
                }
                by_kind.insert(k.to_string(), part(r));
            }
            let mut body = json!({
                "input": input.describe(),
                "level": depth.level,
                "abscissa": by_kind,
                "dimension": estimates.first(),
            });
            match &input {
                Input::Spec(spec) => {
                    let level = depth.level as usize;
                    body["selfsimilar"] = if spec.is_self_similar() {
                        part(selfsimilar_report(spec))
                    } else {
                        Value::Null
                    };
                    body["symmetric"] = spec.symmetric_sequences().map_or(Value::Null, |seq| {
                        part(symmetric_dimension_and_delta(seq, &policy))
                    });
                    let lebesgue = lebesgue_zero(spec, level);
                    body["box_dimension"] = match lebesgue.verdict {
                        MeasureVerdict::Positive => Value::Null,
                        _ => part(
                            GapList::from_spec(spec, level, depth.budget)
                                .and_then(|g| g.box_dimension(&policy)),
                        ),
                    };
                    body["lebesgue"] = part(Ok(lebesgue));
                }
                Input::Gaps(g) => {
                    body["box_dimension"] =
                        part(GapList::from_lengths(g).and_then(|g| g.box_dimension(&policy)));
                }
            }
            let code = if estimates.is_empty() {
                exit::INCONCLUSIVE
            } else {
                exit::SUCCESS
            };
            finish(name, body, code)
        }
        Command::Indices {
            source,
            kind,
            depth,
            policy,
            lambda,
            mu_out,
        } => {
            let policy = policy_of(policy)?;
            let input = Input::load(source)?;
            let mu = ctx.spectrum(&input, *kind, depth)?.to_step_function()?;
            if let Some(path) = mu_out {
                crate::io::write_step_function(path, &mu)?;
            }
            let report = indices(&mu, &policy)?;
            let (d, route) = dimension(&ctx, &input, depth, &policy)?;
            let mu_d = mu.power(d)?;
            let summability = classify(&mu_d, &policy);
            let ecc = eccentricity(&mu_d, *lambda, &policy);
            let inconclusive = matches!(summability.verdict, Summability::Inconclusive)
                || matches!(&ecc, Ok(e) if e.verdict == EccentricityVerdict::Inconclusive);
            let body = json!({
                "input": input.describe(),
                "kind": kind,
                "level": depth.level,
                "ordering_holds": report.ordering_holds(),
                "indices": report,
                "dimension": { "value": d, "route": route },
                "summability_at_dimension": summability,
                "eccentricity": part(ecc),
                "halving": part(halving_ratio(&mu, &policy)),
            });
            finish(
                name,
                body,
                if inconclusive {
                    exit::INCONCLUSIVE
                } else {
                    exit::SUCCESS
                },
            )
        }
        Command::Zeta {
            source,
            kind,
            depth,
            policy,
            alphas,
            plot,
        } => {
            let policy = policy_of(policy)?;
            let input = Input::load(source)?;
            let s = ctx.spectrum(&input, *kind, depth)?;
            let n = s.total_multiplicity()?;
            let values = alphas
                .iter()
                .map(|&a| zeta_partial(&s, a, n))
                .collect::<Result<Vec<_>>>()?;
            let abs = abscissa(&s, ABSCISSA_BRACKET, policy.tolerance, &policy);
            if let Some(path) = plot {
                let d = abs.as_ref().map(|a| a.estimate).unwrap_or(0.0);
                let points = zeta_curve(&s, d, n)?;
                write_curve(path, ("s", "zeta"), &points)?;
            }
            let code = if abs.is_ok() {
                exit::SUCCESS
            } else {
                exit::INCONCLUSIVE
            };
            let body = json!({
                "input": input.describe(),
                "kind": kind,
                "level": depth.level,
                "values": values,
                "abscissa": part(abs),
            });
            finish(name, body, code)
        }
        Command::Trace {
            source,
            kind,
            depth,
            policy,
            exponent,
            procedures,
            function,
            plot,
        } => {
            let policy = policy_of(policy)?;
            let input = Input::load(source)?;
            let procedures = if procedures.is_empty() {
                LimitProcedure::standard()
            } else {
                procedures.clone()
            };
            let exponent = match exponent {
                Some(e) => *e,
                None => dimension(&ctx, &input, depth, &policy)?.0,
            };
            let reports = match function {
                None => {
                    let s = ctx.spectrum(&input, *kind, depth)?;
                    if let Some(path) = plot {
                        write_curve(path, ("log_x", "S_over_log_x"), &trace_curve(&s, exponent)?)?;
                    }
                    procedures
                        .iter()
                        .map(|p| dixmier(&s, exponent, p, &policy))
                        .collect::<Result<Vec<_>>>()?
                }
                Some(f) => {
                    let Input::Spec(spec) = &input else {
                        return Err(Error::Invalid(
                            "the trace of a function needs --spec".into(),
                        ));
                    };
                    let f = parse_function(f)?;
                    let hb = HbFunctional::new(
                        spec,
                        *kind,
                        exponent,
                        &f,
                        depth.level as usize,
                        depth.budget,
                    )?;
                    procedures
                        .iter()
                        .map(|p| hb.evaluate(p, &policy))
                        .collect::<Result<Vec<_>>>()?
                }
            };
            let spread = spread_of(reports, policy.tolerance);
            let body = json!({
                "input": input.describe(),
                "kind": kind,
                "level": depth.level,
                "exponent": exponent,
                "function": function,
                "traces": spread,
            });
            finish(name, body, exit::SUCCESS)
        }
        Command::Measure {
            spec,
            depth,
            policy,
            alpha,
            function,
            csv,
        } => {
            let policy = policy_of(policy)?;
            let spec = load_valid(&spec.spec)?;
            let input = Input::Spec(spec);
            let alpha = match alpha {
                Some(a) => *a,
                None => dimension(&ctx, &input, depth, &policy)?.0,
            };
            let Input::Spec(spec) = &input else {
                unreachable!()
            };
            let level = depth.level as usize;
            let m = homogeneous_measure(spec, alpha, level, depth.budget)?;
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(["sigma", "left", "right", "weight"])?;
                for c in &m.cells {
                    let sigma: String = c
                        .sigma
                        .iter()
                        .map(|b| b.to_string())
                        .collect::<Vec<_>>()
                        .join(".");
                    w.write_record([sigma, fmt(c.interval.0), fmt(c.interval.1), fmt(c.weight)])?;
                }
                w.flush()?;
            }
            let integral = function
                .as_deref()
                .map(parse_function)
                .transpose()?
                .map(|f| integrate(&m, &f));
            let coarser = level
                .checked_sub(1)
                .map(|l| homogeneous_measure(spec, alpha, l, depth.budget));
            let defect = coarser.map(|c| c.and_then(|c| c.refinement_defect(&m)));
            let body = json!({
                "spec_hash": spec.content_hash(),
                "level": level,
                "alpha": alpha,
                "cells": m.cells.len(),
                "total": m.total(),
                "largest_weight": m.cells.iter().map(|c| c.weight).fold(0.0, f64::max),
                "refinement_defect": defect.map(part),
                "warning": m.warning,
                "function": function,
                "integral": integral.map(part),
            });
            finish(name, body, exit::SUCCESS)
        }
        Command::Distance {
            spec,
            kind,
            depth,
            points,
        } => {
            let spec = load_valid(&spec.spec)?;
            let pairs = points
                .iter()
                .map(|p| parse_pair(p))
                .collect::<Result<Vec<_>>>()?;
            let g = build_graph(&spec, *kind, depth.level as usize, depth.budget)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["x", "y", "distance", "lacunary_deficit"])?;
            for (x, y) in pairs {
                let d = match connes_distance(&g, x, y) {
                    Ok(d) => d.finite().map_or_else(|| "inf".to_string(), fmt),
                    Err(Error::Invalid(msg)) => {
                        log::warn!("{msg}");
                        "undefined".to_string()
                    }
                    Err(e) => return Err(e),
                };
                let deficit =
                    lacunary_gap_sum_bound(&spec, x, y, depth.level as usize, depth.budget)?
                        .deficit;
                w.write_record([fmt(x), fmt(y), d, fmt(deficit)])?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            let text = String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?;
            Ok((text.trim_end().to_string(), exit::SUCCESS))
        }
        Command::Minkowski {
            source,
            depth,
            policy,
            d,
            gamma,
            eps_min,
            eps_max,
            per_decade,
            plot,
        } => {
            let policy = policy_of(policy)?;
            let input = Input::load(source)?;
            let gaps = match &input {
                Input::Spec(spec) => GapList::from_spec(spec, depth.level as usize, depth.budget)?,
                Input::Gaps(g) => GapList::from_lengths(g)?,
            };
            let d = match d {
                Some(d) => *d,
                None => dimension(&ctx, &input, depth, &policy)?.0,
            };
            let gauge = match gamma {
                Some(g) => GaugeFunction::PowerLog { d, gamma: *g },
                None => GaugeFunction::power(d)?,
            };
            let default = gaps.default_grid();
            let grid = EpsGrid {
                eps_min: eps_min.unwrap_or(default.eps_min),
                eps_max: eps_max.unwrap_or(default.eps_max),
                per_decade: *per_decade,
            };
            let report = crate::fractal::minkowski_content(&gaps, &gauge, &grid)?;
            if let Some(path) = plot {
                let points: Vec<(f64, f64)> = report
                    .samples
                    .iter()
                    .map(|&(e, v)| ((1.0 / e).ln(), v))
                    .collect();
                write_curve(path, ("log_inv_eps", "normalized_volume"), &points)?;
            }
            let body = json!({
                "input": input.describe(),
                "gauge": gauge,
                "grid": grid,
                "box_dimension": part(gaps.box_dimension(&policy)),
                "minkowski": report,
            });
            finish(name, body, exit::SUCCESS)
        }
        Command::Check { seed, depth } => {
            let report = appendix_suite(*seed, *depth, &WindowPolicy::default())?;
            let code = if report.pass {
                exit::SUCCESS
            } else {
                exit::INCONCLUSIVE
            };
            finish(
                name,
                json!({ "seed": seed, "depth": depth, "appendix": report }),
                code,
            )
        }
        Command::Report {
            spec,
            depth,
            policy,
            seed,
        } => {
            let policy = policy_of(policy)?;
            let spec = load_valid(&spec.spec)?;
            let level = depth.level.min(REPORT_LEVEL_CAP);
            let depth = Depth {
                level,
                budget: depth.budget,
            };
            let input = Input::Spec(spec);
            let Input::Spec(spec) = &input else {
                unreachable!()
            };
            let dim = dimension(&ctx, &input, &depth, &policy);
            let d = dim.as_ref().map(|x| x.0).ok();
            let mut kinds = serde_json::Map::new();
            for k in [
                SpectrumKind::Lacunary,
                SpectrumKind::Filled,
                SpectrumKind::Full,
            ] {
                let s = ctx.spectrum(&input, k, &depth);
                let entry = json!({
                    "abscissa": part(s.as_ref().map_err(Clone::clone).and_then(|s| abscissa(s, ABSCISSA_BRACKET, policy.tolerance, &policy))),
                    "indices": part(s.as_ref().map_err(Clone::clone).and_then(|s| indices(&s.to_step_function()?, &policy))),
                    "dixmier": match d {
                        Some(d) => part(s.as_ref().map_err(Clone::clone).and_then(|s| dixmier(s, d, &LimitProcedure::cesaro_log(), &policy))),
                        None => Value::Null,
                    },
                });
                kinds.insert(k.to_string(), entry);
            }
            let measure_level = (level as usize).min(REPORT_MEASURE_LEVEL);
            let lebesgue = lebesgue_zero(spec, level as usize);
            let gaps = GapList::from_spec(spec, level as usize, depth.budget);
            let minkowski = match (&gaps, d, lebesgue.verdict) {
                (Ok(g), Some(d), MeasureVerdict::Zero) if d > 0.0 => {
                    part(crate::fractal::minkowski_content(
                        g,
                        &GaugeFunction::power(d)?,
                        &g.default_grid(),
                    ))
                }
                _ => Value::Null,
            };
            let body = json!({
                "spec_hash": spec.content_hash(),
                "level": level,
                "dimension": part(dim.map(|(value, route)| json!({ "value": value, "route": route }))),
                "selfsimilar": if spec.is_self_similar() { part(selfsimilar_report(spec)) } else { Value::Null },
                "symmetric": spec.symmetric_sequences().map_or(Value::Null, |seq| part(symmetric_dimension_and_delta(seq, &policy))),
                "spectra": kinds,
                "lebesgue": lebesgue,
                "box_dimension": part(gaps.as_ref().map_err(Clone::clone).and_then(|g| g.box_dimension(&policy))),
                "minkowski": minkowski,
                "measure": part(d.ok_or_else(|| Error::InsufficientData("no dimension".into())).and_then(|d| {
                    let m = homogeneous_measure(spec, d, measure_level, depth.budget)?;
                    Ok(json!({ "level": measure_level, "cells": m.cells.len(), "total": m.total() }))
                })),
                "check": part(appendix_suite(*seed, 10_000, &policy).map(|r| json!({ "pass": r.pass, "min_slack": r.sweep.min_slack }))),
            });
            finish(name, body, exit::SUCCESS)
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{:.*e}", crate::io::REPORT_DIGITS - 1, x)
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::Invalid(format!("expected \"x,y\", got {s:?}")))?;
    let x = crate::fractal::parse_real(x.trim()).map_err(Error::Invalid)?;
    let y = crate::fractal::parse_real(y.trim()).map_err(Error::Invalid)?;
    Ok((x, y))
}

/// `(s, ζ(s))` on `(d, d + 2]`, with the known tail included where available.
fn zeta_curve(s: &Spectrum, d: f64, n: u64) -> Result<Vec<(f64, f64)>> {
    (1..=PLOT_POINTS)
        .map(|i| {
            let a = d + 2.0 * i as f64 / PLOT_POINTS as f64;
            let r = zeta_partial(s, a, n)?;
            Ok((a, r.total().unwrap_or(r.partial_sum)))
        })
        .collect()
}

/// `(log x, S(x)/log x)` with `S` the partial integral of `μ^exponent`.
fn trace_curve(s: &Spectrum, exponent: f64) -> Result<Vec<(f64, f64)>> {
    let mu = s.to_step_function()?.power(exponent)?;
    let hi = mu.total_width().ln();
    if !(hi > 1.0) {
        return Err(Error::InsufficientData("spectrum too short to plot".into()));
    }
    (0..PLOT_POINTS)
        .map(|i| {
            let t = 1.0 + (hi - 1.0) * i as f64 / (PLOT_POINTS - 1) as f64;
            Ok((t, mu.integral_up(t.exp().min(mu.total_width()))? / t))
        })
        .collect()
}
