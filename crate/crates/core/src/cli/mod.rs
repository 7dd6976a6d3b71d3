//! Command-line front end.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::dirac::SpectrumKind;
use crate::error::Error;
use crate::fractal::DEFAULT_BUDGET;
use crate::traces::LimitProcedure;

pub const SCHEMA_VERSION: u32 = 1;

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INCONCLUSIVE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VALIDATION: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "fractal-traces",
    version,
    about = "Spectral triples on limit fractals of the line"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Directory for cached spectra.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Fractal spec (JSON).
    #[arg(long, required_unless_present = "gaps", conflicts_with = "gaps")]
    pub spec: Option<PathBuf>,
    /// Gap lengths, one per line, non-increasing.
    #[arg(long)]
    pub gaps: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpecOnly {
    /// Fractal spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Args)]
pub struct Depth {
    /// Construction level at which spectra are cut.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(0..=64))]
    pub level: u32,
    /// Largest number of cells or intervals to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Tolerance for verdicts and comparisons.
    #[arg(long, default_value_t = 1e-3)]
    pub tolerance: f64,
    /// JSON file overriding the full window policy.
    #[arg(long)]
    pub policy: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a spec against the limit-fractal conditions.
    Validate(SpecOnly),
    /// Eigenvalues of |D|^{-1}, optionally written as a spectrum file.
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "lacunary")]
        kind: SpectrumKind,
        #[command(flatten)]
        depth: Depth,
        /// Write `value,multiplicity` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dimension by zeta abscissa, closed forms and gap counting.
    Dim {
        #[command(flatten)]
        source: Source,
        /// Only this kind; all three by default.
        #[arg(long)]
        kind: Option<SpectrumKind>,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Matuszewska indices, summability, eccentricity and halving ratio.
    Indices {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "lacunary")]
        kind: SpectrumKind,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Dilation used by the eccentricity test.
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
        /// Write the eigenvalue function as `value,width` rows here.
        #[arg(long)]
        mu_out: Option<PathBuf>,
    },
    /// Partial zeta sums with exact tails and the abscissa.
    Zeta {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "lacunary")]
        kind: SpectrumKind,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Exponents at which to evaluate (repeatable).
        #[arg(long = "alpha", default_values_t = [1.0])]
        alphas: Vec<f64>,
        /// Write an `s,zeta` table here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Dixmier traces, or the trace state on a function.
    Trace {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "lacunary")]
        kind: SpectrumKind,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Power of |D|^{-1}; the dimension by default.
        #[arg(long)]
        exponent: Option<f64>,
        /// Limit procedures (repeatable): cesaro_log, geometric, level, witness.
        #[arg(long = "procedure")]
        procedures: Vec<LimitProcedure>,
        /// Test function: const, indicator:a,b, linear or csv:path.
        #[arg(long)]
        function: Option<String>,
        /// Write `log x, S(x)/log x` here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Homogeneous measure of the level cells.
    Measure {
        #[command(flatten)]
        spec: SpecOnly,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Exponent of the measure; the dimension by default.
        #[arg(long)]
        alpha: Option<f64>,
        /// Integrate this test function.
        #[arg(long)]
        function: Option<String>,
        /// Write `sigma,left,right,weight` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Connes distances between interval endpoints, as CSV.
    Distance {
        #[command(flatten)]
        spec: SpecOnly,
        #[arg(long, default_value = "full")]
        kind: SpectrumKind,
        #[command(flatten)]
        depth: Depth,
        /// Endpoint pairs "x,y" (repeatable; fractions allowed).
        #[arg(long = "points", required = true)]
        points: Vec<String>,
    },
    /// Minkowski content from tube volumes.
    Minkowski {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Gauge exponent; the dimension by default.
        #[arg(long)]
        d: Option<f64>,
        /// Logarithmic correction of the gauge.
        #[arg(long)]
        gamma: Option<f64>,
        /// Smallest tube radius; chosen from the resolved gaps by default
        #[arg(long)]
        eps_min: Option<f64>,
        /// Largest tube radius
        #[arg(long)]
        eps_max: Option<f64>,
        #[arg(long, default_value_t = 20)]
        per_decade: usize,
        /// Write `log(1/eps), normalized volume` here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Finite-matrix and diagonal checks of the trace inequalities.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of eigenvalues in the diagonal Hölder cases.
        #[arg(long, default_value_t = 100_000)]
        depth: usize,
    },
    /// Everything above for one spec.
    Report {
        #[command(flatten)]
        spec: SpecOnly,
        #[command(flatten)]
        depth: Depth,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Spectrum { .. } => "spectrum",
            Command::Dim { .. } => "dim",
            Command::Indices { .. } => "indices",
            Command::Zeta { .. } => "zeta",
            Command::Trace { .. } => "trace",
            Command::Measure { .. } => "measure",
            Command::Distance { .. } => "distance",
            Command::Minkowski { .. } => "minkowski",
            Command::Check { .. } => "check",
            Command::Report { .. } => "report",
        }
    }
}

pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    RunConfig::try_parse_from(argv)
}

/// What a command produced: the document to emit and the exit code.
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) => exit::VALIDATION,
        Error::InsufficientData(_)
        | Error::NotStraddling { .. }
        | Error::NoConvergence(_)
        | Error::TailUnknown { .. } => exit::INCONCLUSIVE,
        Error::Invalid(_)
        | Error::Budget { .. }
        | Error::LevelOutOfRange { .. }
        | Error::Shape(_)
        | Error::Io(_) => exit::USAGE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Invalid(_) => "invalid",
        Error::TailUnknown { .. } => "tail_unknown",
        Error::InsufficientData(_) => "insufficient_data",
        Error::Budget { .. } => "budget",
        Error::LevelOutOfRange { .. } => "level_out_of_range",
        Error::Validation(_) => "validation",
        Error::NotStraddling { .. } => "not_straddling",
        Error::NoConvergence(_) => "no_convergence",
        Error::Shape(_) => "shape",
        Error::Io(_) => "io",
    }
}

pub fn error_document(command: &str, kind: &str, message: &str, details: &[String]) -> String {
    let v = json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "error": { "kind": kind, "message": message, "details": details },
    });
    serde_json::to_string_pretty(&v).expect("plain JSON")
}

/// Runs one command, writing its report to `--out` or returning it for stdout.
pub fn run(config: &RunConfig) -> Outcome {
    let name = config.command.name();
    match commands::dispatch(config) {
        Ok((body, code)) => match &config.out {
            Some(path) => match std::fs::write(path, &body) {
                Ok(()) => Outcome {
                    body: String::new(),
                    code,
                },
                Err(e) => failure(name, &Error::from(e)),
            },
            None => Outcome { body, code },
        },
        Err(e) => failure(name, &e),
    }
}

fn failure(name: &str, e: &Error) -> Outcome {
    log::error!("{name}: {e}");
    let details = match e {
        Error::Validation(problems) => problems.clone(),
        _ => Vec::new(),
    };
    Outcome {
        body: error_document(name, error_kind(e), &e.to_string(), &details),
        code: exit_code(e),
    }
}

pub(crate) fn with_header(command: &str, mut body: Value) -> Value {
    if let Value::Object(m) = &mut body {
        m.insert("schema".into(), json!(SCHEMA_VERSION));
        m.insert("command".into(), json!(command));
    }
    body
}
