//! Named test functions evaluated at interval endpoints.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Quantization used to look up sampled values by position.
const SAMPLE_QUANTUM: f64 = 1e-13;

fn sample_key(x: f64) -> i64 {
    (x / SAMPLE_QUANTUM).round() as i64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    Constant {
        value: f64,
    },
    /// Indicator of the closed interval `[a, b]`.
    Indicator {
        a: f64,
        b: f64,
    },
    /// The identity `x ↦ x`.
    Linear,
    /// Values given at finitely many points; undefined elsewhere.
    Samples {
        #[serde(skip)]
        values: BTreeMap<i64, f64>,
        source: String,
    },
}

impl TestFunction {
    pub fn constant(value: f64) -> Self {
        TestFunction::Constant { value }
    }

    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        if !(a <= b) {
            return Err(Error::Invalid(format!(
                "indicator needs a <= b, got [{a}, {b}]"
            )));
        }
        Ok(TestFunction::Indicator { a, b })
    }

    pub fn samples<I>(points: I, source: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        TestFunction::Samples {
            values: points
                .into_iter()
                .map(|(x, y)| (sample_key(x), y))
                .collect(),
            source: source.into(),
        }
    }

    /// Reads `x,f` rows from a CSV file with a header.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut points = Vec::new();
        for row in reader.deserialize() {
            let (x, y): (f64, f64) = row?;
            points.push((x, y));
        }
        Ok(Self::samples(points, path.display().to_string()))
    }

    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            TestFunction::Constant { value } => Some(*value),
            TestFunction::Indicator { a, b } => Some(if *a <= x && x <= *b { 1.0 } else { 0.0 }),
            TestFunction::Linear => Some(x),
            TestFunction::Samples { values, .. } => values.get(&sample_key(x)).copied(),
        }
    }

    pub fn eval_or_err(&self, x: f64) -> Result<f64> {
        self.eval(x)
            .ok_or_else(|| Error::Invalid(format!("function {self} undefined at {x}")))
    }

    /// Bound on `|f(x) − f(y)|` for `|x − y| ≤ delta` inside `[lo, hi]`, or
    /// `None` when the cell may straddle a jump.
    pub fn oscillation(&self, lo: f64, hi: f64) -> Option<f64> {
        match self {
            TestFunction::Constant { .. } => Some(0.0),
            TestFunction::Linear => Some(hi - lo),
            TestFunction::Indicator { a, b } => {
                let inside = |x: f64| *a <= x && x <= *b;
                if inside(lo) == inside(hi) && !(lo < *a && *a <= hi) && !(lo <= *b && *b < hi) {
                    Some(0.0)
                } else {
                    None
                }
            }
            TestFunction::Samples { values, .. } => {
                let range = values.range(sample_key(lo)..=sample_key(hi));
                let (mn, mx) = range
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(mn, mx), (_, &v)| {
                        (mn.min(v), mx.max(v))
                    });
                (mx >= mn).then_some(mx - mn)
            }
        }
    }

    pub fn is_nonnegative_on(&self, xs: &[f64]) -> bool {
        xs.iter().all(|&x| self.eval(x).is_none_or(|v| v >= 0.0))
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Constant { value } => write!(f, "const:{value}"),
            TestFunction::Indicator { a, b } => write!(f, "indicator:{a},{b}"),
            TestFunction::Linear => f.write_str("linear"),
            TestFunction::Samples { source, .. } => write!(f, "csv:{source}"),
        }
    }
}

/// Parses `const`, `const:c`, `indicator:a,b`, `linear` or `csv:path`;
/// numbers may be written as fractions `p/q`.
impl FromStr for TestFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = s.split_once(':').unwrap_or((s, ""));
        let real = |t: &str| crate::fractal::parse_real(t.trim()).map_err(Error::Invalid);
        match head {
            "const" if arg.is_empty() => Ok(Self::constant(1.0)),
            "const" => Ok(Self::constant(real(arg)?)),
            "linear" if arg.is_empty() => Ok(TestFunction::Linear),
            "indicator" => {
                let (a, b) = arg.split_once(',').ok_or_else(|| {
                    Error::Invalid(format!("indicator needs two bounds, got {arg:?}"))
                })?;
                Self::indicator(real(a)?, real(b)?)
            }
            "csv" if !arg.is_empty() => Self::from_csv(Path::new(arg)),
            _ => Err(Error::Invalid(format!("unknown test function {s:?}"))),
        }
    }
}
