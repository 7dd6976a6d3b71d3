//! File formats: step functions, spectrum caches, gap lists, specs and
//! canonical report JSON.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dirac::{spectrum, GeneratorData, LevelBlock, Spectrum, SpectrumKind};
use crate::error::{Error, Result};
use crate::fractal::FractalSpec;
use crate::multiset::Eigen;
use crate::seqcore::StepFunction;

/// Significant digits of floats in reports.
pub const REPORT_DIGITS: usize = 12;

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Debug, Serialize, Deserialize)]
struct StepMeta {
    truncated: bool,
    total_width: ExtRealRepr,
}

/// `ExtReal` as a number or the string `"inf"`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ExtRealRepr {
    Finite(f64),
    Named(String),
}

/// Writes `value,width` rows and a sidecar `<path>.json` with the truncation flag.
pub fn write_step_function(path: &Path, mu: &StepFunction) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["value", "width"])?;
    for s in mu.steps() {
        w.serialize((s.value, s.width))?;
    }
    w.flush()?;
    let meta = StepMeta {
        truncated: mu.is_truncated(),
        total_width: ExtRealRepr::Finite(mu.total_width()),
    };
    fs::write(sidecar(path), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

pub fn read_step_function(path: &Path) -> Result<StepFunction> {
    let mut r = csv::Reader::from_path(path)?;
    let mut pairs = Vec::new();
    for row in r.deserialize() {
        let s: (f64, f64) = row?;
        pairs.push(s);
    }
    let meta_path = sidecar(path);
    let truncated = if meta_path.exists() {
        let meta: StepMeta = serde_json::from_str(&fs::read_to_string(&meta_path)?)?;
        if let ExtRealRepr::Named(n) = &meta.total_width {
            if n != "inf" {
                return Err(Error::Io(format!(
                    "bad total_width {n:?} in {}",
                    meta_path.display()
                )));
            }
        }
        meta.truncated
    } else {
        true
    };
    Ok(StepFunction::build(pairs)?.with_truncation(truncated))
}

/// Reads one positive length per line, non-increasing; blank lines and
/// lines starting with `#` are skipped.
pub fn read_gaps(path: &Path) -> Result<Vec<f64>> {
    parse_gaps(&fs::read_to_string(path)?)
}

pub fn parse_gaps(text: &str) -> Result<Vec<f64>> {
    let mut gaps: Vec<f64> = Vec::new();
    let mut problems = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => {
                if gaps.last().is_some_and(|&prev| x > prev) {
                    problems.push(format!("line {}: {x} exceeds the previous length", i + 1));
                }
                gaps.push(x);
            }
            _ => problems.push(format!("line {}: {line:?} is not a positive length", i + 1)),
        }
    }
    if gaps.is_empty() && problems.is_empty() {
        problems.push("no gap lengths".into());
    }
    if problems.is_empty() {
        Ok(gaps)
    } else {
        Err(Error::Validation(problems))
    }
}

pub fn write_gaps(path: &Path, gaps: &[f64]) -> Result<()> {
    let text: String = gaps.iter().map(|g| format!("{g:e}\n")).collect();
    fs::write(path, text)?;
    Ok(())
}

pub fn load_spec(path: &Path) -> Result<FractalSpec> {
    FractalSpec::from_json(&fs::read_to_string(path)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectrumMeta {
    kind: SpectrumKind,
    level_cutoff: usize,
    spec_hash: Option<String>,
    provenance: String,
    levels: Vec<LevelBlock>,
    generator: Option<GeneratorData>,
}

/// Writes `value,multiplicity` rows, descending, and a sidecar with the
/// level structure.
pub fn write_spectrum(path: &Path, s: &Spectrum, spec_hash: Option<&str>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["value", "multiplicity"])?;
    for e in &s.entries {
        w.serialize((e.value, e.multiplicity))?;
    }
    w.flush()?;
    let meta = SpectrumMeta {
        kind: s.kind,
        level_cutoff: s.level_cutoff,
        spec_hash: spec_hash.map(str::to_owned),
        provenance: s.provenance.clone(),
        levels: s.levels.clone(),
        generator: s.generator.clone(),
    };
    fs::write(sidecar(path), serde_json::to_string(&meta)?)?;
    Ok(())
}

/// Reads a spectrum file and its sidecar, returning the recorded spec hash.
pub fn read_spectrum(path: &Path) -> Result<(Spectrum, Option<String>)> {
    let meta: SpectrumMeta = serde_json::from_str(&fs::read_to_string(sidecar(path))?)?;
    let mut r = csv::Reader::from_path(path)?;
    let mut entries = Vec::new();
    for row in r.deserialize() {
        let (value, multiplicity): (f64, u64) = row?;
        entries.push(Eigen {
            value,
            multiplicity,
        });
    }
    if entries.windows(2).any(|w| !(w[0].value > w[1].value)) {
        return Err(Error::Io(format!(
            "{} is not strictly decreasing",
            path.display()
        )));
    }
    let s = Spectrum {
        kind: meta.kind,
        level_cutoff: meta.level_cutoff,
        entries,
        levels: meta.levels,
        generator: meta.generator,
        provenance: meta.provenance,
    };
    Ok((s, meta.spec_hash))
}

/// Spectra stored as `{hash}-{kind}-{level}.csv` under a directory.
pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn path_for(&self, hash: &str, kind: SpectrumKind, level: usize) -> PathBuf {
        self.dir.join(format!("{hash}-{kind}-{level}.csv"))
    }

    /// Cached spectrum if present and consistent, else computed and stored.
    pub fn load_or_build(
        &self,
        spec: &FractalSpec,
        kind: SpectrumKind,
        level: usize,
        budget: u64,
    ) -> Result<Spectrum> {
        let hash = spec.content_hash();
        let path = self.path_for(&hash, kind, level);
        if path.exists() {
            match read_spectrum(&path) {
                Ok((s, Some(h))) if h == hash && s.kind == kind && s.level_cutoff == level => {
                    log::info!("spectrum cache hit: {}", path.display());
                    return Ok(s);
                }
                Ok(_) => log::warn!(
                    "spectrum cache entry {} does not match, rebuilding",
                    path.display()
                ),
                Err(e) => log::warn!(
                    "spectrum cache entry {} unreadable ({e}), rebuilding",
                    path.display()
                ),
            }
        } else {
            log::info!("spectrum cache miss: {}", path.display());
        }
        let s = spectrum(spec, kind, level, budget)?;
        write_spectrum(&path, &s, Some(&hash))?;
        Ok(s)
    }
}

fn round_float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        });
    }
    let rounded: f64 = format!("{:.*e}", REPORT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round_float(n.as_f64().expect("f64 number")),
        Value::Array(xs) => Value::Array(xs.into_iter().map(round_value).collect()),
        Value::Object(m) => {
            Value::Object(m.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

/// Pretty JSON with keys sorted and floats rounded to 12 significant digits.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = round_value(serde_json::to_value(value)?);
    Ok(serde_json::to_string_pretty(&v)?)
}

/// Two-column `x,y` CSV for plotting.
pub fn write_curve(path: &Path, header: (&str, &str), points: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([header.0, header.1])?;
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::DEFAULT_BUDGET;

    #[test]
    fn gaps_parsing() {
        assert_eq!(
            parse_gaps("# header\n0.5\n\n0.25\n0.25\n").unwrap(),
            vec![0.5, 0.25, 0.25]
        );
        assert!(parse_gaps("0.25\n0.5\n").is_err());
        assert!(parse_gaps("-1\n").is_err());
        assert!(parse_gaps("").is_err());
    }

    #[test]
    fn rounding() {
        #[derive(Serialize)]
        struct Row {
            b: f64,
            a: (u32, crate::ext::ExtReal),
        }
        let s = canonical_json(&Row {
            b: 0.1 + 0.2,
            a: (1, crate::ext::ExtReal::Infinity),
        })
        .unwrap();
        assert_eq!(
            s,
            "{\n  \"a\": [\n    1,\n    \"inf\"\n  ],\n  \"b\": 0.3\n}"
        );
    }

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let mu = StepFunction::build([(1.0 / 3.0, 2.0), (0.1, 0.5)])
            .unwrap()
            .with_truncation(true);
        let p = dir.path().join("mu.csv");
        write_step_function(&p, &mu).unwrap();
        assert_eq!(read_step_function(&p).unwrap(), mu);

        let spec = FractalSpec::cantor();
        let s = spectrum(&spec, SpectrumKind::Full, 4, DEFAULT_BUDGET).unwrap();
        let p = dir.path().join("s.csv");
        write_spectrum(&p, &s, Some("h")).unwrap();
        let (back, hash) = read_spectrum(&p).unwrap();
        assert_eq!(back, s);
        assert_eq!(hash.as_deref(), Some("h"));
    }
}
