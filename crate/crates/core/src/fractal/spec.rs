use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

/// A contracting similarity of `[a, b]`, given by its ratio and the left
/// endpoint of its image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    #[serde(deserialize_with = "real")]
    pub lambda: f64,
    #[serde(deserialize_with = "real")]
    pub offset: f64,
    #[serde(default)]
    pub orientation: Orientation,
}

impl Similarity {
    pub fn new(lambda: f64, offset: f64) -> Self {
        Self {
            lambda,
            offset,
            orientation: Orientation::Plus,
        }
    }
}

/// Per-level numbers of cells and ratios of a symmetric fractal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricSequences {
    pub p: Vec<u32>,
    pub lambda: Vec<f64>,
    pub period: Option<usize>,
}

impl SymmetricSequences {
    pub fn new(p: Vec<u32>, lambda: Vec<f64>, period: Option<usize>) -> Result<Self> {
        if p.len() != lambda.len() || p.is_empty() {
            return Err(Error::Invalid(format!(
                "symmetric sequences need equal nonzero lengths, got {} and {}",
                p.len(),
                lambda.len()
            )));
        }
        check_period(period, p.len())?;
        Ok(Self { p, lambda, period })
    }

    /// `(p_n, λ_n)` for `n ≥ 1`, unrolling the periodic tail.
    pub fn get(&self, n: usize) -> Option<(u32, f64)> {
        let i = unroll(n, self.p.len(), self.period)?;
        Some((self.p[i], self.lambda[i]))
    }

    pub fn stored_len(&self) -> usize {
        self.p.len()
    }

    /// Gap between neighbouring cells at level `n` relative to the parent length.
    pub fn gap(&self, n: usize) -> Option<f64> {
        let (p, l) = self.get(n)?;
        Some((1.0 - f64::from(p) * l) / f64::from(p - 1))
    }
}

fn check_period(period: Option<usize>, len: usize) -> Result<()> {
    match period {
        Some(0) => Err(Error::Invalid("tail period must be positive".into())),
        Some(k) if k > len => Err(Error::Invalid(format!(
            "tail period {k} exceeds the {len} stored levels"
        ))),
        _ => Ok(()),
    }
}

/// Zero-based stored index of level `n ≥ 1`.
fn unroll(n: usize, len: usize, period: Option<usize>) -> Option<usize> {
    if n == 0 {
        return None;
    }
    if n <= len {
        return Some(n - 1);
    }
    let k = period?;
    let start = len - k;
    Some(start + (n - 1 - start) % k)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shorthand {
    ExplicitLevels,
    SelfSimilar,
    Symmetric(SymmetricSequences),
}

/// A limit fractal of `[a, b]`: one list of similarities per level, the
/// last `period` levels repeating forever when a tail is declared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FractalSpec {
    interval: (f64, f64),
    levels: Vec<Vec<Similarity>>,
    tail_period: Option<usize>,
    shorthand: Shorthand,
}

impl FractalSpec {
    pub fn explicit(
        interval: (f64, f64),
        levels: Vec<Vec<Similarity>>,
        period: Option<usize>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Invalid("at least one level is required".into()));
        }
        check_period(period, levels.len())?;
        Ok(Self {
            interval,
            levels: levels.into_iter().map(sorted).collect(),
            tail_period: period,
            shorthand: Shorthand::ExplicitLevels,
        })
    }

    pub fn self_similar(interval: (f64, f64), maps: Vec<Similarity>) -> Self {
        Self {
            interval,
            levels: vec![sorted(maps)],
            tail_period: Some(1),
            shorthand: Shorthand::SelfSimilar,
        }
    }

    /// Evenly spaced cells: `p_n` copies of ratio `λ_n` with equal gaps,
    /// the outer ones touching the endpoints.
    pub fn symmetric(interval: (f64, f64), seq: SymmetricSequences) -> Self {
        let (a, b) = interval;
        let span = b - a;
        let levels = (0..seq.stored_len())
            .map(|i| {
                let (p, l) = (seq.p[i], seq.lambda[i]);
                let cell = l * span;
                let gap = if p >= 2 {
                    span * (1.0 - f64::from(p) * l) / f64::from(p - 1)
                } else {
                    0.0
                };
                (0..p.max(1))
                    .map(|j| Similarity::new(l, a + f64::from(j) * (cell + gap)))
                    .collect()
            })
            .collect();
        Self {
            interval,
            levels,
            tail_period: seq.period,
            shorthand: Shorthand::Symmetric(seq),
        }
    }

    /// Middle-third Cantor set on `[0, 1]`.
    pub fn cantor() -> Self {
        Self::self_similar(
            (0.0, 1.0),
            vec![
                Similarity::new(1.0 / 3.0, 0.0),
                Similarity::new(1.0 / 3.0, 2.0 / 3.0),
            ],
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::Validation(vec![e.to_string()]))?;
        file.into_spec()
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn span(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    pub fn tail_period(&self) -> Option<usize> {
        self.tail_period
    }

    pub fn shorthand(&self) -> &Shorthand {
        &self.shorthand
    }

    pub fn symmetric_sequences(&self) -> Option<&SymmetricSequences> {
        match &self.shorthand {
            Shorthand::Symmetric(s) => Some(s),
            _ => None,
        }
    }

    /// A single generator repeated at every level.
    pub fn is_self_similar(&self) -> bool {
        self.levels.len() == 1 && self.tail_period == Some(1)
    }

    pub fn stored_levels(&self) -> &[Vec<Similarity>] {
        &self.levels
    }

    /// Largest available level, `None` when a periodic tail makes it unbounded.
    pub fn max_level(&self) -> Option<usize> {
        match self.tail_period {
            Some(_) => None,
            None => Some(self.levels.len()),
        }
    }

    /// Generator of level `n ≥ 1`, sorted by offset.
    pub fn level(&self, n: usize) -> Result<&[Similarity]> {
        unroll(n, self.levels.len(), self.tail_period)
            .map(|i| self.levels[i].as_slice())
            .ok_or(Error::LevelOutOfRange { level: n })
    }

    pub fn ratios(&self, n: usize) -> Result<Vec<f64>> {
        Ok(self.level(n)?.iter().map(|s| s.lambda).collect())
    }

    /// Gaps between consecutive images at level `n`, relative to `b − a`.
    pub fn relative_gaps(&self, n: usize) -> Result<Vec<f64>> {
        let span = self.span();
        let maps = self.level(n)?;
        Ok(maps
            .windows(2)
            .map(|w| (w[1].offset - (w[0].offset + w[0].lambda * span)) / span)
            .collect())
    }

    /// Hex SHA-256 of the canonical serialized form.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("spec serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    /// Every violated condition, with level and map indices.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (a, b) = self.interval;
        if !(a.is_finite() && b.is_finite() && a < b) {
            out.push(format!("interval [{a}, {b}] must satisfy a < b"));
            return out;
        }
        let span = b - a;
        let tol = 1e-12 * span.max(a.abs()).max(b.abs());
        if let Shorthand::Symmetric(seq) = &self.shorthand {
            for (i, (&p, &l)) in seq.p.iter().zip(&seq.lambda).enumerate() {
                if p < 2 {
                    out.push(format!("level {}: p = {p} must be at least 2", i + 1));
                }
                if !(f64::from(p) * l < 1.0) {
                    out.push(format!(
                        "level {}: p·λ = {} violates p·λ < 1",
                        i + 1,
                        f64::from(p) * l
                    ));
                }
            }
        }
        for (i, maps) in self.levels.iter().enumerate() {
            let n = i + 1;
            if maps.is_empty() {
                out.push(format!("level {n}: no maps"));
                continue;
            }
            for (j, m) in maps.iter().enumerate() {
                if !(m.lambda > 0.0 && m.lambda < 1.0) {
                    out.push(format!(
                        "level {n} map {j}: ratio {} outside (0,1)",
                        m.lambda
                    ));
                }
                let right = m.offset + m.lambda * span;
                if m.offset < a - tol || right > b + tol {
                    out.push(format!(
                        "level {n} map {j}: image [{}, {right}] not inside [{a}, {b}] (condition (i))",
                        m.offset
                    ));
                }
            }
            for (j, w) in maps.windows(2).enumerate() {
                let right = w[0].offset + w[0].lambda * span;
                if w[1].offset <= right + tol {
                    out.push(format!(
                        "level {n} maps {j} and {}: images intersect (condition (ii))",
                        j + 1
                    ));
                }
            }
            let first = maps[0].offset;
            let last = maps.last().map(|m| m.offset + m.lambda * span).unwrap_or(a);
            if (first - a).abs() > tol || (last - b).abs() > tol {
                out.push(format!(
                    "level {n}: images do not cover both endpoints {a} and {b} (condition (iii))"
                ));
            }
        }
        out
    }

    pub fn validate(self) -> Result<ValidSpec> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(ValidSpec(self))
        } else {
            Err(Error::Validation(problems))
        }
    }
}

fn sorted(mut maps: Vec<Similarity>) -> Vec<Similarity> {
    maps.sort_by(|x, y| x.offset.total_cmp(&y.offset));
    maps
}

/// A fractal spec that passed [`FractalSpec::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidSpec(FractalSpec);

impl ValidSpec {
    pub fn into_inner(self) -> FractalSpec {
        self.0
    }
}

impl Deref for ValidSpec {
    type Target = FractalSpec;
    fn deref(&self) -> &FractalSpec {
        &self.0
    }
}

impl fmt::Display for FractalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.shorthand {
            Shorthand::ExplicitLevels => "explicit",
            Shorthand::SelfSimilar => "self-similar",
            Shorthand::Symmetric(_) => "symmetric",
        };
        write!(
            f,
            "{kind} fractal on [{}, {}] with {} stored levels",
            self.interval.0,
            self.interval.1,
            self.levels.len()
        )?;
        if let Some(k) = self.tail_period {
            write!(f, ", period {k}")?;
        }
        Ok(())
    }
}

/// A real given as a JSON number or a string such as `"2/3"`.
fn real<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    RealText::deserialize(d)?
        .value()
        .map_err(serde::de::Error::custom)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RealText {
    Number(f64),
    Text(String),
}

impl RealText {
    fn value(&self) -> std::result::Result<f64, String> {
        match self {
            RealText::Number(v) => Ok(*v),
            RealText::Text(s) => parse_real(s),
        }
    }
}

pub fn parse_real(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: f64 = d
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            n / d
        }
        None => s.parse().map_err(|_| format!("bad number {s:?}"))?,
    };
    if parsed.is_finite() {
        Ok(parsed)
    } else {
        Err(format!("non-finite number {s:?}"))
    }
}

#[derive(Deserialize)]
struct Real(#[serde(deserialize_with = "real")] f64);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    interval: [Real; 2],
    generator: GeneratorFile,
    #[serde(default)]
    tail: Option<TailFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TailFile {
    period: usize,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum GeneratorFile {
    SelfSimilar { maps: Vec<Similarity> },
    Symmetric { p: Vec<u32>, lambda: Vec<Real> },
    ExplicitLevels { levels: Vec<Vec<Similarity>> },
}

impl SpecFile {
    fn into_spec(self) -> Result<FractalSpec> {
        let interval = (self.interval[0].0, self.interval[1].0);
        let period = self.tail.map(|t| t.period);
        match self.generator {
            GeneratorFile::SelfSimilar { maps } => {
                if period.is_some_and(|k| k != 1) {
                    return Err(Error::Validation(vec![
                        "self-similar generators have tail period 1".into(),
                    ]));
                }
                Ok(FractalSpec::self_similar(interval, maps))
            }
            GeneratorFile::Symmetric { p, lambda } => {
                let seq =
                    SymmetricSequences::new(p, lambda.into_iter().map(|r| r.0).collect(), period)?;
                Ok(FractalSpec::symmetric(interval, seq))
            }
            GeneratorFile::ExplicitLevels { levels } => {
                FractalSpec::explicit(interval, levels, period)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_is_valid() {
        let spec = FractalSpec::from_json(
            r#"{"interval":[0,1],"generator":{"kind":"self_similar","maps":[
                {"lambda":"1/3","offset":0},{"lambda":"1/3","offset":"2/3"}]}}"#,
        )
        .unwrap();
        assert!(spec.is_self_similar());
        spec.validate().unwrap();
    }

    #[test]
    fn overlapping_maps_violate_disjointness() {
        let spec = FractalSpec::explicit(
            (0.0, 1.0),
            vec![vec![Similarity::new(0.6, 0.0), Similarity::new(0.6, 0.4)]],
            Some(1),
        )
        .unwrap();
        let Err(Error::Validation(problems)) = spec.validate() else {
            panic!("expected validation failure")
        };
        assert!(problems.iter().any(|p| p.contains("condition (ii)")));
    }

    #[test]
    fn symmetric_boundary_is_rejected() {
        let seq = SymmetricSequences::new(vec![2], vec![0.5], Some(1)).unwrap();
        let Err(Error::Validation(problems)) = FractalSpec::symmetric((0.0, 1.0), seq).validate()
        else {
            panic!("expected validation failure")
        };
        assert!(problems.iter().any(|p| p.contains("p·λ")));
    }

    #[test]
    fn periodic_levels_unroll() {
        let seq = SymmetricSequences::new(vec![2, 3], vec![0.25, 1.0 / 6.0], Some(2)).unwrap();
        assert_eq!(seq.get(5), Some((2, 0.25)));
        assert_eq!(seq.get(6).unwrap().0, 3);
        let spec = FractalSpec::symmetric((0.0, 1.0), seq);
        assert_eq!(spec.level(7).unwrap().len(), 2);
        assert_eq!(spec.max_level(), None);
    }

    #[test]
    fn fractions_parse() {
        assert_eq!(parse_real("2/3").unwrap(), 2.0 / 3.0);
        assert!(parse_real("x").is_err());
    }
}
