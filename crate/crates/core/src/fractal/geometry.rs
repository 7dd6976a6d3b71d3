use rayon::prelude::*;
use serde::Serialize;

use super::spec::{FractalSpec, Orientation, Similarity};
use crate::error::{Error, Result};
use crate::multiset::{coalesce, overflow, Eigen};

/// Default cap on enumerated cells or intervals.
pub const DEFAULT_BUDGET: u64 = 1 << 23;

/// `x ↦ scale·x + shift`; `scale` is negative for reflections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Affine {
    pub scale: f64,
    pub shift: f64,
}

impl Affine {
    const IDENTITY: Affine = Affine {
        scale: 1.0,
        shift: 0.0,
    };

    fn of(s: &Similarity, a: f64, b: f64) -> Affine {
        match s.orientation {
            Orientation::Plus => Affine {
                scale: s.lambda,
                shift: s.offset - s.lambda * a,
            },
            Orientation::Minus => Affine {
                scale: -s.lambda,
                shift: s.offset + s.lambda * b,
            },
        }
    }

    fn then(self, inner: Affine) -> Affine {
        Affine {
            scale: self.scale * inner.scale,
            shift: self.scale * inner.shift + self.shift,
        }
    }

    fn apply(self, x: f64) -> f64 {
        self.scale * x + self.shift
    }

    fn image(self, lo: f64, hi: f64) -> (f64, f64) {
        let (u, v) = (self.apply(lo), self.apply(hi));
        if u <= v {
            (u, v)
        } else {
            (v, u)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    /// Branch choices per level, indexing maps in offset order.
    pub sigma: Vec<u32>,
    pub interval: (f64, f64),
    pub lambda_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lacuna {
    pub interval: (f64, f64),
    pub birth_level: usize,
}

impl Lacuna {
    pub fn length(&self) -> f64 {
        self.interval.1 - self.interval.0
    }
}

/// Which intervals of the construction carry a Dirac block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lacunae,
    Cells,
    Both,
}

/// An interval of the construction, tagged with its level (birth level for lacunae).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub left: f64,
    pub right: f64,
    pub level: usize,
}

impl Interval {
    pub fn length(&self) -> f64 {
        self.right - self.left
    }
}

pub(crate) fn cell_count(spec: &FractalSpec, n: usize) -> Result<u64> {
    (1..=n).try_fold(1u64, |acc, k| {
        let p = spec.level(k)?.len() as u64;
        acc.checked_mul(p).ok_or_else(|| overflow("cell count"))
    })
}

fn check_budget(what: &'static str, required: u64, budget: u64) -> Result<()> {
    if required > budget {
        Err(Error::Budget {
            what,
            required: required.into(),
            budget: budget.into(),
        })
    } else {
        Ok(())
    }
}

/// All `∏ p_k` cells of level `n`, sorted by left endpoint.
pub fn cells_at_level(spec: &FractalSpec, n: usize, budget: u64) -> Result<Vec<Cell>> {
    check_budget("cells", cell_count(spec, n)?, budget)?;
    let (a, b) = spec.interval();
    let mut cells = vec![Cell {
        sigma: Vec::new(),
        interval: (a, b),
        lambda_sigma: 1.0,
    }];
    let mut maps = vec![Affine::IDENTITY];
    for k in 1..=n {
        let level = spec.level(k)?;
        let mut next_cells = Vec::with_capacity(cells.len() * level.len());
        let mut next_maps = Vec::with_capacity(cells.len() * level.len());
        for (cell, parent) in cells.iter().zip(&maps) {
            for (i, s) in level.iter().enumerate() {
                let m = parent.then(Affine::of(s, a, b));
                let mut sigma = cell.sigma.clone();
                sigma.push(i as u32);
                next_cells.push(Cell {
                    sigma,
                    interval: m.image(a, b),
                    lambda_sigma: cell.lambda_sigma * s.lambda,
                });
                next_maps.push(m);
            }
        }
        cells = next_cells;
        maps = next_maps;
    }
    cells.sort_by(|x, y| x.interval.0.total_cmp(&y.interval.0));
    Ok(cells)
}

fn lacunae_born_at(spec: &FractalSpec, n: usize, parents: &[Affine]) -> Result<Vec<Lacuna>> {
    let span = spec.span();
    let level = spec.level(n)?;
    let gaps: Vec<(f64, f64)> = level
        .windows(2)
        .map(|w| (w[0].offset + w[0].lambda * span, w[1].offset))
        .collect();
    Ok(parents
        .par_iter()
        .flat_map_iter(|p| {
            gaps.iter().map(move |&(lo, hi)| Lacuna {
                interval: p.image(lo, hi),
                birth_level: n,
            })
        })
        .collect())
}

/// Gaps between sibling cells at every level `≤ n`, sorted by decreasing
/// length then by left endpoint.
pub fn lacunae_up_to_level(spec: &FractalSpec, n: usize, budget: u64) -> Result<Vec<Lacuna>> {
    if n >= 1 {
        check_budget("lacunae", cell_count(spec, n)?, budget)?;
    }
    let mut out = Vec::new();
    let mut parents = vec![Affine::IDENTITY];
    let (a, b) = spec.interval();
    for k in 1..=n {
        out.extend(lacunae_born_at(spec, k, &parents)?);
        let level: Vec<Affine> = spec.level(k)?.iter().map(|s| Affine::of(s, a, b)).collect();
        parents = parents
            .iter()
            .flat_map(|p| level.iter().map(move |c| p.then(*c)))
            .collect();
    }
    out.sort_by(|x, y| {
        y.length()
            .total_cmp(&x.length())
            .then(x.interval.0.total_cmp(&y.interval.0))
    });
    Ok(out)
}

/// Every interval of the chosen family up to level `n`: cells of levels
/// `0..=n` and lacunae born at levels `1..=n`.
pub fn intervals(
    spec: &FractalSpec,
    family: Family,
    n: usize,
    budget: u64,
) -> Result<Vec<Interval>> {
    let mut required: u64 = 0;
    for k in 0..=n {
        let c = cell_count(spec, k)?;
        if matches!(family, Family::Cells | Family::Both) {
            required = required.saturating_add(c);
        }
        if k >= 1 && matches!(family, Family::Lacunae | Family::Both) {
            let siblings = spec.level(k)?.len() as u64 - 1;
            required = required.saturating_add(cell_count(spec, k - 1)?.saturating_mul(siblings));
        }
    }
    check_budget("intervals", required, budget)?;
    let (a, b) = spec.interval();
    let mut out = Vec::with_capacity(required as usize);
    let mut maps = vec![Affine::IDENTITY];
    for k in 0..=n {
        if k >= 1 {
            if matches!(family, Family::Lacunae | Family::Both) {
                out.extend(
                    lacunae_born_at(spec, k, &maps)?
                        .into_iter()
                        .map(|l| Interval {
                            left: l.interval.0,
                            right: l.interval.1,
                            level: k,
                        }),
                );
            }
            maps = cell_maps_step(spec, k, &maps)?;
        }
        if matches!(family, Family::Cells | Family::Both) {
            out.extend(maps.iter().map(|m| {
                let (left, right) = m.image(a, b);
                Interval {
                    left,
                    right,
                    level: k,
                }
            }));
        }
    }
    Ok(out)
}

fn cell_maps_step(spec: &FractalSpec, k: usize, parents: &[Affine]) -> Result<Vec<Affine>> {
    let (a, b) = spec.interval();
    let level: Vec<Affine> = spec.level(k)?.iter().map(|s| Affine::of(s, a, b)).collect();
    Ok(parents
        .par_iter()
        .flat_map_iter(|p| level.iter().map(move |c| p.then(*c)))
        .collect())
}

/// Distinct cell ratios `λ_σ` with counts for each level `0..=n`,
/// built by convolving the per-level ratio lists.
pub fn scale_classes(spec: &FractalSpec, n: usize, budget: u64) -> Result<Vec<Vec<Eigen>>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut current = vec![Eigen {
        value: 1.0,
        multiplicity: 1,
    }];
    out.push(current.clone());
    for k in 1..=n {
        let ratios = coalesce(
            spec.ratios(k)?
                .into_iter()
                .map(|value| Eigen {
                    value,
                    multiplicity: 1,
                })
                .collect(),
        )?;
        let mut next = Vec::with_capacity(current.len() * ratios.len());
        for r in &current {
            for l in &ratios {
                next.push(Eigen {
                    value: r.value * l.value,
                    multiplicity: r
                        .multiplicity
                        .checked_mul(l.multiplicity)
                        .ok_or_else(|| overflow("multiplicity"))?,
                });
            }
        }
        current = coalesce(next)?;
        check_budget("distinct scales", current.len() as u64, budget)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Distinct lacuna lengths with counts, per birth level `1..=n`.
pub fn gap_classes(spec: &FractalSpec, n: usize, budget: u64) -> Result<Vec<Vec<Eigen>>> {
    let scales = scale_classes(spec, n.saturating_sub(1), budget)?;
    let span = spec.span();
    (1..=n)
        .map(|k| {
            let gaps = spec.relative_gaps(k)?;
            let mut items = Vec::new();
            for r in &scales[k - 1] {
                for &c in &gaps {
                    items.push(Eigen {
                        value: span * c * r.value,
                        multiplicity: r.multiplicity,
                    });
                }
            }
            coalesce(items)
        })
        .collect()
}

/// Largest interval length appearing at level `n` among the chosen family.
pub fn largest_length_at(spec: &FractalSpec, family: Family, n: usize) -> Result<f64> {
    let span = spec.span();
    let mut largest_scale = 1.0;
    for k in 1..n {
        largest_scale *= spec.ratios(k)?.into_iter().fold(0.0, f64::max);
    }
    let mut best: f64 = 0.0;
    if matches!(family, Family::Cells | Family::Both) {
        best = best.max(span * largest_scale * spec.ratios(n)?.into_iter().fold(0.0, f64::max));
    }
    if matches!(family, Family::Lacunae | Family::Both) {
        best =
            best.max(span * largest_scale * spec.relative_gaps(n)?.into_iter().fold(0.0, f64::max));
    }
    Ok(best)
}
