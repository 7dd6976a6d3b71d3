//! Connes distance of truncated triples as a shortest-path problem.
//!
//! The constraints `|f(u) − f(v)| ≤ |u − v|` over the intervals of the
//! triple form a system of difference constraints, and the largest
//! feasible `f(y) − f(x)` is the shortest-path distance from `x` to `y`.

use std::collections::HashMap;

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::Serialize;

use crate::dirac::SpectrumKind;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::fractal::{intervals, lacunae_up_to_level, FractalSpec};

/// Endpoints closer than this are the same vertex.
pub const VERTEX_QUANTUM: f64 = 1e-13;

fn vertex_key(x: f64) -> i64 {
    (x / VERTEX_QUANTUM).round() as i64
}

pub struct DistanceGraph {
    pub kind: SpectrumKind,
    pub level: usize,
    graph: UnGraph<f64, f64>,
    index: HashMap<i64, NodeIndex>,
}

impl DistanceGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Vertex positions in increasing order.
    pub fn vertices(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.graph.node_weights().copied().collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    /// Edges as `(left, right, weight)`, sorted.
    pub fn edges(&self) -> Vec<(f64, f64, f64)> {
        let mut es: Vec<_> = self
            .graph
            .edge_indices()
            .map(|e| {
                let (u, v) = self.graph.edge_endpoints(e).expect("edge exists");
                let (a, b) = (self.graph[u], self.graph[v]);
                (a.min(b), a.max(b), self.graph[e])
            })
            .collect();
        es.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
        es
    }

    fn node(&self, x: f64) -> Result<NodeIndex> {
        self.index.get(&vertex_key(x)).copied().ok_or_else(|| {
            Error::Invalid(format!(
                "{x} is not a vertex of the level-{} graph",
                self.level
            ))
        })
    }

    /// Shortest-path distances from `x` to every vertex, `+∞` when unreachable.
    pub fn distances_from(&self, x: f64) -> Result<Vec<(f64, ExtReal)>> {
        let start = self.node(x)?;
        let found = dijkstra(&self.graph, start, None, |e| *e.weight());
        let mut out: Vec<(f64, ExtReal)> = self
            .graph
            .node_indices()
            .map(|n| {
                (
                    self.graph[n],
                    found
                        .get(&n)
                        .map_or(ExtReal::Infinity, |&d| ExtReal::Finite(d)),
                )
            })
            .collect();
        out.sort_by(|p, q| p.0.total_cmp(&q.0));
        Ok(out)
    }
}

/// One vertex per distinct endpoint and one edge per interval of the
/// triple's family up to `level`.
pub fn build_graph(
    spec: &FractalSpec,
    kind: SpectrumKind,
    level: usize,
    budget: u64,
) -> Result<DistanceGraph> {
    let mut graph = UnGraph::new_undirected();
    let mut index = HashMap::new();
    let mut node = |graph: &mut UnGraph<f64, f64>, x: f64| {
        *index
            .entry(vertex_key(x))
            .or_insert_with(|| graph.add_node(x))
    };
    for i in intervals(spec, kind.family()?, level, budget)? {
        let (u, v) = (node(&mut graph, i.left), node(&mut graph, i.right));
        if u != v {
            graph.add_edge(u, v, i.length());
        }
    }
    Ok(DistanceGraph {
        kind,
        level,
        graph,
        index,
    })
}

/// `sup |f(y) − f(x)|` over `f` with `‖[D, f]‖ ≤ 1` on the truncated triple.
pub fn connes_distance(g: &DistanceGraph, x: f64, y: f64) -> Result<ExtReal> {
    let (s, t) = (g.node(x.min(y))?, g.node(x.max(y))?);
    let found = dijkstra(&g.graph, s, Some(t), |e| *e.weight());
    Ok(found
        .get(&t)
        .map_or(ExtReal::Infinity, |&d| ExtReal::Finite(d)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapSumBound {
    /// Total length of the lacunae inside `[x, y]`.
    pub bound: f64,
    /// `(y − x) − bound`, the part of `[x, y]` no lacuna accounts for.
    pub deficit: f64,
}

/// The largest `|f(y) − f(x)|` that lacunary commutator bounds allow when
/// `f` is constant on the fractal.
pub fn lacunary_gap_sum_bound(
    spec: &FractalSpec,
    x: f64,
    y: f64,
    level: usize,
    budget: u64,
) -> Result<GapSumBound> {
    let (x, y) = (x.min(y), x.max(y));
    let slack = VERTEX_QUANTUM;
    let bound: f64 = lacunae_up_to_level(spec, level, budget)?
        .iter()
        .filter(|l| l.interval.0 >= x - slack && l.interval.1 <= y + slack)
        .map(|l| l.length())
        .sum();
    Ok(GapSumBound {
        bound,
        deficit: (y - x) - bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::DEFAULT_BUDGET;

    #[test]
    fn cantor_full_level_one() {
        let g = build_graph(
            &FractalSpec::cantor(),
            SpectrumKind::Full,
            1,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(connes_distance(&g, 0.0, 1.0).unwrap(), ExtReal::Finite(1.0));
    }

    #[test]
    fn lacunary_is_disconnected() {
        let g = build_graph(
            &FractalSpec::cantor(),
            SpectrumKind::Lacunary,
            2,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 3));
        let d = connes_distance(&g, 1.0 / 3.0, 2.0 / 3.0)
            .unwrap()
            .finite()
            .unwrap();
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
        assert!(g.node(0.0).is_err());
    }

    #[test]
    fn gap_sums() {
        let r =
            lacunary_gap_sum_bound(&FractalSpec::cantor(), 0.0, 1.0, 5, DEFAULT_BUDGET).unwrap();
        assert!((r.bound - (1.0 - (2.0f64 / 3.0).powi(5))).abs() < 1e-12);
        let r =
            lacunary_gap_sum_bound(&FractalSpec::cantor(), 0.5, 0.5, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.bound, r.deficit), (0.0, 0.0));
    }
}
