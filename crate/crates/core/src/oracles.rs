//! Reference implementations that share no code path with the optimized
//! search: textbook Dijkstra, the edge-rooted girth baseline, exhaustive
//! simple-cycle enumeration, and the degree-ordered vertex-removal simulation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{canonicalize_cycle, CycleRecord, WeightedGraph};
use crate::mwc::{MwcResult, SearchStats};
use crate::qp::{self, ConstraintMatrix, QpOptions};

/// Largest graph `enumerate_cycles` accepts.
pub const ENUMERATION_LIMIT: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices, enumeration is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Item(u64, usize);

fn key(d: f64) -> u64 {
    // order-preserving for non-negative floats
    d.to_bits()
}

/// Single-source shortest path distances, `+inf` where unreachable.
pub fn reference_dijkstra(graph: &WeightedGraph, source: usize) -> Vec<f64> {
    reference_dijkstra_with(graph, graph.weights(), source)
}

pub fn reference_dijkstra_with(graph: &WeightedGraph, weights: &[f64], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse(Item(key(0.0), source)));
    while let Some(Reverse(Item(d, u))) = heap.pop() {
        let d = f64::from_bits(d);
        if d > dist[u] {
            continue;
        }
        for nb in graph.neighbors(u) {
            let nd = d + weights[nb.edge];
            if nd < dist[nb.vertex] {
                dist[nb.vertex] = nd;
                heap.push(Reverse(Item(key(nd), nb.vertex)));
            }
        }
    }
    dist
}

/// Dijkstra from `u` that ignores edge `masked` and stops once `v` is
/// finalized. Returns the distance and the predecessor array.
fn masked_distance(
    graph: &WeightedGraph,
    u: usize,
    v: usize,
    masked: usize,
    stats: &mut SearchStats,
) -> (f64, Vec<usize>) {
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[u] = 0.0;
    heap.push(Reverse(Item(key(0.0), u)));
    stats.inner_searches += 1;
    while let Some(Reverse(Item(d, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        stats.extractions += 1;
        if x == v {
            break;
        }
        let d = f64::from_bits(d);
        for nb in graph.neighbors(x) {
            if nb.edge == masked || done[nb.vertex] {
                continue;
            }
            stats.relaxations += 1;
            let nd = d + graph.weight(nb.edge);
            if nd < dist[nb.vertex] {
                dist[nb.vertex] = nd;
                pred[nb.vertex] = x;
                heap.push(Reverse(Item(key(nd), nb.vertex)));
            }
        }
    }
    (dist[v], pred)
}

/// Girth as the minimum over edges `(u, v)` of `d_{G−e}(u, v) + w(e)`.
pub fn rooted_girth(graph: &WeightedGraph) -> MwcResult {
    let mut stats = SearchStats::default();
    let mut gamma = f64::INFINITY;
    let mut best: Option<(usize, Vec<usize>)> = None;
    for (e, (u, v, w)) in graph.edges().enumerate() {
        let (d, pred) = masked_distance(graph, u, v, e, &mut stats);
        let candidate = d + w;
        if candidate < gamma {
            gamma = candidate;
            best = Some((e, pred));
        }
    }
    let witness = best.map(|(e, pred)| {
        let (u, v) = graph.endpoints(e);
        let mut seq = vec![v];
        let mut x = v;
        while x != u {
            x = pred[x];
            seq.push(x);
        }
        canonicalize_cycle(&seq, graph).expect("shortest path plus masked edge is a cycle")
    });
    MwcResult {
        gamma,
        witness,
        stats,
        discarded: Vec::new(),
    }
}

/// Every simple cycle exactly once, in canonical form.
///
/// Depth-first search from each start vertex through larger ids only, so the
/// start is the cycle's minimum; of the two traversal directions only the one
/// whose second vertex is smaller than its last is kept.
pub fn enumerate_cycles(graph: &WeightedGraph, max_vertices: usize) -> Result<Vec<CycleRecord>, OracleError> {
    let n = graph.vertex_count();
    let limit = max_vertices.min(ENUMERATION_LIMIT);
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(n);
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        extend(graph, start, &mut path, &mut on_path, &mut out);
        on_path[start] = false;
        path.pop();
    }
    Ok(out)
}

fn extend(
    graph: &WeightedGraph,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<CycleRecord>,
) {
    let tail = *path.last().unwrap();
    for nb in graph.neighbors(tail) {
        let next = nb.vertex;
        if next == start && path.len() >= 3 && path[1] < tail {
            out.push(canonicalize_cycle(path, graph).expect("enumerated cycle is simple"));
        } else if next > start && !on_path[next] {
            on_path[next] = true;
            path.push(next);
            extend(graph, start, path, on_path, out);
            path.pop();
            on_path[next] = false;
        }
    }
}

/// Remaining edge fraction `|E_k| / |E|` after removing `k` vertices, highest
/// current degree first (ties by smaller id), for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FFactorCurve {
    pub fractions: Vec<f64>,
}

impl FFactorCurve {
    /// Mean of the curve over `k = 0..=n`, i.e. normalized area under it.
    pub fn area(&self) -> f64 {
        self.fractions.iter().sum::<f64>() / self.fractions.len() as f64
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["k", "fraction"])?;
        for (k, f) in self.fractions.iter().enumerate() {
            w.write_record([k.to_string(), f.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// For an edgeless graph the curve is 1 at `k = 0` and 0 afterwards.
pub fn f_factor_simulation(graph: &WeightedGraph) -> FFactorCurve {
    let n = graph.vertex_count();
    let total = graph.edge_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut remaining = total;
    let fraction = |r: usize| if total == 0 { 0.0 } else { r as f64 / total as f64 };
    let mut fractions = Vec::with_capacity(n + 1);
    fractions.push(1.0);
    for _ in 0..n {
        let pick = (0..n)
            .filter(|&v| !removed[v])
            .max_by_key(|&v| (degree[v], Reverse(v)))
            .unwrap();
        removed[pick] = true;
        remaining -= degree[pick];
        for nb in graph.neighbors(pick) {
            if !removed[nb.vertex] {
                degree[nb.vertex] -= 1;
            }
        }
        degree[pick] = 0;
        fractions.push(fraction(remaining));
    }
    FFactorCurve { fractions }
}

/// Modulus over the family of all simple cycles, solved directly.
pub fn full_constraint_modulus(graph: &WeightedGraph, tolerance: f64) -> Result<f64, OracleError> {
    let cycles = enumerate_cycles(graph, ENUMERATION_LIMIT)?;
    if cycles.is_empty() {
        return Ok(0.0);
    }
    let matrix = ConstraintMatrix::new(graph.edge_count(), cycles.iter().map(|c| c.edges.clone()));
    let opts = QpOptions {
        tolerance,
        max_passes: 1_000_000,
        record_dual: false,
    };
    Ok(qp::solve(&matrix, None, &opts).modulus)
}
