//! Iterative loop modulus (p = 2) by constraint generation.
//!
//! Start from a small family of short cycles, solve the restricted QP, then
//! repeatedly search for cycles whose ρ-length falls below `1 − ε` (the
//! minimum-cycle search with ρ as weights) and add the worst few, until none
//! remain. A final full-graph search certifies the answer.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::graph::{canonicalize_cycle, canonicalize_cycle_with_weights, CycleRecord, VertexSubset, WeightedGraph};
use crate::mwc::{find_mwc, run_inner, Cutoff, MwcOptions, MwcSearchState, NoObserver, SearchStats};
use crate::prune::{PruneConfig, PruneState, SearchScope};
use crate::qp::{self, ConstraintMatrix, QpOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusConfig {
    /// Violation tolerance ε: a cycle is violated when its ρ-length is below `1 − ε`.
    pub epsilon: f64,
    /// Iteration cap; `None` means `10 |V|`.
    pub max_iters: Option<usize>,
    /// Initial constraint count; `None` means `min(|E|/3, 50)`.
    pub init_target: Option<usize>,
    pub cycles_per_iter: usize,
    pub prune: PruneConfig,
    pub qp_tolerance: f64,
    /// `0` means `200 × rows` per solve.
    pub qp_max_passes: usize,
}

impl Default for ModulusConfig {
    fn default() -> Self {
        ModulusConfig {
            epsilon: 1e-6,
            max_iters: None,
            init_target: None,
            cycles_per_iter: 5,
            prune: PruneConfig::default(),
            qp_tolerance: 1e-8,
            qp_max_passes: 0,
        }
    }
}

impl ModulusConfig {
    /// One cycle per iteration, no pruning.
    pub fn baseline() -> Self {
        ModulusConfig {
            cycles_per_iter: 1,
            prune: PruneConfig::disabled(),
            ..Self::default()
        }
    }

    pub fn effective_max_iters(&self, graph: &WeightedGraph) -> usize {
        self.max_iters.unwrap_or(10 * graph.vertex_count())
    }

    pub fn effective_init_target(&self, graph: &WeightedGraph) -> usize {
        self.init_target.unwrap_or((graph.edge_count() / 3).min(50)).max(1)
    }

    fn qp_options(&self) -> QpOptions {
        QpOptions {
            tolerance: self.qp_tolerance,
            max_passes: self.qp_max_passes,
            record_dual: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub scope: SearchScope,
    /// Smallest ρ-length found, when any cycle was below the threshold.
    pub min_rho_length: Option<f64>,
    pub violated: usize,
    pub added: usize,
    pub constraints: usize,
    pub modulus: f64,
    pub qp_passes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModulusResult {
    pub rho: Vec<f64>,
    pub modulus: f64,
    pub constraints: Vec<CycleRecord>,
    pub qp_solves: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Every QP solve met its tolerance.
    pub qp_converged: bool,
    pub initial_constraints: usize,
    /// Full-graph checks run after the loop stopped.
    pub final_checks: usize,
    pub search_stats: SearchStats,
    pub elapsed_s: f64,
    pub trace: Vec<IterationTrace>,
}

impl ModulusResult {
    fn empty(graph: &WeightedGraph) -> Self {
        ModulusResult {
            rho: vec![0.0; graph.edge_count()],
            modulus: 0.0,
            constraints: Vec::new(),
            qp_solves: 0,
            iterations: 0,
            converged: true,
            qp_converged: true,
            initial_constraints: 0,
            final_checks: 0,
            search_stats: SearchStats::default(),
            elapsed_s: 0.0,
            trace: Vec::new(),
        }
    }

    /// `{ modulus, rho: [[u,v,ρ]], constraints: [[v0,v1,..]], qp_solves, iterations, converged, trace }`
    pub fn to_json(&self, graph: &WeightedGraph) -> Value {
        let rho: Vec<Value> = graph
            .edges()
            .zip(&self.rho)
            .map(|((u, v, _), r)| json!([u, v, r]))
            .collect();
        let constraints: Vec<&Vec<usize>> = self.constraints.iter().map(|c| &c.vertices).collect();
        json!({
            "modulus": self.modulus,
            "rho": rho,
            "constraints": constraints,
            "qp_solves": self.qp_solves,
            "iterations": self.iterations,
            "converged": self.converged,
            "qp_converged": self.qp_converged,
            "initial_constraints": self.initial_constraints,
            "final_checks": self.final_checks,
            "trace": self.trace,
        })
    }
}

/// All 3-cycles, each once.
pub fn find_triangles(graph: &WeightedGraph) -> Vec<CycleRecord> {
    let mut out = Vec::new();
    for u in 0..graph.vertex_count() {
        for a in graph.neighbors(u).iter().filter(|a| a.vertex > u) {
            for b in graph.neighbors(a.vertex).iter().filter(|b| b.vertex > a.vertex) {
                if graph.edge_between(u, b.vertex).is_some() {
                    out.push(canonicalize_cycle(&[u, a.vertex, b.vertex], graph).expect("triangle"));
                }
            }
        }
    }
    out.sort();
    out
}

/// A cycle with the fewest edges, measured in the graph's own weights.
pub fn shortest_hop_cycle(graph: &WeightedGraph) -> Option<CycleRecord> {
    let unit = graph
        .reweighted(&vec![1.0; graph.edge_count()])
        .expect("unit weights are valid");
    let witness = find_mwc(&unit, &MwcOptions::default()).witness?;
    Some(canonicalize_cycle(&witness.vertices, graph).expect("same topology"))
}

/// Greedy coverage: repeatedly take the candidate covering the most edges not
/// yet covered, ties by larger degree sum, then canonical order.
pub fn greedy_select(graph: &WeightedGraph, candidates: &[CycleRecord], target: usize) -> Vec<CycleRecord> {
    let mut covered = vec![false; graph.edge_count()];
    let mut taken = vec![false; candidates.len()];
    let degree_sum: Vec<usize> = candidates
        .iter()
        .map(|c| c.vertices.iter().map(|&v| graph.degree(v)).sum())
        .collect();
    let mut out = Vec::new();
    while out.len() < target {
        let best = (0..candidates.len()).filter(|&i| !taken[i]).max_by(|&i, &j| {
            let fresh = |k: usize| candidates[k].edges.iter().filter(|&&e| !covered[e]).count();
            (fresh(i), degree_sum[i], Reverse(&candidates[i])).cmp(&(fresh(j), degree_sum[j], Reverse(&candidates[j])))
        });
        let Some(i) = best else { break };
        taken[i] = true;
        for &e in &candidates[i].edges {
            covered[e] = true;
        }
        out.push(candidates[i].clone());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Ranked(f64);

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Reusable buffers for repeated violated-cycle searches.
pub struct ViolationSearch {
    state: MwcSearchState,
    pub stats: SearchStats,
}

impl ViolationSearch {
    pub fn new(graph: &WeightedGraph) -> Self {
        ViolationSearch {
            state: MwcSearchState::new(graph.vertex_count()),
            stats: SearchStats::default(),
        }
    }

    /// The `k` distinct cycles of smallest ρ-length below `threshold` among
    /// those the rooted searches close, ascending by (ρ-length, canonical
    /// order). Roots and expansion are confined to `view` when given; the
    /// expansion cutoff is `δ(v) < threshold/2`. Each returned cycle is
    /// re-measured on the full graph.
    pub fn top_k(
        &mut self,
        graph: &WeightedGraph,
        view: Option<&VertexSubset>,
        rho: &[f64],
        k: usize,
        threshold: f64,
    ) -> Vec<(CycleRecord, f64)> {
        assert_eq!(rho.len(), graph.edge_count());
        // max-heap holding the k best seen so far
        let mut best: BinaryHeap<(Ranked, Vec<usize>)> = BinaryHeap::new();
        let mut in_best: HashSet<Vec<usize>> = HashSet::new();
        let roots: Vec<usize> = match view {
            Some(v) => v.members().to_vec(),
            None => (0..graph.vertex_count()).collect(),
        };
        let slack = 1e-9 * threshold.abs().max(1.0);
        for root in roots {
            let mut pending = Vec::new();
            run_inner(
                graph,
                rho,
                &mut self.state,
                root,
                f64::INFINITY,
                view,
                Cutoff::HalfOf(threshold),
                &mut self.stats,
                &mut NoObserver,
                &mut |_, e| {
                    if e.length < threshold + slack {
                        pending.push(*e);
                    }
                },
            );
            for event in pending {
                let bar = if best.len() == k { best.peek().map(|b| b.0 .0) } else { None };
                if bar.is_some_and(|b| event.length > b + slack) {
                    continue;
                }
                let seq = self.state.cycle_vertices(&event);
                let cycle = canonicalize_cycle_with_weights(&seq, graph, rho).expect("detected cycle is simple");
                let length = cycle.length;
                if !(length < threshold) || in_best.contains(&cycle.vertices) {
                    continue;
                }
                let entry = (Ranked(length), cycle.vertices);
                if best.len() == k {
                    if entry >= *best.peek().unwrap() {
                        continue;
                    }
                    let (_, evicted) = best.pop().unwrap();
                    in_best.remove(&evicted);
                }
                in_best.insert(entry.1.clone());
                best.push(entry);
            }
        }
        let mut out: Vec<(CycleRecord, f64)> = best
            .into_sorted_vec()
            .into_iter()
            .map(|(_, verts)| {
                let c = canonicalize_cycle(&verts, graph).expect("cycle of the full graph");
                let l = c.length_under(rho);
                (c, l)
            })
            .collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }
}

/// One-shot form of [`ViolationSearch::top_k`].
pub fn find_top_k_violated(
    graph: &WeightedGraph,
    view: Option<&VertexSubset>,
    rho: &[f64],
    k: usize,
    threshold: f64,
) -> Vec<(CycleRecord, f64)> {
    ViolationSearch::new(graph).top_k(graph, view, rho, k, threshold)
}

pub fn compute_modulus(graph: &WeightedGraph, config: &ModulusConfig) -> ModulusResult {
    assert!(config.epsilon > 0.0 && config.epsilon < 1.0, "epsilon must lie in (0, 1)");
    assert!(config.cycles_per_iter >= 1, "need at least one cycle per iteration");
    let started = Instant::now();
    if graph.is_forest() {
        let mut r = ModulusResult::empty(graph);
        r.elapsed_s = started.elapsed().as_secs_f64();
        return r;
    }

    // preprocessing
    let mut candidates = find_triangles(graph);
    if candidates.is_empty() {
        candidates.extend(shortest_hop_cycle(graph));
    }
    let initial = greedy_select(graph, &candidates, config.effective_init_target(graph));
    let mut matrix = ConstraintMatrix::new(graph.edge_count(), []);
    let mut constraints = Vec::new();
    for c in initial {
        if matrix.push(c.edges.clone()) {
            constraints.push(c);
        }
    }
    let initial_constraints = constraints.len();
    let qp_opts = config.qp_options();
    let mut sol = qp::solve(&matrix, None, &qp_opts);
    let mut qp_solves = 1;
    let mut qp_converged = sol.converged;

    let threshold = 1.0 - config.epsilon;
    let max_iters = config.effective_max_iters(graph);
    let mut search = ViolationSearch::new(graph);
    let mut prune = PruneState::new();
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut final_checks = 0;
    let mut converged = false;

    loop {
        while iterations < max_iters {
            let scope = prune.step(&config.prune);
            let found = search.top_k(graph, prune.view(), &sol.rho, config.cycles_per_iter, threshold);
            iterations += 1;
            if found.is_empty() {
                trace.push(IterationTrace {
                    iteration: iterations,
                    scope,
                    min_rho_length: None,
                    violated: 0,
                    added: 0,
                    constraints: matrix.row_count(),
                    modulus: sol.modulus,
                    qp_passes: 0,
                });
                break;
            }
            let (added, seeds) = add_unique(&found, &mut matrix, &mut constraints);
            if added == 0 {
                break;
            }
            sol = qp::solve(&matrix, Some(&sol.lambda), &qp_opts);
            qp_converged &= sol.converged;
            qp_solves += 1;
            trace.push(IterationTrace {
                iteration: iterations,
                scope,
                min_rho_length: Some(found[0].1),
                violated: found.len(),
                added,
                constraints: matrix.row_count(),
                modulus: sol.modulus,
                qp_passes: sol.iterations,
            });
            prune.update(graph, seeds, &config.prune, scope);
        }
        if iterations >= max_iters {
            break;
        }

        // certificate: one unrestricted search
        final_checks += 1;
        prune.expire();
        let found = search.top_k(graph, None, &sol.rho, config.cycles_per_iter, threshold);
        if found.is_empty() {
            converged = true;
            break;
        }
        let (added, seeds) = add_unique(&found, &mut matrix, &mut constraints);
        if added == 0 {
            // violated cycles are all constraints already: the QP did not meet them
            break;
        }
        iterations += 1;
        sol = qp::solve(&matrix, Some(&sol.lambda), &qp_opts);
        qp_converged &= sol.converged;
        qp_solves += 1;
        trace.push(IterationTrace {
            iteration: iterations,
            scope: SearchScope::Full,
            min_rho_length: Some(found[0].1),
            violated: found.len(),
            added,
            constraints: matrix.row_count(),
            modulus: sol.modulus,
            qp_passes: sol.iterations,
        });
        prune.update(graph, seeds, &config.prune, SearchScope::Full);
    }

    ModulusResult {
        modulus: sol.modulus,
        rho: sol.rho,
        constraints,
        qp_solves,
        iterations,
        converged,
        qp_converged,
        initial_constraints,
        final_checks,
        search_stats: search.stats,
        elapsed_s: started.elapsed().as_secs_f64(),
        trace,
    }
}

/// Appends the cycles not already constrained. Returns how many were added
/// and the sorted union of their vertices.
fn add_unique(
    found: &[(CycleRecord, f64)],
    matrix: &mut ConstraintMatrix,
    constraints: &mut Vec<CycleRecord>,
) -> (usize, Vec<usize>) {
    let mut added = 0;
    let mut seeds = Vec::new();
    for (c, _) in found {
        if matrix.push(c.edges.clone()) {
            added += 1;
            seeds.extend_from_slice(&c.vertices);
            constraints.push(c.clone());
        }
    }
    seeds.sort_unstable();
    seeds.dedup();
    (added, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphSpec};

    fn gen(s: &str) -> WeightedGraph {
        generate(&s.parse::<GraphSpec>().unwrap()).unwrap()
    }

    fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0))).unwrap()
    }

    fn two_triangles() -> WeightedGraph {
        unit(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    }

    fn petersen() -> WeightedGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        unit(10, &e)
    }

    #[test]
    fn triangles() {
        assert_eq!(find_triangles(&gen("complete:4")).len(), 4);
        assert!(find_triangles(&gen("cycle:5")).is_empty());
    }

    #[test]
    fn triangle_count_matches_trace() {
        let g = gen("er:30:0.3:seed=1");
        let n = g.vertex_count();
        let mut a = vec![vec![0u64; n]; n];
        for (u, v, _) in g.edges() {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        let mut trace = 0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    trace += a[i][j] * a[j][k] * a[k][i];
                }
            }
        }
        assert_eq!(find_triangles(&g).len() as u64, trace / 6);
    }

    #[test]
    fn hop_girth() {
        assert_eq!(shortest_hop_cycle(&gen("cycle:7")).unwrap().len(), 7);
        assert!(shortest_hop_cycle(&unit(4, &[(0, 1), (1, 2), (1, 3)])).is_none());
        assert_eq!(shortest_hop_cycle(&petersen()).unwrap().len(), 5);
        // heavy triangle, light square: hop count wins
        let g = WeightedGraph::from_edges(
            5,
            [(0, 1, 9.0), (1, 2, 9.0), (2, 0, 9.0), (2, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0)],
        )
        .unwrap();
        assert_eq!(shortest_hop_cycle(&g).unwrap().vertices, vec![0, 1, 2]);
    }

    #[test]
    fn greedy_examples() {
        let g = two_triangles();
        let tris = find_triangles(&g);
        assert_eq!(greedy_select(&g, &tris, 2).len(), 2);
        assert_eq!(greedy_select(&g, &tris, 10).len(), 2);

        let k4 = gen("complete:4");
        let tris = find_triangles(&k4);
        let picked = greedy_select(&k4, &tris, 2);
        let coverage = |a: &CycleRecord, b: &CycleRecord| {
            let mut es: Vec<usize> = a.edges.iter().chain(&b.edges).copied().collect();
            es.sort_unstable();
            es.dedup();
            es.len()
        };
        let mut best = 0;
        for i in 0..tris.len() {
            for j in i + 1..tris.len() {
                best = best.max(coverage(&tris[i], &tris[j]));
            }
        }
        assert_eq!(coverage(&picked[0], &picked[1]), best);
        assert!(best >= 5);
    }

    #[test]
    fn violated_search_examples() {
        let tri = gen("cycle:3");
        let found = find_top_k_violated(&tri, None, &[0.0; 3], 5, 1.0 - 1e-6);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].1, 0.0);
        assert_eq!(found[0].0.vertices, vec![0, 1, 2]);
        let third = [1.0 / 3.0; 3];
        assert!(find_top_k_violated(&tri, None, &third, 5, 1.0 - 1e-6).is_empty());

        let g = two_triangles();
        let rho = [0.4, 0.4, 0.4, 0.2, 0.2, 0.2];
        let found = find_top_k_violated(&g, None, &rho, 5, 1.0 - 1e-6);
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0.vertices, vec![3, 4, 5]);
        assert!((found[0].1 - 0.6).abs() < 1e-12);
    }

    #[test]
    fn single_cycles() {
        for n in 3..=10 {
            let r = compute_modulus(&gen(&format!("cycle:{n}")), &ModulusConfig::default());
            assert!(r.converged);
            assert_eq!(r.constraints.len(), 1);
            assert!((r.modulus - 1.0 / n as f64).abs() < 1e-6, "n={n}: {}", r.modulus);
        }
    }

    #[test]
    fn forest_is_zero() {
        let r = compute_modulus(&unit(4, &[(0, 1), (1, 2), (1, 3)]), &ModulusConfig::default());
        assert!(r.converged);
        assert_eq!(r.modulus, 0.0);
        assert_eq!(r.qp_solves, 0);
        assert!(r.rho.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn disjoint_triangles() {
        let r = compute_modulus(&two_triangles(), &ModulusConfig::default());
        assert!((r.modulus - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn json_shape() {
        let g = gen("cycle:5");
        let r = compute_modulus(&g, &ModulusConfig::default());
        let v = r.to_json(&g);
        assert_eq!(v["constraints"], serde_json::json!([[0, 1, 2, 3, 4]]));
        assert_eq!(v["rho"].as_array().unwrap().len(), 5);
        assert_eq!(v["converged"], true);
    }
}
