#![allow(dead_code)]

use std::collections::BTreeSet;

use loopmod::graph::{generate, CycleRecord, GraphSpec, WeightedGraph};
use loopmod::oracles::enumerate_cycles;

pub fn gen(spec: &str) -> WeightedGraph {
    generate(&spec.parse::<GraphSpec>().unwrap()).unwrap()
}

pub fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    WeightedGraph::from_edges(n, edges.iter().map(|&(u, v)| (u, v, 1.0))).unwrap()
}

pub fn k4() -> WeightedGraph {
    gen("complete:4")
}

pub fn petersen() -> WeightedGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    unit(10, &e)
}

pub fn c5_chord() -> WeightedGraph {
    unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])
}

pub fn two_triangles() -> WeightedGraph {
    unit(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
}

/// Minimum length over all simple cycles, and the union of the vertices of
/// every cycle attaining it.
pub fn brute_force_girth(graph: &WeightedGraph) -> (f64, BTreeSet<usize>) {
    let cycles: Vec<CycleRecord> = enumerate_cycles(graph, 14).unwrap();
    let gamma = cycles.iter().map(|c| c.length).fold(f64::INFINITY, f64::min);
    let union = cycles
        .iter()
        .filter(|c| c.length == gamma)
        .flat_map(|c| c.vertices.iter().copied())
        .collect();
    (gamma, union)
}

/// Seeded small graphs: ER with p in {0.3, 0.5}, unit and integer weights.
pub fn small_random_suite(count: usize) -> Vec<(String, WeightedGraph)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let n = 4 + (seed % 9) as usize;
        let p = if seed % 2 == 0 { 0.3 } else { 0.5 };
        let weights = if seed % 3 == 0 { "" } else { ":weights=int-1-9" };
        let spec = format!("er:{n}:{p}{weights}:seed={seed}");
        out.push((spec.clone(), gen(&spec)));
        seed += 1;
    }
    out
}

use loopmod::mwc::{CycleEvent, MwcSearchState, SearchObserver};
use loopmod::oracles::reference_dijkstra;

/// Checks the search-state invariants against textbook Dijkstra after every
/// extraction, detection and completed root. Assumes integer weights so that
/// every comparison can be exact.
pub struct InvariantChecker<'a> {
    graph: &'a WeightedGraph,
    root: usize,
    reference: Vec<f64>,
    pub gammas: Vec<f64>,
    pub violations: Vec<String>,
    /// Unexpanded vertices closer than half the final γ.
    pub early_violations: Vec<String>,
    pub extractions_checked: u64,
    pub detections_checked: u64,
    pub unexpanded_checked: u64,
}

impl<'a> InvariantChecker<'a> {
    pub fn new(graph: &'a WeightedGraph) -> Self {
        InvariantChecker {
            graph,
            root: usize::MAX,
            reference: Vec::new(),
            gammas: Vec::new(),
            violations: Vec::new(),
            early_violations: Vec::new(),
            extractions_checked: 0,
            detections_checked: 0,
            unexpanded_checked: 0,
        }
    }

    fn sync(&mut self, state: &MwcSearchState) {
        if state.root() != self.root {
            self.root = state.root();
            self.reference = reference_dijkstra(self.graph, self.root);
        }
    }

    pub fn gamma_monotone(&self) -> bool {
        self.gammas.windows(2).all(|w| w[1] <= w[0])
    }
}

impl SearchObserver for InvariantChecker<'_> {
    fn on_extract(&mut self, state: &MwcSearchState, vertex: usize) {
        self.sync(state);
        self.extractions_checked += 1;
        let root = self.root;
        let mut max_q = f64::NEG_INFINITY;
        for &u in state.finalized_order() {
            if state.delta(u) != self.reference[u] {
                self.violations
                    .push(format!("root {root}: delta({u}) = {} but d = {}", state.delta(u), self.reference[u]));
            }
            max_q = max_q.max(state.delta(u));
        }
        for &v in state.explored() {
            if !state.is_finalized(v) && state.delta(v) < max_q {
                self.violations
                    .push(format!("root {root}: open {v} at {} below finalized {max_q}", state.delta(v)));
            }
            if let Some(p) = state.pred(v) {
                let w = self.graph.weight(self.graph.edge_between(p, v).unwrap());
                if !state.is_finalized(p) || state.delta(v) != state.delta(p) + w {
                    self.violations.push(format!("root {root}: pred({v}) = {p} inconsistent"));
                }
            }
        }
        if !state.is_finalized(vertex) {
            self.violations.push(format!("root {root}: extracted {vertex} not in Q"));
        }
    }

    fn on_cycle(&mut self, state: &MwcSearchState, event: &CycleEvent) {
        self.detections_checked += 1;
        self.gammas.push(event.gamma_after);
        let seq = state.cycle_vertices(event);
        let k = seq.len();
        let summed: f64 = (0..k)
            .map(|i| {
                let e = self.graph.edge_between(seq[i], seq[(i + 1) % k]).expect("cycle edge");
                self.graph.weight(e)
            })
            .sum();
        if summed != event.length {
            self.violations
                .push(format!("root {}: formula length {} vs summed {}", state.root(), event.length, summed));
        }
        if event.composite != event.dist_to_cycle + event.length {
            self.violations.push("composite is not distance plus length".into());
        }
    }

    fn on_root_done(&mut self, state: &MwcSearchState, gamma: f64) {
        self.sync(state);
        self.gammas.push(gamma);
        for v in 0..state.vertex_count() {
            if !state.is_finalized(v) {
                self.unexpanded_checked += 1;
                if !(self.reference[v] >= gamma / 2.0) {
                    self.early_violations.push(format!(
                        "root {}: unexpanded {v} at d = {} < gamma/2 = {}",
                        self.root,
                        self.reference[v],
                        gamma / 2.0
                    ));
                }
            }
        }
    }
}

/// Minimum cycle 0-1-2 (length 30) and, behind a short stem 3-4, the longer
/// triangle 4-5-6 (length 34). The search from root 3 sees the long triangle
/// at composite 36 < 3γ/2 and may drop vertex 4.
pub fn near_long_cycle() -> WeightedGraph {
    WeightedGraph::from_edges(
        7,
        [
            (0, 1, 10.0),
            (1, 2, 10.0),
            (2, 0, 10.0),
            (2, 3, 50.0),
            (3, 4, 2.0),
            (4, 5, 10.0),
            (5, 6, 14.0),
            (6, 4, 10.0),
        ],
    )
    .unwrap()
}
