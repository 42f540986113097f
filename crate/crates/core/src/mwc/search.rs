//! The per-root search: Dijkstra from a root, cut off at half the best cycle
//! length, detecting a cycle on every non-tree edge between finalized vertices.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use crate::graph::{canonicalize_cycle_with_weights, CycleRecord, VertexSubset, WeightedGraph};

const NONE: usize = usize::MAX;

/// Operation counters. `extractions` counts only non-stale heap pops.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub extractions: u64,
    pub relaxations: u64,
    pub cycles_detected: u64,
    pub vertices_discarded: u64,
    pub inner_searches: u64,
    /// Inner searches run inside a pruned view.
    pub view_searches: u64,
    /// View searches that touched the view boundary and were redone in full.
    pub deferred_roots: u64,
    /// Searches continued past the cutoff to certify a discarding step.
    pub extended_searches: u64,
}

impl SearchStats {
    pub fn absorb(&mut self, other: &SearchStats) {
        self.extractions += other.extractions;
        self.relaxations += other.relaxations;
        self.cycles_detected += other.cycles_detected;
        self.vertices_discarded += other.vertices_discarded;
        self.inner_searches += other.inner_searches;
        self.view_searches += other.view_searches;
        self.deferred_roots += other.deferred_roots;
        self.extended_searches += other.extended_searches;
    }
}

/// When the inner loop stops expanding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// Expand while `δ(v) < γ/2`, with the live γ.
    HalfGamma,
    /// Expand while `δ(v) < threshold/2`.
    HalfOf(f64),
}

/// One cycle detection: the closing edge `(y, z)`, with `z` already finalized
/// when `y` was, and the lowest common ancestor `lca` of the two in the
/// shortest-path tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleEvent {
    pub y: usize,
    pub z: usize,
    pub edge: usize,
    pub lca: usize,
    /// `δ(y) + δ(z) + w(y,z) − 2δ(lca)`
    pub length: f64,
    /// `δ(lca)`
    pub dist_to_cycle: f64,
    pub composite: f64,
    /// γ after this detection was folded in.
    pub gamma_after: f64,
}

/// Hooks into the search; every method defaults to doing nothing.
pub trait SearchObserver {
    /// Called once `vertex` is finalized and its edges have been scanned.
    fn on_extract(&mut self, _state: &MwcSearchState, _vertex: usize) {}
    fn on_cycle(&mut self, _state: &MwcSearchState, _event: &CycleEvent) {}
    /// Called when the inner loop for `state.root()` has stopped.
    fn on_root_done(&mut self, _state: &MwcSearchState, _gamma: f64) {}
    fn on_discard(&mut self, _root: usize, _removed: &[usize]) {}
}

pub struct NoObserver;

impl SearchObserver for NoObserver {}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist
            .total_cmp(&other.dist)
            .then(self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// State of one inner search. Buffers are sized to the graph once and reset
/// by walking the list of touched vertices, so reusing a state across roots
/// costs only what the previous search explored.
#[derive(Debug, Clone)]
pub struct MwcSearchState {
    root: usize,
    finalized: Vec<bool>,
    delta: Vec<f64>,
    pred: Vec<usize>,
    depth: Vec<u32>,
    /// Vertices with finite δ, in discovery order.
    explored: Vec<usize>,
    finalized_order: Vec<usize>,
    d_plus_min: f64,
    dist_to_cycle: f64,
    ell_best: f64,
    best_event: Option<CycleEvent>,
    /// Detection that last lowered γ during this search.
    gamma_event: Option<CycleEvent>,
    boundary_hit: bool,
    heap: BinaryHeap<Reverse<HeapItem>>,
}

impl MwcSearchState {
    pub fn new(n: usize) -> Self {
        MwcSearchState {
            root: NONE,
            finalized: vec![false; n],
            delta: vec![f64::INFINITY; n],
            pred: vec![NONE; n],
            depth: vec![0; n],
            explored: Vec::new(),
            finalized_order: Vec::new(),
            d_plus_min: f64::INFINITY,
            dist_to_cycle: f64::INFINITY,
            ell_best: f64::INFINITY,
            best_event: None,
            gamma_event: None,
            boundary_hit: false,
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self, root: usize) {
        for &v in &self.explored {
            self.finalized[v] = false;
            self.delta[v] = f64::INFINITY;
            self.pred[v] = NONE;
            self.depth[v] = 0;
        }
        self.explored.clear();
        self.finalized_order.clear();
        self.heap.clear();
        self.d_plus_min = f64::INFINITY;
        self.dist_to_cycle = f64::INFINITY;
        self.ell_best = f64::INFINITY;
        self.best_event = None;
        self.gamma_event = None;
        self.boundary_hit = false;
        self.root = root;
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.delta.len()
    }

    /// Membership in Q, the finalized set.
    pub fn is_finalized(&self, v: usize) -> bool {
        self.finalized[v]
    }

    pub fn delta(&self, v: usize) -> f64 {
        self.delta[v]
    }

    pub fn pred(&self, v: usize) -> Option<usize> {
        (self.pred[v] != NONE).then_some(self.pred[v])
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn explored(&self) -> &[usize] {
        &self.explored
    }

    pub fn finalized_order(&self) -> &[usize] {
        &self.finalized_order
    }

    pub fn d_plus_min(&self) -> f64 {
        self.d_plus_min
    }

    pub fn dist_to_cycle(&self) -> f64 {
        self.dist_to_cycle
    }

    pub fn ell_best(&self) -> f64 {
        self.ell_best
    }

    /// The detection achieving `d_plus_min`.
    pub fn best_event(&self) -> Option<&CycleEvent> {
        self.best_event.as_ref()
    }

    pub fn gamma_event(&self) -> Option<&CycleEvent> {
        self.gamma_event.as_ref()
    }

    /// Whether a finalized vertex had a neighbor outside the search view.
    pub fn boundary_hit(&self) -> bool {
        self.boundary_hit
    }

    /// Deepest common vertex of the predecessor chains of `y` and `z`.
    pub fn lca(&self, mut y: usize, mut z: usize) -> usize {
        while self.depth[y] > self.depth[z] {
            y = self.pred[y];
        }
        while self.depth[z] > self.depth[y] {
            z = self.pred[z];
        }
        while y != z {
            y = self.pred[y];
            z = self.pred[z];
        }
        y
    }

    /// Vertex sequence of a detected cycle: `lca .. y` down the tree, then
    /// `z ..` back up to the child of `lca`.
    pub fn cycle_vertices(&self, event: &CycleEvent) -> Vec<usize> {
        let mut seq = Vec::new();
        let mut a = event.y;
        while a != event.lca {
            seq.push(a);
            a = self.pred[a];
        }
        seq.push(event.lca);
        seq.reverse();
        let mut b = event.z;
        while b != event.lca {
            seq.push(b);
            b = self.pred[b];
        }
        seq
    }

    pub fn cycle_record(&self, graph: &WeightedGraph, weights: &[f64], event: &CycleEvent) -> CycleRecord {
        canonicalize_cycle_with_weights(&self.cycle_vertices(event), graph, weights)
            .expect("tree paths plus a closing edge form a simple cycle")
            .with_provenance(self.root, event.dist_to_cycle)
    }
}

/// How far an expansion phase goes.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Limit {
    Below(Cutoff),
    /// Settle every vertex with `δ(v) ≤ radius`.
    UpTo(f64),
}

/// Runs the inner loop from `root` on a (reset) `state`. Returns the final γ.
#[allow(clippy::too_many_arguments)]
pub(crate) fn run_inner(
    graph: &WeightedGraph,
    weights: &[f64],
    state: &mut MwcSearchState,
    root: usize,
    gamma_in: f64,
    view: Option<&VertexSubset>,
    cutoff: Cutoff,
    stats: &mut SearchStats,
    observer: &mut dyn SearchObserver,
    on_cycle: &mut dyn FnMut(&MwcSearchState, &CycleEvent),
) -> f64 {
    state.reset(root);
    stats.inner_searches += 1;
    state.delta[root] = 0.0;
    state.explored.push(root);
    state.heap.push(Reverse(HeapItem { dist: 0.0, vertex: root }));
    let gamma = expand(graph, weights, state, gamma_in, view, Limit::Below(cutoff), stats, observer, on_cycle);
    observer.on_root_done(state, gamma);
    gamma
}

/// Resumes a finished inner loop and settles every vertex with
/// `δ(v) ≤ radius`, still detecting cycles. Returns the updated γ.
#[allow(clippy::too_many_arguments)]
pub(crate) fn extend_inner(
    graph: &WeightedGraph,
    weights: &[f64],
    state: &mut MwcSearchState,
    gamma: f64,
    radius: f64,
    view: Option<&VertexSubset>,
    stats: &mut SearchStats,
    observer: &mut dyn SearchObserver,
) -> f64 {
    expand(graph, weights, state, gamma, view, Limit::UpTo(radius), stats, observer, &mut |_, _| {})
}

#[allow(clippy::too_many_arguments)]
fn expand(
    graph: &WeightedGraph,
    weights: &[f64],
    state: &mut MwcSearchState,
    gamma_in: f64,
    view: Option<&VertexSubset>,
    limit: Limit,
    stats: &mut SearchStats,
    observer: &mut dyn SearchObserver,
    on_cycle: &mut dyn FnMut(&MwcSearchState, &CycleEvent),
) -> f64 {
    let mut gamma = gamma_in;
    while let Some(&Reverse(HeapItem { dist, vertex: y })) = state.heap.peek() {
        if state.finalized[y] || dist != state.delta[y] {
            state.heap.pop();
            continue;
        }
        let go_on = match limit {
            Limit::Below(Cutoff::HalfGamma) => dist < gamma / 2.0,
            Limit::Below(Cutoff::HalfOf(t)) => dist < t / 2.0,
            Limit::UpTo(radius) => dist <= radius,
        };
        if !go_on {
            break;
        }
        state.heap.pop();
        state.finalized[y] = true;
        state.finalized_order.push(y);
        stats.extractions += 1;

        for nb in graph.neighbors(y) {
            let z = nb.vertex;
            if let Some(view) = view {
                if !view.contains(z) {
                    state.boundary_hit = true;
                    continue;
                }
            }
            let w = weights[nb.edge];
            if !state.finalized[z] {
                stats.relaxations += 1;
                let candidate = dist + w;
                if candidate < state.delta[z] {
                    if state.delta[z] == f64::INFINITY {
                        state.explored.push(z);
                    }
                    state.delta[z] = candidate;
                    state.pred[z] = y;
                    state.depth[z] = state.depth[y] + 1;
                    state.heap.push(Reverse(HeapItem { dist: candidate, vertex: z }));
                }
            } else if state.pred[y] != z {
                let p = state.lca(y, z);
                let length = state.delta[y] + state.delta[z] + w - 2.0 * state.delta[p];
                let dist_to_cycle = state.delta[p];
                let composite = dist_to_cycle + length;
                stats.cycles_detected += 1;
                let lowered = length < gamma;
                if lowered {
                    gamma = length;
                }
                let event = CycleEvent {
                    y,
                    z,
                    edge: nb.edge,
                    lca: p,
                    length,
                    dist_to_cycle,
                    composite,
                    gamma_after: gamma,
                };
                if lowered {
                    state.gamma_event = Some(event);
                }
                if composite < state.d_plus_min {
                    state.d_plus_min = composite;
                    state.dist_to_cycle = dist_to_cycle;
                    state.ell_best = length;
                    state.best_event = Some(event);
                }
                observer.on_cycle(state, &event);
                on_cycle(state, &event);
            }
        }
        observer.on_extract(state, y);
    }
    gamma
}

/// Result of a single rooted search.
#[derive(Debug, Clone)]
pub struct InnerSearch {
    pub gamma: f64,
    pub state: MwcSearchState,
    /// Every detected cycle, deduplicated, in detection order.
    pub detected: Vec<CycleRecord>,
    pub stats: SearchStats,
}

/// Rooted search under the graph's own weights with the live γ/2 cutoff.
pub fn inner_search(
    graph: &WeightedGraph,
    root: usize,
    gamma_in: f64,
    view: Option<&VertexSubset>,
) -> InnerSearch {
    inner_search_with(graph, graph.weights(), root, gamma_in, view, Cutoff::HalfGamma, &mut NoObserver)
}

pub fn inner_search_with(
    graph: &WeightedGraph,
    weights: &[f64],
    root: usize,
    gamma_in: f64,
    view: Option<&VertexSubset>,
    cutoff: Cutoff,
    observer: &mut dyn SearchObserver,
) -> InnerSearch {
    let mut state = MwcSearchState::new(graph.vertex_count());
    let mut stats = SearchStats::default();
    let mut events = Vec::new();
    let gamma = run_inner(
        graph,
        weights,
        &mut state,
        root,
        gamma_in,
        view,
        cutoff,
        &mut stats,
        observer,
        &mut |_, e| events.push(*e),
    );
    let mut seen = HashSet::new();
    let detected = events
        .iter()
        .map(|e| state.cycle_record(graph, weights, e))
        .filter(|c| seen.insert(c.vertices.clone()))
        .collect();
    InnerSearch {
        gamma,
        state,
        detected,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_triangle() -> WeightedGraph {
        WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_from_vertex_zero() {
        let g = unit_triangle();
        let run = inner_search(&g, 0, f64::INFINITY, None);
        assert_eq!(run.gamma, 3.0);
        assert_eq!(run.detected.len(), 1);
        let c = &run.detected[0];
        assert_eq!(c.vertices, vec![0, 1, 2]);
        assert_eq!(c.length, 3.0);
        assert_eq!(c.dist_to_cycle, Some(0.0));
        assert_eq!(c.composite, Some(3.0));
        assert_eq!(run.state.d_plus_min(), 3.0);
    }

    #[test]
    fn path_has_no_cycle() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0)]).unwrap();
        let run = inner_search(&g, 0, f64::INFINITY, None);
        assert_eq!(run.gamma, f64::INFINITY);
        assert!(run.detected.is_empty());
        assert!((0..4).all(|v| run.state.is_finalized(v)));
        assert_eq!(run.state.delta(3), 6.0);
    }

    #[test]
    fn composite_distance_through_a_stem() {
        // root 0 -- 1 (w 2) -- square 1-2-3-4 (w 1 each)
        let g = WeightedGraph::from_edges(
            5,
            [(0, 1, 2.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 1, 1.0)],
        )
        .unwrap();
        let run = inner_search(&g, 0, f64::INFINITY, None);
        assert_eq!(run.gamma, 4.0);
        assert_eq!(run.state.dist_to_cycle(), 2.0);
        assert_eq!(run.state.d_plus_min(), 6.0);
        assert_eq!(run.detected[0].vertices, vec![1, 2, 3, 4]);
    }

    #[test]
    fn vertex_at_exactly_half_gamma_is_not_expanded() {
        // from 0 the triangle 0-1-2 (length 4) is found; vertex 3 at distance 2 stays unexpanded
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 0, 1.0), (0, 3, 2.0)]).unwrap();
        let run = inner_search(&g, 0, f64::INFINITY, None);
        assert_eq!(run.gamma, 4.0);
        assert_eq!(run.state.delta(3), 2.0);
        assert!(!run.state.is_finalized(3));
    }

    #[test]
    fn view_restricts_and_flags_boundary() {
        let g = WeightedGraph::from_edges(
            5,
            [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (2, 3, 1.0), (3, 4, 1.0)],
        )
        .unwrap();
        let view = VertexSubset::from_members(5, [0, 1, 2]);
        let run = inner_search(&g, 0, f64::INFINITY, Some(&view));
        assert_eq!(run.gamma, 3.0);
        assert!(!run.state.is_finalized(3));
        let whole = VertexSubset::full(5);
        let run = inner_search(&g, 3, f64::INFINITY, Some(&whole));
        assert!(!run.state.boundary_hit());
        let run = inner_search(&g, 0, 100.0, Some(&view));
        assert!(run.state.boundary_hit());
    }

    #[test]
    fn lca_shared_parent_and_ancestor() {
        // tree 0 - 1, 1 - 2, 1 - 3, 2 - 4 with a long closing edge 3-4 and 0-4
        let g = WeightedGraph::from_edges(
            5,
            [(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 4, 1.0), (3, 4, 10.0), (0, 4, 10.0)],
        )
        .unwrap();
        let run = inner_search(&g, 0, f64::INFINITY, None);
        let s = &run.state;
        assert_eq!(s.pred(4), Some(2));
        assert_eq!(s.lca(2, 3), 1);
        assert_eq!(s.lca(4, 3), 1);
        assert_eq!(s.lca(4, 1), 1);
        assert_eq!(s.lca(4, 0), 0);
    }

    /// Mark every ancestor of y, then walk up from z until a marked vertex.
    fn naive_lca(state: &MwcSearchState, y: usize, z: usize) -> usize {
        let mut marked = HashSet::new();
        let mut a = Some(y);
        while let Some(v) = a {
            marked.insert(v);
            a = state.pred(v);
        }
        let mut b = z;
        while !marked.contains(&b) {
            b = state.pred(b).unwrap();
        }
        b
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn lca_agrees_with_marking_walk(
            n in 2usize..40,
            parents in proptest::collection::vec(any::<prop::sample::Index>(), 40),
            weights in proptest::collection::vec(1u32..5, 40),
            pairs in proptest::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 10),
        ) {
            // random tree: vertex i hangs off a random earlier vertex
            let edges: Vec<_> = (1..n).map(|i| (parents[i].index(i), i, weights[i] as f64)).collect();
            let g = WeightedGraph::from_edges(n, edges).unwrap();
            let run = inner_search(&g, 0, f64::INFINITY, None);
            for (a, b) in pairs {
                let (y, z) = (a.index(n), b.index(n));
                prop_assert_eq!(run.state.lca(y, z), naive_lca(&run.state, y, z));
            }
        }
    }
}
