//! Locality heuristic: restrict searches to a hop ball around recently found
//! cycles, with a counter that forces a full-graph search at regular intervals.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{VertexSubset, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PruneConfig {
    pub enabled: bool,
    /// Maximum number of consecutive searches served by one view.
    pub reset_interval: usize,
    /// Ball radius in hops.
    pub distance_threshold: usize,
    /// Views smaller than this fraction of the graph are rejected.
    pub min_fraction: f64,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            enabled: true,
            reset_interval: 5,
            distance_threshold: 3,
            min_fraction: 0.3,
        }
    }
}

impl PruneConfig {
    pub fn disabled() -> Self {
        PruneConfig {
            enabled: false,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchScope {
    Full,
    View,
}

#[derive(Debug, Clone, Default)]
pub struct PruneState {
    view: Option<VertexSubset>,
    steps_in_view: usize,
    seed_vertices: Vec<usize>,
}

impl PruneState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn view(&self) -> Option<&VertexSubset> {
        self.view.as_ref()
    }

    pub fn steps_in_view(&self) -> usize {
        self.steps_in_view
    }

    pub fn seed_vertices(&self) -> &[usize] {
        &self.seed_vertices
    }

    /// Decides the scope of the next search and advances the counter.
    pub fn step(&mut self, config: &PruneConfig) -> SearchScope {
        if config.enabled && self.view.is_some() && self.steps_in_view < config.reset_interval {
            self.steps_in_view += 1;
            SearchScope::View
        } else {
            self.expire();
            SearchScope::Full
        }
    }

    /// Installs a freshly built view; `None` (too aggressive) leaves the
    /// state expired so the next step searches the full graph.
    pub fn install(&mut self, view: Option<VertexSubset>, seeds: Vec<usize>) {
        self.view = view;
        self.steps_in_view = 0;
        self.seed_vertices = seeds;
    }

    pub fn expire(&mut self) {
        self.view = None;
        self.steps_in_view = 0;
    }

    /// Rebuilds the view around `seeds` after a full-scope search, as long as
    /// pruning is enabled and there is something to seed from.
    pub fn update(
        &mut self,
        graph: &WeightedGraph,
        seeds: Vec<usize>,
        config: &PruneConfig,
        last_scope: SearchScope,
    ) {
        if !config.enabled || last_scope != SearchScope::Full || seeds.is_empty() {
            return;
        }
        let view = build_view(graph, &seeds, config);
        self.install(view, seeds);
    }
}

/// Vertices within `distance_threshold` hops of `seeds`, or `None` when that
/// ball holds fewer than `min_fraction` of all vertices.
pub fn build_view(graph: &WeightedGraph, seeds: &[usize], config: &PruneConfig) -> Option<VertexSubset> {
    let ball = hop_ball(graph, seeds, config.distance_threshold);
    let n = graph.vertex_count() as f64;
    // relative slack so that e.g. 3 of 10 at 0.3 counts as reaching the bound
    if (ball.len() as f64) < config.min_fraction * n * (1.0 - 1e-12) {
        None
    } else {
        Some(ball)
    }
}

pub fn hop_ball(graph: &WeightedGraph, seeds: &[usize], radius: usize) -> VertexSubset {
    let n = graph.vertex_count();
    let mut hops = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &s in seeds {
        if hops[s] == usize::MAX {
            hops[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if hops[u] == radius {
            continue;
        }
        for nb in graph.neighbors(u) {
            if hops[nb.vertex] == usize::MAX {
                hops[nb.vertex] = hops[u] + 1;
                queue.push_back(nb.vertex);
            }
        }
    }
    VertexSubset::from_mask(hops.into_iter().map(|h| h != usize::MAX).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphSpec};

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn all_seeds_give_everything() {
        let g = path(10);
        let cfg = PruneConfig {
            distance_threshold: 0,
            ..PruneConfig::default()
        };
        let seeds: Vec<usize> = (0..10).collect();
        assert_eq!(build_view(&g, &seeds, &cfg).unwrap().len(), 10);
    }

    #[test]
    fn boundary_fraction_is_kept() {
        let g = path(10);
        let cfg = PruneConfig {
            distance_threshold: 2,
            ..PruneConfig::default()
        };
        let view = build_view(&g, &[0], &cfg).unwrap();
        assert_eq!(view.members(), &[0, 1, 2]);
        let cfg = PruneConfig {
            distance_threshold: 1,
            ..cfg
        };
        assert!(build_view(&g, &[0], &cfg).is_none());
    }

    #[test]
    fn grid_ball_matches_manhattan_count() {
        // in a 10x10 grid, the hop ball around a set is the union of Manhattan balls
        let g = generate(&"grid:10".parse::<GraphSpec>().unwrap()).unwrap();
        let seeds = [99usize, 98, 89, 88];
        let view = hop_ball(&g, &seeds, 3);
        let mut hops = vec![usize::MAX; 100];
        for &s in &seeds {
            hops[s] = 0;
        }
        // plain Bellman-style relaxation as an independent reference
        for _ in 0..100 {
            for (u, v, _) in g.edges() {
                if hops[u] != usize::MAX && hops[u] + 1 < hops[v] {
                    hops[v] = hops[u] + 1;
                }
                if hops[v] != usize::MAX && hops[v] + 1 < hops[u] {
                    hops[u] = hops[v] + 1;
                }
            }
        }
        let expected: Vec<usize> = (0..100).filter(|&v| hops[v] <= 3).collect();
        assert_eq!(view.members(), expected.as_slice());
    }

    #[test]
    fn counter_runs_view_then_full() {
        let g = path(10);
        let cfg = PruneConfig {
            reset_interval: 3,
            distance_threshold: 9,
            ..PruneConfig::default()
        };
        let mut state = PruneState::new();
        assert_eq!(state.step(&cfg), SearchScope::Full);
        state.update(&g, vec![0], &cfg, SearchScope::Full);
        let scopes: Vec<SearchScope> = (0..4).map(|_| state.step(&cfg)).collect();
        use SearchScope::*;
        assert_eq!(scopes, vec![View, View, View, Full]);
        assert!(state.view().is_none());
    }

    #[test]
    fn disabled_is_always_full() {
        let g = path(10);
        let cfg = PruneConfig::disabled();
        let mut state = PruneState::new();
        state.install(build_view(&g, &[0], &PruneConfig::default()), vec![0]);
        for _ in 0..5 {
            assert_eq!(state.step(&cfg), SearchScope::Full);
        }
        state.update(&g, vec![3], &cfg, SearchScope::Full);
        assert!(state.view().is_none());
    }

    #[test]
    fn aggressive_view_falls_back_to_full() {
        let g = path(10);
        let cfg = PruneConfig {
            distance_threshold: 0,
            ..PruneConfig::default()
        };
        let mut state = PruneState::new();
        state.update(&g, vec![4], &cfg, SearchScope::Full);
        assert!(state.view().is_none());
        assert_eq!(state.step(&cfg), SearchScope::Full);
        assert_eq!(state.step(&cfg), SearchScope::Full);
    }

    #[test]
    fn updates_only_after_full_scope() {
        let g = path(10);
        let cfg = PruneConfig {
            distance_threshold: 9,
            ..PruneConfig::default()
        };
        let mut state = PruneState::new();
        state.update(&g, vec![0], &cfg, SearchScope::View);
        assert!(state.view().is_none());
        state.update(&g, vec![0], &cfg, SearchScope::Full);
        assert!(state.view().is_some());
        assert_eq!(state.seed_vertices(), &[0]);
    }
}
