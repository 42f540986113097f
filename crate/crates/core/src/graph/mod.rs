//! Undirected, positively weighted simple graphs.
//!
//! Vertices are dense ids `0..n`. Every vertex keeps the label it was loaded
//! with so that reports can be written in the caller's vocabulary. Edge ids
//! are positions in insertion order and index the weight slice, which lets
//! the searches run the same graph under a different weight function (the
//! modulus density) without rebuilding it.

mod cycle;
mod generate;
mod io;

use std::collections::HashMap;

use thiserror::Error;

pub use cycle::{canonicalize_cycle, canonicalize_cycle_with_weights, CycleRecord};
pub use generate::{generate, generate_with_meta, GenMeta, GeneratorKind, GraphSpec, WeightSpec};
pub use io::{load_graph, save_graph, GraphFormat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{context}: self-loop on vertex {vertex}")]
    SelfLoop { context: String, vertex: String },
    #[error("{context}: duplicate edge {u}-{v}")]
    DuplicateEdge { context: String, u: String, v: String },
    #[error("{context}: edge {u}-{v} has non-positive or non-finite weight {w}")]
    BadWeight {
        context: String,
        u: String,
        v: String,
        w: f64,
    },
    #[error("vertex id {0} out of range")]
    VertexOutOfRange(usize),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("not a simple cycle: {0}")]
    NotACycle(String),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

/// Adjacency entry: the neighbor and the id of the connecting edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub vertex: usize,
    pub edge: usize,
}

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    labels: Vec<String>,
    endpoints: Vec<(usize, usize)>,
    weights: Vec<f64>,
    adjacency: Vec<Vec<Neighbor>>,
    index: HashMap<(usize, usize), usize>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.endpoints == other.endpoints
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl WeightedGraph {
    /// Builds a graph on `n` vertices labelled `"0".."n-1"`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    pub fn with_labels<I>(labels: Vec<String>, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut g = WeightedGraph {
            adjacency: vec![Vec::new(); labels.len()],
            labels,
            endpoints: Vec::new(),
            weights: Vec::new(),
            index: HashMap::new(),
        };
        for (i, (u, v, w)) in edges.into_iter().enumerate() {
            g.push_edge(u, v, w, &format!("edge #{i}"))?;
        }
        Ok(g)
    }

    pub(crate) fn push_edge(
        &mut self,
        u: usize,
        v: usize,
        w: f64,
        context: &str,
    ) -> Result<usize, GraphError> {
        let n = self.labels.len();
        if u >= n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        if u == v {
            return Err(GraphError::SelfLoop {
                context: context.to_string(),
                vertex: self.labels[u].clone(),
            });
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(GraphError::BadWeight {
                context: context.to_string(),
                u: self.labels[u].clone(),
                v: self.labels[v].clone(),
                w,
            });
        }
        if self.index.contains_key(&key(u, v)) {
            return Err(GraphError::DuplicateEdge {
                context: context.to_string(),
                u: self.labels[u].clone(),
                v: self.labels[v].clone(),
            });
        }
        let id = self.endpoints.len();
        self.endpoints.push((u, v));
        self.weights.push(w);
        self.index.insert(key(u, v), id);
        self.adjacency[u].push(Neighbor { vertex: v, edge: id });
        self.adjacency[v].push(Neighbor { vertex: u, edge: id });
        Ok(id)
    }

    /// Same structure, new weights (indexed by edge id).
    pub fn reweighted(&self, weights: &[f64]) -> Result<Self, GraphError> {
        Self::with_labels(
            self.labels.clone(),
            self.endpoints
                .iter()
                .zip(weights)
                .map(|(&(u, v), &w)| (u, v, w)),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.endpoints[edge]
    }

    pub fn weight(&self, edge: usize) -> f64 {
        self.weights[edge]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(u, v, w)` triples in edge-id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.endpoints
            .iter()
            .zip(&self.weights)
            .map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn neighbors(&self, v: usize) -> &[Neighbor] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for nb in &self.adjacency[u] {
                    if !seen[nb.vertex] {
                        seen[nb.vertex] = true;
                        stack.push(nb.vertex);
                    }
                }
            }
        }
        count
    }

    /// Dimension of the cycle space; zero exactly for forests.
    pub fn cyclomatic_number(&self) -> usize {
        self.edge_count() + self.component_count() - self.vertex_count()
    }

    pub fn is_forest(&self) -> bool {
        self.cyclomatic_number() == 0
    }
}

/// A set of vertices stored both as a membership mask and a sorted list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    mask: Vec<bool>,
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn from_members(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; n];
        for v in members {
            mask[v] = true;
        }
        Self::from_mask(mask)
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
            .collect();
        VertexSubset { mask, members }
    }

    pub fn full(n: usize) -> Self {
        Self::from_mask(vec![true; n])
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.mask[v]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }
}
