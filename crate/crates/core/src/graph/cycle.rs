use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use super::{GraphError, WeightedGraph};

/// A simple cycle in canonical form.
///
/// The vertex sequence is rotated so the smallest id comes first and oriented
/// so that the second vertex is the smaller of the first vertex's two cycle
/// neighbors. Equality, ordering and hashing look only at that sequence;
/// `root`, `dist_to_cycle` and `composite` record where a search found it.
#[derive(Debug, Clone, Serialize)]
pub struct CycleRecord {
    pub vertices: Vec<usize>,
    /// Edge ids, `edges[i]` joins `vertices[i]` and `vertices[i + 1]` (cyclically).
    pub edges: Vec<usize>,
    pub length: f64,
    pub root: Option<usize>,
    pub dist_to_cycle: Option<f64>,
    pub composite: Option<f64>,
}

impl CycleRecord {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Attaches search provenance; `composite` is set to `dist + length`.
    pub fn with_provenance(mut self, root: usize, dist_to_cycle: f64) -> Self {
        self.root = Some(root);
        self.dist_to_cycle = Some(dist_to_cycle);
        self.composite = Some(dist_to_cycle + self.length);
        self
    }

    /// Sum of `weights` over the cycle's edges.
    pub fn length_under(&self, weights: &[f64]) -> f64 {
        self.edges.iter().map(|&e| weights[e]).sum()
    }
}

impl PartialEq for CycleRecord {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for CycleRecord {}

impl Hash for CycleRecord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl PartialOrd for CycleRecord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycleRecord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

pub fn canonicalize_cycle(vertices: &[usize], graph: &WeightedGraph) -> Result<CycleRecord, GraphError> {
    canonicalize_cycle_with_weights(vertices, graph, graph.weights())
}

/// Canonicalizes `vertices` and measures it under an arbitrary per-edge weight slice.
pub fn canonicalize_cycle_with_weights(
    vertices: &[usize],
    graph: &WeightedGraph,
    weights: &[f64],
) -> Result<CycleRecord, GraphError> {
    let k = vertices.len();
    if k < 3 {
        return Err(GraphError::NotACycle(format!("{k} vertices, need at least 3")));
    }
    let n = graph.vertex_count();
    let mut seen = vec![false; 0];
    // small cycles dominate; avoid an O(n) mask for them
    if k > 32 {
        seen = vec![false; n];
    }
    for (i, &v) in vertices.iter().enumerate() {
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        let repeated = if k > 32 {
            std::mem::replace(&mut seen[v], true)
        } else {
            vertices[..i].contains(&v)
        };
        if repeated {
            return Err(GraphError::NotACycle(format!("vertex {v} repeated")));
        }
    }

    let start = (0..k).min_by_key(|&i| vertices[i]).unwrap();
    let next = vertices[(start + 1) % k];
    let prev = vertices[(start + k - 1) % k];
    let ordered: Vec<usize> = if next < prev {
        (0..k).map(|i| vertices[(start + i) % k]).collect()
    } else {
        (0..k).map(|i| vertices[(start + k - i) % k]).collect()
    };

    let mut edges = Vec::with_capacity(k);
    let mut length = 0.0;
    for i in 0..k {
        let (a, b) = (ordered[i], ordered[(i + 1) % k]);
        let e = graph
            .edge_between(a, b)
            .ok_or_else(|| GraphError::NotACycle(format!("{a} and {b} are not adjacent")))?;
        edges.push(e);
        length += weights[e];
    }
    Ok(CycleRecord {
        vertices: ordered,
        edges,
        length,
        root: None,
        dist_to_cycle: None,
        composite: None,
    })
}
