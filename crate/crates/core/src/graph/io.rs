//! Edge-list and JSON graph formats.
//!
//! Edge list: one `u v w` triple per line, whitespace separated, `#` starts a
//! comment. `u v` alone means weight 1. A line holding a single label declares
//! a vertex, which is how isolated vertices and explicit id order survive a
//! round trip. Labels are arbitrary tokens, numbered densely in order of first
//! appearance.
//!
//! JSON: `{ "nodes": [...], "edges": [[u, v, w], ...] }` where node labels are
//! strings or non-negative integers and edge endpoints name nodes.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::str::FromStr;

use serde_json::{json, Value};

use super::{GraphError, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    EdgeList,
    Json,
}

impl FromStr for GraphFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" | "txt" => Ok(GraphFormat::EdgeList),
            "json" => Ok(GraphFormat::Json),
            other => Err(GraphError::InvalidSpec(format!("unknown graph format {other:?}"))),
        }
    }
}

impl GraphFormat {
    /// Guesses from a file extension; anything but `.json` is an edge list.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => GraphFormat::Json,
            _ => GraphFormat::EdgeList,
        }
    }
}

pub fn load_graph<R: Read>(mut source: R, format: GraphFormat) -> Result<WeightedGraph, GraphError> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| GraphError::Io(e.to_string()))?;
    match format {
        GraphFormat::EdgeList => parse_edge_list(&text),
        GraphFormat::Json => parse_json(&text),
    }
}

pub fn save_graph<W: Write>(graph: &WeightedGraph, mut sink: W, format: GraphFormat) -> Result<(), GraphError> {
    let text = match format {
        GraphFormat::EdgeList => edge_list_string(graph),
        GraphFormat::Json => json_string(graph),
    };
    sink.write_all(text.as_bytes())
        .map_err(|e| GraphError::Io(e.to_string()))
}

#[derive(Default)]
struct Interner {
    labels: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Interner {
    fn id(&mut self, label: &str) -> usize {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }
}

fn parse_edge_list(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut names = Interner::default();
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [label] => {
                names.id(label);
            }
            [u, v] => {
                let (u, v) = (names.id(u), names.id(v));
                raw.push((u, v, 1.0, lineno));
            }
            [u, v, w] => {
                let w: f64 = w.parse().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("bad weight {w:?}"),
                })?;
                let (u, v) = (names.id(u), names.id(v));
                raw.push((u, v, w, lineno));
            }
            _ => {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("expected `u v w`, found {} fields", tokens.len()),
                })
            }
        }
    }
    let mut graph = WeightedGraph::with_labels(names.labels, std::iter::empty())?;
    for (u, v, w, lineno) in raw {
        graph.push_edge(u, v, w, &format!("line {lineno}"))?;
    }
    Ok(graph)
}

fn label_of(value: &Value, what: &str) -> Result<String, GraphError> {
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_u64() => Ok(n.to_string()),
        other => Err(GraphError::Json(format!("{what}: expected string or non-negative integer, got {other}"))),
    }
}

fn parse_json(text: &str) -> Result<WeightedGraph, GraphError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    let mut names = Interner::default();
    let declared = match doc.get("nodes") {
        Some(Value::Array(nodes)) => {
            for (i, node) in nodes.iter().enumerate() {
                let label = label_of(node, &format!("nodes[{i}]"))?;
                if names.ids.contains_key(&label) {
                    return Err(GraphError::Json(format!("nodes[{i}]: duplicate node {label:?}")));
                }
                names.id(&label);
            }
            true
        }
        Some(_) => return Err(GraphError::Json("\"nodes\" must be an array".into())),
        None => false,
    };
    let edges = match doc.get("edges") {
        Some(Value::Array(edges)) => edges.as_slice(),
        None => &[],
        Some(_) => return Err(GraphError::Json("\"edges\" must be an array".into())),
    };
    let mut raw = Vec::with_capacity(edges.len());
    for (i, edge) in edges.iter().enumerate() {
        let triple = edge
            .as_array()
            .filter(|a| a.len() == 3 || a.len() == 2)
            .ok_or_else(|| GraphError::Json(format!("edges[{i}]: expected [u, v, w]")))?;
        let mut ends = [0usize; 2];
        for (slot, value) in ends.iter_mut().zip(triple) {
            let label = label_of(value, &format!("edges[{i}]"))?;
            *slot = match names.ids.get(&label) {
                Some(&id) => id,
                None if !declared => names.id(&label),
                None => return Err(GraphError::Json(format!("edges[{i}]: unknown node {label:?}"))),
            };
        }
        let w = match triple.get(2) {
            Some(w) => w
                .as_f64()
                .ok_or_else(|| GraphError::Json(format!("edges[{i}]: weight must be a number")))?,
            None => 1.0,
        };
        raw.push((ends[0], ends[1], w, i));
    }
    let mut graph = WeightedGraph::with_labels(names.labels, std::iter::empty())?;
    for (u, v, w, i) in raw {
        graph.push_edge(u, v, w, &format!("edges[{i}]"))?;
    }
    Ok(graph)
}

/// True when reading the edge lines alone reproduces the vertex numbering.
fn edges_fix_numbering(graph: &WeightedGraph) -> bool {
    let mut next = 0;
    for (u, v, _) in graph.edges() {
        for x in [u, v] {
            if x == next {
                next += 1;
            } else if x > next {
                return false;
            }
        }
    }
    next == graph.vertex_count()
}

fn edge_list_string(graph: &WeightedGraph) -> String {
    let mut out = String::new();
    if !edges_fix_numbering(graph) {
        for label in graph.labels() {
            out.push_str(label);
            out.push('\n');
        }
    }
    for (u, v, w) in graph.edges() {
        out.push_str(&format!("{} {} {}\n", graph.label(u), graph.label(v), w));
    }
    out
}

fn label_value(label: &str) -> Value {
    match label.parse::<u64>() {
        Ok(n) if n.to_string() == label => json!(n),
        _ => json!(label),
    }
}

fn json_string(graph: &WeightedGraph) -> String {
    let nodes: Vec<Value> = graph.labels().iter().map(|l| label_value(l)).collect();
    let edges: Vec<Value> = graph
        .edges()
        .map(|(u, v, w)| json!([label_value(graph.label(u)), label_value(graph.label(v)), w]))
        .collect();
    let mut s = serde_json::to_string(&json!({ "nodes": nodes, "edges": edges })).unwrap();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(text: &str) -> Result<WeightedGraph, GraphError> {
        load_graph(text.as_bytes(), GraphFormat::EdgeList)
    }

    fn round_trip(g: &WeightedGraph, format: GraphFormat) -> WeightedGraph {
        let mut buf = Vec::new();
        save_graph(g, &mut buf, format).unwrap();
        load_graph(buf.as_slice(), format).unwrap()
    }

    #[test]
    fn loads_triangle() {
        let g = load("0 1 1.0\n1 2 1.0\n2 0 1.0").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn self_loop_is_reported_with_line() {
        let err = load("0 1 1\n3 3 2.0\n").unwrap_err();
        match err {
            GraphError::SelfLoop { context, vertex } => {
                assert_eq!(context, "line 2");
                assert_eq!(vertex, "3");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_pair_in_either_orientation() {
        let err = load("0 1 1.0\n1 0 2.0\n").unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge { .. }), "{err}");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(load("0 1 x\n"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(load("# c\n0 1 2 3\n"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(load("0 1 -1\n"), Err(GraphError::BadWeight { .. })));
    }

    #[test]
    fn string_labels_and_comments() {
        let g = load("# streets\nbroad  pump 2.5 # note\npump cambridge 1\n\ncambridge broad 4\n").unwrap();
        assert_eq!(g.labels(), &["broad", "pump", "cambridge"]);
        assert_eq!(g.weight(0), 2.5);
        assert_eq!(round_trip(&g, GraphFormat::EdgeList), g);
        assert_eq!(round_trip(&g, GraphFormat::Json), g);
    }

    #[test]
    fn json_accepts_numbers_and_strings() {
        let g = load_graph(
            r#"{"nodes": [0, "a", 7], "edges": [[0, "a", 1.5], ["a", 7, 2], [7, 0, 3]]}"#.as_bytes(),
            GraphFormat::Json,
        )
        .unwrap();
        assert_eq!(g.labels(), &["0", "a", "7"]);
        assert_eq!(g.edge_count(), 3);
        let err = load_graph(r#"{"nodes": [0], "edges": [[0, 1, 1]]}"#.as_bytes(), GraphFormat::Json);
        assert!(err.is_err());
    }

    #[test]
    fn isolated_vertices_and_out_of_order_ids_survive() {
        let g = WeightedGraph::from_edges(5, [(3, 1, 0.1), (0, 2, 7.0)]).unwrap();
        let text = edge_list_string(&g);
        assert!(text.starts_with("0\n1\n2\n3\n4\n"));
        assert_eq!(round_trip(&g, GraphFormat::EdgeList), g);
        assert_eq!(round_trip(&g, GraphFormat::Json), g);
    }

    proptest! {
        #[test]
        fn save_then_load_is_identity(
            n in 1usize..12,
            picks in proptest::collection::vec((0usize..12, 0usize..12, 1e-6f64..1e6), 0..30),
        ) {
            let mut seen = std::collections::HashSet::new();
            let edges: Vec<_> = picks
                .into_iter()
                .filter(|&(u, v, _)| u < n && v < n && u != v && seen.insert((u.min(v), u.max(v))))
                .collect();
            let g = WeightedGraph::from_edges(n, edges).unwrap();
            prop_assert_eq!(&round_trip(&g, GraphFormat::EdgeList), &g);
            prop_assert_eq!(&round_trip(&g, GraphFormat::Json), &g);
        }
    }
}
