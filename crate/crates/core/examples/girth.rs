//! Minimum weight cycle of a small labelled graph read from an edge list.
//!
//! `cargo run --example girth`

use loopmod::graph::{load_graph, GraphFormat};
use loopmod::mwc::{find_mwc, MwcOptions};

const TOWNS: &str = "\
# town-a town-b km
alder birch 4
birch cedar 3
cedar alder 9
cedar dunmore 2
dunmore elm 2
elm birch 4
elm fenwick 7
fenwick alder 11
";

fn main() -> anyhow::Result<()> {
    let graph = load_graph(TOWNS.as_bytes(), GraphFormat::EdgeList)?;
    let result = find_mwc(&graph, &MwcOptions::default());
    println!("girth: {}", result.gamma);
    if let Some(cycle) = &result.witness {
        let names: Vec<&str> = cycle.vertices.iter().map(|&v| graph.label(v)).collect();
        println!("cycle: {}", names.join(" -> "));
    }
    println!(
        "inner searches: {}, extractions: {}, discarded roots: {:?}",
        result.stats.inner_searches, result.stats.extractions, result.discarded
    );
    Ok(())
}
