//! Watching the root-discarding step: which roots each search removes, and
//! how the two discard rules differ on a graph where the unextended rule
//! removes a vertex of the minimum cycle.
//!
//! `cargo run --example discarding`

use loopmod::graph::{generate, WeightedGraph};
use loopmod::mwc::{find_mwc_observed, DiscardRule, MwcOptions, SearchObserver};

struct Log;

impl SearchObserver for Log {
    fn on_discard(&mut self, root: usize, removed: &[usize]) {
        println!("  root {root} removes {removed:?}");
    }
}

fn show(name: &str, graph: &WeightedGraph, rule: DiscardRule) {
    println!("{name}, {rule:?} rule:");
    let options = MwcOptions {
        discard_rule: rule,
        ..MwcOptions::default()
    };
    let r = find_mwc_observed(graph, &options, &mut Log);
    let cycle = r.witness.map(|c| c.vertices).unwrap_or_default();
    println!("  gamma = {}, cycle {:?}, {} inner searches", r.gamma, cycle, r.stats.inner_searches);
}

fn main() -> anyhow::Result<()> {
    let graph = generate(&"er:9:0.3:weights=int-1-9:seed=122".parse()?)?;
    for rule in [DiscardRule::Literal, DiscardRule::Certified] {
        show("er:9:0.3:weights=int-1-9:seed=122", &graph, rule);
    }
    let lollipops = WeightedGraph::from_edges(
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
    )?;
    show("two triangles on a stem", &lollipops, DiscardRule::Certified);
    Ok(())
}
