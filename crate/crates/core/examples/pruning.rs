//! Hop-ball views: their sizes, and how many violated-cycle searches of the
//! modulus loop they serve.
//!
//! `cargo run --release --example pruning -- [spec]`

use loopmod::graph::generate;
use loopmod::modulus::{compute_modulus, ModulusConfig};
use loopmod::prune::{hop_ball, PruneConfig, SearchScope};

fn main() -> anyhow::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "proximity:150:400:seed=2".into());
    let graph = generate(&spec.parse()?)?;
    for radius in 1..=4 {
        let ball = hop_ball(&graph, &[0], radius);
        println!("ball of radius {radius} around 0: {} of {} vertices", ball.len(), graph.vertex_count());
    }
    for (name, prune) in [("no pruning", PruneConfig::disabled()), ("pruning", PruneConfig::default())] {
        let r = compute_modulus(
            &graph,
            &ModulusConfig {
                prune,
                ..ModulusConfig::default()
            },
        );
        let in_view = r.trace.iter().filter(|t| t.scope == SearchScope::View).count();
        println!(
            "{name:>10}: modulus {:.8}, {} iterations ({} in a view), {} extractions, {:.3}s",
            r.modulus, r.iterations, in_view, r.search_stats.extractions, r.elapsed_s
        );
    }
    Ok(())
}
