//! Arg-min extraction counts of the composite-distance search against the
//! edge-rooted baseline on the weighted grids, d = 3..=12.
//!
//! `cargo run --release --example grid_ops`

use loopmod::graph::{generate, GeneratorKind, GraphSpec};
use loopmod::mwc::{find_mwc, MwcOptions};
use loopmod::oracles::rooted_girth;

fn main() -> anyhow::Result<()> {
    println!("{:>3} {:>6} {:>10} {:>11} {:>7}", "d", "gamma", "ops_alg1", "ops_rooted", "ratio");
    for d in 3..=12 {
        let graph = generate(&GraphSpec::new(GeneratorKind::Grid { side: d }))?;
        let ours = find_mwc(&graph, &MwcOptions::default());
        let base = rooted_girth(&graph);
        assert_eq!(ours.gamma, base.gamma);
        println!(
            "{:>3} {:>6} {:>10} {:>11} {:>7.4}",
            d,
            ours.gamma,
            ours.stats.extractions,
            base.stats.extractions,
            ours.stats.extractions as f64 / base.stats.extractions as f64
        );
    }
    Ok(())
}
