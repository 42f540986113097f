//! The slow reference methods: cycle enumeration, edge-rooted girth and the
//! modulus over every simple cycle.
//!
//! `cargo run --example oracles -- [spec]`

use loopmod::graph::generate;
use loopmod::mwc::{find_mwc, MwcOptions};
use loopmod::oracles::{enumerate_cycles, full_constraint_modulus, rooted_girth};

fn main() -> anyhow::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "er:9:0.45:weights=int-1-5:seed=4".into());
    let graph = generate(&spec.parse()?)?;
    let cycles = enumerate_cycles(&graph, 14)?;
    println!("{spec}: {} simple cycles", cycles.len());
    for c in cycles.iter().take(5) {
        println!("  {:?} length {}", c.vertices, c.length);
    }
    let shortest = cycles.iter().map(|c| c.length).fold(f64::INFINITY, f64::min);
    println!("shortest enumerated: {shortest}");
    println!("edge-rooted girth:   {}", rooted_girth(&graph).gamma);
    println!("composite search:    {}", find_mwc(&graph, &MwcOptions::default()).gamma);
    println!("modulus over all cycles: {:.9}", full_constraint_modulus(&graph, 1e-10)?);
    Ok(())
}
