//! Optimized modulus pipeline against the one-cycle-per-iteration baseline on
//! a planar proximity graph.
//!
//! `cargo run --release --example modulus_ab -- [spec]`

use loopmod::graph::{generate, GraphSpec};
use loopmod::modulus::{compute_modulus, ModulusConfig};

fn main() -> anyhow::Result<()> {
    let spec: GraphSpec = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "proximity:324:941:seed=1".into())
        .parse()?;
    let graph = generate(&spec)?;
    println!("{spec}: {} vertices, {} edges", graph.vertex_count(), graph.edge_count());
    println!("{:<10} {:>9} {:>10} {:>12} {:>12} {:>9}", "run", "qp_solves", "iterations", "constraints", "modulus", "time_s");
    for (name, config) in [("optimized", ModulusConfig::default()), ("baseline", ModulusConfig::baseline())] {
        let r = compute_modulus(&graph, &config);
        println!(
            "{:<10} {:>9} {:>10} {:>12} {:>12.8} {:>9.2}{}",
            name,
            r.qp_solves,
            r.iterations,
            r.constraints.len(),
            r.modulus,
            r.elapsed_s,
            if r.converged { "" } else { "  (not converged)" }
        );
    }
    Ok(())
}
