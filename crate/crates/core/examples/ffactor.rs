//! Greedy vertex-removal curve: fraction of edges left after deleting the
//! k highest-degree vertices, written as CSV.
//!
//! `cargo run --example ffactor -- ba:200:3:seed=1 > curve.csv`

use loopmod::graph::generate;
use loopmod::oracles::f_factor_simulation;

fn main() -> anyhow::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "ws:60:4:0.1:seed=1".into());
    let graph = generate(&spec.parse()?)?;
    let curve = f_factor_simulation(&graph);
    eprintln!("{spec}: area {:.4}", curve.area());
    curve.write_csv(std::io::stdout().lock())?;
    Ok(())
}
