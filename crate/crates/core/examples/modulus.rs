//! Loop modulus of a grid: the optimal density and the loops that
//! carry it.
//!
//! `cargo run --release --example modulus -- [spec]`

use loopmod::graph::generate;
use loopmod::modulus::{compute_modulus, ModulusConfig};

fn main() -> anyhow::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "grid:5".into());
    let graph = generate(&spec.parse()?)?;
    let r = compute_modulus(&graph, &ModulusConfig::default());
    println!(
        "{spec}: modulus {:.9} from {} loops, {} QP solves, converged {}",
        r.modulus,
        r.constraints.len(),
        r.qp_solves,
        r.converged
    );
    let mut heavy: Vec<(usize, f64)> = r.rho.iter().copied().enumerate().collect();
    heavy.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("densest edges:");
    for (e, rho) in heavy.into_iter().take(6) {
        let (u, v) = graph.endpoints(e);
        println!("  {u:>3} {v:>3}  rho {rho:.5}");
    }
    for t in &r.trace {
        println!(
            "  iter {:>2} {:?}: {} violated, {} added, modulus {:.6}",
            t.iteration, t.scope, t.violated, t.added, t.modulus
        );
    }
    Ok(())
}
