//! Seeded generators and the two file formats.
//!
//! `cargo run --example generators`

use loopmod::graph::{generate, generate_with_meta, load_graph, save_graph, GraphFormat};

fn main() -> anyhow::Result<()> {
    for spec in [
        "grid:6",
        "light-tree:50:seed=3",
        "er:60:0.08:seed=1",
        "ba:60:2:seed=1",
        "ws:60:4:0.2:seed=1",
        "cycle:12",
        "complete:6",
        "proximity:80:200:weights=uniform-1-2:seed=5",
    ] {
        let (g, meta) = generate_with_meta(&spec.parse()?)?;
        let planted = meta.planted_gamma.map(|x| format!(", planted girth {x}")).unwrap_or_default();
        println!(
            "{spec:<45} {:>3} vertices {:>4} edges {:>2} components{planted}",
            g.vertex_count(),
            g.edge_count(),
            g.component_count()
        );
    }

    let g = generate(&"er:6:0.5:weights=int-1-9:seed=7".parse()?)?;
    for format in [GraphFormat::EdgeList, GraphFormat::Json] {
        let mut buf = Vec::new();
        save_graph(&g, &mut buf, format)?;
        let back = load_graph(buf.as_slice(), format)?;
        assert_eq!(back.weights(), g.weights());
        println!("\n{format:?}:\n{}", String::from_utf8(buf)?.trim_end());
    }
    Ok(())
}
