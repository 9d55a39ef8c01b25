//! Edge contractions and the specialization relation of a type.
//!
//!     cargo run --example specialization

use modcomp::{contract, specialization_relation, stable_graphs, DualGraph, VertexLabel};

fn main() -> modcomp::Result<()> {
    // A chain of three elliptic curves.
    let chain = DualGraph::new(
        3,
        0,
        vec![VertexLabel::new(1, vec![]), VertexLabel::new(1, vec![]), VertexLabel::new(1, vec![])],
        vec![(0, 1), (1, 2)],
    );
    for e in 0..chain.edge_count() {
        let (generic, map) = contract(&chain, &[e])?;
        println!("contract edge {} of {}: {}  fibers {:?}", e, chain, generic, map.fibers);
    }

    let universe = stable_graphs(2, 0)?;
    let relation = specialization_relation(&universe)?;
    println!("(2, 0): {} related pairs, {} maps", relation.entries().len(), relation.map_count());
    for entry in relation.entries().iter().filter(|e| e.target != e.source).take(6) {
        println!(
            "  {} specializes to {} in {} way(s)",
            universe.graph(entry.target),
            universe.graph(entry.source),
            entry.maps.len()
        );
    }
    let mut out = Vec::new();
    relation.write_jsonl(&universe, &mut out)?;
    let first = String::from_utf8_lossy(&out);
    println!("first JSON line: {}", first.lines().next().unwrap_or(""));
    Ok(())
}
