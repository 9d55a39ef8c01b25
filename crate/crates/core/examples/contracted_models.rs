//! Contracting subcurves to singular points and summarizing the point types
//! an assignment produces.
//!
//!     cargo run --example contracted_models

use modcomp::zmodel::{singularity_catalog, zstable_summary};
use modcomp::{contract_model, subcurve_invariants, DualGraph, Moduli, VertexLabel};

fn main() -> modcomp::Result<()> {
    // A genus-two curve with an elliptic tail, the tail contracted to a cusp.
    let tail = DualGraph::new(2, 0, vec![VertexLabel::new(1, vec![]), VertexLabel::new(1, vec![])], vec![(0, 1)]);
    let inv = subcurve_invariants(&tail, &[1])?;
    println!("tail: p_a {} with {} attachment(s)", inv.p_a, inv.attachments);
    let model = contract_model(&tail, &[1])?;
    print!("{}", model);
    println!("arithmetic genus {}", model.arithmetic_genus());

    // Two elliptic curves meeting twice; contracting one gives a type (1, 2) point.
    let pair = DualGraph::new(3, 0, vec![VertexLabel::new(1, vec![]), VertexLabel::new(1, vec![])], vec![(0, 1), (0, 1)]);
    let m = contract_model(&pair, &[0])?;
    print!("{}", m);

    for (g, m) in [(0, 3), (1, 1), (1, 2), (2, 1)] {
        println!("type ({}, {}): {}", g, m, singularity_catalog(g, m).summary());
    }

    let moduli = Moduli::build(3, 0)?;
    let summary = zstable_summary(&moduli, &moduli.elliptic_tails())?;
    for (t, graphs) in &summary.types {
        println!("elliptic tails on (3, 0) produce type ({}, {}) in {} graphs", t.g, t.m, graphs.len());
    }
    Ok(())
}
