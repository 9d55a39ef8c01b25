//! Enumerates the stable graphs of a type and shows canonical forms,
//! automorphism groups and the zero strata.
//!
//!     cargo run --example stable_graphs -- 2 1

use modcomp::{are_isomorphic, canonicalize, stable_graphs, DualGraph, VertexLabel};

fn type_from_args() -> (u32, u32) {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    match args.as_slice() {
        [g, n, ..] => (*g, *n),
        _ => (2, 0),
    }
}

fn main() -> modcomp::Result<()> {
    let (g, n) = type_from_args();
    let universe = stable_graphs(g, n)?;
    println!("type ({}, {}): {} stable graphs", g, n, universe.len());
    for i in 0..universe.len() {
        println!(
            "  {:>3}  |Aut| = {:<3} orbits {:?}  {}",
            i,
            universe.automorphisms(i).len(),
            universe.orbits(i),
            universe.graph(i)
        );
    }
    let zero = universe.zero_strata();
    println!("zero strata: {:?}", zero);

    // Two labellings of the same curve have the same canonical form.
    let a = DualGraph::new(2, 0, vec![VertexLabel::new(0, vec![]), VertexLabel::new(1, vec![])], vec![(0, 0), (0, 1)]);
    let b = a.relabel(&[1, 0]);
    let ca = canonicalize(&a)?;
    println!("{} and {}: isomorphism {:?}", a, b, are_isomorphic(&a, &b));
    println!("canonical JSON: {}", ca.graph().to_json());
    Ok(())
}
