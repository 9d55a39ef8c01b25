//! Forcing the consequences of a partial choice and reading off the
//! contradiction chains when it cannot be completed.
//!
//!     cargo run --example propagation

use modcomp::assign::{Conflict, Propagation};
use modcomp::{Moduli, Seed};

fn main() -> modcomp::Result<()> {
    let moduli = Moduli::build(3, 0)?;
    let u = moduli.universe();

    // Select the genus-two component of a genus-two curve with an elliptic tail.
    let (graph, vertex) = (0..u.len())
        .find_map(|i| {
            let g = u.graph(i);
            (g.vertex_count() == 2 && g.edge_count() == 1)
                .then(|| (i, (0..2).find(|&v| g.vertex(v).genus == 2).unwrap()))
        })
        .expect("(3, 0) has a genus-two curve with an elliptic tail");
    println!("seed: vertex {} of {}", vertex, u.graph(graph));
    match moduli.propagate(&[Seed { graph, vertex, value: true }])? {
        Propagation::Consistent { .. } => println!("unexpectedly consistent"),
        Propagation::Contradiction(list) => {
            println!("{} contradictions; the shortest:", list.len());
            let c = &list[0];
            for step in &c.chain {
                println!("  {} vertices {:?} forced {}", u.graph(step.graph), step.vertices, step.value);
            }
            match c.conflict {
                Conflict::WholeCurve { graph } => println!("  ends with all of {} selected", u.graph(graph)),
                Conflict::Clash { graph, orbit } => println!("  orbit {} of {} forced both ways", orbit, u.graph(graph)),
            }
        }
    }

    // Selecting the tail instead closes up to the elliptic-tails assignment.
    let other = 1 - vertex;
    match moduli.propagate(&[Seed { graph, vertex: other, value: true }])? {
        Propagation::Consistent { assignment, undetermined } => println!(
            "tail seed: consistent, equals elliptic tails: {}, {} orbits undetermined",
            assignment == moduli.elliptic_tails(),
            undetermined.len()
        ),
        Propagation::Contradiction(_) => println!("unexpected contradiction"),
    }
    Ok(())
}
