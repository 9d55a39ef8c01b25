//! Builtin extremal assignments, axiom checking and exhaustive enumeration.
//!
//!     cargo run --release --example assignments

use modcomp::Moduli;

fn main() -> modcomp::Result<()> {
    for (g, n) in [(2, 0), (3, 0)] {
        let moduli = Moduli::build(g, n)?;
        let tails = moduli.elliptic_tails();
        let report = moduli.check_axioms(&tails)?;
        println!("elliptic tails on ({}, {}): {}", g, n, report);
        for v in &report.violations {
            println!("  {}", v.describe(&moduli));
        }
    }

    let moduli = Moduli::build(1, 3)?;
    for k in 0..=3 {
        let a = moduli.rational_tails(k);
        println!("rational tails k = {} on (1, 3): {}", k, moduli.check_axioms(&a)?);
    }

    for (g, n) in [(1, 1), (1, 2), (2, 1), (3, 0)] {
        let moduli = Moduli::build(g, n)?;
        let all = moduli.enumerate_assignments()?;
        println!("({}, {}): {} extremal assignments", g, n, all.len());
    }

    let moduli = Moduli::build(3, 0)?;
    let json = moduli.elliptic_tails().to_json(moduli.universe());
    println!("elliptic tails on (3, 0) as JSON: {} bytes", json.len());
    Ok(())
}
