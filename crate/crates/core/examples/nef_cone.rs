//! The relative nef cone of the universal curve, the faces of its dual cone
//! and the assignments they induce.
//!
//!     cargo run --release --example nef_cone -- 2 1

use modcomp::piccone::cone_report_json;
use modcomp::{curve_cone_faces, face_assignment, nef_cone, stable_graphs, Moduli};

fn main() -> modcomp::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (g, n) = match args.as_slice() {
        [g, n, ..] => (*g, *n),
        _ => (3, 0),
    };
    let universe = stable_graphs(g, n)?;
    let cone = nef_cone(&universe, false)?;
    let zero = nef_cone(&universe, true)?;
    println!("basis {:?}", cone.basis.symbols());
    println!("rays {:?}", cone.rays);
    println!("facets {:?}", cone.facets);
    println!("zero strata give the same cone: {}", zero.rays == cone.rays);
    println!("Fourier-Motzkin agrees: {}", cone.fourier_motzkin_rays()? == cone.rays);

    let faces = curve_cone_faces(&cone)?;
    let moduli = Moduli::from_universe(universe)?;
    for (k, face) in faces.iter().enumerate() {
        let a = face_assignment(&moduli, &cone.basis, face)?;
        let graphs = (0..moduli.universe().len()).filter(|&i| !a.selected(i).is_empty()).count();
        println!(
            "face {} (codim {}) witness {}: selects subcurves in {} graph(s)",
            k,
            face.codimension,
            face.witness_class(&cone.basis)?,
            graphs
        );
    }
    println!("{}", cone_report_json(&cone, None));
    Ok(())
}
