pub mod assign;
pub mod cache;
pub mod canon;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod piccone;
pub mod polyhedral;
pub mod specialize;
pub mod zmodel;

pub use assign::{AxiomReport, ExtremalAssignment, Moduli, Propagation, Seed};
pub use canon::{are_isomorphic, automorphisms, canonicalize, vertex_orbits, CanonicalForm};
pub use enumerate::{stable_graphs, stable_graphs_with_budget, zero_strata, GraphUniverse};
pub use error::{Error, Result};
pub use graph::{validate, DualGraph, ValidationReport, VertexLabel, Violation};
pub use piccone::{curve_cone_faces, face_assignment, nef_cone, pic_basis, ConeDescription, ConeFace, DivisorClass, PicBasis};
pub use specialize::{contract, specialization_relation, ContractionMap, SpecializationRelation};
pub use zmodel::{contract_model, subcurve_invariants, SingularModelGraph};
