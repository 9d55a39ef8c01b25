//! Relative Picard group of the universal curve, intersection degrees with
//! the components of its fibers, and the relative nef cone.
//!
//! Divisors are written `a omega + sum b_i sigma_i + sum c_{i,S} E_{i,S}`.
//! A divisor is relatively nef when its degree on every vertex of every
//! stable graph is nonnegative.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::assign::{ExtremalAssignment, Moduli};
use crate::enumerate::{check_stable_pair, GraphUniverse};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::polyhedral::{self, Vector};
use crate::zmodel::invariants_of_mask;

/// One generator of the relative Picard group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    Omega,
    Sigma(u32),
    /// The component of the preimage of a boundary divisor lying over the
    /// genus-`genus` piece carrying `markings`.
    Boundary { genus: u32, markings: Vec<u32> },
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::Omega => write!(f, "omega"),
            BasisElement::Sigma(i) => write!(f, "sigma_{}", i),
            BasisElement::Boundary { genus, markings } => {
                let s: Vec<String> = markings.iter().map(|m| m.to_string()).collect();
                write!(f, "E_{}_{{{}}}", genus, s.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicBasis {
    g: u32,
    n: u32,
    elements: Vec<BasisElement>,
}

impl PicBasis {
    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn marking_count(&self) -> u32 {
        self.n
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn symbols(&self) -> Vec<String> {
        self.elements.iter().map(|e| e.to_string()).collect()
    }

    /// Representative of the boundary index `(i, S) ~ (g - i, S^c)`.
    pub fn normalize(&self, genus: u32, markings: &[u32]) -> (u32, Vec<u32>) {
        let mut s = markings.to_vec();
        s.sort_unstable();
        let complement: Vec<u32> = (1..=self.n).filter(|m| !s.contains(m)).collect();
        std::cmp::min((genus, s), (self.g - genus, complement))
    }

    fn boundary_position(&self, genus: u32, markings: &[u32]) -> Option<usize> {
        self.elements.iter().position(|e| match e {
            BasisElement::Boundary { genus: i, markings: s } => *i == genus && s.as_slice() == markings,
            _ => false,
        })
    }

    /// Degree of each basis element on vertex `v` of `graph`.
    pub fn degree_row(&self, graph: &DualGraph, v: usize) -> Result<Vec<i64>> {
        if graph.genus() != self.g || graph.marking_count() != self.n {
            return Err(Error::TypeMismatch {
                g: graph.genus(),
                n: graph.marking_count(),
                expected_g: self.g,
                expected_n: self.n,
            });
        }
        let k = graph.vertex_count();
        if v >= k {
            return Err(Error::VertexOutOfRange { index: v, count: k });
        }
        let label = graph.vertex(v);
        let mut row = vec![0i64; self.rank()];
        for (slot, e) in self.elements.iter().enumerate() {
            match e {
                BasisElement::Omega => row[slot] = 2 * label.genus as i64 - 2 + graph.valence(v) as i64,
                BasisElement::Sigma(i) => row[slot] = label.markings.contains(i) as i64,
                BasisElement::Boundary { .. } => {}
            }
        }
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            if a != v && b != v {
                continue;
            }
            let Some(side) = graph.bridge_side(e) else {
                continue;
            };
            // The piece across the bridge from v.
            let far: Vec<bool> = side.iter().map(|&s| s != side[v]).collect();
            let genus = invariants_of_mask(graph, &far).p_a as u32;
            let mut markings: Vec<u32> = (0..k)
                .filter(|&u| far[u])
                .flat_map(|u| graph.vertex(u).markings.iter().copied())
                .collect();
            markings.sort_unstable();
            let rep = self.normalize(genus, &markings);
            if let Some(slot) = self.boundary_position(rep.0, &rep.1) {
                row[slot] += if rep == (genus, markings) { 1 } else { -1 };
            }
        }
        Ok(row)
    }
}

/// Generators of the relative Picard group of the universal curve over the
/// moduli space of stable `n`-pointed genus-`g` curves.
pub fn pic_basis(g: u32, n: u32) -> Result<PicBasis> {
    check_stable_pair(g, n)?;
    let mut elements = Vec::new();
    if g != 1 {
        elements.push(BasisElement::Omega);
    }
    if g != 0 {
        elements.extend((1..=n).map(BasisElement::Sigma));
    }
    let mut boundary = std::collections::BTreeSet::new();
    for genus in 0..=g {
        for bits in 0u64..(1 << n) {
            let s: Vec<u32> = (1..=n).filter(|i| bits >> (i - 1) & 1 == 1).collect();
            let excluded = (genus == 0 && s.len() <= 1) || (genus == g && s.len() + 1 >= n as usize);
            let complement: Vec<u32> = (1..=n).filter(|i| !s.contains(i)).collect();
            let self_dual = 2 * genus == g && s == complement;
            if excluded || self_dual {
                continue;
            }
            boundary.insert(std::cmp::min((genus, s), (g - genus, complement)));
        }
    }
    elements.extend(
        boundary
            .into_iter()
            .map(|(genus, markings)| BasisElement::Boundary { genus, markings }),
    );
    Ok(PicBasis { g, n, elements })
}

/// An exact rational combination of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    basis: PicBasis,
    coefficients: Vec<BigRational>,
}

impl DivisorClass {
    pub fn new(basis: PicBasis, coefficients: Vec<BigRational>) -> Result<Self> {
        if coefficients.len() != basis.rank() {
            return Err(Error::Input(format!(
                "{} coefficients for a basis of rank {}",
                coefficients.len(),
                basis.rank()
            )));
        }
        Ok(DivisorClass { basis, coefficients })
    }

    pub fn from_integers(basis: PicBasis, coefficients: &[i64]) -> Result<Self> {
        let c = coefficients
            .iter()
            .map(|&x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        Self::new(basis, c)
    }

    pub fn basis(&self) -> &PicBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in self.coefficients.iter().zip(self.basis.elements()) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{} {}", c, e)?,
                (true, true) => write!(f, "-{} {}", c.abs(), e)?,
                (false, _) => write!(f, " {} {} {}", sign, c.abs(), e)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Degree of `d` on the component `v` of the fiber with dual graph `graph`.
pub fn degree(d: &DivisorClass, graph: &DualGraph, v: usize) -> Result<BigRational> {
    let row = d.basis.degree_row(graph, v)?;
    Ok(row
        .iter()
        .zip(&d.coefficients)
        .map(|(&r, c)| c * BigRational::from_integer(BigInt::from(r)))
        .fold(BigRational::zero(), |acc, x| acc + x))
}

/// The nonnegativity condition of a divisor on one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberInequality {
    pub graph: usize,
    pub vertex: usize,
    pub row: Vec<i64>,
}

/// One inequality per vertex of every graph (or of the zero strata only).
pub fn fiber_inequalities(universe: &GraphUniverse, basis: &PicBasis, zero_strata_only: bool) -> Result<Vec<FiberInequality>> {
    let graphs: Vec<usize> = if zero_strata_only {
        universe.zero_strata()
    } else {
        (0..universe.len()).collect()
    };
    let per_graph: Vec<Result<Vec<FiberInequality>>> = graphs
        .par_iter()
        .map(|&i| {
            let graph = universe.graph(i);
            (0..graph.vertex_count())
                .map(|v| {
                    Ok(FiberInequality {
                        graph: i,
                        vertex: v,
                        row: basis.degree_row(graph, v)?,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for r in per_graph {
        out.extend(r?);
    }
    Ok(out)
}

/// The relative nef cone: its defining inequalities, extremal rays and facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDescription {
    pub basis: PicBasis,
    pub inequalities: Vec<FiberInequality>,
    /// Primitive integer generators, sorted.
    pub rays: Vec<Vec<i64>>,
    /// Irredundant inequalities, primitive and sorted.
    pub facets: Vec<Vec<i64>>,
    pub zero_strata_only: bool,
}

fn to_wide(v: &[i64]) -> Vector {
    v.iter().map(|&x| x as i128).collect()
}

fn to_narrow(v: &[i128]) -> Result<Vec<i64>> {
    v.iter()
        .map(|&x| i64::try_from(x).map_err(|_| Error::Consistency("cone coordinate exceeds i64".into())))
        .collect()
}

impl ConeDescription {
    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Distinct primitive inequality rows.
    pub fn distinct_inequalities(&self) -> Vec<Vec<i64>> {
        let rows: Vec<Vector> = self.inequalities.iter().map(|q| to_wide(&q.row)).collect();
        polyhedral::normalize_rows(&rows)
            .iter()
            .map(|r| to_narrow(r).expect("rows came from i64"))
            .collect()
    }

    /// Whether `coefficients` has nonnegative degree on every vertex.
    pub fn contains(&self, coefficients: &[i64]) -> bool {
        self.inequalities
            .iter()
            .all(|q| q.row.iter().zip(coefficients).map(|(a, b)| a * b).sum::<i64>() >= 0)
    }

    /// Rays recomputed by Fourier-Motzkin elimination.
    pub fn fourier_motzkin_rays(&self) -> Result<Vec<Vec<i64>>> {
        let rows: Vec<Vector> = self.inequalities.iter().map(|q| to_wide(&q.row)).collect();
        polyhedral::fourier_motzkin_rays(&rows, self.rank())?
            .iter()
            .map(|r| to_narrow(r))
            .collect()
    }
}

/// Computes the nef cone by double description.
pub fn nef_cone(universe: &GraphUniverse, zero_strata_only: bool) -> Result<ConeDescription> {
    let basis = pic_basis(universe.genus(), universe.marking_count())?;
    let inequalities = fiber_inequalities(universe, &basis, zero_strata_only)?;
    let rows: Vec<Vector> = inequalities.iter().map(|q| to_wide(&q.row)).collect();
    let d = basis.rank();
    let rays = polyhedral::extreme_rays(&rows, d)?;
    let facets = polyhedral::facets(&rows, &rays, d)?;
    Ok(ConeDescription {
        basis,
        inequalities,
        rays: rays.iter().map(|r| to_narrow(r)).collect::<Result<_>>()?,
        facets: facets.iter().map(|r| to_narrow(r)).collect::<Result<_>>()?,
        zero_strata_only,
    })
}

/// A proper nonzero face of the relative cone of curves.
///
/// It is dual to the face of the nef cone spanned by `rays`; `witness` is
/// the sum of those rays and lies in the relative interior of that face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFace {
    /// Codimension in the cone of curves (= dimension of the dual nef face).
    pub codimension: usize,
    /// Indices into the nef cone's rays.
    pub rays: Vec<usize>,
    pub witness: Vec<i64>,
    /// Every (graph, vertex) on which the witness has degree zero.
    pub vanishing: Vec<(usize, usize)>,
}

impl ConeFace {
    pub fn witness_class(&self, basis: &PicBasis) -> Result<DivisorClass> {
        DivisorClass::from_integers(basis.clone(), &self.witness)
    }
}

/// All proper nonzero faces of the cone of curves, by codimension and then
/// by the rays of the dual nef face.
pub fn curve_cone_faces(cone: &ConeDescription) -> Result<Vec<ConeFace>> {
    let d = cone.rank();
    let rays: Vec<Vector> = cone.rays.iter().map(|r| to_wide(r)).collect();
    let facets: Vec<Vector> = cone.facets.iter().map(|r| to_wide(r)).collect();
    let mut faces = Vec::new();
    for set in polyhedral::faces(&rays, &facets)? {
        let members: Vec<&Vector> = set.iter().map(|&i| &rays[i]).collect();
        let spanned: Vec<Vector> = members.iter().map(|r| (*r).clone()).collect();
        let witness = to_narrow(&polyhedral::primitive_sum(&members, d)?)?;
        let vanishing = cone
            .inequalities
            .iter()
            .filter(|q| q.row.iter().zip(&witness).map(|(a, b)| a * b).sum::<i64>() == 0)
            .map(|q| (q.graph, q.vertex))
            .collect();
        faces.push(ConeFace {
            codimension: polyhedral::rank(&spanned, d),
            rays: set,
            witness,
            vanishing,
        });
    }
    faces.sort_by(|a, b| (a.codimension, &a.rays).cmp(&(b.codimension, &b.rays)));
    Ok(faces)
}

/// The assignment selecting, in each graph, the vertices on which the face's
/// witness has degree zero. Fails if the result is not extremal.
pub fn face_assignment(moduli: &Moduli, basis: &PicBasis, face: &ConeFace) -> Result<ExtremalAssignment> {
    let universe = moduli.universe();
    let witness = face.witness_class(basis)?;
    let smooth = universe.smooth();
    if !degree(&witness, universe.graph(smooth), 0)?.is_positive() {
        return Err(Error::Consistency(format!(
            "witness {} has no positive degree on the generic fiber",
            witness
        )));
    }
    let mut sets = Vec::with_capacity(universe.len());
    for i in 0..universe.len() {
        let graph = universe.graph(i);
        let mut chosen = Vec::new();
        for v in 0..graph.vertex_count() {
            let row = basis.degree_row(graph, v)?;
            let value: i64 = row.iter().zip(&face.witness).map(|(a, b)| a * b).sum();
            if value < 0 {
                return Err(Error::Consistency(format!("witness {} is not nef", witness)));
            }
            if value == 0 {
                chosen.push(v);
            }
        }
        sets.push(chosen);
    }
    let assignment = ExtremalAssignment::from_vertex_sets(universe, sets)?;
    let report = moduli.check_axioms(&assignment)?;
    if !report.passed() {
        return Err(Error::Consistency(format!(
            "assignment of face with witness {} violates the axioms: {}",
            witness,
            report.violations[0].describe(moduli)
        )));
    }
    Ok(assignment)
}

/// Sorted-key JSON report of the cone and, when given, its faces.
pub fn cone_report_json(cone: &ConeDescription, faces: Option<&[ConeFace]>) -> serde_json::Value {
    let mut report = json!({
        "basis": cone.basis.symbols(),
        "g": cone.basis.genus(),
        "n": cone.basis.marking_count(),
        "inequalities": cone.distinct_inequalities(),
        "rays": cone.rays,
        "facets": cone.facets,
        "zero_strata_only": cone.zero_strata_only,
        "version": env!("CARGO_PKG_VERSION"),
    });
    if let Some(faces) = faces {
        report["faces"] = faces
            .iter()
            .map(|f| {
                json!({
                    "codimension": f.codimension,
                    "rays": f.rays,
                    "witness": f.witness,
                    "vanishing": f.vanishing,
                })
            })
            .collect();
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::stable_graphs;
    use crate::graph::VertexLabel;

    fn v(genus: u32, markings: &[u32]) -> VertexLabel {
        VertexLabel::new(genus, markings.to_vec())
    }

    #[test]
    fn basis_symbols() {
        assert_eq!(pic_basis(2, 0).unwrap().symbols(), vec!["omega"]);
        assert_eq!(pic_basis(3, 0).unwrap().symbols(), vec!["omega", "E_1_{}"]);
        assert_eq!(pic_basis(2, 1).unwrap().symbols(), vec!["omega", "sigma_1", "E_1_{}"]);
        assert_eq!(pic_basis(1, 2).unwrap().symbols(), vec!["sigma_1", "sigma_2", "E_0_{1,2}"]);
        assert_eq!(pic_basis(0, 4).unwrap().symbols(), vec!["omega", "E_0_{1,2}", "E_0_{1,3}", "E_0_{1,4}"]);
        assert!(pic_basis(1, 0).is_err());
    }

    #[test]
    fn spine_and_tail_degrees() {
        let basis = pic_basis(3, 0).unwrap();
        let spine = DualGraph::new(
            3,
            0,
            vec![v(0, &[]), v(1, &[]), v(1, &[]), v(1, &[])],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        assert_eq!(basis.degree_row(&spine, 0).unwrap(), vec![1, 3]);
        assert_eq!(basis.degree_row(&spine, 1).unwrap(), vec![1, -1]);
        assert!(basis.degree_row(&spine, 4).is_err());
    }

    #[test]
    fn rational_degrees() {
        let basis = pic_basis(2, 1).unwrap();
        let d = DivisorClass::from_integers(basis.clone(), &[1, 0, 0]).unwrap();
        assert_eq!(degree(&d, &DualGraph::smooth(2, 1), 0).unwrap(), BigRational::from_integer(2.into()));
        let sigma = DivisorClass::from_integers(basis, &[0, 1, 0]).unwrap();
        let g = DualGraph::new(2, 1, vec![v(1, &[]), v(1, &[1])], vec![(0, 1)]);
        assert!(degree(&sigma, &g, 0).unwrap().is_zero());
    }

    #[test]
    fn genus_three_cone() {
        let cone = nef_cone(&stable_graphs(3, 0).unwrap(), false).unwrap();
        assert_eq!(cone.rays, vec![vec![1, 1], vec![3, -1]]);
        assert_eq!(curve_cone_faces(&cone).unwrap().len(), 2);
    }
}
