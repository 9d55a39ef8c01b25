//! Contracted models: replacing connected subcurves of a stable curve by
//! isolated singular points of type `(g, m)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::assign::{ExtremalAssignment, Moduli};
use crate::canon::{code_to_bytes, LabeledMultigraph};
use crate::error::{Error, Result};
use crate::graph::DualGraph;

/// Numerical data of a subcurve `Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubcurveInvariants {
    /// Arithmetic genus.
    pub p_a: i64,
    /// Edges joining `Z` to its complement, with multiplicity.
    pub attachments: usize,
    pub markings: usize,
}

fn subset_mask(graph: &DualGraph, subset: &[usize]) -> Result<Vec<bool>> {
    let k = graph.vertex_count();
    let mut mask = vec![false; k];
    for &v in subset {
        if v >= k {
            return Err(Error::VertexOutOfRange { index: v, count: k });
        }
        if mask[v] {
            return Err(Error::InvalidSubset(format!("vertex {} listed twice", v)));
        }
        mask[v] = true;
    }
    Ok(mask)
}

pub(crate) fn invariants_of_mask(graph: &DualGraph, mask: &[bool]) -> SubcurveInvariants {
    let mut genus = 0i64;
    let mut size = 0i64;
    let mut markings = 0;
    for (v, label) in graph.vertices().iter().enumerate() {
        if mask[v] {
            genus += label.genus as i64;
            size += 1;
            markings += label.markings.len();
        }
    }
    let mut internal = 0i64;
    let mut attachments = 0;
    for &(a, b) in graph.edges() {
        match (mask[a], mask[b]) {
            (true, true) => internal += 1,
            (true, false) | (false, true) => attachments += 1,
            _ => {}
        }
    }
    // Sum of the component genera, minus (components - 1).
    SubcurveInvariants {
        p_a: genus + internal - size + 1,
        attachments,
        markings,
    }
}

/// Invariants of the subcurve on the vertices in `subset`.
pub fn subcurve_invariants(graph: &DualGraph, subset: &[usize]) -> Result<SubcurveInvariants> {
    let mask = subset_mask(graph, subset)?;
    if subset.is_empty() || subset.len() == graph.vertex_count() {
        return Err(Error::InvalidSubset("subcurve must be nonempty and proper".into()));
    }
    Ok(invariants_of_mask(graph, &mask))
}

/// A component of a contracted model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelComponent {
    pub genus: u32,
    pub markings: Vec<u32>,
}

/// A singular point of type `(g, m)` with one branch per attachment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    /// Component index of each branch, sorted.
    pub branches: Vec<usize>,
    pub g: u32,
    pub m: u32,
    /// Markings absorbed into the point.
    pub markings: Vec<u32>,
}

/// A curve obtained from a stable curve by contracting connected subcurves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularModelGraph {
    #[serde(skip)]
    g: u32,
    #[serde(skip)]
    n: u32,
    pub components: Vec<ModelComponent>,
    pub nodes: Vec<(usize, usize)>,
    pub points: Vec<SingularPoint>,
}

impl SingularModelGraph {
    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn marking_count(&self) -> u32 {
        self.n
    }

    /// Singular points with every node included as an unmarked `(0, 2)` point.
    pub fn all_points(&self) -> Vec<SingularPoint> {
        let mut all = self.points.clone();
        all.extend(self.nodes.iter().map(|&(a, b)| SingularPoint {
            branches: vec![a, b],
            g: 0,
            m: 2,
            markings: Vec::new(),
        }));
        all
    }

    /// Genus of the model: component genera, point genera and the first Betti
    /// number of the component/point incidence graph.
    pub fn arithmetic_genus(&self) -> i64 {
        let points = self.all_points();
        let branches: usize = points.iter().map(|p| p.branches.len()).sum();
        let components: i64 = self.components.iter().map(|c| c.genus as i64).sum();
        let point_genus: i64 = points.iter().map(|p| p.g as i64).sum();
        components + point_genus + branches as i64 - self.components.len() as i64 - points.len() as i64 + 1
    }

    /// Checks the genus, branch-count and marking-partition invariants.
    pub fn check(&self) -> Result<()> {
        if self.arithmetic_genus() != self.g as i64 {
            return Err(Error::Consistency(format!(
                "model genus {} differs from ambient genus {}",
                self.arithmetic_genus(),
                self.g
            )));
        }
        for p in &self.points {
            if p.branches.len() != p.m as usize {
                return Err(Error::Consistency(format!("point of type ({}, {}) has {} branches", p.g, p.m, p.branches.len())));
            }
        }
        let mut seen: Vec<u32> = self
            .components
            .iter()
            .flat_map(|c| c.markings.iter().copied())
            .chain(self.points.iter().flat_map(|p| p.markings.iter().copied()))
            .collect();
        seen.sort_unstable();
        if seen != (1..=self.n).collect::<Vec<_>>() {
            return Err(Error::Consistency("markings do not partition 1..n".into()));
        }
        Ok(())
    }

    fn labeled(&self) -> LabeledMultigraph {
        let points = self.all_points();
        let c = self.components.len();
        let k = c + points.len();
        let mut labels = Vec::with_capacity(k);
        for comp in &self.components {
            let mut l = vec![0, comp.genus];
            l.extend_from_slice(&comp.markings);
            labels.push(l);
        }
        for p in &points {
            let mut l = vec![1, p.g, p.m];
            l.extend_from_slice(&p.markings);
            labels.push(l);
        }
        let mut mult = vec![vec![0u32; k]; k];
        for (i, p) in points.iter().enumerate() {
            for &b in &p.branches {
                mult[b][c + i] += 1;
                mult[c + i][b] += 1;
            }
        }
        LabeledMultigraph {
            header: vec![self.g, self.n],
            labels,
            mult,
        }
    }

    /// Byte string identifying the model up to isomorphism; nodes and
    /// unmarked `(0, 2)` points are not distinguished.
    pub fn encoding(&self) -> Vec<u8> {
        code_to_bytes(&self.labeled().search().code)
    }

    pub fn is_isomorphic(&self, other: &SingularModelGraph) -> bool {
        self.g == other.g && self.n == other.n && self.encoding() == other.encoding()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }
}

impl fmt::Display for SingularModelGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            writeln!(f, "component {}: genus {} markings {:?}", i, c.genus, c.markings)?;
        }
        for &(a, b) in &self.nodes {
            writeln!(f, "node {}-{}", a, b)?;
        }
        for p in &self.points {
            writeln!(
                f,
                "point ({}, {}) {}: branches {:?} markings {:?}",
                p.g,
                p.m,
                singularity_catalog(p.g, p.m).summary(),
                p.branches,
                p.markings
            )?;
        }
        Ok(())
    }
}

/// Contracts each connected component of `subset` to a singular point.
///
/// Complement vertices become components in increasing vertex order; points
/// are listed by the smallest vertex of the contracted component.
pub fn contract_model(graph: &DualGraph, subset: &[usize]) -> Result<SingularModelGraph> {
    let mask = subset_mask(graph, subset)?;
    if subset.len() == graph.vertex_count() {
        return Err(Error::InvalidSubset("cannot contract every component".into()));
    }
    Ok(contract_mask(graph, &mask))
}

fn contract_mask(graph: &DualGraph, mask: &[bool]) -> SingularModelGraph {
    let k = graph.vertex_count();
    let mut slot = vec![usize::MAX; k];
    let mut components = Vec::new();
    for v in 0..k {
        if !mask[v] {
            slot[v] = components.len();
            let label = graph.vertex(v);
            components.push(ModelComponent {
                genus: label.genus,
                markings: label.markings.clone(),
            });
        }
    }
    let parts = graph.components_within(mask);
    let mut part_of = vec![usize::MAX; k];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i;
        }
    }
    let mut nodes = Vec::new();
    let mut branches: Vec<Vec<usize>> = vec![Vec::new(); parts.len()];
    for &(a, b) in graph.edges() {
        match (mask[a], mask[b]) {
            (false, false) => nodes.push((slot[a], slot[b])),
            (true, false) => branches[part_of[a]].push(slot[b]),
            (false, true) => branches[part_of[b]].push(slot[a]),
            (true, true) => {}
        }
    }
    nodes.sort_unstable();
    let points = parts
        .iter()
        .zip(branches)
        .map(|(part, mut br)| {
            let mut pmask = vec![false; k];
            for &v in part {
                pmask[v] = true;
            }
            let inv = invariants_of_mask(graph, &pmask);
            let mut markings: Vec<u32> = part
                .iter()
                .flat_map(|&v| graph.vertex(v).markings.iter().copied())
                .collect();
            markings.sort_unstable();
            br.sort_unstable();
            SingularPoint {
                g: inv.p_a as u32,
                m: br.len() as u32,
                branches: br,
                markings,
            }
        })
        .collect();
    SingularModelGraph {
        g: graph.genus(),
        n: graph.marking_count(),
        components,
        nodes,
        points,
    }
}

/// A subset of `graph`'s vertices whose contraction is isomorphic to `model`.
pub fn admits_contraction(graph: &DualGraph, model: &SingularModelGraph) -> Option<Vec<usize>> {
    if graph.genus() != model.g || graph.marking_count() != model.n {
        return None;
    }
    let k = graph.vertex_count();
    if k >= usize::BITS as usize {
        return None;
    }
    let want = model.encoding();
    let wanted_components = model.components.len();
    (0..(1usize << k) - 1).find_map(|bits| {
        if k - bits.count_ones() as usize != wanted_components {
            return None;
        }
        let mask: Vec<bool> = (0..k).map(|v| bits >> v & 1 == 1).collect();
        let candidate = contract_mask(graph, &mask);
        (candidate.encoding() == want).then(|| (0..k).filter(|&v| mask[v]).collect())
    })
}

/// Known analytic classes of singularities of a given type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityType {
    pub g: u32,
    pub m: u32,
    pub known_classes: Vec<String>,
    /// Whether `known_classes` is the complete list.
    pub exhaustive: bool,
}

impl SingularityType {
    pub fn is_cataloged(&self) -> bool {
        !self.known_classes.is_empty()
    }

    pub fn summary(&self) -> String {
        match (self.known_classes.is_empty(), self.exhaustive) {
            (true, _) => "uncataloged".to_string(),
            (false, true) => self.known_classes.join(" | "),
            (false, false) => format!("{} (not known to be exhaustive)", self.known_classes.join(" | ")),
        }
    }
}

pub fn singularity_catalog(g: u32, m: u32) -> SingularityType {
    let (classes, exhaustive): (Vec<&str>, bool) = match (g, m) {
        (_, 0) => (vec![], false),
        (0, 1) => (vec!["smooth point"], true),
        (0, 2) => (vec!["node"], true),
        (0, _) => (vec!["rational m-fold point"], true),
        (1, 1) => (vec!["cusp y^2 = x^3"], true),
        (1, 2) => (vec!["tacnode", "cusp with a transverse smooth branch"], false),
        _ => (vec![], false),
    };
    let known_classes = classes
        .into_iter()
        .map(|c| {
            if c == "rational m-fold point" {
                format!("rational {}-fold point", m)
            } else {
                c.to_string()
            }
        })
        .collect();
    SingularityType {
        g,
        m,
        known_classes,
        exhaustive,
    }
}

/// A singularity type `(g, m)` together with the number of markings absorbed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PointType {
    pub g: u32,
    pub m: u32,
    pub markings: usize,
}

/// Every point type produced by contracting the selected subcurves of `A`,
/// with the universe indices of the graphs producing it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZStableSummary {
    pub types: Vec<(PointType, Vec<usize>)>,
}

impl ZStableSummary {
    pub fn point_types(&self) -> BTreeSet<PointType> {
        self.types.iter().map(|(t, _)| *t).collect()
    }
}

pub fn zstable_summary(moduli: &Moduli, assignment: &ExtremalAssignment) -> Result<ZStableSummary> {
    let report = moduli.check_axioms(assignment)?;
    if !report.passed() {
        return Err(Error::Input(format!(
            "assignment violates the axioms ({} violations)",
            report.violations.len()
        )));
    }
    let universe = moduli.universe();
    let mut types: std::collections::BTreeMap<PointType, Vec<usize>> = Default::default();
    for i in 0..universe.len() {
        let selected = assignment.selected(i);
        if selected.is_empty() {
            continue;
        }
        let model = contract_model(universe.graph(i), selected)?;
        for p in &model.points {
            let t = PointType {
                g: p.g,
                m: p.m,
                markings: p.markings.len(),
            };
            let graphs = types.entry(t).or_default();
            if graphs.last() != Some(&i) {
                graphs.push(i);
            }
        }
    }
    Ok(ZStableSummary {
        types: types.into_iter().collect(),
    })
}
