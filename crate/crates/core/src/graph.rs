//! Dual graphs of pointed stable curves.
//!
//! A vertex is an irreducible component, labelled by its geometric genus and
//! the marked points it carries; an edge is a node. Loops encode
//! non-separating self-nodes and count twice towards valence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexLabel {
    pub genus: u32,
    /// Marking labels in `1..=n`, kept sorted.
    pub markings: Vec<u32>,
}

impl VertexLabel {
    pub fn new(genus: u32, mut markings: Vec<u32>) -> Self {
        markings.sort_unstable();
        VertexLabel { genus, markings }
    }
}

/// A vertex-labelled connected multigraph with loops.
///
/// Edges are stored as a sorted list of pairs `(a, b)` with `a <= b`; parallel
/// edges appear with multiplicity. Edge indices used throughout the crate refer
/// to positions in this sorted list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "GraphJson", into = "GraphJson")]
pub struct DualGraph {
    g: u32,
    n: u32,
    vertices: Vec<VertexLabel>,
    edges: Vec<(usize, usize)>,
}

// Field order is alphabetical so that serialization has sorted keys.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphJson {
    edges: Vec<(usize, usize)>,
    g: u32,
    n: u32,
    vertices: Vec<VertexLabel>,
}

impl From<GraphJson> for DualGraph {
    fn from(j: GraphJson) -> Self {
        DualGraph::new(j.g, j.n, j.vertices, j.edges)
    }
}

impl From<DualGraph> for GraphJson {
    fn from(d: DualGraph) -> Self {
        GraphJson {
            edges: d.edges,
            g: d.g,
            n: d.n,
            vertices: d.vertices,
        }
    }
}

impl DualGraph {
    /// Builds a graph without validating it; see [`validate`].
    pub fn new(g: u32, n: u32, vertices: Vec<VertexLabel>, edges: Vec<(usize, usize)>) -> Self {
        let vertices = vertices
            .into_iter()
            .map(|v| VertexLabel::new(v.genus, v.markings))
            .collect();
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        DualGraph {
            g,
            n,
            vertices,
            edges,
        }
    }

    /// The smooth curve: one vertex of genus `g` carrying every marking.
    pub fn smooth(g: u32, n: u32) -> Self {
        DualGraph::new(g, n, vec![VertexLabel::new(g, (1..=n).collect())], vec![])
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn marking_count(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> &[VertexLabel] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &VertexLabel {
        &self.vertices[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Half-edges at `v`; loops count twice, markings are not included.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn loop_count(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v && b == v).count()
    }

    /// Symmetric multiplicity matrix; the diagonal holds loop counts.
    pub fn multiplicities(&self) -> Vec<Vec<u32>> {
        let k = self.vertices.len();
        let mut m = vec![vec![0u32; k]; k];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        m
    }

    /// `2 genus - 2 + valence + |markings|`, the stability quantity of a vertex.
    pub fn special_excess(&self, v: usize) -> i64 {
        2 * self.vertices[v].genus as i64 - 2
            + self.valence(v) as i64
            + self.vertices[v].markings.len() as i64
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mask = vec![true; self.vertices.len()];
        self.components_within(&mask).len() == 1
    }

    /// First Betti number `#edges - #vertices + #components`.
    pub fn first_betti(&self) -> i64 {
        let mask = vec![true; self.vertices.len()];
        self.edges.len() as i64 - self.vertices.len() as i64
            + self.components_within(&mask).len() as i64
    }

    /// Connected components of the subgraph induced on the vertices where
    /// `mask` is true. Components are listed by smallest vertex, each sorted.
    pub fn components_within(&self, mask: &[bool]) -> Vec<Vec<usize>> {
        let k = self.vertices.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &self.edges {
            if mask[a] && mask[b] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; k];
        for v in 0..k {
            if !mask[v] {
                continue;
            }
            let r = find(&mut parent, v);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(v);
        }
        groups
    }

    /// If edge `e` is a bridge, the vertex set on the side of its first
    /// endpoint once it is deleted.
    pub fn bridge_side(&self, e: usize) -> Option<Vec<bool>> {
        let (a, b) = self.edges[e];
        if a == b {
            return None;
        }
        let k = self.vertices.len();
        let mut seen = vec![false; k];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(x) = stack.pop() {
            for (i, &(p, q)) in self.edges.iter().enumerate() {
                if i == e {
                    continue;
                }
                let y = if p == x {
                    q
                } else if q == x {
                    p
                } else {
                    continue;
                };
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen[b] {
            None
        } else {
            Some(seen)
        }
    }

    /// Relabels vertices so that new vertex `i` is old vertex `order[i]`.
    pub fn relabel(&self, order: &[usize]) -> DualGraph {
        assert_eq!(order.len(), self.vertices.len(), "relabel: order length");
        let mut position = vec![usize::MAX; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let vertices = order.iter().map(|&old| self.vertices[old].clone()).collect();
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (position[a], position[b]))
            .collect();
        DualGraph::new(self.g, self.n, vertices, edges)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = validate(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(report.to_string()))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "v{}:g{}", i, v.genus)?;
            if !v.markings.is_empty() {
                let m: Vec<String> = v.markings.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", m.join(","))?;
            }
        }
        write!(f, " |")?;
        for &(a, b) in &self.edges {
            write!(f, " {}-{}", a, b)?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    EdgeOutOfRange { edge: (usize, usize) },
    Disconnected,
    GenusMismatch { expected: u32, actual: i64 },
    MarkingOutOfRange { vertex: usize, marking: u32 },
    MarkingRepeated { marking: u32 },
    MarkingMissing { marking: u32 },
    Unstable { vertex: usize, excess: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "graph has no vertices"),
            Violation::EdgeOutOfRange { edge } => {
                write!(f, "edge {:?} references a missing vertex", edge)
            }
            Violation::Disconnected => write!(f, "graph is disconnected"),
            Violation::GenusMismatch { expected, actual } => {
                write!(f, "total genus {} differs from ambient genus {}", actual, expected)
            }
            Violation::MarkingOutOfRange { vertex, marking } => {
                write!(f, "vertex {} carries marking {} outside 1..n", vertex, marking)
            }
            Violation::MarkingRepeated { marking } => {
                write!(f, "marking {} appears more than once", marking)
            }
            Violation::MarkingMissing { marking } => write!(f, "marking {} is not placed", marking),
            Violation::Unstable { vertex, excess } => write!(
                f,
                "vertex {} is unstable (2g - 2 + valence + markings = {})",
                vertex, excess
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Lists every violated invariant of a candidate stable dual graph.
pub fn validate(graph: &DualGraph) -> ValidationReport {
    let mut violations = Vec::new();
    let k = graph.vertices.len();
    if k == 0 {
        violations.push(Violation::NoVertices);
        return ValidationReport { violations };
    }
    let mut structural = false;
    for &edge in &graph.edges {
        if edge.0 >= k || edge.1 >= k {
            violations.push(Violation::EdgeOutOfRange { edge });
            structural = true;
        }
    }
    if !structural {
        if !graph.is_connected() {
            violations.push(Violation::Disconnected);
        }
        let total: i64 = graph.vertices.iter().map(|v| v.genus as i64).sum::<i64>()
            + graph.first_betti();
        if total != graph.g as i64 {
            violations.push(Violation::GenusMismatch {
                expected: graph.g,
                actual: total,
            });
        }
    }

    let mut seen = vec![0u32; graph.n as usize + 1];
    for (vi, v) in graph.vertices.iter().enumerate() {
        for &m in &v.markings {
            if m == 0 || m > graph.n {
                violations.push(Violation::MarkingOutOfRange { vertex: vi, marking: m });
            } else {
                seen[m as usize] += 1;
            }
        }
    }
    for m in 1..=graph.n {
        match seen[m as usize] {
            0 => violations.push(Violation::MarkingMissing { marking: m }),
            1 => {}
            _ => violations.push(Violation::MarkingRepeated { marking: m }),
        }
    }

    if !structural {
        for v in 0..k {
            let excess = graph.special_excess(v);
            if excess <= 0 {
                violations.push(Violation::Unstable { vertex: v, excess });
            }
        }
    }
    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(genus: u32, markings: &[u32]) -> VertexLabel {
        VertexLabel::new(genus, markings.to_vec())
    }

    #[test]
    fn smooth_genus_two_is_valid() {
        assert!(DualGraph::smooth(2, 0).validate().is_valid());
    }

    #[test]
    fn rational_loop_is_unstable() {
        let g = DualGraph::new(1, 0, vec![v(0, &[])], vec![(0, 0)]);
        let report = g.validate();
        assert_eq!(
            report.violations,
            vec![Violation::Unstable { vertex: 0, excess: 0 }]
        );
    }

    #[test]
    fn two_elliptic_tails() {
        let g = DualGraph::new(2, 0, vec![v(1, &[]), v(1, &[])], vec![(0, 1)]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn reports_every_violation() {
        let g = DualGraph::new(2, 2, vec![v(0, &[1, 1, 3]), v(0, &[])], vec![]);
        let r = g.validate();
        assert!(r.violations.contains(&Violation::Disconnected));
        assert!(r.violations.contains(&Violation::MarkingRepeated { marking: 1 }));
        assert!(r.violations.contains(&Violation::MarkingMissing { marking: 2 }));
        assert!(r
            .violations
            .contains(&Violation::MarkingOutOfRange { vertex: 0, marking: 3 }));
        assert!(r.violations.iter().any(|x| matches!(x, Violation::GenusMismatch { .. })));
    }

    #[test]
    fn edge_out_of_range_is_structural() {
        let g = DualGraph::new(1, 1, vec![v(0, &[1])], vec![(0, 3)]);
        let r = g.validate();
        assert_eq!(r.violations, vec![Violation::EdgeOutOfRange { edge: (0, 3) }]);
    }

    #[test]
    fn bridge_detection() {
        // dumbbell: loops on 0 and 1 joined by a bridge
        let g = DualGraph::new(2, 0, vec![v(0, &[]), v(0, &[])], vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(g.edges()[1], (0, 1));
        assert_eq!(g.bridge_side(1), Some(vec![true, false]));
        assert_eq!(g.bridge_side(0), None);
        assert_eq!(g.valence(0), 3);
        assert_eq!(g.loop_count(0), 1);
    }

    #[test]
    fn json_has_sorted_keys() {
        let g = DualGraph::new(1, 1, vec![v(0, &[1])], vec![(0, 0)]);
        assert_eq!(
            g.to_json(),
            r#"{"edges":[[0,0]],"g":1,"n":1,"vertices":[{"genus":0,"markings":[1]}]}"#
        );
        assert_eq!(DualGraph::from_json(&g.to_json()).unwrap(), g);
    }
}
