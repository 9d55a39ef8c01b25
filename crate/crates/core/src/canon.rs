//! Canonical labelling, isomorphism and automorphisms of labelled multigraphs.
//!
//! Colour refinement (label, loops, then neighbour colour/multiplicity
//! multisets) followed by individualisation over the first non-trivial cell.
//! Every leaf of the search tree is a total vertex order; the lexicographically
//! smallest code over all leaves is canonical, and the leaves attaining it
//! differ exactly by automorphisms.

use crate::error::Result;
use crate::graph::DualGraph;

/// Generic input to the canonical search: arbitrary integer vertex labels and
/// a symmetric multiplicity matrix (diagonal = loops).
#[derive(Clone, Debug)]
pub(crate) struct LabeledMultigraph {
    pub header: Vec<u32>,
    pub labels: Vec<Vec<u32>>,
    pub mult: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub(crate) struct Search {
    pub code: Vec<u32>,
    /// Every vertex order attaining `code`; `orders[0]` is the canonical one.
    pub orders: Vec<Vec<usize>>,
}

impl LabeledMultigraph {
    pub fn from_dual_graph(graph: &DualGraph) -> Self {
        let labels = graph
            .vertices()
            .iter()
            .map(|v| {
                let mut l = Vec::with_capacity(v.markings.len() + 1);
                l.push(v.genus);
                l.extend_from_slice(&v.markings);
                l
            })
            .collect();
        LabeledMultigraph {
            header: vec![graph.genus(), graph.marking_count()],
            labels,
            mult: graph.multiplicities(),
        }
    }

    fn len(&self) -> usize {
        self.labels.len()
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let k = order.len();
        let mut code = self.header.clone();
        code.push(k as u32);
        for &v in order {
            code.push(self.labels[v].len() as u32);
            code.extend_from_slice(&self.labels[v]);
        }
        for i in 0..k {
            for j in i..k {
                code.push(self.mult[order[i]][order[j]]);
            }
        }
        code
    }

    fn initial_colors(&self) -> Vec<u32> {
        let keys: Vec<(&[u32], u32)> = (0..self.len())
            .map(|v| (self.labels[v].as_slice(), self.mult[v][v]))
            .collect();
        rank(&keys)
    }

    fn refine(&self, colors: &mut Vec<u32>) {
        let k = self.len();
        let mut classes = distinct(colors);
        loop {
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..k)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> = (0..k)
                        .filter(|&u| u != v && self.mult[v][u] > 0)
                        .map(|u| (colors[u], self.mult[v][u]))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            *colors = rank(&sigs);
            let now = distinct(colors);
            if now == classes {
                break;
            }
            classes = now;
        }
    }

    pub fn search(&self) -> Search {
        let mut best: Option<Vec<u32>> = None;
        let mut orders = Vec::new();
        let colors = self.initial_colors();
        self.descend(colors, &mut best, &mut orders);
        Search {
            code: best.unwrap_or_default(),
            orders,
        }
    }

    fn descend(&self, mut colors: Vec<u32>, best: &mut Option<Vec<u32>>, orders: &mut Vec<Vec<usize>>) {
        self.refine(&mut colors);
        let k = self.len();
        let mut size = vec![0usize; k];
        for &c in &colors {
            size[c as usize] += 1;
        }
        match (0..k).find(|&c| size[c] > 1) {
            None => {
                let mut order: Vec<usize> = (0..k).collect();
                order.sort_unstable_by_key(|&v| colors[v]);
                let code = self.encode(&order);
                match best {
                    Some(b) if code > *b => {}
                    Some(b) if code == *b => orders.push(order),
                    _ => {
                        *best = Some(code);
                        orders.clear();
                        orders.push(order);
                    }
                }
            }
            Some(cell) => {
                let cell = cell as u32;
                for v in (0..k).filter(|&v| colors[v] == cell) {
                    let next: Vec<u32> = (0..k)
                        .map(|u| 2 * colors[u] + (colors[u] == cell && u != v) as u32)
                        .collect();
                    self.descend(next, best, orders);
                }
            }
        }
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present") as u32)
        .collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

pub(crate) fn code_to_bytes(code: &[u32]) -> Vec<u8> {
    code.iter().flat_map(|x| x.to_be_bytes()).collect()
}

/// Automorphisms as vertex maps `perm[v] = image of v`, from the leaf orders.
pub(crate) fn automorphisms_from_orders(orders: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let base = &orders[0];
    let mut autos: Vec<Vec<usize>> = orders
        .iter()
        .map(|o| {
            let mut perm = vec![0; base.len()];
            for (i, &v) in base.iter().enumerate() {
                perm[v] = o[i];
            }
            perm
        })
        .collect();
    autos.sort();
    autos.dedup();
    autos
}

pub(crate) fn orbits_from_automorphisms(count: usize, autos: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut orbit_id = vec![usize::MAX; count];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for v in 0..count {
        if orbit_id[v] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = autos.iter().map(|p| p[v]).collect();
        members.push(v);
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            orbit_id[m] = orbits.len();
        }
        orbits.push(members);
    }
    orbits
}

/// Canonical representative of a dual graph's isomorphism class.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    graph: DualGraph,
    relabeling: Vec<usize>,
    encoding: Vec<u8>,
}

impl CanonicalForm {
    /// The input graph relabelled into canonical order.
    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    /// `relabeling[i]` is the input vertex placed at canonical position `i`.
    pub fn relabeling(&self) -> &[usize] {
        &self.relabeling
    }

    /// Byte string identifying the isomorphism class.
    pub fn encoding(&self) -> &[u8] {
        &self.encoding
    }

    /// Inverse of [`relabeling`](Self::relabeling): input vertex to canonical position.
    pub fn position_of(&self) -> Vec<usize> {
        let mut pos = vec![0; self.relabeling.len()];
        for (i, &v) in self.relabeling.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// Canonical JSON: the graph under canonical labelling with sorted edges.
    pub fn to_json(&self) -> String {
        self.graph.to_json()
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.encoding == other.encoding
    }
}

impl Eq for CanonicalForm {}

/// Canonical form without the validity check; used for intermediate graphs.
pub(crate) fn canonical_form_unchecked(graph: &DualGraph) -> CanonicalForm {
    let search = LabeledMultigraph::from_dual_graph(graph).search();
    let relabeling = search.orders[0].clone();
    CanonicalForm {
        graph: graph.relabel(&relabeling),
        relabeling,
        encoding: code_to_bytes(&search.code),
    }
}

pub fn canonicalize(graph: &DualGraph) -> Result<CanonicalForm> {
    graph.ensure_valid()?;
    Ok(canonical_form_unchecked(graph))
}

/// A label-preserving isomorphism `bij[v1] = v2`, if one exists.
///
/// Panics if an edge of either graph references a missing vertex.
pub fn are_isomorphic(first: &DualGraph, second: &DualGraph) -> Option<Vec<usize>> {
    if first.genus() != second.genus()
        || first.marking_count() != second.marking_count()
        || first.vertex_count() != second.vertex_count()
        || first.edge_count() != second.edge_count()
    {
        return None;
    }
    let a = canonical_form_unchecked(first);
    let b = canonical_form_unchecked(second);
    if a.encoding != b.encoding {
        return None;
    }
    let mut bij = vec![0; first.vertex_count()];
    for (i, &v) in a.relabeling.iter().enumerate() {
        bij[v] = b.relabeling[i];
    }
    Some(bij)
}

/// All vertex permutations preserving labels and edge multiplicities,
/// sorted, identity included.
pub fn automorphisms(graph: &DualGraph) -> Vec<Vec<usize>> {
    let search = LabeledMultigraph::from_dual_graph(graph).search();
    automorphisms_from_orders(&search.orders)
}

/// Orbits of the automorphism group, each sorted, listed by smallest member.
pub fn vertex_orbits(graph: &DualGraph) -> Vec<Vec<usize>> {
    orbits_from_automorphisms(graph.vertex_count(), &automorphisms(graph))
}
