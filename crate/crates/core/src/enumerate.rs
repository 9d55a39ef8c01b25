//! The universe of stable dual graphs of type `(g, n)`.
//!
//! Generated by closing the smooth graph under one-step degenerations,
//! deduplicated by canonical encoding. Since every single-edge contraction of
//! a stable graph is stable, every stable graph is reached.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::canon::{automorphisms_from_orders, canonical_form_unchecked, orbits_from_automorphisms, LabeledMultigraph};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::specialize::one_step_degenerations;

/// Default cap on `3g - 3 + n`, the number of edges of a zero stratum.
pub const DEFAULT_BUDGET: u32 = 9;

pub fn check_stable_pair(g: u32, n: u32) -> Result<()> {
    if 2 * g as i64 - 2 + n as i64 > 0 {
        Ok(())
    } else {
        Err(Error::UnstablePair { g, n })
    }
}

/// `3g - 3 + n`, the maximal number of nodes of a stable curve of type `(g, n)`.
pub fn boundary_dimension(g: u32, n: u32) -> u32 {
    (3 * g + n).saturating_sub(3)
}

#[derive(Clone, Debug)]
struct Member {
    graph: DualGraph,
    encoding: Vec<u8>,
    automorphisms: Vec<Vec<usize>>,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl Member {
    fn new(graph: DualGraph, encoding: Vec<u8>) -> Self {
        let search = LabeledMultigraph::from_dual_graph(&graph).search();
        let automorphisms = automorphisms_from_orders(&search.orders);
        let orbits = orbits_from_automorphisms(graph.vertex_count(), &automorphisms);
        let mut orbit_of = vec![0; graph.vertex_count()];
        for (i, orbit) in orbits.iter().enumerate() {
            for &v in orbit {
                orbit_of[v] = i;
            }
        }
        Member {
            graph,
            encoding,
            automorphisms,
            orbits,
            orbit_of,
        }
    }
}

/// One canonical representative per isomorphism class of stable graphs of
/// type `(g, n)`, ordered by edge count and then encoding.
#[derive(Clone, Debug)]
pub struct GraphUniverse {
    g: u32,
    n: u32,
    members: Vec<Member>,
    index: HashMap<Vec<u8>, usize>,
}

impl GraphUniverse {
    /// Builds a universe from arbitrary representatives; duplicates are merged.
    pub fn from_graphs(g: u32, n: u32, graphs: Vec<DualGraph>) -> Result<Self> {
        let mut canon: Vec<(Vec<u8>, DualGraph)> = Vec::with_capacity(graphs.len());
        for graph in graphs {
            if graph.genus() != g || graph.marking_count() != n {
                return Err(Error::TypeMismatch {
                    g: graph.genus(),
                    n: graph.marking_count(),
                    expected_g: g,
                    expected_n: n,
                });
            }
            graph.ensure_valid()?;
            let c = canonical_form_unchecked(&graph);
            canon.push((c.encoding().to_vec(), c.graph().clone()));
        }
        canon.sort_by(|a, b| (a.1.edge_count(), &a.0).cmp(&(b.1.edge_count(), &b.0)));
        canon.dedup_by(|a, b| a.0 == b.0);
        let members: Vec<Member> = canon
            .into_par_iter()
            .map(|(enc, graph)| Member::new(graph, enc))
            .collect();
        let index = members
            .iter()
            .enumerate()
            .map(|(i, m)| (m.encoding.clone(), i))
            .collect();
        Ok(GraphUniverse { g, n, members, index })
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn marking_count(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Canonical representative with index `i`.
    pub fn graph(&self, i: usize) -> &DualGraph {
        &self.members[i].graph
    }

    pub fn graphs(&self) -> impl Iterator<Item = &DualGraph> {
        self.members.iter().map(|m| &m.graph)
    }

    pub fn encoding(&self, i: usize) -> &[u8] {
        &self.members[i].encoding
    }

    pub fn automorphisms(&self, i: usize) -> &[Vec<usize>] {
        &self.members[i].automorphisms
    }

    pub fn orbits(&self, i: usize) -> &[Vec<usize>] {
        &self.members[i].orbits
    }

    /// Orbit index of each vertex of graph `i`.
    pub fn orbit_of(&self, i: usize) -> &[usize] {
        &self.members[i].orbit_of
    }

    pub fn lookup_encoding(&self, encoding: &[u8]) -> Option<usize> {
        self.index.get(encoding).copied()
    }

    /// Universe index of `graph`'s class together with the map from its
    /// vertices to the vertices of the stored representative.
    pub fn locate(&self, graph: &DualGraph) -> Result<(usize, Vec<usize>)> {
        if graph.genus() != self.g || graph.marking_count() != self.n {
            return Err(Error::NotInUniverse { g: self.g, n: self.n });
        }
        graph.ensure_valid()?;
        let c = canonical_form_unchecked(graph);
        let i = self
            .lookup_encoding(c.encoding())
            .ok_or(Error::NotInUniverse { g: self.g, n: self.n })?;
        Ok((i, c.position_of()))
    }

    /// Indices of the zero strata: graphs with `3g - 3 + n` edges.
    pub fn zero_strata(&self) -> Vec<usize> {
        let top = boundary_dimension(self.g, self.n) as usize;
        (0..self.len()).filter(|&i| self.graph(i).edge_count() == top).collect()
    }

    /// Index of the smooth graph.
    pub fn smooth(&self) -> usize {
        self.lookup_encoding(canonical_form_unchecked(&DualGraph::smooth(self.g, self.n)).encoding())
            .expect("smooth graph is always a member")
    }
}

/// All stable dual graphs of type `(g, n)` with the default budget.
pub fn stable_graphs(g: u32, n: u32) -> Result<GraphUniverse> {
    stable_graphs_with_budget(g, n, DEFAULT_BUDGET)
}

/// Fails for unstable pairs and for `3g - 3 + n > budget`.
pub fn check_budget(g: u32, n: u32, budget: u32) -> Result<()> {
    check_stable_pair(g, n)?;
    let dim = boundary_dimension(g, n);
    if dim > budget {
        return Err(Error::Budget(format!(
            "3g - 3 + n = {} exceeds the enumeration budget {}",
            dim, budget
        )));
    }
    Ok(())
}

/// All stable dual graphs of type `(g, n)`, refusing `3g - 3 + n > budget`.
pub fn stable_graphs_with_budget(g: u32, n: u32, budget: u32) -> Result<GraphUniverse> {
    check_budget(g, n, budget)?;
    let smooth = canonical_form_unchecked(&DualGraph::smooth(g, n));
    let mut seen: HashMap<Vec<u8>, DualGraph> = HashMap::new();
    seen.insert(smooth.encoding().to_vec(), smooth.graph().clone());
    let mut frontier = vec![smooth.graph().clone()];
    while !frontier.is_empty() {
        let mut found: Vec<(Vec<u8>, DualGraph)> = frontier
            .par_iter()
            .flat_map_iter(|graph| {
                let mut local: Vec<(Vec<u8>, DualGraph)> = one_step_degenerations(graph)
                    .iter()
                    .map(|d| {
                        let c = canonical_form_unchecked(d);
                        (c.encoding().to_vec(), c.graph().clone())
                    })
                    .collect();
                local.sort_by(|a, b| a.0.cmp(&b.0));
                local.dedup_by(|a, b| a.0 == b.0);
                local
            })
            .collect();
        found.sort_by(|a, b| a.0.cmp(&b.0));
        found.dedup_by(|a, b| a.0 == b.0);
        frontier = Vec::new();
        for (enc, graph) in found {
            if !seen.contains_key(&enc) {
                seen.insert(enc, graph.clone());
                frontier.push(graph);
            }
        }
    }
    GraphUniverse::from_graphs(g, n, seen.into_values().collect())
}

/// The zero strata of type `(g, n)` as canonical graphs.
pub fn zero_strata(g: u32, n: u32) -> Result<Vec<DualGraph>> {
    let universe = stable_graphs(g, n)?;
    Ok(universe
        .zero_strata()
        .into_iter()
        .map(|i| universe.graph(i).clone())
        .collect())
}
