//! The specialization calculus `G ⤳ G'`.
//!
//! Modelling postulate: `G ⤳ G'` holds exactly when `G` is obtained from the
//! special graph `G'` by contracting a set of edges. A non-loop contraction
//! merges its endpoints (genera add, markings union); a loop contraction
//! raises the genus by one. The fibers of the contraction record which special
//! components each generic component degenerates into.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{automorphisms, canonical_form_unchecked};
use crate::enumerate::GraphUniverse;
use crate::error::{Error, Result};
use crate::graph::{DualGraph, VertexLabel};

/// A witnessed specialization: `source` (special) contracts onto `target`
/// (generic) along `contracted_edges`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionMap {
    pub source: DualGraph,
    pub target: DualGraph,
    /// Indices into `source.edges()`, sorted.
    pub contracted_edges: Vec<usize>,
    /// `fibers[t]` lists the source vertices contracting onto target vertex `t`.
    pub fibers: Vec<Vec<usize>>,
}

impl ContractionMap {
    /// `f[v]` = target vertex that source vertex `v` lies over.
    pub fn fiber_function(&self) -> Vec<usize> {
        fiber_function(&self.fibers, self.source.vertex_count())
    }

    /// Checks fiber partition, connectivity, genus additivity and that
    /// re-contracting reproduces `target` with the same fibers.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Consistency(msg));
        let k = self.source.vertex_count();
        let mut seen = vec![false; k];
        for fiber in &self.fibers {
            if fiber.is_empty() {
                return fail("empty fiber".into());
            }
            for &v in fiber {
                if v >= k || seen[v] {
                    return fail(format!("fiber vertex {} repeated or out of range", v));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return fail("fibers do not cover the source".into());
        }
        let contracted: Vec<(usize, usize)> = self
            .contracted_edges
            .iter()
            .map(|&e| self.source.edges()[e])
            .collect();
        for (t, fiber) in self.fibers.iter().enumerate() {
            let mut mask = vec![false; k];
            for &v in fiber {
                mask[v] = true;
            }
            let inner: Vec<(usize, usize)> = contracted
                .iter()
                .copied()
                .filter(|&(a, b)| mask[a] && mask[b])
                .collect();
            let sub = DualGraph::new(0, 0, self.source.vertices().to_vec(), inner.clone());
            if sub.components_within(&mask).len() != 1 {
                return fail(format!("fiber over {} is not connected", t));
            }
            let genus: i64 = fiber
                .iter()
                .map(|&v| self.source.vertex(v).genus as i64)
                .sum::<i64>()
                + inner.len() as i64
                - fiber.len() as i64
                + 1;
            if genus != self.target.vertex(t).genus as i64 {
                return fail(format!("genus additivity fails over target vertex {}", t));
            }
        }
        let (recontracted, map) = contract(&self.source, &self.contracted_edges)?;
        let bij = crate::canon::are_isomorphic(&recontracted, &self.target)
            .ok_or_else(|| Error::Consistency("re-contraction is not isomorphic to target".into()))?;
        let ours = self.fiber_function();
        let theirs: Vec<usize> = map.fiber_function().into_iter().map(|t| bij[t]).collect();
        let source_autos = automorphisms(&self.source);
        let target_autos = automorphisms(&self.target);
        if fiber_key(&ours, &source_autos, &target_autos)
            != fiber_key(&theirs, &source_autos, &target_autos)
        {
            return fail("re-contraction yields a different fiber structure".into());
        }
        Ok(())
    }
}

pub(crate) fn fiber_function(fibers: &[Vec<usize>], source_len: usize) -> Vec<usize> {
    let mut f = vec![usize::MAX; source_len];
    for (t, fiber) in fibers.iter().enumerate() {
        for &v in fiber {
            f[v] = t;
        }
    }
    f
}

fn fibers_from_function(f: &[usize], target_len: usize) -> Vec<Vec<usize>> {
    let mut fibers = vec![Vec::new(); target_len];
    for (v, &t) in f.iter().enumerate() {
        fibers[t].push(v);
    }
    fibers
}

/// Orbit representative of a fiber function under `Aut(source) × Aut(target)`.
pub(crate) fn fiber_key(f: &[usize], source_autos: &[Vec<usize>], target_autos: &[Vec<usize>]) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let mut image = vec![0; f.len()];
    for alpha in source_autos {
        for beta in target_autos {
            for (v, &t) in f.iter().enumerate() {
                image[alpha[v]] = beta[t];
            }
            if best.as_ref().map_or(true, |b| image < *b) {
                best = Some(image.clone());
            }
        }
    }
    best.unwrap_or_else(|| f.to_vec())
}

/// Contracts the edges of `special` with the given indices.
///
/// Target vertices are the connected components of the contracted edge set,
/// ordered by their smallest source vertex.
pub fn contract(special: &DualGraph, edges: &[usize]) -> Result<(DualGraph, ContractionMap)> {
    special.ensure_valid()?;
    let (target, map) = contract_unchecked(special, edges)?;
    debug_assert!(target.validate().is_valid(), "contraction of a stable graph is stable");
    Ok((target, map))
}

pub(crate) fn contract_unchecked(special: &DualGraph, edges: &[usize]) -> Result<(DualGraph, ContractionMap)> {
    let count = special.edge_count();
    let mut chosen = vec![false; count];
    for &e in edges {
        if e >= count {
            return Err(Error::EdgeOutOfRange { index: e, count });
        }
        if chosen[e] {
            return Err(Error::Input(format!("edge index {} listed twice", e)));
        }
        chosen[e] = true;
    }
    let k = special.vertex_count();
    let contracted: Vec<(usize, usize)> = special
        .edges()
        .iter()
        .zip(&chosen)
        .filter(|(_, &c)| c)
        .map(|(&e, _)| e)
        .collect();
    let skeleton = DualGraph::new(0, 0, special.vertices().to_vec(), contracted.clone());
    let fibers = skeleton.components_within(&vec![true; k]);
    let f = fiber_function(&fibers, k);

    let mut inner_edges = vec![0i64; fibers.len()];
    for &(a, _) in &contracted {
        inner_edges[f[a]] += 1;
    }
    let vertices: Vec<VertexLabel> = fibers
        .iter()
        .enumerate()
        .map(|(t, fiber)| {
            let genus: i64 = fiber.iter().map(|&v| special.vertex(v).genus as i64).sum::<i64>()
                + inner_edges[t]
                - fiber.len() as i64
                + 1;
            let markings = fiber
                .iter()
                .flat_map(|&v| special.vertex(v).markings.iter().copied())
                .collect();
            VertexLabel::new(genus as u32, markings)
        })
        .collect();
    let target_edges = special
        .edges()
        .iter()
        .zip(&chosen)
        .filter(|(_, &c)| !c)
        .map(|(&(a, b), _)| (f[a], f[b]))
        .collect();
    let target = DualGraph::new(special.genus(), special.marking_count(), vertices, target_edges);
    let mut contracted_edges: Vec<usize> = edges.to_vec();
    contracted_edges.sort_unstable();
    let map = ContractionMap {
        source: special.clone(),
        target: target.clone(),
        contracted_edges,
        fibers,
    };
    Ok((target, map))
}

/// One-step degenerations of `graph`: every loop-degeneration (genus drops by
/// one, a loop appears) and every stable vertex split. Not deduplicated.
pub fn one_step_degenerations(graph: &DualGraph) -> Vec<DualGraph> {
    let mut out = Vec::new();
    let k = graph.vertex_count();
    for v in 0..k {
        let label = graph.vertex(v);
        if label.genus > 0 {
            let mut vertices = graph.vertices().to_vec();
            vertices[v].genus -= 1;
            let mut edges = graph.edges().to_vec();
            edges.push((v, v));
            out.push(DualGraph::new(graph.genus(), graph.marking_count(), vertices, edges));
        }
        split_vertex(graph, v, &mut out);
    }
    out
}

fn split_vertex(graph: &DualGraph, v: usize, out: &mut Vec<DualGraph>) {
    let k = graph.vertex_count();
    let label = graph.vertex(v);
    let loops = graph.loop_count(v);
    let mut neighbors: BTreeMap<usize, usize> = BTreeMap::new();
    let mut kept = Vec::new();
    for &(a, b) in graph.edges() {
        if a == v && b == v {
            continue;
        } else if a == v {
            *neighbors.entry(b).or_default() += 1;
        } else if b == v {
            *neighbors.entry(a).or_default() += 1;
        } else {
            kept.push((a, b));
        }
    }
    let neighbors: Vec<(usize, usize)> = neighbors.into_iter().collect();
    let marks = &label.markings;
    let new = k;

    // Distribution of parallel neighbor edges: counts[i] go to the first half.
    let mut counts = vec![0usize; neighbors.len()];
    loop {
        let to_first: usize = counts.iter().sum();
        let total: usize = neighbors.iter().map(|&(_, m)| m).sum();
        for g1 in 0..=label.genus {
            let g2 = label.genus - g1;
            for mask in 0u32..(1u32 << marks.len()) {
                let m1 = mask.count_ones() as i64;
                let m2 = marks.len() as i64 - m1;
                for a in 0..=loops {
                    for b in 0..=(loops - a) {
                        let c = loops - a - b;
                        let val1 = 1 + c + to_first + 2 * a;
                        let val2 = 1 + c + (total - to_first) + 2 * b;
                        if 2 * g1 as i64 - 2 + val1 as i64 + m1 <= 0
                            || 2 * g2 as i64 - 2 + val2 as i64 + m2 <= 0
                        {
                            continue;
                        }
                        let mut vertices = graph.vertices().to_vec();
                        let (mut first, mut second) = (Vec::new(), Vec::new());
                        for (i, &m) in marks.iter().enumerate() {
                            if mask & (1 << i) != 0 {
                                first.push(m);
                            } else {
                                second.push(m);
                            }
                        }
                        vertices[v] = VertexLabel::new(g1, first);
                        vertices.push(VertexLabel::new(g2, second));
                        let mut edges = kept.clone();
                        for (&(u, m), &j) in neighbors.iter().zip(&counts) {
                            edges.extend(std::iter::repeat((v, u)).take(j));
                            edges.extend(std::iter::repeat((new, u)).take(m - j));
                        }
                        edges.extend(std::iter::repeat((v, v)).take(a));
                        edges.extend(std::iter::repeat((new, new)).take(b));
                        edges.extend(std::iter::repeat((v, new)).take(c + 1));
                        out.push(DualGraph::new(graph.genus(), graph.marking_count(), vertices, edges));
                    }
                }
            }
        }
        // next distribution (mixed radix)
        let mut i = 0;
        while i < counts.len() {
            if counts[i] < neighbors[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
    }
}

/// A generic graph reached by contracting one edge, with every witnessing map.
#[derive(Clone, Debug)]
pub struct Generization {
    /// Canonical form of the contracted graph.
    pub target: DualGraph,
    pub maps: Vec<ContractionMap>,
}

/// Single-edge contractions of `special`, grouped by canonical target and
/// fiber structure up to automorphisms of both sides.
pub fn one_step_generizations(special: &DualGraph) -> Result<Vec<Generization>> {
    special.ensure_valid()?;
    let source_autos = automorphisms(special);
    let mut groups: Vec<(Vec<u8>, Vec<usize>, Generization)> = Vec::new();
    for e in 0..special.edge_count() {
        let (raw, map) = contract_unchecked(special, &[e])?;
        let canon = canonical_form_unchecked(&raw);
        let pos = canon.position_of();
        let f: Vec<usize> = map.fiber_function().into_iter().map(|t| pos[t]).collect();
        let target = canon.graph().clone();
        let target_autos = automorphisms(&target);
        let key = fiber_key(&f, &source_autos, &target_autos);
        let map = ContractionMap {
            source: special.clone(),
            target: target.clone(),
            contracted_edges: vec![e],
            fibers: fibers_from_function(&f, target.vertex_count()),
        };
        match groups
            .iter_mut()
            .find(|(enc, k, _)| enc.as_slice() == canon.encoding() && *k == key)
        {
            Some((_, _, group)) => group.maps.push(map),
            None => groups.push((
                canon.encoding().to_vec(),
                key,
                Generization {
                    target,
                    maps: vec![map],
                },
            )),
        }
    }
    Ok(groups.into_iter().map(|(_, _, g)| g).collect())
}

/// Edge subsets of size `size`, one per multiset of edge pairs.
fn edge_subsets(graph: &DualGraph, size: Option<usize>) -> Vec<Vec<usize>> {
    let edges = graph.edges();
    let count = edges.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << count) {
        if let Some(s) = size {
            if mask.count_ones() as usize != s {
                continue;
            }
        }
        // within a run of parallel edges only prefixes are taken
        let redundant = (1..count).any(|i| {
            edges[i] == edges[i - 1] && mask & (1 << i) != 0 && mask & (1 << (i - 1)) == 0
        });
        if !redundant {
            out.push((0..count).filter(|&i| mask & (1 << i) != 0).collect());
        }
    }
    out
}

/// Every contraction of `special` onto `generic`, one per fiber structure up
/// to automorphisms of both graphs. Empty when `generic` is not a
/// generization of `special`.
pub fn specialization_maps(generic: &DualGraph, special: &DualGraph) -> Result<Vec<ContractionMap>> {
    generic.ensure_valid()?;
    special.ensure_valid()?;
    if generic.genus() != special.genus()
        || generic.marking_count() != special.marking_count()
        || generic.edge_count() > special.edge_count()
    {
        return Ok(Vec::new());
    }
    let target_canon = canonical_form_unchecked(generic);
    let source_autos = automorphisms(special);
    let target_autos = automorphisms(generic);
    let mut keys: Vec<Vec<usize>> = Vec::new();
    let mut maps = Vec::new();
    for subset in edge_subsets(special, Some(special.edge_count() - generic.edge_count())) {
        let (raw, map) = contract_unchecked(special, &subset)?;
        let canon = canonical_form_unchecked(&raw);
        if canon.encoding() != target_canon.encoding() {
            continue;
        }
        // raw vertex -> canonical position -> vertex of `generic`
        let pos = canon.position_of();
        let f: Vec<usize> = map
            .fiber_function()
            .into_iter()
            .map(|t| target_canon.relabeling()[pos[t]])
            .collect();
        let key = fiber_key(&f, &source_autos, &target_autos);
        if keys.contains(&key) {
            continue;
        }
        keys.push(key);
        maps.push(ContractionMap {
            source: special.clone(),
            target: generic.clone(),
            contracted_edges: subset,
            fibers: fibers_from_function(&f, generic.vertex_count()),
        });
    }
    Ok(maps)
}

/// A contraction between two universe graphs, in their canonical labellings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberMap {
    pub contracted_edges: Vec<usize>,
    pub fibers: Vec<Vec<usize>>,
    /// Fiber function normalised under both automorphism groups.
    pub key: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RelationEntry {
    /// Universe index of the generic graph `G`.
    pub target: usize,
    /// Universe index of the special graph `G'`.
    pub source: usize,
    pub maps: Vec<FiberMap>,
}

/// All witnessed specializations `G ⤳ G'` within one universe, identity
/// contractions included.
#[derive(Clone, Debug)]
pub struct SpecializationRelation {
    entries: Vec<RelationEntry>,
    by_pair: HashMap<(usize, usize), usize>,
}

impl SpecializationRelation {
    pub fn entries(&self) -> &[RelationEntry] {
        &self.entries
    }

    /// Maps from `source` onto `target`, if `target ⤳ source`.
    pub fn maps(&self, target: usize, source: usize) -> &[FiberMap] {
        self.by_pair
            .get(&(target, source))
            .map_or(&[], |&i| self.entries[i].maps.as_slice())
    }

    pub fn map_count(&self) -> usize {
        self.entries.iter().map(|e| e.maps.len()).sum()
    }

    pub fn contraction_map(&self, universe: &GraphUniverse, entry: &RelationEntry, map: &FiberMap) -> ContractionMap {
        ContractionMap {
            source: universe.graph(entry.source).clone(),
            target: universe.graph(entry.target).clone(),
            contracted_edges: map.contracted_edges.clone(),
            fibers: map.fibers.clone(),
        }
    }

    /// JSON lines, one contraction map per line.
    pub fn write_jsonl<W: Write>(&self, universe: &GraphUniverse, mut out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Line<'a> {
            edges: Vec<(usize, usize)>,
            fibers: &'a [Vec<usize>],
            source: &'a DualGraph,
            target: &'a DualGraph,
        }
        for entry in &self.entries {
            let source = universe.graph(entry.source);
            for map in &entry.maps {
                let line = Line {
                    edges: map.contracted_edges.iter().map(|&e| source.edges()[e]).collect(),
                    fibers: &map.fibers,
                    source,
                    target: universe.graph(entry.target),
                };
                serde_json::to_writer(&mut out, &line)?;
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }
}

/// Builds the complete witnessed relation over `universe` by contracting
/// every edge subset of every member.
pub fn specialization_relation(universe: &GraphUniverse) -> Result<SpecializationRelation> {
    let per_source: Vec<Result<Vec<(usize, usize, FiberMap)>>> = (0..universe.len())
        .into_par_iter()
        .map(|s| {
            let special = universe.graph(s);
            let source_autos = universe.automorphisms(s);
            let mut found: Vec<(usize, usize, FiberMap)> = Vec::new();
            for subset in edge_subsets(special, None) {
                let (raw, map) = contract_unchecked(special, &subset)?;
                let canon = canonical_form_unchecked(&raw);
                let t = universe.lookup_encoding(canon.encoding()).ok_or_else(|| {
                    Error::Consistency(format!("contraction of {} left the universe", special))
                })?;
                let pos = canon.position_of();
                let f: Vec<usize> = map.fiber_function().into_iter().map(|x| pos[x]).collect();
                let key = fiber_key(&f, source_autos, universe.automorphisms(t));
                if found.iter().any(|(tt, _, m)| *tt == t && m.key == key) {
                    continue;
                }
                let fibers = fibers_from_function(&f, universe.graph(t).vertex_count());
                found.push((
                    t,
                    s,
                    FiberMap {
                        contracted_edges: subset,
                        fibers,
                        key,
                    },
                ));
            }
            Ok(found)
        })
        .collect();

    let mut grouped: BTreeMap<(usize, usize), Vec<FiberMap>> = BTreeMap::new();
    for result in per_source {
        for (t, s, map) in result? {
            grouped.entry((t, s)).or_default().push(map);
        }
    }
    let mut entries = Vec::with_capacity(grouped.len());
    let mut by_pair = HashMap::new();
    for ((target, source), mut maps) in grouped {
        maps.sort_by(|a, b| a.key.cmp(&b.key));
        by_pair.insert((target, source), entries.len());
        entries.push(RelationEntry { target, source, maps });
    }
    Ok(SpecializationRelation { entries, by_pair })
}
