//! Extremal assignments over a universe of stable graphs.
//!
//! An assignment selects, in every graph, a union of automorphism orbits of
//! vertices. It is extremal when no graph is fully selected and every
//! contraction map `G' -> G` satisfies `v ∈ Z(G) ⟺ fiber(v) ⊆ Z(G')`.
//! Selections are stored per orbit, so invariance under automorphisms holds by
//! construction.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::enumerate::{stable_graphs_with_budget, GraphUniverse, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::specialize::{specialization_relation, SpecializationRelation};
use crate::zmodel::invariants_of_mask;

/// Default cap on search nodes in [`Moduli::enumerate_assignments`].
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// A selected vertex set for every graph of a universe, by universe index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtremalAssignment {
    g: u32,
    n: u32,
    selected: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct AssignmentJson {
    entries: Vec<EntryJson>,
    g: u32,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    graph: DualGraph,
    selected: Vec<usize>,
}

impl ExtremalAssignment {
    /// Builds an assignment from one vertex set per universe graph, in the
    /// universe's canonical labelling. Each set must be a union of orbits.
    pub fn from_vertex_sets(universe: &GraphUniverse, sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.len() != universe.len() {
            return Err(Error::Input(format!(
                "expected {} vertex sets, got {}",
                universe.len(),
                sets.len()
            )));
        }
        let mut selected = Vec::with_capacity(sets.len());
        for (i, mut set) in sets.into_iter().enumerate() {
            set.sort_unstable();
            set.dedup();
            let k = universe.graph(i).vertex_count();
            if let Some(&bad) = set.iter().find(|&&v| v >= k) {
                return Err(Error::VertexOutOfRange { index: bad, count: k });
            }
            let closed = universe.orbits(i).iter().all(|orbit| {
                let inside = orbit.iter().filter(|v| set.binary_search(v).is_ok()).count();
                inside == 0 || inside == orbit.len()
            });
            if !closed {
                return Err(Error::NotOrbitClosed { graph: i });
            }
            selected.push(set);
        }
        Ok(ExtremalAssignment {
            g: universe.genus(),
            n: universe.marking_count(),
            selected,
        })
    }

    fn from_orbit_values(universe: &GraphUniverse, offsets: &[usize], values: impl Fn(usize) -> bool) -> Self {
        let selected = (0..universe.len())
            .map(|i| {
                let mut set: Vec<usize> = universe
                    .orbits(i)
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| values(offsets[i] + j))
                    .flat_map(|(_, orbit)| orbit.iter().copied())
                    .collect();
                set.sort_unstable();
                set
            })
            .collect();
        ExtremalAssignment {
            g: universe.genus(),
            n: universe.marking_count(),
            selected,
        }
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn marking_count(&self) -> u32 {
        self.n
    }

    /// Selected vertices of universe graph `i`, sorted.
    pub fn selected(&self, i: usize) -> &[usize] {
        &self.selected[i]
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// True when nothing is selected anywhere.
    pub fn is_trivial(&self) -> bool {
        self.selected.iter().all(|s| s.is_empty())
    }

    /// Sorted-key JSON with one entry per graph in universe order.
    pub fn to_json(&self, universe: &GraphUniverse) -> String {
        let doc = AssignmentJson {
            entries: self
                .selected
                .iter()
                .enumerate()
                .map(|(i, s)| EntryJson {
                    graph: universe.graph(i).clone(),
                    selected: s.clone(),
                })
                .collect(),
            g: self.g,
            n: self.n,
        };
        serde_json::to_string(&doc).expect("assignment serializes")
    }

    /// Reads the JSON form. Graphs may use any labelling; graphs missing
    /// from the file get the empty selection.
    pub fn from_json(s: &str, universe: &GraphUniverse) -> Result<Self> {
        let doc: AssignmentJson = serde_json::from_str(s)?;
        if doc.g != universe.genus() || doc.n != universe.marking_count() {
            return Err(Error::TypeMismatch {
                g: doc.g,
                n: doc.n,
                expected_g: universe.genus(),
                expected_n: universe.marking_count(),
            });
        }
        let mut sets: Vec<Option<Vec<usize>>> = vec![None; universe.len()];
        for entry in doc.entries {
            let (i, pos) = universe.locate(&entry.graph)?;
            let k = entry.graph.vertex_count();
            let mut set = Vec::with_capacity(entry.selected.len());
            for v in entry.selected {
                if v >= k {
                    return Err(Error::VertexOutOfRange { index: v, count: k });
                }
                set.push(pos[v]);
            }
            set.sort_unstable();
            if sets[i].as_ref().is_some_and(|old| *old != set) {
                return Err(Error::Input(format!("conflicting entries for graph {}", universe.graph(i))));
            }
            sets[i] = Some(set);
        }
        Self::from_vertex_sets(universe, sets.into_iter().map(Option::unwrap_or_default).collect())
    }
}

/// A broken axiom, with enough data to locate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// Every vertex of the graph is selected.
    WholeCurve { graph: usize },
    /// `vertex` of `target` is selected but its fiber is not, or vice versa.
    Specialization {
        target: usize,
        source: usize,
        /// Index into `relation.maps(target, source)`.
        map: usize,
        vertex: usize,
        target_selected: bool,
    },
}

impl AxiomViolation {
    pub fn axiom(&self) -> u8 {
        match self {
            AxiomViolation::WholeCurve { .. } => 1,
            AxiomViolation::Specialization { .. } => 3,
        }
    }

    pub fn describe(&self, moduli: &Moduli) -> String {
        let u = moduli.universe();
        match *self {
            AxiomViolation::WholeCurve { graph } => {
                format!("axiom 1: every component of {} is selected", u.graph(graph))
            }
            AxiomViolation::Specialization {
                target,
                source,
                map,
                vertex,
                target_selected,
            } => {
                let m = &moduli.relation().maps(target, source)[map];
                format!(
                    "axiom 3: vertex {} of {} is {}selected but its fiber {:?} in {} is {}selected",
                    vertex,
                    u.graph(target),
                    if target_selected { "" } else { "not " },
                    m.fibers[vertex],
                    u.graph(source),
                    if target_selected { "not entirely " } else { "" },
                )
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Where a value in a propagation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cause {
    Seed,
    /// Forced through a contraction map of `source` onto `target` at `vertex`
    /// of the target.
    Specialization {
        target: usize,
        source: usize,
        contracted_edges: Vec<usize>,
        fibers: Vec<Vec<usize>>,
        vertex: usize,
    },
    /// Forced because selecting it would select the whole graph.
    WholeCurve { graph: usize },
}

/// One forced value in a propagation chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStep {
    pub graph: usize,
    pub orbit: usize,
    pub vertices: Vec<usize>,
    pub value: bool,
    pub cause: Cause,
}

/// The constraint that could not be met at the end of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conflict {
    /// Every orbit of the graph was forced into the selection.
    WholeCurve { graph: usize },
    /// The orbit was forced both in and out.
    Clash { graph: usize, orbit: usize },
}

/// A chain of forced values ending in a conflict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contradiction {
    pub chain: Vec<WitnessStep>,
    pub conflict: Conflict,
}

impl Contradiction {
    /// Universe indices of every graph the chain touches, in order of appearance.
    pub fn graphs(&self) -> Vec<usize> {
        let last = match self.conflict {
            Conflict::WholeCurve { graph } | Conflict::Clash { graph, .. } => graph,
        };
        let mut out: Vec<usize> = Vec::new();
        for g in self.chain.iter().map(|s| s.graph).chain(std::iter::once(last)) {
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// The least closure: forced selections, everything undetermined left out.
    Consistent {
        assignment: ExtremalAssignment,
        /// (graph, orbit) pairs not forced either way.
        undetermined: Vec<(usize, usize)>,
    },
    /// Every conflict reachable from the seeds, shortest chain first.
    Contradiction(Vec<Contradiction>),
}

/// A required value for the orbit of `vertex` in universe graph `graph`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed {
    pub graph: usize,
    pub vertex: usize,
    pub value: bool,
}

#[derive(Clone, Debug)]
struct Clause {
    head: usize,
    body: Vec<usize>,
    target: usize,
    source: usize,
    map: usize,
    vertex: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Reason {
    Seed,
    Clause(usize),
    WholeCurve(usize),
}

/// Boolean constraint system over (graph, orbit) variables.
#[derive(Clone, Debug)]
struct Constraints {
    offsets: Vec<usize>,
    graph_of: Vec<usize>,
    clauses: Vec<Clause>,
    occurs: Vec<Vec<usize>>,
}

impl Constraints {
    fn build(universe: &GraphUniverse, relation: &SpecializationRelation) -> Self {
        let mut offsets = Vec::with_capacity(universe.len() + 1);
        let mut graph_of = Vec::new();
        offsets.push(0);
        for i in 0..universe.len() {
            graph_of.extend(std::iter::repeat(i).take(universe.orbits(i).len()));
            offsets.push(graph_of.len());
        }
        let mut clauses = Vec::new();
        let mut seen: HashMap<(usize, Vec<usize>), ()> = HashMap::new();
        for entry in relation.entries() {
            let (t, s) = (entry.target, entry.source);
            let t_orbit = universe.orbit_of(t);
            let s_orbit = universe.orbit_of(s);
            for (mi, map) in entry.maps.iter().enumerate() {
                for (v, fiber) in map.fibers.iter().enumerate() {
                    let head = offsets[t] + t_orbit[v];
                    let mut body: Vec<usize> = fiber.iter().map(|&w| offsets[s] + s_orbit[w]).collect();
                    body.sort_unstable();
                    body.dedup();
                    if body == [head] || seen.insert((head, body.clone()), ()).is_some() {
                        continue;
                    }
                    clauses.push(Clause {
                        head,
                        body,
                        target: t,
                        source: s,
                        map: mi,
                        vertex: v,
                    });
                }
            }
        }
        let mut occurs = vec![Vec::new(); graph_of.len()];
        for (c, clause) in clauses.iter().enumerate() {
            occurs[clause.head].push(c);
            for &b in &clause.body {
                if b != clause.head {
                    occurs[b].push(c);
                }
            }
        }
        Constraints {
            offsets,
            graph_of,
            clauses,
            occurs,
        }
    }

    fn vars(&self) -> usize {
        self.graph_of.len()
    }

    fn graph_vars(&self, graph: usize) -> std::ops::Range<usize> {
        self.offsets[graph]..self.offsets[graph + 1]
    }
}

/// Partial assignment for the backtracking search.
#[derive(Clone, Debug)]
struct State {
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
}

/// Propagation hit a conflict.
struct Failed;

type Step = std::result::Result<(), Failed>;

impl State {
    fn new(vars: usize) -> Self {
        State {
            value: vec![None; vars],
            trail: Vec::new(),
        }
    }

    fn set(&mut self, var: usize, value: bool, queue: &mut Vec<usize>) -> Step {
        match self.value[var] {
            Some(v) if v == value => Ok(()),
            Some(_) => Err(Failed),
            None => {
                self.value[var] = Some(value);
                self.trail.push(var);
                queue.push(var);
                Ok(())
            }
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let var = self.trail.pop().expect("nonempty trail");
            self.value[var] = None;
        }
    }

    fn propagate(&mut self, cs: &Constraints, mut queue: Vec<usize>) -> Step {
        let mut next = 0;
        while next < queue.len() {
            let x = queue[next];
            next += 1;
            for &c in &cs.occurs[x] {
                self.check_clause(cs, c, &mut queue)?;
            }
            if self.value[x] == Some(true) {
                self.check_whole_curve(cs, cs.graph_of[x], &mut queue)?;
            }
        }
        Ok(())
    }

    fn check_clause(&mut self, cs: &Constraints, c: usize, queue: &mut Vec<usize>) -> Step {
        let clause = &cs.clauses[c];
        let head = self.value[clause.head];
        let mut any_false = false;
        let mut unknown = Vec::new();
        for &b in &clause.body {
            match self.value[b] {
                Some(false) => any_false = true,
                None => unknown.push(b),
                Some(true) => {}
            }
        }
        if any_false {
            return match head {
                Some(true) => Err(Failed),
                Some(false) => Ok(()),
                None => self.set(clause.head, false, queue),
            };
        }
        if unknown.is_empty() {
            return match head {
                Some(false) => Err(Failed),
                Some(true) => Ok(()),
                None => self.set(clause.head, true, queue),
            };
        }
        match head {
            Some(true) => {
                for b in unknown {
                    self.set(b, true, queue)?;
                }
                Ok(())
            }
            Some(false) if unknown.len() == 1 => self.set(unknown[0], false, queue),
            _ => Ok(()),
        }
    }

    fn check_whole_curve(&mut self, cs: &Constraints, graph: usize, queue: &mut Vec<usize>) -> Step {
        let mut unknown = None;
        let mut unknown_count = 0;
        for var in cs.graph_vars(graph) {
            match self.value[var] {
                Some(false) => return Ok(()),
                None => {
                    unknown = Some(var);
                    unknown_count += 1;
                }
                Some(true) => {}
            }
        }
        match (unknown_count, unknown) {
            (0, _) => Err(Failed),
            (1, Some(var)) => self.set(var, false, queue),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug)]
struct Derivation {
    reason: Reason,
    /// Literals the derivation used, `2 * var + value`.
    premises: Vec<usize>,
    order: usize,
}

/// Saturates a set of literals under the propagation rules without stopping
/// at conflicts, recording the first derivation of every literal.
struct Saturation<'a> {
    cs: &'a Constraints,
    derived: Vec<Option<Derivation>>,
    queue: Vec<usize>,
    conflicts: Vec<(Conflict, Vec<usize>)>,
    whole_reported: Vec<bool>,
}

fn lit(var: usize, value: bool) -> usize {
    2 * var + value as usize
}

impl<'a> Saturation<'a> {
    fn new(cs: &'a Constraints, graphs: usize) -> Self {
        Saturation {
            cs,
            derived: vec![None; 2 * cs.vars()],
            queue: Vec::new(),
            conflicts: Vec::new(),
            whole_reported: vec![false; graphs],
        }
    }

    fn has(&self, var: usize, value: bool) -> bool {
        self.derived[lit(var, value)].is_some()
    }

    fn derive(&mut self, l: usize, reason: Reason, premises: Vec<usize>) {
        if self.derived[l].is_some() {
            return;
        }
        self.derived[l] = Some(Derivation {
            reason,
            premises,
            order: self.queue.len(),
        });
        self.queue.push(l);
        if self.derived[l ^ 1].is_some() {
            let var = l / 2;
            let graph = self.cs.graph_of[var];
            let orbit = var - self.cs.offsets[graph];
            self.conflicts.push((Conflict::Clash { graph, orbit }, vec![l ^ 1, l]));
        }
    }

    fn run(&mut self) {
        let mut next = 0;
        while next < self.queue.len() {
            let l = self.queue[next];
            next += 1;
            let x = l / 2;
            for &c in &self.cs.occurs[x] {
                self.fire_clause(c);
            }
            if l & 1 == 1 {
                self.fire_whole_curve(self.cs.graph_of[x]);
            }
        }
    }

    fn fire_clause(&mut self, c: usize) {
        let clause = &self.cs.clauses[c];
        let (h, body) = (clause.head, clause.body.clone());
        let reason = Reason::Clause(c);
        if self.has(h, true) {
            for &b in &body {
                self.derive(lit(b, true), reason, vec![lit(h, true)]);
            }
        }
        for &b in &body {
            if self.has(b, false) {
                self.derive(lit(h, false), reason, vec![lit(b, false)]);
            }
        }
        let missing: Vec<usize> = body.iter().copied().filter(|&b| !self.has(b, true)).collect();
        if missing.is_empty() {
            self.derive(lit(h, true), reason, body.iter().map(|&b| lit(b, true)).collect());
        } else if missing.len() == 1 && self.has(h, false) {
            let mut premises = vec![lit(h, false)];
            premises.extend(body.iter().filter(|&&b| b != missing[0]).map(|&b| lit(b, true)));
            self.derive(lit(missing[0], false), reason, premises);
        }
    }

    fn fire_whole_curve(&mut self, graph: usize) {
        let vars = self.cs.graph_vars(graph);
        let missing: Vec<usize> = vars.clone().filter(|&v| !self.has(v, true)).collect();
        match missing.len() {
            0 if !self.whole_reported[graph] => {
                self.whole_reported[graph] = true;
                let premises = vars.map(|v| lit(v, true)).collect();
                self.conflicts.push((Conflict::WholeCurve { graph }, premises));
            }
            1 => {
                let premises = vars.filter(|&v| v != missing[0]).map(|v| lit(v, true)).collect();
                self.derive(lit(missing[0], false), Reason::WholeCurve(graph), premises);
            }
            _ => {}
        }
    }

    /// Literals supporting `premises`, in derivation order.
    fn support(&self, premises: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.derived.len()];
        let mut pending = premises.to_vec();
        let mut out = Vec::new();
        while let Some(l) = pending.pop() {
            if seen[l] {
                continue;
            }
            seen[l] = true;
            out.push(l);
            if let Some(d) = &self.derived[l] {
                pending.extend(d.premises.iter().copied());
            }
        }
        out.sort_by_key(|&l| self.derived[l].as_ref().map_or(0, |d| d.order));
        out
    }
}

/// A universe together with its complete specialization relation.
#[derive(Clone, Debug)]
pub struct Moduli {
    universe: GraphUniverse,
    relation: SpecializationRelation,
    constraints: Constraints,
}

impl Moduli {
    pub fn build(g: u32, n: u32) -> Result<Self> {
        Self::with_budget(g, n, DEFAULT_BUDGET)
    }

    pub fn with_budget(g: u32, n: u32, budget: u32) -> Result<Self> {
        Self::from_universe(stable_graphs_with_budget(g, n, budget)?)
    }

    pub fn from_universe(universe: GraphUniverse) -> Result<Self> {
        let relation = specialization_relation(&universe)?;
        let constraints = Constraints::build(&universe, &relation);
        Ok(Moduli {
            universe,
            relation,
            constraints,
        })
    }

    pub fn genus(&self) -> u32 {
        self.universe.genus()
    }

    pub fn marking_count(&self) -> u32 {
        self.universe.marking_count()
    }

    pub fn universe(&self) -> &GraphUniverse {
        &self.universe
    }

    pub fn relation(&self) -> &SpecializationRelation {
        &self.relation
    }

    fn ensure_same_type(&self, a: &ExtremalAssignment) -> Result<()> {
        if a.g != self.genus() || a.n != self.marking_count() || a.selected.len() != self.universe.len() {
            return Err(Error::TypeMismatch {
                g: a.g,
                n: a.n,
                expected_g: self.genus(),
                expected_n: self.marking_count(),
            });
        }
        Ok(())
    }

    /// The empty selection on every graph.
    pub fn trivial(&self) -> ExtremalAssignment {
        ExtremalAssignment {
            g: self.genus(),
            n: self.marking_count(),
            selected: vec![Vec::new(); self.universe.len()],
        }
    }

    fn select_by_subcurves(&self, keep: impl Fn(i64, usize, usize) -> bool) -> ExtremalAssignment {
        let selected = self
            .universe
            .graphs()
            .map(|graph| {
                let k = graph.vertex_count();
                let mut chosen = vec![false; k];
                for bits in 1..(1u64 << k) - 1 {
                    let mask: Vec<bool> = (0..k).map(|v| bits >> v & 1 == 1).collect();
                    let inv = invariants_of_mask(graph, &mask);
                    if keep(inv.p_a, inv.attachments, inv.markings) {
                        for v in 0..k {
                            chosen[v] |= mask[v];
                        }
                    }
                }
                (0..k).filter(|&v| chosen[v]).collect()
            })
            .collect();
        ExtremalAssignment::from_vertex_sets(&self.universe, selected).expect("subcurve rules are isomorphism invariant")
    }

    /// Every vertex lying on an unmarked subcurve of genus one attached at a
    /// single node.
    pub fn elliptic_tails(&self) -> ExtremalAssignment {
        self.select_by_subcurves(|p_a, m, l| p_a == 1 && m == 1 && l == 0)
    }

    /// Every vertex lying on a genus-zero subcurve attached at a single node
    /// and carrying at most `k` markings.
    pub fn rational_tails(&self, k: usize) -> ExtremalAssignment {
        self.select_by_subcurves(|p_a, m, l| p_a == 0 && m == 1 && l <= k)
    }

    /// Every vertex without markings.
    pub fn unmarked(&self) -> ExtremalAssignment {
        let selected = self
            .universe
            .graphs()
            .map(|graph| {
                (0..graph.vertex_count())
                    .filter(|&v| graph.vertex(v).markings.is_empty())
                    .collect()
            })
            .collect();
        ExtremalAssignment::from_vertex_sets(&self.universe, selected).expect("unmarked rule is isomorphism invariant")
    }

    /// Named builtins: `trivial`, `elliptic-tails`, `rational-tails` (with
    /// `k`) and `unmarked`.
    pub fn builtin(&self, name: &str, k: Option<usize>) -> Result<ExtremalAssignment> {
        match (name, k) {
            ("trivial", _) => Ok(self.trivial()),
            ("elliptic-tails", _) => Ok(self.elliptic_tails()),
            ("rational-tails", Some(k)) => Ok(self.rational_tails(k)),
            ("rational-tails", None) => Err(Error::Input("rational-tails needs a marking bound k".into())),
            ("unmarked", _) => Ok(self.unmarked()),
            _ => Err(Error::Input(format!("unknown builtin assignment '{}'", name))),
        }
    }

    /// Selected vertices of `graph`, in `graph`'s own labelling.
    pub fn evaluate(&self, a: &ExtremalAssignment, graph: &DualGraph) -> Result<Vec<usize>> {
        self.ensure_same_type(a)?;
        let (i, pos) = self.universe.locate(graph)?;
        let chosen = a.selected(i);
        Ok((0..graph.vertex_count())
            .filter(|&v| chosen.binary_search(&pos[v]).is_ok())
            .collect())
    }

    /// Checks the whole-curve axiom on every graph and the specialization
    /// axiom on every contraction map.
    pub fn check_axioms(&self, a: &ExtremalAssignment) -> Result<AxiomReport> {
        self.ensure_same_type(a)?;
        let mut violations = Vec::new();
        for i in 0..self.universe.len() {
            if a.selected(i).len() == self.universe.graph(i).vertex_count() {
                violations.push(AxiomViolation::WholeCurve { graph: i });
            }
        }
        let member: Vec<Vec<bool>> = (0..self.universe.len())
            .map(|i| {
                let mut m = vec![false; self.universe.graph(i).vertex_count()];
                for &v in a.selected(i) {
                    m[v] = true;
                }
                m
            })
            .collect();
        for entry in self.relation.entries() {
            for (mi, map) in entry.maps.iter().enumerate() {
                for (v, fiber) in map.fibers.iter().enumerate() {
                    let lhs = member[entry.target][v];
                    let rhs = fiber.iter().all(|&w| member[entry.source][w]);
                    if lhs != rhs {
                        violations.push(AxiomViolation::Specialization {
                            target: entry.target,
                            source: entry.source,
                            map: mi,
                            vertex: v,
                            target_selected: lhs,
                        });
                    }
                }
            }
        }
        Ok(AxiomReport { violations })
    }

    fn seed_var(&self, seed: &Seed) -> Result<usize> {
        if seed.graph >= self.universe.len() {
            return Err(Error::Input(format!(
                "seed graph index {} out of range (universe has {} graphs)",
                seed.graph,
                self.universe.len()
            )));
        }
        let k = self.universe.graph(seed.graph).vertex_count();
        if seed.vertex >= k {
            return Err(Error::VertexOutOfRange { index: seed.vertex, count: k });
        }
        Ok(self.constraints.offsets[seed.graph] + self.universe.orbit_of(seed.graph)[seed.vertex])
    }

    fn cause(&self, reason: Reason) -> Cause {
        match reason {
            Reason::Seed => Cause::Seed,
            Reason::WholeCurve(graph) => Cause::WholeCurve { graph },
            Reason::Clause(c) => {
                let clause = &self.constraints.clauses[c];
                let map = &self.relation.maps(clause.target, clause.source)[clause.map];
                Cause::Specialization {
                    target: clause.target,
                    source: clause.source,
                    contracted_edges: map.contracted_edges.clone(),
                    fibers: map.fibers.clone(),
                    vertex: clause.vertex,
                }
            }
        }
    }

    /// Closes `seeds` under the axioms. Undetermined orbits stay unselected
    /// in a consistent closure, which then satisfies every axiom.
    pub fn propagate(&self, seeds: &[Seed]) -> Result<Propagation> {
        let cs = &self.constraints;
        let mut sat = Saturation::new(cs, self.universe.len());
        for seed in seeds {
            let var = self.seed_var(seed)?;
            sat.derive(lit(var, seed.value), Reason::Seed, Vec::new());
        }
        sat.run();
        if sat.conflicts.is_empty() {
            let undetermined = (0..cs.vars())
                .filter(|&x| !sat.has(x, true) && !sat.has(x, false))
                .map(|x| (cs.graph_of[x], x - cs.offsets[cs.graph_of[x]]))
                .collect();
            let assignment = ExtremalAssignment::from_orbit_values(&self.universe, &cs.offsets, |x| sat.has(x, true));
            return Ok(Propagation::Consistent {
                assignment,
                undetermined,
            });
        }
        let mut found: Vec<Contradiction> = sat
            .conflicts
            .iter()
            .map(|(conflict, premises)| {
                let chain = sat
                    .support(premises)
                    .into_iter()
                    .map(|l| {
                        let var = l / 2;
                        let graph = cs.graph_of[var];
                        let orbit = var - cs.offsets[graph];
                        let d = sat.derived[l].as_ref().expect("support literals are derived");
                        WitnessStep {
                            graph,
                            orbit,
                            vertices: self.universe.orbits(graph)[orbit].clone(),
                            value: l & 1 == 1,
                            cause: self.cause(d.reason),
                        }
                    })
                    .collect();
                Contradiction {
                    chain,
                    conflict: conflict.clone(),
                }
            })
            .collect();
        found.sort_by_key(|c| c.chain.len());
        Ok(Propagation::Contradiction(found))
    }

    /// Every extremal assignment, by backtracking with propagation.
    pub fn enumerate_assignments(&self) -> Result<Vec<ExtremalAssignment>> {
        self.enumerate_assignments_with_budget(DEFAULT_NODE_BUDGET)
    }

    /// As [`enumerate_assignments`](Self::enumerate_assignments), failing
    /// with [`Error::Budget`] after `node_budget` search nodes.
    pub fn enumerate_assignments_with_budget(&self, node_budget: usize) -> Result<Vec<ExtremalAssignment>> {
        let cs = &self.constraints;
        let mut order = Vec::with_capacity(cs.vars());
        let mut graphs: Vec<usize> = (0..self.universe.len()).collect();
        graphs.sort_by_key(|&i| (std::cmp::Reverse(self.universe.graph(i).edge_count()), i));
        for i in graphs {
            let mut orbits: Vec<usize> = (0..self.universe.orbits(i).len()).collect();
            orbits.sort_by_key(|&j| (self.universe.orbits(i)[j].len(), j));
            order.extend(orbits.into_iter().map(|j| cs.offsets[i] + j));
        }
        let mut search = Search {
            moduli: self,
            order: &order,
            nodes: 0,
            budget: node_budget,
            found: Vec::new(),
        };
        let mut state = State::new(cs.vars());
        search.descend(&mut state, 0)?;
        let mut found: Vec<ExtremalAssignment> = search
            .found
            .iter()
            .map(|bits| {
                ExtremalAssignment::from_orbit_values(&self.universe, &cs.offsets, |x| bits[x / 64] >> (x % 64) & 1 == 1)
            })
            .collect();
        found.sort_by(|a, b| a.selected.cmp(&b.selected));
        Ok(found)
    }
}

struct Search<'a> {
    moduli: &'a Moduli,
    order: &'a [usize],
    nodes: usize,
    budget: usize,
    found: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn descend(&mut self, state: &mut State, mut at: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!("assignment search exceeded {} nodes", self.budget)));
        }
        while at < self.order.len() && state.value[self.order[at]].is_some() {
            at += 1;
        }
        let cs = &self.moduli.constraints;
        if at == self.order.len() {
            let mut bits = vec![0u64; cs.vars().div_ceil(64)];
            for (x, value) in state.value.iter().enumerate() {
                if *value == Some(true) {
                    bits[x / 64] |= 1 << (x % 64);
                }
            }
            self.found.push(bits);
            return Ok(());
        }
        let var = self.order[at];
        for value in [false, true] {
            let mark = state.trail.len();
            let mut queue = Vec::new();
            if state.set(var, value, &mut queue).is_err() {
                unreachable!("decision variable is unassigned");
            }
            if state.propagate(cs, queue).is_ok() {
                self.descend(state, at + 1)?;
            }
            state.undo_to(mark);
        }
        Ok(())
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "all axioms hold")
        } else {
            write!(f, "{} violation(s)", self.violations.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexLabel;

    fn v(genus: u32, markings: &[u32]) -> VertexLabel {
        VertexLabel::new(genus, markings.to_vec())
    }

    #[test]
    fn trivial_passes() {
        let m = Moduli::build(2, 0).unwrap();
        let t = m.trivial();
        assert!(m.check_axioms(&t).unwrap().passed());
        let theta = DualGraph::new(2, 0, vec![v(0, &[]), v(0, &[])], vec![(0, 1), (0, 1), (0, 1)]);
        assert!(m.evaluate(&t, &theta).unwrap().is_empty());
    }

    #[test]
    fn elliptic_tails_thresholds() {
        let m = Moduli::build(2, 0).unwrap();
        let report = m.check_axioms(&m.elliptic_tails()).unwrap();
        assert!(!report.passed());
        let two_tails = DualGraph::new(2, 0, vec![v(1, &[]), v(1, &[])], vec![(0, 1)]);
        let (i, _) = m.universe().locate(&two_tails).unwrap();
        assert!(report.violations.contains(&AxiomViolation::WholeCurve { graph: i }));

        let m = Moduli::build(3, 0).unwrap();
        assert!(m.check_axioms(&m.elliptic_tails()).unwrap().passed());
    }

    #[test]
    fn evaluate_uses_callers_labelling() {
        let m = Moduli::build(3, 0).unwrap();
        let a = m.elliptic_tails();
        let g = DualGraph::new(3, 0, vec![v(1, &[]), v(2, &[])], vec![(0, 1)]);
        assert_eq!(m.evaluate(&a, &g).unwrap(), vec![0]);
        let spine = DualGraph::new(
            3,
            0,
            vec![v(1, &[]), v(0, &[]), v(1, &[]), v(1, &[])],
            vec![(0, 1), (1, 2), (1, 3)],
        );
        assert_eq!(m.evaluate(&a, &spine).unwrap(), vec![0, 2, 3]);
    }

    #[test]
    fn json_round_trip() {
        let m = Moduli::build(3, 0).unwrap();
        let a = m.elliptic_tails();
        let s = a.to_json(m.universe());
        assert!(s.starts_with("{\"entries\":[{\"graph\":"));
        assert_eq!(ExtremalAssignment::from_json(&s, m.universe()).unwrap(), a);
    }

    #[test]
    fn orbit_closure_enforced() {
        let m = Moduli::build(2, 0).unwrap();
        let theta = DualGraph::new(2, 0, vec![v(0, &[]), v(0, &[])], vec![(0, 1), (0, 1), (0, 1)]);
        let (i, _) = m.universe().locate(&theta).unwrap();
        let mut sets = vec![Vec::new(); m.universe().len()];
        sets[i] = vec![0];
        assert!(matches!(
            ExtremalAssignment::from_vertex_sets(m.universe(), sets),
            Err(Error::NotOrbitClosed { .. })
        ));
    }

    #[test]
    fn empty_seeds_close_to_trivial() {
        let m = Moduli::build(2, 1).unwrap();
        match m.propagate(&[]).unwrap() {
            Propagation::Consistent { assignment, .. } => assert!(assignment.is_trivial()),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(Moduli::build(2, 0).unwrap().enumerate_assignments().unwrap().len(), 1);
        assert_eq!(Moduli::build(1, 1).unwrap().enumerate_assignments().unwrap().len(), 1);
    }

    #[test]
    fn node_budget() {
        let m = Moduli::build(3, 0).unwrap();
        assert!(matches!(m.enumerate_assignments_with_budget(2), Err(Error::Budget(_))));
    }
}
