mod common;

use std::collections::HashSet;

use common::{brute_automorphisms, brute_is_stable, brute_isomorphic, brute_key, brute_orbits, direct_stable_graphs, genus_zero_count, v};
use modcomp::enumerate::{boundary_dimension, zero_strata};
use modcomp::{canonicalize, stable_graphs, validate, DualGraph, Error, GraphUniverse, VertexLabel};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

/// Every stable pair with 3g - 3 + n <= max_dim.
fn types_up_to(max_dim: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=3 {
        for n in 0..=9 {
            if 2 * g + n > 2 && boundary_dimension(g, n) <= max_dim {
                out.push((g, n));
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_direct_generator() {
    for (g, n) in types_up_to(5) {
        let universe = stable_graphs(g, n).unwrap();
        if g == 0 && n == 8 {
            // too many labelled candidates for the direct generator
            assert_eq!(universe.len() as u64, genus_zero_count(8));
            continue;
        }
        let direct = direct_stable_graphs(g, n);
        assert_eq!(universe.len(), direct.len(), "({}, {})", g, n);
        let keys: HashSet<_> = direct.iter().map(brute_key).collect();
        for graph in universe.graphs() {
            assert!(keys.contains(&brute_key(graph)), "({}, {}) extra graph {}", g, n, graph);
        }
    }
}

#[test]
fn genus_zero_counts() {
    for n in 3..=7 {
        assert_eq!(stable_graphs(0, n).unwrap().len() as u64, genus_zero_count(n), "n = {}", n);
    }
}

#[test]
fn universe_members_are_stable_and_distinct() {
    for (g, n) in types_up_to(4) {
        let u = stable_graphs(g, n).unwrap();
        for (i, a) in u.graphs().enumerate() {
            assert!(brute_is_stable(a, g, n), "{}", a);
            for b in u.graphs().skip(i + 1) {
                assert!(!brute_isomorphic(a, b), "{} and {}", a, b);
            }
        }
        // sorted by edge count, smooth curve first
        assert_eq!(u.smooth(), 0);
        assert!((1..u.len()).all(|i| u.graph(i - 1).edge_count() <= u.graph(i).edge_count()));
    }
}

#[test]
fn automorphisms_and_orbits_match_brute_force() {
    for (g, n) in types_up_to(4) {
        let u = stable_graphs(g, n).unwrap();
        for i in 0..u.len() {
            let graph = u.graph(i);
            let mut ours: Vec<Vec<usize>> = u.automorphisms(i).to_vec();
            let mut brute = brute_automorphisms(graph);
            ours.sort();
            brute.sort();
            assert_eq!(ours, brute, "{}", graph);
            assert_eq!(u.orbits(i), brute_orbits(graph).as_slice(), "{}", graph);
        }
    }
}

#[test]
fn zero_strata_characterization() {
    for (g, n) in types_up_to(5) {
        let u = stable_graphs(g, n).unwrap();
        let dim = boundary_dimension(g, n) as usize;
        for i in 0..u.len() {
            let graph = u.graph(i);
            let all_rational_trivalent = (0..graph.vertex_count())
                .all(|x| graph.vertex(x).genus == 0 && graph.valence(x) + graph.vertex(x).markings.len() == 3);
            let maximal = graph.edge_count() == dim;
            assert_eq!(all_rational_trivalent, maximal, "{}", graph);
            assert_eq!(u.zero_strata().contains(&i), maximal, "{}", graph);
        }
        let listed = zero_strata(g, n).unwrap();
        assert_eq!(listed.len(), u.zero_strata().len());
    }
}

#[test]
fn budget_and_unstable_pairs() {
    assert!(matches!(stable_graphs(0, 2), Err(Error::UnstablePair { .. })));
    assert!(matches!(stable_graphs(1, 0), Err(Error::UnstablePair { .. })));
    assert!(matches!(stable_graphs(4, 1), Err(Error::Budget(_))));
}

#[test]
fn relabel_invariance_hundred_permutations() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for (g, n) in [(2, 0), (2, 1), (1, 3), (0, 6), (3, 0)] {
        let u = stable_graphs(g, n).unwrap();
        for i in 0..u.len() {
            let graph = u.graph(i);
            let mut perm: Vec<usize> = (0..graph.vertex_count()).collect();
            for _ in 0..100 {
                perm.shuffle(&mut rng);
                let c = canonicalize(&graph.relabel(&perm)).unwrap();
                assert_eq!(c.encoding(), u.encoding(i), "{}", graph);
                assert_eq!(c.graph(), graph, "canonical graph differs for {}", graph);
            }
        }
    }
}

#[test]
fn locate_reports_the_callers_labelling() {
    let u = stable_graphs(2, 1).unwrap();
    let graph = DualGraph::new(2, 1, vec![v(1, &[1]), v(0, &[]), v(1, &[])], vec![(0, 1), (1, 2), (1, 1)]);
    assert!(!validate(&graph).is_valid());
    let graph = DualGraph::new(2, 1, vec![v(1, &[]), v(0, &[1]), v(1, &[])], vec![(0, 1), (1, 2)]);
    let (i, pos) = u.locate(&graph).unwrap();
    let canonical = u.graph(i);
    for x in 0..graph.vertex_count() {
        assert_eq!(graph.vertex(x), canonical.vertex(pos[x]));
    }
}

#[test]
fn universe_rejects_duplicates_and_wrong_types() {
    let a = DualGraph::new(1, 1, vec![v(1, &[1])], vec![]);
    let b = DualGraph::new(1, 1, vec![v(0, &[1])], vec![(0, 0)]);
    let u = GraphUniverse::from_graphs(1, 1, vec![b.clone(), a.clone(), b.clone()]).unwrap();
    assert_eq!(u.len(), 2);
    assert!(GraphUniverse::from_graphs(1, 2, vec![a]).is_err());
}

fn universe_22() -> &'static GraphUniverse {
    static U: std::sync::OnceLock<GraphUniverse> = std::sync::OnceLock::new();
    U.get_or_init(|| stable_graphs(2, 2).unwrap())
}

fn arbitrary_graph() -> impl Strategy<Value = DualGraph> {
    (0u32..3, 0u32..4, 1usize..5).prop_flat_map(|(g, n, k)| {
        let labels = proptest::collection::vec((0u32..3, proptest::collection::vec(0u32..5, 0..3)), k);
        let edges = proptest::collection::vec((0..k, 0..k), 0..6);
        (Just(g), Just(n), labels, edges).prop_map(|(g, n, labels, edges)| {
            let vertices = labels.into_iter().map(|(genus, m)| VertexLabel::new(genus, m)).collect();
            DualGraph::new(g, n, vertices, edges)
        })
    })
}

proptest! {
    #[test]
    fn validate_agrees_with_independent_checker(graph in arbitrary_graph()) {
        let report = validate(&graph);
        prop_assert_eq!(report.is_valid(), brute_is_stable(&graph, graph.genus(), graph.marking_count()));
    }

    #[test]
    fn canonical_form_is_a_complete_invariant(
        i in 0usize..75,
        j in 0usize..75,
        pa in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        pb in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let u = universe_22();
        let (a, b) = (u.graph(i), u.graph(j));
        let restrict = |p: &[usize], k: usize| -> Vec<usize> { p.iter().copied().filter(|&x| x < k).collect() };
        let ra = a.relabel(&restrict(&pa, a.vertex_count()));
        let rb = b.relabel(&restrict(&pb, b.vertex_count()));
        let same = canonicalize(&ra).unwrap().encoding() == canonicalize(&rb).unwrap().encoding();
        prop_assert_eq!(same, i == j);
        prop_assert_eq!(same, brute_isomorphic(&ra, &rb));
    }

    #[test]
    fn json_round_trip(graph in arbitrary_graph()) {
        let back = DualGraph::from_json(&graph.to_json()).unwrap();
        prop_assert_eq!(back, graph);
    }
}
