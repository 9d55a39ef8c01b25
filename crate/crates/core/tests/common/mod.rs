//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's canonical labelling, contraction or search code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use modcomp::{DualGraph, VertexLabel};

pub fn v(genus: u32, markings: &[u32]) -> VertexLabel {
    VertexLabel::new(genus, markings.to_vec())
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Edge list of `graph` after sending vertex `v` to `perm[v]`, sorted.
fn mapped_edges(graph: &DualGraph, perm: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    e.sort_unstable();
    e
}

fn sorted_edges(graph: &DualGraph) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = graph.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    e.sort_unstable();
    e
}

/// Every bijection `p` with `p[v]` the image in `second` of vertex `v` of `first`.
pub fn isomorphisms(first: &DualGraph, second: &DualGraph) -> Vec<Vec<usize>> {
    let k = first.vertex_count();
    if k != second.vertex_count() || first.edge_count() != second.edge_count() {
        return Vec::new();
    }
    let target = sorted_edges(second);
    permutations(k)
        .into_iter()
        .filter(|p| (0..k).all(|v| first.vertex(v) == second.vertex(p[v])) && mapped_edges(first, p) == target)
        .collect()
}

pub fn brute_isomorphic(first: &DualGraph, second: &DualGraph) -> bool {
    !isomorphisms(first, second).is_empty()
}

pub fn brute_automorphisms(graph: &DualGraph) -> Vec<Vec<usize>> {
    isomorphisms(graph, graph)
}

/// Vertex orbits under the automorphism group, each sorted, listed by least element.
pub fn brute_orbits(graph: &DualGraph) -> Vec<Vec<usize>> {
    let autos = brute_automorphisms(graph);
    let mut seen = vec![false; graph.vertex_count()];
    let mut out = Vec::new();
    for v in 0..graph.vertex_count() {
        if seen[v] {
            continue;
        }
        let orbit: BTreeSet<usize> = autos.iter().map(|p| p[v]).collect();
        for &w in &orbit {
            seen[w] = true;
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

/// Smallest relabelled description over all vertex permutations.
pub fn brute_key(graph: &DualGraph) -> (Vec<VertexLabel>, Vec<(usize, usize)>) {
    let k = graph.vertex_count();
    permutations(k)
        .into_iter()
        .map(|p| {
            let mut labels = vec![v(0, &[]); k];
            for x in 0..k {
                labels[p[x]] = graph.vertex(x).clone();
            }
            (labels, mapped_edges(graph, &p))
        })
        .min()
        .unwrap()
}

/// Independent reading of the definition of a stable graph of type (g, n).
pub fn brute_is_stable(graph: &DualGraph, g: u32, n: u32) -> bool {
    let k = graph.vertex_count();
    if k == 0 || graph.genus() != g || graph.marking_count() != n {
        return false;
    }
    if graph.edges().iter().any(|&(a, b)| a >= k || b >= k) {
        return false;
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in graph.edges() {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    if seen.contains(&false) {
        return false;
    }
    let genus_sum: i64 = graph.vertices().iter().map(|x| x.genus as i64).sum();
    if genus_sum + graph.edge_count() as i64 - k as i64 + 1 != g as i64 {
        return false;
    }
    let mut marks: Vec<u32> = graph.vertices().iter().flat_map(|x| x.markings.iter().copied()).collect();
    marks.sort_unstable();
    if marks != (1..=n).collect::<Vec<_>>() {
        return false;
    }
    (0..k).all(|x| {
        let val: i64 = graph
            .edges()
            .iter()
            .map(|&(a, b)| (a == x) as i64 + (b == x) as i64)
            .sum();
        2 * graph.vertex(x).genus as i64 - 2 + val + graph.vertex(x).markings.len() as i64 > 0
    })
}

fn connected(k: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let r = find(&mut parent, 0);
    (0..k).all(|x| find(&mut parent, x) == r)
}

/// Multisets of `count` items from `0..m`, as nondecreasing sequences.
fn multisets(m: usize, count: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(m: usize, count: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == count {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, count, i, cur, out);
            cur.pop();
        }
    }
    rec(m, count, 0, &mut cur, &mut out);
    out
}

/// Every stable graph of type (g, n), one per isomorphism class, generated
/// by listing all labelled candidates and deduplicating by [`brute_key`].
pub fn direct_stable_graphs(g: u32, n: u32) -> Vec<DualGraph> {
    let max_vertices = (2 * g as i64 - 2 + n as i64).max(1) as usize;
    let mut keys = HashSet::new();
    let mut out = Vec::new();
    for k in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
        for genera in multisets(g as usize + 1, k) {
            let s: usize = genera.iter().sum();
            if s > g as usize {
                continue;
            }
            let edge_count = g as usize - s + k - 1;
            for choice in multisets(pairs.len(), edge_count) {
                let edges: Vec<(usize, usize)> = choice.iter().map(|&i| pairs[i]).collect();
                if !connected(k, &edges) {
                    continue;
                }
                let mut val = vec![0i64; k];
                for &(a, b) in &edges {
                    val[a] += 1;
                    val[b] += 1;
                }
                // markings each vertex still needs to become stable
                let need: Vec<i64> = (0..k).map(|x| (3 - 2 * genera[x] as i64 - val[x]).max(0)).collect();
                if need.iter().sum::<i64>() > n as i64 {
                    continue;
                }
                let mut place = vec![0usize; n as usize];
                loop {
                    let mut count = vec![0i64; k];
                    for &x in &place {
                        count[x] += 1;
                    }
                    if (0..k).all(|x| count[x] >= need[x]) {
                        let vertices = (0..k)
                            .map(|x| {
                                let marks: Vec<u32> = (0..n as usize).filter(|&i| place[i] == x).map(|i| i as u32 + 1).collect();
                                VertexLabel::new(genera[x] as u32, marks)
                            })
                            .collect();
                        let graph = DualGraph::new(g, n, vertices, edges.clone());
                        debug_assert!(brute_is_stable(&graph, g, n));
                        if keys.insert(brute_key(&graph)) {
                            out.push(graph);
                        }
                    }
                    // next marking placement, odometer style
                    let mut i = 0;
                    while i < place.len() {
                        place[i] += 1;
                        if place[i] < k {
                            break;
                        }
                        place[i] = 0;
                        i += 1;
                    }
                    if i == place.len() {
                        break;
                    }
                }
            }
        }
    }
    out
}

/// Number of stable graphs of type (0, n): weighted set partitions, where a
/// tree on `m + 1` leaves is a root vertex splitting the `m` non-root leaves
/// into at least two blocks, each block again such a tree.
pub fn genus_zero_count(n: u32) -> u64 {
    let m = n as usize - 1;
    let mut binom = vec![vec![0u64; m + 1]; m + 1];
    for i in 0..=m {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
        }
    }
    // a[s]: trees hanging below a node over s leaves; p[s][b]: ordered-by-min partitions into b blocks
    let mut a = vec![0u64; m + 1];
    a[1] = 1;
    let mut p = vec![vec![0u64; m + 1]; m + 1];
    p[0][0] = 1;
    for s in 1..=m {
        for b in 1..=s {
            p[s][b] = (1..=s).map(|j| binom[s - 1][j - 1] * a[j] * p[s - j][b - 1]).sum();
        }
        if s >= 2 {
            a[s] = (2..=s).map(|b| p[s][b]).sum();
            p[s][1] = a[s];
        }
    }
    a[m]
}

/// Contracts the edges at positions `subset` of the sorted edge list.
/// Returns the contracted graph and the vertex each original vertex lands on.
pub fn brute_contract(graph: &DualGraph, subset: &[usize]) -> (DualGraph, Vec<usize>) {
    let k = graph.vertex_count();
    let mut comp: Vec<usize> = (0..k).collect();
    let edges = sorted_edges(graph);
    let mut changed = true;
    while changed {
        changed = false;
        for &i in subset {
            let (a, b) = edges[i];
            let m = comp[a].min(comp[b]);
            if comp[a] != m || comp[b] != m {
                let (ca, cb) = (comp[a], comp[b]);
                for c in comp.iter_mut() {
                    if *c == ca || *c == cb {
                        *c = m;
                    }
                }
                changed = true;
            }
        }
    }
    let mut reps: Vec<usize> = comp.clone();
    reps.sort_unstable();
    reps.dedup();
    let image: Vec<usize> = comp.iter().map(|c| reps.binary_search(c).unwrap()).collect();
    let mut genus = vec![0u32; reps.len()];
    let mut marks: Vec<Vec<u32>> = vec![Vec::new(); reps.len()];
    let mut verts_in = vec![0i64; reps.len()];
    for x in 0..k {
        genus[image[x]] += graph.vertex(x).genus;
        marks[image[x]].extend(graph.vertex(x).markings.iter().copied());
        verts_in[image[x]] += 1;
    }
    let mut contracted_in = vec![0i64; reps.len()];
    for &i in subset {
        contracted_in[image[edges[i].0]] += 1;
    }
    for c in 0..reps.len() {
        // first Betti number of the contracted subgraph
        genus[c] += (contracted_in[c] - verts_in[c] + 1) as u32;
    }
    let kept: Vec<(usize, usize)> = (0..edges.len())
        .filter(|i| !subset.contains(i))
        .map(|i| (image[edges[i].0], image[edges[i].1]))
        .collect();
    let vertices = (0..reps.len()).map(|c| VertexLabel::new(genus[c], marks[c].clone())).collect();
    (DualGraph::new(graph.genus(), graph.marking_count(), vertices, kept), image)
}

/// All subsets of `0..m`.
pub fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << m).map(move |bits| (0..m).filter(|&i| bits >> i & 1 == 1).collect())
}

/// Brute-force extremal assignments on `graphs` (one per isomorphism class):
/// every orbit-closed choice that is proper on each graph and satisfies the
/// specialization biconditional for every contraction and every identification.
pub fn brute_assignments(graphs: &[DualGraph]) -> BTreeSet<Vec<Vec<usize>>> {
    let orbits: Vec<Vec<Vec<usize>>> = graphs.iter().map(brute_orbits).collect();
    // (special index, generic index, vertex map special -> generic)
    let mut maps: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (s, special) in graphs.iter().enumerate() {
        for subset in subsets(special.edge_count()) {
            let (contracted, image) = brute_contract(special, &subset);
            for (t, generic) in graphs.iter().enumerate() {
                for iso in isomorphisms(&contracted, generic) {
                    maps.push((s, t, image.iter().map(|&c| iso[c]).collect()));
                }
            }
        }
    }
    let offsets: Vec<usize> = orbits
        .iter()
        .scan(0, |acc, o| {
            let start = *acc;
            *acc += o.len();
            Some(start)
        })
        .collect();
    let total: usize = orbits.iter().map(|o| o.len()).sum();
    assert!(total < 24, "too many orbits for brute force");
    let mut out = BTreeSet::new();
    for bits in 0u64..1 << total {
        let sets: Vec<Vec<usize>> = orbits
            .iter()
            .enumerate()
            .map(|(i, os)| {
                let mut s: Vec<usize> = os
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| bits >> (offsets[i] + j) & 1 == 1)
                    .flat_map(|(_, o)| o.iter().copied())
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        if sets.iter().zip(graphs).any(|(s, g)| s.len() == g.vertex_count()) {
            continue;
        }
        let ok = maps.iter().all(|(s, t, f)| {
            (0..graphs[*t].vertex_count()).all(|x| {
                let fiber_selected = (0..f.len()).filter(|&y| f[y] == x).all(|y| sets[*s].contains(&y));
                sets[*t].contains(&x) == fiber_selected
            })
        });
        if ok {
            out.insert(sets);
        }
    }
    out
}
