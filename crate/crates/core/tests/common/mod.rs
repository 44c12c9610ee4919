//! Brute-force oracles and random instances shared by the integration tests.
//! The oracles work on vertex bitmasks and never call the library's own
//! enumeration, so they can be used to cross-check it.
#![allow(dead_code)]

use std::collections::BTreeSet;

use centered_core::decomposition::{NormalPair, Tree, TreeDecomposition};
use centered_core::graph::{Graph, Vertex, VertexSet};
use rand::Rng;

pub fn mask_of(set: &VertexSet) -> u64 {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

pub fn set_of(mask: u64) -> VertexSet {
    (0..64).filter(|v| mask >> v & 1 == 1).collect()
}

/// Whether `g[mask]` is nonempty and connected.
pub fn connected_mask(g: &Graph, mask: u64) -> bool {
    if mask == 0 {
        return false;
    }
    let start = mask.trailing_zeros() as Vertex;
    let mut seen = 1u64 << start;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if mask >> w & 1 == 1 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen == mask
}

/// All connected vertex sets as bitmasks, by filtering the power set.
pub fn connected_masks(g: &Graph) -> Vec<u64> {
    assert!(g.n() <= 20, "power-set oracle is for small graphs");
    (1u64..1 << g.n()).filter(|&m| connected_mask(g, m)).collect()
}

/// Smallest `k` admitting a proper coloring, by trying all `k^n` assignments.
pub fn brute_chromatic(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    for k in 1..=n {
        let mut colors = vec![0usize; n];
        loop {
            if g.edges().all(|(u, v)| colors[u] != colors[v]) {
                return k;
            }
            // odometer increment
            let mut i = 0;
            while i < n && colors[i] + 1 == k {
                colors[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            colors[i] += 1;
        }
    }
    unreachable!("n colors always suffice")
}

/// Colors occurring exactly once on `mask`, and the number of distinct colors.
fn color_profile(colors: &[usize], mask: u64) -> (BTreeSet<usize>, usize) {
    let mut count = std::collections::BTreeMap::new();
    for v in set_of(mask) {
        *count.entry(colors[v]).or_insert(0) += 1;
    }
    let unique = count.iter().filter(|(_, &k)| k == 1).map(|(&c, _)| c).collect();
    (unique, count.len())
}

/// Power-set check of the p-centered condition.
pub fn brute_centered(g: &Graph, colors: &[usize], p: usize) -> bool {
    connected_masks(g).into_iter().all(|m| {
        let (unique, distinct) = color_profile(colors, m);
        distinct > p || !unique.is_empty()
    })
}

/// Power-set check of the ordered condition: the `sigma`-first vertex of every
/// connected set with at most `p` colors carries a unique color.
pub fn brute_ordered(g: &Graph, sigma: &[Vertex], colors: &[usize], p: usize) -> bool {
    let mut pos = vec![0; g.n()];
    for (i, &v) in sigma.iter().enumerate() {
        pos[v] = i;
    }
    connected_masks(g).into_iter().all(|m| {
        let (unique, distinct) = color_profile(colors, m);
        let first = set_of(m).into_iter().min_by_key(|&v| pos[v]).unwrap();
        distinct > p || unique.contains(&colors[first])
    })
}

/// Random recursive tree as parent pointers; node 0 is the root.
pub fn random_parents(n: usize, rng: &mut impl Rng) -> Vec<Option<usize>> {
    (0..n)
        .map(|i| if i == 0 { None } else { Some(rng.gen_range(0..i)) })
        .collect()
}

pub fn tree_of(parents: &[Option<usize>]) -> Tree {
    let edges: Vec<_> = parents
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.map(|p| (p, i)))
        .collect();
    Tree::new(parents.len(), &edges).unwrap()
}

/// Cuts each tree edge with probability `cut`; the pieces are subtrees.
pub fn random_subtree_partition(
    parents: &[Option<usize>],
    cut: f64,
    rng: &mut impl Rng,
) -> Vec<BTreeSet<usize>> {
    let mut part_of = vec![0usize; parents.len()];
    let mut parts: Vec<BTreeSet<usize>> = Vec::new();
    for (i, p) in parents.iter().enumerate() {
        match p {
            Some(p) if !rng.gen_bool(cut) => {
                part_of[i] = part_of[*p];
                parts[part_of[i]].insert(i);
            }
            _ => {
                part_of[i] = parts.len();
                parts.push(BTreeSet::from([i]));
            }
        }
    }
    parts
}

/// `td` with a random partition of its tree into subtrees. The tree's node
/// numbering need not be a recursive order, so parents come from a BFS.
pub fn random_normal_pair(td: TreeDecomposition, cut: f64, rng: &mut impl Rng) -> NormalPair {
    let n = td.n_nodes();
    let mut order = vec![0usize];
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for &y in td.tree.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                order.push(y);
            }
        }
        i += 1;
    }
    // relabel to BFS positions, partition, and map back
    let mut pos = vec![0; n];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let relabeled: Vec<Option<usize>> = order.iter().map(|&x| parent[x].map(|p| pos[p])).collect();
    let parts = random_subtree_partition(&relabeled, cut, rng)
        .into_iter()
        .map(|q| q.into_iter().map(|i| order[i]).collect())
        .collect();
    NormalPair::new(td, parts).unwrap()
}

/// Up to `size` random connected sets of at most four vertices.
pub fn random_family(g: &Graph, size: usize, rng: &mut impl Rng) -> Vec<VertexSet> {
    (0..size)
        .filter_map(|_| centered_core::centered::random_connected_set(g, rng))
        .map(|s| s.into_iter().take(4).collect::<VertexSet>())
        .filter(|s| connected_mask(g, mask_of(s)))
        .collect()
}
