//! Seeded random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decomposition::{Tree, TreeDecomposition};
use crate::graph::{is_connected_set, Graph, VertexSet};

/// Uniform random recursive tree: vertex `i > 0` attaches to a uniform
/// earlier vertex.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.insert_edge(u, v);
    }
    g
}

/// A random spanning tree plus each remaining pair with probability `extra`.
pub fn random_connected_graph(n: usize, extra: f64, rng: &mut impl Rng) -> Graph {
    let mut g = random_tree(n, rng);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(extra) {
                g.insert_edge(u, v);
            }
        }
    }
    g
}

/// A random `k`-tree on `n` vertices with a width-`k` decomposition whose
/// bags are its `(k+1)`-cliques; fewer than `k + 1` vertices give a clique.
pub fn random_ktree(n: usize, k: usize, rng: &mut impl Rng) -> (Graph, TreeDecomposition) {
    let base = n.min(k + 1);
    let mut g = Graph::complete(base);
    while g.n() < n {
        g.add_vertex();
    }
    let mut bags: Vec<VertexSet> = vec![(0..base).collect()];
    let mut edges = Vec::new();
    for v in base..n {
        let x = rng.gen_range(0..bags.len());
        let mut clique: Vec<_> = bags[x].iter().copied().collect();
        clique.shuffle(rng);
        clique.truncate(k);
        for &u in &clique {
            g.insert_edge(u, v);
        }
        let mut bag: VertexSet = clique.into_iter().collect();
        bag.insert(v);
        edges.push((x, bags.len()));
        bags.push(bag);
    }
    let tree = Tree::new(bags.len(), &edges).expect("attachments form a tree");
    (
        g,
        TreeDecomposition::new(tree, bags).expect("bags match the tree"),
    )
}

/// A `k`-tree with each edge dropped with probability `drop` unless that
/// disconnects the graph. The decomposition stays valid for any subgraph.
pub fn random_partial_ktree(n: usize, k: usize, drop: f64, rng: &mut impl Rng) -> (Graph, TreeDecomposition) {
    let (mut g, td) = random_ktree(n, k, rng);
    let all = g.vertex_set();
    let edges: Vec<_> = g.edges().collect();
    for (u, v) in edges {
        if rng.gen_bool(drop) {
            g.remove_edge(u, v);
            if !is_connected_set(&g, &all) {
                g.insert_edge(u, v);
            }
        }
    }
    (g, td)
}

/// Connected series-parallel graph (treewidth at most 2) with a width-2
/// decomposition.
pub fn random_series_parallel(n: usize, rng: &mut impl Rng) -> (Graph, TreeDecomposition) {
    random_partial_ktree(n, 2, 0.3, rng)
}

/// `hubs` pairwise adjacent vertices, each adjacent to every vertex of a path
/// on `len` further vertices, with the path decomposition whose bags are the
/// hubs plus one path edge. For `hubs >= 3` and a long enough path this
/// contains `K_{hubs + 2}` as a minor.
pub fn hub_path(hubs: usize, len: usize) -> (Graph, TreeDecomposition) {
    let mut g = Graph::complete(hubs);
    for i in 0..len {
        let v = g.add_vertex();
        for h in 0..hubs {
            g.insert_edge(h, v);
        }
        if i > 0 {
            g.insert_edge(v - 1, v);
        }
    }
    let hub_set: VertexSet = (0..hubs).collect();
    let bags: Vec<VertexSet> = if len < 2 {
        vec![g.vertex_set()]
    } else {
        (hubs..hubs + len - 1)
            .map(|v| hub_set.iter().copied().chain([v, v + 1]).collect())
            .collect()
    };
    let tree = Tree::path(bags.len()).expect("at least one bag");
    (
        g,
        TreeDecomposition::new(tree, bags).expect("bags match the tree"),
    )
}
