//! Simple undirected graphs over dense vertex ids `0..n` and the primitive
//! operations the rest of the crate is built from.
//!
//! Most helpers come in two flavours: one acting on the whole graph and a
//! `*_within` variant restricted to a vertex subset, which is how induced
//! subgraphs are handled without renumbering vertices.

use std::collections::{BTreeSet, VecDeque};
use std::ops::ControlFlow;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<Vertex>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.insert_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.insert_edge(n - 1, 0);
        }
        g
    }

    /// `rows × cols` grid; vertex `(i, j)` has id `i * cols + j`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut g = Graph::new(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = i * cols + j;
                if j + 1 < cols {
                    g.insert_edge(v, v + 1);
                }
                if i + 1 < rows {
                    g.insert_edge(v, v + cols);
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    /// Adds the edge `uv`; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.insert_edge(u, v);
        Ok(())
    }

    pub(crate) fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert!(u != v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        if u < self.n() && v < self.n() {
            self.adj[u].remove(&v);
            self.adj[v].remove(&u);
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn neighbors(&self, v: Vertex) -> &BTreeSet<Vertex> {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.range(u + 1..).map(move |&v| (u, v)))
    }

    /// `N(X) = ⋃_{u ∈ X} N(u) ∖ X`.
    pub fn neighborhood_of_set(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for &u in set {
            for &v in &self.adj[u] {
                if !set.contains(&v) {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// The subgraph induced on `keep`, on the same vertex id space; vertices
    /// outside `keep` become isolated.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut h = Graph::new(self.n());
        for &u in keep {
            for &v in &self.adj[u] {
                if u < v && keep.contains(&v) {
                    h.insert_edge(u, v);
                }
            }
        }
        h
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && connected_components(self).len() == 1
    }
}

/// Partition of `0..n` into nonempty, pairwise disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    parts: Vec<VertexSet>,
    part_of: Vec<usize>,
}

impl VertexPartition {
    pub fn new(n: usize, parts: Vec<VertexSet>) -> Result<Self> {
        let mut part_of = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidPartition(format!("part {i} is empty")));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} lies in parts {} and {i}",
                        part_of[v]
                    )));
                }
                part_of[v] = i;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
        }
        Ok(VertexPartition { parts, part_of })
    }

    pub fn singletons(n: usize) -> Self {
        VertexPartition {
            parts: (0..n).map(|v| VertexSet::from([v])).collect(),
            part_of: (0..n).collect(),
        }
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn part_of(&self, v: Vertex) -> usize {
        self.part_of[v]
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Connected components, each as a vertex set, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    components_within(g, &g.vertex_set())
}

/// Components of `g[within]`, ordered by smallest vertex.
pub fn components_within(g: &Graph, within: &VertexSet) -> Vec<VertexSet> {
    let mut seen = VertexSet::new();
    let mut out = Vec::new();
    for &s in within {
        if seen.contains(&s) {
            continue;
        }
        let comp = reach_within(g, within, s);
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

fn reach_within(g: &Graph, within: &VertexSet, start: Vertex) -> VertexSet {
    let mut comp = VertexSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if within.contains(&v) && comp.insert(v) {
                queue.push_back(v);
            }
        }
    }
    comp
}

/// Whether `g[set]` is connected. The empty set is not connected.
pub fn is_connected_set(g: &Graph, set: &VertexSet) -> bool {
    match set.iter().next() {
        None => false,
        Some(&s) => reach_within(g, set, s).len() == set.len(),
    }
}

/// BFS distances from `roots` inside `g[within]`; unreachable vertices are `None`.
pub fn bfs_distances_within(g: &Graph, within: &VertexSet, roots: &[Vertex]) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for &r in roots {
        if within.contains(&r) && dist[r].is_none() {
            dist[r] = Some(0);
            queue.push_back(r);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if within.contains(&v) && dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Quotient graph `g / partition`: vertex `i` of the result is part `i`.
pub fn quotient(g: &Graph, partition: &VertexPartition) -> Result<(Graph, Vec<VertexSet>)> {
    if partition.part_of.len() != g.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} vertices, graph has {}",
            partition.part_of.len(),
            g.n()
        )));
    }
    let mut q = Graph::new(partition.len());
    for (u, v) in g.edges() {
        let (a, b) = (partition.part_of(u), partition.part_of(v));
        if a != b {
            q.insert_edge(a, b);
        }
    }
    Ok((q, partition.parts.clone()))
}

/// Torso of `w`: `u, v ∈ w` are adjacent iff some `u`–`v` path has all of
/// its internal vertices outside `w`. The result keeps the id space of `g`;
/// vertices outside `w` are isolated.
pub fn torso(g: &Graph, w: &VertexSet) -> Graph {
    let mut t = g.induced(w);
    let outside: VertexSet = g.vertices().filter(|v| !w.contains(v)).collect();
    for comp in components_within(g, &outside) {
        let attach: Vec<Vertex> = g
            .neighborhood_of_set(&comp)
            .into_iter()
            .filter(|v| w.contains(v))
            .collect();
        for (i, &a) in attach.iter().enumerate() {
            for &b in &attach[i + 1..] {
                t.insert_edge(a, b);
            }
        }
    }
    t
}

/// Contracts each of `parts` to a single vertex. Vertices of the result are
/// ordered by the smallest original vertex they stand for; the returned
/// mapping gives, for every new vertex, its set of original vertices.
pub fn contract_parts(g: &Graph, parts: &[VertexSet]) -> Result<(Graph, Vec<VertexSet>)> {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if owner[v] != usize::MAX {
                return Err(Error::InvalidPartition(format!(
                    "vertex {v} lies in two contracted parts"
                )));
            }
            owner[v] = i;
        }
        if !is_connected_set(g, part) {
            return Err(Error::DisconnectedPart(part.iter().copied().collect()));
        }
    }
    let mut groups: Vec<VertexSet> = parts.to_vec();
    groups.extend(
        g.vertices()
            .filter(|&v| owner[v] == usize::MAX)
            .map(|v| VertexSet::from([v])),
    );
    groups.sort_by_key(|s| *s.iter().next().unwrap());
    let mut new_id = vec![0; g.n()];
    for (i, s) in groups.iter().enumerate() {
        for &v in s {
            new_id[v] = i;
        }
    }
    let mut h = Graph::new(groups.len());
    for (u, v) in g.edges() {
        if new_id[u] != new_id[v] {
            h.insert_edge(new_id[u], new_id[v]);
        }
    }
    Ok((h, groups))
}

/// What to do after visiting a connected set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    Descend,
    /// Skip every set that would be grown from the current one. All of
    /// them are supersets of it.
    Prune,
    Stop,
}

/// Visits every connected vertex subset of `g[within]` with at most
/// `max_size` vertices exactly once. Sets are generated by extension from
/// their smallest vertex (the ESU scheme), so no deduplication is needed.
/// The callback receives the set as a slice in insertion order.
pub fn for_each_connected_set_within<F>(
    g: &Graph,
    within: &VertexSet,
    max_size: Option<usize>,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    visit_connected_sets(g, within, max_size, |s| match visit(s) {
        ControlFlow::Continue(()) => Visit::Descend,
        ControlFlow::Break(()) => Visit::Stop,
    })
}

/// [`for_each_connected_set_within`] with pruning: sets grown from a set
/// on which `visit` answers [`Visit::Prune`] are skipped.
pub fn visit_connected_sets<F>(
    g: &Graph,
    within: &VertexSet,
    max_size: Option<usize>,
    mut visit: F,
) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> Visit,
{
    let limit = max_size.unwrap_or(usize::MAX);
    if limit == 0 {
        return ControlFlow::Continue(());
    }
    let n = g.n();
    let mut blocked = vec![0usize; n];
    let mut current = Vec::new();
    for &root in within {
        current.push(root);
        let mut ext: Vec<Vertex> = g
            .neighbors(root)
            .iter()
            .copied()
            .filter(|&u| u > root && within.contains(&u))
            .collect();
        // blocked[u] > 0 marks u as in the set or adjacent to it
        blocked[root] += 1;
        for &u in g.neighbors(root) {
            blocked[u] += 1;
        }
        let flow = esu_extend(
            g,
            within,
            root,
            limit,
            &mut current,
            &mut blocked,
            &mut ext,
            &mut visit,
        );
        for &u in g.neighbors(root) {
            blocked[u] -= 1;
        }
        blocked[root] -= 1;
        current.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

#[allow(clippy::too_many_arguments)]
fn esu_extend<F>(
    g: &Graph,
    within: &VertexSet,
    root: Vertex,
    limit: usize,
    current: &mut Vec<Vertex>,
    blocked: &mut [usize],
    ext: &mut Vec<Vertex>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> Visit,
{
    match visit(current) {
        Visit::Stop => return ControlFlow::Break(()),
        Visit::Prune => return ControlFlow::Continue(()),
        Visit::Descend => {}
    }
    if current.len() >= limit {
        return ControlFlow::Continue(());
    }
    while let Some(w) = ext.pop() {
        let mut next_ext = ext.clone();
        for &u in g.neighbors(w) {
            if u > root && within.contains(&u) && blocked[u] == 0 {
                next_ext.push(u);
            }
        }
        current.push(w);
        blocked[w] += 1;
        for &u in g.neighbors(w) {
            blocked[u] += 1;
        }
        let flow = esu_extend(g, within, root, limit, current, blocked, &mut next_ext, visit);
        for &u in g.neighbors(w) {
            blocked[u] -= 1;
        }
        blocked[w] -= 1;
        current.pop();
        flow?;
    }
    ControlFlow::Continue(())
}

pub fn for_each_connected_set<F>(g: &Graph, max_size: Option<usize>, visit: F) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    for_each_connected_set_within(g, &g.vertex_set(), max_size, visit)
}

/// All connected vertex subsets of size at most `max_size`. Intended for
/// small graphs (n up to about 20).
pub fn enumerate_connected_sets(g: &Graph, max_size: Option<usize>) -> Vec<VertexSet> {
    let mut out = Vec::new();
    let _ = for_each_connected_set(g, max_size, |s| {
        out.push(s.iter().copied().collect());
        ControlFlow::Continue(())
    });
    out
}

/// Checks that `branch_sets` is a model of `K_t` with `t = branch_sets.len()`:
/// disjoint, nonempty, connected, and pairwise linked by an edge.
pub fn validate_clique_model(g: &Graph, branch_sets: &[VertexSet]) -> std::result::Result<(), String> {
    let mut seen = VertexSet::new();
    for (i, b) in branch_sets.iter().enumerate() {
        if b.iter().any(|&v| v >= g.n()) {
            return Err(format!("branch set {i} has an out-of-range vertex"));
        }
        if !is_connected_set(g, b) {
            return Err(format!("branch set {i} is empty or disconnected"));
        }
        for &v in b {
            if !seen.insert(v) {
                return Err(format!("vertex {v} appears in two branch sets"));
            }
        }
    }
    for i in 0..branch_sets.len() {
        for j in i + 1..branch_sets.len() {
            let linked = branch_sets[i]
                .iter()
                .any(|&u| g.neighbors(u).iter().any(|v| branch_sets[j].contains(v)));
            if !linked {
                return Err(format!("branch sets {i} and {j} are not adjacent"));
            }
        }
    }
    Ok(())
}

/// Exact search for a `K_t` model; returns the branch sets when one exists.
/// Exponential, meant for test-sized graphs (n ≤ ~10).
///
/// # Panics
/// If `g` has more than 128 vertices.
pub fn has_kt_minor(g: &Graph, t: usize) -> Option<Vec<VertexSet>> {
    assert!(g.n() <= 128, "has_kt_minor supports at most 128 vertices");
    if t == 0 {
        return Some(Vec::new());
    }
    let sets = enumerate_connected_sets(g, Some(g.n().saturating_sub(t - 1).max(1)));
    let masks: Vec<u128> = sets.iter().map(mask_of).collect();
    let nbr_masks: Vec<u128> = sets
        .iter()
        .map(|s| {
            let mut m = 0u128;
            for &u in s {
                for &v in g.neighbors(u) {
                    m |= 1 << v;
                }
            }
            m
        })
        .collect();
    // branch sets chosen in increasing order of their smallest vertex
    let mins: Vec<Vertex> = sets.iter().map(|s| *s.iter().next().unwrap()).collect();
    let mut chosen = Vec::new();
    if kt_search(&masks, &nbr_masks, &mins, t, 0, &mut chosen) {
        Some(chosen.iter().map(|&i| sets[i].clone()).collect())
    } else {
        None
    }
}

fn mask_of(s: &VertexSet) -> u128 {
    s.iter().fold(0u128, |m, &v| m | (1 << v))
}

fn kt_search(
    masks: &[u128],
    nbrs: &[u128],
    mins: &[Vertex],
    t: usize,
    used: u128,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == t {
        return true;
    }
    let floor = chosen.last().map(|&i| mins[i] + 1).unwrap_or(0);
    for i in 0..masks.len() {
        if mins[i] < floor || masks[i] & used != 0 {
            continue;
        }
        if chosen.iter().any(|&j| nbrs[j] & masks[i] == 0) {
            continue;
        }
        chosen.push(i);
        if kt_search(masks, nbrs, mins, t, used | masks[i], chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn components_of_small_graphs() {
        assert_eq!(connected_components(&Graph::path(4)), vec![set(&[0, 1, 2, 3])]);
        assert_eq!(connected_components(&Graph::new(2)), vec![set(&[0]), set(&[1])]);
        let mut g = Graph::path(4);
        g.remove_edge(1, 2);
        assert_eq!(connected_components(&g), vec![set(&[0, 1]), set(&[2, 3])]);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert_eq!(Graph::from_edges(2, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn quotient_examples() {
        let c4 = Graph::cycle(4);
        let p = VertexPartition::new(4, vec![set(&[0, 1]), set(&[2, 3])]).unwrap();
        let (q, _) = quotient(&c4, &p).unwrap();
        assert_eq!(q, Graph::complete(2));

        let (q, _) = quotient(&c4, &VertexPartition::singletons(4)).unwrap();
        assert_eq!(q, c4);

        let k3 = Graph::complete(3);
        let p = VertexPartition::new(3, vec![set(&[0, 1]), set(&[2])]).unwrap();
        assert_eq!(quotient(&k3, &p).unwrap().0, Graph::complete(2));
    }

    #[test]
    fn partition_validation() {
        assert!(VertexPartition::new(3, vec![set(&[0, 1])]).is_err());
        assert!(VertexPartition::new(3, vec![set(&[0, 1]), set(&[1, 2])]).is_err());
        assert!(VertexPartition::new(3, vec![set(&[0, 1, 2]), set(&[])]).is_err());
        let c4 = Graph::cycle(4);
        let bad = VertexPartition::new(3, vec![set(&[0, 1, 2])]).unwrap();
        assert!(quotient(&c4, &bad).is_err());
    }

    #[test]
    fn torso_examples() {
        let c4 = Graph::cycle(4);
        let t = torso(&c4, &set(&[0, 2]));
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(torso(&c4, &c4.vertex_set()), c4);
        let p4 = Graph::path(4);
        assert_eq!(
            torso(&p4, &set(&[0, 3])).edges().collect::<Vec<_>>(),
            vec![(0, 3)]
        );
        assert_eq!(torso(&p4, &VertexSet::new()).m(), 0);
    }

    #[test]
    fn contraction_examples() {
        let (h, map) = contract_parts(&Graph::path(4), &[set(&[1, 2])]).unwrap();
        assert_eq!(h, Graph::path(3));
        assert_eq!(map, vec![set(&[0]), set(&[1, 2]), set(&[3])]);

        let c4 = Graph::cycle(4);
        assert_eq!(contract_parts(&c4, &[]).unwrap().0, c4);
        let (h, _) = contract_parts(&c4, &[set(&[0, 1]), set(&[2, 3])]).unwrap();
        assert_eq!(h, Graph::complete(2));

        assert!(matches!(
            contract_parts(&c4, &[set(&[0, 2])]),
            Err(Error::DisconnectedPart(_))
        ));
    }

    #[test]
    fn connected_set_examples() {
        let mut got = enumerate_connected_sets(&Graph::path(3), Some(2));
        got.sort();
        let mut want = vec![set(&[0]), set(&[1]), set(&[2]), set(&[0, 1]), set(&[1, 2])];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(enumerate_connected_sets(&Graph::new(1), None), vec![set(&[0])]);
        assert_eq!(enumerate_connected_sets(&Graph::cycle(4), None).len(), 13);
        assert!(enumerate_connected_sets(&Graph::cycle(4), Some(0)).is_empty());
    }

    #[test]
    fn connected_sets_match_power_set_filter() {
        let g = Graph::grid(3, 3);
        let mut got = enumerate_connected_sets(&g, None);
        got.sort();
        let mut want = Vec::new();
        for mask in 1u32..(1 << 9) {
            let s: VertexSet = (0..9).filter(|v| mask >> v & 1 == 1).collect();
            if is_connected_set(&g, &s) {
                want.push(s);
            }
        }
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn pruning_skips_supersets() {
        // prune at {0}: every set containing 0 is grown from it
        let g = Graph::path(4);
        let mut seen = Vec::new();
        let _ = visit_connected_sets(&g, &g.vertex_set(), None, |s| {
            seen.push(s.iter().copied().collect::<VertexSet>());
            if s == [0] {
                Visit::Prune
            } else {
                Visit::Descend
            }
        });
        assert!(seen.iter().all(|s| !s.contains(&0) || s.len() == 1));
        assert_eq!(seen.len(), 1 + 6);
    }

    #[test]
    fn minor_examples() {
        let k4 = has_kt_minor(&Graph::complete(4), 4).expect("K4 has a K4 model");
        assert!(k4.iter().all(|b| b.len() == 1));
        assert!(has_kt_minor(&Graph::cycle(4), 3).is_some());
        assert!(has_kt_minor(&Graph::cycle(4), 4).is_none());
        assert!(has_kt_minor(&Graph::path(4), 3).is_none());
        let grid = Graph::grid(3, 3);
        let model = has_kt_minor(&grid, 4).expect("3x3 grid has a K4 minor");
        validate_clique_model(&grid, &model).unwrap();
        assert!(has_kt_minor(&Graph::complete(4), 5).is_none());
    }

    #[test]
    fn clique_model_validation() {
        let g = Graph::path(3);
        assert!(validate_clique_model(&g, &[set(&[0]), set(&[1])]).is_ok());
        assert!(validate_clique_model(&g, &[set(&[0]), set(&[2])]).is_err());
        assert!(validate_clique_model(&g, &[set(&[0, 2]), set(&[1])]).is_err());
        assert!(validate_clique_model(&g, &[set(&[0, 1]), set(&[1, 2])]).is_err());
    }
}
