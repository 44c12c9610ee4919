//! Trees, tree decompositions, elimination orderings, LCA closures, the
//! Helly hitting-set/packing dichotomy and the refinement that makes a
//! decomposition natural.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{components_within, Graph, Vertex, VertexSet};

pub type Node = usize;
pub type NodeSet = BTreeSet<Node>;

/// An unrooted tree on nodes `0..n`, `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<BTreeSet<Node>>,
}

impl Tree {
    pub fn new(n: usize, edges: &[(Node, Node)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one node".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!("{} edges on {n} nodes", edges.len())));
        }
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidTree(format!("bad edge {a}-{b}")));
            }
            if !adj[a].insert(b) {
                return Err(Error::InvalidTree(format!("repeated edge {a}-{b}")));
            }
            adj[b].insert(a);
        }
        let t = Tree { adj };
        if t.reachable_from(0, None).len() != n {
            return Err(Error::InvalidTree("tree is not connected".into()));
        }
        Ok(t)
    }

    pub fn single() -> Self {
        Tree {
            adj: vec![BTreeSet::new()],
        }
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Tree::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, x: Node) -> &BTreeSet<Node> {
        &self.adj[x]
    }

    pub fn has_edge(&self, a: Node, b: Node) -> bool {
        self.adj.get(a).is_some_and(|s| s.contains(&b))
    }

    /// Edges `(a, b)` with `a < b` in lexicographic order.
    pub fn edges(&self) -> Vec<(Node, Node)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.range(a + 1..).map(move |&b| (a, b)))
            .collect()
    }

    /// Nodes reachable from `start` without crossing the edge to `blocked`.
    fn reachable_from(&self, start: Node, blocked: Option<Node>) -> NodeSet {
        let mut seen = NodeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &b in &self.adj[a] {
                if a == start && Some(b) == blocked {
                    continue;
                }
                if seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        seen
    }

    /// Node set of `T_{x|y}`, the component of `x` in `T − xy`.
    pub fn side(&self, x: Node, y: Node) -> NodeSet {
        debug_assert!(self.has_edge(x, y));
        self.reachable_from(x, Some(y))
    }

    /// Whether `nodes` induces a connected subtree. The empty set does not.
    pub fn is_connected_subset(&self, nodes: &NodeSet) -> bool {
        let Some(&s) = nodes.iter().next() else {
            return false;
        };
        let mut seen = NodeSet::from([s]);
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in &self.adj[a] {
                if nodes.contains(&b) && seen.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        seen.len() == nodes.len()
    }

    /// The unique path from `a` to `b`, both ends included.
    pub fn path_between(&self, a: Node, b: Node) -> Vec<Node> {
        let rooted = RootedTree::new(self, b);
        let mut path = vec![a];
        let mut cur = a;
        while let Some(p) = rooted.parent(cur) {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Components of `T − removed`, each with the set of removed nodes
    /// adjacent to it.
    pub fn components_without(&self, removed: &NodeSet) -> Vec<(NodeSet, NodeSet)> {
        let mut seen = removed.clone();
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = NodeSet::from([s]);
            let mut border = NodeSet::new();
            let mut queue = VecDeque::from([s]);
            seen.insert(s);
            while let Some(a) = queue.pop_front() {
                for &b in &self.adj[a] {
                    if removed.contains(&b) {
                        border.insert(b);
                    } else if seen.insert(b) {
                        comp.insert(b);
                        queue.push_back(b);
                    }
                }
            }
            out.push((comp, border));
        }
        out
    }
}

/// A tree with a designated root and the derived parent/children/depth maps.
#[derive(Clone, Debug)]
pub struct RootedTree {
    root: Node,
    parent: Vec<Option<Node>>,
    children: Vec<Vec<Node>>,
    depth: Vec<usize>,
    bfs: Vec<Node>,
}

impl RootedTree {
    /// # Panics
    /// If `root` is not a node of `tree`.
    pub fn new(tree: &Tree, root: Node) -> Self {
        assert!(root < tree.n(), "root {root} is not a node");
        let n = tree.n();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut bfs = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            bfs.push(a);
            for &b in tree.neighbors(a) {
                if !seen[b] {
                    seen[b] = true;
                    parent[b] = Some(a);
                    children[a].push(b);
                    depth[b] = depth[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        RootedTree {
            root,
            parent,
            children,
            depth,
            bfs,
        }
    }

    pub fn root(&self) -> Node {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, x: Node) -> Option<Node> {
        self.parent[x]
    }

    pub fn children(&self, x: Node) -> &[Node] {
        &self.children[x]
    }

    pub fn depth(&self, x: Node) -> usize {
        self.depth[x]
    }

    /// Nodes in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[Node] {
        &self.bfs
    }

    pub fn lca(&self, mut a: Node, mut b: Node) -> Node {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
        }
        a
    }

    pub fn is_ancestor(&self, anc: Node, mut x: Node) -> bool {
        while self.depth[x] > self.depth[anc] {
            x = self.parent[x].unwrap();
        }
        x == anc
    }

    /// `x` and all its descendants.
    pub fn subtree(&self, x: Node) -> Vec<Node> {
        let mut out = vec![x];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out
    }

    /// The node of a connected node set closest to the root.
    pub fn top_of(&self, nodes: &NodeSet) -> Option<Node> {
        nodes.iter().copied().min_by_key(|&x| (self.depth[x], x))
    }
}

/// `LCA(T, Y) = {lca(u, v) | u, v ∈ Y}`; at most `2|Y| − 1` nodes.
pub fn lca_closure(tree: &RootedTree, y: &NodeSet) -> Result<NodeSet> {
    if y.is_empty() {
        return Err(Error::EmptyNodeSet);
    }
    let ys: Vec<Node> = y.iter().copied().collect();
    let mut out = NodeSet::new();
    for (i, &a) in ys.iter().enumerate() {
        for &b in &ys[i..] {
            out.insert(tree.lca(a, b));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: Tree,
    pub bags: Vec<VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    BagVertexOutOfRange { node: Node, vertex: Vertex },
    VertexUncovered(Vertex),
    OccurrenceDisconnected(Vertex),
    EdgeUncovered(Vertex, Vertex),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::BagVertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} holds out-of-range vertex {vertex}")
            }
            TdViolation::VertexUncovered(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::OccurrenceDisconnected(v) => {
                write!(f, "bags containing vertex {v} do not form a subtree")
            }
            TdViolation::EdgeUncovered(u, v) => write!(f, "edge {u}-{v} is in no bag"),
        }
    }
}

impl TreeDecomposition {
    pub fn new(tree: Tree, bags: Vec<VertexSet>) -> Result<Self> {
        if bags.len() != tree.n() {
            return Err(Error::InvalidDecomposition(format!(
                "{} bags for {} tree nodes",
                bags.len(),
                tree.n()
            )));
        }
        Ok(TreeDecomposition { tree, bags })
    }

    /// One bag holding every vertex of `g`.
    pub fn trivial(g: &Graph) -> Self {
        TreeDecomposition {
            tree: Tree::single(),
            bags: vec![g.vertex_set()],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.bags.len()
    }

    /// `max |W_x| − 1`, saturating at zero.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(BTreeSet::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn adhesions(&self) -> Vec<((Node, Node), VertexSet)> {
        self.tree
            .edges()
            .into_iter()
            .map(|(a, b)| ((a, b), &self.bags[a] & &self.bags[b]))
            .collect()
    }

    /// Nodes whose bag contains `v`.
    pub fn occurrence(&self, v: Vertex) -> NodeSet {
        (0..self.n_nodes())
            .filter(|&x| self.bags[x].contains(&v))
            .collect()
    }

    pub fn union_of(&self, nodes: impl IntoIterator<Item = Node>) -> VertexSet {
        let mut out = VertexSet::new();
        for x in nodes {
            out.extend(self.bags[x].iter().copied());
        }
        out
    }

    pub fn covered_vertices(&self) -> VertexSet {
        self.union_of(0..self.n_nodes())
    }
}

/// Checks both tree-decomposition axioms; an empty list means valid.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Vec<TdViolation> {
    validate_td_on(g, &g.vertex_set(), td)
}

/// Validity as a decomposition of the induced subgraph `g[within]`: bags
/// must stay inside `within`, and only its vertices and edges must be covered.
pub fn validate_td_on(g: &Graph, within: &VertexSet, td: &TreeDecomposition) -> Vec<TdViolation> {
    let mut out = Vec::new();
    let mut occ: Vec<NodeSet> = vec![NodeSet::new(); g.n()];
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            match occ.get_mut(v) {
                Some(s) if within.contains(&v) => {
                    s.insert(x);
                }
                _ => out.push(TdViolation::BagVertexOutOfRange { node: x, vertex: v }),
            }
        }
    }
    for &v in within {
        let nodes = &occ[v];
        if nodes.is_empty() {
            out.push(TdViolation::VertexUncovered(v));
        } else if !td.tree.is_connected_subset(nodes) {
            out.push(TdViolation::OccurrenceDisconnected(v));
        }
    }
    for (u, v) in g.edges() {
        if !within.contains(&u) || !within.contains(&v) {
            continue;
        }
        if occ[u].intersection(&occ[v]).next().is_none() {
            out.push(TdViolation::EdgeUncovered(u, v));
        }
    }
    out
}

pub fn ensure_valid_td(g: &Graph, within: &VertexSet, td: &TreeDecomposition) -> Result<()> {
    match validate_td_on(g, within, td).first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidDecomposition(v.to_string())),
    }
}

/// Orders the covered vertices by the depth of their topmost bag, ties by id.
pub fn elimination_order(td: &TreeDecomposition, rooted: &RootedTree) -> Vec<Vertex> {
    let mut top: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            let d = rooted.depth(x);
            top.entry(v).and_modify(|e| *e = (*e).min(d)).or_insert(d);
        }
    }
    let mut order: Vec<Vertex> = top.keys().copied().collect();
    order.sort_by_key(|v| (top[v], *v));
    order
}

/// Checks the elimination-ordering condition literally: for every `i`, the
/// earlier vertices sharing a bag with `u_i` all fit in one bag. Returns the
/// first violating index; a non-permutation of the covered vertices is
/// reported at the first offending position.
pub fn validate_elimination_order(
    td: &TreeDecomposition,
    sigma: &[Vertex],
) -> std::result::Result<(), usize> {
    let covered = td.covered_vertices();
    let mut earlier = VertexSet::new();
    for (i, &u) in sigma.iter().enumerate() {
        if !covered.contains(&u) || earlier.contains(&u) {
            return Err(i);
        }
        let near: VertexSet = td
            .bags
            .iter()
            .filter(|b| b.contains(&u))
            .flat_map(|b| b.intersection(&earlier).copied())
            .collect();
        if !td.bags.iter().any(|b| near.is_subset(b)) {
            return Err(i);
        }
        earlier.insert(u);
    }
    if earlier.len() != covered.len() {
        return Err(sigma.len());
    }
    Ok(())
}

/// `Z = ⋃_{x ∈ LCA(T, X)} W_x` together with `LCA(T, X)`.
pub fn bag_union_closure(
    td: &TreeDecomposition,
    rooted: &RootedTree,
    x: &NodeSet,
) -> Result<(VertexSet, NodeSet)> {
    let closed = lca_closure(rooted, x)?;
    Ok((td.union_of(closed.iter().copied()), closed))
}

/// Whether for every tree edge `xy` both sides induce connected subgraphs.
pub fn is_natural(g: &Graph, td: &TreeDecomposition) -> bool {
    find_unnatural_edge(g, td).is_none()
}

/// First oriented edge `(x, y)` whose `x`-side union does not induce a
/// connected subgraph, scanning edges in order.
fn find_unnatural_edge(g: &Graph, td: &TreeDecomposition) -> Option<(Node, Node)> {
    for (a, b) in td.tree.edges() {
        for (x, y) in [(a, b), (b, a)] {
            let side = td.tree.side(x, y);
            let union = td.union_of(side.iter().copied());
            if components_within(g, &union).len() != 1 {
                return Some((x, y));
            }
        }
    }
    None
}

/// A queryable family of connected subgraphs, each given by its vertex set.
pub trait FamilyOracle {
    /// A member whose vertex set is contained in `s`, or `None` when no
    /// member fits. Must be monotone in `s`.
    fn query(&self, s: &VertexSet) -> Option<VertexSet>;
}

/// A finite family answered by linear scan.
#[derive(Clone, Debug, Default)]
pub struct ExplicitFamily {
    pub members: Vec<VertexSet>,
}

impl ExplicitFamily {
    pub fn new(members: Vec<VertexSet>) -> Self {
        ExplicitFamily { members }
    }
}

impl FamilyOracle for ExplicitFamily {
    fn query(&self, s: &VertexSet) -> Option<VertexSet> {
        self.members.iter().find(|m| m.is_subset(s)).cloned()
    }
}

impl<F: FamilyOracle + ?Sized> FamilyOracle for &F {
    fn query(&self, s: &VertexSet) -> Option<VertexSet> {
        (**self).query(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HellyOutcome {
    /// At most `d` nodes whose bags meet every member.
    Hitting(NodeSet),
    /// `d + 1` pairwise disjoint members.
    Packing(Vec<VertexSet>),
}

fn checked_query(family: &dyn FamilyOracle, s: &VertexSet) -> Result<Option<VertexSet>> {
    match family.query(s) {
        Some(m) if !m.is_subset(s) => Err(Error::InconsistentOracle {
            member: m.into_iter().collect(),
        }),
        other => Ok(other),
    }
}

/// Either at most `d` bags hitting every member of `family`, or `d + 1`
/// pairwise disjoint members. Members are looked for among the vertices
/// covered by `td`.
///
/// Repeatedly takes the deepest node `z` (ties by smallest id) whose subtree
/// union, restricted to the residue, still holds a member; `W_z` joins the
/// hitting set, the member joins the packing and the subtree union leaves
/// the residue.
pub fn helly_hitting_or_packing(
    td: &TreeDecomposition,
    rooted: &RootedTree,
    family: &dyn FamilyOracle,
    d: usize,
) -> Result<HellyOutcome> {
    let mut residue = td.covered_vertices();
    let mut by_depth: Vec<Node> = (0..td.n_nodes()).collect();
    by_depth.sort_by_key(|&x| (std::cmp::Reverse(rooted.depth(x)), x));
    let subtree_unions: Vec<VertexSet> = (0..td.n_nodes())
        .map(|x| td.union_of(rooted.subtree(x)))
        .collect();
    let mut hitting = NodeSet::new();
    let mut packing = Vec::new();
    loop {
        if checked_query(family, &residue)?.is_none() {
            return Ok(HellyOutcome::Hitting(hitting));
        }
        let mut found = None;
        for &z in &by_depth {
            let s: VertexSet = subtree_unions[z].intersection(&residue).copied().collect();
            if let Some(m) = checked_query(family, &s)? {
                found = Some((z, m));
                break;
            }
        }
        // the root's subtree union is the whole residue, so a member exists
        let (z, member) = found.ok_or_else(|| {
            Error::Internal("oracle answered on the residue but not on the root subtree".into())
        })?;
        hitting.insert(z);
        packing.push(member);
        if packing.len() > d {
            return Ok(HellyOutcome::Packing(packing));
        }
        for v in &subtree_unions[z] {
            residue.remove(v);
        }
    }
}

/// Re-checks a Helly outcome independently of how it was produced.
pub fn verify_helly_outcome(
    td: &TreeDecomposition,
    family: &dyn FamilyOracle,
    d: usize,
    outcome: &HellyOutcome,
) -> std::result::Result<(), String> {
    match outcome {
        HellyOutcome::Hitting(nodes) => {
            if nodes.len() > d {
                return Err(format!("{} hitting bags exceed d = {d}", nodes.len()));
            }
            let hit = td.union_of(nodes.iter().copied());
            let rest: VertexSet = td.covered_vertices().difference(&hit).copied().collect();
            match family.query(&rest) {
                Some(m) => Err(format!("member {m:?} avoids the hitting bags")),
                None => Ok(()),
            }
        }
        HellyOutcome::Packing(members) => {
            if members.len() != d + 1 {
                return Err(format!("packing has {} members, want {}", members.len(), d + 1));
            }
            for (i, a) in members.iter().enumerate() {
                if family.query(a).is_none() {
                    return Err(format!("packing member {i} is not in the family"));
                }
                for b in &members[i + 1..] {
                    if !a.is_disjoint(b) {
                        return Err(format!("packing members {a:?} and {b:?} intersect"));
                    }
                }
            }
            Ok(())
        }
    }
}

/// A tree decomposition with a partition of its tree into connected subtrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalPair {
    pub td: TreeDecomposition,
    pub parts: Vec<NodeSet>,
}

impl NormalPair {
    pub fn new(td: TreeDecomposition, parts: Vec<NodeSet>) -> Result<Self> {
        let pair = NormalPair { td, parts };
        pair.check_parts().map_err(Error::InvalidDecomposition)?;
        Ok(pair)
    }

    pub fn check_parts(&self) -> std::result::Result<(), String> {
        let mut owner = vec![usize::MAX; self.td.n_nodes()];
        for (i, q) in self.parts.iter().enumerate() {
            if !self.td.tree.is_connected_subset(q) {
                return Err(format!("part {i} is empty or not a subtree"));
            }
            for &x in q {
                if x >= owner.len() {
                    return Err(format!("part {i} names missing node {x}"));
                }
                if owner[x] != usize::MAX {
                    return Err(format!("node {x} lies in parts {} and {i}", owner[x]));
                }
                owner[x] = i;
            }
        }
        match owner.iter().position(|&o| o == usize::MAX) {
            Some(x) => Err(format!("node {x} lies in no part")),
            None => Ok(()),
        }
    }

    /// Part index of every node.
    pub fn part_of_nodes(&self) -> Vec<usize> {
        let mut owner = vec![0; self.td.n_nodes()];
        for (i, q) in self.parts.iter().enumerate() {
            for &x in q {
                owner[x] = i;
            }
        }
        owner
    }
}

/// `Q(X)`: indices of the parts meeting `x`.
pub fn parts_hit(pair: &NormalPair, x: &NodeSet) -> BTreeSet<usize> {
    pair.parts
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_disjoint(x))
        .map(|(i, _)| i)
        .collect()
}

/// Maps witnessing that one normal pair refines another: `f` sends nodes of
/// the finer tree to nodes of the coarser one, `g` sends parts to parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementWitness {
    pub f: Vec<Node>,
    pub g: Vec<usize>,
}

impl RefinementWitness {
    pub fn identity(pair: &NormalPair) -> Self {
        RefinementWitness {
            f: (0..pair.td.n_nodes()).collect(),
            g: (0..pair.parts.len()).collect(),
        }
    }

    /// `self` refines the middle pair, `outer` refines the middle pair into
    /// the coarsest: the composite maps finest to coarsest.
    fn then(&self, outer: &RefinementWitness) -> RefinementWitness {
        RefinementWitness {
            f: self.f.iter().map(|&x| outer.f[x]).collect(),
            g: self.g.iter().map(|&q| outer.g[q]).collect(),
        }
    }
}

/// Checks (r1) `V_s ⊆ U_{f(s)}` and (r2) `f(V(Q)) ⊆ V(g(Q))`.
pub fn check_refinement(
    fine: &NormalPair,
    coarse: &NormalPair,
    w: &RefinementWitness,
) -> std::result::Result<(), String> {
    if w.f.len() != fine.td.n_nodes() || w.g.len() != fine.parts.len() {
        return Err("witness maps have the wrong domain size".into());
    }
    for (s, &x) in w.f.iter().enumerate() {
        if x >= coarse.td.n_nodes() || !fine.td.bags[s].is_subset(&coarse.td.bags[x]) {
            return Err(format!("(r1) fails at node {s}"));
        }
    }
    for (q, &p) in w.g.iter().enumerate() {
        if p >= coarse.parts.len() || fine.parts[q].iter().any(|&s| !coarse.parts[p].contains(&w.f[s])) {
            return Err(format!("(r2) fails at part {q}"));
        }
    }
    Ok(())
}

/// Bag-size profile `(n_{|V|}, …, n_0)`; compared lexicographically.
pub fn potential(td: &TreeDecomposition, n_vertices: usize) -> Vec<usize> {
    let mut counts = vec![0; n_vertices + 1];
    for b in &td.bags {
        counts[n_vertices - b.len().min(n_vertices)] += 1;
    }
    counts
}

#[derive(Clone, Debug)]
pub struct NaturalRefinement {
    pub pair: NormalPair,
    pub witness: RefinementWitness,
    /// Potential before every split and after the last one.
    pub potentials: Vec<Vec<usize>>,
}

/// Refines `pair` into a normal pair whose decomposition is natural, then
/// merges adjacent parts with the same image until no merge applies.
pub fn make_natural(g: &Graph, pair: &NormalPair) -> Result<NaturalRefinement> {
    make_natural_on(g, &g.vertex_set(), pair)
}

/// [`make_natural`] for the induced subgraph `g[within]`.
pub fn make_natural_on(g: &Graph, within: &VertexSet, pair: &NormalPair) -> Result<NaturalRefinement> {
    if !crate::graph::is_connected_set(g, within) {
        return Err(Error::Disconnected);
    }
    ensure_valid_td(g, within, &pair.td)?;
    pair.check_parts().map_err(Error::InvalidDecomposition)?;

    let mut cur = pair.clone();
    let mut witness = RefinementWitness::identity(pair);
    let mut potentials = vec![potential(&cur.td, within.len())];
    while let Some((x, y)) = find_unnatural_edge(g, &cur.td) {
        let (next, step) = split_side(g, &cur, x, y);
        witness = step.then(&witness);
        cur = next;
        let pot = potential(&cur.td, within.len());
        if pot >= *potentials.last().unwrap() {
            return Err(Error::Internal("split did not decrease the potential".into()));
        }
        potentials.push(pot);
    }
    let (cur, witness) = merge_equal_image_parts(cur, witness);
    Ok(NaturalRefinement {
        pair: cur,
        witness,
        potentials,
    })
}

/// One split: the `x`-side of `xy` is duplicated once per component of the
/// graph induced by its bag union, each copy intersected with its component.
fn split_side(g: &Graph, pair: &NormalPair, x: Node, y: Node) -> (NormalPair, RefinementWitness) {
    let td = &pair.td;
    let side_x = td.tree.side(x, y);
    let comps = components_within(g, &td.union_of(side_x.iter().copied()));

    let mut f = Vec::new();
    let mut bags = Vec::new();
    let mut id_y = BTreeMap::new();
    for s in (0..td.n_nodes()).filter(|s| !side_x.contains(s)) {
        id_y.insert(s, f.len());
        f.push(s);
        bags.push(td.bags[s].clone());
    }
    let mut id_copy: Vec<BTreeMap<Node, Node>> = Vec::new();
    for comp in &comps {
        let mut ids = BTreeMap::new();
        for &s in &side_x {
            ids.insert(s, f.len());
            f.push(s);
            bags.push(td.bags[s].intersection(comp).copied().collect());
        }
        id_copy.push(ids);
    }
    let mut edges = Vec::new();
    for (a, b) in td.tree.edges() {
        match (side_x.contains(&a), side_x.contains(&b)) {
            (false, false) => edges.push((id_y[&a], id_y[&b])),
            (true, true) => edges.extend(id_copy.iter().map(|ids| (ids[&a], ids[&b]))),
            _ => {}
        }
    }
    edges.extend(id_copy.iter().map(|ids| (ids[&x], id_y[&y])));
    let tree = Tree::new(f.len(), &edges).expect("split keeps a tree");

    let mut parts = Vec::new();
    let mut gmap = Vec::new();
    for (qi, q) in pair.parts.iter().enumerate() {
        if q.iter().any(|s| !side_x.contains(s)) {
            let mut nq: NodeSet = q.iter().filter_map(|s| id_y.get(s).copied()).collect();
            for ids in &id_copy {
                nq.extend(q.iter().filter_map(|s| ids.get(s).copied()));
            }
            parts.push(nq);
            gmap.push(qi);
        } else {
            for ids in &id_copy {
                parts.push(q.iter().map(|s| ids[s]).collect());
                gmap.push(qi);
            }
        }
    }
    let next = NormalPair {
        td: TreeDecomposition { tree, bags },
        parts,
    };
    (next, RefinementWitness { f, g: gmap })
}

/// Merges tree-adjacent parts with equal `g`-image until a fixpoint.
fn merge_equal_image_parts(
    mut pair: NormalPair,
    mut witness: RefinementWitness,
) -> (NormalPair, RefinementWitness) {
    'outer: loop {
        let owner = pair.part_of_nodes();
        for (a, b) in pair.td.tree.edges() {
            let (qa, qb) = (owner[a], owner[b]);
            if qa != qb && witness.g[qa] == witness.g[qb] {
                let (keep, drop) = (qa.min(qb), qa.max(qb));
                let moved = pair.parts.remove(drop);
                pair.parts[keep].extend(moved);
                witness.g.remove(drop);
                continue 'outer;
            }
        }
        return (pair, witness);
    }
}
