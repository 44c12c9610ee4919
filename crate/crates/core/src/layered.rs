//! Layerings and layered RS-decompositions: a tree decomposition whose
//! bags carry an apex set plus a tree decomposition and a layering of the
//! bag's torso minus the apices.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::decomposition::{validate_td_on, Node, NodeSet, NormalPair, RootedTree, Tree, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{components_within, torso, Graph, Vertex, VertexSet};

/// Disjoint layers `L_0, L_1, …`; trailing empty layers are trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Layering {
    layers: Vec<VertexSet>,
    layer_of: BTreeMap<Vertex, usize>,
}

impl Layering {
    pub fn new(mut layers: Vec<VertexSet>) -> Result<Self> {
        while layers.last().is_some_and(|l| l.is_empty()) {
            layers.pop();
        }
        let mut layer_of = BTreeMap::new();
        for (i, layer) in layers.iter().enumerate() {
            for &v in layer {
                if let Some(j) = layer_of.insert(v, i) {
                    return Err(Error::InvalidLrs(format!(
                        "vertex {v} lies in layers {j} and {i}"
                    )));
                }
            }
        }
        Ok(Layering { layers, layer_of })
    }

    pub fn layers(&self) -> &[VertexSet] {
        &self.layers
    }

    pub fn layer_of(&self, v: Vertex) -> Option<usize> {
        self.layer_of.get(&v).copied()
    }

    pub fn covered(&self) -> VertexSet {
        self.layer_of.keys().copied().collect()
    }

    pub fn layer(&self, i: usize) -> VertexSet {
        self.layers.get(i).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayeringViolation {
    Uncovered(Vertex),
    Foreign(Vertex),
    Edge(Vertex, Vertex),
}

impl fmt::Display for LayeringViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayeringViolation::Uncovered(v) => write!(f, "vertex {v} is in no layer"),
            LayeringViolation::Foreign(v) => write!(f, "layered vertex {v} is outside the graph"),
            LayeringViolation::Edge(u, v) => write!(f, "edge {u}-{v} skips a layer"),
        }
    }
}

pub fn validate_layering(g: &Graph, l: &Layering) -> std::result::Result<(), LayeringViolation> {
    validate_layering_on(g, &g.vertex_set(), l)
}

/// Checks `l` as a layering of `g[within]`: it covers exactly `within` and
/// every edge joins equal or consecutive layers.
pub fn validate_layering_on(
    g: &Graph,
    within: &VertexSet,
    l: &Layering,
) -> std::result::Result<(), LayeringViolation> {
    if let Some(&v) = l.layer_of.keys().find(|v| !within.contains(v)) {
        return Err(LayeringViolation::Foreign(v));
    }
    if let Some(&v) = within.iter().find(|v| !l.layer_of.contains_key(v)) {
        return Err(LayeringViolation::Uncovered(v));
    }
    for &u in within {
        for &v in g.neighbors(u).range(u + 1..) {
            if within.contains(&v) && l.layer_of[&u].abs_diff(l.layer_of[&v]) > 1 {
                return Err(LayeringViolation::Edge(u, v));
            }
        }
    }
    Ok(())
}

pub fn bfs_layering(g: &Graph, roots: &VertexSet) -> Layering {
    bfs_layering_on(g, &g.vertex_set(), roots)
}

/// BFS distance layers of `g[within]` from `roots`; a component holding no
/// root is layered from its smallest vertex.
pub fn bfs_layering_on(g: &Graph, within: &VertexSet, roots: &VertexSet) -> Layering {
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::new();
    for comp in components_within(g, within) {
        let mut starts: Vec<Vertex> = comp.intersection(roots).copied().collect();
        if starts.is_empty() {
            starts.push(*comp.iter().next().unwrap());
        }
        let mut queue = VecDeque::new();
        for s in starts {
            dist.insert(s, 0);
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for &v in g.neighbors(u) {
                if comp.contains(&v) && !dist.contains_key(&v) {
                    dist.insert(v, du + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    let depth = dist.values().copied().max().map_or(0, |d| d + 1);
    let mut layers = vec![VertexSet::new(); depth];
    for (v, d) in dist {
        layers[d].insert(v);
    }
    Layering::new(layers).expect("BFS layers are disjoint")
}

/// Per-node data of a layered RS-decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrsNode {
    pub bag: VertexSet,
    pub apex: VertexSet,
    /// Tree decomposition of `torso(G, bag) − apex`.
    pub td: TreeDecomposition,
    /// Layering of `torso(G, bag) − apex`.
    pub layering: Layering,
}

impl LrsNode {
    /// `bag ∖ apex`, the vertex set of the torso part.
    pub fn torso_vertices(&self) -> VertexSet {
        self.bag.difference(&self.apex).copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredRsDecomposition {
    pub c: usize,
    pub tree: Tree,
    pub root: Node,
    pub nodes: Vec<LrsNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LrsViolation {
    Outer(String),
    Adhesion {
        edge: (Node, Node),
        size: usize,
    },
    Apex {
        node: Node,
        reason: String,
    },
    TorsoDecomposition {
        node: Node,
        reason: String,
    },
    TorsoLayering {
        node: Node,
        reason: String,
    },
    LayerWidth {
        node: Node,
        bag: Node,
        layer: usize,
        size: usize,
    },
}

impl fmt::Display for LrsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LrsViolation::Outer(r) => write!(f, "outer decomposition: {r}"),
            LrsViolation::Adhesion { edge, size } => {
                write!(f, "adhesion of {}-{} has size {size}", edge.0, edge.1)
            }
            LrsViolation::Apex { node, reason } => write!(f, "apex set of node {node}: {reason}"),
            LrsViolation::TorsoDecomposition { node, reason } => {
                write!(f, "torso decomposition of node {node}: {reason}")
            }
            LrsViolation::TorsoLayering { node, reason } => {
                write!(f, "torso layering of node {node}: {reason}")
            }
            LrsViolation::LayerWidth {
                node,
                bag,
                layer,
                size,
            } => write!(f, "node {node}: bag {bag} meets layer {layer} in {size} vertices"),
        }
    }
}

impl LayeredRsDecomposition {
    pub fn outer_td(&self) -> TreeDecomposition {
        TreeDecomposition {
            tree: self.tree.clone(),
            bags: self.nodes.iter().map(|x| x.bag.clone()).collect(),
        }
    }

    pub fn rooted(&self) -> RootedTree {
        RootedTree::new(&self.tree, self.root)
    }

    /// The node closest to the root whose bag contains `v`.
    pub fn home_node(&self, rooted: &RootedTree, v: Vertex) -> Option<Node> {
        rooted
            .bfs_order()
            .iter()
            .copied()
            .find(|&x| self.nodes[x].bag.contains(&v))
    }

    /// Largest `|D_{x,z} ∩ L_{x,i}|` over all nodes, bags and layers.
    pub fn layered_width(&self) -> usize {
        let mut best = 0;
        for x in &self.nodes {
            for bag in &x.td.bags {
                let mut per_layer: BTreeMap<usize, usize> = BTreeMap::new();
                for &v in bag {
                    if let Some(i) = x.layering.layer_of(v) {
                        *per_layer.entry(i).or_default() += 1;
                    }
                }
                best = best.max(per_layer.values().copied().max().unwrap_or(0));
            }
        }
        best
    }
}

/// Checks every defining condition; an empty list means valid.
pub fn validate_lrs(g: &Graph, lrs: &LayeredRsDecomposition) -> Vec<LrsViolation> {
    let mut out = Vec::new();
    if lrs.nodes.len() != lrs.tree.n() || lrs.root >= lrs.tree.n() {
        out.push(LrsViolation::Outer("node data does not match the tree".into()));
        return out;
    }
    let outer = lrs.outer_td();
    for v in validate_td_on(g, &g.vertex_set(), &outer) {
        out.push(LrsViolation::Outer(v.to_string()));
    }
    for ((a, b), adh) in outer.adhesions() {
        if adh.len() > lrs.c {
            out.push(LrsViolation::Adhesion {
                edge: (a, b),
                size: adh.len(),
            });
        }
    }
    for (x, node) in lrs.nodes.iter().enumerate() {
        if !node.apex.is_subset(&node.bag) {
            out.push(LrsViolation::Apex {
                node: x,
                reason: "not contained in the bag".into(),
            });
        }
        if node.apex.len() > lrs.c {
            out.push(LrsViolation::Apex {
                node: x,
                reason: format!("{} apices exceed c = {}", node.apex.len(), lrs.c),
            });
        }
        if node.bag.iter().any(|&v| v >= g.n()) {
            continue;
        }
        let h = torso(g, &node.bag);
        let within = node.torso_vertices();
        for v in validate_td_on(&h, &within, &node.td) {
            out.push(LrsViolation::TorsoDecomposition {
                node: x,
                reason: v.to_string(),
            });
        }
        if let Err(v) = validate_layering_on(&h, &within, &node.layering) {
            out.push(LrsViolation::TorsoLayering {
                node: x,
                reason: v.to_string(),
            });
        }
        for (z, bag) in node.td.bags.iter().enumerate() {
            let mut per_layer: BTreeMap<usize, usize> = BTreeMap::new();
            for &v in bag {
                if let Some(i) = node.layering.layer_of(v) {
                    *per_layer.entry(i).or_default() += 1;
                }
            }
            for (layer, size) in per_layer {
                if size > lrs.c {
                    out.push(LrsViolation::LayerWidth {
                        node: x,
                        bag: z,
                        layer,
                        size,
                    });
                }
            }
        }
    }
    out
}

pub fn ensure_valid_lrs(g: &Graph, lrs: &LayeredRsDecomposition) -> Result<()> {
    match validate_lrs(g, lrs).first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidLrs(v.to_string())),
    }
}

/// Single-node decomposition from a tree decomposition and a layering of the
/// whole graph, with no apices.
pub fn lrs_from_layered_td(
    g: &Graph,
    td: TreeDecomposition,
    layering: Layering,
    c: usize,
) -> Result<LayeredRsDecomposition> {
    let lrs = LayeredRsDecomposition {
        c,
        tree: Tree::single(),
        root: 0,
        nodes: vec![LrsNode {
            bag: g.vertex_set(),
            apex: VertexSet::new(),
            td,
            layering,
        }],
    };
    ensure_valid_lrs(g, &lrs)?;
    Ok(lrs)
}

/// Turns a tree decomposition of `g` into a decomposition with one node per
/// bag: each node keeps its bag whole (minus `apex[x]`) as a single torso bag
/// and layers it by BFS in the torso. `c` is the smallest value that makes the
/// result valid.
pub fn lrs_from_td(
    g: &Graph,
    td: &TreeDecomposition,
    root: Node,
    apex: &[VertexSet],
) -> Result<LayeredRsDecomposition> {
    let mut nodes = Vec::new();
    for (x, bag) in td.bags.iter().enumerate() {
        let a = apex.get(x).cloned().unwrap_or_default();
        let rest: VertexSet = bag.difference(&a).copied().collect();
        let h = torso(g, bag);
        let layering = bfs_layering_on(&h, &rest, &VertexSet::new());
        nodes.push(LrsNode {
            bag: bag.clone(),
            apex: a,
            td: TreeDecomposition {
                tree: Tree::single(),
                bags: vec![rest],
            },
            layering,
        });
    }
    let mut lrs = LayeredRsDecomposition {
        c: 0,
        tree: td.tree.clone(),
        root,
        nodes,
    };
    let adhesion = td.adhesions().iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let apices = lrs.nodes.iter().map(|x| x.apex.len()).max().unwrap_or(0);
    lrs.c = adhesion.max(apices).max(lrs.layered_width()).max(1);
    ensure_valid_lrs(g, &lrs)?;
    Ok(lrs)
}

/// A `rows × cols` grid (vertex `(i, j)` is `i * cols + j`) with its
/// layered decomposition of width 2: rows are layers, bags are pairs of
/// consecutive columns.
pub fn grid_instance(rows: usize, cols: usize) -> Result<(Graph, LayeredRsDecomposition)> {
    if rows == 0 || cols == 0 {
        return Err(Error::Format("grid needs at least one row and one column".into()));
    }
    let g = Graph::grid(rows, cols);
    let column = |j: usize| (0..rows).map(move |i| i * cols + j);
    let bags: Vec<VertexSet> = if cols == 1 {
        vec![column(0).collect()]
    } else {
        (0..cols - 1)
            .map(|j| column(j).chain(column(j + 1)).collect())
            .collect()
    };
    let td = TreeDecomposition::new(Tree::path(bags.len())?, bags)?;
    let layers = (0..rows)
        .map(|i| (0..cols).map(|j| i * cols + j).collect())
        .collect();
    let lrs = lrs_from_layered_td(&g, td, Layering::new(layers)?, 2)?;
    Ok((g, lrs))
}

/// The glued decomposition of an induced subgraph and its bookkeeping.
#[derive(Clone, Debug)]
pub struct GluedPair {
    pub pair: NormalPair,
    /// `(x, z)` for every glued node: outer node and torso-decomposition node.
    pub origin: Vec<(Node, Node)>,
}

/// Glues the torso decompositions along the outer tree into one tree
/// decomposition of `g[v0]`, adding each node's apices to all of its bags and
/// intersecting every bag with `v0`. Part `x` of the returned pair consists
/// of the glued copies of node `x`'s torso decomposition.
///
/// For every outer edge `xy` the joining bags are the smallest-id torso bags
/// holding the adhesion minus the respective apex set.
pub fn glue_to_normal_pair(lrs: &LayeredRsDecomposition, v0: &VertexSet) -> Result<GluedPair> {
    let mut origin = Vec::new();
    let mut ids: Vec<Vec<Node>> = Vec::new();
    for (x, node) in lrs.nodes.iter().enumerate() {
        ids.push((0..node.td.n_nodes()).map(|z| origin.len() + z).collect());
        origin.extend((0..node.td.n_nodes()).map(|z| (x, z)));
    }
    let mut edges = Vec::new();
    for (x, node) in lrs.nodes.iter().enumerate() {
        edges.extend(
            node.td
                .tree
                .edges()
                .into_iter()
                .map(|(a, b)| (ids[x][a], ids[x][b])),
        );
    }
    for (x, y) in lrs.tree.edges() {
        let adh: VertexSet = lrs.nodes[x]
            .bag
            .intersection(&lrs.nodes[y].bag)
            .copied()
            .collect();
        let zx = joining_bag(&lrs.nodes[x], &adh).ok_or_else(|| {
            Error::InvalidLrs(format!("no torso bag of node {x} holds its adhesion with {y}"))
        })?;
        let zy = joining_bag(&lrs.nodes[y], &adh).ok_or_else(|| {
            Error::InvalidLrs(format!("no torso bag of node {y} holds its adhesion with {x}"))
        })?;
        edges.push((ids[x][zx], ids[y][zy]));
    }
    let tree = Tree::new(origin.len(), &edges)?;
    let bags = origin
        .iter()
        .map(|&(x, z)| {
            let node = &lrs.nodes[x];
            node.td.bags[z]
                .union(&node.apex)
                .filter(|v| v0.contains(v))
                .copied()
                .collect()
        })
        .collect();
    let parts = ids
        .iter()
        .map(|v| v.iter().copied().collect::<NodeSet>())
        .collect();
    let pair = NormalPair::new(TreeDecomposition::new(tree, bags)?, parts)?;
    Ok(GluedPair { pair, origin })
}

fn joining_bag(node: &LrsNode, adhesion: &VertexSet) -> Option<Node> {
    let need: VertexSet = adhesion.difference(&node.apex).copied().collect();
    (0..node.td.n_nodes()).find(|&z| need.is_subset(&node.td.bags[z]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_td;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn layering(layers: &[&[usize]]) -> Layering {
        Layering::new(layers.iter().map(|l| set(l)).collect()).unwrap()
    }

    #[test]
    fn layering_examples() {
        let p3 = Graph::path(3);
        assert!(validate_layering(&p3, &bfs_layering(&p3, &set(&[0]))).is_ok());
        assert!(validate_layering(&p3, &layering(&[&[0, 2], &[1]])).is_ok());
        assert_eq!(
            validate_layering(&p3, &layering(&[&[0], &[], &[2], &[1]])),
            Err(LayeringViolation::Edge(0, 1))
        );
        assert_eq!(
            validate_layering(&p3, &layering(&[&[0], &[1]])),
            Err(LayeringViolation::Uncovered(2))
        );
        assert!(Layering::new(vec![set(&[0]), set(&[0])]).is_err());
        assert_eq!(layering(&[&[0], &[]]).layers().len(), 1);
    }

    #[test]
    fn bfs_layering_examples() {
        assert_eq!(
            bfs_layering(&Graph::path(3), &set(&[0])),
            layering(&[&[0], &[1], &[2]])
        );
        assert_eq!(
            bfs_layering(&Graph::cycle(4), &set(&[0])),
            layering(&[&[0], &[1, 3], &[2]])
        );
        assert_eq!(bfs_layering(&Graph::new(1), &set(&[0])), layering(&[&[0]]));
        assert_eq!(
            bfs_layering(&Graph::new(2), &VertexSet::new()),
            layering(&[&[0, 1]])
        );
    }

    #[test]
    fn grid_instances_validate() {
        let (g, lrs) = grid_instance(2, 2).unwrap();
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 3), (3, 2), (2, 0)]).unwrap();
        assert_eq!(g, c4);
        assert_eq!(lrs.nodes[0].td.n_nodes(), 1);

        let (g, lrs) = grid_instance(3, 3).unwrap();
        assert_eq!((g.n(), g.m()), (9, 12));
        assert!(validate_lrs(&g, &lrs).is_empty());
        assert_eq!(lrs.layered_width(), 2);

        let (g, lrs) = grid_instance(1, 5).unwrap();
        assert_eq!(g, Graph::path(5));
        assert!(validate_lrs(&g, &lrs).is_empty());
        assert_eq!(lrs.nodes[0].td.width(), 1);

        for rows in 1..=8 {
            for cols in 1..=8 {
                let (g, lrs) = grid_instance(rows, cols).unwrap();
                assert!(validate_lrs(&g, &lrs).is_empty(), "{rows}x{cols}");
            }
        }
    }

    #[test]
    fn lrs_layer_width_violation() {
        let (g, mut lrs) = grid_instance(3, 3).unwrap();
        lrs.c = 1;
        let v = validate_lrs(&g, &lrs);
        assert!(v.iter().any(|x| matches!(x, LrsViolation::LayerWidth { .. })));
    }

    #[test]
    fn path_lrs_has_width_one() {
        let g = Graph::path(5);
        let bags: Vec<VertexSet> = (0..5).map(|v| set(&[v])).collect();
        let bags = [bags, (0..4).map(|v| set(&[v, v + 1])).collect()].concat();
        // unit bags hang off the edge bags: bag 5 + j = {j, j+1}
        let mut edges: Vec<(usize, usize)> = (5..8).map(|b| (b, b + 1)).collect();
        edges.extend((0..5).map(|v| (v, 5 + v.min(3))));
        let td = TreeDecomposition::new(Tree::new(9, &edges).unwrap(), bags).unwrap();
        assert!(validate_td(&g, &td).is_empty());
        let lrs = lrs_from_layered_td(&g, td, bfs_layering(&g, &set(&[0])), 1).unwrap();
        assert_eq!(lrs.layered_width(), 1);

        let k1 = Graph::new(1);
        assert!(lrs_from_layered_td(&k1, TreeDecomposition::trivial(&k1), layering(&[&[0]]), 1).is_ok());
    }

    #[test]
    fn glue_single_node_adds_apices() {
        // K1,3 with center 0 as apex; the torso minus the apex is edgeless
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let tree = Tree::path(3).unwrap();
        let td = TreeDecomposition::new(tree, vec![set(&[1]), set(&[2]), set(&[3])]).unwrap();
        let lrs = LayeredRsDecomposition {
            c: 1,
            tree: Tree::single(),
            root: 0,
            nodes: vec![LrsNode {
                bag: g.vertex_set(),
                apex: set(&[0]),
                td,
                layering: layering(&[&[1, 2, 3]]),
            }],
        };
        assert!(validate_lrs(&g, &lrs).is_empty());
        let glued = glue_to_normal_pair(&lrs, &g.vertex_set()).unwrap();
        assert_eq!(glued.pair.td.bags, vec![set(&[0, 1]), set(&[0, 2]), set(&[0, 3])]);
        assert_eq!(glued.pair.parts, vec![set(&[0, 1, 2])]);
        assert!(validate_td(&g, &glued.pair.td).is_empty());
        assert!(glued.pair.td.width() <= lrs.nodes[0].td.width() + 1);
    }

    #[test]
    fn glue_two_nodes_over_p4() {
        let g = Graph::path(4);
        let outer =
            TreeDecomposition::new(Tree::path(2).unwrap(), vec![set(&[0, 1, 2]), set(&[1, 2, 3])]).unwrap();
        let node = |bag: &[usize], tdbags: Vec<VertexSet>, layers: &[&[usize]]| LrsNode {
            bag: set(bag),
            apex: VertexSet::new(),
            td: TreeDecomposition::new(Tree::path(tdbags.len()).unwrap(), tdbags).unwrap(),
            layering: layering(layers),
        };
        let lrs = LayeredRsDecomposition {
            c: 2,
            tree: outer.tree.clone(),
            root: 0,
            nodes: vec![
                node(&[0, 1, 2], vec![set(&[0, 1]), set(&[1, 2])], &[&[0], &[1], &[2]]),
                node(&[1, 2, 3], vec![set(&[1, 2]), set(&[2, 3])], &[&[1], &[2], &[3]]),
            ],
        };
        assert!(validate_lrs(&g, &lrs).is_empty());
        let glued = glue_to_normal_pair(&lrs, &g.vertex_set()).unwrap();
        assert!(validate_td(&g, &glued.pair.td).is_empty());
        assert_eq!(glued.origin, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        // {1,2} of the first node is joined to {1,2} of the second
        assert!(glued.pair.td.tree.has_edge(1, 2));
        assert_eq!(glued.pair.parts, vec![set(&[0, 1]), set(&[2, 3])]);

        let sub = set(&[1, 2, 3]);
        let glued = glue_to_normal_pair(&lrs, &sub).unwrap();
        assert!(crate::decomposition::validate_td_on(&g, &sub, &glued.pair.td).is_empty());
        assert_eq!(glued.pair.td.bags[0], set(&[1]));
    }

    #[test]
    fn lrs_from_td_is_valid() {
        let g = Graph::cycle(5);
        let bags = vec![set(&[0, 1, 4]), set(&[1, 3, 4]), set(&[1, 2, 3])];
        let td = TreeDecomposition::new(Tree::path(3).unwrap(), bags).unwrap();
        let lrs = lrs_from_td(&g, &td, 0, &[set(&[0]), VertexSet::new(), set(&[2])]).unwrap();
        assert!(validate_lrs(&g, &lrs).is_empty());
        assert!(lrs.c <= 3);
        let glued = glue_to_normal_pair(&lrs, &g.vertex_set()).unwrap();
        assert!(validate_td(&g, &glued.pair.td).is_empty());
    }
}
