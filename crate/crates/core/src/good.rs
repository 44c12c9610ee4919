//! The layer coloring φ of a layered RS-decomposition and the witnesses
//! `(Z, ψ)` showing it is good for a given subgraph, family and `d`.
//!
//! A witness for an induced subgraph `G0` and a family of connected
//! subgraphs with no `d + 1` pairwise disjoint members satisfies:
//!
//! * (pc1) every member meets `Z`;
//! * (pc2) every connected `H ⊆ G0` meeting `Z` either sees more than `p`
//!   colors of φ or `V(H) ∩ Z` has a `(φ × ψ)`-center;
//! * (pc3) for every component `C` of `G0 − Z`, `N(V(C))` meets at most two
//!   components of `G0 − V(C)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centered::{has_center, random_connected_set_within, Color, Coloring, Verification, VerifyMode};
use crate::decomposition::{
    helly_hitting_or_packing, lca_closure, make_natural_on, parts_hit, FamilyOracle, HellyOutcome, Node,
    NodeSet, NormalPair, RootedTree,
};
use crate::error::{check_bound, Error, Result};
use crate::graph::{components_within, visit_connected_sets, Graph, Vertex, VertexSet, Visit};
use crate::layered::{glue_to_normal_pair, LayeredRsDecomposition};

/// φ: apices of a vertex's home node get 0, every other vertex its layer
/// index in the home node's torso layering modulo `p + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiColoring {
    pub values: Vec<Color>,
    pub p: usize,
}

impl PhiColoring {
    pub fn as_coloring(&self) -> Coloring {
        Coloring::new(self.values.clone())
    }
}

pub fn phi_from_lrs(g: &Graph, lrs: &LayeredRsDecomposition, p: usize) -> Result<PhiColoring> {
    let rooted = lrs.rooted();
    let mut values = Vec::with_capacity(g.n());
    for v in g.vertices() {
        let x = lrs
            .home_node(&rooted, v)
            .ok_or_else(|| Error::InvalidLrs(format!("vertex {v} lies in no bag")))?;
        let node = &lrs.nodes[x];
        if node.apex.contains(&v) {
            values.push(0);
            continue;
        }
        let layer = node.layering.layer_of(v).ok_or_else(|| {
            Error::InvalidLrs(format!("vertex {v} is neither an apex nor layered at node {x}"))
        })?;
        values.push(layer % (p + 1));
    }
    Ok(PhiColoring { values, p })
}

/// `(π(Q, v), Π(Q, v))`: a node of part `q` and a vertex set separating the
/// part's bags from `v`. When the occurrence subtree of `v` meets the part,
/// `π` is the smallest shared node and `Π = {v}`; otherwise `π` is the part's
/// end `z` of a shortest tree path to the occurrence subtree, `y` the next
/// node on it, and `Π = V_y ∩ V_z`. `None` when `v` lies in no bag.
pub fn projection(pair: &NormalPair, q: usize, v: Vertex) -> Option<(Node, VertexSet)> {
    let td = &pair.td;
    let occ = td.occurrence(v);
    if occ.is_empty() {
        return None;
    }
    let part = &pair.parts[q];
    if let Some(&z) = part.intersection(&occ).next() {
        return Some((z, VertexSet::from([v])));
    }
    // multi-source BFS from the part; `prev` points back towards it
    let mut prev: Vec<Option<Node>> = vec![None; td.n_nodes()];
    let mut seen = vec![false; td.n_nodes()];
    let mut queue: VecDeque<Node> = part.iter().copied().collect();
    for &z in part {
        seen[z] = true;
    }
    while let Some(a) = queue.pop_front() {
        if occ.contains(&a) {
            let mut y = a;
            let mut z = prev[a].expect("occurrence is outside the part");
            while !part.contains(&z) {
                y = z;
                z = prev[z].expect("path leads back to the part");
            }
            let pi = td.bags[y].intersection(&td.bags[z]).copied().collect();
            return Some((z, pi));
        }
        for &b in td.tree.neighbors(a) {
            if !seen[b] {
                seen[b] = true;
                prev[b] = Some(a);
                queue.push_back(b);
            }
        }
    }
    None
}

/// Per-part bookkeeping for a part in `Q(X1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartAudit {
    pub part: usize,
    /// `x(Q)`: the outer decomposition node the part comes from.
    pub x: Node,
    /// Apices of `x(Q)` plus its adhesion with its parent, within the component.
    pub v_q: VertexSet,
    pub y_q: NodeSet,
    pub b_q: VertexSet,
}

/// Everything computed for one component of `G0`.
#[derive(Clone, Debug)]
pub struct ComponentAudit {
    pub component: VertexSet,
    /// The natural normal pair `(S, Q)`; `S` is rooted at node 0.
    pub pair: NormalPair,
    /// `x(Q)` for every part.
    pub x_of_part: Vec<Node>,
    pub x0: NodeSet,
    pub x1: NodeSet,
    pub x2: NodeSet,
    pub x3: NodeSet,
    pub parts: Vec<PartAudit>,
    pub z: VertexSet,
    pub b: VertexSet,
    pub blocks: Vec<VertexSet>,
}

#[derive(Clone, Debug)]
pub struct GoodnessWitness {
    pub z: VertexSet,
    /// Colors start at 1 in every component.
    pub psi: BTreeMap<Vertex, Color>,
    pub b: VertexSet,
    pub blocks: Vec<VertexSet>,
    pub components: Vec<ComponentAudit>,
}

impl GoodnessWitness {
    pub fn palette_size(&self) -> usize {
        self.psi.values().collect::<BTreeSet<_>>().len()
    }
}

#[derive(Clone, Debug)]
pub enum GoodOutcome {
    Witness(GoodnessWitness),
    /// `d + 1` pairwise disjoint members of the family.
    Packing(Vec<VertexSet>),
}

/// Size limits asserted along the construction, for width `c` and `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoodBounds {
    pub x1: usize,
    pub x3: usize,
    pub b: usize,
    pub block: usize,
    pub palette: usize,
}

impl GoodBounds {
    pub fn new(c: usize, d: usize) -> Self {
        GoodBounds {
            x1: (2 * d).saturating_sub(1),
            x3: (8 * c + 8) * d,
            b: c * (4 * c + 2) * d,
            block: c * (8 * c + 8) * d,
            palette: c * (12 * c + 10) * d,
        }
    }
}

/// Builds `(Z, ψ)` for `g[v0]` and `family`, or returns `d + 1` pairwise
/// disjoint members. Runs independently on every component of `g[v0]`; the
/// family is queried inside each component, so a packing found in one
/// component is returned as is. The LRS is assumed valid for `g`.
pub fn good_witness(
    g: &Graph,
    lrs: &LayeredRsDecomposition,
    v0: &VertexSet,
    family: &dyn FamilyOracle,
    d: usize,
) -> Result<GoodOutcome> {
    let mut witness = GoodnessWitness {
        z: VertexSet::new(),
        psi: BTreeMap::new(),
        b: VertexSet::new(),
        blocks: Vec::new(),
        components: Vec::new(),
    };
    for comp in components_within(g, v0) {
        match component_witness(g, lrs, comp, family, d)? {
            Err(packing) => return Ok(GoodOutcome::Packing(packing)),
            Ok(None) => {}
            Ok(Some((audit, psi))) => {
                witness.z.extend(audit.z.iter().copied());
                witness.b.extend(audit.b.iter().copied());
                witness.blocks.extend(audit.blocks.iter().cloned());
                witness.psi.extend(psi);
                witness.components.push(audit);
            }
        }
    }
    Ok(GoodOutcome::Witness(witness))
}

type ComponentResult = std::result::Result<Option<(ComponentAudit, BTreeMap<Vertex, Color>)>, Vec<VertexSet>>;

fn component_witness(
    g: &Graph,
    lrs: &LayeredRsDecomposition,
    comp: VertexSet,
    family: &dyn FamilyOracle,
    d: usize,
) -> Result<ComponentResult> {
    let c = lrs.c;
    let bounds = GoodBounds::new(c, d);
    let glued = glue_to_normal_pair(lrs, &comp)?;
    let nat = make_natural_on(g, &comp, &glued.pair)?;
    let pair = nat.pair;
    let x_of_part = nat.witness.g.clone();
    let td = &pair.td;
    let s = RootedTree::new(&td.tree, 0);
    let outer = lrs.rooted();

    let x0 = match helly_hitting_or_packing(td, &s, family, d)? {
        HellyOutcome::Packing(p) => return Ok(Err(p)),
        HellyOutcome::Hitting(h) => h,
    };
    if x0.is_empty() {
        return Ok(Ok(None));
    }
    check_small_adhesions(&pair, c)?;
    check_small_layer_traces(&pair, lrs)?;

    let x1 = lca_closure(&s, &x0)?;
    check_bound("|X1| <= 2d-1", x1.len(), bounds.x1)?;
    let q1 = parts_hit(&pair, &x1);

    let part_root = |q: usize| s.top_of(&pair.parts[q]).expect("parts are nonempty");
    let mut parts = Vec::new();
    for &q in &q1 {
        let x = x_of_part[q];
        let mut v_q: VertexSet = lrs.nodes[x].apex.clone();
        if let Some(px) = outer.parent(x) {
            v_q.extend(lrs.nodes[x].bag.intersection(&lrs.nodes[px].bag).copied());
        }
        v_q.retain(|v| comp.contains(v));
        let mut y_q = NodeSet::new();
        let mut b_q = VertexSet::new();
        for &v in &v_q {
            let (z, pi) = projection(&pair, q, v)
                .ok_or_else(|| Error::Internal(format!("vertex {v} of the component lies in no bag")))?;
            y_q.insert(z);
            b_q.extend(pi);
        }
        parts.push(PartAudit {
            part: q,
            x,
            v_q,
            y_q,
            b_q,
        });
    }

    let mut x2 = x1.clone();
    for pa in &parts {
        x2.insert(part_root(pa.part));
        x2.extend(pa.y_q.iter().copied());
    }
    let x3 = lca_closure(&s, &x2)?;
    check_bound("|X3| <= (8c+8)d", x3.len(), bounds.x3)?;
    if parts_hit(&pair, &x3) != q1 {
        return Err(Error::Internal("LCA closure reached a new part".into()));
    }
    let z = td.union_of(x3.iter().copied());

    let mut b = VertexSet::new();
    for pa in &parts {
        let r = part_root(pa.part);
        if let Some(pr) = s.parent(r) {
            b.extend(td.bags[r].intersection(&td.bags[pr]).copied());
        }
        b.extend(pa.b_q.iter().copied());
    }
    check_bound("|B| <= c(4c+2)d", b.len(), bounds.b)?;
    if !b.is_subset(&z) {
        return Err(Error::Internal("B is not contained in Z".into()));
    }

    let rest: VertexSet = z.difference(&b).copied().collect();
    let mut keyed: BTreeMap<(usize, usize), VertexSet> = BTreeMap::new();
    for pa in &parts {
        let region = td.union_of(pair.parts[pa.part].iter().copied());
        let layering = &lrs.nodes[pa.x].layering;
        for &u in region.intersection(&rest) {
            let i = layering.layer_of(u).ok_or_else(|| {
                Error::Internal(format!("vertex {u} outside B is not layered at node {}", pa.x))
            })?;
            keyed.entry((pa.part, i)).or_default().insert(u);
        }
    }
    let blocks: Vec<VertexSet> = keyed.into_values().collect();
    let covered: usize = blocks.iter().map(|blk| blk.len()).sum();
    let union: VertexSet = blocks.iter().flatten().copied().collect();
    if covered != union.len() || union != rest {
        return Err(Error::Internal("layer blocks do not partition Z minus B".into()));
    }

    let mut psi = BTreeMap::new();
    for (i, &v) in b.iter().enumerate() {
        psi.insert(v, i + 1);
    }
    for blk in &blocks {
        check_bound("block <= c(8c+8)d", blk.len(), bounds.block)?;
        for (j, &v) in blk.iter().enumerate() {
            psi.insert(v, b.len() + j + 1);
        }
    }
    let palette = psi.values().collect::<BTreeSet<_>>().len();
    check_bound("|psi| <= c(12c+10)d", palette, bounds.palette)?;

    let audit = ComponentAudit {
        component: comp,
        x_of_part,
        x0,
        x1,
        x2,
        x3,
        parts,
        z,
        b,
        blocks,
        pair,
    };
    Ok(Ok(Some((audit, psi))))
}

/// Bags of tree-adjacent nodes in different parts share at most `c` vertices.
fn check_small_adhesions(pair: &NormalPair, c: usize) -> Result<()> {
    let owner = pair.part_of_nodes();
    for (a, b) in pair.td.tree.edges() {
        if owner[a] != owner[b] {
            let k = pair.td.bags[a].intersection(&pair.td.bags[b]).count();
            check_bound("|V_y ∩ V_y'| <= c across parts", k, c)?;
        }
    }
    Ok(())
}

/// Every bag meets every layer of every torso layering in at most `c` vertices.
fn check_small_layer_traces(pair: &NormalPair, lrs: &LayeredRsDecomposition) -> Result<()> {
    for bag in &pair.td.bags {
        let mut count: BTreeMap<(Node, usize), usize> = BTreeMap::new();
        for &v in bag {
            for (x, node) in lrs.nodes.iter().enumerate() {
                if let Some(i) = node.layering.layer_of(v) {
                    *count.entry((x, i)).or_default() += 1;
                }
            }
        }
        let worst = count.values().copied().max().unwrap_or(0);
        check_bound("|V_y ∩ L_x,i| <= c", worst, lrs.c)?;
    }
    Ok(())
}

/// Outcome of [`check_goodness_witness`]; `None` fields mean the item holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessReport {
    /// A member of the family avoiding `Z`.
    pub pc1_member: Option<VertexSet>,
    pub pc2: Verification,
    /// A component of `G0 − Z` whose neighborhood meets three or more
    /// components of `G0` minus it.
    pub pc3_component: Option<VertexSet>,
}

impl GoodnessReport {
    pub fn is_ok(&self) -> bool {
        self.pc1_member.is_none() && self.pc2.is_ok() && self.pc3_component.is_none()
    }
}

/// Independent check of (pc1)–(pc3) for `g[v0]`. (pc2) enumerates every
/// connected set in [`VerifyMode::Exact`] and samples otherwise.
pub fn check_goodness_witness(
    g: &Graph,
    v0: &VertexSet,
    z: &VertexSet,
    psi: &BTreeMap<Vertex, Color>,
    phi: &PhiColoring,
    family: &dyn FamilyOracle,
    mode: VerifyMode,
) -> GoodnessReport {
    let outside: VertexSet = v0.difference(z).copied().collect();
    let pc1_member = family.query(&outside);
    let pc3_component = components_within(g, &outside).into_iter().find(|comp| {
        let nbrs = g.neighborhood_of_set(comp);
        let rest: VertexSet = v0.difference(comp).copied().collect();
        components_within(g, &rest)
            .iter()
            .filter(|other| !other.is_disjoint(&nbrs))
            .count()
            > 2
    });
    GoodnessReport {
        pc1_member,
        pc2: check_pc2(g, v0, z, psi, phi, mode),
        pc3_component,
    }
}

fn check_pc2(
    g: &Graph,
    v0: &VertexSet,
    z: &VertexSet,
    psi: &BTreeMap<Vertex, Color>,
    phi: &PhiColoring,
    mode: VerifyMode,
) -> Verification {
    let p = phi.p;
    let too_many = |set: &[Vertex]| set.iter().map(|&v| phi.values[v]).collect::<BTreeSet<_>>().len() > p;
    let centered = |set: &[Vertex]| {
        let in_z: Vec<Vertex> = set.iter().copied().filter(|v| z.contains(v)).collect();
        in_z.is_empty() || has_center(&in_z, |v| (phi.values[v], psi.get(&v).copied()))
    };
    let mut checked = 0;
    let mut violation = None;
    match mode {
        VerifyMode::Exact => {
            let _ = visit_connected_sets(g, v0, None, |set| {
                checked += 1;
                if too_many(set) {
                    Visit::Prune
                } else if centered(set) {
                    Visit::Descend
                } else {
                    violation = Some(set.iter().copied().collect());
                    Visit::Stop
                }
            });
        }
        VerifyMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let Some(set) = random_connected_set_within(g, v0, &mut rng) else {
                    break;
                };
                checked += 1;
                if !too_many(&set) && !centered(&set) {
                    violation = Some(set.into_iter().collect());
                    break;
                }
            }
        }
    }
    Verification {
        violation,
        sets_checked: checked,
        exhaustive: matches!(mode, VerifyMode::Exact),
    }
}
