//! The recursive partition into parts whose quotient has small treewidth,
//! each part carrying a local coloring ψ_P, and the colorings ρ and ζ built
//! from it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centered::{
    binomial, has_center, random_connected_set_within, tw_backend, Backend, Color, Coloring, Verification,
    VerifyMode,
};
use crate::decomposition::{
    validate_elimination_order, validate_td, FamilyOracle, Node, Tree, TreeDecomposition,
};
use crate::error::{check_bound, Error, Result};
use crate::good::{good_witness, phi_from_lrs, GoodOutcome, PhiColoring};
use crate::graph::{
    components_within, quotient, validate_clique_model, visit_connected_sets, Graph, Vertex, VertexPartition,
    VertexSet, Visit,
};
use crate::layered::{ensure_valid_lrs, LayeredRsDecomposition};

/// `c(12c + 10)`: the ψ palette of a good witness per unit of `d`.
pub fn good_constant(c: usize) -> usize {
    c.saturating_mul(12 * c + 10)
}

/// `2^{t-2}(t-1)`: families in the recursion have no this-plus-one
/// pairwise disjoint members in a `K_t`-minor-free graph.
pub fn packing_bound(t: usize) -> usize {
    assert!(t >= 2, "t must be at least 2");
    (1usize << (t - 2)).saturating_mul(t - 1)
}

/// Palette of every ψ_P, and of ρ per color of φ.
pub fn rho_constant(c: usize, t: usize) -> usize {
    good_constant(c).saturating_mul(packing_bound(t))
}

/// Upper bound on the palette of ζ: `rho_constant · (p + 1)^{t-1}`.
pub fn zeta_bound(c: usize, t: usize, p: usize) -> usize {
    let pow = (p + 1).checked_pow((t - 1) as u32).unwrap_or(usize::MAX);
    rho_constant(c, t).saturating_mul(pow)
}

/// The constant in front of `p^{t-1}`: `2^{t-1} · rho_constant`.
pub fn palette_constant(c: usize, t: usize) -> usize {
    (1usize << (t - 1)).saturating_mul(rho_constant(c, t))
}

/// Members are the components of `g[s ∖ ⋃R]` with a neighbor of every R-set.
#[derive(Clone, Copy, Debug)]
pub struct RFamily<'a> {
    pub g: &'a Graph,
    pub r_sets: &'a [VertexSet],
}

impl FamilyOracle for RFamily<'_> {
    fn query(&self, s: &VertexSet) -> Option<VertexSet> {
        family_member_in(self.g, self.r_sets, s)
    }
}

/// The first component (by smallest vertex) of `g[s ∖ ⋃R]` adjacent to every
/// R-set. Monotone in `s`: a member inside `s` stays inside a member of any
/// superset.
pub fn family_member_in(g: &Graph, r_sets: &[VertexSet], s: &VertexSet) -> Option<VertexSet> {
    let all_r: VertexSet = r_sets.iter().flatten().copied().collect();
    let rest: VertexSet = s.difference(&all_r).copied().collect();
    let nbrs: Vec<VertexSet> = r_sets.iter().map(|r| g.neighborhood_of_set(r)).collect();
    components_within(g, &rest)
        .into_iter()
        .find(|comp| nbrs.iter().all(|n| !n.is_disjoint(comp)))
}

/// A partition with a tree decomposition of its quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    /// Parts in elimination order; the first `r` are the R-sets.
    pub parts: Vec<VertexSet>,
    pub r: usize,
    /// Decomposition of the quotient; bags hold part indices.
    pub td: TreeDecomposition,
    /// A node whose bag holds every R-part.
    pub s: Node,
    /// ψ_P per part; empty for R-parts.
    pub psi: Vec<BTreeMap<Vertex, Color>>,
}

impl PartitionResult {
    /// The elimination ordering, as part indices.
    pub fn sigma(&self) -> Vec<usize> {
        (0..self.parts.len()).collect()
    }

    pub fn part_of(&self, n: usize) -> Vec<usize> {
        let mut owner = vec![usize::MAX; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                owner[v] = i;
            }
        }
        owner
    }
}

/// Branch sets of a `K_t` model in the input graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorCertificate {
    pub branch_sets: Vec<VertexSet>,
}

#[derive(Clone, Debug)]
pub enum PartitionOutcome {
    Partition(PartitionResult),
    Minor(MinorCertificate),
}

struct Ctx<'a> {
    g0: &'a Graph,
    lrs: &'a LayeredRsDecomposition,
    t: usize,
    d: usize,
    /// Next unused vertex id; contracted vertices never reuse ids.
    next_id: usize,
    /// Original vertices behind every contracted vertex.
    origin: BTreeMap<Vertex, VertexSet>,
}

/// Runs the recursion on `g` with the given R-sets (at most `t − 2`,
/// pairwise disjoint, of size 1 or 2). Family witnesses come from
/// [`good_witness`] on `lrs`, which must be a valid decomposition of `g`.
/// When a family turns out to have too many disjoint members, a `K_t` model
/// of `g` is returned instead.
pub fn build_partition(
    g: &Graph,
    lrs: &LayeredRsDecomposition,
    t: usize,
    r_sets: &[VertexSet],
) -> Result<PartitionOutcome> {
    if t < 2 {
        return Err(Error::InvalidRSets(format!("t = {t} is below 2")));
    }
    check_r_sets(g, t, r_sets)?;
    let mut ctx = Ctx {
        g0: g,
        lrs,
        t,
        d: packing_bound(t),
        next_id: g.n(),
        origin: BTreeMap::new(),
    };
    let alive = g.vertex_set();
    Ok(match recurse(&mut ctx, g, &alive, r_sets, None)? {
        Built::Done(res) => PartitionOutcome::Partition(res),
        Built::Minor(branch_sets) => PartitionOutcome::Minor(MinorCertificate { branch_sets }),
    })
}

fn check_r_sets(g: &Graph, t: usize, r_sets: &[VertexSet]) -> Result<()> {
    if r_sets.len() > t - 2 {
        return Err(Error::InvalidRSets(format!("{} sets for t = {t}", r_sets.len())));
    }
    let mut seen = VertexSet::new();
    for r in r_sets {
        if r.is_empty() || r.len() > 2 {
            return Err(Error::InvalidRSets(format!(
                "set {r:?} must have 1 or 2 vertices"
            )));
        }
        for &v in r {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if !seen.insert(v) {
                return Err(Error::InvalidRSets(format!("vertex {v} lies in two sets")));
            }
        }
    }
    Ok(())
}

enum Built {
    Done(PartitionResult),
    Minor(Vec<VertexSet>),
}

fn single_node(
    parts: Vec<VertexSet>,
    r: usize,
    psi: Vec<BTreeMap<Vertex, Color>>,
) -> Result<PartitionResult> {
    let bag = (0..parts.len()).collect();
    Ok(PartitionResult {
        td: TreeDecomposition::new(Tree::single(), vec![bag])?,
        parts,
        r,
        s: 0,
        psi,
    })
}

/// Glues sub-results below a fresh node `s` whose bag is `top` (part
/// indices of the combined result). `remap[k]` sends part indices of the
/// `k`-th sub-result to combined indices.
fn glue(top: VertexSet, subs: &[(&PartitionResult, Vec<usize>)]) -> Result<(TreeDecomposition, Node)> {
    let mut bags = vec![top];
    let mut edges = Vec::new();
    for (sub, remap) in subs {
        let off = bags.len();
        bags.extend(sub.td.bags.iter().map(|b| b.iter().map(|&j| remap[j]).collect()));
        edges.extend(sub.td.tree.edges().into_iter().map(|(a, b)| (a + off, b + off)));
        edges.push((0, sub.s + off));
    }
    let tree = Tree::new(bags.len(), &edges)?;
    Ok((TreeDecomposition::new(tree, bags)?, 0))
}

fn recurse(
    ctx: &mut Ctx,
    g: &Graph,
    alive: &VertexSet,
    r_sets: &[VertexSet],
    parent_measure: Option<(usize, usize)>,
) -> Result<Built> {
    let t = ctx.t;
    let r = r_sets.len();
    let all_r: VertexSet = r_sets.iter().flatten().copied().collect();
    let rest: VertexSet = alive.difference(&all_r).copied().collect();
    let measure = (rest.len(), r);
    if let Some(pm) = parent_measure {
        if measure >= pm {
            return Err(Error::Internal(format!(
                "recursion measure {measure:?} did not drop below {pm:?}"
            )));
        }
    }

    if rest.is_empty() {
        return Ok(Built::Done(single_node(
            r_sets.to_vec(),
            r,
            vec![BTreeMap::new(); r],
        )?));
    }

    if r < t - 2 {
        let v = *rest.iter().next().unwrap();
        let mut padded = r_sets.to_vec();
        padded.push(VertexSet::from([v]));
        return Ok(match recurse(ctx, g, alive, &padded, Some(measure))? {
            Built::Done(mut res) => {
                res.psi[r] = BTreeMap::from([(v, 1)]);
                res.r = r;
                Built::Done(res)
            }
            minor => minor,
        });
    }

    let comps = components_within(g, &rest);
    if comps.len() > 1 {
        let mut subs = Vec::new();
        for comp in &comps {
            let sub_alive: VertexSet = comp.union(&all_r).copied().collect();
            match recurse(ctx, g, &sub_alive, r_sets, Some(measure))? {
                Built::Done(res) => subs.push(res),
                minor => return Ok(minor),
            }
        }
        let mut parts = r_sets.to_vec();
        let mut psi = vec![BTreeMap::new(); r];
        let mut remaps = Vec::new();
        for sub in &subs {
            let mut remap: Vec<usize> = (0..r).collect();
            for j in r..sub.parts.len() {
                remap.push(parts.len());
                parts.push(sub.parts[j].clone());
                psi.push(sub.psi[j].clone());
            }
            remaps.push(remap);
        }
        let pairs: Vec<_> = subs.iter().zip(remaps).collect();
        let (td, s) = glue((0..r).collect(), &pairs)?;
        return Ok(Built::Done(PartitionResult { parts, r, td, s, psi }));
    }

    if let Some(i) = r_sets
        .iter()
        .position(|ri| g.neighborhood_of_set(ri).is_disjoint(&rest))
    {
        let mut fewer = r_sets.to_vec();
        fewer.remove(i);
        let sub_alive: VertexSet = alive.difference(&r_sets[i]).copied().collect();
        let sub = match recurse(ctx, g, &sub_alive, &fewer, Some(measure))? {
            Built::Done(res) => res,
            minor => return Ok(minor),
        };
        let mut parts = sub.parts.clone();
        parts.insert(i, r_sets[i].clone());
        let mut psi = sub.psi.clone();
        psi.insert(i, BTreeMap::new());
        let remap: Vec<usize> = (0..sub.parts.len())
            .map(|j| if j < i { j } else { j + 1 })
            .collect();
        let (td, s) = glue((0..r).collect(), &[(&sub, remap)])?;
        return Ok(Built::Done(PartitionResult { parts, r, td, s, psi }));
    }

    main_case(ctx, g, alive, r_sets, &rest, measure)
}

fn main_case(
    ctx: &mut Ctx,
    g: &Graph,
    alive: &VertexSet,
    r_sets: &[VertexSet],
    rest: &VertexSet,
    measure: (usize, usize),
) -> Result<Built> {
    let r = r_sets.len();
    let family = RFamily { g, r_sets };
    // g − R is an induced subgraph of the input graph with the same ids
    let witness = match good_witness(ctx.g0, ctx.lrs, rest, &family, ctx.d)? {
        GoodOutcome::Packing(members) => {
            return Ok(Built::Minor(minor_model(ctx, g, r_sets, rest, &members)?))
        }
        GoodOutcome::Witness(w) => w,
    };
    let z = witness.z.clone();
    if z.is_empty() {
        return Err(Error::Internal(
            "hitting set of a nonempty family is empty".into(),
        ));
    }
    let outside: VertexSet = rest.difference(&z).copied().collect();
    let mut subs = Vec::new();
    for comp in components_within(g, &outside) {
        let i = r_sets
            .iter()
            .position(|ri| g.neighborhood_of_set(ri).is_disjoint(&comp))
            .ok_or_else(|| Error::Internal(format!("component {comp:?} avoids Z but is a family member")))?;
        let (g_c, alive_c, z_c) = contract_outside(ctx, g, alive, &r_sets[i], rest, &comp);
        if z_c.is_empty() || z_c.len() > 2 {
            return Err(Error::Internal(format!(
                "{} contracted vertices next to {comp:?}",
                z_c.len()
            )));
        }
        let mut r_c: Vec<VertexSet> = r_sets
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, s)| s.clone())
            .collect();
        r_c.push(z_c.clone());
        r_c.sort_by_key(|s| *s.iter().next().unwrap());
        let sub = match recurse(ctx, &g_c, &alive_c, &r_c, Some(measure))? {
            Built::Done(res) => res,
            minor => return Ok(minor),
        };
        // R_C-parts of the sub-result stand for R-sets or for Z
        let head: Vec<usize> = r_c
            .iter()
            .map(|s| {
                if *s == z_c {
                    r
                } else {
                    r_sets.iter().position(|x| x == s).unwrap()
                }
            })
            .collect();
        subs.push((sub, head));
    }
    let mut parts = r_sets.to_vec();
    parts.push(z.clone());
    let mut psi = vec![BTreeMap::new(); r];
    psi.push(witness.psi.clone());
    let mut remaps = Vec::new();
    for (sub, head) in &subs {
        let mut remap = head.clone();
        for j in r..sub.parts.len() {
            remap.push(parts.len());
            parts.push(sub.parts[j].clone());
            psi.push(sub.psi[j].clone());
        }
        remaps.push(remap);
    }
    let pairs: Vec<_> = subs.iter().map(|(s, _)| s).zip(remaps).collect();
    let (td, s) = glue((0..=r).collect(), &pairs)?;
    Ok(Built::Done(PartitionResult { parts, r, td, s, psi }))
}

/// `g − R_i` with every component of `g − R − V(comp)` contracted to a fresh
/// vertex. Returns the new graph, its alive set and the fresh vertices.
fn contract_outside(
    ctx: &mut Ctx,
    g: &Graph,
    alive: &VertexSet,
    dropped: &VertexSet,
    rest: &VertexSet,
    comp: &VertexSet,
) -> (Graph, VertexSet, VertexSet) {
    let others: VertexSet = rest.difference(comp).copied().collect();
    let mut alive_c: VertexSet = alive
        .difference(dropped)
        .copied()
        .filter(|v| !others.contains(v))
        .collect();
    let mut g_c = g.clone();
    let mut fresh = VertexSet::new();
    for k in components_within(g, &others) {
        while g_c.n() < ctx.next_id {
            g_c.add_vertex();
        }
        let id = g_c.add_vertex();
        ctx.next_id = id + 1;
        for u in g.neighborhood_of_set(&k) {
            if alive_c.contains(&u) {
                g_c.insert_edge(id, u);
            }
        }
        alive_c.insert(id);
        fresh.insert(id);
        ctx.origin.insert(id, k);
    }
    (g_c, alive_c, fresh)
}

/// Among `d + 1` disjoint members pick `t` sharing a neighbor choice in
/// every R-set, join two of them by a path avoiding the rest, and lift the
/// resulting `K_t` model to the input graph.
fn minor_model(
    ctx: &Ctx,
    g: &Graph,
    r_sets: &[VertexSet],
    rest: &VertexSet,
    members: &[VertexSet],
) -> Result<Vec<VertexSet>> {
    let t = ctx.t;
    let mut groups: BTreeMap<Vec<Vertex>, Vec<usize>> = BTreeMap::new();
    for (j, h) in members.iter().enumerate() {
        let nbrs = g.neighborhood_of_set(h);
        let choice: Option<Vec<Vertex>> = r_sets
            .iter()
            .map(|ri| ri.iter().copied().find(|v| nbrs.contains(v)))
            .collect();
        let choice = choice.ok_or_else(|| Error::Internal(format!("member {h:?} misses an R-set")))?;
        groups.entry(choice).or_default().push(j);
    }
    let (choice, chosen) = groups
        .into_iter()
        .find(|(_, js)| js.len() >= t)
        .ok_or_else(|| Error::Internal("no t members share a neighbor choice".into()))?;
    let hs: Vec<&VertexSet> = chosen[..t].iter().map(|&j| &members[j]).collect();
    let (a, b, path) = joining_path(g, rest, &hs)
        .ok_or_else(|| Error::Internal("chosen members are not linked in g − R".into()))?;
    let mut branch: Vec<VertexSet> = Vec::new();
    let mut ri = choice.iter();
    for (j, h) in hs.iter().enumerate() {
        if j != a && j != b {
            let mut set = (*h).clone();
            set.insert(*ri.next().unwrap());
            branch.push(set);
        }
    }
    branch.push(hs[a].clone());
    let mut last = hs[b].clone();
    last.extend(path);
    branch.push(last);
    let lifted: Vec<VertexSet> = branch
        .into_iter()
        .map(|set| {
            set.into_iter()
                .flat_map(|v| {
                    ctx.origin
                        .get(&v)
                        .cloned()
                        .unwrap_or_else(|| VertexSet::from([v]))
                })
                .collect()
        })
        .collect();
    validate_clique_model(ctx.g0, &lifted)
        .map_err(|e| Error::Internal(format!("lifted model is invalid: {e}")))?;
    Ok(lifted)
}

/// Two members `a, b` and the inner vertices of a path between them in
/// `g[within]` that meets no member internally.
fn joining_path(g: &Graph, within: &VertexSet, hs: &[&VertexSet]) -> Option<(usize, usize, VertexSet)> {
    let mut label: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut prev: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (j, h) in hs.iter().enumerate() {
        for &v in h.iter() {
            label.insert(v, j);
            queue.push_back(v);
        }
    }
    let trace = |mut v: Vertex, prev: &BTreeMap<Vertex, Vertex>, out: &mut VertexSet| {
        while let Some(&u) = prev.get(&v) {
            out.insert(v);
            v = u;
        }
    };
    while let Some(u) = queue.pop_front() {
        let lu = label[&u];
        for &w in g.neighbors(u) {
            if !within.contains(&w) {
                continue;
            }
            match label.get(&w) {
                None => {
                    label.insert(w, lu);
                    prev.insert(w, u);
                    queue.push_back(w);
                }
                Some(&lw) if lw != lu => {
                    let mut inner = VertexSet::new();
                    trace(u, &prev, &mut inner);
                    trace(w, &prev, &mut inner);
                    return Some((lu.min(lw), lu.max(lw), inner));
                }
                Some(_) => {}
            }
        }
    }
    None
}

/// Structural checks on a result: partition, quotient decomposition, width
/// at most `t − 2`, elimination ordering, R-parts first and in one bag, and
/// ψ_P values within `1..=psi_limit`.
pub fn check_partition_structure(
    g: &Graph,
    res: &PartitionResult,
    t: usize,
    r_sets: &[VertexSet],
    psi_limit: usize,
) -> std::result::Result<(), String> {
    let partition = VertexPartition::new(g.n(), res.parts.clone()).map_err(|e| e.to_string())?;
    let (q, _) = quotient(g, &partition).map_err(|e| e.to_string())?;
    if let Some(v) = validate_td(&q, &res.td).first() {
        return Err(format!("quotient decomposition: {v}"));
    }
    if res.td.width() > t - 2 {
        return Err(format!("quotient width {} exceeds {}", res.td.width(), t - 2));
    }
    if let Err(i) = validate_elimination_order(&res.td, &res.sigma()) {
        return Err(format!("part order fails elimination at position {i}"));
    }
    if res.r != r_sets.len() || res.parts[..res.r] != *r_sets {
        return Err("R-sets are not the leading parts".into());
    }
    if res.s >= res.td.n_nodes() || !(0..res.r).all(|i| res.td.bags[res.s].contains(&i)) {
        return Err("no bag holds every R-part".into());
    }
    for (k, part) in res.parts.iter().enumerate().skip(res.r) {
        let psi = &res.psi[k];
        if psi.keys().copied().collect::<VertexSet>() != *part {
            return Err(format!("ψ of part {k} is not defined exactly on the part"));
        }
        if let Some((&v, &c)) = psi.iter().find(|(_, &c)| c == 0 || c > psi_limit) {
            return Err(format!("ψ({v}) = {c} outside 1..={psi_limit}"));
        }
    }
    Ok(())
}

/// For every non-R part `P` and connected `H` inside the parts from `P`
/// onwards with `H ∩ P ≠ ∅`: `H` sees more than `p` colors of φ or `H ∩ P`
/// has a `(φ × ψ_P)`-center.
pub fn check_part_centers(
    g: &Graph,
    res: &PartitionResult,
    phi: &[Color],
    p: usize,
    mode: VerifyMode,
) -> Verification {
    let mut checked = 0;
    let mut violation = None;
    let mut rng = match mode {
        VerifyMode::Sampled { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        VerifyMode::Exact => None,
    };
    for k in res.r..res.parts.len() {
        let part = &res.parts[k];
        let psi = &res.psi[k];
        let suffix: VertexSet = res.parts[k..].iter().flatten().copied().collect();
        let too_many = |set: &[Vertex]| set.iter().map(|&v| phi[v]).collect::<BTreeSet<_>>().len() > p;
        let centered = |set: &[Vertex]| {
            let inside: Vec<Vertex> = set.iter().copied().filter(|v| part.contains(v)).collect();
            inside.is_empty() || has_center(&inside, |v| (phi[v], psi.get(&v).copied()))
        };
        match (&mode, rng.as_mut()) {
            (VerifyMode::Sampled { samples, .. }, Some(rng)) => {
                for _ in 0..*samples {
                    let Some(set) = random_connected_set_within(g, &suffix, rng) else {
                        break;
                    };
                    checked += 1;
                    if !too_many(&set) && !centered(&set) {
                        violation = Some(set.into_iter().collect());
                        break;
                    }
                }
            }
            _ => {
                let _ = visit_connected_sets(g, &suffix, None, |set| {
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
        }
        if violation.is_some() {
            break;
        }
    }
    Verification {
        violation,
        sets_checked: checked,
        exhaustive: matches!(mode, VerifyMode::Exact),
    }
}

/// `ρ(u) = (φ(u), ψ_P(u))` for the part `P` holding `u`; R-parts use 0 for ψ.
pub fn good_to_rho(res: &PartitionResult, phi: &PhiColoring, c: usize, t: usize) -> Result<Coloring> {
    let n = phi.values.len();
    let owner = res.part_of(n);
    let labels: Vec<(Color, Color)> = (0..n)
        .map(|u| (phi.values[u], res.psi[owner[u]].get(&u).copied().unwrap_or(0)))
        .collect();
    let rho = Coloring::from_labels(&labels);
    check_bound(
        "|rho| <= c22(t)(p+1)",
        rho.palette_size(),
        rho_constant(c, t).saturating_mul(phi.p + 1),
    )?;
    Ok(rho)
}

/// All colorings produced on the way to ζ.
#[derive(Clone, Debug)]
pub struct MinorFreeColoring {
    pub zeta: Coloring,
    pub xi: Coloring,
    pub rho: Coloring,
    pub phi: PhiColoring,
    pub partition: PartitionResult,
}

#[derive(Clone, Debug)]
pub enum ColoringOutcome {
    Colored(Box<MinorFreeColoring>),
    Minor(MinorCertificate),
}

/// `ζ(u) = (ξ(P), ρ(u))` where `ξ` is an ordered p-centered coloring of the
/// quotient along the part order.
pub fn minor_free_coloring(
    g: &Graph,
    lrs: &LayeredRsDecomposition,
    t: usize,
    p: usize,
    backend: Backend,
) -> Result<ColoringOutcome> {
    ensure_valid_lrs(g, lrs)?;
    let phi = phi_from_lrs(g, lrs, p)?;
    let res = match build_partition(g, lrs, t, &[])? {
        PartitionOutcome::Minor(m) => return Ok(ColoringOutcome::Minor(m)),
        PartitionOutcome::Partition(res) => res,
    };
    let rho = good_to_rho(&res, &phi, lrs.c, t)?;
    let partition = VertexPartition::new(g.n(), res.parts.clone())?;
    let (q, _) = quotient(g, &partition)?;
    let xi = tw_backend(&q, &res.td, &res.sigma(), p, backend)?;
    let target = binomial(p + t - 2, t - 2);
    if backend == Backend::Chordal && xi.palette_size() > target {
        log::warn!(
            "quotient coloring uses {} colors, above {target}",
            xi.palette_size()
        );
    }
    let owner = res.part_of(g.n());
    let labels: Vec<(Color, Color)> = (0..g.n()).map(|u| (xi.values[owner[u]], rho.values[u])).collect();
    let zeta = Coloring::from_labels(&labels);
    if backend != Backend::Identity {
        check_bound(
            "|zeta| <= c22(t)(p+1)^(t-1)",
            zeta.palette_size(),
            zeta_bound(lrs.c, t, p),
        )?;
    }
    Ok(ColoringOutcome::Colored(Box::new(MinorFreeColoring {
        zeta,
        xi,
        rho,
        phi,
        partition: res,
    })))
}
