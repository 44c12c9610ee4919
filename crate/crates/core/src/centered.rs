//! p-centered colorings: products, exact and sampled verifiers, exact χ_p
//! on tiny graphs, and ordered colorings for graphs with a tree
//! decomposition.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::{validate_elimination_order, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{visit_connected_sets, Graph, Vertex, VertexSet, Visit};

pub type Color = usize;

/// A total vertex coloring; `values[v]` is the color of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Coloring {
    pub values: Vec<Color>,
}

impl Coloring {
    pub fn new(values: Vec<Color>) -> Self {
        Coloring { values }
    }

    pub fn constant(n: usize) -> Self {
        Coloring { values: vec![0; n] }
    }

    pub fn identity(n: usize) -> Self {
        Coloring {
            values: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of distinct colors used.
    pub fn palette_size(&self) -> usize {
        self.values.iter().collect::<BTreeSet<_>>().len()
    }

    /// Dense relabeling of arbitrary ordered labels: the smallest label gets 0.
    pub fn from_labels<L: Ord + Clone>(labels: &[L]) -> Self {
        let distinct: BTreeSet<&L> = labels.iter().collect();
        let id: BTreeMap<&L, Color> = distinct.into_iter().enumerate().map(|(i, l)| (l, i)).collect();
        Coloring {
            values: labels.iter().map(|l| id[l]).collect(),
        }
    }
}

/// `(c1 × c2)(u) = (c1(u), c2(u))`, relabeled densely.
pub fn product(c1: &Coloring, c2: &Coloring) -> Coloring {
    assert_eq!(c1.len(), c2.len(), "product of colorings of different graphs");
    let pairs: Vec<(Color, Color)> = c1.values.iter().copied().zip(c2.values.iter().copied()).collect();
    Coloring::from_labels(&pairs)
}

/// Whether some color occurs exactly once on `set`.
pub fn has_center<C: Ord>(set: &[Vertex], color: impl Fn(Vertex) -> C) -> bool {
    let mut count: BTreeMap<C, usize> = BTreeMap::new();
    for &v in set {
        *count.entry(color(v)).or_default() += 1;
    }
    count.values().any(|&k| k == 1)
}

/// Number of distinct colors on `set`, counting up to `cap + 1`.
fn distinct_colors(set: &[Vertex], values: &[Color], cap: usize) -> usize {
    let mut seen = BTreeSet::new();
    for &v in set {
        seen.insert(values[v]);
        if seen.len() > cap {
            break;
        }
    }
    seen.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Every connected vertex set; meant for n up to about 20.
    Exact,
    /// Random connected sets grown from random vertices.
    Sampled { samples: usize, seed: u64 },
}

impl VerifyMode {
    pub const DEFAULT_SAMPLES: usize = 10_000;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub violation: Option<VertexSet>,
    pub sets_checked: usize,
    pub exhaustive: bool,
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that every connected subgraph with at most `p` colors has a color
/// occurring exactly once on it.
pub fn verify_p_centered(g: &Graph, coloring: &Coloring, p: usize, mode: VerifyMode) -> Verification {
    let values = &coloring.values;
    check_sets(g, values, p, mode, |set| has_center(set, |v| values[v]))
}

/// Ordered variant: the `sigma`-minimum of every connected subgraph with at
/// most `p` colors must carry a color occurring exactly once on it.
pub fn verify_p_centered_ordered(
    g: &Graph,
    sigma: &[Vertex],
    coloring: &Coloring,
    p: usize,
    mode: VerifyMode,
) -> Verification {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in sigma.iter().enumerate() {
        pos[v] = i;
    }
    let values = &coloring.values;
    check_sets(g, values, p, mode, |set| {
        let m = *set.iter().min_by_key(|&&v| pos[v]).unwrap();
        set.iter().filter(|&&v| values[v] == values[m]).count() == 1
    })
}

fn check_sets(
    g: &Graph,
    values: &[Color],
    p: usize,
    mode: VerifyMode,
    centered: impl Fn(&[Vertex]) -> bool,
) -> Verification {
    let mut checked = 0;
    let mut violation = None;
    match mode {
        VerifyMode::Exact => {
            let _ = visit_connected_sets(g, &g.vertex_set(), None, |set| {
                checked += 1;
                // supersets of a set with more than p colors do too
                if distinct_colors(set, values, p) > p {
                    return Visit::Prune;
                }
                if centered(set) {
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
                let Some(set) = random_connected_set(g, &mut rng) else {
                    break;
                };
                checked += 1;
                if distinct_colors(&set, values, p) <= p && !centered(&set) {
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

/// A connected set grown from a uniform start vertex by adding uniform
/// boundary vertices up to a uniform target size.
pub fn random_connected_set(g: &Graph, rng: &mut impl Rng) -> Option<Vec<Vertex>> {
    random_connected_set_within(g, &g.vertex_set(), rng)
}

pub fn random_connected_set_within(g: &Graph, within: &VertexSet, rng: &mut impl Rng) -> Option<Vec<Vertex>> {
    let start = *within.iter().choose(rng)?;
    let target = rng.gen_range(1..=within.len());
    let mut set = vec![start];
    let mut inside = VertexSet::from([start]);
    let mut boundary: BTreeSet<Vertex> = g
        .neighbors(start)
        .iter()
        .copied()
        .filter(|v| within.contains(v))
        .collect();
    while set.len() < target {
        let Some(&v) = boundary.iter().choose(rng) else {
            break;
        };
        boundary.remove(&v);
        inside.insert(v);
        set.push(v);
        for &u in g.neighbors(v) {
            if within.contains(&u) && !inside.contains(&u) {
                boundary.insert(u);
            }
        }
    }
    Some(set)
}

/// Least `k ≤ max_colors` such that `g` has a p-centered coloring with `k`
/// colors, with a witness; `None` when more colors are needed. Exhaustive
/// over canonical color assignments, intended for n ≤ 8.
pub fn chi_p_exact(g: &Graph, p: usize, max_colors: usize) -> Option<(usize, Coloring)> {
    let n = g.n();
    if n == 0 {
        return Some((0, Coloring::default()));
    }
    for k in 1..=max_colors.min(n) {
        let mut values = vec![0; n];
        if let ControlFlow::Break(()) = search_rgs(g, p, k, 0, 0, &mut values) {
            return Some((k, Coloring::new(values)));
        }
    }
    None
}

/// Restricted-growth assignment: vertex `i` takes a color at most one more
/// than the largest color used so far, which fixes color names.
fn search_rgs(g: &Graph, p: usize, k: usize, i: usize, used: usize, values: &mut [Color]) -> ControlFlow<()> {
    if i == values.len() {
        let c = Coloring::new(values.to_vec());
        if used == k && verify_p_centered(g, &c, p, VerifyMode::Exact).is_ok() {
            return ControlFlow::Break(());
        }
        return ControlFlow::Continue(());
    }
    // not enough vertices left to reach k colors
    if used + (values.len() - i) < k {
        return ControlFlow::Continue(());
    }
    for c in 0..(used + 1).min(k) {
        values[i] = c;
        // a monochromatic edge is never 1-centered and never p-centered
        if g.neighbors(i).iter().any(|&u| u < i && values[u] == c) {
            continue;
        }
        search_rgs(g, p, k, i + 1, used.max(c + 1), values)?;
    }
    ControlFlow::Continue(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Every vertex its own color.
    Identity,
    /// Depth modulo `p + 1` in the forest of earlier neighbors; width 1 only.
    Treedepth,
    /// Greedy ordered coloring on the chordal completion.
    Chordal,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Backend::Identity),
            "treedepth" => Ok(Backend::Treedepth),
            "chordal" => Ok(Backend::Chordal),
            other => Err(Error::Format(format!("unknown backend `{other}`"))),
        }
    }
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Identity => "identity",
            Backend::Treedepth => "treedepth",
            Backend::Chordal => "chordal",
        }
    }
}

/// Graphs with at most this many vertices are verified exhaustively by
/// [`tw_backend`]; larger ones by sampling.
pub const EXACT_VERIFY_LIMIT: usize = 20;

/// An ordered p-centered coloring of `(g, sigma)` where `sigma` is an
/// elimination ordering of `td`. The result is always re-verified; a failed
/// verification is an error, never a silent result.
pub fn tw_backend(
    g: &Graph,
    td: &TreeDecomposition,
    sigma: &[Vertex],
    p: usize,
    which: Backend,
) -> Result<Coloring> {
    if let Err(i) = validate_elimination_order(td, sigma) {
        return Err(Error::InvalidDecomposition(format!(
            "ordering is not an elimination ordering (position {i})"
        )));
    }
    let earlier = earlier_neighbors(g, td, sigma);
    let coloring = match which {
        Backend::Identity => Coloring::identity(g.n()),
        Backend::Treedepth => treedepth_coloring(&earlier, sigma, p, g.n())?,
        Backend::Chordal => chordal_coloring(&earlier, sigma, p, g.n()),
    };
    let mode = if g.n() <= EXACT_VERIFY_LIMIT {
        VerifyMode::Exact
    } else {
        VerifyMode::Sampled {
            samples: VerifyMode::DEFAULT_SAMPLES,
            seed: 0,
        }
    };
    let check = verify_p_centered_ordered(g, sigma, &coloring, p, mode);
    match check.violation {
        None => Ok(coloring),
        Some(set) => Err(Error::Backend {
            backend: which.name().into(),
            reason: format!("connected set {set:?} has no center at its minimum"),
        }),
    }
}

/// For every vertex, its neighbors in the chordal completion (bags made
/// into cliques) that come earlier in `sigma`.
fn earlier_neighbors(g: &Graph, td: &TreeDecomposition, sigma: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in sigma.iter().enumerate() {
        pos[v] = i;
    }
    let mut out = vec![BTreeSet::new(); g.n()];
    for bag in &td.bags {
        for &a in bag {
            for &b in bag {
                if pos[b] < pos[a] {
                    out[a].insert(b);
                }
            }
        }
    }
    out.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn treedepth_coloring(earlier: &[Vec<Vertex>], sigma: &[Vertex], p: usize, n: usize) -> Result<Coloring> {
    let mut depth = vec![0; n];
    for &v in sigma {
        match earlier[v].as_slice() {
            [] => depth[v] = 0,
            [u] => depth[v] = depth[*u] + 1,
            _ => {
                return Err(Error::Backend {
                    backend: "treedepth".into(),
                    reason: format!("vertex {v} has several earlier neighbors; width exceeds 1"),
                })
            }
        }
    }
    Ok(Coloring::new(depth.into_iter().map(|d| d % (p + 1)).collect()))
}

/// Colors vertices in `sigma` order with the smallest color not forbidden.
/// The color of `w` is forbidden for `v` when a path `v, a_1, …, a_k = w`
/// moves to an earlier vertex at every step and `a_1..a_k` carry pairwise
/// distinct colors (hence `k ≤ p`). In the chordal completion a shortest
/// path from any vertex of a connected set to the set's minimum has this
/// decreasing shape, so a repeated minimum color on a set with at most `p`
/// colors would have been forbidden.
fn chordal_coloring(earlier: &[Vec<Vertex>], sigma: &[Vertex], p: usize, n: usize) -> Coloring {
    let mut color: Vec<Option<Color>> = vec![None; n];
    for &v in sigma {
        let mut forbidden = BTreeSet::new();
        let mut used = Vec::new();
        forbid_along_paths(v, earlier, &color, p, &mut used, &mut forbidden);
        let c = (0..).find(|c| !forbidden.contains(c)).unwrap();
        color[v] = Some(c);
    }
    Coloring::new(color.into_iter().map(|c| c.unwrap_or(0)).collect())
}

fn forbid_along_paths(
    v: Vertex,
    earlier: &[Vec<Vertex>],
    color: &[Option<Color>],
    p: usize,
    used: &mut Vec<Color>,
    forbidden: &mut BTreeSet<Color>,
) {
    if used.len() == p {
        return;
    }
    for &u in &earlier[v] {
        let cu = color[u].expect("earlier vertices are colored");
        if used.contains(&cu) {
            continue;
        }
        forbidden.insert(cu);
        used.push(cu);
        forbid_along_paths(u, earlier, color, p, used, forbidden);
        used.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{elimination_order, RootedTree, Tree};

    fn col(v: &[usize]) -> Coloring {
        Coloring::new(v.to_vec())
    }

    #[test]
    fn product_examples() {
        let c = col(&[3, 1, 3, 2]);
        assert_eq!(
            product(&Coloring::constant(4), &c),
            Coloring::from_labels(&c.values)
        );
        let a = col(&[0, 1, 0]);
        let b = col(&[0, 0, 1]);
        assert!(product(&a, &b).palette_size() <= 4);
        let k4 = product(&Coloring::identity(4), &Coloring::identity(4));
        assert_eq!(k4.palette_size(), 4);
    }

    #[test]
    fn verify_examples() {
        let p4 = Graph::path(4);
        let abab = col(&[0, 1, 0, 1]);
        let v = verify_p_centered(&p4, &abab, 2, VerifyMode::Exact);
        assert!(!v.is_ok());
        let bad = v.violation.unwrap();
        assert!(bad.len() >= 3);
        assert!(verify_p_centered(&p4, &abab, 1, VerifyMode::Exact).is_ok());
        let all = Coloring::identity(4);
        for p in 1..5 {
            assert!(verify_p_centered(&p4, &all, p, VerifyMode::Exact).is_ok());
        }
        let s = verify_p_centered(
            &p4,
            &abab,
            2,
            VerifyMode::Sampled {
                samples: 500,
                seed: 1,
            },
        );
        assert!(!s.is_ok());
    }

    #[test]
    fn ordered_examples() {
        // path 0-1-2-3 rooted at 0: depth colors mod 3 with p = 2
        let p4 = Graph::path(4);
        let sigma = [0, 1, 2, 3];
        let depth = col(&[0, 1, 2, 0]);
        assert!(verify_p_centered_ordered(&p4, &sigma, &depth, 2, VerifyMode::Exact).is_ok());
        // {0,1} is fine but {1,2,3} has minimum 1 whose color 1 repeats at 3
        let broken = col(&[0, 1, 2, 1]);
        assert!(!verify_p_centered_ordered(&p4, &sigma, &broken, 2, VerifyMode::Exact).is_ok());
        let k1 = Graph::new(1);
        assert!(verify_p_centered_ordered(&k1, &[0], &col(&[0]), 3, VerifyMode::Exact).is_ok());
    }

    #[test]
    fn chi_p_examples() {
        let (k, w) = chi_p_exact(&Graph::path(4), 2, 4).unwrap();
        assert_eq!(k, 3);
        assert!(verify_p_centered(&Graph::path(4), &w, 2, VerifyMode::Exact).is_ok());
        assert_eq!(chi_p_exact(&Graph::new(1), 5, 3).unwrap().0, 1);
        assert_eq!(chi_p_exact(&Graph::complete(4), 1, 3), None);
        assert_eq!(chi_p_exact(&Graph::cycle(5), 1, 3).unwrap().0, 3);
    }

    fn path_td(n: usize) -> TreeDecomposition {
        let bags = (0..n - 1).map(|i| [i, i + 1].into_iter().collect()).collect();
        TreeDecomposition::new(Tree::path(n - 1).unwrap(), bags).unwrap()
    }

    #[test]
    fn treedepth_backend_on_p6() {
        let g = Graph::path(6);
        let td = path_td(6);
        let sigma = elimination_order(&td, &RootedTree::new(&td.tree, 0));
        let c = tw_backend(&g, &td, &sigma, 2, Backend::Treedepth).unwrap();
        assert_eq!(c.palette_size(), 3);
        assert!(c.palette_size() <= binomial(2 + 1, 1));
    }

    #[test]
    fn identity_backend_uses_n_colors() {
        let g = Graph::cycle(5);
        let bags = vec![
            [0, 1, 4].into_iter().collect(),
            [1, 3, 4].into_iter().collect(),
            [1, 2, 3].into_iter().collect(),
        ];
        let td = TreeDecomposition::new(Tree::path(3).unwrap(), bags).unwrap();
        let sigma = elimination_order(&td, &RootedTree::new(&td.tree, 0));
        let c = tw_backend(&g, &td, &sigma, 2, Backend::Identity).unwrap();
        assert_eq!(c.palette_size(), 5);
        let c = tw_backend(&g, &td, &sigma, 2, Backend::Chordal).unwrap();
        assert!(c.palette_size() <= binomial(2 + 2, 2));
    }

    #[test]
    fn treedepth_rejects_width_two() {
        let g = Graph::complete(3);
        let td = TreeDecomposition::trivial(&g);
        let err = tw_backend(&g, &td, &[0, 1, 2], 1, Backend::Treedepth).unwrap_err();
        assert!(matches!(err, Error::Backend { .. }));
    }

    #[test]
    fn backend_rejects_non_elimination_order() {
        let g = Graph::path(3);
        let td = path_td(3);
        assert!(tw_backend(&g, &td, &[2, 1, 0], 1, Backend::Identity).is_ok());
        assert!(tw_backend(&g, &td, &[0, 2, 1], 1, Backend::Identity).is_err());
        let tree = Tree::new(3, &[(0, 1), (1, 2)]).unwrap();
        let star = TreeDecomposition::new(
            tree,
            vec![
                [0, 1].into_iter().collect(),
                [0, 2].into_iter().collect(),
                [0, 3].into_iter().collect(),
            ],
        )
        .unwrap();
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(matches!(
            tw_backend(&g, &star, &[1, 2, 0, 3], 1, Backend::Identity),
            Err(Error::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(3, 1), 3);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(10, 3), 120);
    }
}
