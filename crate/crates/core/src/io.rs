//! Text and JSON formats. Every id stored in a file (vertex, bag, tree node,
//! part) is 1-indexed; in memory everything is 0-indexed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::centered::{Color, Coloring};
use crate::decomposition::{HellyOutcome, Node, Tree, TreeDecomposition};
use crate::error::{Error, Result};
use crate::good::GoodnessWitness;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::layered::{LayeredRsDecomposition, Layering, LrsNode};
use crate::partition::PartitionResult;

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, f)| !f.is_empty() && f[0] != "c")
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a number, found `{tok}`")))
}

/// A 1-indexed id below or at `n`, made 0-indexed.
fn one_based(line: usize, tok: &str, n: usize, what: &str) -> Result<usize> {
    let k = number(line, tok)?;
    if k == 0 || k > n {
        return Err(Error::parse(line, format!("{what} {k} outside 1..={n}")));
    }
    Ok(k - 1)
}

/// `p gr <n> <m>` (or `p tw`) followed by `m` lines `<u> <v>`; `c` lines are
/// comments.
pub fn parse_gr(text: &str) -> Result<Graph> {
    let mut lines = meaningful_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `p gr` header"))?;
    if header.len() != 4 || header[0] != "p" || !matches!(header[1], "gr" | "tw") {
        return Err(Error::parse(hl, "header must be `p gr <n> <m>`"));
    }
    let n = number(hl, header[2])?;
    let m = number(hl, header[3])?;
    let mut g = Graph::new(n);
    let mut count = 0;
    for (ln, f) in lines {
        if f.len() != 2 {
            return Err(Error::parse(ln, "edge lines hold exactly two vertices"));
        }
        let u = one_based(ln, f[0], n, "vertex")?;
        let v = one_based(ln, f[1], n, "vertex")?;
        g.add_edge(u, v).map_err(|e| Error::parse(ln, e.to_string()))?;
        count += 1;
    }
    if count != m {
        return Err(Error::parse(
            hl,
            format!("header announces {m} edges, found {count}"),
        ));
    }
    Ok(g)
}

pub fn write_gr(g: &Graph) -> String {
    let mut out = format!("p gr {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

/// PACE `.td`: `s td <bags> <width+1> <n>`, one `b <id> <vertices…>` line per
/// bag, then tree edges. The declared width must match the bags.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut lines = meaningful_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `s td` header"))?;
    if header.len() != 5 || header[0] != "s" || header[1] != "td" {
        return Err(Error::parse(hl, "header must be `s td <bags> <width+1> <n>`"));
    }
    let nb = number(hl, header[2])?;
    let declared = number(hl, header[3])?;
    let n = number(hl, header[4])?;
    let mut bags: Vec<Option<VertexSet>> = vec![None; nb];
    let mut edges = Vec::new();
    for (ln, f) in lines {
        if f[0] == "b" {
            if f.len() < 2 {
                return Err(Error::parse(ln, "bag line without an id"));
            }
            let id = one_based(ln, f[1], nb, "bag")?;
            if bags[id].is_some() {
                return Err(Error::parse(ln, format!("bag {} listed twice", id + 1)));
            }
            let bag = f[2..]
                .iter()
                .map(|t| one_based(ln, t, n, "vertex"))
                .collect::<Result<_>>()?;
            bags[id] = Some(bag);
        } else if f.len() == 2 {
            edges.push((one_based(ln, f[0], nb, "bag")?, one_based(ln, f[1], nb, "bag")?));
        } else {
            return Err(Error::parse(ln, "expected a bag line or a tree edge"));
        }
    }
    let bags: Vec<VertexSet> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(hl, format!("bag {} is missing", i + 1))))
        .collect::<Result<_>>()?;
    let largest = bags.iter().map(|b| b.len()).max().unwrap_or(0);
    if largest != declared {
        return Err(Error::parse(
            hl,
            format!("declared bag size {declared}, largest bag has {largest}"),
        ));
    }
    let tree = Tree::new(nb, &edges).map_err(|e| Error::parse(hl, e.to_string()))?;
    Ok((TreeDecomposition::new(tree, bags)?, n))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let largest = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.n_nodes(), largest, n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for (a, b) in td.tree.edges() {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

/// Lines `<vertex> <color>`; every vertex of `0..n` exactly once.
pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring> {
    let mut values: Vec<Option<Color>> = vec![None; n];
    for (ln, f) in meaningful_lines(text) {
        if f.len() != 2 {
            return Err(Error::parse(ln, "coloring lines are `<vertex> <color>`"));
        }
        let v = one_based(ln, f[0], n, "vertex")?;
        if values[v].is_some() {
            return Err(Error::parse(ln, format!("vertex {} colored twice", v + 1)));
        }
        values[v] = Some(number(ln, f[1])?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::Format(format!("vertex {} has no color", v + 1))))
        .collect::<Result<_>>()?;
    Ok(Coloring::new(values))
}

pub fn write_coloring(c: &Coloring) -> String {
    c.values
        .iter()
        .enumerate()
        .map(|(v, c)| format!("{} {}\n", v + 1, c))
        .collect()
}

/// One member per line, as whitespace-separated vertices.
pub fn parse_family(text: &str, n: usize) -> Result<Vec<VertexSet>> {
    meaningful_lines(text)
        .map(|(ln, f)| f.iter().map(|t| one_based(ln, t, n, "vertex")).collect())
        .collect()
}

fn to_file(set: &VertexSet) -> Vec<usize> {
    set.iter().map(|v| v + 1).collect()
}

fn from_file(ids: &[usize], n: usize, what: &str) -> Result<VertexSet> {
    ids.iter()
        .map(|&k| {
            if k == 0 || k > n {
                Err(Error::Format(format!("{what} {k} outside 1..={n}")))
            } else {
                Ok(k - 1)
            }
        })
        .collect()
}

fn edges_to_file(tree: &Tree) -> Vec<[usize; 2]> {
    tree.edges().into_iter().map(|(a, b)| [a + 1, b + 1]).collect()
}

fn edges_from_file(edges: &[[usize; 2]], nodes: usize) -> Result<Vec<(Node, Node)>> {
    edges
        .iter()
        .map(|&[a, b]| {
            if a == 0 || b == 0 || a > nodes || b > nodes {
                Err(Error::Format(format!("tree edge {a}-{b} outside 1..={nodes}")))
            } else {
                Ok((a - 1, b - 1))
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct TdJson {
    bags: Vec<Vec<usize>>,
    edges: Vec<[usize; 2]>,
}

impl TdJson {
    fn from_td(td: &TreeDecomposition) -> Self {
        TdJson {
            bags: td.bags.iter().map(to_file).collect(),
            edges: edges_to_file(&td.tree),
        }
    }

    fn to_td(&self, n: usize, what: &str) -> Result<TreeDecomposition> {
        let bags = self
            .bags
            .iter()
            .map(|b| from_file(b, n, what))
            .collect::<Result<Vec<_>>>()?;
        let tree = Tree::new(bags.len(), &edges_from_file(&self.edges, bags.len())?)?;
        TreeDecomposition::new(tree, bags)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct LrsTreeJson {
    nodes: usize,
    edges: Vec<[usize; 2]>,
    root: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct LrsNodeJson {
    id: usize,
    bag: Vec<usize>,
    apex: Vec<usize>,
    td: TdJson,
    layering: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
struct LrsJson {
    c: usize,
    tree: LrsTreeJson,
    nodes: Vec<LrsNodeJson>,
}

/// Reads an LRS for a graph on `n` vertices. Structure only; use
/// `validate_lrs` for the decomposition properties.
pub fn parse_lrs_json(text: &str, n: usize) -> Result<LayeredRsDecomposition> {
    let raw: LrsJson = serde_json::from_str(text).map_err(|e| Error::Format(format!("LRS JSON: {e}")))?;
    let k = raw.tree.nodes;
    if raw.nodes.len() != k {
        return Err(Error::Format(format!(
            "tree has {k} nodes, {} node records given",
            raw.nodes.len()
        )));
    }
    if raw.tree.root == 0 || raw.tree.root > k {
        return Err(Error::Format(format!("root {} outside 1..={k}", raw.tree.root)));
    }
    let tree = Tree::new(k, &edges_from_file(&raw.tree.edges, k)?)?;
    let mut nodes: Vec<Option<LrsNode>> = vec![None; k];
    for rec in &raw.nodes {
        if rec.id == 0 || rec.id > k || nodes[rec.id - 1].is_some() {
            return Err(Error::Format(format!(
                "node id {} is out of range or repeated",
                rec.id
            )));
        }
        let layers = rec
            .layering
            .iter()
            .map(|l| from_file(l, n, "vertex"))
            .collect::<Result<Vec<_>>>()?;
        nodes[rec.id - 1] = Some(LrsNode {
            bag: from_file(&rec.bag, n, "vertex")?,
            apex: from_file(&rec.apex, n, "vertex")?,
            td: rec.td.to_td(n, "vertex")?,
            layering: Layering::new(layers)?,
        });
    }
    Ok(LayeredRsDecomposition {
        c: raw.c,
        tree,
        root: raw.tree.root - 1,
        nodes: nodes.into_iter().map(|x| x.unwrap()).collect(),
    })
}

pub fn write_lrs_json(lrs: &LayeredRsDecomposition) -> String {
    let raw = LrsJson {
        c: lrs.c,
        tree: LrsTreeJson {
            nodes: lrs.tree.n(),
            edges: edges_to_file(&lrs.tree),
            root: lrs.root + 1,
        },
        nodes: lrs
            .nodes
            .iter()
            .enumerate()
            .map(|(i, x)| LrsNodeJson {
                id: i + 1,
                bag: to_file(&x.bag),
                apex: to_file(&x.apex),
                td: TdJson::from_td(&x.td),
                layering: x.layering.layers().iter().map(to_file).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("LRS serializes")
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
struct PartitionJson {
    parts: Vec<Vec<usize>>,
    quotient_td: TdJson,
    /// Part ids in elimination order.
    sigma: Vec<usize>,
    /// `[vertex, color]` pairs per part.
    psi: Vec<Vec<[usize; 2]>>,
    /// Ids of the R-parts.
    #[serde(rename = "R")]
    r: Vec<usize>,
    s: usize,
}

pub fn write_partition_json(res: &PartitionResult) -> String {
    let raw = PartitionJson {
        parts: res.parts.iter().map(to_file).collect(),
        quotient_td: TdJson::from_td(&res.td),
        sigma: res.sigma().iter().map(|i| i + 1).collect(),
        psi: res
            .psi
            .iter()
            .map(|m| m.iter().map(|(&v, &c)| [v + 1, c]).collect())
            .collect(),
        r: (1..=res.r).collect(),
        s: res.s + 1,
    };
    serde_json::to_string_pretty(&raw).expect("partition serializes")
}

/// Reads a partition over `n` vertices. Parts are reordered along `sigma`.
pub fn parse_partition_json(text: &str, n: usize) -> Result<PartitionResult> {
    let raw: PartitionJson =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("partition JSON: {e}")))?;
    let k = raw.parts.len();
    let mut order = raw.sigma.clone();
    order.sort_unstable();
    if order != (1..=k).collect::<Vec<_>>() {
        return Err(Error::Format("sigma is not a permutation of the parts".into()));
    }
    if raw.psi.len() != k {
        return Err(Error::Format(format!("{} ψ lists for {k} parts", raw.psi.len())));
    }
    let r = raw.r.len();
    if raw.r != raw.sigma[..r.min(k)] {
        return Err(Error::Format("R-parts must lead the elimination order".into()));
    }
    // position in sigma becomes the part index
    let mut pos = vec![0; k];
    for (i, &p) in raw.sigma.iter().enumerate() {
        pos[p - 1] = i;
    }
    let mut parts = vec![VertexSet::new(); k];
    let mut psi = vec![BTreeMap::new(); k];
    for p in 0..k {
        parts[pos[p]] = from_file(&raw.parts[p], n, "vertex")?;
        for &[v, c] in &raw.psi[p] {
            let v = from_file(&[v], n, "vertex")?.into_iter().next().unwrap();
            psi[pos[p]].insert(v, c);
        }
    }
    let td = raw.quotient_td.to_td(k, "part")?;
    let td = TreeDecomposition::new(
        td.tree.clone(),
        td.bags
            .iter()
            .map(|b| b.iter().map(|&p| pos[p]).collect())
            .collect(),
    )?;
    if raw.s == 0 || raw.s > td.n_nodes() {
        return Err(Error::Format(format!("node s = {} outside the tree", raw.s)));
    }
    Ok(PartitionResult {
        parts,
        r,
        td,
        s: raw.s - 1,
        psi,
    })
}

/// Audit dump of a goodness witness.
pub fn witness_json(w: &GoodnessWitness) -> serde_json::Value {
    let nodes = |s: &std::collections::BTreeSet<Node>| s.iter().map(|x| x + 1).collect::<Vec<_>>();
    serde_json::json!({
        "Z": to_file(&w.z),
        "B": to_file(&w.b),
        "psi": w.psi.iter().map(|(&v, &c)| [v + 1, c]).collect::<Vec<_>>(),
        "blocks": w.blocks.iter().map(to_file).collect::<Vec<_>>(),
        "components": w.components.iter().map(|a| serde_json::json!({
            "vertices": to_file(&a.component),
            "X0": nodes(&a.x0),
            "X1": nodes(&a.x1),
            "X2": nodes(&a.x2),
            "X3": nodes(&a.x3),
            "Z": to_file(&a.z),
            "B": to_file(&a.b),
            "blocks": a.blocks.iter().map(to_file).collect::<Vec<_>>(),
            "parts": a.parts.iter().map(|q| serde_json::json!({
                "part": q.part + 1,
                "x": q.x + 1,
                "V_Q": to_file(&q.v_q),
                "Y_Q": nodes(&q.y_q),
                "B_Q": to_file(&q.b_q),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn helly_json(outcome: &HellyOutcome) -> serde_json::Value {
    match outcome {
        HellyOutcome::Hitting(nodes) => serde_json::json!({
            "hitting": nodes.iter().map(|x| x + 1).collect::<Vec<_>>(),
        }),
        HellyOutcome::Packing(members) => serde_json::json!({
            "packing": members.iter().map(to_file).collect::<Vec<_>>(),
        }),
    }
}

/// `[vertex, color]` pairs of a partial coloring, as written in JSON dumps.
pub fn partial_coloring_from_pairs(pairs: &[[usize; 2]], n: usize) -> Result<BTreeMap<Vertex, Color>> {
    pairs
        .iter()
        .map(|&[v, c]| Ok((from_file(&[v], n, "vertex")?.into_iter().next().unwrap(), c)))
        .collect()
}
