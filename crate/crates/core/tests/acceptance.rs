//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

mod common;

use std::time::Instant;

use centered_core::centered::{
    chi_p_exact, tw_backend, verify_p_centered, verify_p_centered_ordered, Backend, VerifyMode,
};
use centered_core::decomposition::{
    check_refinement, elimination_order, helly_hitting_or_packing, is_natural, lca_closure, make_natural,
    parts_hit, potential, validate_td, verify_helly_outcome, ExplicitFamily, FamilyOracle, HellyOutcome,
    RootedTree, Tree, TreeDecomposition,
};
use centered_core::generate::{
    hub_path, random_connected_graph, random_partial_ktree, random_series_parallel, random_tree,
};
use centered_core::good::{check_goodness_witness, good_witness, phi_from_lrs, GoodBounds, GoodOutcome};
use centered_core::graph::{torso, validate_clique_model, Graph, VertexSet};
use centered_core::layered::{grid_instance, lrs_from_td, LayeredRsDecomposition};
use centered_core::partition::{minor_free_coloring, zeta_bound, ColoringOutcome};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct GridRun {
    label: String,
    palette: usize,
    bound: usize,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid_runs() -> Result<Vec<GridRun>, String> {
    let mut out = Vec::new();
    for rows in 1..=4 {
        for cols in 1..=4 {
            let (g, lrs) = grid_instance(rows, cols).map_err(|e| e.to_string())?;
            for p in 1..=3 {
                let start = Instant::now();
                let col = match minor_free_coloring(&g, &lrs, 5, p, Backend::Chordal) {
                    Ok(ColoringOutcome::Colored(col)) => col,
                    Ok(ColoringOutcome::Minor(_)) => {
                        return Err(format!("{rows}x{cols} p={p}: grid gave a K5 model"))
                    }
                    Err(e) => return Err(format!("{rows}x{cols} p={p}: {e}")),
                };
                let v = verify_p_centered(&g, &col.zeta, p, VerifyMode::Exact);
                if let Some(set) = v.violation {
                    return Err(format!("{rows}x{cols} p={p}: violation on {set:?}"));
                }
                // the library enumerator against the power-set oracle
                ensure(brute_centered(&g, &col.zeta.values, p), || {
                    format!("{rows}x{cols} p={p}: oracle finds a violation")
                })?;
                ensure(v.exhaustive, || "verification was not exhaustive".into())?;
                ensure(start.elapsed().as_secs() < 60, || {
                    format!("{rows}x{cols} p={p} took over a minute")
                })?;
                out.push(GridRun {
                    label: format!("{rows}x{cols} p={p}"),
                    palette: col.zeta.palette_size(),
                    bound: zeta_bound(lrs.c, 5, p),
                });
            }
        }
    }
    Ok(out)
}

fn criterion_1() -> Outcome {
    let runs = grid_runs()?;
    Ok(format!("{} grid runs, zero violations", runs.len()))
}

fn criterion_2() -> Outcome {
    let runs = grid_runs()?;
    let mut worst = 0.0f64;
    for run in &runs {
        ensure(run.palette <= run.bound, || {
            format!("{}: palette {} > bound {}", run.label, run.palette, run.bound)
        })?;
        worst = worst.max(run.palette as f64 / run.bound as f64);
    }
    Ok(format!("max palette/bound ratio {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..200 {
        let n = rng.gen_range(1..=6);
        let g = random_connected_graph(n, rng.gen_range(0.0..0.8), &mut rng);
        let want = brute_chromatic(&g);
        let got = chi_p_exact(&g, 1, n).map(|(k, _)| k);
        ensure(got == Some(want), || {
            format!(
                "graph {i} ({:?}): chi_1 {got:?} vs chromatic {want}",
                g.edges().collect::<Vec<_>>()
            )
        })?;
    }
    Ok("200 graphs, zero mismatches".into())
}

/// Edge bags of a tree, rooted at a bag holding vertex 0.
fn tree_decomposition(g: &Graph) -> TreeDecomposition {
    let edges: Vec<_> = g.edges().collect();
    if edges.is_empty() {
        return TreeDecomposition::trivial(g);
    }
    let bags: Vec<VertexSet> = edges.iter().map(|&(u, v)| [u, v].into_iter().collect()).collect();
    let mut tree_edges = Vec::new();
    for i in 0..edges.len() {
        for j in 0..i {
            if !bags[i].is_disjoint(&bags[j]) && !tree_edges.iter().any(|&(_, b)| b == i) {
                tree_edges.push((j, i));
            }
        }
    }
    TreeDecomposition::new(Tree::new(bags.len(), &tree_edges).unwrap(), bags).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut runs = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=14);
        let g = random_tree(n, &mut rng);
        let td = tree_decomposition(&g);
        ensure(validate_td(&g, &td).is_empty(), || {
            "edge-bag decomposition invalid".into()
        })?;
        let sigma = elimination_order(&td, &RootedTree::new(&td.tree, 0));
        for p in 1..=4 {
            let c = tw_backend(&g, &td, &sigma, p, Backend::Treedepth).map_err(|e| e.to_string())?;
            ensure(c.palette_size() <= p + 1, || {
                format!("n={n} p={p}: {} colors", c.palette_size())
            })?;
            let v = verify_p_centered_ordered(&g, &sigma, &c, p, VerifyMode::Exact);
            ensure(v.is_ok(), || format!("n={n} p={p}: violation {:?}", v.violation))?;
            ensure(brute_ordered(&g, &sigma, &c.values, p), || {
                format!("n={n} p={p}: oracle disagrees")
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} tree runs, all within p+1 colors"))
}

fn lca_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=30);
    let parents = random_parents(n, rng);
    let tree = tree_of(&parents);
    let rooted = RootedTree::new(&tree, rng.gen_range(0..n));
    let m = rng.gen_range(1..=n.min(8));
    let y: std::collections::BTreeSet<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
    let x = lca_closure(&rooted, &y).map_err(|e| e.to_string())?;
    ensure(y.is_subset(&x), || "closure misses Y".into())?;
    ensure(x.len() < 2 * y.len(), || {
        format!("|LCA| = {} for |Y| = {}", x.len(), y.len())
    })?;
    ensure(lca_closure(&rooted, &x).unwrap() == x, || {
        "closure not idempotent".into()
    })?;
    for (comp, border) in tree.components_without(&x) {
        ensure(border.len() <= 2, || {
            format!("component {comp:?} touches {border:?}")
        })?;
    }
    Ok(())
}

fn torso_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=10);
    let g = random_connected_graph(n, rng.gen_range(0.0..0.4), rng);
    let w: VertexSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    let t = torso(&g, &w);
    let wm = mask_of(&w);
    for h in connected_masks(&g) {
        let meet = h & wm;
        ensure(meet == 0 || connected_mask(&t, meet), || {
            format!("H = {:?}, W = {w:?}", set_of(h))
        })?;
    }
    Ok(())
}

fn stability_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=25);
    let parents = random_parents(n, rng);
    let tree = tree_of(&parents);
    let parts = random_subtree_partition(&parents, rng.gen_range(0.1..0.7), rng);
    let td = TreeDecomposition::new(tree.clone(), vec![VertexSet::new(); n]).unwrap();
    let pair = centered_core::decomposition::NormalPair::new(td, parts).unwrap();
    let rooted = RootedTree::new(&tree, rng.gen_range(0..n));
    let seed: std::collections::BTreeSet<usize> =
        (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..n)).collect();
    let x = lca_closure(&rooted, &seed).unwrap();
    let qx = parts_hit(&pair, &x);
    // grow Y inside the parts already hit
    let mut y = x.clone();
    for &q in &qx {
        for &node in &pair.parts[q] {
            if rng.gen_bool(0.3) {
                y.insert(node);
            }
        }
    }
    ensure(parts_hit(&pair, &y) == qx, || "Y left Q(X)".into())?;
    let closed = lca_closure(&rooted, &y).unwrap();
    ensure(parts_hit(&pair, &closed) == qx, || {
        format!("Q(LCA(Y)) != Q(Y) for X={x:?} Y={y:?}")
    })
}

fn natural_case(rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let n = rng.gen_range(1..=12);
    let (g, td) = random_partial_ktree(n, rng.gen_range(1..=3), 0.5, rng);
    let pair = random_normal_pair(td, rng.gen_range(0.0..0.6), rng);
    let was_natural = is_natural(&g, &pair.td);
    let nat = make_natural(&g, &pair).map_err(|e| e.to_string())?;
    ensure(validate_td(&g, &nat.pair.td).is_empty(), || {
        "output decomposition invalid".into()
    })?;
    ensure(is_natural(&g, &nat.pair.td), || "output not natural".into())?;
    nat.pair.check_parts()?;
    check_refinement(&nat.pair, &pair, &nat.witness)?;
    for w in nat.potentials.windows(2) {
        ensure(w[1] < w[0], || {
            format!("potential did not drop: {:?} -> {:?}", w[0], w[1])
        })?;
    }
    let before = potential(&pair.td, g.n());
    let after = potential(&nat.pair.td, g.n());
    if was_natural {
        ensure(nat.potentials.len() <= 1, || "natural input was split".into())?;
    } else {
        ensure(after < before, || format!("potential {before:?} -> {after:?}"))?;
    }
    Ok(!was_natural)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        lca_case(&mut rng).map_err(|e| format!("LCA case {i}: {e}"))?;
    }
    for i in 0..1000 {
        torso_case(&mut rng).map_err(|e| format!("torso case {i}: {e}"))?;
    }
    for i in 0..1000 {
        stability_case(&mut rng).map_err(|e| format!("stability case {i}: {e}"))?;
    }
    let mut split = 0;
    for i in 0..1000 {
        split += natural_case(&mut rng).map_err(|e| format!("make-natural case {i}: {e}"))? as usize;
    }
    Ok(format!(
        "4 x 1000 cases; {split} make-natural inputs were not natural"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut hits, mut packs) = (0, 0);
    for i in 0..1000 {
        let n = rng.gen_range(1..=12);
        let (g, td) = random_partial_ktree(n, rng.gen_range(1..=3), 0.3, &mut rng);
        let members = random_family(&g, rng.gen_range(0..6), &mut rng);
        let fam = ExplicitFamily::new(members.clone());
        let d = rng.gen_range(0..=3);
        let rooted = RootedTree::new(&td.tree, rng.gen_range(0..td.n_nodes()));
        let out = helly_hitting_or_packing(&td, &rooted, &fam, d).map_err(|e| format!("case {i}: {e}"))?;
        verify_helly_outcome(&td, &fam, d, &out).map_err(|e| format!("case {i}: {e}"))?;
        // re-check against the member list directly
        match &out {
            HellyOutcome::Hitting(nodes) => {
                hits += 1;
                let hit = td.union_of(nodes.iter().copied());
                ensure(
                    nodes.len() <= d && members.iter().all(|m| !m.is_disjoint(&hit)),
                    || format!("case {i}: hitting set {nodes:?} misses a member"),
                )?;
            }
            HellyOutcome::Packing(ps) => {
                packs += 1;
                let total: usize = ps.iter().map(|m| m.len()).sum();
                let union: VertexSet = ps.iter().flatten().copied().collect();
                ensure(
                    ps.len() == d + 1 && total == union.len() && ps.iter().all(|m| members.contains(m)),
                    || format!("case {i}: bad packing {ps:?}"),
                )?;
            }
        }
    }
    Ok(format!("1000 cases: {hits} hitting, {packs} packing"))
}

fn good_case(g: &Graph, lrs: &LayeredRsDecomposition, rng: &mut ChaCha8Rng) -> Result<bool, String> {
    let members = random_family(g, rng.gen_range(0..8), rng);
    let fam = ExplicitFamily::new(members);
    let d = rng.gen_range(1..=3);
    let p = rng.gen_range(1..=3);
    let all = g.vertex_set();
    match good_witness(g, lrs, &all, &fam, d).map_err(|e| e.to_string())? {
        GoodOutcome::Packing(ps) => {
            let union: VertexSet = ps.iter().flatten().copied().collect();
            let total: usize = ps.iter().map(|m| m.len()).sum();
            ensure(
                ps.len() == d + 1 && union.len() == total && ps.iter().all(|m| fam.query(m).is_some()),
                || format!("bad packing {ps:?}"),
            )?;
            Ok(false)
        }
        GoodOutcome::Witness(w) => {
            let phi = phi_from_lrs(g, lrs, p).map_err(|e| e.to_string())?;
            let r = check_goodness_witness(g, &all, &w.z, &w.psi, &phi, &fam, VerifyMode::Exact);
            ensure(r.is_ok(), || format!("witness fails: {r:?}"))?;
            let bounds = GoodBounds::new(lrs.c, d);
            ensure(w.palette_size() <= bounds.palette, || {
                format!("palette {}", w.palette_size())
            })?;
            ensure(w.b.len() <= bounds.b, || format!("|B| = {}", w.b.len()))?;
            for a in &w.components {
                ensure(a.x1.len() <= bounds.x1, || format!("|X1| = {}", a.x1.len()))?;
                ensure(a.x3.len() <= bounds.x3, || format!("|X3| = {}", a.x3.len()))?;
            }
            Ok(true)
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut witnesses = 0;
    let mut cases = 0;
    for (rows, cols) in [(1, 1), (2, 2), (2, 5), (3, 3), (3, 4), (2, 7)] {
        let (g, lrs) = grid_instance(rows, cols).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            witnesses +=
                good_case(&g, &lrs, &mut rng).map_err(|e| format!("grid {rows}x{cols}: {e}"))? as usize;
            cases += 1;
        }
    }
    for i in 0..100 {
        let n = rng.gen_range(1..=14);
        let (g, td) = random_series_parallel(n, &mut rng);
        let lrs = lrs_from_td(&g, &td, 0, &[]).map_err(|e| e.to_string())?;
        witnesses += good_case(&g, &lrs, &mut rng).map_err(|e| format!("series-parallel {i}: {e}"))? as usize;
        cases += 1;
    }
    Ok(format!(
        "{cases} cases: {witnesses} witnesses, {} packings",
        cases - witnesses
    ))
}

fn criterion_8() -> Outcome {
    let mut report = Vec::new();
    let (hub, hub_td) = hub_path(3, 40);
    let hub_lrs = lrs_from_td(&hub, &hub_td, 0, &[]).map_err(|e| e.to_string())?;
    let k6 = Graph::complete(6);
    let k6_lrs = lrs_from_td(&k6, &TreeDecomposition::trivial(&k6), 0, &[]).map_err(|e| e.to_string())?;
    for (name, g, lrs) in [("hub path", &hub, &hub_lrs), ("K6", &k6, &k6_lrs)] {
        match minor_free_coloring(g, lrs, 5, 1, Backend::Chordal).map_err(|e| format!("{name}: {e}"))? {
            ColoringOutcome::Minor(m) => {
                ensure(m.branch_sets.len() == 5, || {
                    format!("{name}: {} branch sets", m.branch_sets.len())
                })?;
                validate_clique_model(g, &m.branch_sets).map_err(|e| format!("{name}: {e}"))?;
                report.push(format!("{name}: K5 model"));
            }
            ColoringOutcome::Colored(col) => {
                let mode = if g.n() <= 14 {
                    VerifyMode::Exact
                } else {
                    VerifyMode::Sampled {
                        samples: VerifyMode::DEFAULT_SAMPLES,
                        seed: 8,
                    }
                };
                let v = verify_p_centered(g, &col.zeta, 1, mode);
                ensure(v.is_ok(), || {
                    format!("{name}: coloring violation {:?}", v.violation)
                })?;
                report.push(format!("{name}: verified coloring"));
            }
        }
    }
    Ok(report.join(", "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("end-to-end soundness on grids", criterion_1),
        ("palette bound on grids", criterion_2),
        ("chi_1 equals chromatic number", criterion_3),
        ("treedepth backend on trees", criterion_4),
        ("structural property suite", criterion_5),
        ("Helly dichotomy", criterion_6),
        ("good-witness suite", criterion_7),
        ("minor certificate path", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
