//! `pcenter`: p-centered colorings of K_t-minor-free graphs from layered
//! decompositions, plus the verifiers behind them.
//!
//! Exit codes: 0 ok, 1 verification failure or minor certificate, 2 input
//! error, 3 internal error or violated runtime bound.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use centered_core::centered::{chi_p_exact, verify_p_centered, Backend, VerifyMode};
use centered_core::decomposition::{
    helly_hitting_or_packing, is_natural, make_natural, verify_helly_outcome, ExplicitFamily, NormalPair,
    RootedTree,
};
use centered_core::good::{check_goodness_witness, good_witness, phi_from_lrs, GoodOutcome};
use centered_core::graph::{Graph, VertexSet};
use centered_core::io;
use centered_core::layered::{ensure_valid_lrs, grid_instance, LayeredRsDecomposition};
use centered_core::partition::{
    check_part_centers, check_partition_structure, minor_free_coloring, palette_constant, rho_constant,
    ColoringOutcome,
};
use centered_core::Error;

#[derive(Parser)]
#[command(name = "pcenter", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Identity,
    Treedepth,
    Chordal,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Identity => Backend::Identity,
            BackendArg::Treedepth => Backend::Treedepth,
            BackendArg::Chordal => Backend::Chordal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exact up to 14 vertices, sampled above.
    Auto,
    Exact,
    Sampled,
}

#[derive(clap::Args, Clone, Copy)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = VerifyMode::DEFAULT_SAMPLES)]
    samples: usize,
}

impl CheckArgs {
    fn mode(&self, n: usize) -> VerifyMode {
        let sampled = VerifyMode::Sampled {
            samples: self.samples,
            seed: self.seed,
        };
        match self.mode {
            ModeArg::Exact => VerifyMode::Exact,
            ModeArg::Sampled => sampled,
            ModeArg::Auto if n <= 14 => VerifyMode::Exact,
            ModeArg::Auto => sampled,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Color a graph and verify the result.
    Color {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lrs: PathBuf,
        /// The graph is claimed to have no K_t minor.
        #[arg(short)]
        t: usize,
        /// Connected subgraphs with at most p colors need a unique color.
        #[arg(short)]
        p: usize,
        #[arg(long, value_enum, default_value_t = BackendArg::Chordal)]
        backend: BackendArg,
        #[command(flatten)]
        check: CheckArgs,
        /// Coloring file to write.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Partition JSON to write.
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
    /// Check a coloring, a partition or a goodness witness.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Connected subgraphs with at most p colors need a unique color.
        #[arg(short)]
        p: usize,
        #[arg(long, required_unless_present_any = ["partition", "witness"])]
        coloring: Option<PathBuf>,
        #[arg(long, requires_all = ["lrs", "t"])]
        partition: Option<PathBuf>,
        #[arg(long, requires_all = ["lrs", "family"])]
        witness: Option<PathBuf>,
        #[arg(long)]
        lrs: Option<PathBuf>,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(short)]
        t: Option<usize>,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Exact χ_p by exhaustive search (small graphs only).
    ChiP {
        #[arg(long)]
        graph: PathBuf,
        /// Connected subgraphs with at most p colors need a unique color.
        #[arg(short)]
        p: usize,
        #[arg(long)]
        max_colors: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refine a tree decomposition until it is natural.
    MakeNatural {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hitting set or packing for a family; with --lrs also a goodness witness.
    Helly {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
        /// One member per line.
        #[arg(long)]
        family: PathBuf,
        #[arg(short)]
        d: usize,
        #[arg(long)]
        lrs: Option<PathBuf>,
        #[arg(long, requires = "lrs")]
        witness_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Palette sizes on square grids, as TSV.
    Bench {
        /// Comma-separated grid side lengths; may be empty.
        #[arg(long, default_value = "2,3,4", value_parser = parse_list)]
        grids: List,
        #[arg(long, default_value = "1,2,3", value_parser = parse_list)]
        ps: List,
        #[arg(short, default_value_t = 5)]
        t: usize,
        #[arg(long, value_enum, default_value_t = BackendArg::Chordal)]
        backend: BackendArg,
    },
}

#[derive(Clone)]
struct List(Vec<usize>);

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(List)
}

/// A command either succeeds or reports a failed check; errors are separate.
enum Status {
    Ok,
    Failed,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    io::parse_gr(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_lrs(path: &Path, g: &Graph) -> anyhow::Result<LayeredRsDecomposition> {
    let lrs =
        io::parse_lrs_json(&read(path)?, g.n()).with_context(|| format!("parsing {}", path.display()))?;
    ensure_valid_lrs(g, &lrs).with_context(|| format!("checking {}", path.display()))?;
    Ok(lrs)
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn one_based(set: &VertexSet) -> String {
    set.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn check_params(t: Option<usize>, p: usize) -> anyhow::Result<()> {
    if let Some(t) = t {
        if t < 2 {
            bail!(Error::Format(format!("t must be at least 2, got {t}")));
        }
    }
    if p < 1 {
        bail!(Error::Format("p must be at least 1".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Color {
            graph,
            lrs,
            t,
            p,
            backend,
            check,
            out,
            partition_out,
        } => {
            check_params(Some(t), p)?;
            let g = read_graph(&graph)?;
            let lrs = read_lrs(&lrs, &g)?;
            let start = Instant::now();
            match minor_free_coloring(&g, &lrs, t, p, backend.into())? {
                ColoringOutcome::Minor(m) => {
                    println!("minor certificate: K_{t} model");
                    for set in &m.branch_sets {
                        println!("branch {}", one_based(set));
                    }
                    Ok(Status::Failed)
                }
                ColoringOutcome::Colored(col) => {
                    let elapsed = start.elapsed();
                    let verdict = verify_p_centered(&g, &col.zeta, p, check.mode(g.n()));
                    if let Some(partition_out) = partition_out {
                        std::fs::write(&partition_out, io::write_partition_json(&col.partition))
                            .with_context(|| format!("writing {}", partition_out.display()))?;
                    }
                    if out.is_some() {
                        emit(&out, &io::write_coloring(&col.zeta))?;
                    }
                    let bound = palette_constant(lrs.c, t).saturating_mul(p.saturating_pow(t as u32 - 1));
                    println!("vertices\t{}", g.n());
                    println!("parts\t{}", col.partition.parts.len());
                    println!("palette\t{}", col.zeta.palette_size());
                    println!("bound\t{bound}");
                    println!("time_ms\t{}", elapsed.as_millis());
                    println!("checked\t{}", verdict.sets_checked);
                    match verdict.violation {
                        None => Ok(Status::Ok),
                        Some(set) => {
                            println!("violation\t{}", one_based(&set));
                            Ok(Status::Failed)
                        }
                    }
                }
            }
        }
        Command::Verify {
            graph,
            p,
            coloring,
            partition,
            witness,
            lrs,
            family,
            t,
            check,
        } => {
            check_params(t, p)?;
            let g = read_graph(&graph)?;
            let mode = check.mode(g.n());
            let mut ok = true;
            if let Some(path) = coloring {
                let c = io::parse_coloring(&read(&path)?, g.n())
                    .with_context(|| format!("parsing {}", path.display()))?;
                let v = verify_p_centered(&g, &c, p, mode);
                match v.violation {
                    None => println!("coloring ok ({} sets checked)", v.sets_checked),
                    Some(set) => {
                        println!("coloring violation: {}", one_based(&set));
                        ok = false;
                    }
                }
            }
            if let Some(path) = partition {
                let lrs = read_lrs(lrs.as_ref().unwrap(), &g)?;
                let t = t.unwrap();
                let res = io::parse_partition_json(&read(&path)?, g.n())
                    .with_context(|| format!("parsing {}", path.display()))?;
                let phi = phi_from_lrs(&g, &lrs, p)?;
                let structure =
                    check_partition_structure(&g, &res, t, &res.parts[..res.r], rho_constant(lrs.c, t));
                let centers = check_part_centers(&g, &res, &phi.values, p, mode);
                match (structure, centers.violation) {
                    (Ok(()), None) => println!("partition ok ({} sets checked)", centers.sets_checked),
                    (Err(e), _) => {
                        println!("partition invalid: {e}");
                        ok = false;
                    }
                    (_, Some(set)) => {
                        println!("partition part without center: {}", one_based(&set));
                        ok = false;
                    }
                }
            }
            if let Some(path) = witness {
                let lrs = read_lrs(lrs.as_ref().unwrap(), &g)?;
                let fam_path = family.as_ref().unwrap();
                let fam = ExplicitFamily::new(io::parse_family(&read(fam_path)?, g.n())?);
                let raw: serde_json::Value = serde_json::from_str(&read(&path)?)
                    .map_err(|e| Error::Format(format!("witness JSON: {e}")))?;
                let z: Vec<usize> = serde_json::from_value(raw["Z"].clone())
                    .map_err(|e| Error::Format(format!("witness Z: {e}")))?;
                let pairs: Vec<[usize; 2]> = serde_json::from_value(raw["psi"].clone())
                    .map_err(|e| Error::Format(format!("witness psi: {e}")))?;
                let psi = io::partial_coloring_from_pairs(&pairs, g.n())?;
                let z: VertexSet = z
                    .iter()
                    .map(|&v| match v {
                        1.. if v <= g.n() => Ok(v - 1),
                        _ => Err(Error::Format(format!("witness Z: vertex {v} out of range"))),
                    })
                    .collect::<Result<_, _>>()?;
                let phi = phi_from_lrs(&g, &lrs, p)?;
                let r = check_goodness_witness(&g, &g.vertex_set(), &z, &psi, &phi, &fam, mode);
                if r.is_ok() {
                    println!("witness ok ({} sets checked)", r.pc2.sets_checked);
                } else {
                    println!("witness failed: {r:?}");
                    ok = false;
                }
            }
            Ok(if ok { Status::Ok } else { Status::Failed })
        }
        Command::ChiP {
            graph,
            p,
            max_colors,
            out,
        } => {
            check_params(None, p)?;
            let g = read_graph(&graph)?;
            let cap = max_colors.unwrap_or(g.n());
            match chi_p_exact(&g, p, cap) {
                Some((k, c)) => {
                    println!("chi_{p}\t{k}");
                    if out.is_some() {
                        emit(&out, &io::write_coloring(&c))?;
                    }
                }
                None => println!("chi_{p}\t> {cap}"),
            }
            Ok(Status::Ok)
        }
        Command::MakeNatural { graph, td, out } => {
            let g = read_graph(&graph)?;
            let (td, n) = io::parse_td(&read(&td)?)?;
            if n != g.n() {
                bail!(Error::Format(format!(
                    "decomposition is for {n} vertices, graph has {}",
                    g.n()
                )));
            }
            let parts = (0..td.n_nodes()).map(|x| [x].into_iter().collect()).collect();
            let pair = NormalPair::new(td, parts)?;
            let nat = make_natural(&g, &pair)?;
            let natural = is_natural(&g, &nat.pair.td);
            eprintln!(
                "nodes {} -> {}, splits {}, natural {natural}",
                pair.td.n_nodes(),
                nat.pair.td.n_nodes(),
                nat.potentials.len().saturating_sub(1)
            );
            emit(&out, &io::write_td(&nat.pair.td, g.n()))?;
            Ok(if natural { Status::Ok } else { Status::Failed })
        }
        Command::Helly {
            graph,
            td,
            family,
            d,
            lrs,
            witness_out,
            out,
        } => {
            let g = read_graph(&graph)?;
            let (td, _) = io::parse_td(&read(&td)?)?;
            let fam = ExplicitFamily::new(io::parse_family(&read(&family)?, g.n())?);
            let rooted = RootedTree::new(&td.tree, 0);
            let outcome = helly_hitting_or_packing(&td, &rooted, &fam, d)?;
            if let Err(e) = verify_helly_outcome(&td, &fam, d, &outcome) {
                bail!(Error::Internal(format!("Helly outcome failed its check: {e}")));
            }
            emit(&out, &format!("{}\n", io::helly_json(&outcome)))?;
            if let Some(lrs) = lrs {
                let lrs = read_lrs(&lrs, &g)?;
                match good_witness(&g, &lrs, &g.vertex_set(), &fam, d)? {
                    GoodOutcome::Packing(members) => {
                        eprintln!("goodness witness: {} disjoint members instead", members.len());
                    }
                    GoodOutcome::Witness(w) => {
                        let text = serde_json::to_string_pretty(&io::witness_json(&w))?;
                        emit(&witness_out, &format!("{text}\n"))?;
                    }
                }
            }
            Ok(Status::Ok)
        }
        Command::Bench {
            grids,
            ps,
            t,
            backend,
        } => {
            check_params(Some(t), 1)?;
            let mut table = String::from("p\tt\tn\tpalette\tbound\ttime_ms\n");
            for &side in &grids.0 {
                let (g, lrs) = grid_instance(side, side)?;
                for &p in &ps.0 {
                    check_params(None, p)?;
                    let start = Instant::now();
                    let palette = match minor_free_coloring(&g, &lrs, t, p, backend.into())? {
                        ColoringOutcome::Colored(col) => col.zeta.palette_size().to_string(),
                        ColoringOutcome::Minor(_) => "minor".into(),
                    };
                    let bound = palette_constant(lrs.c, t).saturating_mul(p.saturating_pow(t as u32 - 1));
                    let _ = writeln!(
                        table,
                        "{p}\t{t}\t{}\t{palette}\t{bound}\t{}",
                        g.n(),
                        start.elapsed().as_millis()
                    );
                }
            }
            print!("{table}");
            Ok(Status::Ok)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::Internal(_)
            | Error::BoundViolation { .. }
            | Error::Backend { .. }
            | Error::InconsistentOracle { .. },
        ) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
