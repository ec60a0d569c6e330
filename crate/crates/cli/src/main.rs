use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use oneshot_core::algebraic::{choose_params, AlgebraicBasic, AlgebraicWeighted, WeightedParams};
use oneshot_core::graph::{gen_gnp, gen_stars, gen_udg, load_edge_list, save_edge_list};
use oneshot_core::nbr::{build_nbr_graph, check_algo_on_nbr_graph, chromatic_number};
use oneshot_core::perm::{certify_with_retries, Randomized, SharedOrder, TieBreak};
use oneshot_core::sim::{run_one_shot, NodeAlgorithm, RoundTrace, SharedConfig};
use oneshot_core::tdma::{to_schedule, utilization};
use oneshot_core::verify::{verify, VerificationReport};
use oneshot_core::{Error, Graph, Multicoloring};

#[derive(Parser)]
#[command(
    name = "oneshot",
    version,
    about = "One-round multicoloring of interference graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph as an edge list.
    Gen(GenArgs),
    /// Run a one-shot algorithm on a graph and verify the result.
    Run(RunArgs),
    /// Re-check a coloring against a graph.
    Verify(VerifyArgs),
    /// Build the one-hop neighborhood graph N1(N, Δ).
    Nbrgraph(NbrArgs),
    /// Convert a coloring into a TDMA schedule.
    Export(ExportArgs),
    /// Per-degree fraction table, utilization and message statistics as CSV.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    Udg,
    Stars,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Node count (gnp, udg).
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability (gnp).
    #[arg(long)]
    p: Option<f64>,
    /// Connection radius in the unit square (udg).
    #[arg(long)]
    radius: Option<f64>,
    /// Number of stars (stars).
    #[arg(long)]
    count: Option<usize>,
    /// Leaves per star (stars).
    #[arg(long)]
    degree: Option<usize>,
    /// Size of the ID space.
    #[arg(long = "N")]
    id_space: u64,
    /// Drop edges greedily until no degree exceeds this.
    #[arg(long)]
    cap_degree: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Randomized,
    SharedOrder,
    AlgebraicBasic,
    AlgebraicWeighted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Strict,
    SmallerId,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    graph: PathBuf,
    /// Coloring JSON; stdout if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the verification report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write the message trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Known node count; defaults to the graph's.
    #[arg(long)]
    n: Option<usize>,
    /// Known ID-space size; defaults to the graph's.
    #[arg(long = "N")]
    id_space: Option<u64>,
    /// Known maximum degree; defaults to the graph's.
    #[arg(long = "Delta")]
    max_degree: Option<usize>,
    #[command(flatten)]
    knobs: AlgoKnobs,
}

/// Per-algorithm settings shared by `run` and `nbrgraph --certify`.
#[derive(Args)]
struct AlgoKnobs {
    /// Recursion depth ℓ of the algebraic construction.
    #[arg(long, default_value_t = 0)]
    depth: usize,
    /// Slack factor f of every algebraic level.
    #[arg(long, default_value_t = 2.0)]
    slack: f64,
    /// Multiplier on the shared-order palette.
    #[arg(long, default_value_t = 1)]
    factor: u64,
    /// Certify the shared-order family over all views first, resampling up to
    /// this many times.
    #[arg(long)]
    retries: Option<u32>,
    #[arg(long, value_enum, default_value_t = Tie::Strict)]
    tie_break: Tie,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short, long)]
    coloring: PathBuf,
    /// Defaults to the ε recorded in the coloring.
    #[arg(long)]
    eps: Option<f64>,
    /// Fail unless every node also meets its (1-ε)k/(δ+1) target.
    #[arg(long)]
    strict: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct NbrArgs {
    #[arg(long = "N")]
    id_space: u64,
    #[arg(long = "Delta")]
    max_degree: usize,
    /// Compute the exact chromatic number.
    #[arg(long)]
    chi: bool,
    /// Check an algorithm on every vertex and edge.
    #[arg(long, value_enum)]
    certify: Option<Algo>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    knobs: AlgoKnobs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short, long)]
    coloring: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(short, long)]
    coloring: PathBuf,
    #[arg(long)]
    trace: Option<PathBuf>,
}

/// A failed check, as opposed to an error.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Nbrgraph(a) => cmd_nbrgraph(a),
        Command::Export(a) => cmd_export(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<CheckFailed>().is_some() {
        return 1;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::RefusedInvalid { .. }) => 1,
        Some(Error::TooLarge { .. }) => 3,
        _ => 2,
    }
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed={s}");
        s
    })
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> anyhow::Result<Graph> {
    load_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_coloring(path: &Path) -> anyhow::Result<Multicoloring> {
    Multicoloring::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<()> {
    let seed = seed_or_entropy(a.seed);
    let need = |v: Option<f64>, flag: &str| {
        v.with_context(|| format!("--{flag} is required for this model"))
    };
    let g = match a.model {
        Model::Gnp => gen_gnp(
            a.n.context("--n is required")?,
            need(a.p, "p")?,
            a.id_space,
            seed,
        )?,
        Model::Udg => gen_udg(
            a.n.context("--n is required")?,
            need(a.radius, "radius")?,
            a.id_space,
            seed,
        )?,
        Model::Stars => gen_stars(
            a.count.context("--count is required")?,
            a.degree.context("--degree is required")?,
            a.id_space,
            seed,
        )?,
    };
    let g = match a.cap_degree {
        Some(cap) => g.cap_degree(cap),
        None => g,
    };
    emit(a.output.as_deref(), &save_edge_list(&g))
}

fn tie(t: Tie) -> TieBreak {
    match t {
        Tie::Strict => TieBreak::Strict,
        Tie::SmallerId => TieBreak::SmallerId,
    }
}

fn build_algo(
    algo: Algo,
    config: SharedConfig,
    eps: f64,
    seed: u64,
    knobs: &AlgoKnobs,
) -> anyhow::Result<Box<dyn NodeAlgorithm>> {
    let slack = vec![knobs.slack; knobs.depth + 1];
    Ok(match algo {
        Algo::Randomized => Box::new(Randomized::new(config, eps, tie(knobs.tie_break))?),
        Algo::SharedOrder => match knobs.retries {
            None => Box::new(SharedOrder::generate(config, eps, knobs.factor, seed)?),
            Some(retries) => {
                let k = oneshot_core::perm::shared_k(
                    config.id_space,
                    config.max_degree,
                    eps,
                    knobs.factor,
                )?;
                let cf = certify_with_retries(
                    k,
                    config.id_space,
                    config.max_degree,
                    eps,
                    seed,
                    retries,
                )?;
                eprintln!(
                    "certification: passed={} seeds={:?} views={} failing={}",
                    cf.report.passed,
                    cf.seeds_tried,
                    cf.report.views_checked,
                    cf.report.failing_views
                );
                if !cf.report.passed {
                    return Err(CheckFailed(format!(
                        "no certified family after {} resamples",
                        retries
                    ))
                    .into());
                }
                Box::new(SharedOrder::new(config, eps, cf.family)?)
            }
        },
        Algo::AlgebraicBasic => Box::new(AlgebraicBasic::new(choose_params(
            config.id_space,
            config.max_degree.max(1),
            knobs.depth,
            &slack,
        )?)),
        Algo::AlgebraicWeighted => Box::new(AlgebraicWeighted::new(WeightedParams::build(
            config.id_space,
            config.max_degree.max(1),
            knobs.depth,
            &slack,
            eps,
        )?)),
    })
}

fn summarize(r: &VerificationReport) {
    eprintln!(
        "valid={} palette={} worst_ratio={:.4} meets_target={} shortfalls={} violations={}",
        r.valid,
        r.palette_size,
        r.worst_ratio,
        r.meets_target,
        r.shortfall_count,
        r.violation_count
    );
}

fn cmd_run(a: RunArgs) -> anyhow::Result<()> {
    let seed = seed_or_entropy(a.seed);
    let g = load_graph(&a.graph)?;
    let config = SharedConfig {
        n: a.n.unwrap_or(g.n()),
        id_space: a.id_space.unwrap_or(g.id_space()),
        max_degree: a.max_degree.unwrap_or(g.max_degree()),
    };
    let algo = build_algo(a.algo, config, a.eps, seed, &a.knobs)?;
    let (m, trace) = run_one_shot(&g, algo.as_ref(), seed)?;
    let report = verify(&g, &m, a.eps)?;
    summarize(&report);
    emit(a.output.as_deref(), &m.to_json()?)?;
    if let Some(p) = &a.report {
        emit(Some(p), &report.to_json()?)?;
    }
    if let Some(p) = &a.trace {
        emit(Some(p), &trace.to_json()?)?;
    }
    if !report.valid {
        bail!(CheckFailed(format!(
            "{} violations",
            report.violation_count
        )));
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> anyhow::Result<()> {
    let g = load_graph(&a.graph)?;
    let m = load_coloring(&a.coloring)?;
    let eps = a.eps.or(m.params.epsilon).unwrap_or(1.0);
    let report = verify(&g, &m, eps)?;
    summarize(&report);
    if let Some(p) = &a.output {
        emit(Some(p), &report.to_json()?)?;
    }
    if !report.valid {
        bail!(CheckFailed(format!(
            "{} violations",
            report.violation_count
        )));
    }
    if a.strict && !report.meets_target {
        bail!(CheckFailed(format!(
            "{} nodes below target",
            report.shortfall_count
        )));
    }
    Ok(())
}

fn cmd_nbrgraph(a: NbrArgs) -> anyhow::Result<()> {
    let ng = build_nbr_graph(a.id_space, a.max_degree)?;
    print!("vertices={} edges={}", ng.vertex_count(), ng.edge_count());
    if a.chi {
        print!(" chi={}", chromatic_number(&ng)?);
    }
    println!();
    if let Some(algo) = a.certify {
        // Only the shared-order family consumes a seed here.
        let seed = match algo {
            Algo::SharedOrder => seed_or_entropy(a.seed),
            _ => a.seed.unwrap_or(0),
        };
        let config = SharedConfig {
            n: a.id_space as usize,
            id_space: a.id_space,
            max_degree: a.max_degree,
        };
        let algo = build_algo(algo, config, a.eps, seed, &a.knobs)?;
        let cert = check_algo_on_nbr_graph(algo.as_ref(), &ng)?;
        println!(
            "algorithm={} palette={} edges_checked={} intersecting={} fraction_failures={}",
            cert.algorithm,
            cert.palette_size,
            cert.edges_checked,
            cert.intersecting_edges,
            cert.fraction_failures
        );
        if !cert.passed() {
            bail!(CheckFailed(format!(
                "{} failed the neighborhood-graph check",
                cert.algorithm
            )));
        }
    }
    Ok(())
}

fn cmd_export(a: ExportArgs) -> anyhow::Result<()> {
    let g = load_graph(&a.graph)?;
    let m = load_coloring(&a.coloring)?;
    let s = to_schedule(&g, &m)?;
    let text = match a.format {
        Format::Json => s.to_json()?,
        Format::Csv => s.to_csv(),
    };
    emit(a.output.as_deref(), &text)
}

fn cmd_stats(a: StatsArgs) -> anyhow::Result<()> {
    let g = load_graph(&a.graph)?;
    let m = load_coloring(&a.coloring)?;
    let report = verify(&g, &m, m.params.epsilon.unwrap_or(1.0))?;
    println!("degree,nodes,min_colors,required,rho,meets_target");
    for c in &report.degree_classes {
        println!(
            "{},{},{},{},{:.6},{}",
            c.degree, c.nodes, c.min_colors, c.required, c.rho, c.meets_target
        );
    }
    if report.valid {
        let u = utilization(&to_schedule(&g, &m)?, &g)?;
        println!();
        println!("frame_length,mean_duty_cycle,baseline_duty_cycle");
        println!(
            "{},{:.6},{:.6}",
            u.frame_length, u.mean_duty_cycle, u.baseline_duty_cycle
        );
    }
    if let Some(p) = &a.trace {
        let t: RoundTrace = serde_json::from_str(&read(p)?).context("parsing trace")?;
        let sent: usize = t.nodes.iter().map(|n| n.sent_bytes).sum();
        let received: usize = t.nodes.iter().map(|n| n.received_bytes).sum();
        println!();
        println!("algorithm,nodes,message_count,max_payload_bytes,sent_bytes,received_bytes");
        println!(
            "{},{},{},{},{sent},{received}",
            t.algorithm,
            t.nodes.len(),
            t.message_count,
            t.max_payload_bytes
        );
    }
    if !report.valid {
        bail!(CheckFailed(format!(
            "{} violations",
            report.violation_count
        )));
    }
    Ok(())
}
