//! Command-line front end for the Max-Cut to TSP pipeline.
//!
//! Exit codes: 0 success, 1 failure, 2 usage error, 3 enumeration budget
//! exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cut2tour::correspondence::{cut_to_tour, standard_transition_graph, tour_to_cut};
use cut2tour::gadgets::{
    build_parity_gadget, build_xor_gadget, dump_parity_gadget, dump_xor_gadget, ParityKind,
};
use cut2tour::maxcut::{
    cut_value, flip_local_search, maxcut_transition_graph, parse_cut, parse_maxcut, Cut,
    MaxCutInstance,
};
use cut2tour::reduction::{
    build_reduction, complete_instance, metricize, min_feasible_k, partial_edge_orientation,
    Manifest, ReductionArtifact,
};
use cut2tour::tsp::{
    k_opt_local_search, parse_tour, parse_tsp, random_tour, tour_weight, write_tsp, SwapMove,
    Tour, TspError,
};
use cut2tour::verify::{run_all, run_check, summary, CheckStatus, VerifyOptions, CHECK_NAMES};
use cut2tour::Pivot;

const BUDGET_EXIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cut2tour",
    about = "Compile Max-Cut/Flip instances into TSP/k-Opt instances, run both local searches, and verify the correspondence"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a Max-Cut file into a TSP instance plus manifest
    Reduce(ReduceArgs),
    /// Run a local search
    Solve(SolveArgs),
    /// Map a cut to its standard tour or a tour to its cut
    Map(MapArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
    /// Emit a transition graph as DOT
    TransitionGraph(TransitionGraphArgs),
    /// Print a gadget's edge list (`u v role`)
    DescribeGadget(DescribeGadgetArgs),
    /// Shift all weights of a TSP file to satisfy the triangle inequality
    Metricize(MetricizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    /// First improving move in enumeration order
    First,
    /// Largest improvement, ties to enumeration order
    Best,
}

impl From<PivotArg> for Pivot {
    fn from(arg: PivotArg) -> Pivot {
        match arg {
            PivotArg::First => Pivot::FirstImprovement,
            PivotArg::Best => Pivot::BestImprovement,
        }
    }
}

#[derive(Args)]
struct ReduceArgs {
    /// Max-Cut instance file
    input: PathBuf,
    /// Neighborhood size (default: minimum feasible for the instance)
    #[arg(long)]
    k: Option<usize>,
    /// Force k to at least 15, the bound that covers every degree-5 instance
    #[arg(long)]
    paper_strict: bool,
    /// Output directory for the manifest and TSP file
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(subcommand)]
    problem: SolveProblem,
}

#[derive(Subcommand)]
enum SolveProblem {
    /// Flip local search on a Max-Cut file
    Maxcut {
        instance: PathBuf,
        /// Cut file to start from (default: all vertices in the first set)
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = PivotArg::First)]
        pivot: PivotArg,
        /// Prefix for the .solution and .trace files (default: the instance path)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// k-Opt local search on a TSP file
    Tsp {
        instance: PathBuf,
        /// Maximum swap size
        #[arg(long)]
        k: usize,
        /// Tour file to start from (default: the identity tour, or random
        /// with --random-start)
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long)]
        random_start: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PivotArg::First)]
        pivot: PivotArg,
        /// Reconnection candidates examined per neighborhood scan
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Max-Cut instance file (the artifact is rebuilt deterministically)
    instance: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    /// Map the cut in this file to its standard tour
    #[arg(long, conflicts_with = "to_cut")]
    to_tour: Option<PathBuf>,
    /// Map the tour in this file to its cut
    #[arg(long)]
    to_cut: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Max-Cut instance file
    instance: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    /// Run the full suite (the default when no --check is given)
    #[arg(long, conflicts_with = "checks")]
    all: bool,
    /// Run only the named checks (repeatable; default: all)
    #[arg(long = "check")]
    checks: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Non-edge tours sampled by the 3-swap check
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Random starts for the end-to-end check
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long)]
    budget: Option<u64>,
    /// Cap on source vertices for whole-state-space enumeration
    /// (default: env CUT2TOUR_ENUM_LIMIT or 20)
    #[arg(long)]
    enum_limit: Option<usize>,
    /// Cap on graph vertices for Hamiltonian cycle enumeration
    /// (default: env CUT2TOUR_TOUR_LIMIT or 64)
    #[arg(long)]
    tour_limit: Option<usize>,
    /// Write the machine-readable summary here
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct TransitionGraphArgs {
    #[command(subcommand)]
    which: TransitionGraphKind,
}

#[derive(Subcommand)]
enum TransitionGraphKind {
    /// All cuts with improving-flip arcs
    Maxcut {
        instance: PathBuf,
        /// Cap on source vertices (default: env CUT2TOUR_ENUM_LIMIT or 20)
        #[arg(long)]
        enum_limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All standard tours with weight-decreasing x-change arcs, labeled by
    /// their cuts
    TspStandard {
        instance: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Cap on source vertices (default: env CUT2TOUR_ENUM_LIMIT or 20)
        #[arg(long)]
        enum_limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DescribeGadgetArgs {
    /// strict, flexible, or xor
    kind: String,
    /// XOR gadget order (required for xor)
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
struct MetricizeArgs {
    /// TSP instance file
    input: PathBuf,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn env_limit(name: &str, default: usize) -> usize {
    std::env::var(name)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

fn enum_limit() -> usize {
    env_limit("CUT2TOUR_ENUM_LIMIT", cut2tour::maxcut::DEFAULT_ENUM_LIMIT)
}

fn tour_limit() -> usize {
    env_limit("CUT2TOUR_TOUR_LIMIT", cut2tour::tsp::DEFAULT_TOUR_ENUM_LIMIT)
}

fn default_budget() -> u64 {
    std::env::var("CUT2TOUR_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(cut2tour::tsp::DEFAULT_SWAP_BUDGET)
}

fn read_maxcut(path: &Path) -> Result<MaxCutInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_maxcut(&text).with_context(|| format!("parsing {}", path.display()))
}

fn build_artifact(path: &Path, k: Option<usize>, paper_strict: bool) -> Result<ReductionArtifact> {
    let h = read_maxcut(path)?;
    let orientation = partial_edge_orientation(&h)?;
    let mut k = k.unwrap_or_else(|| min_feasible_k(&h, &orientation));
    if paper_strict {
        k = k.max(15);
    }
    Ok(build_reduction(&h, k)?)
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Reduce(args) => cmd_reduce(args),
        Command::Solve(args) => match args.problem {
            SolveProblem::Maxcut { instance, start, pivot, out } => {
                cmd_solve_maxcut(instance, start, pivot.into(), out)
            }
            SolveProblem::Tsp { instance, k, start, random_start, seed, pivot, budget, out } => {
                cmd_solve_tsp(instance, k, start, random_start, seed, pivot.into(), budget, out)
            }
        },
        Command::Map(args) => cmd_map(args),
        Command::Verify(args) => cmd_verify(args),
        Command::TransitionGraph(args) => cmd_transition_graph(args),
        Command::DescribeGadget(args) => cmd_describe_gadget(args),
        Command::Metricize(args) => cmd_metricize(args),
    }
}

fn cmd_reduce(args: ReduceArgs) -> Result<ExitCode> {
    let artifact = build_artifact(&args.input, args.k, args.paper_strict)?;
    let stem = args
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("instance");
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    let manifest_path = args.out_dir.join(format!("{stem}.manifest.json"));
    let manifest = Manifest::from_artifact(&artifact);
    let mut manifest_json = serde_json::to_string_pretty(&manifest)?;
    manifest_json.push('\n');
    fs::write(&manifest_path, manifest_json)?;

    let tsp_path = args.out_dir.join(format!("{stem}.tsp"));
    fs::write(&tsp_path, write_tsp(&complete_instance(&artifact)))?;

    println!(
        "reduced {}: H(n={} m={}) -> G(N={} g-edges={}) k={} M={} psi-table={}",
        args.input.display(),
        artifact.source().vertex_count(),
        artifact.source().edge_count(),
        artifact.vertex_count(),
        artifact.g_edges().len(),
        artifact.k(),
        artifact.m_weight(),
        artifact.psi().len(),
    );
    if artifact.is_degenerate() {
        eprintln!("warning: all H-weights are zero; non-edge weights degenerate to zero");
    }
    println!("wrote {}", manifest_path.display());
    println!("wrote {}", tsp_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve_maxcut(
    instance: PathBuf,
    start: Option<PathBuf>,
    pivot: Pivot,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let h = read_maxcut(&instance)?;
    let start_cut = match start {
        Some(path) => {
            let text = fs::read_to_string(&path)?;
            parse_cut(&text, h.vertex_count())?
        }
        None => Cut::all_first(h.vertex_count()),
    };
    let (cut, trace) = flip_local_search(&h, &start_cut, pivot)?;
    let value = cut_value(&h, &cut)?;
    let prefix = out.unwrap_or_else(|| instance.clone());
    let solution_path = with_suffix(&prefix, "solution");
    let trace_path = with_suffix(&prefix, "trace");
    fs::write(&solution_path, format!("{cut}\n"))?;
    let trace_text: String = trace.iter().map(|v| format!("{v}\n")).collect();
    fs::write(&trace_path, trace_text)?;
    println!("value {value}");
    println!("wrote {}", solution_path.display());
    println!("wrote {}", trace_path.display());
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve_tsp(
    instance: PathBuf,
    k: usize,
    start: Option<PathBuf>,
    random_start: bool,
    seed: u64,
    pivot: Pivot,
    budget: Option<u64>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let text = fs::read_to_string(&instance)?;
    let inst = parse_tsp(&text)?;
    let n = inst.vertex_count();
    let start_tour = match (&start, random_start) {
        (Some(path), _) => parse_tour(&fs::read_to_string(path)?, n)?,
        (None, true) => random_tour(n, &mut ChaCha8Rng::seed_from_u64(seed)),
        (None, false) => Tour::new((0..n).collect())?,
    };
    let budget = Some(budget.unwrap_or_else(default_budget));
    let (tour, trace) = match k_opt_local_search(&inst, &start_tour, k, pivot, budget) {
        Ok(result) => result,
        Err(TspError::BudgetExceeded { budget }) => {
            eprintln!("budget of {budget} candidates exhausted before reaching a local optimum");
            return Ok(ExitCode::from(BUDGET_EXIT));
        }
        Err(e) => return Err(e.into()),
    };
    let prefix = out.unwrap_or_else(|| instance.clone());
    let solution_path = with_suffix(&prefix, "solution");
    let trace_path = with_suffix(&prefix, "trace");
    fs::write(&solution_path, format!("{tour}\n"))?;
    let trace_text: String = trace.iter().map(render_swap).collect();
    fs::write(&trace_path, trace_text)?;
    println!("weight {}", tour_weight(&inst, &tour)?);
    println!("wrote {}", solution_path.display());
    println!("wrote {}", trace_path.display());
    Ok(ExitCode::SUCCESS)
}

fn render_swap(mv: &SwapMove) -> String {
    let side = |edges: &[(usize, usize)]| {
        edges
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!("{} | {}\n", side(&mv.remove), side(&mv.add))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    prefix.with_file_name(name)
}

fn cmd_map(args: MapArgs) -> Result<ExitCode> {
    let artifact = build_artifact(&args.instance, args.k, false)?;
    match (&args.to_tour, &args.to_cut) {
        (Some(cut_path), None) => {
            let cut = parse_cut(
                &fs::read_to_string(cut_path)?,
                artifact.source().vertex_count(),
            )?;
            let tour = cut_to_tour(&artifact, &cut)?;
            write_output(&args.out, &format!("{tour}\n"))?;
        }
        (None, Some(tour_path)) => {
            let tour = parse_tour(&fs::read_to_string(tour_path)?, artifact.vertex_count())?;
            let cut = tour_to_cut(&artifact, &tour)?;
            write_output(&args.out, &format!("{cut}\n"))?;
        }
        _ => bail!("exactly one of --to-tour or --to-cut is required"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let artifact = build_artifact(&args.instance, args.k, false)?;
    if artifact.is_degenerate() {
        eprintln!(
            "warning: all H-weights are zero; checks that rely on non-edge penalties are skipped"
        );
    }
    let opts = VerifyOptions {
        samples: args.samples,
        starts: args.starts,
        seed: args.seed,
        budget: Some(args.budget.unwrap_or_else(default_budget)),
        enum_limit: args.enum_limit.unwrap_or_else(enum_limit),
        tour_limit: args.tour_limit.unwrap_or_else(tour_limit),
    };
    let reports = if args.checks.is_empty() {
        run_all(&artifact, &opts)
    } else {
        let mut reports = Vec::new();
        for name in &args.checks {
            let report = run_check(name, &artifact, &opts).ok_or_else(|| {
                anyhow!("unknown check {name:?}; available: {}", CHECK_NAMES.join(", "))
            })?;
            reports.push(report);
        }
        reports
    };
    for report in &reports {
        print!("{}", report.render());
    }
    if let Some(path) = &args.summary {
        fs::write(path, summary(&reports))?;
        println!("wrote {}", path.display());
    }
    let worst = reports
        .iter()
        .map(|r| r.status())
        .max_by_key(|s| match s {
            CheckStatus::Pass => 0,
            CheckStatus::Skip => 1,
            CheckStatus::Fail => 2,
        })
        .unwrap_or(CheckStatus::Pass);
    println!("verify: {worst}");
    Ok(if worst == CheckStatus::Fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_transition_graph(args: TransitionGraphArgs) -> Result<ExitCode> {
    match args.which {
        TransitionGraphKind::Maxcut { instance, enum_limit: limit, out } => {
            let h = read_maxcut(&instance)?;
            let graph = maxcut_transition_graph(&h, limit.unwrap_or_else(enum_limit))?;
            let n = h.vertex_count();
            let mut dot = String::from("digraph flip_transitions {\n");
            for (mask, value) in graph.values.iter().enumerate() {
                let cut = Cut::from_mask(n, mask as u64);
                dot.push_str(&format!("  \"{cut}\" [label=\"{cut} value={value}\"];\n"));
            }
            for &(from, to) in &graph.arcs {
                dot.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    Cut::from_mask(n, from),
                    Cut::from_mask(n, to)
                ));
            }
            dot.push_str("}\n");
            write_output(&out, &dot)?;
        }
        TransitionGraphKind::TspStandard { instance, k, enum_limit: limit, out } => {
            let artifact = build_artifact(&instance, k, false)?;
            let graph = standard_transition_graph(&artifact, limit.unwrap_or_else(enum_limit))?;
            let n = artifact.source().vertex_count();
            let mut dot = String::from("digraph standard_tour_transitions {\n");
            for (mask, weight) in graph.weights.iter().enumerate() {
                let cut = Cut::from_mask(n, mask as u64);
                dot.push_str(&format!(
                    "  \"{cut}\" [label=\"phi={cut} weight={weight}\"];\n"
                ));
            }
            for &(from, to) in &graph.arcs {
                dot.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    Cut::from_mask(n, from),
                    Cut::from_mask(n, to)
                ));
            }
            dot.push_str("}\n");
            write_output(&out, &dot)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_describe_gadget(args: DescribeGadgetArgs) -> Result<ExitCode> {
    let dump = match args.kind.as_str() {
        "strict" => dump_parity_gadget(&build_parity_gadget(ParityKind::Strict)?),
        "flexible" => dump_parity_gadget(&build_parity_gadget(ParityKind::Flexible)?),
        "xor" => {
            let order = args
                .order
                .ok_or_else(|| anyhow!("--order is required for the xor gadget"))?;
            dump_xor_gadget(&build_xor_gadget(order))
        }
        other => bail!("unknown gadget {other:?}; expected strict, flexible, or xor"),
    };
    print!("{dump}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_metricize(args: MetricizeArgs) -> Result<ExitCode> {
    let inst = parse_tsp(&fs::read_to_string(&args.input)?)?;
    write_output(&args.out, &write_tsp(&metricize(&inst)))?;
    Ok(ExitCode::SUCCESS)
}
