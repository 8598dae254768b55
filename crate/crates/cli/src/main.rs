//! `detourkit` command-line front end.
//!
//! Every solver and oracle subcommand prints one JSON report on standard
//! output and exits with 0 (yes), 1 (no) or 2 (error). `gen` prints a graph
//! file and `bench` prints CSV.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use detourkit::detour::{self, Case1Budget};
use detourkit::oracle::{self, OracleLimits};
use detourkit::sieve::{self, SieveCounters, SieveQuery, DEFAULT_LABEL_CAP};
use detourkit::{
    bfs_layers, io as gio, path_solver, Alpha, Bipartition, DetourQuery, Graph, Part,
    PathSolverConfig, Strategy,
};
use serde::Serialize;

use report::{digest, Parameters, RunReport};

const SEED_ENV: &str = "DETOURKIT_SEED";

#[derive(Parser)]
#[command(
    name = "detourkit",
    version,
    about = "k-Detour solver, walk sieve and brute-force oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Is there a simple s-t path of length dist(s,t) + k?
    Detour(DetourArgs),
    /// Bipartitioned path query answered by the walk sieve.
    Bipath(BipathArgs),
    /// Exact-length simple path query answered by the path solver.
    Path(PathArgs),
    /// Exhaustive answers for the solver subcommands.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Print a graph file for a standard family.
    Gen(GenArgs),
    /// Run the detour solver for k = 1..=kmax and print CSV timings.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum OracleCommand {
    Detour(DetourArgs),
    Path(PathArgs),
    Bipath(BipathArgs),
}

#[derive(Args, Clone)]
struct Endpoints {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    /// Defaults to $DETOURKIT_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Random bipartitions per path-solver call.
    #[arg(long, default_value_t = 32)]
    reps: usize,
    #[arg(long, default_value_t = 2)]
    budget_slack: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
}

#[derive(Args, Clone)]
struct DetourArgs {
    #[command(flatten)]
    ends: Endpoints,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "55814/100000")]
    alpha: String,
    #[arg(long, value_enum, default_value_t = BudgetArg::Widened)]
    case1_budget: BudgetArg,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Clone)]
struct BipathArgs {
    #[command(flatten)]
    ends: Endpoints,
    #[arg(long)]
    len: usize,
    #[arg(long)]
    k1: usize,
    #[arg(long)]
    l2: usize,
    /// `parity` or a file with one part (1 or 2) per vertex.
    #[arg(long, default_value = "parity")]
    partition: String,
    /// Independent polynomial evaluations.
    #[arg(long, default_value_t = 1)]
    reps: usize,
}

#[derive(Args, Clone)]
struct PathArgs {
    #[command(flatten)]
    ends: Endpoints,
    #[arg(long)]
    len: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    ends: Endpoints,
    #[arg(long)]
    kmax: usize,
    #[arg(long, default_value = "55814/100000")]
    alpha: String,
    #[arg(long, value_enum, default_value_t = BudgetArg::Widened)]
    case1_budget: BudgetArg,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Sieve,
    Brute,
    Auto,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Sieve => Strategy::Sieve,
            StrategyArg::Brute => Strategy::BruteForce,
            StrategyArg::Auto => Strategy::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BudgetArg {
    Listed,
    Widened,
}

impl From<BudgetArg> for Case1Budget {
    fn from(b: BudgetArg) -> Self {
        match b {
            BudgetArg::Listed => Case1Budget::Listed,
            BudgetArg::Widened => Case1Budget::Widened,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Grid,
    Gnp,
    Petersen,
}

/// Failure with a machine-readable kind.
struct Failure {
    kind: &'static str,
    message: String,
}

impl From<detourkit::Error> for Failure {
    fn from(e: detourkit::Error) -> Self {
        use detourkit::Error as E;
        let kind = match e {
            E::Parse { .. } => "parse",
            E::InvalidVertex { .. } | E::SelfLoop(_) | E::DuplicateEdge(..) | E::NotAnEdge(..) => {
                "graph"
            }
            E::InvalidConfig(_) | E::InvalidAlpha { .. } | E::DetourTooLarge { .. } => "config",
            E::InfeasibleSignature { .. } | E::LabelBudgetExceeded { .. } => "query",
            E::OracleGuard { .. } => "oracle_guard",
            _ => "solver",
        };
        Failure {
            kind,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        kind: "io",
        message: format!("{}: {e}", path.display()),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure {
            kind: "config",
            message: format!("{SEED_ENV} is not an unsigned 64-bit integer: {v:?}"),
        }),
        Err(_) => Ok(0),
    }
}

fn load_graph(path: &Path) -> Result<(Graph, String), Failure> {
    let bytes = fs::read(path).map_err(|e| io_failure(path, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure {
        kind: "parse",
        message: format!("{}: not UTF-8", path.display()),
    })?;
    Ok((gio::parse_graph(&text)?, digest(&bytes)))
}

fn parse_partition(text: &str, n: usize) -> Result<Bipartition, Failure> {
    let parts = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(|tok| match tok {
            "1" => Ok(Part::V1),
            "2" => Ok(Part::V2),
            other => Err(Failure {
                kind: "parse",
                message: format!("partition entries must be 1 or 2, got {other:?}"),
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if parts.len() != n {
        return Err(Failure {
            kind: "parse",
            message: format!("partition lists {} vertices, graph has {n}", parts.len()),
        });
    }
    Ok(Bipartition::from_parts(parts))
}

fn solver_config(args: &SolverArgs, seed: u64) -> PathSolverConfig {
    PathSolverConfig {
        budget_slack: args.budget_slack,
        repetitions: args.reps,
        strategy: args.strategy.into(),
        master_seed: seed,
        ..Default::default()
    }
}

/// Runs `body` and wraps the outcome into a report.
fn reported(
    command: &str,
    params: Parameters,
    graph: &Path,
    body: impl FnOnce(&Graph, &mut RunReport) -> Result<(), Failure>,
) -> RunReport {
    let started = Instant::now();
    let mut report = RunReport::new(command, params);
    let outcome = load_graph(graph).and_then(|(g, d)| {
        report.input_digest = Some(d);
        body(&g, &mut report)
    });
    if let Err(f) = outcome {
        report.fail(f.kind, f.message);
    }
    report.finish(started);
    report
}

fn detour_params(a: &DetourArgs, seed: u64) -> Parameters {
    Parameters {
        s: Some(a.ends.s),
        t: Some(a.ends.t),
        k: Some(a.k),
        alpha: Some(a.alpha.clone()),
        case1_budget: Some(Case1Budget::from(a.case1_budget).to_string()),
        seed: Some(seed),
        reps: Some(a.solver.reps),
        budget_slack: Some(a.solver.budget_slack),
        strategy: Some(Strategy::from(a.solver.strategy).to_string()),
        ..Default::default()
    }
}

fn cmd_detour(a: &DetourArgs) -> RunReport {
    let seed = resolve_seed(a.ends.seed);
    let params = detour_params(a, *seed.as_ref().unwrap_or(&0));
    reported("detour", params, &a.ends.graph, |g, r| {
        let seed = seed?;
        let alpha: Alpha = a.alpha.parse()?;
        let mut q = DetourQuery::new(g, a.ends.s, a.ends.t, a.k);
        q.alpha = alpha;
        q.seed = seed;
        q.case1_budget = a.case1_budget.into();
        q.solver = solver_config(&a.solver, seed);
        match detour::run(&q) {
            Ok(run) => {
                r.answer = Some(run.answer);
                r.dist_st = Some(Some(run.dist_st));
                r.dp_states_touched = run.stats.dp_states;
                r.sieve_queries_issued = run.stats.sieve_queries;
            }
            Err(detourkit::Error::Unreachable(_)) => {
                r.answer = Some(false);
                r.dist_st = Some(None);
            }
            Err(e) => return Err(e.into()),
        }
        Ok(())
    })
}

fn cmd_oracle_detour(a: &DetourArgs) -> RunReport {
    let params = Parameters {
        s: Some(a.ends.s),
        t: Some(a.ends.t),
        k: Some(a.k),
        ..Default::default()
    };
    reported("oracle detour", params, &a.ends.graph, |g, r| {
        let lg = bfs_layers(g, a.ends.s)?;
        g.check_vertex(a.ends.t)?;
        r.dist_st = Some(lg.dist(a.ends.t));
        r.answer = Some(
            match oracle::detour_exists_with_limits(
                g,
                a.ends.s,
                a.ends.t,
                a.k,
                OracleLimits::UNLIMITED,
            ) {
                Ok(b) => b,
                Err(detourkit::Error::Unreachable(_)) => false,
                Err(e) => return Err(e.into()),
            },
        );
        Ok(())
    })
}

fn cmd_path(a: &PathArgs) -> RunReport {
    let seed = resolve_seed(a.ends.seed);
    let params = Parameters {
        s: Some(a.ends.s),
        t: Some(a.ends.t),
        len: Some(a.len),
        seed: Some(*seed.as_ref().unwrap_or(&0)),
        reps: Some(a.solver.reps),
        budget_slack: Some(a.solver.budget_slack),
        strategy: Some(Strategy::from(a.solver.strategy).to_string()),
        ..Default::default()
    };
    reported("path", params, &a.ends.graph, |g, r| {
        let cfg = solver_config(&a.solver, seed?);
        let lg = bfs_layers(g, a.ends.s)?;
        g.check_vertex(a.ends.t)?;
        r.dist_st = Some(lg.dist(a.ends.t));
        if lg.dist(a.ends.t).is_none() {
            r.answer = Some(false);
            return Ok(());
        }
        let view = lg.full_view();
        let counters = SieveCounters::default();
        let found = path_solver::exists_path_upto_many(
            &view,
            a.ends.s,
            &[a.ends.t],
            a.len,
            &cfg,
            Some(&counters),
        )?;
        r.answer = Some(found[0].contains(&a.len));
        r.dp_states_touched = counters.dp_states();
        r.sieve_queries_issued = counters.queries();
        Ok(())
    })
}

fn cmd_oracle_path(a: &PathArgs) -> RunReport {
    let params = Parameters {
        s: Some(a.ends.s),
        t: Some(a.ends.t),
        len: Some(a.len),
        ..Default::default()
    };
    reported("oracle path", params, &a.ends.graph, |g, r| {
        let lg = bfs_layers(g, a.ends.s)?;
        g.check_vertex(a.ends.t)?;
        r.dist_st = Some(lg.dist(a.ends.t));
        if lg.dist(a.ends.t).is_none() {
            r.answer = Some(false);
            return Ok(());
        }
        let lens = oracle::path_lengths(
            &lg.full_view(),
            a.ends.s,
            a.ends.t,
            a.len,
            OracleLimits::UNLIMITED,
        )?;
        r.answer = Some(lens.contains(&a.len));
        Ok(())
    })
}

fn bipath_params(a: &BipathArgs, seed: Option<u64>) -> Parameters {
    Parameters {
        s: Some(a.ends.s),
        t: Some(a.ends.t),
        len: Some(a.len),
        k1: Some(a.k1),
        l2: Some(a.l2),
        partition: Some(a.partition.clone()),
        seed,
        reps: seed.map(|_| a.reps),
        ..Default::default()
    }
}

fn resolve_partition(spec: &str, lg: &detourkit::LayeredGraph) -> Result<Bipartition, Failure> {
    if spec == "parity" {
        return Ok(lg.parity_partition());
    }
    let path = Path::new(spec);
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_partition(&text, lg.n())
}

fn cmd_bipath(a: &BipathArgs, exact: bool) -> RunReport {
    let seed = resolve_seed(a.ends.seed);
    let shown_seed = if exact {
        None
    } else {
        Some(*seed.as_ref().unwrap_or(&0))
    };
    let command = if exact { "oracle bipath" } else { "bipath" };
    reported(
        command,
        bipath_params(a, shown_seed),
        &a.ends.graph,
        |g, r| {
            let seed = seed?;
            let lg = bfs_layers(g, a.ends.s)?;
            g.check_vertex(a.ends.t)?;
            let partition = resolve_partition(&a.partition, &lg)?;
            r.dist_st = Some(lg.dist(a.ends.t));
            if lg.dist(a.ends.t).is_none() {
                r.answer = Some(false);
                return Ok(());
            }
            let view = lg.full_view();
            let (s, t) = (a.ends.s, a.ends.t);
            if exact {
                r.answer = Some(oracle::bipartitioned_exists_with_limits(
                    &view,
                    s,
                    t,
                    a.len,
                    a.k1,
                    a.l2,
                    &partition,
                    OracleLimits::UNLIMITED,
                )?);
                return Ok(());
            }
            let q = SieveQuery {
                view: &view,
                partition: &partition,
                from: s,
                to: t,
                len: a.len,
                k1: a.k1,
                l2: a.l2,
            };
            let counters = SieveCounters::default();
            let mut rng = detourkit::seed::rng_for(seed, &[0xb1]);
            r.answer = Some(sieve::decide_counted(
                &q,
                &mut rng,
                a.reps,
                DEFAULT_LABEL_CAP,
                Some(&counters),
            )?);
            r.dp_states_touched = counters.dp_states();
            r.sieve_queries_issued = counters.queries();
            Ok(())
        },
    )
}

fn cmd_gen(a: &GenArgs) -> Result<String, Failure> {
    let need_n = || {
        a.n.ok_or(Failure {
            kind: "config",
            message: "--n is required for this family".into(),
        })
    };
    let g = match a.family {
        Family::Path => gio::path(need_n()?),
        Family::Cycle => gio::cycle(need_n()?)?,
        Family::Grid => gio::grid(need_n()?)?,
        Family::Gnp => gio::gnp(need_n()?, a.p, resolve_seed(a.seed)?)?,
        Family::Petersen => gio::petersen(),
    };
    Ok(gio::serialize_graph(&g))
}

#[derive(Serialize)]
struct BenchRow {
    k: usize,
    elapsed_ms: u64,
    dp_states_touched: u64,
    sieve_queries: u64,
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Failure> {
    let seed = resolve_seed(a.ends.seed)?;
    let (g, _) = load_graph(&a.ends.graph)?;
    let alpha: Alpha = a.alpha.parse()?;
    let mut rows = Vec::with_capacity(a.kmax);
    for k in 1..=a.kmax {
        let mut q = DetourQuery::new(&g, a.ends.s, a.ends.t, k);
        q.alpha = alpha;
        q.seed = seed;
        q.case1_budget = a.case1_budget.into();
        q.solver = solver_config(&a.solver, seed);
        let started = Instant::now();
        let run = detour::run(&q)?;
        rows.push(BenchRow {
            k,
            elapsed_ms: started.elapsed().as_millis() as u64,
            dp_states_touched: run.stats.dp_states,
            sieve_queries: run.stats.sieve_queries,
        });
    }
    let sink: Box<dyn Write> = match &a.csv {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| io_failure(p, e))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in &rows {
        w.serialize(row).map_err(|e| Failure {
            kind: "io",
            message: e.to_string(),
        })?;
    }
    w.flush().map_err(|e| Failure {
        kind: "io",
        message: e.to_string(),
    })?;
    Ok(())
}

fn emit(report: RunReport) -> ExitCode {
    println!("{}", report.to_json());
    ExitCode::from(report.exit_code() as u8)
}

fn plain(outcome: Result<(), Failure>) -> ExitCode {
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error ({}): {}", f.kind, f.message);
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Detour(a) => emit(cmd_detour(a)),
        Command::Bipath(a) => emit(cmd_bipath(a, false)),
        Command::Path(a) => emit(cmd_path(a)),
        Command::Oracle(OracleCommand::Detour(a)) => emit(cmd_oracle_detour(a)),
        Command::Oracle(OracleCommand::Path(a)) => emit(cmd_oracle_path(a)),
        Command::Oracle(OracleCommand::Bipath(a)) => emit(cmd_bipath(a, true)),
        Command::Gen(a) => plain(cmd_gen(a).map(|text| print!("{text}"))),
        Command::Bench(a) => plain(cmd_bench(a)),
    }
}
