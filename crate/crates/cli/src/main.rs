use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bcds_core::bcds::parse_c;
use bcds_core::edge_vertex::pevd_bound;
use bcds_core::generators::{default_multiplicity, gen_mc_to_bcds, gen_mc_to_bevd, gen_random_connected};
use bcds_core::oracles::{oracle_bcds, oracle_best_k, oracle_bevd, oracle_pevd, oracle_qst};
use bcds_core::sweep::{ratio_sweep, SweepConfig, SweepProblem};
use bcds_core::tree::decompose_eligible;
use bcds_core::{
    greedy_dominating_set, solve_bcds, solve_bevd, solve_pevd, solve_qst, BcdsConfig, Error, Graph,
    OptSearch, OracleCaps, QstBackend, QstInstance, RootedTree, SetSystem,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

const EXIT_INPUT: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_CAPACITY: u8 = 4;
const EXIT_USAGE: u8 = 64;

/// Budgeted connected domination and edge-vertex domination solvers.
#[derive(Parser, Debug)]
#[command(name = "bcds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Connected set of at most k vertices dominating many vertices.
    SolveBcds {
        /// Instance file, or `-` for stdin.
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "7/8")]
        c: String,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        #[arg(long, value_enum, default_value_t = Search::Linear)]
        opt_search: Search,
        #[command(flatten)]
        output: Output,
    },
    /// At most k edges dominating many vertices.
    SolveBevd {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Few edges dominating at least `quota` vertices.
    SolvePevd {
        instance: PathBuf,
        #[arg(long)]
        quota: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Quota Steiner tree with unit edge costs.
    SolveQst {
        instance: PathBuf,
        #[arg(long)]
        quota: u64,
        /// Comma-separated vertex profits; defaults to greedy dominating set profits.
        #[arg(long)]
        profits: Option<String>,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        #[command(flatten)]
        output: Output,
    },
    /// Split a tree into eligible pieces of at most k vertices.
    DecomposeTree {
        instance: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive optimum for small instances.
    Oracle {
        #[arg(value_enum)]
        problem: OracleProblem,
        instance: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        quota: Option<u64>,
        /// Comma-separated vertex profits for `qst` and `best-k`.
        #[arg(long)]
        profits: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded random connected graph.
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Max-coverage gap-reduction graph.
    GenReduction {
        #[arg(value_enum)]
        problem: ReductionProblem,
        /// Set system as a path or inline JSON `{"n": .., "sets": [[..]]}`.
        #[arg(long)]
        sets: String,
        /// Copies per element; defaults to m^2.
        #[arg(long)]
        q: Option<usize>,
        /// Write the vertex role map as JSON here.
        #[arg(long)]
        map: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Solver versus oracle ratios over seeded random graphs.
    RatioSweep {
        #[arg(value_enum)]
        problem: SweepKind,
        #[arg(long)]
        n: usize,
        /// Smallest trial size; defaults to `--n`.
        #[arg(long)]
        min_n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "7/8")]
        c: String,
        #[arg(long, value_enum, default_value_t = Backend::Exact)]
        backend: Backend,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Backend {
    Exact,
    Heuristic,
}

impl From<Backend> for QstBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Exact => QstBackend::Exact,
            Backend::Heuristic => QstBackend::Heuristic,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Search {
    Linear,
    Binary,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleProblem {
    Bcds,
    Bevd,
    Pevd,
    Qst,
    BestK,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReductionProblem {
    Bcds,
    Bevd,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SweepKind {
    Bcds,
    Bevd,
    Pevd,
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_text(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    Ok(Graph::parse(&read_text(path)?)?)
}

fn parse_profits(text: &str, n: usize) -> CliResult<Vec<u64>> {
    let profits = text
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::Input(format!("bad profit list `{text}`: {e}")))?;
    if profits.len() != n {
        return Err(Error::Input(format!("{} profits given for {n} vertices", profits.len())).into());
    }
    Ok(profits)
}

fn profits_or_labels(g: &Graph, text: Option<&str>) -> CliResult<Vec<u64>> {
    match text {
        Some(t) => parse_profits(t, g.n()),
        None => Ok(greedy_dominating_set(g).profits().to_vec()),
    }
}

fn require<T>(value: Option<T>, flag: &str, problem: &str) -> CliResult<T> {
    value.ok_or_else(|| Error::Input(format!("`oracle {problem}` needs --{flag}")).into())
}

fn bcds_config(c: &str, backend: Backend, search: Search) -> CliResult<BcdsConfig> {
    let search = match search {
        Search::Linear => OptSearch::Linear,
        Search::Binary => OptSearch::Binary,
    };
    Ok(BcdsConfig::new(parse_c(c)?, backend.into(), search)?)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::SolveBcds {
            instance,
            k,
            c,
            backend,
            opt_search,
            output,
        } => {
            let g = read_graph(&instance)?;
            let cfg = bcds_config(&c, backend, opt_search)?;
            let sol = solve_bcds(&g, k, &cfg)?;
            let report = json!({
                "schema": 1,
                "problem": "bcds",
                "k": k,
                "c": cfg.c().to_string(),
                "c_decimal": cfg.c().to_f64(),
                "backend": cfg.qst_backend,
                "opt_search": cfg.opt_search,
                "vertices": sol.vertices,
                "dominated": sol.dominated,
                "profit": sol.profit,
                "opt_guess_used": sol.opt_guess_used,
                "stage_log": sol.stage_log,
            });
            emit(&json_text(&report), output.out.as_deref())
        }
        Command::SolveBevd { instance, k, output } => {
            let g = read_graph(&instance)?;
            let sol = solve_bevd(&g, k)?;
            let report = json!({
                "schema": 1,
                "problem": "bevd",
                "k": k,
                "edges": sol.edges,
                "dominated": sol.dominated,
            });
            emit(&json_text(&report), output.out.as_deref())
        }
        Command::SolvePevd {
            instance,
            quota,
            output,
        } => {
            let g = read_graph(&instance)?;
            let sol = solve_pevd(&g, quota)?;
            let bound = pevd_bound(&g, quota)?;
            let report = json!({
                "schema": 1,
                "problem": "pevd",
                "quota": quota,
                "edges": sol.edges,
                "size": sol.edges.len(),
                "dominated": sol.dominated,
                "bound": {
                    "fraction": bound.to_string(),
                    "decimal": (bound.to_f64().unwrap_or(f64::NAN) * 1e6).round() / 1e6,
                },
            });
            emit(&json_text(&report), output.out.as_deref())
        }
        Command::SolveQst {
            instance,
            quota,
            profits,
            backend,
            output,
        } => {
            let g = read_graph(&instance)?;
            let profit = profits_or_labels(&g, profits.as_deref())?;
            let inst = QstInstance::new(&g, profit.clone(), quota)?;
            let tree = solve_qst(&inst, backend.into())?;
            let report = json!({
                "schema": 1,
                "problem": "qst",
                "quota": quota,
                "profits": profit,
                "vertices": tree.vertices,
                "edges": tree.edges,
                "cost": tree.edge_count(),
                "total_profit": tree.total_profit,
            });
            emit(&json_text(&report), output.out.as_deref())
        }
        Command::DecomposeTree { instance, k, output } => {
            let g = read_graph(&instance)?;
            let t = RootedTree::from_graph(&g, |_| 0)?;
            let d = decompose_eligible(&t, k)?;
            let report = json!({
                "schema": 1,
                "k": k,
                "pieces": d.pieces,
                "replicated": d.replicated,
            });
            emit(&json_text(&report), output.out.as_deref())
        }
        Command::Oracle {
            problem,
            instance,
            k,
            quota,
            profits,
            output,
        } => {
            let g = read_graph(&instance)?;
            let caps = OracleCaps::default();
            let (name, result, param) = match problem {
                OracleProblem::Bcds => {
                    let k = require(k, "k", "bcds")?;
                    ("bcds", oracle_bcds(&g, k, &caps)?, json!({ "k": k }))
                }
                OracleProblem::Bevd => {
                    let k = require(k, "k", "bevd")?;
                    ("bevd", oracle_bevd(&g, k, &caps)?, json!({ "k": k }))
                }
                OracleProblem::Pevd => {
                    let q = require(quota, "quota", "pevd")?;
                    let q = usize::try_from(q).map_err(|_| Error::Input("quota too large".into()))?;
                    ("pevd", oracle_pevd(&g, q, &caps)?, json!({ "quota": q }))
                }
                OracleProblem::Qst => {
                    let q = require(quota, "quota", "qst")?;
                    let profit = profits_or_labels(&g, profits.as_deref())?;
                    let inst = QstInstance::new(&g, profit, q)?;
                    ("qst", oracle_qst(&inst, &caps)?, json!({ "quota": q }))
                }
                OracleProblem::BestK => {
                    let k = require(k, "k", "best-k")?;
                    let profit = match profits.as_deref() {
                        Some(p) => parse_profits(p, g.n())?,
                        None => vec![1; g.n()],
                    };
                    let t = RootedTree::from_graph(&g, |v| profit[v])?;
                    ("best-k", oracle_best_k(&t, k, &caps)?, json!({ "k": k }))
                }
            };
            let mut report = json!({
                "schema": 1,
                "problem": name,
                "optimum": result.optimum_value,
                "witness": result.witness,
                "enumerated": result.enumerated_count,
            });
            if let (Value::Object(r), Value::Object(p)) = (&mut report, param) {
                r.extend(p);
            }
            emit(&json_text(&report), output.out.as_deref())
        }
        Command::GenRandom { n, p, seed, output } => {
            let g = gen_random_connected(n, p, seed)?;
            emit(&g.to_instance_string(), output.out.as_deref())
        }
        Command::GenReduction {
            problem,
            sets,
            q,
            map,
            output,
        } => {
            let text = if sets.trim_start().starts_with('{') {
                sets
            } else {
                read_text(Path::new(&sets))?
            };
            let sys = SetSystem::from_json(&text)?;
            let q = q.unwrap_or_else(|| default_multiplicity(&sys));
            let (name, r) = match problem {
                ReductionProblem::Bcds => ("bcds", gen_mc_to_bcds(&sys, q)?),
                ReductionProblem::Bevd => ("bevd", gen_mc_to_bevd(&sys, q)?),
            };
            if let Some(path) = map {
                let report = json!({
                    "schema": 1,
                    "problem": name,
                    "q": q,
                    "roles": r.roles,
                });
                fs::write(&path, json_text(&report))
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            emit(&r.graph.to_instance_string(), output.out.as_deref())
        }
        Command::RatioSweep {
            problem,
            n,
            min_n,
            k,
            p,
            trials,
            seed,
            c,
            backend,
            output,
        } => {
            let problem = match problem {
                SweepKind::Bcds => SweepProblem::Bcds,
                SweepKind::Bevd => SweepProblem::Bevd,
                SweepKind::Pevd => SweepProblem::Pevd,
            };
            let mut cfg = SweepConfig::new(problem, n, k, trials, seed);
            cfg.min_n = min_n.unwrap_or(n);
            cfg.p = p;
            cfg.bcds = bcds_config(&c, backend, Search::Linear)?;
            let report = ratio_sweep(&cfg)?;
            let value = serde_json::to_value(&report).expect("report serializes");
            emit(&json_text(&value), output.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible(_) => EXIT_INFEASIBLE,
                Error::Capacity(_) => EXIT_CAPACITY,
                _ => EXIT_INPUT,
            })
        }
    }
}
