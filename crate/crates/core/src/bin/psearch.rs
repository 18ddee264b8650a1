use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use psearch::bench::{generate_instance, run_experiment, ExperimentConfig, GeneratorConfig, SmallWorld, Topology};
use psearch::dtsp::{approx_max_probability, ExactDtspSolver, GreedyDtspSolver};
use psearch::eval::{collected_prize, minimal_budget_for_walk, prize_ledger, success_probability};
use psearch::exact::{max_prob_search, min_budget_search, PlanSolution, SearchOptions};
use psearch::heuristics::{aco_min_budget, bl_min_budget, greedy_max_prob, greedy_min_budget, nb_min_budget, AcoParams, GreedyOptions};
use psearch::io::{load_instance_files, write_dtsp, write_graph, write_sites};
use psearch::kmst::{kmst_min_budget, KmstMode};
use psearch::montecarlo::simulate;
use psearch::search::TraceEvent;
use psearch::transform::{round_prizes, to_deadline_tsp, to_single_cost};
use psearch::{Instance, SearchLimits, SolveError, Walk};

#[derive(Parser)]
#[command(name = "psearch", version, about = "Probabilistic physical search on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArgs {
    /// Edge list: `u v weight` per line
    #[arg(long)]
    graph: PathBuf,
    /// Site table: `start: id` and `v: cost@prob, ...`
    #[arg(long)]
    sites: PathBuf,
    /// Accept zero-weight edges (needed to reload `transform --to single` output)
    #[arg(long)]
    allow_zero_weights: bool,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance> {
        load_instance_files(&self.graph, &self.sites, self.allow_zero_weights)
    }
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 10_000_000)]
    max_expansions: u64,
    /// Seconds
    #[arg(long)]
    time_limit: Option<f64>,
}

impl LimitArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_expansions: self.max_expansions,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
            ..SearchLimits::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Optimal,
    Greedy,
    Aco,
    Bl,
    Nb,
    Kmst,
}

#[derive(Clone, Copy, ValueEnum)]
enum MaxProbSolver {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Single,
    Dtsp,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random small-world instance
    Gen {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        neighbors: usize,
        #[arg(long, default_value_t = 0.09)]
        rewire: f64,
        #[arg(long, default_value_t = 40.0)]
        edge_cost_min: f64,
        #[arg(long, default_value_t = 1040.0)]
        edge_cost_max: f64,
        #[arg(long, default_value_t = 2700.0)]
        cost_mean: f64,
        #[arg(long, default_value_t = 900.0)]
        cost_std: f64,
        #[arg(long, default_value_t = 0.24)]
        prob_mean: f64,
        #[arg(long, default_value_t = 0.08)]
        prob_std: f64,
        #[arg(long, default_value_t = 1)]
        tiers_min: usize,
        #[arg(long, default_value_t = 5)]
        tiers_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write PREFIX.graph and PREFIX.sites instead of printing
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve Min-Budget (--p-succ) or Max-Probability (--budget)
    Solve {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Algo::Optimal)]
        algo: Algo,
        #[arg(long, conflicts_with = "budget", required_unless_present = "budget")]
        p_succ: Option<f64>,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON-lines search trace, `-` for stderr
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
        /// Tree solver for --algo kmst
        #[arg(long, default_value = "exact")]
        kmst_mode: KmstMode,
    },
    /// Score a walk
    Eval {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated vertex ids, starting at the start vertex
        #[arg(long)]
        walk: String,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        p_succ: Option<f64>,
    },
    /// Monte-Carlo check of a walk's success probability
    Validate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        walk: String,
        #[arg(long)]
        budget: f64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply a reduction and write the result
    Transform {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        to: Target,
        /// Budget for the Deadline-TSP image
        #[arg(long)]
        budget: Option<f64>,
        /// Round Deadline-TSP prizes to integers
        #[arg(long)]
        round: bool,
        /// Write PREFIX.graph and PREFIX.sites (or PREFIX.dtsp) instead of printing
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Max-Probability through the Deadline-TSP reduction
    Maxprob {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        budget: f64,
        #[arg(long, value_enum, default_value_t = MaxProbSolver::Exact)]
        solver: MaxProbSolver,
        #[command(flatten)]
        limits: LimitArgs,
        /// Keep fractional prizes
        #[arg(long)]
        no_round: bool,
    },
    /// Run a parameter sweep from a key = value config file
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path; `-` prints to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors that mean "no plan exists under these rules", reported with exit code 2.
fn is_no_plan(e: &SolveError) -> bool {
    matches!(e, SolveError::NoSolution | SolveError::Stuck | SolveError::Infeasible { .. })
}

fn parse_walk(instance: &Instance, text: &str) -> Result<Walk> {
    let labels: Vec<u64> = text
        .split(',')
        .map(|s| s.trim().parse::<u64>().with_context(|| format!("bad vertex id `{s}`")))
        .collect::<Result<_>>()?;
    Ok(Walk::from_labels(instance, &labels)?)
}

fn join(labels: &[u64]) -> String {
    labels.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn write_pair(out: &Option<PathBuf>, ext: [&str; 2], texts: [String; 2]) -> Result<()> {
    match out {
        Some(prefix) => {
            for (e, t) in ext.iter().zip(&texts) {
                let path = prefix.with_extension(e);
                fs::write(&path, t).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => {
            for (e, t) in ext.iter().zip(&texts) {
                println!("# --- {e} ---");
                print!("{t}");
            }
        }
    }
    Ok(())
}

fn print_plan(instance: &Instance, sol: &PlanSolution) {
    println!("status: {}", sol.status.as_str());
    println!("walk: {}", join(&sol.walk.labels(instance)));
    println!("budget: {}", sol.budget);
    println!("probability: {:.9}", sol.probability);
    println!("travel: {}", sol.walk.travel_cost());
    println!("expansions: {}", sol.expansions);
}

fn print_ledger(instance: &Instance, walk: &Walk, budget: f64) {
    for (v, prize) in prize_ledger(instance, walk, budget) {
        println!("prize {}: {prize:.6}", instance.label(v));
    }
    println!("total prize: {:.6}", collected_prize(instance, walk, budget));
}

fn solve(
    instance: &Instance,
    algo: Algo,
    p_succ: Option<f64>,
    budget: Option<f64>,
    seed: u64,
    trace: Option<&Path>,
    limits: SearchLimits,
    kmst_mode: KmstMode,
) -> Result<Result<PlanSolution, SolveError>> {
    let mut sink: Option<Box<dyn std::io::Write>> = match trace {
        None => None,
        Some(p) if p == Path::new("-") => Some(Box::new(std::io::stderr())),
        Some(p) => Some(Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
    };
    let mut write_event = |e: &TraceEvent| {
        if let Some(w) = sink.as_mut() {
            let _ = writeln!(w, "{}", serde_json::to_string(e).expect("trace events serialize"));
        }
    };
    let observer: Option<&mut dyn FnMut(&TraceEvent)> = if trace.is_some() { Some(&mut write_event) } else { None };
    let options = SearchOptions::with_limits(limits);
    let result = match (algo, p_succ, budget) {
        (Algo::Optimal, Some(p), _) => min_budget_search(instance, p, &options, observer),
        (Algo::Optimal, None, Some(b)) => max_prob_search(instance, b, &options, observer),
        (Algo::Greedy, Some(p), _) => greedy_min_budget(instance, p, GreedyOptions::default()),
        (Algo::Greedy, None, Some(b)) => greedy_max_prob(instance, b, GreedyOptions::default()),
        (Algo::Aco, Some(p), _) => aco_min_budget(instance, p, &AcoParams::with_seed(seed)),
        (Algo::Bl, Some(p), _) => bl_min_budget(instance, p, limits),
        (Algo::Nb, Some(p), _) => nb_min_budget(instance, p, limits),
        (Algo::Kmst, Some(p), _) => kmst_min_budget(instance, p, kmst_mode, limits).map(|r| {
            println!("k: {}", r.k);
            println!("tree weight: {}", r.tree.weight);
            println!("site cost: {}", r.cost);
            r.plan
        }),
        (_, None, Some(_)) => bail!("--budget is only supported by --algo optimal and greedy"),
        (_, None, None) => bail!("one of --p-succ or --budget is required"),
    };
    Ok(result)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            n,
            neighbors,
            rewire,
            edge_cost_min,
            edge_cost_max,
            cost_mean,
            cost_std,
            prob_mean,
            prob_std,
            tiers_min,
            tiers_max,
            seed,
            out,
        } => {
            let mut cfg = GeneratorConfig {
                topology: Topology::SmallWorld(SmallWorld {
                    n,
                    neighbors,
                    rewire_prob: rewire,
                    edge_cost_range: (edge_cost_min, edge_cost_max),
                }),
                ..GeneratorConfig::default()
            };
            cfg.cost_model.mean = cost_mean;
            cfg.cost_model.stddev = cost_std;
            cfg.prob_model.mean = prob_mean;
            cfg.prob_model.stddev = prob_std;
            cfg.tier_count_range = (tiers_min, tiers_max);
            let inst = generate_instance(&cfg, seed)?;
            write_pair(&out, ["graph", "sites"], [write_graph(&inst), write_sites(&inst)])?;
        }
        Command::Solve { instance, algo, p_succ, budget, seed, trace, limits, kmst_mode } => {
            let inst = instance.load()?;
            match solve(&inst, algo, p_succ, budget, seed, trace.as_deref(), limits.limits(), kmst_mode)? {
                Ok(sol) => print_plan(&inst, &sol),
                Err(e) => {
                    println!("status: {}", e.code());
                    eprintln!("{e}");
                    return Ok(ExitCode::from(if is_no_plan(&e) { 2 } else { 1 }));
                }
            }
        }
        Command::Eval { instance, walk, budget, p_succ } => {
            let inst = instance.load()?;
            let walk = parse_walk(&inst, &walk)?;
            println!("travel: {}", walk.travel_cost());
            if let Some(b) = budget {
                println!("probability: {:.9}", success_probability(&inst, &walk, b));
                print_ledger(&inst, &walk, b);
            }
            if let Some(p) = p_succ {
                match minimal_budget_for_walk(&inst, &walk, p) {
                    Some(b) => println!("minimal budget: {b}"),
                    None => println!("minimal budget: none"),
                }
            }
        }
        Command::Validate { instance, walk, budget, trials, seed } => {
            if trials == 0 {
                bail!("--trials must be at least 1");
            }
            let inst = instance.load()?;
            let walk = parse_walk(&inst, &walk)?;
            let report = simulate(&inst, &walk, budget, trials, seed);
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.serialize(&report)?;
            w.flush()?;
        }
        Command::Transform { instance, to, budget, round, out } => {
            let inst = instance.load()?;
            let single = to_single_cost(&inst)?;
            match to {
                Target::Single => {
                    let s = single.instance();
                    write_pair(&out, ["graph", "sites"], [write_graph(s), write_sites(s)])?;
                }
                Target::Dtsp => {
                    let Some(b) = budget else { bail!("--to dtsp needs --budget") };
                    let mut dtsp = to_deadline_tsp(&single, b);
                    if round {
                        let r = round_prizes(&dtsp);
                        if let Some(c) = r.lower_bound_c {
                            eprintln!("prize lower bound 1/c with c = {c}");
                        }
                        dtsp = r.instance;
                    }
                    let (graph, table) = write_dtsp(&dtsp, single.instance().labels());
                    write_pair(&out, ["graph", "dtsp"], [graph, table])?;
                }
            }
        }
        Command::Maxprob { instance, budget, solver, limits, no_round } => {
            let inst = instance.load()?;
            let out = match solver {
                MaxProbSolver::Exact => {
                    approx_max_probability(&inst, budget, &ExactDtspSolver::new(limits.limits()), !no_round)?
                }
                MaxProbSolver::Greedy => approx_max_probability(&inst, budget, &GreedyDtspSolver, !no_round)?,
            };
            println!("status: {}", out.status.as_str());
            println!("walk: {}", join(&out.walk.labels(&inst)));
            println!("probability: {:.9}", out.probability);
            if let Some(p) = out.min_conditional_probability {
                println!("min conditional probability: {p:.6}");
            }
            print_ledger(&inst, &out.walk, budget);
        }
        Command::Bench { config, out } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = ExperimentConfig::parse(&text, config.parent())?;
            let csv = run_experiment(&cfg)?;
            match out.or(cfg.output.clone()) {
                Some(p) if p != Path::new("-") => fs::write(&p, csv).with_context(|| format!("writing {}", p.display()))?,
                _ => print!("{csv}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
