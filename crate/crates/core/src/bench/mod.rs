//! Instance generators and the sweep runner.
//!
//! Configuration files are flat `key = value` text with `#` comments, e.g.
//!
//! ```text
//! n = 8
//! sweep = p_succ
//! values = 0.7, 0.8, 0.9, 0.975
//! solvers = optimal, greedy, aco, bl, nb
//! instances = 40
//! ```

mod generate;
mod runner;

pub use generate::{
    ball, gen_costs_and_probs, gen_small_world, gen_tiers, generate_instance, induced, small_world_once,
    GeneratedGraph,
};
pub use runner::{aggregate, parse_csv, run_experiment, run_experiment_rows, write_csv, Row, THREADS_ENV};

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use crate::graph::Graph;
use crate::search::SearchLimits;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallWorld {
    pub n: usize,
    pub neighbors: usize,
    pub rewire_prob: f64,
    pub edge_cost_range: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    SmallWorld(SmallWorld),
    /// A loaded graph; each instance is a breadth-first ball around a random vertex.
    File { graph: Graph, labels: Vec<u64>, ball_size: Option<usize> },
}

/// Normal distribution truncated to two standard deviations around the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub mean: f64,
    pub stddev: f64,
}

/// Normal distribution clipped to `[0.001, 0.999]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbModel {
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub topology: Topology,
    pub cost_model: CostModel,
    pub tier_count_range: (usize, usize),
    pub prob_model: ProbModel,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            topology: Topology::SmallWorld(SmallWorld {
                n: 8,
                neighbors: 6,
                rewire_prob: 0.09,
                edge_cost_range: (40.0, 1040.0),
            }),
            cost_model: CostModel { mean: 2700.0, stddev: 900.0 },
            tier_count_range: (1, 5),
            prob_model: ProbModel { mean: 0.24, stddev: 0.08 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SolverKind {
    Optimal,
    Greedy,
    Aco,
    Bl,
    Nb,
    Kmst,
    /// Deadline-TSP reduction with the exact solver (Max-Probability only).
    Dtsp,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Optimal => "optimal",
            SolverKind::Greedy => "greedy",
            SolverKind::Aco => "aco",
            SolverKind::Bl => "bl",
            SolverKind::Nb => "nb",
            SolverKind::Kmst => "kmst",
            SolverKind::Dtsp => "dtsp",
        }
    }
}

impl FromStr for SolverKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "optimal" => SolverKind::Optimal,
            "greedy" => SolverKind::Greedy,
            "aco" => SolverKind::Aco,
            "bl" => SolverKind::Bl,
            "nb" => SolverKind::Nb,
            "kmst" => SolverKind::Kmst,
            "dtsp" => SolverKind::Dtsp,
            other => return Err(format!("unknown solver `{other}`")),
        })
    }
}

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Target probability for Min-Budget.
    PSucc,
    /// Mean site probability for Min-Budget at fixed `p_succ`; the standard
    /// deviation is `mean * prob_std_ratio`.
    ProbMean,
    /// Budget for Max-Probability.
    Budget,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::PSucc => "p_succ",
            SweepParam::ProbMean => "prob_mean",
            SweepParam::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub generator: GeneratorConfig,
    pub solvers: Vec<SolverKind>,
    pub sweep: SweepParam,
    pub values: Vec<f64>,
    /// Target used when the sweep is not over `p_succ`.
    pub p_succ: f64,
    pub prob_std_ratio: f64,
    pub instances_per_point: usize,
    pub base_seed: u64,
    pub limits: SearchLimits,
    pub aco_iterations: usize,
    /// Record wall-clock times. Off makes the output byte-for-byte reproducible.
    pub timing: bool,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            generator: GeneratorConfig::default(),
            solvers: vec![SolverKind::Optimal, SolverKind::Greedy, SolverKind::Aco, SolverKind::Bl, SolverKind::Nb],
            sweep: SweepParam::PSucc,
            values: vec![0.7, 0.8, 0.9, 0.975],
            p_succ: 0.9,
            prob_std_ratio: 1.0 / 3.0,
            instances_per_point: 40,
            base_seed: 0,
            limits: SearchLimits { time_limit: Some(Duration::from_secs(60)), ..SearchLimits::default() },
            aco_iterations: 50,
            timing: true,
            output: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

fn list<T: FromStr>(value: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| s.parse().map_err(|e| format!("`{s}`: {e}"))).collect()
}

fn one<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("`{value}`: {e}"))
}

impl ExperimentConfig {
    /// Parses a `key = value` file. Unset keys keep their defaults; a
    /// `graph_file` is resolved relative to `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&std::path::Path>) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let mut sw = match cfg.generator.topology {
            Topology::SmallWorld(s) => s,
            _ => unreachable!(),
        };
        let mut graph_file: Option<PathBuf> = None;
        let mut ball_size = None;
        let mut time_limit_ms: Option<u64> = Some(60_000);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap().trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ConfigError { line, message };
            let (key, value) =
                content.split_once('=').ok_or_else(|| err(format!("expected key = value, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let g = &mut cfg.generator;
            let r: Result<(), String> = (|| {
                match key {
                    "n" => sw.n = one(value)?,
                    "neighbors" => sw.neighbors = one(value)?,
                    "rewire_prob" => sw.rewire_prob = one(value)?,
                    "edge_cost_min" => sw.edge_cost_range.0 = one(value)?,
                    "edge_cost_max" => sw.edge_cost_range.1 = one(value)?,
                    "graph_file" => graph_file = Some(PathBuf::from(value)),
                    "ball_size" => ball_size = Some(one(value)?),
                    "cost_mean" => g.cost_model.mean = one(value)?,
                    "cost_std" => g.cost_model.stddev = one(value)?,
                    "tiers_min" => g.tier_count_range.0 = one(value)?,
                    "tiers_max" => g.tier_count_range.1 = one(value)?,
                    "prob_mean" => g.prob_model.mean = one(value)?,
                    "prob_std" => g.prob_model.stddev = one(value)?,
                    "prob_std_ratio" => cfg.prob_std_ratio = one(value)?,
                    "solvers" => cfg.solvers = list(value)?,
                    "sweep" => {
                        cfg.sweep = match value {
                            "p_succ" => SweepParam::PSucc,
                            "prob_mean" => SweepParam::ProbMean,
                            "budget" => SweepParam::Budget,
                            other => return Err(format!("unknown sweep `{other}`")),
                        }
                    }
                    "values" => cfg.values = list(value)?,
                    "p_succ" => cfg.p_succ = one(value)?,
                    "instances" => cfg.instances_per_point = one(value)?,
                    "seed" => cfg.base_seed = one(value)?,
                    "time_limit_ms" => {
                        let ms: u64 = one(value)?;
                        time_limit_ms = (ms > 0).then_some(ms);
                    }
                    "max_expansions" => cfg.limits.max_expansions = one(value)?,
                    "aco_iterations" => cfg.aco_iterations = one(value)?,
                    "timing" => cfg.timing = one(value)?,
                    "output" => cfg.output = Some(PathBuf::from(value)),
                    other => return Err(format!("unknown key `{other}`")),
                }
                Ok(())
            })();
            r.map_err(err)?;
        }
        cfg.limits.time_limit = time_limit_ms.map(Duration::from_millis);
        cfg.generator.topology = match graph_file {
            None => Topology::SmallWorld(sw),
            Some(path) => {
                let path = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path,
                };
                let err = |message: String| ConfigError { line: 0, message };
                let text = std::fs::read_to_string(&path).map_err(|e| err(format!("{}: {e}", path.display())))?;
                let list = crate::io::parse_edge_list(&text, false).map_err(|e| err(e.to_string()))?;
                let labels: Vec<u64> = list.vertices.iter().copied().collect();
                let index = |l: u64| labels.binary_search(&l).unwrap();
                let graph = Graph::from_edges(labels.len(), list.edges.iter().map(|&(u, v, w, _)| (index(u), index(v), w)));
                Topology::File { graph, labels, ball_size }
            }
        };
        if cfg.values.is_empty() {
            return Err(ConfigError { line: 0, message: "no sweep values".into() });
        }
        if cfg.solvers.is_empty() {
            return Err(ConfigError { line: 0, message: "no solvers".into() });
        }
        Ok(cfg)
    }

    /// Generator settings for one sweep point.
    pub fn generator_at(&self, value: f64) -> GeneratorConfig {
        let mut g = self.generator.clone();
        if self.sweep == SweepParam::ProbMean {
            g.prob_model = ProbModel { mean: value, stddev: value * self.prob_std_ratio };
        }
        g
    }
}
