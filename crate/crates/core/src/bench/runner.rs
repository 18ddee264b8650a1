use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtsp::{approx_max_probability, ExactDtspSolver};
use crate::error::SolveError;
use crate::exact::{solve_max_prob_exact, solve_min_budget_exact, PlanSolution};
use crate::heuristics::{aco_min_budget, bl_min_budget, greedy_max_prob, greedy_min_budget, nb_min_budget, AcoParams, GreedyOptions};
use crate::instance::Instance;
use crate::kmst::{kmst_min_budget, KmstMode};

use super::{generate_instance, ExperimentConfig, SolverKind, SweepParam};

/// Caps the number of runner threads.
pub const THREADS_ENV: &str = "PSEARCH_THREADS";

/// One CSV row. Detail rows describe one solver run; aggregate rows carry the
/// mean objective over the successful runs of a (sweep value, solver) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub kind: String,
    pub sweep: String,
    pub sweep_value: f64,
    pub instance_seed: Option<u64>,
    pub solver: String,
    pub budget: Option<f64>,
    pub probability: Option<f64>,
    pub walk_length: Option<usize>,
    pub wall_time_ms: Option<f64>,
    pub status: String,
    pub std: Option<f64>,
    pub n: Option<usize>,
}

impl Row {
    /// The swept objective: budget for Min-Budget, probability for Max-Probability.
    pub fn objective(&self) -> Option<f64> {
        if self.sweep == SweepParam::Budget.name() {
            self.probability
        } else {
            self.budget
        }
    }
}

fn solve(cfg: &ExperimentConfig, solver: SolverKind, inst: &Instance, value: f64, seed: u64) -> Result<PlanSolution, SolveError> {
    let limits = cfg.limits;
    if cfg.sweep == SweepParam::Budget {
        return match solver {
            SolverKind::Optimal => solve_max_prob_exact(inst, value, limits),
            SolverKind::Greedy => greedy_max_prob(inst, value, GreedyOptions::default()),
            SolverKind::Dtsp => {
                let out = approx_max_probability(inst, value, &ExactDtspSolver::new(limits), false)?;
                Ok(PlanSolution { walk: out.walk, budget: value, probability: out.probability, status: out.status, expansions: 0 })
            }
            other => Err(SolveError::Domain(format!("{} has no Max-Probability mode", other.name()))),
        };
    }
    let p_succ = if cfg.sweep == SweepParam::PSucc { value } else { cfg.p_succ };
    match solver {
        SolverKind::Optimal => solve_min_budget_exact(inst, p_succ, limits),
        SolverKind::Greedy => greedy_min_budget(inst, p_succ, GreedyOptions::default()),
        SolverKind::Aco => {
            let params = AcoParams { iterations: cfg.aco_iterations, seed, ..AcoParams::default() };
            aco_min_budget(inst, p_succ, &params)
        }
        SolverKind::Bl => bl_min_budget(inst, p_succ, limits),
        SolverKind::Nb => nb_min_budget(inst, p_succ, limits),
        SolverKind::Kmst => kmst_min_budget(inst, p_succ, KmstMode::Heuristic, limits).map(|r| r.plan),
        SolverKind::Dtsp => Err(SolveError::Domain("dtsp has no Min-Budget mode".into())),
    }
}

fn detail(cfg: &ExperimentConfig, solver: SolverKind, inst: &Instance, value: f64, seed: u64) -> Row {
    let started = Instant::now();
    let result = solve(cfg, solver, inst, value, seed);
    let elapsed = started.elapsed().as_secs_f64() * 1e3;
    let mut row = Row {
        kind: "detail".into(),
        sweep: cfg.sweep.name().into(),
        sweep_value: value,
        instance_seed: Some(seed),
        solver: solver.name().into(),
        budget: None,
        probability: None,
        walk_length: None,
        wall_time_ms: cfg.timing.then_some(elapsed),
        status: String::new(),
        std: None,
        n: None,
    };
    match result {
        Ok(sol) => {
            row.budget = Some(sol.budget);
            row.probability = Some(sol.probability);
            row.walk_length = Some(sol.walk.edge_count());
            row.status = sol.status.as_str().into();
        }
        Err(e) => row.status = e.code().into(),
    }
    row
}

/// Mean and sample standard deviation per (sweep value, solver), over detail
/// rows that carry an objective and finished without hitting a limit.
pub fn aggregate(details: &[Row]) -> Vec<Row> {
    let mut out: Vec<Row> = Vec::new();
    let mut i = 0;
    let mut sorted: Vec<&Row> = details.iter().collect();
    sorted.sort_by(|a, b| a.sweep_value.total_cmp(&b.sweep_value).then_with(|| a.solver.cmp(&b.solver)));
    while i < sorted.len() {
        let first = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j].sweep_value == first.sweep_value && sorted[j].solver == first.solver {
            j += 1;
        }
        let values: Vec<f64> = sorted[i..j]
            .iter()
            .filter(|r| r.status == "OPTIMAL" || r.status == "HEURISTIC")
            .filter_map(|r| r.objective())
            .collect();
        let n = values.len();
        let (mean, std) = if n == 0 {
            (None, None)
        } else {
            let mean = values.iter().sum::<f64>() / n as f64;
            let var = if n > 1 { values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
            (Some(mean), Some(var.sqrt()))
        };
        let is_budget = first.sweep != SweepParam::Budget.name();
        out.push(Row {
            kind: "aggregate".into(),
            sweep: first.sweep.clone(),
            sweep_value: first.sweep_value,
            instance_seed: None,
            solver: first.solver.clone(),
            budget: if is_budget { mean } else { None },
            probability: if is_budget { None } else { mean },
            walk_length: None,
            wall_time_ms: None,
            status: if n == j - i { "MEAN".into() } else { format!("MEAN_OF_{n}") },
            std,
            n: Some(n),
        });
        i = j;
    }
    out
}

fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&t| t > 0)
}

/// All detail rows followed by the aggregate rows, each block in canonical
/// order (sweep value, instance seed, solver).
pub fn run_experiment_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>, SolveError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count() {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| SolveError::Domain(e.to_string()))?;
    pool.install(|| {
        let seeds: Vec<u64> = (0..cfg.instances_per_point as u64).map(|i| cfg.base_seed + i).collect();
        // p_succ and budget sweeps reuse one instance per seed across points
        let per_point = cfg.sweep == SweepParam::ProbMean;
        let points: Vec<(f64, u64)> =
            cfg.values.iter().flat_map(|&v| seeds.iter().map(move |&s| (v, s))).collect();
        let instances: Vec<Instance> = if per_point {
            points.par_iter().map(|&(v, s)| generate_instance(&cfg.generator_at(v), s)).collect::<Result<_, _>>()?
        } else {
            seeds.par_iter().map(|&s| generate_instance(&cfg.generator, s)).collect::<Result<_, _>>()?
        };
        let cells: Vec<(usize, f64, u64, SolverKind)> = points
            .iter()
            .enumerate()
            .flat_map(|(i, &(v, s))| {
                let idx = if per_point { i } else { i % seeds.len() };
                cfg.solvers.iter().map(move |&k| (idx, v, s, k))
            })
            .collect();
        let mut rows: Vec<Row> =
            cells.par_iter().map(|&(idx, v, s, k)| detail(cfg, k, &instances[idx], v, s)).collect();
        rows.sort_by(|a, b| {
            a.sweep_value
                .total_cmp(&b.sweep_value)
                .then(a.instance_seed.cmp(&b.instance_seed))
                .then_with(|| a.solver.cmp(&b.solver))
        });
        let agg = aggregate(&rows);
        rows.extend(agg);
        Ok(rows)
    })
}

/// Runs the sweep and returns the CSV document.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<String, SolveError> {
    Ok(write_csv(&run_experiment_rows(cfg)?))
}

pub fn write_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn parse_csv(text: &str) -> Result<Vec<Row>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(values: Vec<f64>, instances: usize, solvers: Vec<SolverKind>) -> ExperimentConfig {
        ExperimentConfig {
            values,
            instances_per_point: instances,
            solvers,
            timing: false,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn row_counts_and_pairing() {
        let cfg = small(vec![0.7, 0.8], 3, vec![SolverKind::Greedy, SolverKind::Aco]);
        let rows = run_experiment_rows(&cfg).unwrap();
        let details: Vec<&Row> = rows.iter().filter(|r| r.kind == "detail").collect();
        assert_eq!(details.len(), 12);
        assert_eq!(rows.len() - details.len(), 4);
        for v in [0.7, 0.8] {
            let seeds = |s: &str| -> Vec<Option<u64>> {
                details.iter().filter(|r| r.sweep_value == v && r.solver == s).map(|r| r.instance_seed).collect()
            };
            assert_eq!(seeds("greedy"), seeds("aco"));
        }
    }

    #[test]
    fn csv_round_trip() {
        let cfg = small(vec![0.9], 2, vec![SolverKind::Greedy, SolverKind::Kmst]);
        let rows = run_experiment_rows(&cfg).unwrap();
        assert!(rows.iter().any(|r| r.status == "NOT_UNIFORM"));
        assert_eq!(parse_csv(&write_csv(&rows)).unwrap(), rows);
    }

    #[test]
    fn max_probability_sweep() {
        let cfg = ExperimentConfig {
            sweep: SweepParam::Budget,
            values: vec![3000.0, 6000.0],
            ..small(vec![], 2, vec![SolverKind::Optimal, SolverKind::Greedy, SolverKind::Dtsp])
        };
        let rows = run_experiment_rows(&cfg).unwrap();
        for r in rows.iter().filter(|r| r.kind == "detail") {
            assert!(r.probability.is_some(), "{r:?}");
        }
    }
}
