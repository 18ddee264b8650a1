//! End-to-end acceptance checks. Runs as a plain binary and prints one
//! PASS/FAIL line per criterion; exits nonzero when any criterion fails.

mod common;

use std::time::Instant;

use common::*;
use psearch::bench::{generate_instance, run_experiment, run_experiment_rows, ExperimentConfig, Row, THREADS_ENV};
use psearch::dtsp::{approx_max_probability, ExactDtspSolver};
use psearch::eval::{collected_prize, meets_target, minimal_budget_for_walk, prize_of};
use psearch::exact::{solve_max_prob_exact, solve_min_budget_exact};
use psearch::heuristics::{aco_min_budget, bl_min_budget, greedy_min_budget, nb_min_budget, AcoParams, GreedyOptions};
use psearch::io::{write_graph, write_sites};
use psearch::kmst::{kmst_min_budget, required_k, KmstMode};
use psearch::montecarlo::simulate;
use psearch::transform::to_single_cost;
use psearch::{success_probability, InstanceBuilder, SearchLimits, SolveError, Walk};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass: ok, detail: detail.into() }
}

fn exact_solvers_match_enumeration() -> Outcome {
    let limits = SearchLimits::default();
    let mut worst_budget: f64 = 0.0;
    let mut worst_prob: f64 = 0.0;
    for seed in 0..100 {
        let inst = random_instance(1000 + seed, 6, 3);
        let target = random_target(seed, &inst);
        let oracle = oracle_min_budget(&inst, target, 8).expect("target below available mass");
        let sol = match solve_min_budget_exact(&inst, target, limits) {
            Ok(s) => s,
            Err(e) => return check(false, format!("seed {seed}: min-budget error {e}")),
        };
        let gap = (sol.budget - oracle).abs();
        worst_budget = worst_budget.max(gap);
        if gap > 1e-9 {
            return check(false, format!("seed {seed}: budget {} vs enumeration {oracle}", sol.budget));
        }
        for budget in [0.0, oracle, oracle * 0.7, oracle + 1.5] {
            let oracle_p = oracle_max_prob(&inst, budget, 8);
            let p = solve_max_prob_exact(&inst, budget, limits).unwrap().probability;
            worst_prob = worst_prob.max((p - oracle_p).abs());
            if (p - oracle_p).abs() > 1e-9 {
                return check(false, format!("seed {seed} budget {budget}: probability {p} vs enumeration {oracle_p}"));
            }
        }
    }
    pass(format!("100 instances, max budget gap {worst_budget:.1e}, max probability gap {worst_prob:.1e}"))
}

fn reduction_is_sound() -> Outcome {
    let mut r = rng(2);
    let mut checked = 0;
    for seed in 0..100 {
        let inst = random_full_instance(2000 + seed, 6, 3);
        let split = match to_single_cost(&inst) {
            Ok(s) => s,
            Err(e) => return check(false, format!("seed {seed}: {e}")),
        };
        for _ in 0..5 {
            let walk = Walk::new(&inst, random_walk(&mut r, inst.graph(), inst.start(), 10)).unwrap();
            let expanded = split.expand_walk(&walk);
            if (expanded.travel_cost() - walk.travel_cost()).abs() > 1e-9 {
                return check(false, format!("seed {seed}: travel cost changed"));
            }
            if split.map_walk_back(&expanded) != walk {
                return check(false, format!("seed {seed}: map_walk_back does not invert expansion"));
            }
            for _ in 0..4 {
                let budget = r.random_range(0.0..20.0);
                let a = success_probability(&inst, &walk, budget);
                let b = success_probability(split.instance(), &expanded, budget);
                if (a - b).abs() > 1e-9 {
                    return check(false, format!("seed {seed} budget {budget}: {a} vs {b}"));
                }
                checked += 1;
            }
        }
    }
    pass(format!("{checked} (walk, budget) pairs on 100 instances"))
}

fn pipeline_matches_exact() -> Outcome {
    let limits = SearchLimits::default();
    let solver = ExactDtspSolver::new(limits);
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    let mut min_ratio_slack = f64::INFINITY;
    for seed in 0..100 {
        let inst = random_instance(3000 + seed, 6, 3);
        let budget = r.random_range(0.0..14.0);
        let exact = solve_max_prob_exact(&inst, budget, limits).unwrap().probability;
        let plain = match approx_max_probability(&inst, budget, &solver, false) {
            Ok(o) => o,
            Err(e) => return check(false, format!("seed {seed}: {e}")),
        };
        worst = worst.max((plain.probability - exact).abs());
        if (plain.probability - exact).abs() > 1e-9 {
            return check(false, format!("seed {seed}: pipeline {} vs exact {exact}", plain.probability));
        }
        let rounded = approx_max_probability(&inst, budget, &solver, true).unwrap();
        let optimal_prize = prize_of(exact);
        if optimal_prize > 0.0 {
            let q = collected_prize(&inst, &rounded.walk, budget) / optimal_prize;
            let slack = rounded.probability - q * exact;
            min_ratio_slack = min_ratio_slack.min(slack);
            if slack < -1e-9 {
                return check(false, format!("seed {seed}: rounded {} < {q} * {exact}", rounded.probability));
            }
        }
    }
    pass(format!("100 instances, max gap {worst:.1e}; rounded slack >= {min_ratio_slack:.1e}"))
}

fn newton_binomial() -> Outcome {
    let mut r = rng(4);
    let mut min_slack = f64::INFINITY;
    for _ in 0..100_000 {
        let p: f64 = r.random_range(f64::MIN_POSITIVE..1.0);
        let q: f64 = 1.0 - r.random::<f64>();
        let slack = 1.0 - (1.0 - p).powf(q) - q * p;
        min_slack = min_slack.min(slack);
        if slack < -1e-12 {
            return check(false, format!("p {p}, r {q}: slack {slack}"));
        }
    }
    pass(format!("100000 samples, min slack {min_slack:.1e}"))
}

fn kmst_route_guarantees() -> Outcome {
    let mut r = rng(5);
    for _ in 0..10_000 {
        let p_succ = r.random_range(1e-6..1.0 - 1e-6);
        let p = r.random_range(1e-3..1.0 - 1e-3);
        let k = required_k(p_succ, p).unwrap();
        if 1.0 - (1.0 - p).powi(k as i32) < p_succ - 1e-12 {
            return check(false, format!("required_k({p_succ}, {p}) = {k} too small"));
        }
    }
    let limits = SearchLimits::default();
    let mut worst_ratio: f64 = 0.0;
    for seed in 0..50 {
        let (inst, _, _) = random_uniform_instance(5000 + seed, 7);
        let avail = available(&inst);
        let p_succ = (avail * r.random_range(0.1..0.95)).max(1e-3);
        let route = match kmst_min_budget(&inst, p_succ, KmstMode::Exact, limits) {
            Ok(route) => route,
            Err(e) => return check(false, format!("seed {seed}: {e}")),
        };
        let walk = &route.plan.walk;
        if !meets_target(success_probability(&inst, walk, route.plan.budget), p_succ) {
            return check(false, format!("seed {seed}: route infeasible"));
        }
        let opt = solve_min_budget_exact(&inst, p_succ, limits).unwrap().budget;
        if route.plan.budget > 5.0 * opt + 1e-6 {
            return check(false, format!("seed {seed}: budget {} > 5 * {opt}", route.plan.budget));
        }
        if opt > 0.0 {
            worst_ratio = worst_ratio.max(route.plan.budget / opt);
        }
    }
    pass(format!("10000 k checks; 50 uniform instances, worst budget ratio {worst_ratio:.3}"))
}

fn heuristics_feasible_and_dominated() -> Outcome {
    let limits = SearchLimits::default();
    let mut solved = [0usize; 4];
    for seed in 0..200 {
        let inst = random_instance(6000 + seed, 8, 3);
        let p_succ = random_target(seed, &inst);
        let opt = match solve_min_budget_exact(&inst, p_succ, limits) {
            Ok(s) => s.budget,
            Err(e) => return check(false, format!("seed {seed}: optimal failed: {e}")),
        };
        let results = [
            ("greedy", greedy_min_budget(&inst, p_succ, GreedyOptions::default())),
            ("aco", aco_min_budget(&inst, p_succ, &AcoParams::with_seed(seed))),
            ("bl", bl_min_budget(&inst, p_succ, limits)),
            ("nb", nb_min_budget(&inst, p_succ, limits)),
        ];
        for (i, (name, res)) in results.into_iter().enumerate() {
            match res {
                Ok(sol) => {
                    solved[i] += 1;
                    let p = success_probability(&inst, &sol.walk, sol.budget);
                    if !meets_target(p, p_succ) {
                        return check(false, format!("seed {seed}: {name} infeasible ({p} < {p_succ})"));
                    }
                    if sol.budget < opt - 1e-9 {
                        return check(false, format!("seed {seed}: {name} budget {} below optimum {opt}", sol.budget));
                    }
                }
                Err(SolveError::Stuck | SolveError::NoSolution) => {}
                Err(e) => return check(false, format!("seed {seed}: {name} error {e}")),
            }
        }
    }
    let star = InstanceBuilder::new(4)
        .edge(0, 1, 1.0)
        .edge(0, 2, 1.0)
        .edge(0, 3, 1.0)
        .site(1, [(1.0, 0.5)])
        .site(2, [(1.0, 0.5)])
        .site(3, [(1.0, 0.5)])
        .start(0)
        .build()
        .unwrap();
    let nb = nb_min_budget(&star, 0.75, limits);
    let opt = solve_min_budget_exact(&star, 0.75, limits);
    let ok = nb == Err(SolveError::NoSolution) && opt.is_ok();
    check(
        ok,
        format!(
            "200 instances, solved greedy {} aco {} bl {} nb {}; star: nb {:?}, optimal {:?}",
            solved[0],
            solved[1],
            solved[2],
            solved[3],
            nb.as_ref().err(),
            opt.map(|s| s.budget)
        ),
    )
}

fn mean_of(rows: &[Row], solver: &str, value: f64) -> f64 {
    rows.iter()
        .find(|r| r.kind == "aggregate" && r.solver == solver && r.sweep_value == value)
        .and_then(|r| r.budget)
        .unwrap_or(f64::NAN)
}

fn sweep_trends() -> Outcome {
    let cfg = ExperimentConfig { timing: false, ..ExperimentConfig::default() };
    let rows = match run_experiment_rows(&cfg) {
        Ok(r) => r,
        Err(e) => return check(false, format!("sweep failed: {e}")),
    };
    let solvers = ["optimal", "greedy", "aco", "bl", "nb"];
    let mut monotone = true;
    for s in solvers {
        let means: Vec<f64> = cfg.values.iter().map(|&v| mean_of(&rows, s, v)).collect();
        if !means.windows(2).all(|w| w[0] <= w[1] + 1e-9) {
            monotone = false;
            println!("  {s} means not nondecreasing: {means:?}");
        }
    }
    let aco_ok = cfg.values.iter().all(|&v| mean_of(&rows, "aco", v) <= mean_of(&rows, "greedy", v) + 1e-9);
    let gaps: Vec<String> = cfg
        .values
        .iter()
        .map(|&v| {
            let gap = mean_of(&rows, "bl", v) / mean_of(&rows, "optimal", v) - 1.0;
            format!("{v}: {:.1}%", 100.0 * gap)
        })
        .collect();
    let bl_within = cfg.values.iter().all(|&v| mean_of(&rows, "bl", v) <= 1.05 * mean_of(&rows, "optimal", v));
    println!(
        "  (c) BL vs optimal mean gap {} -> {}",
        gaps.join(", "),
        if bl_within { "within 5%" } else { "exceeds 5% (reported, not failed)" }
    );
    let aco_vs_greedy: Vec<String> = cfg
        .values
        .iter()
        .map(|&v| format!("{v}: {:.0} vs {:.0}", mean_of(&rows, "aco", v), mean_of(&rows, "greedy", v)))
        .collect();
    check(
        monotone && aco_ok,
        format!("(a) monotone {monotone}; (b) aco <= greedy {aco_ok} [{}]", aco_vs_greedy.join(", ")),
    )
}

fn monte_carlo_agrees() -> Outcome {
    let mut r = rng(8);
    let mut inside = 0;
    for seed in 0..50 {
        let inst = random_full_instance(8000 + seed, 6, 3);
        let walk = Walk::new(&inst, random_walk(&mut r, inst.graph(), inst.start(), 8)).unwrap();
        let budget = r.random_range(0.0..16.0);
        let report = simulate(&inst, &walk, budget, 100_000, seed);
        if report.within(3.0) {
            inside += 1;
        }
    }
    check(inside >= 48, format!("{inside}/50 within 3 standard errors"))
}

fn everything_is_deterministic() -> Outcome {
    let cfg = ExperimentConfig::default().generator;
    for seed in 0..5 {
        let a = generate_instance(&cfg, seed).unwrap();
        let b = generate_instance(&cfg, seed).unwrap();
        if write_graph(&a) != write_graph(&b) || write_sites(&a) != write_sites(&b) {
            return check(false, format!("generator differs for seed {seed}"));
        }
        let p = random_target(seed, &a);
        let x = aco_min_budget(&a, p, &AcoParams::with_seed(seed));
        let y = aco_min_budget(&a, p, &AcoParams::with_seed(seed));
        if x != y {
            return check(false, format!("ACO differs for seed {seed}"));
        }
        let walk = x.map(|s| s.walk).unwrap_or_else(|_| Walk::trivial(&a));
        let budget = minimal_budget_for_walk(&a, &walk, p).unwrap_or(0.0);
        if simulate(&a, &walk, budget, 20_000, seed) != simulate(&a, &walk, budget, 20_000, seed) {
            return check(false, format!("Monte-Carlo differs for seed {seed}"));
        }
    }
    let sweep = ExperimentConfig { instances_per_point: 10, timing: false, ..ExperimentConfig::default() };
    std::env::set_var(THREADS_ENV, "1");
    let serial = run_experiment(&sweep).unwrap();
    let cores = std::thread::available_parallelism().map_or(8, |n| n.get()).max(2);
    std::env::set_var(THREADS_ENV, cores.to_string());
    let parallel = run_experiment(&sweep).unwrap();
    let again = run_experiment(&sweep).unwrap();
    std::env::remove_var(THREADS_ENV);
    check(
        serial == parallel && parallel == again,
        format!("generator, ACO, Monte-Carlo repeat; sweep CSV identical on 1 and {cores} threads"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("exact solvers match enumeration", exact_solvers_match_enumeration),
        ("reduction soundness", reduction_is_sound),
        ("max-probability pipeline exactness", pipeline_matches_exact),
        ("newton-binomial inequality", newton_binomial),
        ("k-MST route guarantees", kmst_route_guarantees),
        ("heuristic feasibility and dominance", heuristics_feasible_and_dominated),
        ("desk-scale sweep trends", sweep_trends),
        ("monte-carlo validation", monte_carlo_agrees),
        ("determinism", everything_is_deterministic),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let out = run();
        let secs = started.elapsed().as_secs_f64();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} {}. {name} ({secs:.1}s): {}", i + 1, out.detail);
        if !out.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
