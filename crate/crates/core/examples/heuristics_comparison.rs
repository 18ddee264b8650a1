//! Greedy, ant colony and the two restricted searches against the optimum.
//!
//! cargo run --release --example heuristics_comparison

use psearch::bench::{generate_instance, GeneratorConfig};
use psearch::heuristics::{aco_min_budget, bl_min_budget, greedy_min_budget, nb_min_budget, AcoParams, GreedyOptions};
use psearch::{solve_min_budget_exact, PlanSolution, SearchLimits, SolveError};

fn show(name: &str, r: Result<PlanSolution, SolveError>, opt: f64) {
    match r {
        Ok(s) => println!("  {name:<8} {:>8.1}  (+{:.1}%)", s.budget, 100.0 * (s.budget / opt - 1.0)),
        Err(e) => println!("  {name:<8} {}", e.code()),
    }
}

fn main() -> anyhow::Result<()> {
    let limits = SearchLimits::default();
    for seed in 0..4 {
        let inst = generate_instance(&GeneratorConfig::default(), seed)?;
        let p_succ = 0.8 * inst.available_mass();
        let opt = solve_min_budget_exact(&inst, p_succ, limits)?;
        println!("seed {seed}, target {p_succ:.3}: optimal {:.1}", opt.budget);
        show("greedy", greedy_min_budget(&inst, p_succ, GreedyOptions::default()), opt.budget);
        show("aco", aco_min_budget(&inst, p_succ, &AcoParams::with_seed(seed)), opt.budget);
        show("bl", bl_min_budget(&inst, p_succ, limits), opt.budget);
        show("nb", nb_min_budget(&inst, p_succ, limits), opt.budget);
    }
    Ok(())
}
