//! Max-Probability three ways: exact search, the Deadline-TSP reduction
//! with and without prize rounding, and the greedy Deadline-TSP solver.
//!
//! cargo run --release --example max_probability_pipeline

use psearch::bench::{generate_instance, GeneratorConfig};
use psearch::dtsp::{approx_max_probability, ExactDtspSolver, GreedyDtspSolver};
use psearch::{solve_max_prob_exact, SearchLimits};

fn main() -> anyhow::Result<()> {
    let cfg = GeneratorConfig { tier_count_range: (1, 2), ..GeneratorConfig::default() };
    let inst = generate_instance(&cfg, 3)?;
    let limits = SearchLimits::default();

    for budget in [3000.0, 6000.0, 9000.0] {
        let exact = solve_max_prob_exact(&inst, budget, limits)?;
        let plain = approx_max_probability(&inst, budget, &ExactDtspSolver::new(limits), false)?;
        let rounded = approx_max_probability(&inst, budget, &ExactDtspSolver::new(limits), true)?;
        let greedy = approx_max_probability(&inst, budget, &GreedyDtspSolver, false)?;
        println!("budget {budget}");
        println!("  exact search     {:.4}  {:?}", exact.probability, exact.walk.labels(&inst));
        println!("  reduction        {:.4}  {:?}", plain.probability, plain.walk.labels(&inst));
        println!(
            "  rounded prizes   {:.4}  (c = {:.3})",
            rounded.probability,
            rounded.rounding_c.unwrap_or(f64::NAN)
        );
        println!("  greedy dtsp      {:.4}", greedy.probability);
    }
    Ok(())
}
