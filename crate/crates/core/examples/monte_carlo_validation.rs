//! Simulate the purchase process and compare with the closed-form probability.
//!
//! cargo run --release --example monte_carlo_validation

use psearch::bench::{generate_instance, GeneratorConfig};
use psearch::montecarlo::simulate;
use psearch::{solve_min_budget_exact, SearchLimits};

fn main() -> anyhow::Result<()> {
    for seed in 0..5 {
        let inst = generate_instance(&GeneratorConfig::default(), seed)?;
        let plan = solve_min_budget_exact(&inst, 0.6 * inst.available_mass(), SearchLimits::default())?;
        let r = simulate(&inst, &plan.walk, plan.budget, 200_000, seed);
        println!(
            "seed {seed}: analytic {:.4}, empirical {:.4} +- {:.4}, within 3 se: {}",
            r.analytic_rate,
            r.empirical_rate,
            r.stderr,
            r.within(3.0)
        );
    }
    Ok(())
}
