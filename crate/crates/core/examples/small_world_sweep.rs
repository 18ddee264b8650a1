//! A short p_succ sweep over generated instances, written as CSV to stdout.
//!
//! cargo run --release --example small_world_sweep > sweep.csv

use psearch::bench::{run_experiment, ExperimentConfig};

fn main() -> anyhow::Result<()> {
    let cfg = ExperimentConfig::parse(
        "n = 8\n\
         solvers = optimal, greedy, aco\n\
         values = 0.5, 0.7, 0.9\n\
         instances = 5\n\
         seed = 1\n",
        None,
    )?;
    print!("{}", run_experiment(&cfg)?);
    Ok(())
}
