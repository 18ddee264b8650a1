//! Optimal Min-Budget plan on a generated small-world instance, with the
//! incumbent trace printed as it improves.
//!
//! cargo run --release --example min_budget_exact [seed] [p_succ]

use psearch::bench::{generate_instance, GeneratorConfig};
use psearch::exact::{min_budget_search, SearchOptions};
use psearch::search::TraceEvent;
use psearch::SearchLimits;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let p_succ: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.8);

    let inst = generate_instance(&GeneratorConfig::default(), seed)?;
    println!("{} vertices, available mass {:.3}", inst.vertex_count(), inst.available_mass());

    let opts = SearchOptions::with_limits(SearchLimits::expansions(50_000_000));
    let mut observer = |e: &TraceEvent| {
        if let TraceEvent::Incumbent { value, expansions, .. } = e {
            println!("  incumbent {value:.1} after {expansions} expansions");
        }
    };
    let sol = min_budget_search(&inst, p_succ, &opts, Some(&mut observer))?;
    println!("status {}", sol.status.as_str());
    println!("walk {:?}", sol.walk.labels(&inst));
    println!("budget {:.1} (travel {:.1}), success {:.4}", sol.budget, sol.walk.travel_cost(), sol.probability);
    Ok(())
}
