//! Uniform sites: pick k from the target, build a k-MST, walk it by doubling.
//!
//! cargo run --example kmst_route

use psearch::kmst::{kmst_min_budget, required_k, KmstMode};
use psearch::{solve_min_budget_exact, InstanceBuilder, SearchLimits};

fn main() -> anyhow::Result<()> {
    // a 4x4 grid, start in a corner, every other vertex sells the same tier
    let side = 4;
    let mut b = InstanceBuilder::new(side * side).start(0);
    for r in 0..side {
        for c in 0..side {
            let v = r * side + c;
            if c + 1 < side {
                b.add_edge(v, v + 1, 1.0 + (r % 2) as f64);
            }
            if r + 1 < side {
                b.add_edge(v, v + side, 1.5);
            }
            if v != 0 {
                b.set_site(v, [(2.0, 0.2)]);
            }
        }
    }
    let inst = b.build()?;
    let limits = SearchLimits::default();

    for p_succ in [0.5, 0.8, 0.95] {
        println!("target {p_succ}: k = {}", required_k(p_succ, 0.2)?);
        for mode in [KmstMode::Exact, KmstMode::Heuristic] {
            let route = kmst_min_budget(&inst, p_succ, mode, limits)?;
            println!(
                "  {mode:?}: tree weight {}, budget {}, success {:.4}",
                route.tree.weight, route.plan.budget, route.plan.probability
            );
        }
        let opt = solve_min_budget_exact(&inst, p_succ, SearchLimits::expansions(5_000_000))?;
        println!("  optimal budget {} ({})", opt.budget, opt.status.as_str());
    }
    Ok(())
}
