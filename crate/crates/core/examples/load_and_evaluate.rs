//! Parse an instance from text, then score a hand-written walk.
//!
//! cargo run --example load_and_evaluate

use psearch::eval::{collection_events, minimal_budget_for_walk, prize_ledger};
use psearch::io::load_instance;
use psearch::{success_probability, Walk};

const GRAPH: &str = "\
# u v weight
10 11 2
11 12 1.5
10 13 3
13 12 1
";

const SITES: &str = "\
start: 10
11: 4@0.3, 9@0.2
12: 2@0.25
13: 6@0.5
";

fn main() -> anyhow::Result<()> {
    let inst = load_instance(GRAPH, SITES)?;
    let walk = Walk::from_labels(&inst, &[10, 11, 12, 13])?;
    println!("walk {:?}, travel {}", walk.labels(&inst), walk.travel_cost());

    for budget in [4.0, 8.0, 12.0, 20.0] {
        println!("budget {budget:>5}: success {:.4}", success_probability(&inst, &walk, budget));
    }

    let budget = 12.0;
    for e in collection_events(&inst, &walk, budget) {
        println!(
            "  site {} reached after {} travel, buys tiers {:?}",
            inst.label(e.vertex),
            e.arrival_spent,
            e.tiers_counted
        );
    }
    for (v, prize) in prize_ledger(&inst, &walk, budget) {
        println!("  prize at {}: {prize:.4}", inst.label(v));
    }

    for target in [0.3, 0.6, 0.9] {
        match minimal_budget_for_walk(&inst, &walk, target) {
            Some(b) => println!("reaching {target} along this walk needs budget {b}"),
            None => println!("this walk can never reach {target}"),
        }
    }
    Ok(())
}
