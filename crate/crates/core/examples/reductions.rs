//! Vertex splitting and the Deadline-TSP view of one small instance.
//!
//! cargo run --example reductions

use psearch::dtsp::dtsp_prize;
use psearch::io::{write_dtsp, write_graph, write_sites};
use psearch::transform::{round_prizes, to_deadline_tsp, to_single_cost};
use psearch::{success_probability, InstanceBuilder, Walk};

fn main() -> anyhow::Result<()> {
    let inst = InstanceBuilder::new(3)
        .start(0)
        .edge(0, 1, 1.0)
        .edge(1, 2, 2.0)
        .site(1, [(1.0, 0.3), (2.0, 0.3), (4.0, 0.2)])
        .site(2, [(1.0, 0.5)])
        .build()?;

    let single = to_single_cost(&inst)?;
    println!("split instance:\n{}{}", write_graph(single.instance()), write_sites(single.instance()));

    let budget = 6.0;
    let dtsp = to_deadline_tsp(&single, budget);
    let (graph, table) = write_dtsp(&dtsp, single.instance().labels());
    println!("deadline-tsp at budget {budget}:\n{graph}{table}");

    let walk = Walk::new(&inst, vec![0, 1, 2])?;
    let expanded = single.expand_walk(&walk);
    let scored = dtsp_prize(&dtsp, expanded.vertices());
    let p = success_probability(&inst, &walk, budget);
    println!("walk {:?}: success {p:.4}, prize {:.4}, 1 - e^-prize = {:.4}",
        walk.labels(&inst), scored.total_prize, 1.0 - (-scored.total_prize).exp());

    let rounded = round_prizes(&dtsp);
    println!("rounded prize {} with c = {:?}", dtsp_prize(&rounded.instance, expanded.vertices()).total_prize, rounded.lower_bound_c);
    Ok(())
}
