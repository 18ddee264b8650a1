//! Solvers against brute-force enumeration on small seeded instances.

mod common;

use common::*;
use psearch::dtsp::{DtspSolver, ExactDtspSolver};
use psearch::eval::minimal_budget_for_walk;
use psearch::exact::{solve_max_prob_exact, solve_min_budget_exact};
use psearch::graph::Graph;
use psearch::kmst::{kmst_solve, KmstMode};
use psearch::{InstanceBuilder, SearchLimits, Walk};
use rand::Rng;

#[test]
fn exact_min_budget_equals_enumeration_on_five_vertices() {
    for seed in 0..100 {
        let inst = random_instance(seed, 5, 3);
        let target = random_target(seed, &inst);
        let oracle = oracle_min_budget(&inst, target, 8).unwrap();
        let sol = solve_min_budget_exact(&inst, target, SearchLimits::default()).unwrap();
        assert!((sol.budget - oracle).abs() <= TOL, "seed {seed}: {} vs {oracle}", sol.budget);
        assert_eq!(minimal_budget_for_walk(&inst, &sol.walk, target), Some(sol.budget));
    }
}

#[test]
fn exact_max_prob_on_three_vertex_lines() {
    let mut r = rng(77);
    for seed in 0..100 {
        let mut b = InstanceBuilder::new(3)
            .edge(0, 1, r.random_range(1..=3) as f64)
            .edge(1, 2, r.random_range(1..=3) as f64)
            .start(0);
        b.set_site(1, random_tiers(&mut r, 3));
        b.set_site(2, random_tiers(&mut r, 3));
        let inst = b.build().unwrap();
        let budget = r.random_range(0..=12) as f64;
        let oracle = oracle_max_prob(&inst, budget, 8);
        let sol = solve_max_prob_exact(&inst, budget, SearchLimits::default()).unwrap();
        assert!((sol.probability - oracle).abs() <= TOL, "seed {seed}: {} vs {oracle}", sol.probability);
    }
}

#[test]
fn minimal_budget_matches_a_fine_grid() {
    // the jump set must contain the optimum; a 1e-3 grid brackets it
    let mut r = rng(5);
    for seed in 0..40 {
        let inst = random_instance(500 + seed, 4, 2);
        let walk = Walk::new(&inst, random_walk(&mut r, inst.graph(), inst.start(), 5)).unwrap();
        let arrivals = naive_arrivals(&inst, walk.vertices());
        let target = random_target(seed, &inst) * 0.5;
        let Some(b) = minimal_budget_for_walk(&inst, &walk, target) else { continue };
        let grid = (0..40_000).map(|i| i as f64 * 1e-3).find(|&g| naive_success(&inst, &arrivals, g) + TOL >= target);
        if let Some(g) = grid {
            assert!(g + 1e-9 >= b && g - b < 1e-3 + 1e-9, "seed {seed}: grid {g} vs jump set {b}");
        }
    }
}

#[test]
fn exact_dtsp_equals_enumeration() {
    let solver = ExactDtspSolver::new(SearchLimits::default());
    for seed in 0..100 {
        let dtsp = random_dtsp(seed, 5);
        let oracle = oracle_dtsp(&dtsp, 9);
        let out = solver.solve(&dtsp).unwrap();
        assert!((out.solution.total_prize - oracle).abs() <= TOL, "seed {seed}: {} vs {oracle}", out.solution.total_prize);
    }
}

#[test]
fn three_vertex_dtsp_with_one_reachable_prize() {
    let g = Graph::from_edges(3, [(0, 1, 2.0), (0, 2, 5.0)]);
    let dtsp = psearch::dtsp::DtspInstance::new(g, 0, vec![0.0, 1.0, 1.0], vec![10.0, 3.0, 4.0]);
    let out = ExactDtspSolver::new(SearchLimits::default()).solve(&dtsp).unwrap();
    assert_eq!(out.solution.total_prize, oracle_dtsp(&dtsp, 6));
    assert_eq!(out.solution.total_prize, 1.0);
}

#[test]
fn kmst_exact_equals_subset_oracle_and_bounds_the_heuristic() {
    let mut r = rng(9);
    for seed in 0..60 {
        let n = r.random_range(2..=7);
        let g = Graph::from_edges(n, random_edges(&mut r, n, 0.4));
        let k = r.random_range(1..n);
        let exact = kmst_solve(&g, 0, k, KmstMode::Exact, SearchLimits::default()).unwrap();
        let heur = kmst_solve(&g, 0, k, KmstMode::Heuristic, SearchLimits::default()).unwrap();
        let oracle = oracle_kmst(&g, 0, k).unwrap();
        assert!((exact.weight - oracle).abs() <= TOL, "seed {seed}: {} vs {oracle}", exact.weight);
        assert!(heur.weight + TOL >= exact.weight, "seed {seed}");
        for t in [&exact, &heur] {
            assert_eq!(t.edges.len() + 1, t.vertices.len());
            assert!(t.vertices.len() > k);
            assert!(t.vertices.contains(&0));
        }
    }
}
