//! Probabilistic physical search on weighted graphs.
//!
//! An agent starts at a vertex with an initial budget. Each site sells the
//! item at one of a few costs, with known probabilities, and the real cost is
//! only revealed on arrival. Travel and purchase share the budget.
//!
//! * [`eval`] scores a fixed walk: success probability at a budget, or the
//!   smallest budget reaching a target probability.
//! * [`exact`] holds branch-and-bound solvers for both objectives.
//! * [`heuristics`] holds Greedy, ACO and the restricted BL/NB searches.
//! * [`transform`] and [`dtsp`] reduce Max-Probability to Deadline-TSP.
//! * [`kmst`] routes uniform instances along a rooted k-MST.
//! * [`montecarlo`] simulates walks against sampled costs.
//! * [`bench`] generates instances and runs parameter sweeps.
//!
//! Runnable tours of each area live in the crate's `examples/` directory
//! (`cargo run --example min_budget_exact` and friends).

pub mod bench;
pub mod dtsp;
pub mod error;
pub mod eval;
pub mod exact;
pub mod graph;
pub mod heuristics;
pub mod instance;
pub mod io;
pub mod kmst;
pub mod montecarlo;
pub mod search;
pub mod transform;

/// Absolute tolerance for budget and probability comparisons.
pub const EPS: f64 = 1e-9;

/// Upper clamp for `-ln(1 - p)` prizes, reached when `p` is 1.
pub const PRIZE_CAP: f64 = 50.0;

pub use error::{InstanceError, SolveError};
pub use eval::{minimal_budget_for_walk, success_probability};
pub use exact::{solve_max_prob_exact, solve_min_budget_exact, PlanSolution};
pub use graph::{Graph, VertexId};
pub use instance::{Instance, InstanceBuilder, Site, Tier, Walk};
pub use search::{SearchLimits, SolveStatus};
