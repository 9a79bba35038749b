//! Exact two-terminal reliability and swarm optimizers for reliability
//! redundancy allocation on general networks.
//!
//! A problem is a node-reliability network ([`Network`]) plus per-subsystem
//! cost, volume and weight coefficients ([`ProblemInstance`]). A candidate
//! [`Solution`] picks a component count and a component reliability for
//! every node. [`Evaluator`] turns it into a penalized fitness, and the
//! optimizers in [`optim`] search for the best one.
//!
//! ```
//! use grrap::{benchmarks, evaluate_solution, PenaltyConfig, Solution};
//!
//! let inst = benchmarks::benchmark(3).unwrap().load().unwrap();
//! let sol = Solution::new(
//!     vec![4, 2, 2, 2, 2, 3],
//!     vec![0.822230, 0.791277, 0.899235, 0.909321, 0.752224, 0.883995],
//! );
//! let ev = evaluate_solution(&inst, &sol, &PenaltyConfig::general()).unwrap();
//! assert!(ev.report.feasible());
//! assert!((ev.rs - 0.9964225431).abs() < 1e-6);
//! ```

pub mod benchmarks;
pub mod comb;
pub mod error;
pub mod experiment;
pub mod model;
pub mod objective;
pub mod optim;
pub mod reliability;

#[cfg(test)]
mod testutil;

pub use comb::{brute_force_counts, enumerate_feasible_counts, CombSet};
pub use error::{Error, Result};
pub use model::{Network, ProblemInstance, Solution, SubsystemParams};
pub use objective::{
    check_constraints, evaluate_solution, ConstraintReport, Evaluation, Evaluator, PenaltyConfig,
    PenaltyMode, Violation,
};
pub use optim::{
    bsso_run, ga_run, pso_run, sso_run, Algorithm, FactorLevels, PreparedProblem, RunResult,
    SwarmConfig,
};
pub use reliability::{
    brute_force_reliability, exact_reliability, monte_carlo_reliability, ConnectedStates,
    NodeStateVector, ReliabilityResult,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/networks.md")]
    mod networks {}
    #[doc = include_str!("../../../book/src/reliability.md")]
    mod reliability {}
    #[doc = include_str!("../../../book/src/objective.md")]
    mod objective {}
    #[doc = include_str!("../../../book/src/comb.md")]
    mod comb {}
    #[doc = include_str!("../../../book/src/optimizers.md")]
    mod optimizers {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
