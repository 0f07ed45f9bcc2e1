//! System-level multi-objective tuning of embedded memory parameterizations.
//!
//! All memories of a chip are optimized together: one real-valued genome
//! encodes the compiler choice and architectural parameters of every memory,
//! differential evolution explores it, a repair step maps every genome to the
//! nearest feasible parameterization before evaluation, and NSGA-II selection
//! keeps a diverse set of Pareto-optimal trade-offs between summed objectives
//! such as area and power.
//!
//! An exhaustive baseline computes the exact global front for small systems,
//! and [`metrics`] compares found fronts against it.
//!
//! ```
//! use memsys_evo::{catalog, engine, estimator::SurrogateBackend};
//!
//! let (catalog, system) = catalog::two_memory_toy();
//! let cfg = engine::DeConfig { pop_size: 10, generations: 20, seed: 1, ..Default::default() };
//! let run = engine::run_optimization(&catalog, &system, &cfg, &SurrogateBackend).unwrap();
//! assert!(!run.final_front.is_empty());
//! assert_eq!(run.evaluations_used, 10 * 21);
//! ```

pub mod baseline;
pub mod catalog;
pub mod engine;
pub mod error;
pub mod estimator;
pub mod genome;
pub mod metrics;
pub mod pareto;
pub mod report;

pub use error::{Error, Result};
pub use estimator::{ObjectiveVector, Parameterization};

#[cfg(test)]
mod test_support;

// The guide's code listings compile and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/design-space.md")]
    mod design_space {}
    #[doc = include_str!("../../../book/src/repair.md")]
    mod repair {}
    #[doc = include_str!("../../../book/src/pareto.md")]
    mod pareto {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    mod evolution {}
    #[doc = include_str!("../../../book/src/baseline.md")]
    mod baseline {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/estimators.md")]
    mod estimators {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
