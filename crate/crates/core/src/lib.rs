//! Multi-objective optimization with interacting particles.
//!
//! A population of decision vectors follows a Wasserstein-Fisher-Rao gradient
//! flow of an energy that rewards Pareto stationarity, penalizes dominated
//! particles, spreads the population along the front and keeps some entropy.
//! Transport happens through overdamped Langevin moves; mass moves through
//! birth-death resampling.
//!
//! ```
//! use particle_wfr::{run_particle_wfr, Benchmark, PotentialSettings, Schedule, StageConfig};
//!
//! let problem = Benchmark::Zdt1.problem(5);
//! let stage = StageConfig::new(20, 0.01, PotentialSettings { alpha1: 1.0, ..Default::default() });
//! let record = run_particle_wfr(&problem, &Schedule::new(8, 7, vec![stage])).unwrap();
//! assert_eq!(record.epochs.len(), 20);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod minnorm;
pub mod population;
pub mod potentials;
pub mod problem;
pub mod rng;

pub use dynamics::{
    birth_death_rates, birth_death_step, langevin_step, run_baseline, run_baseline_with, run_particle_wfr,
    run_particle_wfr_with, BaselineKind, BirthDeathOutcome, RunOptions, RunRecord, Schedule, Snapshot, StageConfig,
    TrackedFront,
};
pub use error::{Error, Result};
pub use metrics::{
    dominance_margin, front_distance, hypervolume_exact, hypervolume_mc, nondominated_filter, MetricsConfig,
};
pub use minnorm::{min_norm_point, MinNormSolution};
pub use population::{Population, RefreshOptions};
pub use potentials::{PotentialConfig, PotentialSettings, RepulsiveKind};
pub use problem::{Benchmark, Jacobian, Objectives, Problem, ReferenceFront};

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/problems.md")]
    mod problems {}
    #[doc = include_str!("../../../book/src/minnorm.md")]
    mod minnorm {}
    #[doc = include_str!("../../../book/src/energy.md")]
    mod energy {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
