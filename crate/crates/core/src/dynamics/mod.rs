//! The particle driver: Langevin moves alternating with birth-death
//! resampling under a staged schedule, plus the ablation baselines.

mod baseline;
mod run;
mod schedule;
mod step;
#[cfg(test)]
mod testing;

pub use baseline::{run_baseline, run_baseline_with, BaselineKind};
pub use run::{
    run_particle_wfr, run_particle_wfr_with, Diagnostic, EpochRecord, RunFailure, RunOptions, RunRecord, Snapshot,
    TrackedFront,
};
pub use schedule::{Schedule, StageConfig};
pub use step::{birth_death_rates, birth_death_step, langevin_step, BirthDeathOutcome, LangevinOutcome};
