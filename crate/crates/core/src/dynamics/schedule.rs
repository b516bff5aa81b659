use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::RefreshOptions;
use crate::potentials::PotentialSettings;

fn enabled() -> bool {
    true
}

/// One stage of a run: fixed potential weights, a step size and a length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub epochs: usize,
    pub tau: f64,
    #[serde(default = "enabled")]
    pub langevin_enabled: bool,
    #[serde(default = "enabled")]
    pub birth_death_enabled: bool,
    #[serde(default)]
    pub potential: PotentialSettings,
}

impl StageConfig {
    pub fn new(epochs: usize, tau: f64, potential: PotentialSettings) -> Self {
        Self { epochs, tau, langevin_enabled: true, birth_death_enabled: true, potential }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Config(format!("tau must be positive, got {}", self.tau)));
        }
        self.potential.validate()
    }
}

/// A full run plan.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub n_particles: usize,
    pub seed: u64,
    /// Snapshot period in epochs; 0 keeps only the first and last populations.
    pub snapshot_every: usize,
    pub refresh: RefreshOptions,
    pub stages: Vec<StageConfig>,
}

impl Schedule {
    pub fn new(n_particles: usize, seed: u64, stages: Vec<StageConfig>) -> Self {
        Self { n_particles, seed, snapshot_every: 100, refresh: RefreshOptions::default(), stages }
    }

    pub fn total_epochs(&self) -> usize {
        self.stages.iter().map(|s| s.epochs).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::Config("a schedule needs at least one stage".into()));
        }
        if self.n_particles == 0 {
            return Err(Error::Config("n_particles must be at least 1".into()));
        }
        for (i, stage) in self.stages.iter().enumerate() {
            stage.validate().map_err(|e| Error::Config(format!("stage {}: {e}", i + 1)))?;
            let p = &stage.potential;
            if self.n_particles < 2 && (p.alpha2 != 0.0 || p.beta != 0.0) {
                return Err(Error::DegeneratePopulation(self.n_particles));
            }
        }
        if let Some(tol) = self.refresh.active_bound_tol {
            if !(tol >= 0.0) {
                return Err(Error::Config(format!("active_bound_tol must be nonnegative, got {tol}")));
            }
        }
        Ok(())
    }
}
