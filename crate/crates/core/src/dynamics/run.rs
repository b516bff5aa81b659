use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{front_distance, hypervolume_exact, hypervolume_mc, MetricsConfig};
use crate::population::Population;
use crate::potentials::{silverman_bandwidth, FieldTerms, PotentialConfig};
use crate::problem::{Problem, ReferenceFront};
use crate::rng::{Channel, Streams};

use super::schedule::{Schedule, StageConfig};
use super::step::{birth_death_rates, birth_death_step, langevin_step};

/// A particle whose update was skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub epoch: usize,
    pub particle: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub epoch: usize,
    pub x: Vec<Vec<f64>>,
    pub f: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn of(epoch: usize, pop: &Population) -> Self {
        Self { epoch, x: pop.positions().to_vec(), f: pop.objectives().to_vec() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub energy: f64,
    pub hv: Option<f64>,
    pub gd: Option<f64>,
    pub igd: Option<f64>,
    pub births: usize,
    pub deaths: usize,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunRecord {
    /// Energy of the initial population under the first stage's weights.
    pub initial_energy: f64,
    pub epochs: Vec<EpochRecord>,
    /// Periodic snapshots; the first and the last population are always present.
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Vec<Diagnostic>,
}

impl RunRecord {
    pub fn final_snapshot(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.epochs.iter().map(|e| e.energy).collect()
    }
}

/// A reference front for the per-epoch quality columns.
#[derive(Clone, Debug)]
pub struct TrackedFront {
    pub metrics: MetricsConfig,
    pub front: ReferenceFront,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Replaces the seeded uniform initialization.
    pub initial_positions: Option<Vec<Vec<f64>>>,
    pub tracked: Option<TrackedFront>,
    /// Fill `wall_ms`; off by default so records stay bit-reproducible.
    pub record_wall_time: bool,
}

/// A run that stopped early. `partial` ends with a snapshot of the last
/// consistent population.
#[derive(Debug)]
pub struct RunFailure {
    pub epoch: usize,
    pub error: Error,
    pub partial: Box<RunRecord>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run aborted at epoch {}: {}", self.epoch, self.error)
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<RunFailure> for Error {
    fn from(f: RunFailure) -> Self {
        Error::RunAborted { epoch: f.epoch, source: Box::new(f.error) }
    }
}

pub fn run_particle_wfr(problem: &Problem, schedule: &Schedule) -> std::result::Result<RunRecord, RunFailure> {
    run_particle_wfr_with(problem, schedule, &RunOptions::default())
}

pub fn run_particle_wfr_with(
    problem: &Problem,
    schedule: &Schedule,
    opts: &RunOptions,
) -> std::result::Result<RunRecord, RunFailure> {
    let mut driver = Driver::start(problem, schedule, opts)?;
    for stage in &schedule.stages {
        driver.run_stage(stage, |d, stage, cfg, epoch| {
            let mut births = 0;
            let mut deaths = 0;
            if stage.langevin_enabled {
                let out =
                    langevin_step(d.problem, &d.pop, cfg, stage.tau, &d.streams, epoch as u64, &d.schedule.refresh)?;
                d.pop = out.population;
                d.record.diagnostics.extend(out.diagnostics);
            }
            if stage.birth_death_enabled {
                let bd_cfg = with_fresh_bandwidth(&d.pop, stage, cfg);
                let rates = birth_death_rates(&d.pop, &bd_cfg)?;
                let outcome = birth_death_step(&mut d.pop, &rates, stage.tau, &d.streams, epoch as u64);
                births = outcome.duplicated.len();
                deaths = outcome.removed.len();
            }
            let energy = FieldTerms::compute(&d.pop, &with_fresh_bandwidth(&d.pop, stage, cfg))?.energy(cfg);
            Ok((energy, births, deaths))
        })?;
    }
    Ok(driver.finish())
}

/// Recomputes an automatic KDE bandwidth on the current positions.
fn with_fresh_bandwidth(pop: &Population, stage: &StageConfig, cfg: &PotentialConfig) -> PotentialConfig {
    let mut cfg = cfg.clone();
    if stage.potential.kde_bandwidth.is_none() && cfg.gamma != 0.0 {
        cfg.kde_bandwidth = silverman_bandwidth(pop.positions());
    }
    cfg
}

/// Epoch bookkeeping shared by the main method and the baselines.
pub(super) struct Driver<'a> {
    pub problem: &'a Problem,
    pub schedule: &'a Schedule,
    pub opts: &'a RunOptions,
    pub streams: Streams,
    pub pop: Population,
    pub record: RunRecord,
    pub epoch: usize,
}

impl<'a> Driver<'a> {
    pub fn start(
        problem: &'a Problem,
        schedule: &'a Schedule,
        opts: &'a RunOptions,
    ) -> std::result::Result<Self, RunFailure> {
        let fail = |error: Error| RunFailure { epoch: 0, error, partial: Box::default() };
        schedule.validate().map_err(fail)?;
        let streams = Streams::new(schedule.seed);
        let positions = match &opts.initial_positions {
            Some(xs) => {
                if xs.len() != schedule.n_particles {
                    return Err(fail(Error::Dimension { expected: schedule.n_particles, got: xs.len() }));
                }
                for x in xs {
                    if x.len() != problem.dim() {
                        return Err(fail(Error::Dimension { expected: problem.dim(), got: x.len() }));
                    }
                }
                xs.iter().map(|x| problem.project_feasible(x)).collect()
            }
            None => problem.sample_feasible(schedule.n_particles, &mut streams.substream(0, 0, Channel::Init)),
        };
        let pop = Population::new(problem, positions, &schedule.refresh).map_err(fail)?;
        let first = &schedule.stages[0];
        let cfg = first.potential.resolve(&pop);
        let initial_energy = FieldTerms::compute(&pop, &cfg).map_err(fail)?.energy(&cfg);
        let record = RunRecord { initial_energy, snapshots: vec![Snapshot::of(0, &pop)], ..Default::default() };
        Ok(Self { problem, schedule, opts, streams, pop, record, epoch: 0 })
    }

    /// Runs every epoch of `stage`. `body` performs the moves and returns
    /// `(energy, births, deaths)`.
    pub fn run_stage<F>(&mut self, stage: &StageConfig, mut body: F) -> std::result::Result<(), RunFailure>
    where
        F: FnMut(&mut Self, &StageConfig, &PotentialConfig, usize) -> Result<(f64, usize, usize)>,
    {
        let cfg = stage.potential.resolve(&self.pop);
        for _ in 0..stage.epochs {
            self.epoch += 1;
            let started = Instant::now();
            let epoch = self.epoch;
            let (energy, births, deaths) = body(self, stage, &cfg, epoch).map_err(|e| self.abort(e))?;
            let (hv, gd, igd) = self.quality().map_err(|e| self.abort(e))?;
            let wall_ms = if self.opts.record_wall_time { started.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            self.record.epochs.push(EpochRecord { epoch, energy, hv, gd, igd, births, deaths, wall_ms });
            if self.schedule.snapshot_every > 0 && epoch.is_multiple_of(self.schedule.snapshot_every) {
                self.record.snapshots.push(Snapshot::of(epoch, &self.pop));
            }
        }
        Ok(())
    }

    fn quality(&self) -> Result<(Option<f64>, Option<f64>, Option<f64>)> {
        let Some(tracked) = &self.opts.tracked else {
            return Ok((None, None, None));
        };
        let f = self.pop.objectives();
        let reference = &tracked.metrics.hv_reference;
        let hv = if reference.len() <= 3 {
            hypervolume_exact(f, reference)?
        } else {
            let mut rng = self.streams.substream(self.epoch as u64, 0, Channel::Metrics);
            hypervolume_mc(f, reference, &tracked.metrics, &mut rng).0
        };
        let dist = front_distance(f, &tracked.front, tracked.metrics.tolerance);
        Ok((Some(hv), Some(dist.gd), Some(dist.igd)))
    }

    fn abort(&mut self, error: Error) -> RunFailure {
        let mut partial = std::mem::take(&mut self.record);
        if partial.snapshots.last().map(|s| s.epoch) != Some(self.epoch) {
            partial.snapshots.push(Snapshot::of(self.epoch, &self.pop));
        }
        RunFailure { epoch: self.epoch, error, partial: Box::new(partial) }
    }

    pub fn finish(mut self) -> RunRecord {
        if self.record.snapshots.last().map(|s| s.epoch) != Some(self.epoch) {
            self.record.snapshots.push(Snapshot::of(self.epoch, &self.pop));
        }
        self.record
    }
}
