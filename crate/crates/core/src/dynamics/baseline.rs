use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::population::Population;
use crate::potentials::{canonical_sum, PotentialSettings};
use crate::problem::Problem;
use crate::rng::{Channel, Streams};

use super::run::{run_particle_wfr_with, Driver, RunFailure, RunOptions, RunRecord};
use super::schedule::Schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    /// Each particle descends its own fixed random scalarization.
    WeightedSum,
    /// Particle-WFR with birth-death switched off.
    LangevinOnly,
    /// Deterministic `2g†` descent, no noise and no pairwise terms.
    MgdaOnly,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 3] = [BaselineKind::WeightedSum, BaselineKind::LangevinOnly, BaselineKind::MgdaOnly];

    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::WeightedSum => "weighted_sum",
            BaselineKind::LangevinOnly => "langevin_only",
            BaselineKind::MgdaOnly => "mgda_only",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::Config(format!("unknown baseline `{s}` (expected weighted_sum, langevin_only or mgda_only)"))
        })
    }
}

pub fn run_baseline(
    problem: &Problem,
    kind: BaselineKind,
    schedule: &Schedule,
) -> std::result::Result<RunRecord, RunFailure> {
    run_baseline_with(problem, kind, schedule, &RunOptions::default())
}

pub fn run_baseline_with(
    problem: &Problem,
    kind: BaselineKind,
    schedule: &Schedule,
    opts: &RunOptions,
) -> std::result::Result<RunRecord, RunFailure> {
    match kind {
        BaselineKind::WeightedSum => weighted_sum(problem, schedule, opts),
        BaselineKind::LangevinOnly => {
            let mut s = schedule.clone();
            for stage in &mut s.stages {
                stage.birth_death_enabled = false;
            }
            run_particle_wfr_with(problem, &s, opts)
        }
        BaselineKind::MgdaOnly => {
            let mut s = schedule.clone();
            for stage in &mut s.stages {
                stage.birth_death_enabled = false;
                stage.langevin_enabled = true;
                stage.potential = PotentialSettings { alpha1: 1.0, ..PotentialSettings::default() };
            }
            run_particle_wfr_with(problem, &s, opts)
        }
    }
}

/// Uniform draw from the probability simplex.
fn simplex_weights(streams: &Streams, particle: usize, m: usize) -> Vec<f64> {
    let mut rng = streams.substream(0, particle as u64, Channel::Weights);
    let raw: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Projected descent on `Σᵢ wᵢ fᵢ` with step `τ/2`, the same convention as
/// the Langevin update. The energy column reports the mean scalarized value.
fn weighted_sum(
    problem: &Problem,
    schedule: &Schedule,
    opts: &RunOptions,
) -> std::result::Result<RunRecord, RunFailure> {
    let mut driver = Driver::start(problem, schedule, opts)?;
    let weights: Vec<Vec<f64>> =
        (0..schedule.n_particles).map(|k| simplex_weights(&driver.streams, k, problem.num_objectives())).collect();
    let scalarized = |pop: &Population| {
        let values: Vec<f64> =
            (0..pop.len()).map(|k| pop.objective(k).iter().zip(&weights[k]).map(|(f, w)| f * w).sum()).collect();
        canonical_sum(values) / pop.len() as f64
    };
    driver.record.initial_energy = scalarized(&driver.pop);
    for stage in &schedule.stages {
        driver.run_stage(stage, |d, stage, _cfg, _epoch| {
            let positions: Vec<Vec<f64>> = (0..d.pop.len())
                .map(|k| {
                    let grad = d.pop.jacobian(k).transpose_mul(&weights[k]);
                    let mut x: Vec<f64> =
                        d.pop.position(k).iter().zip(&grad).map(|(xi, gi)| xi - 0.5 * stage.tau * gi).collect();
                    d.problem.project_in_place(&mut x);
                    x
                })
                .collect();
            d.pop = Population::new(d.problem, positions, &d.schedule.refresh)?;
            Ok((scalarized(&d.pop), 0, 0))
        })?;
    }
    Ok(driver.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::testing::bowls;
    use crate::dynamics::StageConfig;
    use crate::problem::Benchmark;

    #[test]
    fn names_round_trip() {
        for kind in BaselineKind::ALL {
            assert_eq!(kind.name().parse::<BaselineKind>().unwrap(), kind);
        }
        assert!("simulated_annealing".parse::<BaselineKind>().is_err());
    }

    #[test]
    fn weights_lie_on_the_simplex() {
        let streams = Streams::new(3);
        for k in 0..50 {
            let w = simplex_weights(&streams, k, 3);
            assert!(w.iter().all(|&v| v >= 0.0));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_ne!(simplex_weights(&streams, 0, 2), simplex_weights(&streams, 1, 2));
    }

    #[test]
    fn weighted_sum_finds_a_shared_minimizer() {
        let p = bowls(vec![0.3, 0.7], vec![1.0, 2.0], 0.0, 1.0);
        let s = Schedule::new(10, 5, vec![StageConfig::new(400, 0.1, PotentialSettings::default())]);
        let rec = run_baseline(&p, BaselineKind::WeightedSum, &s).unwrap();
        for x in &rec.final_snapshot().unwrap().x {
            assert!((x[0] - 0.3).abs() < 1e-6 && (x[1] - 0.7).abs() < 1e-6, "{x:?}");
        }
        assert!(rec.epochs.iter().all(|e| e.births == 0 && e.deaths == 0));
        assert!(rec.energies().last().unwrap() < &1e-10);
    }

    #[test]
    fn mgda_only_stays_put_on_the_front() {
        let p = Benchmark::Zdt1.problem(4);
        let xs: Vec<Vec<f64>> = (0..5).map(|i| vec![0.1 + 0.2 * i as f64, 0.0, 0.0, 0.0]).collect();
        let noisy = PotentialSettings { alpha1: 3.0, beta: 1.0, gamma: 0.1, ..Default::default() };
        let s = Schedule::new(5, 2, vec![StageConfig::new(30, 0.05, noisy)]);
        let opts = RunOptions { initial_positions: Some(xs.clone()), ..Default::default() };
        let rec = run_baseline_with(&p, BaselineKind::MgdaOnly, &s, &opts).unwrap();
        assert_eq!(rec.final_snapshot().unwrap().x, xs);
    }

    #[test]
    fn langevin_only_never_resamples() {
        let p = Benchmark::Zdt3.problem(5);
        let st =
            PotentialSettings { alpha1: 1.0, alpha2: 100.0, beta: 1.0, dominance_relax_c: 0.1, ..Default::default() };
        let s = Schedule::new(10, 1, vec![StageConfig::new(40, 0.05, st)]);
        let rec = run_baseline(&p, BaselineKind::LangevinOnly, &s).unwrap();
        assert!(rec.epochs.iter().all(|e| e.births == 0 && e.deaths == 0));
        let full = crate::dynamics::run_particle_wfr(&p, &s).unwrap();
        assert!(full.epochs.iter().any(|e| e.births + e.deaths > 0));
    }
}
