use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dynamics::{BaselineKind, Schedule, StageConfig};
use crate::error::{Error, Result};
use crate::metrics::{DistanceNorm, MetricsConfig};
use crate::population::RefreshOptions;
use crate::problem::{Benchmark, Problem};

const PRESET_ZDT1: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/zdt1.toml"));
const PRESET_ZDT2: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/zdt2.toml"));
const PRESET_ZDT3: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/zdt3.toml"));
const PRESET_DTLZ7: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/dtlz7.toml"));

/// The config file as written; every key is optional at this level.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    problem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_particles: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    snapshot_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    baseline: Option<BaselineKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    plot: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    record_wall_time: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound_masking: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    active_bound_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<RawMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stages: Option<Vec<StageConfig>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetrics {
    #[serde(skip_serializing_if = "Option::is_none")]
    hv_reference: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distance_norm: Option<DistanceNorm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    front_points: Option<usize>,
}

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub problem_name: String,
    pub dim: usize,
    pub schedule: Schedule,
    pub metrics: MetricsConfig,
    pub output_dir: PathBuf,
    pub baseline: Option<BaselineKind>,
    pub plot: bool,
    /// Fill the `wall_ms` column. Off by default: timings differ between
    /// otherwise identical runs.
    pub record_wall_time: bool,
}

fn parse_raw(text: &str) -> Result<RawConfig> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

fn preset_text(b: Benchmark) -> &'static str {
    match b {
        Benchmark::Zdt1 => PRESET_ZDT1,
        Benchmark::Zdt2 => PRESET_ZDT2,
        Benchmark::Zdt3 => PRESET_ZDT3,
        Benchmark::Dtlz7 => PRESET_DTLZ7,
    }
}

/// The shipped default configuration for a benchmark.
pub fn preset(b: Benchmark) -> RunConfig {
    parse_config(preset_text(b)).expect("shipped presets are valid")
}

/// Parses a config document. `problem` and `seed` are required; any other
/// key left out is taken from the benchmark's shipped preset.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw = parse_raw(text)?;
    let problem_name = raw.problem.clone().ok_or_else(|| Error::Config("missing required key `problem`".into()))?;
    let seed = raw.seed.ok_or_else(|| Error::Config("missing required key `seed`".into()))?;
    let bench = Benchmark::from_name(&problem_name)?;
    let base = parse_raw(preset_text(bench)).expect("shipped presets parse");
    let pick = |user: Option<usize>, preset: Option<usize>, fallback: usize| user.or(preset).unwrap_or(fallback);

    let mut metrics = MetricsConfig::for_benchmark(bench);
    for m in [base.metrics.as_ref(), raw.metrics.as_ref()].into_iter().flatten() {
        if let Some(v) = &m.hv_reference {
            metrics.hv_reference = v.clone();
        }
        if let Some(v) = m.mc_samples {
            metrics.mc_samples = v;
        }
        if let Some(v) = m.distance_norm {
            metrics.distance_norm = v;
        }
        if let Some(v) = m.tolerance {
            metrics.tolerance = v;
        }
        if let Some(v) = m.front_points {
            metrics.front_points = v;
        }
    }

    let mut refresh = RefreshOptions::default();
    if let Some(tol) = raw.active_bound_tol.or(base.active_bound_tol) {
        refresh.active_bound_tol = Some(tol);
    }
    if !raw.bound_masking.or(base.bound_masking).unwrap_or(true) {
        refresh.active_bound_tol = None;
    }

    let schedule = Schedule {
        n_particles: pick(raw.n_particles, base.n_particles, 50),
        seed,
        snapshot_every: pick(raw.snapshot_every, base.snapshot_every, 100),
        refresh,
        stages: raw.stages.clone().or(base.stages).unwrap_or_default(),
    };
    let cfg = RunConfig {
        dim: pick(raw.dim, base.dim, 30),
        output_dir: raw.output_dir.clone().unwrap_or_else(|| PathBuf::from(format!("runs/{}-{seed}", bench.name()))),
        baseline: raw.baseline,
        plot: raw.plot.unwrap_or(true),
        record_wall_time: raw.record_wall_time.unwrap_or(false),
        problem_name: bench.name().to_string(),
        schedule,
        metrics,
    };
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn benchmark(&self) -> Result<Benchmark> {
        Benchmark::from_name(&self.problem_name)
    }

    pub fn problem(&self) -> Result<Problem> {
        Ok(self.benchmark()?.problem(self.dim))
    }

    pub fn validate(&self) -> Result<()> {
        let bench = self.benchmark()?;
        let min_dim = bench.num_objectives();
        if self.dim < min_dim {
            return Err(Error::Config(format!("{} needs dim >= {min_dim}, got {}", bench.name(), self.dim)));
        }
        self.schedule.validate()?;
        let m = bench.num_objectives();
        if self.metrics.hv_reference.len() != m {
            return Err(Error::Config(format!(
                "metrics.hv_reference has {} entries, {} has {m} objectives",
                self.metrics.hv_reference.len(),
                bench.name()
            )));
        }
        if self.metrics.mc_samples < 1000 {
            return Err(Error::Config("metrics.mc_samples must be at least 1000".into()));
        }
        if !(self.metrics.tolerance > 0.0) {
            return Err(Error::Config("metrics.tolerance must be positive".into()));
        }
        if self.metrics.front_points < 2 {
            return Err(Error::Config("metrics.front_points must be at least 2".into()));
        }
        Ok(())
    }

    /// Every setting written out explicitly; parses back to an equal config.
    pub fn to_toml(&self) -> String {
        let raw = RawConfig {
            problem: Some(self.problem_name.clone()),
            seed: Some(self.schedule.seed),
            dim: Some(self.dim),
            n_particles: Some(self.schedule.n_particles),
            snapshot_every: Some(self.schedule.snapshot_every),
            output_dir: Some(self.output_dir.clone()),
            baseline: self.baseline,
            plot: Some(self.plot),
            record_wall_time: Some(self.record_wall_time),
            bound_masking: Some(self.schedule.refresh.active_bound_tol.is_some()),
            active_bound_tol: self.schedule.refresh.active_bound_tol,
            metrics: Some(RawMetrics {
                hv_reference: Some(self.metrics.hv_reference.clone()),
                mc_samples: Some(self.metrics.mc_samples),
                distance_norm: Some(self.metrics.distance_norm),
                tolerance: Some(self.metrics.tolerance),
                front_points: Some(self.metrics.front_points),
            }),
            stages: Some(self.schedule.stages.clone()),
        };
        toml::to_string(&raw).expect("configs serialize")
    }
}
