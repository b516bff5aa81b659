//! Batch runs: configuration files, run directories and plots.
//!
//! A run directory holds
//!
//! * `metrics.csv`: one row per epoch,
//! * `snapshots.jsonl`: one population snapshot per line,
//! * `config.resolved`: the configuration with every default filled in,
//! * `run.log`: a short human-readable account, including any error,
//! * `front.svg`: the final population against the reference front.

mod config;
mod svg;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::dynamics::{
    run_baseline_with, run_particle_wfr_with, RunFailure, RunOptions, RunRecord, Snapshot, TrackedFront,
};
use crate::error::{Error, Result};
use crate::problem::ReferenceFront;

pub use config::{parse_config, preset, RunConfig};
pub use svg::{render_scatter, PlotFrame};

/// First line of every `metrics.csv`.
pub const METRICS_VERSION_LINE: &str = "# particle-wfr metrics v1";
pub const METRICS_HEADER: &str = "epoch,energy,hv,gd,igd,births,deaths,wall_ms";

/// Process exit status for an error: 2 for configuration problems, 3 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::UnsupportedProblem(_) => 2,
        _ => 3,
    }
}

/// Rounds to 9 significant digits and prints without exponent noise.
pub fn format_sig9(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn metrics_csv(record: &RunRecord) -> String {
    let opt = |v: Option<f64>| v.map(format_sig9).unwrap_or_default();
    let mut out = format!("{METRICS_VERSION_LINE}\n{METRICS_HEADER}\n");
    for e in &record.epochs {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            e.epoch,
            format_sig9(e.energy),
            opt(e.hv),
            opt(e.gd),
            opt(e.igd),
            e.births,
            e.deaths,
            format_sig9(e.wall_ms)
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn snapshots_jsonl(snapshots: &[Snapshot]) -> String {
    let mut out = String::new();
    for s in snapshots {
        out.push_str(&serde_json::to_string(s).expect("snapshots serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_snapshots(text: &str) -> Result<Vec<Snapshot>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Config(format!("snapshots line {}: {e}", i + 1))))
        .collect()
}

/// Writes `contents` next to `path` and renames it into place.
fn replace_file(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("partial");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// What a finished (or aborted) run left behind.
#[derive(Debug)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub record: RunRecord,
    pub failure: Option<Error>,
}

/// Runs `cfg` and writes its artifacts. Configuration errors return `Err`
/// before anything runs; a run that aborts still writes what it had and
/// reports the cause in `failure`.
pub fn execute_run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let problem = cfg.problem()?;
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    replace_file(&dir.join("config.resolved"), &cfg.to_toml())?;
    let mut log = format!(
        "problem {} (d = {}), {} particles, {} epochs, seed {}\n",
        cfg.problem_name,
        cfg.dim,
        cfg.schedule.n_particles,
        cfg.schedule.total_epochs(),
        cfg.schedule.seed
    );
    if let Some(kind) = cfg.baseline {
        writeln!(log, "baseline {kind}").expect("writing to a String cannot fail");
    }
    let front = problem.reference_front(cfg.metrics.front_points)?;
    let opts = RunOptions {
        tracked: Some(TrackedFront { metrics: cfg.metrics.clone(), front: front.clone() }),
        record_wall_time: cfg.record_wall_time,
        ..RunOptions::default()
    };
    let result = match cfg.baseline {
        Some(kind) => run_baseline_with(&problem, kind, &cfg.schedule, &opts),
        None => run_particle_wfr_with(&problem, &cfg.schedule, &opts),
    };
    let (record, failure) = match result {
        Ok(record) => (record, None),
        Err(RunFailure { epoch, error, partial }) => {
            writeln!(log, "error at epoch {epoch}: {error}").expect("writing to a String cannot fail");
            (*partial, Some(Error::RunAborted { epoch, source: Box::new(error) }))
        }
    };
    replace_file(&dir.join("metrics.csv"), &metrics_csv(&record))?;
    replace_file(&dir.join("snapshots.jsonl"), &snapshots_jsonl(&record.snapshots))?;
    for d in &record.diagnostics {
        writeln!(log, "epoch {} particle {} held: {}", d.epoch, d.particle, d.message)
            .expect("writing to a String cannot fail");
    }
    if let Some(last) = record.epochs.last() {
        writeln!(
            log,
            "final epoch {}: energy {}, hv {}, igd {}",
            last.epoch,
            format_sig9(last.energy),
            last.hv.map(format_sig9).unwrap_or_default(),
            last.igd.map(format_sig9).unwrap_or_default()
        )
        .expect("writing to a String cannot fail");
    }
    if cfg.plot {
        if let Some(snap) = record.final_snapshot() {
            match render_scatter(&snap.f, &front) {
                Ok(svg) => replace_file(&dir.join("front.svg"), &svg)?,
                Err(e) => writeln!(log, "no plot: {e}").expect("writing to a String cannot fail"),
            }
        }
    }
    append_log(&dir, &log)?;
    Ok(RunOutcome { output_dir: dir, record, failure })
}

fn append_log(dir: &Path, text: &str) -> Result<()> {
    let mut file = fs::OpenOptions::new().create(true).append(true).open(dir.join("run.log"))?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

/// Re-renders a plot from a run directory. Picks the last snapshot unless
/// `epoch` is given. Returns the path written.
pub fn plot_run_dir(dir: &Path, epoch: Option<usize>) -> Result<PathBuf> {
    let cfg = parse_config(&fs::read_to_string(dir.join("config.resolved"))?)?;
    let snapshots = parse_snapshots(&fs::read_to_string(dir.join("snapshots.jsonl"))?)?;
    let snap = match epoch {
        Some(e) => snapshots
            .iter()
            .find(|s| s.epoch == e)
            .ok_or_else(|| Error::Config(format!("no snapshot for epoch {e}")))?,
        None => snapshots.last().ok_or_else(|| Error::Config("snapshots.jsonl is empty".into()))?,
    };
    let front = cfg.problem()?.reference_front(cfg.metrics.front_points)?;
    let svg = render_scatter(&snap.f, &front)?;
    let path = match epoch {
        Some(e) => dir.join(format!("front-{e}.svg")),
        None => dir.join("front.svg"),
    };
    replace_file(&path, &svg)?;
    Ok(path)
}

/// Reference front as CSV: `f1,…,fm,segment` with a header line.
pub fn front_csv(front: &ReferenceFront) -> String {
    let m = front.points.first().map_or(0, Vec::len);
    let mut out: String = (1..=m).map(|i| format!("f{i},")).collect();
    out.push_str("segment\n");
    for (p, s) in front.points.iter().zip(&front.segment_labels) {
        for v in p {
            write!(out, "{},", format_sig9(*v)).expect("writing to a String cannot fail");
        }
        writeln!(out, "{s}").expect("writing to a String cannot fail");
    }
    out
}
