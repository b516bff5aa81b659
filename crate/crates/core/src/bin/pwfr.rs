use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use particle_wfr::cli::{execute_run, exit_code, front_csv, parse_config, plot_run_dir};
use particle_wfr::{BaselineKind, Benchmark, Error};

#[derive(Parser)]
#[command(name = "pwfr", version, about = "Particle Wasserstein-Fisher-Rao multi-objective optimizer")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the optimizer (or a baseline) from a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// weighted_sum, langevin_only or mgda_only
        #[arg(long)]
        baseline: Option<BaselineKind>,
        #[arg(long)]
        no_plot: bool,
    },
    /// Redraw front.svg from a run directory.
    Plot {
        run_dir: PathBuf,
        #[arg(long)]
        epoch: Option<usize>,
    },
    /// Write a benchmark's reference front as CSV.
    Front {
        problem: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(args: Args) -> Result<(), Error> {
    match args.command {
        Command::Run { config, seed, out, baseline, no_plot } => {
            let text = fs::read_to_string(&config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = parse_config(&text)?;
            if let Some(seed) = seed {
                cfg.schedule.seed = seed;
            }
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            if baseline.is_some() {
                cfg.baseline = baseline;
            }
            if no_plot {
                cfg.plot = false;
            }
            let outcome = execute_run(&cfg)?;
            if let Some(err) = outcome.failure {
                return Err(err);
            }
            println!("wrote {}", outcome.output_dir.display());
        }
        Command::Plot { run_dir, epoch } => {
            let path = plot_run_dir(&run_dir, epoch)?;
            println!("wrote {}", path.display());
        }
        Command::Front { problem, n, out } => {
            let front = Benchmark::from_name(&problem)?.problem(30).reference_front(n)?;
            fs::write(&out, front_csv(&front))?;
            println!("wrote {} points to {}", front.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
