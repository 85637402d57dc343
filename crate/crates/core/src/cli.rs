//! Command-line front end: `arm run | sweep | preset | fit`.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad config, unknown
//! preset, malformed CSV), 3 for I/O failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::config::SimConfig;
use crate::error::{Error, Result};
use crate::fit::fit_logistic;
use crate::manifest::{ConfigEcho, RunManifest};
use crate::output;
use crate::presets;
use crate::sweep::{run_sweep, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const THREADS_ENV: &str = "ARM_THREADS";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "arm", version, about = "Attraction-repulsion model simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write its time series and snapshots.
    Run {
        config: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_steps: Option<u64>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        responsiveness: Option<f64>,
        #[arg(long)]
        n_actors: Option<usize>,
        #[arg(long)]
        record_every: Option<u64>,
    },
    /// Run a parameter sweep described by a sweep TOML file.
    Sweep {
        spec: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
    },
    /// Run a named experiment preset (fig1 ... figS7).
    Preset {
        figure: String,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        #[arg(long, env = THREADS_ENV)]
        threads: Option<usize>,
        /// Iterations per sweep cell (default 20).
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Multiply every step count by this factor.
        #[arg(long)]
        scale_steps: Option<f64>,
    },
    /// Fit a logistic curve to a one-axis sweep or aggregate CSV.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value = "axis1")]
        axis: String,
        /// Axis label written to the output (defaults to the column name).
        #[arg(long)]
        label: Option<String>,
        /// Write the fit CSV here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_IO
    }
}

pub fn execute(command: Command) -> Result<()> {
    let started = Instant::now();
    match command {
        Command::Run {
            config,
            out,
            seed,
            max_steps,
            tolerance,
            responsiveness,
            n_actors,
            record_every,
        } => {
            let mut cfg = SimConfig::load(&config)?;
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = max_steps {
                cfg.max_steps = v;
            }
            if let Some(v) = tolerance {
                cfg.tolerance = v;
            }
            if let Some(v) = responsiveness {
                cfg.responsiveness = v;
            }
            if let Some(v) = n_actors {
                cfg.n_actors = v;
            }
            if let Some(v) = record_every {
                cfg.record_every = v;
            }
            cfg.validate()?;
            let name = stem(&config);
            let mut manifest = RunManifest::new("run");
            presets::run_single(&name, &cfg, &out, &mut manifest)?;
            finish(manifest, &out, started)
        }
        Command::Sweep { spec, out, threads } => {
            let sweep = SweepSpec::load(&spec)?;
            let name = stem(&spec);
            let result = run_sweep(&sweep, threads)?;
            let mut manifest = RunManifest::new("sweep");
            let sweep_path = out.join(format!("{name}_sweep.csv"));
            let agg_path = out.join(format!("{name}_aggregate.csv"));
            output::save_sweep(&sweep_path, &result)?;
            output::save_aggregate(&agg_path, &result)?;
            manifest.configs.push(ConfigEcho::new(format!("{name}_base"), &sweep.base));
            manifest.artifacts.extend([sweep_path, agg_path]);
            finish(manifest, &out, started)
        }
        Command::Preset {
            figure,
            out,
            threads,
            iterations,
            seed,
            scale_steps,
        } => {
            let mut plan = presets::plan(&figure, seed)?;
            if let Some(n) = iterations {
                if n == 0 {
                    return Err(Error::config("iterations", "must be at least 1"));
                }
                plan = plan.with_iterations(n);
            }
            if let Some(f) = scale_steps {
                if !(f > 0.0 && f.is_finite()) {
                    return Err(Error::config("scale_steps", "must be a positive number"));
                }
                plan = plan.scale_steps(f);
            }
            let mut manifest = RunManifest::new(format!("preset {figure}"));
            plan.execute(&out, threads, &mut manifest)?;
            finish(manifest, &out, started)
        }
        Command::Fit {
            csv,
            axis,
            label,
            out,
        } => {
            let (xs, ys) = output::read_fit_points(&csv, &axis)?;
            let fit = fit_logistic(&xs, &ys)?;
            let rows = [(label.unwrap_or(axis), fit)];
            match out {
                Some(path) => output::save_fits(&path, &rows),
                None => output::write_fits(std::io::stdout().lock(), &rows),
            }
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".to_string())
}

fn finish(mut manifest: RunManifest, out: &Path, started: Instant) -> Result<()> {
    if let Some(p) = manifest.missing_artifacts().first() {
        return Err(Error::io(
            *p,
            std::io::Error::new(std::io::ErrorKind::NotFound, "artifact missing or empty"),
        ));
    }
    manifest.set_duration(started.elapsed());
    manifest.save(&out.join(MANIFEST_FILE))
}
