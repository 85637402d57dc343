//! Named experiment presets (`fig1` ... `figS7`).
//!
//! Each preset is a [`PresetPlan`]: single runs (time series and snapshots)
//! and sweeps (optionally followed by logistic fits) with fixed horizons,
//! grids and iteration counts. Single runs in a preset share one seed, so
//! they start from the same population.

use std::path::{Path, PathBuf};

use crate::config::{Initializer, Rule, ShockConfig, SimConfig};
use crate::error::{Error, Result};
use crate::fit::{fit_logistic, LogisticFit};
use crate::init::HistogramSpec;
use crate::manifest::{ConfigEcho, RunManifest};
use crate::output;
use crate::sweep::{derive_seed_list, grid, run_sweep, Axis, Param, SweepSpec};

pub const FIGURE_IDS: [&str; 15] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "figS1", "figS2", "figS4",
    "figS5", "figS6", "figS7",
];

const BUNDLED_HISTOGRAM: &str = include_str!("../data/ces2020_ideology.toml");

/// The bundled empirical histogram of one-dimensional ideology.
pub fn bundled_histogram() -> HistogramSpec {
    let hist: HistogramSpec = toml::from_str(BUNDLED_HISTOGRAM).expect("bundled histogram parses");
    hist.validate().expect("bundled histogram is valid");
    hist
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedRun {
    pub name: String,
    pub config: SimConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedSweep {
    pub name: String,
    pub spec: SweepSpec,
    /// Fit a logistic curve to the cell means (one-axis sweeps only).
    pub fit: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PresetPlan {
    pub id: String,
    pub runs: Vec<NamedRun>,
    pub sweeps: Vec<NamedSweep>,
}

const RECORD_EVERY: u64 = 1_000;

fn label(prefix: &str, v: f64) -> String {
    format!("{prefix}{v}")
}

fn runs<F>(id: &str, seed: u64, key: &str, values: &[f64], mut make: F) -> Vec<NamedRun>
where
    F: FnMut(f64) -> SimConfig,
{
    values
        .iter()
        .map(|&v| NamedRun {
            name: format!("{id}_{}", label(key, v)),
            config: SimConfig {
                seed,
                record_every: RECORD_EVERY,
                ..make(v)
            },
        })
        .collect()
}

fn sweep(name: &str, base: SimConfig, axes: Vec<Axis>, master_seed: u64, fit: bool) -> NamedSweep {
    NamedSweep {
        name: name.to_string(),
        spec: SweepSpec {
            master_seed,
            ..SweepSpec::new(base, axes)
        },
        fit,
    }
}

fn steps(max_steps: u64) -> SimConfig {
    SimConfig {
        max_steps,
        ..SimConfig::default()
    }
}

fn steps_2d(max_steps: u64) -> SimConfig {
    SimConfig {
        max_steps,
        ..SimConfig::with_dims(2)
    }
}

/// Builds the plan for a figure id (see [`FIGURE_IDS`]).
pub fn plan(id: &str, master_seed: u64) -> Result<PresetPlan> {
    let seed = derive_seed_list(master_seed, 1)[0];
    let unit = grid(0.05, 1.0, 0.05);
    let tenths = grid(0.05, 0.95, 0.1);
    let exposures = grid(0.05, 0.5, 0.05);
    let steepness = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, f64::INFINITY];

    let mut runs_out = Vec::new();
    let mut sweeps = Vec::new();
    match id {
        "fig1" => {
            runs_out = runs(id, seed, "T", &tenths, |t| SimConfig {
                tolerance: t,
                ..steps(2_500_000)
            })
        }
        "fig2" => {
            runs_out = runs(id, seed, "T", &[0.25, 0.35], |t| SimConfig {
                tolerance: t,
                snapshot_steps: vec![0, 100_000, 1_000_000, 2_500_000],
                ..steps(2_500_000)
            })
        }
        "fig3" => sweeps.push(sweep(
            "fig3",
            steps(1_000_000),
            vec![Axis::new(Param::Tolerance, unit.clone()), Axis::new(Param::Responsiveness, unit.clone())],
            master_seed,
            false,
        )),
        "fig4" => sweeps.push(sweep(
            "fig4",
            steps(2_000_000),
            vec![Axis::new(Param::Tolerance, unit.clone()), Axis::new(Param::Exposure, exposures.clone())],
            master_seed,
            false,
        )),
        "fig5" => {
            runs_out = runs(id, seed, "E", &exposures, |e| {
                let mut cfg = SimConfig {
                    tolerance: 0.3,
                    ..steps(2_500_000)
                };
                cfg.set_exposure(e);
                cfg
            })
        }
        "fig6" => {
            runs_out = runs(id, seed, "E2_", &exposures, |e2| SimConfig {
                exposure: vec![0.1, e2],
                snapshot_steps: vec![0, 2_500_000],
                ..steps_2d(2_500_000)
            })
        }
        "fig7" => {
            runs_out = runs(id, seed, "P", &grid(0.0, 0.1, 0.01), |p| SimConfig {
                self_interest_prob: p,
                snapshot_steps: vec![0, 2_500_000],
                ..steps(2_500_000)
            })
        }
        "fig8" => {
            runs_out = runs(id, seed, "delta", &grid(0.0, 0.8, 0.05), |d| SimConfig {
                shock: Some(ShockConfig {
                    strength: vec![d],
                    at_step: 500_000,
                }),
                snapshot_steps: vec![499_999, 501_000, 2_500_000],
                ..steps(2_500_000)
            })
        }
        "fig9" => sweeps.push(sweep(
            "fig9",
            SimConfig {
                shock: Some(ShockConfig {
                    strength: vec![0.0],
                    at_step: 100_000,
                }),
                ..steps(2_000_000)
            },
            vec![
                Axis::new(Param::ShockStrength, grid(0.0, 0.8, 0.05)),
                Axis::new(Param::ShockStep, grid(100_000.0, 900_000.0, 100_000.0)),
            ],
            master_seed,
            false,
        )),
        "figS1" => {
            let hist = bundled_histogram();
            runs_out = runs(id, seed, "empirical_T", &tenths, |t| SimConfig {
                tolerance: t,
                initializer: Initializer::Empirical(hist.clone()),
                ..steps(2_500_000)
            });
            sweeps.push(sweep(
                "figS1_normal",
                steps(1_000_000),
                vec![Axis::new(Param::Tolerance, unit.clone())],
                master_seed,
                false,
            ));
            sweeps.push(sweep(
                "figS1_empirical",
                SimConfig {
                    initializer: Initializer::Empirical(hist),
                    ..steps(1_000_000)
                },
                vec![Axis::new(Param::Tolerance, unit.clone())],
                master_seed,
                false,
            ));
        }
        "figS2" => {
            runs_out = runs(id, seed, "k", &steepness, |k| SimConfig {
                rule: Rule::Sar { steepness: k },
                ..steps(1_500_000)
            });
            sweeps.push(sweep(
                "figS2",
                steps(1_500_000),
                vec![Axis::new(Param::Steepness, steepness.to_vec())],
                master_seed,
                false,
            ));
        }
        "figS4" => {
            for (name, param, values) in [
                ("figS4_tolerance", Param::Tolerance, unit.clone()),
                ("figS4_responsiveness", Param::Responsiveness, unit.clone()),
                ("figS4_exposure", Param::Exposure, exposures.clone()),
            ] {
                sweeps.push(sweep(name, steps(1_000_000), vec![Axis::new(param, values)], master_seed, true));
            }
        }
        "figS5" => sweeps.push(sweep(
            "figS5",
            steps_2d(1_000_000),
            vec![
                Axis::new(Param::Tolerance, grid(0.05, 1.4, 0.05)),
                Axis::new(Param::Responsiveness, unit.clone()),
            ],
            master_seed,
            false,
        )),
        "figS6" => sweeps.push(sweep(
            "figS6",
            steps_2d(2_000_000),
            vec![
                Axis::new(Param::ExposureDim(0), exposures.clone()),
                Axis::new(Param::ExposureDim(1), exposures.clone()),
            ],
            master_seed,
            false,
        )),
        "figS7" => sweeps.push(sweep(
            "figS7",
            steps(2_000_000),
            vec![
                Axis::new(Param::Tolerance, tenths.clone()),
                Axis::new(Param::SelfInterestProb, grid(0.0, 1.0, 0.05)),
            ],
            master_seed,
            false,
        )),
        other => {
            return Err(Error::config(
                "figure",
                format!("unknown figure id `{other}`; valid ids: {}", FIGURE_IDS.join(", ")),
            ))
        }
    }
    Ok(PresetPlan {
        id: id.to_string(),
        runs: runs_out,
        sweeps,
    })
}

fn scale(step: u64, factor: f64) -> u64 {
    (step as f64 * factor).round() as u64
}

impl PresetPlan {
    pub fn with_iterations(mut self, iterations: usize) -> Self {
        for s in &mut self.sweeps {
            s.spec.iterations = iterations;
        }
        self
    }

    /// Rescales every step count (horizons, snapshot and shock steps,
    /// shock-step axes) by `factor`, for quick previews.
    pub fn scale_steps(mut self, factor: f64) -> Self {
        let rescale = |cfg: &mut SimConfig| {
            cfg.max_steps = scale(cfg.max_steps, factor);
            cfg.record_every = scale(cfg.record_every, factor).max(1);
            for s in &mut cfg.snapshot_steps {
                *s = scale(*s, factor).min(cfg.max_steps);
            }
            if let Some(shock) = &mut cfg.shock {
                shock.at_step = scale(shock.at_step, factor).max(1);
            }
        };
        for run in &mut self.runs {
            rescale(&mut run.config);
        }
        for s in &mut self.sweeps {
            rescale(&mut s.spec.base);
            for axis in &mut s.spec.axes {
                if axis.param == Param::ShockStep {
                    for v in &mut axis.values {
                        *v = (*v * factor).round().max(1.0);
                    }
                }
            }
        }
        self
    }

    /// Runs every job, writing CSVs into `out_dir` and recording them in
    /// `manifest`.
    pub fn execute(&self, out_dir: &Path, threads: Option<usize>, manifest: &mut RunManifest) -> Result<()> {
        for run in &self.runs {
            run_single(&run.name, &run.config, out_dir, manifest)?;
        }
        for s in &self.sweeps {
            let result = run_sweep(&s.spec, threads)?;
            let sweep_path = out_dir.join(format!("{}_sweep.csv", s.name));
            let agg_path = out_dir.join(format!("{}_aggregate.csv", s.name));
            output::save_sweep(&sweep_path, &result)?;
            output::save_aggregate(&agg_path, &result)?;
            manifest.configs.push(ConfigEcho::new(format!("{}_base", s.name), &s.spec.base));
            manifest.artifacts.extend([sweep_path, agg_path]);
            if s.fit {
                let fit = fit_sweep_means(&result)?;
                let fit_path = out_dir.join(format!("{}_fit.csv", s.name));
                output::save_fits(&fit_path, &[(result.params[0].to_string(), fit)])?;
                manifest.artifacts.push(fit_path);
            }
        }
        Ok(())
    }
}

/// Runs one configuration with recording and writes its time series (and
/// snapshots, when requested) under `out_dir`.
pub fn run_single(name: &str, cfg: &SimConfig, out_dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    let record = crate::engine::simulate(cfg)?;
    let ts: PathBuf = out_dir.join(format!("{name}_timeseries.csv"));
    output::save_time_series(&ts, &record.series)?;
    manifest.artifacts.push(ts);
    if !record.snapshots.is_empty() {
        let snap = out_dir.join(format!("{name}_snapshots.csv"));
        output::save_snapshots(&snap, &record.snapshots)?;
        manifest.artifacts.push(snap);
    }
    let cfg_path = out_dir.join(format!("{name}.config.toml"));
    std::fs::write(&cfg_path, cfg.to_toml_string()).map_err(|e| Error::io(&cfg_path, e))?;
    manifest.artifacts.push(cfg_path);
    manifest.configs.push(ConfigEcho::new(name, cfg));
    Ok(())
}

/// Fits the cell means of a finished one-axis sweep.
pub fn fit_sweep_means(result: &crate::sweep::SweepResult) -> Result<LogisticFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = result.means().into_iter().unzip();
    fit_logistic(&xs, &ys)
}
