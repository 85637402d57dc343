//! Parameter sweeps.
//!
//! Every cell of a sweep runs the same list of iteration seeds, derived once
//! from the master seed, so differences between cells come from the swept
//! parameters alone. Runs are independent and executed in parallel; results
//! are collected in canonical cell order, so output never depends on the
//! worker count.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::config::{Rule, SimConfig};
use crate::engine::final_polarization;
use crate::error::{Error, Result};
use crate::metrics::{aggregate_sweep_cell, CellStats};

pub const DEFAULT_ITERATIONS: usize = 20;

/// A settable field of [`SimConfig`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    NActors,
    Tolerance,
    Responsiveness,
    /// Every dimension's exposure at once.
    Exposure,
    /// One dimension's exposure (0-based).
    ExposureDim(usize),
    SelfInterestProb,
    /// Switches the rule to the stochastic variant with this steepness.
    Steepness,
    /// Every dimension's shock strength; the base config must carry a shock.
    ShockStrength,
    ShockStep,
}

impl Param {
    pub fn apply(self, cfg: &mut SimConfig, value: f64) -> Result<()> {
        match self {
            Param::NActors => {
                if !(value >= 1.0 && value.fract() == 0.0) {
                    return Err(Error::config("n_actors", format!("{value} is not a positive integer")));
                }
                cfg.n_actors = value as usize;
            }
            Param::Tolerance => cfg.tolerance = value,
            Param::Responsiveness => cfg.responsiveness = value,
            Param::Exposure => cfg.set_exposure(value),
            Param::ExposureDim(d) => {
                let slot = cfg.exposure.get_mut(d).ok_or_else(|| {
                    Error::config(self.to_string(), format!("no dimension {d} in a {}-D config", cfg.n_dims))
                })?;
                *slot = value;
            }
            Param::SelfInterestProb => cfg.self_interest_prob = value,
            Param::Steepness => cfg.rule = Rule::Sar { steepness: value },
            Param::ShockStrength | Param::ShockStep => {
                let dims = cfg.n_dims;
                let shock = cfg.shock.as_mut().ok_or_else(|| {
                    Error::config(self.to_string(), "the base configuration has no [shock] block")
                })?;
                if self == Param::ShockStrength {
                    shock.strength = vec![value; dims];
                } else {
                    if !(value >= 1.0 && value.fract() == 0.0) {
                        return Err(Error::config("shock_step", format!("{value} is not a positive integer")));
                    }
                    shock.at_step = value as u64;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::NActors => f.write_str("n_actors"),
            Param::Tolerance => f.write_str("tolerance"),
            Param::Responsiveness => f.write_str("responsiveness"),
            Param::Exposure => f.write_str("exposure"),
            Param::ExposureDim(d) => write!(f, "exposure_{d}"),
            Param::SelfInterestProb => f.write_str("self_interest_prob"),
            Param::Steepness => f.write_str("steepness"),
            Param::ShockStrength => f.write_str("shock_strength"),
            Param::ShockStep => f.write_str("shock_step"),
        }
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "n_actors" => Param::NActors,
            "tolerance" => Param::Tolerance,
            "responsiveness" => Param::Responsiveness,
            "exposure" => Param::Exposure,
            "self_interest_prob" => Param::SelfInterestProb,
            "steepness" => Param::Steepness,
            "shock_strength" => Param::ShockStrength,
            "shock_step" => Param::ShockStep,
            other => match other.strip_prefix("exposure_").and_then(|d| d.parse().ok()) {
                Some(d) => Param::ExposureDim(d),
                None => return Err(Error::config("axis.param", format!("unknown parameter `{other}`"))),
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: Param, values: impl Into<Vec<f64>>) -> Self {
        Axis {
            param,
            values: values.into(),
        }
    }
}

/// Evenly spaced values `start, start + step, ..., stop`, each rounded to
/// ten decimals so grids print as they are written (`0.15`, not
/// `0.15000000000000002`).
pub fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10)
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub base: SimConfig,
    /// One or two axes.
    pub axes: Vec<Axis>,
    pub iterations: usize,
    pub master_seed: u64,
}

impl SweepSpec {
    pub fn new(base: SimConfig, axes: Vec<Axis>) -> Self {
        SweepSpec {
            base,
            axes,
            iterations: DEFAULT_ITERATIONS,
            master_seed: 0,
        }
    }

    /// Axis-value tuples in canonical order: the first axis varies slowest.
    pub fn cells(&self) -> Vec<Vec<f64>> {
        let mut cells = vec![Vec::new()];
        for axis in &self.axes {
            cells = cells
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |v| {
                        let mut c = prefix.clone();
                        c.push(*v);
                        c
                    })
                })
                .collect();
        }
        cells
    }

    /// The configuration for one cell, validated. The seed is left as in
    /// the base; [`run_sweep`] overwrites it per iteration.
    pub fn cell_config(&self, cell: &[f64]) -> Result<SimConfig> {
        let mut cfg = self.base.clone();
        let labelled = || describe_cell(&self.axes, cell);
        for (axis, value) in self.axes.iter().zip(cell) {
            axis.param.apply(&mut cfg, *value).map_err(|e| Error::Cell {
                cell: labelled(),
                source: Box::new(e),
            })?;
        }
        cfg.validate().map_err(|e| Error::Cell {
            cell: labelled(),
            source: Box::new(e),
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.axes.len()) {
            return Err(Error::config("axis", format!("expected 1 or 2 axes, got {}", self.axes.len())));
        }
        if let Some(a) = self.axes.iter().find(|a| a.values.is_empty()) {
            return Err(Error::config("axis.values", format!("axis `{}` has no values", a.param)));
        }
        if self.iterations == 0 {
            return Err(Error::config("iterations", "must be at least 1"));
        }
        Ok(())
    }

    /// Reads a sweep file:
    ///
    /// ```toml
    /// iterations = 20
    /// master_seed = 7
    ///
    /// [base]            # any run-configuration keys
    /// max_steps = 1000000
    ///
    /// [[axis]]
    /// param = "tolerance"
    /// values = [0.05, 0.15, 0.25]
    ///
    /// [[axis]]
    /// param = "responsiveness"
    /// start = 0.05
    /// stop = 1.0
    /// step = 0.05
    /// ```
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base_dir = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base_dir).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_owned(),
                message,
            },
            other => other,
        })
    }

    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let parse_err = |message: String| Error::Parse {
            path: "<sweep>".into(),
            message,
        };
        let file: SweepFile = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        let base_text = toml::to_string(&file.base).map_err(|e| parse_err(e.to_string()))?;
        let base = SimConfig::from_toml_str(&base_text, base_dir)?;
        let axes = file
            .axis
            .into_iter()
            .map(|a| {
                let param: Param = a.param.parse()?;
                let values = match (a.values, a.start, a.stop, a.step) {
                    (Some(v), None, None, None) => v,
                    (None, Some(start), Some(stop), Some(step)) if step > 0.0 && stop >= start => {
                        grid(start, stop, step)
                    }
                    _ => {
                        return Err(Error::config(
                            "axis",
                            format!("axis `{param}` needs `values` or a valid `start`/`stop`/`step`"),
                        ))
                    }
                };
                Ok(Axis { param, values })
            })
            .collect::<Result<_>>()?;
        let spec = SweepSpec {
            base,
            axes,
            iterations: file.iterations,
            master_seed: file.master_seed,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    #[serde(default = "default_iterations")]
    iterations: usize,
    #[serde(default)]
    master_seed: u64,
    #[serde(default)]
    base: toml::Table,
    axis: Vec<AxisFile>,
}

fn default_iterations() -> usize {
    DEFAULT_ITERATIONS
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisFile {
    param: String,
    values: Option<Vec<f64>>,
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
}

fn describe_cell(axes: &[Axis], cell: &[f64]) -> String {
    axes.iter()
        .zip(cell)
        .map(|(a, v)| format!("{}={v}", a.param))
        .collect::<Vec<_>>()
        .join(", ")
}

/// One seed per iteration, a pure function of `master_seed`. Seeds within
/// a list are distinct.
pub fn derive_seed_list(master_seed: u64, iterations: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    let mut seeds: Vec<u64> = Vec::with_capacity(iterations);
    while seeds.len() < iterations {
        let s = rng.next_u64();
        if !seeds.contains(&s) {
            seeds.push(s);
        }
    }
    seeds
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub values: Vec<f64>,
    /// Final polarization per iteration, in seed-list order.
    pub finals: Vec<f64>,
    pub stats: CellStats,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub params: Vec<Param>,
    pub seed_list: Vec<u64>,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, values: &[f64]) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.values == values)
    }

    /// `(axis value, cell mean)` pairs of a one-axis sweep.
    pub fn means(&self) -> Vec<(f64, f64)> {
        self.cells.iter().map(|c| (c.values[0], c.stats.mean)).collect()
    }
}

/// Runs every (cell, iteration) pair to `base.max_steps`. `threads = None`
/// uses the global rayon pool; `Some(0)` is rejected.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let cells = spec.cells();
    let configs: Vec<SimConfig> = cells
        .iter()
        .map(|c| spec.cell_config(c))
        .collect::<Result<_>>()?;
    let seed_list = derive_seed_list(spec.master_seed, spec.iterations);

    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| seed_list.iter().map(move |s| (c, *s)))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|&(c, seed)| {
                let cfg = SimConfig {
                    seed,
                    ..configs[c].clone()
                };
                final_polarization(&cfg)
            })
            .collect::<Result<Vec<f64>>>()
    };
    let finals = match threads {
        Some(0) => return Err(Error::config("threads", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config("threads", e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let cells = cells
        .into_iter()
        .zip(finals.chunks_exact(spec.iterations))
        .map(|(values, finals)| {
            Ok(SweepCell {
                stats: aggregate_sweep_cell(finals)?,
                finals: finals.to_vec(),
                values,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepResult {
        params: spec.axes.iter().map(|a| a.param).collect(),
        seed_list,
        cells,
    })
}
