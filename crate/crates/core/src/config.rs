//! Run configuration and its on-disk TOML form.
//!
//! The file is flat, with keys named after the model symbols:
//!
//! ```toml
//! n_actors = 100
//! n_dims = 1
//! tolerance = 0.25
//! responsiveness = 0.25
//! exposure = 0.1            # scalar (broadcast) or one value per dimension
//! rule = "ar"               # or "sar", with `steepness = 4.0` (inf allowed)
//! self_interest_prob = 0.0
//! max_steps = 1000000
//! record_every = 1000
//! snapshot_steps = [0, 100000]
//! seed = 42
//!
//! [initializer]
//! kind = "normal"           # normal | multivariate | empirical | explicit
//! mean = 0.5
//! sigma = 0.2
//!
//! [shock]
//! strength = 0.4            # scalar or per-dimension
//! at_step = 500000
//! ```
//!
//! Every key is optional; missing keys take the model defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::init::HistogramSpec;

pub const DEFAULT_N_ACTORS: usize = 100;
pub const DEFAULT_N_DIMS: usize = 1;
pub const DEFAULT_MEAN: f64 = 0.5;
pub const DEFAULT_SIGMA: f64 = 0.2;
pub const DEFAULT_EXPOSURE: f64 = 0.1;
pub const DEFAULT_TOLERANCE: f64 = 0.25;
pub const DEFAULT_RESPONSIVENESS: f64 = 0.25;
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
pub const DEFAULT_RECORD_EVERY: u64 = 1_000;

/// Position update rule applied when two actors interact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rule {
    /// Attract within the tolerance, repulse beyond it.
    Ar,
    /// Repulse with a logistic probability of distance; `steepness` may be
    /// `f64::INFINITY`, which replays [`Rule::Ar`] exactly.
    Sar { steepness: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Initializer {
    /// Every coordinate drawn from `Normal(mean, sigma)`, rejection-sampled
    /// into the unit cube.
    Normal { mean: f64, sigma: f64 },
    /// Independent coordinates with per-dimension means and a shared
    /// variance (diagonal covariance), rejection-sampled as whole vectors.
    MultivariateNormal { means: Vec<f64>, variance: f64 },
    /// One dimension, sampled from a histogram with within-bin uniform jitter.
    Empirical(HistogramSpec),
    /// Fixed positions, row-major.
    Explicit(Vec<Vec<f64>>),
}

/// A one-time shift of every actor by `strength`, applied to actor `i` at
/// step `at_step + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShockConfig {
    pub strength: Vec<f64>,
    pub at_step: u64,
}

/// Full parameterization of one simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub n_actors: usize,
    pub n_dims: usize,
    pub tolerance: f64,
    pub responsiveness: f64,
    pub exposure: Vec<f64>,
    pub rule: Rule,
    pub initializer: Initializer,
    pub self_interest_prob: f64,
    pub shock: Option<ShockConfig>,
    pub max_steps: u64,
    pub record_every: u64,
    pub snapshot_steps: Vec<u64>,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_actors: DEFAULT_N_ACTORS,
            n_dims: DEFAULT_N_DIMS,
            tolerance: DEFAULT_TOLERANCE,
            responsiveness: DEFAULT_RESPONSIVENESS,
            exposure: vec![DEFAULT_EXPOSURE],
            rule: Rule::Ar,
            initializer: Initializer::Normal {
                mean: DEFAULT_MEAN,
                sigma: DEFAULT_SIGMA,
            },
            self_interest_prob: 0.0,
            shock: None,
            max_steps: DEFAULT_MAX_STEPS,
            record_every: DEFAULT_RECORD_EVERY,
            snapshot_steps: Vec::new(),
            seed: 0,
        }
    }
}

impl SimConfig {
    /// Defaults for a `dims`-dimensional space: every exposure at the
    /// default and a normal initializer centred in the cube.
    pub fn with_dims(dims: usize) -> Self {
        SimConfig {
            n_dims: dims,
            exposure: vec![DEFAULT_EXPOSURE; dims],
            ..SimConfig::default()
        }
    }

    /// Sets every dimension's exposure to `exposure`.
    pub fn set_exposure(&mut self, exposure: f64) {
        self.exposure = vec![exposure; self.n_dims];
    }

    pub fn validate(&self) -> Result<()> {
        let diag = (self.n_dims as f64).sqrt();
        if self.n_actors == 0 {
            return Err(Error::config("n_actors", "must be at least 1"));
        }
        if self.n_dims == 0 {
            return Err(Error::config("n_dims", "must be at least 1"));
        }
        if !(0.0..=diag).contains(&self.tolerance) {
            return Err(Error::config(
                "tolerance",
                format!("{} is outside [0, sqrt(n_dims) = {diag}]", self.tolerance),
            ));
        }
        if !(self.responsiveness > 0.0 && self.responsiveness <= 1.0) {
            return Err(Error::config(
                "responsiveness",
                format!("{} is outside (0, 1]", self.responsiveness),
            ));
        }
        if self.exposure.len() != self.n_dims {
            return Err(Error::config(
                "exposure",
                format!(
                    "{} value(s) given for {} dimension(s)",
                    self.exposure.len(),
                    self.n_dims
                ),
            ));
        }
        if let Some(e) = self.exposure.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(Error::config("exposure", format!("{e} is not a positive number")));
        }
        if let Rule::Sar { steepness } = self.rule {
            if !(steepness > 1.0) {
                return Err(Error::config(
                    "steepness",
                    format!("{steepness} must exceed 1 (inf allowed)"),
                ));
            }
            if !(self.tolerance > 0.0 && self.tolerance < diag) {
                return Err(Error::config(
                    "tolerance",
                    format!("the sar rule needs 0 < tolerance < {diag}"),
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.self_interest_prob) {
            return Err(Error::config(
                "self_interest_prob",
                format!("{} is outside [0, 1]", self.self_interest_prob),
            ));
        }
        if self.record_every == 0 {
            return Err(Error::config("record_every", "must be at least 1"));
        }
        if let Some(bad) = self.snapshot_steps.iter().find(|s| **s > self.max_steps) {
            return Err(Error::config(
                "snapshot_steps",
                format!("step {bad} is beyond max_steps = {}", self.max_steps),
            ));
        }
        if let Some(shock) = &self.shock {
            if shock.strength.len() != self.n_dims {
                return Err(Error::config(
                    "shock.strength",
                    format!(
                        "{} value(s) given for {} dimension(s)",
                        shock.strength.len(),
                        self.n_dims
                    ),
                ));
            }
            if let Some(d) = shock.strength.iter().find(|d| !d.is_finite() || d.abs() > 1.0) {
                return Err(Error::config("shock.strength", format!("{d} is outside [-1, 1]")));
            }
            if shock.at_step == 0 {
                return Err(Error::config("shock.at_step", "must be at least 1"));
            }
            let last_start = self.max_steps.saturating_sub(self.n_actors as u64);
            if self.max_steps < self.n_actors as u64 || shock.at_step > last_start {
                return Err(Error::config(
                    "shock.at_step",
                    format!(
                        "a shock at step {} spreads over {} steps and would be truncated by max_steps = {}",
                        shock.at_step, self.n_actors, self.max_steps
                    ),
                ));
            }
        }
        self.validate_initializer()
    }

    fn validate_initializer(&self) -> Result<()> {
        let unit = |x: &f64| (0.0..=1.0).contains(x);
        match &self.initializer {
            Initializer::Normal { mean, sigma } => {
                if !unit(mean) {
                    return Err(Error::config("initializer.mean", format!("{mean} is outside [0, 1]")));
                }
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::config("initializer.sigma", format!("{sigma} is not positive")));
                }
            }
            Initializer::MultivariateNormal { means, variance } => {
                if means.len() != self.n_dims {
                    return Err(Error::config(
                        "initializer.means",
                        format!("{} value(s) for {} dimension(s)", means.len(), self.n_dims),
                    ));
                }
                if let Some(m) = means.iter().find(|m| !unit(m)) {
                    return Err(Error::config("initializer.means", format!("{m} is outside [0, 1]")));
                }
                if !(*variance > 0.0 && variance.is_finite()) {
                    return Err(Error::config(
                        "initializer.variance",
                        format!("{variance} is not positive"),
                    ));
                }
            }
            Initializer::Empirical(hist) => {
                if self.n_dims != 1 {
                    return Err(Error::config(
                        "initializer",
                        "empirical initialization is one-dimensional",
                    ));
                }
                hist.validate()?;
            }
            Initializer::Explicit(positions) => {
                if positions.len() != self.n_actors {
                    return Err(Error::config(
                        "initializer.positions",
                        format!("{} position(s) for {} actor(s)", positions.len(), self.n_actors),
                    ));
                }
                for p in positions {
                    if p.len() != self.n_dims {
                        return Err(Error::config(
                            "initializer.positions",
                            format!("position {p:?} does not have {} coordinate(s)", self.n_dims),
                        ));
                    }
                    if let Some(x) = p.iter().find(|x| !unit(x)) {
                        return Err(Error::config(
                            "initializer.positions",
                            format!("coordinate {x} is outside [0, 1]"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reads and validates a TOML run configuration. Histogram paths are
    /// resolved relative to the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml_str(&text, base).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_owned(),
                message,
            },
            other => other,
        })
    }

    /// Parses a TOML configuration; relative histogram paths resolve
    /// against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Parse {
            path: PathBuf::from("<config>"),
            message: e.to_string(),
        })?;
        let cfg = file.into_config(base_dir)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serializes to the same TOML form [`SimConfig::load`] reads. Histograms
    /// are written inline so the echo is self-contained.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ConfigFile::from(self)).expect("config serializes to TOML")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarOrVec {
    Scalar(f64),
    Vec(Vec<f64>),
}

impl ScalarOrVec {
    fn expand(self, dims: usize) -> Vec<f64> {
        match self {
            ScalarOrVec::Scalar(x) => vec![x; dims],
            ScalarOrVec::Vec(v) => v,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RuleName {
    Ar,
    Sar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum InitializerFile {
    Normal {
        #[serde(default = "default_mean")]
        mean: f64,
        #[serde(default = "default_sigma")]
        sigma: f64,
    },
    Multivariate {
        means: ScalarOrVec,
        variance: f64,
    },
    Empirical {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bin_edges: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
    Explicit {
        positions: Vec<ScalarOrVec>,
    },
}

fn default_mean() -> f64 {
    DEFAULT_MEAN
}

fn default_sigma() -> f64 {
    DEFAULT_SIGMA
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ShockFile {
    strength: ScalarOrVec,
    at_step: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    n_actors: usize,
    n_dims: usize,
    tolerance: f64,
    responsiveness: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exposure: Option<ScalarOrVec>,
    rule: RuleName,
    #[serde(skip_serializing_if = "Option::is_none")]
    steepness: Option<f64>,
    self_interest_prob: f64,
    max_steps: u64,
    record_every: u64,
    snapshot_steps: Vec<u64>,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    initializer: Option<InitializerFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shock: Option<ShockFile>,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let d = SimConfig::default();
        ConfigFile {
            n_actors: d.n_actors,
            n_dims: d.n_dims,
            tolerance: d.tolerance,
            responsiveness: d.responsiveness,
            exposure: None,
            rule: RuleName::Ar,
            steepness: None,
            self_interest_prob: d.self_interest_prob,
            max_steps: d.max_steps,
            record_every: d.record_every,
            snapshot_steps: d.snapshot_steps,
            seed: d.seed,
            initializer: None,
            shock: None,
        }
    }
}

impl ConfigFile {
    fn into_config(self, base_dir: &Path) -> Result<SimConfig> {
        let dims = self.n_dims;
        let rule = match (self.rule, self.steepness) {
            (RuleName::Ar, None) => Rule::Ar,
            (RuleName::Ar, Some(_)) => {
                return Err(Error::config("steepness", "only meaningful with rule = \"sar\""))
            }
            (RuleName::Sar, Some(steepness)) => Rule::Sar { steepness },
            (RuleName::Sar, None) => {
                return Err(Error::config("steepness", "required when rule = \"sar\""))
            }
        };
        let initializer = match self.initializer {
            None => Initializer::Normal {
                mean: DEFAULT_MEAN,
                sigma: DEFAULT_SIGMA,
            },
            Some(InitializerFile::Normal { mean, sigma }) => Initializer::Normal { mean, sigma },
            Some(InitializerFile::Multivariate { means, variance }) => {
                Initializer::MultivariateNormal {
                    means: means.expand(dims),
                    variance,
                }
            }
            Some(InitializerFile::Empirical {
                path,
                bin_edges,
                weights,
            }) => {
                let hist = match (path, bin_edges, weights) {
                    (Some(path), None, None) => HistogramSpec::load(base_dir.join(path))?,
                    (None, Some(bin_edges), Some(weights)) => HistogramSpec { bin_edges, weights },
                    _ => {
                        return Err(Error::config(
                            "initializer",
                            "empirical initializer needs either `path` or both `bin_edges` and `weights`",
                        ))
                    }
                };
                Initializer::Empirical(hist)
            }
            Some(InitializerFile::Explicit { positions }) => Initializer::Explicit(
                positions.into_iter().map(|p| p.expand(1)).collect(),
            ),
        };
        Ok(SimConfig {
            n_actors: self.n_actors,
            n_dims: dims,
            tolerance: self.tolerance,
            responsiveness: self.responsiveness,
            exposure: self
                .exposure
                .map_or_else(|| vec![DEFAULT_EXPOSURE; dims], |e| e.expand(dims)),
            rule,
            initializer,
            self_interest_prob: self.self_interest_prob,
            shock: self.shock.map(|s| ShockConfig {
                strength: s.strength.expand(dims),
                at_step: s.at_step,
            }),
            max_steps: self.max_steps,
            record_every: self.record_every,
            snapshot_steps: self.snapshot_steps,
            seed: self.seed,
        })
    }
}

impl From<&SimConfig> for ConfigFile {
    fn from(cfg: &SimConfig) -> Self {
        let (rule, steepness) = match cfg.rule {
            Rule::Ar => (RuleName::Ar, None),
            Rule::Sar { steepness } => (RuleName::Sar, Some(steepness)),
        };
        let initializer = match &cfg.initializer {
            Initializer::Normal { mean, sigma } => InitializerFile::Normal {
                mean: *mean,
                sigma: *sigma,
            },
            Initializer::MultivariateNormal { means, variance } => InitializerFile::Multivariate {
                means: ScalarOrVec::Vec(means.clone()),
                variance: *variance,
            },
            Initializer::Empirical(hist) => InitializerFile::Empirical {
                path: None,
                bin_edges: Some(hist.bin_edges.clone()),
                weights: Some(hist.weights.clone()),
            },
            Initializer::Explicit(positions) => InitializerFile::Explicit {
                positions: positions.iter().cloned().map(ScalarOrVec::Vec).collect(),
            },
        };
        ConfigFile {
            n_actors: cfg.n_actors,
            n_dims: cfg.n_dims,
            tolerance: cfg.tolerance,
            responsiveness: cfg.responsiveness,
            exposure: Some(ScalarOrVec::Vec(cfg.exposure.clone())),
            rule,
            steepness,
            self_interest_prob: cfg.self_interest_prob,
            max_steps: cfg.max_steps,
            record_every: cfg.record_every,
            snapshot_steps: cfg.snapshot_steps.clone(),
            seed: cfg.seed,
            initializer: Some(initializer),
            shock: cfg.shock.as_ref().map(|s| ShockFile {
                strength: ScalarOrVec::Vec(s.strength.clone()),
                at_step: s.at_step,
            }),
        }
    }
}
