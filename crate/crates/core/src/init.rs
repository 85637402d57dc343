//! Initial populations.
//!
//! Normal initializers rejection-sample whole position vectors into the unit
//! cube, giving up after [`MAX_REJECTIONS`] attempts for any one actor.

use std::fs;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::config::{Initializer, SimConfig};
use crate::error::{Error, Result};
use crate::model::Population;

pub const MAX_REJECTIONS: usize = 1000;

/// A binned density on `[0, 1]`. Bins may have unequal widths.
///
/// On disk it is a TOML file with two arrays:
///
/// ```toml
/// bin_edges = [0.0, 0.25, 0.5, 0.75, 1.0]
/// weights = [1.0, 3.0, 3.0, 1.0]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramSpec {
    pub bin_edges: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HistogramSpec {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let hist: HistogramSpec = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        hist.validate()?;
        Ok(hist)
    }

    pub fn validate(&self) -> Result<()> {
        let edges = &self.bin_edges;
        if edges.len() < 2 {
            return Err(Error::config("bin_edges", "need at least two edges"));
        }
        if edges[0] != 0.0 || edges[edges.len() - 1] != 1.0 {
            return Err(Error::config("bin_edges", "must start at 0 and end at 1"));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::config("bin_edges", "must be strictly increasing"));
        }
        if self.weights.len() != edges.len() - 1 {
            return Err(Error::config(
                "weights",
                format!("{} weight(s) for {} bin(s)", self.weights.len(), edges.len() - 1),
            ));
        }
        if self.weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::config("weights", "must be finite and nonnegative"));
        }
        if !self.weights.iter().any(|w| *w > 0.0) {
            return Err(Error::Init("histogram has no positive weight".into()));
        }
        Ok(())
    }

    pub fn n_bins(&self) -> usize {
        self.weights.len()
    }

    /// Mean of the piecewise-uniform density the histogram describes.
    pub fn mean(&self) -> f64 {
        let total: f64 = self.weights.iter().sum();
        self.bin_edges
            .windows(2)
            .zip(&self.weights)
            .map(|(e, w)| w * 0.5 * (e[0] + e[1]))
            .sum::<f64>()
            / total
    }
}

/// Builds the initial population described by `cfg.initializer`.
pub fn initialize<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Result<Population> {
    match &cfg.initializer {
        Initializer::Normal { mean, sigma } => {
            if cfg.n_dims == 1 {
                init_normal(cfg.n_actors, *mean, *sigma, rng)
            } else {
                init_multivariate(cfg.n_actors, &vec![*mean; cfg.n_dims], sigma * sigma, rng)
            }
        }
        Initializer::MultivariateNormal { means, variance } => {
            init_multivariate(cfg.n_actors, means, *variance, rng)
        }
        Initializer::Empirical(hist) => init_empirical(cfg.n_actors, hist, rng),
        Initializer::Explicit(positions) => {
            Population::from_flat(cfg.n_dims, positions.iter().flatten().copied().collect())
        }
    }
}

/// One-dimensional normal positions, rejection-sampled into `[0, 1]`.
pub fn init_normal<R: Rng + ?Sized>(n: usize, mean: f64, sigma: f64, rng: &mut R) -> Result<Population> {
    init_multivariate(n, &[mean], sigma * sigma, rng)
}

/// Independent normal coordinates with a shared variance, each whole
/// vector rejection-sampled into `[0, 1]^D`.
pub fn init_multivariate<R: Rng + ?Sized>(
    n: usize,
    means: &[f64],
    variance: f64,
    rng: &mut R,
) -> Result<Population> {
    if means.is_empty() {
        return Err(Error::config("initializer.means", "need at least one dimension"));
    }
    if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
        return Err(Error::config("initializer.mean", format!("{m} is outside [0, 1]")));
    }
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::config("initializer.sigma", format!("variance {variance} is not positive")));
    }
    let sigma = variance.sqrt();
    let normals: Vec<Normal<f64>> = means
        .iter()
        .map(|&m| Normal::new(m, sigma).map_err(|e| Error::config("initializer.sigma", e.to_string())))
        .collect::<Result<_>>()?;

    let dims = means.len();
    let mut coords = Vec::with_capacity(n * dims);
    let mut candidate = vec![0.0; dims];
    for actor in 0..n {
        let mut accepted = false;
        for _ in 0..MAX_REJECTIONS {
            for (c, dist) in candidate.iter_mut().zip(&normals) {
                *c = dist.sample(rng);
            }
            if candidate.iter().all(|x| (0.0..=1.0).contains(x)) {
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::Init(format!(
                "actor {actor}: no draw inside the unit cube after {MAX_REJECTIONS} attempts \
                 (means {means:?}, sigma {sigma})"
            )));
        }
        coords.extend_from_slice(&candidate);
    }
    Population::from_flat(dims, coords)
}

/// Samples a bin with probability proportional to its weight, then a point
/// uniformly inside that bin.
pub fn init_empirical<R: Rng + ?Sized>(n: usize, hist: &HistogramSpec, rng: &mut R) -> Result<Population> {
    hist.validate()?;
    let bins = WeightedIndex::new(&hist.weights).map_err(|e| Error::Init(e.to_string()))?;
    let coords = (0..n)
        .map(|_| {
            let b = bins.sample(rng);
            let (lo, hi) = (hist.bin_edges[b], hist.bin_edges[b + 1]);
            rng.random_range(lo..hi)
        })
        .collect();
    Population::from_flat(1, coords)
}
