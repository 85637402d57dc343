//! Actor positions and populations.

use std::ops::Deref;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A point in the ideological unit hypercube `[0,1]^D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(SmallVec<[f64; 2]>);

impl Position {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Self {
        Position(coords.into_iter().collect())
    }

    pub fn scalar(x: f64) -> Self {
        Position(smallvec::smallvec![x])
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn in_unit_cube(&self) -> bool {
        self.0.iter().all(|x| (0.0..=1.0).contains(x))
    }
}

impl Deref for Position {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<&[f64]> for Position {
    fn from(coords: &[f64]) -> Self {
        Position(SmallVec::from_slice(coords))
    }
}

impl From<f64> for Position {
    fn from(x: f64) -> Self {
        Position::scalar(x)
    }
}

/// Actor positions together with each actor's frozen initial (preferred)
/// position. Coordinates are stored row-major: actor `i` owns
/// `coords[i * dims..(i + 1) * dims]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    dims: usize,
    coords: Vec<f64>,
    preferred: Vec<f64>,
}

impl Population {
    /// Builds a population from flat row-major coordinates. The preferred
    /// positions are a copy of `coords`.
    pub fn from_flat(dims: usize, coords: Vec<f64>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::config("n_dims", "must be at least 1"));
        }
        if coords.is_empty() || coords.len() % dims != 0 {
            return Err(Error::config(
                "positions",
                format!(
                    "{} coordinates cannot form a non-empty population in {dims} dimension(s)",
                    coords.len()
                ),
            ));
        }
        if let Some(bad) = coords.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::config(
                "positions",
                format!("coordinate {bad} lies outside [0, 1]"),
            ));
        }
        Ok(Population {
            dims,
            preferred: coords.clone(),
            coords,
        })
    }

    /// Builds a population whose preferred positions differ from its
    /// current ones.
    pub fn with_preferred(dims: usize, coords: Vec<f64>, preferred: Vec<f64>) -> Result<Self> {
        let pref = Population::from_flat(dims, preferred)?;
        if pref.coords.len() != coords.len() {
            return Err(Error::config("preferred", "length differs from positions"));
        }
        let mut pop = Population::from_flat(dims, coords)?;
        pop.preferred = pref.coords;
        Ok(pop)
    }

    pub fn from_positions(positions: &[Position]) -> Result<Self> {
        let dims = positions.first().map_or(0, Position::dims);
        if positions.iter().any(|p| p.dims() != dims) {
            return Err(Error::config("positions", "mixed dimensionality"));
        }
        Population::from_flat(dims, positions.iter().flat_map(|p| p.iter().copied()).collect())
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dims
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn position(&self, actor: usize) -> &[f64] {
        &self.coords[actor * self.dims..(actor + 1) * self.dims]
    }

    pub fn preferred(&self, actor: usize) -> &[f64] {
        &self.preferred[actor * self.dims..(actor + 1) * self.dims]
    }

    pub(crate) fn position_mut(&mut self, actor: usize) -> &mut [f64] {
        &mut self.coords[actor * self.dims..(actor + 1) * self.dims]
    }

    /// All current coordinates, row-major.
    pub fn flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn preferred_flat(&self) -> &[f64] {
        &self.preferred
    }

    /// Iterates over the current value of one coordinate across all actors.
    pub fn column(&self, dim: usize) -> impl ExactSizeIterator<Item = f64> + Clone + '_ {
        assert!(dim < self.dims, "dimension {dim} out of range");
        self.coords.iter().skip(dim).step_by(self.dims).copied()
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dims)
    }
}
