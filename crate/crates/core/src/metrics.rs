//! Polarization measures and per-cell summary statistics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Population;

/// Population variance (divide by N) of one-dimensional positions.
pub fn polarization_1d(positions: &[f64]) -> Result<f64> {
    if positions.is_empty() {
        return Err(Error::Empty {
            what: "polarization",
        });
    }
    Ok(population_variance(positions.iter().copied()))
}

fn population_variance<I>(xs: I) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    // shifted by the first datum so identical positions give exactly zero
    let shift = xs.clone().next().unwrap_or(0.0);
    let (n, sum) = xs.clone().fold((0usize, 0.0), |(n, s), x| (n + 1, s + (x - shift)));
    let mean = sum / n as f64;
    xs.map(|x| {
        let d = (x - shift) - mean;
        d * d
    })
    .sum::<f64>()
        / n as f64
}

/// Trace of the position covariance matrix: the sum over dimensions of each
/// dimension's population variance. Equals [`polarization_1d`] when D = 1.
pub fn polarization_trace(pop: &Population) -> f64 {
    (0..pop.dims())
        .map(|d| population_variance(pop.column(d)))
        .sum()
}

/// Summary of one sweep cell's final polarizations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CellStats {
    pub mean: f64,
    /// Population standard deviation.
    pub sd: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// `q1 - 1.5 * IQR`.
    pub lower_fence: f64,
    /// `q3 + 1.5 * IQR`.
    pub upper_fence: f64,
    /// Lowest datum at or above the lower fence.
    pub whisker_low: f64,
    /// Highest datum at or below the upper fence.
    pub whisker_high: f64,
}

/// Linearly interpolated quantile of sorted data (the "type 7" rule).
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn aggregate_sweep_cell(values: &[f64]) -> Result<CellStats> {
    if values.is_empty() {
        return Err(Error::Empty {
            what: "cell aggregation",
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let lower_fence = q1 - 1.5 * iqr;
    let upper_fence = q3 + 1.5 * iqr;
    let whisker_low = *sorted.iter().find(|v| **v >= lower_fence).expect("q1 is within the fence");
    let whisker_high = *sorted
        .iter()
        .rev()
        .find(|v| **v <= upper_fence)
        .expect("q3 is within the fence");
    Ok(CellStats {
        mean,
        sd,
        q1,
        median,
        q3,
        lower_fence,
        upper_fence,
        whisker_low,
        whisker_high,
    })
}
