//! The interaction rule and the attraction-repulsion update rules.
//!
//! These are the pure per-pair functions; [`crate::engine`] wires them into
//! the step loop.

use crate::error::{Error, Result};
use crate::model::Position;

/// Euclidean distance between two positions of equal dimension.
#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Probability that two actors `distance` apart interact, `(1/2)^(d/E)`.
///
/// `exposure` is the halving distance: actors exactly `exposure` apart meet
/// half the time.
pub fn interaction_probability(distance: f64, exposure: f64) -> Result<f64> {
    if !(exposure > 0.0 && exposure.is_finite()) {
        return Err(Error::config("exposure", format!("must be positive, got {exposure}")));
    }
    if !(distance >= 0.0) {
        return Err(Error::config("distance", format!("must be nonnegative, got {distance}")));
    }
    Ok((-(distance / exposure)).exp2())
}

/// Exposure-scaled distance `sqrt(sum((a_i - b_i)^2 / E_i^2))`, written
/// with precomputed reciprocal exposures.
#[inline]
pub(crate) fn scaled_distance(a: &[f64], b: &[f64], inv_exposure: &[f64]) -> f64 {
    if a.len() == 1 {
        return (a[0] - b[0]).abs() * inv_exposure[0];
    }
    a.iter()
        .zip(b)
        .zip(inv_exposure)
        .map(|((x, y), w)| {
            let z = (x - y) * w;
            z * z
        })
        .sum::<f64>()
        .sqrt()
}

/// Multi-dimensional interaction probability `(1/2)^delta`, where `delta` is
/// the Euclidean distance after dividing each axis by its exposure.
pub fn interaction_probability_multi(a: &[f64], b: &[f64], exposures: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() != exposures.len() {
        return Err(Error::config(
            "exposure",
            format!(
                "dimension mismatch: positions have {} and {} coordinates, {} exposures given",
                a.len(),
                b.len(),
                exposures.len()
            ),
        ));
    }
    if let Some(e) = exposures.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::config("exposure", format!("must be positive, got {e}")));
    }
    let inv: Vec<f64> = exposures.iter().map(|e| e.recip()).collect();
    Ok((-scaled_distance(a, b, &inv)).exp2())
}

/// Which way an interaction pushed the active actor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Response {
    Attract,
    Repulse,
}

/// Moves `active` a fraction `responsiveness` of the way toward (attract) or
/// away from (repulse) `passive`, clamping every coordinate to `[0, 1]`.
#[inline]
pub(crate) fn respond_in_place(
    active: &mut [f64],
    passive: &[f64],
    responsiveness: f64,
    response: Response,
) {
    let r = match response {
        Response::Attract => responsiveness,
        Response::Repulse => -responsiveness,
    };
    for (x, y) in active.iter_mut().zip(passive) {
        *x = (*x + r * (y - *x)).clamp(0.0, 1.0);
    }
}

/// Deterministic attraction-repulsion update of the active actor.
///
/// Attracts when the pair is at most `tolerance` apart, repulses otherwise.
/// The passive actor is not touched.
pub fn apply_ar(active: &[f64], passive: &[f64], tolerance: f64, responsiveness: f64) -> Position {
    let response = if distance(active, passive) <= tolerance {
        Response::Attract
    } else {
        Response::Repulse
    };
    let mut out = Position::from(active);
    respond_in_place(out.coords_mut(), passive, responsiveness, response);
    out
}

/// Probability of repulsion under the stochastic attraction-repulsion rule,
///
/// ```text
/// f(d) = 1 / (1 + ((sqrt(D)/d - 1) / (sqrt(D)/T - 1))^k)
/// ```
///
/// `f(T) = 1/2`, `f(sqrt(D)) = 1` and `f -> 0` as `d -> 0`; zero distance
/// returns the limit. An infinite `steepness` gives the step function used
/// by the deterministic rule.
pub fn sar_repulsion_probability(distance: f64, steepness: f64, tolerance: f64, dims: usize) -> f64 {
    if steepness.is_infinite() {
        return if distance <= tolerance { 0.0 } else { 1.0 };
    }
    if distance <= 0.0 {
        return 0.0;
    }
    let diag = (dims as f64).sqrt();
    let ratio = (diag / distance - 1.0) / (diag / tolerance - 1.0);
    if ratio <= 0.0 {
        return 1.0;
    }
    1.0 / (1.0 + ratio.powf(steepness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn interaction_probability_halving_examples() {
        assert_eq!(interaction_probability(0.1, 0.1).unwrap(), 0.5);
        assert_eq!(interaction_probability(0.0, 0.1).unwrap(), 1.0);
        assert_abs_diff_eq!(interaction_probability(0.2, 0.1).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(
            interaction_probability(0.05, 0.1).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn interaction_probability_rejects_bad_exposure() {
        assert!(interaction_probability(0.1, 0.0).unwrap_err().is_config());
        assert!(interaction_probability(0.1, -1.0).is_err());
        assert!(interaction_probability(-0.1, 0.1).is_err());
    }

    #[test]
    fn multi_dimensional_probability() {
        let p = interaction_probability_multi(&[0.0, 0.0], &[0.0, 0.0], &[0.1, 0.1]).unwrap();
        assert_eq!(p, 1.0);
        let p = interaction_probability_multi(&[0.1, 0.0], &[0.0, 0.0], &[0.1, 0.5]).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-15);
        // delta = sqrt(1 + 1)
        let p = interaction_probability_multi(&[0.1, 0.1], &[0.0, 0.0], &[0.1, 0.1]).unwrap();
        assert_abs_diff_eq!(p, 0.5f64.powf(2f64.sqrt()), epsilon = 1e-12);
        assert_abs_diff_eq!(p, 0.375214227246, epsilon = 1e-12);
    }

    #[test]
    fn multi_reduces_to_scalar_in_one_dimension() {
        for &(x, y, e) in &[(0.3, 0.7, 0.1), (0.0, 1.0, 0.45), (0.5, 0.5, 0.2)] {
            let multi = interaction_probability_multi(&[x], &[y], &[e]).unwrap();
            let single = interaction_probability((x - y).abs(), e).unwrap();
            assert_eq!(multi, single);
        }
    }

    #[test]
    fn multi_rejects_dimension_mismatch() {
        let err = interaction_probability_multi(&[0.1, 0.2], &[0.0], &[0.1, 0.1]).unwrap_err();
        assert!(err.is_config());
        assert!(interaction_probability_multi(&[0.1], &[0.0], &[0.1, 0.1]).is_err());
    }

    #[test]
    fn ar_worked_examples() {
        assert_abs_diff_eq!(apply_ar(&[0.4], &[0.5], 0.15, 0.25)[0], 0.425, epsilon = 1e-12);
        assert_abs_diff_eq!(apply_ar(&[0.4], &[0.1], 0.15, 0.25)[0], 0.475, epsilon = 1e-12);
        // repulsion target 1.15 clamps to the boundary
        assert_eq!(apply_ar(&[0.9], &[0.4], 0.25, 0.5)[0], 1.0);
        assert_eq!(apply_ar(&[0.7], &[0.7], 0.1, 0.5)[0], 0.7);
    }

    #[test]
    fn tolerance_boundary_attracts() {
        // distance exactly equal to the tolerance
        let out = apply_ar(&[0.5], &[0.75], 0.25, 0.5);
        assert!(out[0] > 0.5);
    }

    #[test]
    fn sar_examples() {
        assert_eq!(sar_repulsion_probability(0.25, 4.0, 0.25, 1), 0.5);
        assert_eq!(sar_repulsion_probability(1.0, 4.0, 0.25, 1), 1.0);
        assert_eq!(sar_repulsion_probability(0.5, f64::INFINITY, 0.25, 1), 1.0);
        assert_eq!(sar_repulsion_probability(0.25, f64::INFINITY, 0.25, 1), 0.0);
        assert_abs_diff_eq!(sar_repulsion_probability(0.5, 2.0, 0.25, 1), 0.9, epsilon = 1e-12);
        assert_eq!(sar_repulsion_probability(0.0, 2.0, 0.25, 1), 0.0);
        assert_eq!(sar_repulsion_probability(2f64.sqrt(), 8.0, 0.4, 2), 1.0);
    }

    #[test]
    fn sar_is_monotone() {
        let mut prev = 0.0;
        for i in 1..=1000 {
            let d = i as f64 / 1000.0;
            let f = sar_repulsion_probability(d, 3.0, 0.3, 1);
            assert!(f >= prev, "f({d}) = {f} < {prev}");
            prev = f;
        }
    }
}
