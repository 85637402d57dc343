//! Exogenous mechanisms layered on the step loop: attraction toward an
//! actor's preferred position, and a population-wide shock applied one
//! actor per step.

use crate::model::{Population, Position};

/// Moves `active` a fraction `responsiveness` of the way toward `preferred`.
pub fn self_interest_move(active: &[f64], preferred: &[f64], responsiveness: f64) -> Position {
    let mut out = Position::from(active);
    self_interest_in_place(out.coords_mut(), preferred, responsiveness);
    out
}

#[inline]
pub(crate) fn self_interest_in_place(active: &mut [f64], preferred: &[f64], responsiveness: f64) {
    for (x, x0) in active.iter_mut().zip(preferred) {
        *x = (*x + responsiveness * (x0 - *x)).clamp(0.0, 1.0);
    }
}

/// Progress through a shock window. Actor `next_actor` receives the shift on
/// step `start_step + next_actor`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShockState {
    pub strength: Vec<f64>,
    pub start_step: u64,
    pub next_actor: usize,
}

impl ShockState {
    pub fn new(strength: Vec<f64>, start_step: u64) -> Self {
        ShockState {
            strength,
            start_step,
            next_actor: 0,
        }
    }

    pub fn is_complete(&self, n_actors: usize) -> bool {
        self.next_actor >= n_actors
    }

    /// Whether the step numbered `step` (1-based) belongs to the shock window.
    pub fn covers(&self, step: u64, n_actors: usize) -> bool {
        step >= self.start_step && step < self.start_step + n_actors as u64
    }
}

/// Shifts the next actor in the shock window by the shock strength, clamped
/// to `[0, 1]`, and advances the cursor. Returns the shifted actor's index,
/// or `None` once every actor has been shifted.
pub fn shock_step(pop: &mut Population, shock: &mut ShockState) -> Option<usize> {
    if shock.is_complete(pop.len()) {
        return None;
    }
    let actor = shock.next_actor;
    for (x, d) in pop.position_mut(actor).iter_mut().zip(&shock.strength) {
        *x = (*x + d).clamp(0.0, 1.0);
    }
    shock.next_actor += 1;
    Some(actor)
}
