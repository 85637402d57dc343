//! The step engine.
//!
//! A run is a Markov chain driven by one seeded `ChaCha8Rng`. The initial
//! population is drawn first, then each step consumes draws in this order:
//!
//! 1. the self-interest coin (only when `self_interest_prob > 0`),
//! 2. the active actor index,
//! 3. the passive actor index, redrawn until it differs from the active one,
//! 4. the interaction coin,
//! 5. the repulsion coin (only for the stochastic rule with finite steepness).
//!
//! Shock steps draw nothing. A step counts toward `max_steps` whatever
//! happens during it. Steps are numbered from 1; "the population at step s"
//! means the state after `s` steps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Rule, SimConfig};
use crate::error::Result;
use crate::init::initialize;
use crate::interventions::{self_interest_in_place, shock_step, ShockState};
use crate::metrics::polarization_trace;
use crate::model::{Population, Position};
use crate::rules::{distance, respond_in_place, sar_repulsion_probability, scaled_distance, Response};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// No distinct partner exists, or the interaction coin came up tails.
    NoInteraction,
    Attracted { partner: usize },
    Repulsed { partner: usize },
    SelfInterest,
    ShockApplied,
}

impl StepKind {
    pub fn moved_toward_or_away(&self) -> bool {
        matches!(self, StepKind::Attracted { .. } | StepKind::Repulsed { .. })
    }
}

/// What happened on one step. `new_position` is the active actor's position
/// after the step (unchanged for [`StepKind::NoInteraction`]).
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    pub active_index: usize,
    pub kind: StepKind,
    pub new_position: Position,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPoint {
    pub step: u64,
    pub polarization: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub population: Population,
}

/// Polarization time series plus position snapshots of one run.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TrajectoryRecord {
    pub series: Vec<SeriesPoint>,
    pub snapshots: Vec<Snapshot>,
}

impl TrajectoryRecord {
    pub fn final_polarization(&self) -> Option<f64> {
        self.series.last().map(|p| p.polarization)
    }

    /// First recorded step whose polarization reaches `level`.
    pub fn first_step_reaching(&self, level: f64) -> Option<u64> {
        self.series.iter().find(|p| p.polarization >= level).map(|p| p.step)
    }
}

pub struct Engine {
    cfg: SimConfig,
    pop: Population,
    rng: ChaCha8Rng,
    steps: u64,
    shock: Option<ShockState>,
    inv_exposure: Vec<f64>,
    partner_buf: Vec<f64>,
}

impl Engine {
    /// Validates `cfg`, seeds the generator from `cfg.seed` and draws the
    /// initial population.
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let pop = initialize(cfg, &mut rng)?;
        Ok(Self::assemble(cfg, pop, rng))
    }

    /// Starts from a given population instead of `cfg.initializer`.
    pub fn with_population(cfg: &SimConfig, pop: Population) -> Result<Self> {
        cfg.validate()?;
        if pop.len() != cfg.n_actors || pop.dims() != cfg.n_dims {
            return Err(crate::error::Error::config(
                "population",
                format!(
                    "{} actor(s) in {} dimension(s) do not match the configuration",
                    pop.len(),
                    pop.dims()
                ),
            ));
        }
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Self::assemble(cfg, pop, rng))
    }

    fn assemble(cfg: &SimConfig, pop: Population, rng: ChaCha8Rng) -> Self {
        Engine {
            shock: cfg
                .shock
                .as_ref()
                .map(|s| ShockState::new(s.strength.clone(), s.at_step)),
            inv_exposure: cfg.exposure.iter().map(|e| e.recip()).collect(),
            partner_buf: vec![0.0; cfg.n_dims],
            cfg: cfg.clone(),
            pop,
            rng,
            steps: 0,
        }
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn population(&self) -> &Population {
        &self.pop
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps
    }

    pub fn is_finished(&self) -> bool {
        self.steps >= self.cfg.max_steps
    }

    pub fn polarization(&self) -> f64 {
        polarization_trace(&self.pop)
    }

    pub fn shock_state(&self) -> Option<&ShockState> {
        self.shock.as_ref()
    }

    /// Executes one step. Steps past `max_steps` are allowed; callers that
    /// honor the budget check [`Engine::is_finished`].
    pub fn step(&mut self) -> StepOutcome {
        let (active_index, kind) = self.step_inner();
        StepOutcome {
            active_index,
            kind,
            new_position: Position::from(self.pop.position(active_index)),
        }
    }

    /// Executes `n` steps without building outcomes.
    pub fn advance(&mut self, n: u64) {
        for _ in 0..n {
            self.step_inner();
        }
    }

    #[inline]
    fn step_inner(&mut self) -> (usize, StepKind) {
        self.steps += 1;
        let n = self.pop.len();

        if let Some(shock) = &mut self.shock {
            if shock.covers(self.steps, n) {
                if let Some(actor) = shock_step(&mut self.pop, shock) {
                    return (actor, StepKind::ShockApplied);
                }
            }
        }

        let p = self.cfg.self_interest_prob;
        let self_interested = p > 0.0 && self.rng.random::<f64>() < p;
        let active = self.rng.random_range(0..n);
        if self_interested {
            let dims = self.pop.dims();
            self.partner_buf
                .copy_from_slice(&self.pop.preferred_flat()[active * dims..(active + 1) * dims]);
            self_interest_in_place(
                self.pop.position_mut(active),
                &self.partner_buf,
                self.cfg.responsiveness,
            );
            return (active, StepKind::SelfInterest);
        }

        if n == 1 {
            return (active, StepKind::NoInteraction);
        }
        let passive = loop {
            let candidate = self.rng.random_range(0..n);
            if candidate != active {
                break candidate;
            }
        };

        self.partner_buf.copy_from_slice(self.pop.position(passive));
        let here = self.pop.position(active);
        let meet = (-scaled_distance(here, &self.partner_buf, &self.inv_exposure)).exp2();
        if !(self.rng.random::<f64>() < meet) {
            return (active, StepKind::NoInteraction);
        }

        let d = distance(here, &self.partner_buf);
        let response = match self.cfg.rule {
            Rule::Sar { steepness } if steepness.is_finite() => {
                let f = sar_repulsion_probability(d, steepness, self.cfg.tolerance, self.cfg.n_dims);
                if self.rng.random::<f64>() < f {
                    Response::Repulse
                } else {
                    Response::Attract
                }
            }
            _ if d <= self.cfg.tolerance => Response::Attract,
            _ => Response::Repulse,
        };
        respond_in_place(
            self.pop.position_mut(active),
            &self.partner_buf,
            self.cfg.responsiveness,
            response,
        );
        let kind = match response {
            Response::Attract => StepKind::Attracted { partner: passive },
            Response::Repulse => StepKind::Repulsed { partner: passive },
        };
        (active, kind)
    }

    /// Runs the remaining steps up to `max_steps`, recording polarization at
    /// step 0 (or the current step), every `record_every` steps and at the
    /// final step, plus snapshots at `snapshot_steps`.
    pub fn run(&mut self) -> TrajectoryRecord {
        let max = self.cfg.max_steps;
        let every = self.cfg.record_every;
        let mut snaps: Vec<u64> = self
            .cfg
            .snapshot_steps
            .iter()
            .copied()
            .filter(|s| *s >= self.steps)
            .collect();
        snaps.sort_unstable();
        snaps.dedup();
        let mut snaps = snaps.into_iter().peekable();

        let mut record = TrajectoryRecord::default();
        loop {
            let now = self.steps;
            if now % every == 0 || now == max || record.series.is_empty() {
                record.series.push(SeriesPoint {
                    step: now,
                    polarization: self.polarization(),
                });
            }
            if snaps.next_if_eq(&now).is_some() {
                record.snapshots.push(Snapshot {
                    step: now,
                    population: self.pop.clone(),
                });
            }
            if now >= max {
                break;
            }
            let next_record = (now / every + 1) * every;
            let next = snaps.peek().copied().unwrap_or(max).min(next_record).min(max);
            self.advance(next - now);
        }
        record
    }

    /// Runs to `max_steps` and returns the final polarization.
    pub fn run_to_end(&mut self) -> f64 {
        let remaining = self.cfg.max_steps.saturating_sub(self.steps);
        self.advance(remaining);
        self.polarization()
    }
}

/// Builds an engine from `cfg` and runs it to completion with recording.
pub fn simulate(cfg: &SimConfig) -> Result<TrajectoryRecord> {
    Ok(Engine::new(cfg)?.run())
}

/// Builds an engine from `cfg` and returns its polarization at `max_steps`.
pub fn final_polarization(cfg: &SimConfig) -> Result<f64> {
    Ok(Engine::new(cfg)?.run_to_end())
}
