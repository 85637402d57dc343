//! Randomized configurations and the invariants every step must satisfy.

#![allow(dead_code)]

use arm_core::rules::{distance, interaction_probability, sar_repulsion_probability};
use arm_core::{polarization_trace, Engine, Rule, ShockConfig, SimConfig, StepKind};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const STEPS_PER_CASE: u64 = 400;

pub fn arb_rule() -> impl Strategy<Value = Rule> {
    prop_oneof![
        Just(Rule::Ar),
        prop::sample::select(vec![1.5, 2.0, 4.0, 8.0, 64.0, f64::INFINITY])
            .prop_map(|k| Rule::Sar { steepness: k }),
    ]
}

/// Valid configurations across dimensions, rules, self-interest and shocks.
pub fn arb_config() -> impl Strategy<Value = SimConfig> {
    (1usize..=3)
        .prop_flat_map(|dims| {
            let diag = (dims as f64).sqrt();
            (
                Just(dims),
                1usize..40,
                0.01..diag - 0.01,
                0.01f64..=1.0,
                prop::collection::vec(0.01f64..1.0, dims),
                arb_rule(),
                prop_oneof![Just(0.0), 0.0f64..=1.0],
                prop::option::of(prop::collection::vec(-1.0f64..=1.0, dims)),
                0.0f64..=0.6,
                any::<u64>(),
            )
        })
        .prop_map(
            |(dims, n, tolerance, responsiveness, exposure, rule, p, shock, sigma, seed)| {
                let shock = shock.map(|strength| ShockConfig {
                    strength,
                    at_step: 1 + seed % (STEPS_PER_CASE - n as u64),
                });
                SimConfig {
                    n_actors: n,
                    tolerance,
                    responsiveness,
                    exposure,
                    rule,
                    self_interest_prob: p,
                    shock,
                    initializer: arm_core::Initializer::Normal { mean: 0.5, sigma },
                    max_steps: STEPS_PER_CASE,
                    seed,
                    ..SimConfig::with_dims(dims)
                }
            },
        )
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// Steps `cfg` to its horizon, checking after every step that
/// - every coordinate stays in `[0, 1]` (boundedness),
/// - only the active actor moved (passive immutability),
/// - repulsion never brings the active actor closer to its partner,
/// - attraction lands each coordinate between the old value and the partner's,
/// - polarization never exceeds `0.25 * D`.
pub fn check_run(cfg: &SimConfig) -> Result<(), TestCaseError> {
    let mut engine = Engine::new(cfg).map_err(|e| fail(e.to_string()))?;
    let dims = cfg.n_dims;
    let bound = 0.25 * dims as f64 + 1e-12;
    for _ in 0..cfg.max_steps {
        let before = engine.population().flat().to_vec();
        let out = engine.step();
        let after = engine.population().flat();
        let a = out.active_index;
        if let Some(x) = after.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(fail(format!("coordinate {x} left the unit interval")));
        }
        if out.kind != StepKind::ShockApplied {
            for (i, (b, c)) in before.chunks(dims).zip(after.chunks(dims)).enumerate() {
                if i != a && b != c {
                    return Err(fail(format!("actor {i} moved while {a} was active")));
                }
            }
        }
        let old = &before[a * dims..(a + 1) * dims];
        let new = &after[a * dims..(a + 1) * dims];
        match out.kind {
            StepKind::Repulsed { partner } => {
                let y = &before[partner * dims..(partner + 1) * dims];
                if distance(new, y) + 1e-12 < distance(old, y) {
                    return Err(fail("repulsion reduced the distance".into()));
                }
            }
            StepKind::Attracted { partner } => {
                let y = &before[partner * dims..(partner + 1) * dims];
                for ((o, n), y) in old.iter().zip(new).zip(y) {
                    let (lo, hi) = if o <= y { (o, y) } else { (y, o) };
                    if n < lo || n > hi {
                        return Err(fail(format!("attraction moved {o} to {n}, outside [{lo}, {hi}]")));
                    }
                }
            }
            StepKind::NoInteraction if old != new => {
                return Err(fail("position changed without an interaction".into()));
            }
            _ => {}
        }
        let v = polarization_trace(engine.population());
        if v > bound {
            return Err(fail(format!("polarization {v} exceeds {bound}")));
        }
    }
    Ok(())
}

/// `(1/2)^(d/E)` halves for each additional `E` of distance.
pub fn check_halving(d: f64, e: f64) -> Result<(), TestCaseError> {
    let p = interaction_probability(d, e).map_err(|x| fail(x.to_string()))?;
    let q = interaction_probability(d + e, e).map_err(|x| fail(x.to_string()))?;
    let at_e = interaction_probability(e, e).map_err(|x| fail(x.to_string()))?;
    if (q - 0.5 * p).abs() > 1e-12 * p.max(1e-300) || (at_e - 0.5).abs() > 1e-15 {
        return Err(fail(format!("halving law broken at d={d}, E={e}")));
    }
    Ok(())
}

/// `f(T) = 1/2` and `f(sqrt(D)) = 1` for every finite steepness.
pub fn check_sar_endpoints(k: f64, t_frac: f64, dims: usize) -> Result<(), TestCaseError> {
    let diag = (dims as f64).sqrt();
    let t = t_frac * diag;
    let mid = sar_repulsion_probability(t, k, t, dims);
    let end = sar_repulsion_probability(diag, k, t, dims);
    if (mid - 0.5).abs() > 1e-12 || (end - 1.0).abs() > 1e-12 {
        return Err(fail(format!("f(T)={mid}, f(sqrt D)={end} for k={k}, T={t}, D={dims}")));
    }
    Ok(())
}
