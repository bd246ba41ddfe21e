use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{decide_with, field, ModelSpec, NetworkState, UpdateDecision};
use crate::error::{Error, Result};
use crate::expsum::Sign;
use crate::seed::SeedSpec;

/// Visiting order for an asynchronous pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOrder {
    Sequential,
    RandomPermutation(SeedSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    /// All neurons decided from the same configuration, then applied.
    Synchronous,
    Asynchronous(UpdateOrder),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    FixedPoint,
    /// Synchronous iteration returned to the state of two steps earlier.
    Cycle,
    PassLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPointRun {
    pub passes_used: usize,
    pub converged: bool,
    pub stop: StopReason,
    pub total_flips: usize,
}

#[cfg(feature = "parallel")]
const PARALLEL_WORK_THRESHOLD: usize = 1 << 18;

/// Decisions for every neuron from the current configuration.
pub fn synchronous_decisions(state: &NetworkState<'_>, model: &ModelSpec) -> Result<Vec<UpdateDecision>> {
    let n = state.n_neurons();
    #[cfg(feature = "parallel")]
    if n * state.store().n_patterns() >= PARALLEL_WORK_THRESHOLD {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .map_init(|| field::exp_sum_for(state), |scratch, i| decide_with(state, i, model, scratch))
            .collect();
    }
    let mut scratch = field::exp_sum_for(state);
    (0..n).map(|i| decide_with(state, i, model, &mut scratch)).collect()
}

/// Applies decisions made against the current configuration. Counts ties and
/// returns the number of flipped neurons.
pub fn apply_decisions(state: &mut NetworkState<'_>, decisions: &[UpdateDecision]) -> Result<usize> {
    let mut changed = 0;
    for d in decisions {
        if d.delta_sign == Sign::Zero {
            state.record_tie();
        }
        if state.set_spin(d.neuron, d.new_value)? {
            changed += 1;
        }
    }
    Ok(changed)
}

/// One synchronous step; returns the number of flipped neurons.
pub fn synchronous_step(state: &mut NetworkState<'_>, model: &ModelSpec) -> Result<usize> {
    let decisions = synchronous_decisions(state, model)?;
    apply_decisions(state, &decisions)
}

/// One asynchronous pass over all neurons, each decided from the partially
/// updated configuration. Returns the number of flips.
pub fn asynchronous_pass(state: &mut NetworkState<'_>, model: &ModelSpec, order: UpdateOrder) -> Result<usize> {
    let mut indices: Vec<usize> = (0..state.n_neurons()).collect();
    if let UpdateOrder::RandomPermutation(seed) = order {
        indices.shuffle(&mut seed.rng());
    }
    let mut scratch = field::exp_sum_for(state);
    let mut changed = 0;
    for i in indices {
        let d = decide_with(state, i, model, &mut scratch)?;
        if d.delta_sign == Sign::Zero {
            state.record_tie();
        }
        if state.set_spin(i, d.new_value)? {
            changed += 1;
        }
    }
    Ok(changed)
}

/// Repeats steps or passes until nothing flips, a synchronous 2-cycle is
/// detected, or `max_passes` is reached.
pub fn run_to_fixed_point(
    state: &mut NetworkState<'_>,
    model: &ModelSpec,
    scheduler: Scheduler,
    max_passes: usize,
) -> Result<FixedPointRun> {
    if max_passes == 0 {
        return Err(Error::InvalidArgument("max_passes must be at least 1".into()));
    }
    let mut total_flips = 0;
    let mut two_back = None;
    for pass in 1..=max_passes {
        let changed = match scheduler {
            Scheduler::Synchronous => {
                let before = state.sigma().clone();
                let changed = synchronous_step(state, model)?;
                if changed > 0 && two_back.as_ref() == Some(state.sigma()) {
                    return Ok(FixedPointRun {
                        passes_used: pass,
                        converged: false,
                        stop: StopReason::Cycle,
                        total_flips: total_flips + changed,
                    });
                }
                two_back = Some(before);
                changed
            }
            Scheduler::Asynchronous(order) => {
                let order = match order {
                    UpdateOrder::RandomPermutation(seed) => UpdateOrder::RandomPermutation(SeedSpec::new(
                        seed.derived_seed(),
                        "async-pass",
                        pass as u64,
                    )),
                    UpdateOrder::Sequential => UpdateOrder::Sequential,
                };
                asynchronous_pass(state, model, order)?
            }
        };
        total_flips += changed;
        if changed == 0 {
            return Ok(FixedPointRun {
                passes_used: pass,
                converged: true,
                stop: StopReason::FixedPoint,
                total_flips,
            });
        }
    }
    Ok(FixedPointRun {
        passes_used: max_passes,
        converged: false,
        stop: StopReason::PassLimit,
        total_flips,
    })
}
