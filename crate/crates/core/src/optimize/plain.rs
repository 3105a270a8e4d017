use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CostFunction, EvalRecord, OptimizeError, RunLog};
use crate::tanner::TannerState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkPolicy {
    /// Move to a uniformly random evaluated neighbor.
    #[default]
    Random,
    /// Move to the evaluated neighbor with the lowest cost.
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlainConfig {
    /// States evaluated per step: the current one plus `sample_width - 1`
    /// random neighbors.
    pub sample_width: usize,
    pub walk_length: usize,
    #[serde(default)]
    pub walk_policy: WalkPolicy,
}

/// Random walk that scores the current state and `sample_width - 1` random
/// neighbors at every step, for `sample_width * walk_length` evaluations in
/// total.
pub fn plain_exploration<C: CostFunction>(
    start: &TannerState,
    cfg: &PlainConfig,
    cost: &mut C,
    seed: u64,
    log: &mut RunLog,
) -> Result<(), OptimizeError> {
    if cfg.sample_width < 2 {
        return Err(OptimizeError::Config(
            "sample_width must be at least 2".into(),
        ));
    }
    if cfg.walk_length < 1 {
        return Err(OptimizeError::Config(
            "walk_length must be at least 1".into(),
        ));
    }
    if start.action_count() == 0 {
        return Err(OptimizeError::Config(
            "state needs at least two edge slots".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = start.clone();
    for step in 0..cfg.walk_length {
        let here = cost.evaluate(&current)?;
        let mut batch = Vec::with_capacity(cfg.sample_width);
        for _ in 1..cfg.sample_width {
            let action = current.random_action(&mut rng);
            let next = current.apply_swap(action)?;
            let eval = cost.evaluate(&next)?;
            batch.push((action, next, eval));
        }
        let chosen = match cfg.walk_policy {
            WalkPolicy::Random => rng.random_range(0..batch.len()),
            WalkPolicy::Greedy => {
                let mut best = 0;
                for (i, (_, _, e)) in batch.iter().enumerate() {
                    if e.log_cost() < batch[best].2.log_cost() {
                        best = i;
                    }
                }
                best
            }
        };

        let key = current.canonical_key();
        log.push(
            EvalRecord::new(step, &key, &here, None, false),
            &current,
            &here,
        )?;
        for (i, (action, next, eval)) in batch.iter().enumerate() {
            let record = EvalRecord::new(
                step,
                &next.canonical_key(),
                eval,
                Some(*action),
                i == chosen,
            );
            log.push(record, next, eval)?;
        }
        current = batch.swap_remove(chosen).1;
    }
    Ok(())
}
