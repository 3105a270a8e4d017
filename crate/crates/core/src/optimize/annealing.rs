use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CostFunction, EvalRecord, OptimizeError, RunLog};
use crate::tanner::TannerState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaConfig {
    pub t_max: usize,
    /// Schedule parameter: `T = 1 / (1 + beta (t / t_max)^2)`.
    pub beta: f64,
}

/// `1 / (1 + beta (t / t_max)^2)`.
pub fn sa_temperature(t: usize, t_max: usize, beta: f64) -> f64 {
    assert!(t_max >= 1, "t_max must be at least 1");
    let x = t as f64 / t_max as f64;
    1.0 / (1.0 + beta * x * x)
}

/// Improvements (`delta <= 0`) are always accepted, otherwise
/// `exp(-delta / temperature)`.
pub fn sa_accept_probability(delta: f64, temperature: f64) -> f64 {
    assert!(temperature > 0.0, "temperature must be positive");
    if delta <= 0.0 {
        1.0
    } else {
        (-delta / temperature).exp()
    }
}

/// Simulated annealing on `log10` of the clamped failure rate.
///
/// The start state is evaluated once (step 0), then each iteration
/// `t = 1..=t_max` proposes one random swap. The current state's cost is
/// reused, so a run makes `t_max + 1` evaluations.
pub fn simulated_annealing<C: CostFunction>(
    start: &TannerState,
    cfg: &SaConfig,
    cost: &mut C,
    seed: u64,
    log: &mut RunLog,
) -> Result<(), OptimizeError> {
    if cfg.t_max < 1 {
        return Err(OptimizeError::Config("t_max must be at least 1".into()));
    }
    if cfg.beta.is_nan() || cfg.beta < 0.0 {
        return Err(OptimizeError::Config("beta must be non-negative".into()));
    }
    if start.action_count() == 0 {
        return Err(OptimizeError::Config(
            "state needs at least two edge slots".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = start.clone();
    let mut current_eval = cost.evaluate(&current)?;
    log.push(
        EvalRecord::new(0, &current.canonical_key(), &current_eval, None, true),
        &current,
        &current_eval,
    )?;
    for t in 1..=cfg.t_max {
        let action = current.random_action(&mut rng);
        let next = current.apply_swap(action)?;
        let eval = cost.evaluate(&next)?;
        let delta = eval.log_cost() - current_eval.log_cost();
        let temperature = sa_temperature(t, cfg.t_max, cfg.beta);
        let accepted = rng.random::<f64>() < sa_accept_probability(delta, temperature);
        log.push(
            EvalRecord::new(t, &next.canonical_key(), &eval, Some(action), accepted),
            &next,
            &eval,
        )?;
        if accepted {
            current = next;
            current_eval = eval;
        }
    }
    Ok(())
}
