//! Projective simulation agent.
//!
//! Per step, with `s, a` the state and action just taken and `reward` in
//! `{0, 1}`:
//!
//! ```text
//! g <- (1 - eta) g;   g[s, a] <- max((1 - eta) g[s, a], 1)
//! h <- (1 - gamma) h + reward * g
//! ```
//!
//! Both tables are sparse. The global damping factors are kept as running
//! scalars (`stored * scale` is the true value), so a step costs time
//! proportional to the glow entries only when a reward arrives.

use std::collections::{BTreeMap, HashMap};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CostFunction, EvalRecord, OptimizeError, RunLog};
use crate::tanner::{StateKey, SwapAction, TannerState};

/// Below this a running scale is folded back into the stored values.
const RESCALE_BELOW: f64 = 1e-150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsConfig {
    /// Softmax inverse temperature.
    pub beta: f64,
    /// Forgetting rate applied to `h` every step.
    pub gamma: f64,
    /// Glow damping applied to `g` every step.
    pub eta: f64,
    /// Reward is 1 when the failure rate is strictly below this.
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsTrainConfig {
    pub episodes: usize,
    pub max_steps: usize,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
    pub theta: f64,
}

impl PsTrainConfig {
    pub fn agent(&self) -> PsConfig {
        PsConfig {
            beta: self.beta,
            gamma: self.gamma,
            eta: self.eta,
            theta: self.theta,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PsAgent {
    cfg: PsConfig,
    num_actions: usize,
    ids: HashMap<StateKey, usize>,
    h_rows: HashMap<usize, Vec<f64>>,
    h_scale: f64,
    glow: BTreeMap<(usize, usize), f64>,
    g_scale: f64,
}

impl PsAgent {
    pub fn new(cfg: PsConfig, num_actions: usize) -> Result<Self, OptimizeError> {
        let unit = 0.0..=1.0;
        if !unit.contains(&cfg.gamma) || !unit.contains(&cfg.eta) {
            return Err(OptimizeError::Config(
                "gamma and eta must lie in [0, 1]".into(),
            ));
        }
        if !cfg.beta.is_finite() || num_actions == 0 {
            return Err(OptimizeError::Config(
                "beta must be finite and the action space nonempty".into(),
            ));
        }
        Ok(Self {
            cfg,
            num_actions,
            ids: HashMap::new(),
            h_rows: HashMap::new(),
            h_scale: 1.0,
            glow: BTreeMap::new(),
            g_scale: 1.0,
        })
    }

    pub fn config(&self) -> &PsConfig {
        &self.cfg
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    /// Distinct states the agent has acted from.
    pub fn num_states(&self) -> usize {
        self.ids.len()
    }

    fn id(&mut self, key: &StateKey) -> usize {
        let next = self.ids.len();
        *self.ids.entry(key.clone()).or_insert(next)
    }

    pub fn h(&self, key: &StateKey, action: usize) -> f64 {
        self.ids
            .get(key)
            .and_then(|id| self.h_rows.get(id))
            .map_or(0.0, |row| row[action] * self.h_scale)
    }

    pub fn g(&self, key: &StateKey, action: usize) -> f64 {
        self.ids
            .get(key)
            .and_then(|&id| self.glow.get(&(id, action)))
            .map_or(0.0, |v| v * self.g_scale)
    }

    /// The state's row of `h`; all zeros for states never rewarded.
    pub fn h_row(&self, key: &StateKey) -> Vec<f64> {
        match self.ids.get(key).and_then(|id| self.h_rows.get(id)) {
            Some(row) => row.iter().map(|v| v * self.h_scale).collect(),
            None => vec![0.0; self.num_actions],
        }
    }

    /// Softmax of `beta * h` over the state's row.
    pub fn action_probabilities(&self, key: &StateKey) -> Vec<f64> {
        let row = self.h_row(key);
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = row
            .iter()
            .map(|h| (self.cfg.beta * (h - max)).exp())
            .collect();
        let total: f64 = weights.iter().sum();
        weights.into_iter().map(|w| w / total).collect()
    }

    pub fn select_action<R: Rng + ?Sized>(&self, key: &StateKey, rng: &mut R) -> usize {
        if self
            .ids
            .get(key)
            .is_none_or(|id| !self.h_rows.contains_key(id))
        {
            return rng.random_range(0..self.num_actions);
        }
        let probs = self.action_probabilities(key);
        WeightedIndex::new(&probs)
            .expect("softmax weights are positive and finite")
            .sample(rng)
    }

    /// One learning step after taking `action` in the state `key`.
    pub fn update(&mut self, key: &StateKey, action: usize, reward: f64) {
        assert!(action < self.num_actions);
        let id = self.id(key);

        self.g_scale *= 1.0 - self.cfg.eta;
        if self.g_scale == 0.0 {
            self.glow.clear();
            self.g_scale = 1.0;
        } else if self.g_scale < RESCALE_BELOW {
            let scale = self.g_scale;
            self.glow.values_mut().for_each(|v| *v *= scale);
            self.glow.retain(|_, v| *v != 0.0);
            self.g_scale = 1.0;
        }
        // damped glow never exceeds 1, so the max is always the fresh 1
        self.glow.insert((id, action), 1.0 / self.g_scale);

        self.h_scale *= 1.0 - self.cfg.gamma;
        if self.h_scale == 0.0 {
            self.h_rows.clear();
            self.h_scale = 1.0;
        } else if self.h_scale < RESCALE_BELOW {
            let scale = self.h_scale;
            self.h_rows
                .values_mut()
                .for_each(|row| row.iter_mut().for_each(|v| *v *= scale));
            self.h_scale = 1.0;
        }

        if reward != 0.0 {
            let factor = reward * self.g_scale / self.h_scale;
            for (&(state, a), &g) in &self.glow {
                let row = self
                    .h_rows
                    .entry(state)
                    .or_insert_with(|| vec![0.0; self.num_actions]);
                row[a] += factor * g;
            }
        }
    }
}

/// Result of [`ps_train`].
#[derive(Debug)]
pub struct PsOutcome {
    pub agent: PsAgent,
    /// Steps taken in each episode.
    pub episode_lengths: Vec<usize>,
}

/// Episodic training from a fixed start state.
///
/// Each step selects an action from the current state's policy, applies it,
/// evaluates the new state and rewards 1 if its failure rate is below
/// `theta`. An episode ends at the first reward or after `max_steps`; the
/// agent's tables persist across episodes. Every evaluation is logged, with
/// `accepted` marking rewarded steps.
pub fn ps_train<C: CostFunction>(
    start: &TannerState,
    agent: PsAgent,
    cfg: &PsTrainConfig,
    cost: &mut C,
    seed: u64,
    log: &mut RunLog,
) -> Result<PsOutcome, OptimizeError> {
    if cfg.episodes < 1 || cfg.max_steps < 1 {
        return Err(OptimizeError::Config(
            "episodes and max_steps must be at least 1".into(),
        ));
    }
    if agent.num_actions() != start.action_count() {
        return Err(OptimizeError::Config(format!(
            "agent has {} actions but the state has {}",
            agent.num_actions(),
            start.action_count()
        )));
    }
    let mut agent = agent;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slots = start.num_slots();
    let mut episode_lengths = Vec::with_capacity(cfg.episodes);
    let mut step = 0;
    for _ in 0..cfg.episodes {
        let mut current = start.clone();
        let mut length = 0;
        while length < cfg.max_steps {
            let key = current.canonical_key();
            let index = agent.select_action(&key, &mut rng);
            let action = SwapAction::from_index(index, slots);
            let next = current.apply_swap(action)?;
            let eval = cost.evaluate(&next)?;
            let rewarded = eval.rate() < agent.config().theta;
            agent.update(&key, index, if rewarded { 1.0 } else { 0.0 });
            log.push(
                EvalRecord::new(step, &next.canonical_key(), &eval, Some(action), rewarded),
                &next,
                &eval,
            )?;
            step += 1;
            length += 1;
            current = next;
            if rewarded {
                break;
            }
        }
        episode_lengths.push(length);
    }
    Ok(PsOutcome {
        agent,
        episode_lengths,
    })
}
