//! Search over Tanner graphs with the erasure failure rate as cost.
//!
//! Three strategies share the same plumbing: a [`CostFunction`] that maps a
//! state to an [`Evaluation`] and a [`RunLog`] that records every evaluation
//! and tracks the best state seen.

mod annealing;
mod plain;
mod ps;

use std::collections::HashMap;
use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::erasure::{estimate_with_checker, CorrectabilityChecker, CostEstimate, ErasureError};
use crate::hgp::{build_hgp, HgpError};
use crate::seed::derive_seed;
use crate::tanner::{Edge, StateKey, SwapAction, TannerError, TannerState};

pub use annealing::{sa_accept_probability, sa_temperature, simulated_annealing, SaConfig};
pub use plain::{plain_exploration, PlainConfig, WalkPolicy};
pub use ps::{ps_train, PsAgent, PsConfig, PsOutcome, PsTrainConfig};

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Tanner(#[from] TannerError),
    #[error(transparent)]
    Hgp(#[from] HgpError),
    #[error(transparent)]
    Erasure(#[from] ErasureError),
    #[error("writing run log: {0}")]
    Sink(#[from] io::Error),
}

/// Cost of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub estimate: CostEstimate,
    /// Logical qubits of the code built from the collapsed matrix. Parallel
    /// edges can lower the classical rank and inflate this.
    pub num_logical: usize,
}

impl Evaluation {
    pub fn rate(&self) -> f64 {
        self.estimate.rate
    }

    /// `log10` of the clamped rate, always finite.
    pub fn log_cost(&self) -> f64 {
        self.estimate.clamped_rate().log10()
    }
}

pub trait CostFunction {
    fn evaluate(&mut self, state: &TannerState) -> Result<Evaluation, OptimizeError>;
}

/// Monte Carlo failure rate, memoized by canonical state key.
///
/// Each state is sampled with a seed derived from the master seed and the
/// state's fingerprint, so a state's cost does not depend on when it is
/// first visited.
#[derive(Debug)]
pub struct MonteCarloCost {
    erasure_prob: f64,
    trials: u64,
    seed: u64,
    cache: HashMap<StateKey, Evaluation>,
    computed: usize,
}

impl MonteCarloCost {
    pub fn new(erasure_prob: f64, trials: u64, seed: u64) -> Result<Self, OptimizeError> {
        if !(0.0..=1.0).contains(&erasure_prob) {
            return Err(ErasureError::InvalidProbability(erasure_prob).into());
        }
        if trials == 0 {
            return Err(ErasureError::NoTrials.into());
        }
        Ok(Self {
            erasure_prob,
            trials,
            seed,
            cache: HashMap::new(),
            computed: 0,
        })
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn erasure_prob(&self) -> f64 {
        self.erasure_prob
    }

    /// Number of distinct states actually sampled.
    pub fn computed(&self) -> usize {
        self.computed
    }
}

impl CostFunction for MonteCarloCost {
    fn evaluate(&mut self, state: &TannerState) -> Result<Evaluation, OptimizeError> {
        let key = state.canonical_key();
        if let Some(hit) = self.cache.get(&key) {
            return Ok(*hit);
        }
        let code = build_hgp(&state.binary_matrix())?;
        let checker = CorrectabilityChecker::new(&code);
        let seed = derive_seed(self.seed, key.digest());
        let evaluation = Evaluation {
            estimate: estimate_with_checker(&checker, self.erasure_prob, self.trials, seed),
            num_logical: code.num_logical(),
        };
        self.computed += 1;
        self.cache.insert(key, evaluation);
        Ok(evaluation)
    }
}

/// One line of a run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub step: usize,
    /// Fingerprint of the evaluated state, written as 16 hex digits.
    #[serde(with = "hex_key")]
    pub key: u64,
    pub rate: f64,
    pub std_error: f64,
    pub failures: u64,
    pub trials: u64,
    pub num_logical: usize,
    /// Action leading from the walk's current state to the evaluated one.
    pub action: Option<SwapAction>,
    pub accepted: bool,
}

impl EvalRecord {
    fn new(
        step: usize,
        key: &StateKey,
        eval: &Evaluation,
        action: Option<SwapAction>,
        accepted: bool,
    ) -> Self {
        Self {
            step,
            key: key.digest(),
            rate: eval.estimate.rate,
            std_error: eval.estimate.std_error,
            failures: eval.estimate.failures,
            trials: eval.estimate.trials,
            num_logical: eval.num_logical,
            action,
            accepted,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Best {
    pub state: TannerState,
    pub evaluation: Evaluation,
    pub step: usize,
    /// Index into [`RunLog::records`].
    pub record: usize,
}

/// Entry of the best-so-far trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    #[serde(with = "hex_key")]
    pub key: u64,
    pub step: usize,
    pub rate: f64,
    pub edges: Vec<Edge>,
}

/// Fingerprints exceed the integer range many JSON readers handle exactly.
mod hex_key {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(key: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{key:016x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let text = String::deserialize(d)?;
        u64::from_str_radix(&text, 16).map_err(serde::de::Error::custom)
    }
}

type Sink = Box<dyn FnMut(&EvalRecord) -> io::Result<()>>;

/// Ordered evaluation records plus the best state seen so far.
///
/// "Best" compares clamped rates and only moves on a strict improvement.
#[derive(Default)]
pub struct RunLog {
    records: Vec<EvalRecord>,
    best: Option<Best>,
    trajectory: Vec<TrajectoryPoint>,
    sink: Option<Sink>,
}

impl std::fmt::Debug for RunLog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RunLog")
            .field("records", &self.records.len())
            .field("best", &self.best)
            .finish()
    }
}

impl RunLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every pushed record is also handed to `sink`, in order.
    pub fn with_sink(sink: impl FnMut(&EvalRecord) -> io::Result<()> + 'static) -> Self {
        Self {
            sink: Some(Box::new(sink)),
            ..Self::default()
        }
    }

    pub fn records(&self) -> &[EvalRecord] {
        &self.records
    }

    pub fn best(&self) -> Option<&Best> {
        self.best.as_ref()
    }

    pub fn trajectory(&self) -> &[TrajectoryPoint] {
        &self.trajectory
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub(crate) fn push(
        &mut self,
        record: EvalRecord,
        state: &TannerState,
        evaluation: &Evaluation,
    ) -> Result<(), OptimizeError> {
        if let Some(sink) = self.sink.as_mut() {
            sink(&record)?;
        }
        let improves = self.best.as_ref().is_none_or(|b| {
            evaluation.estimate.clamped_rate() < b.evaluation.estimate.clamped_rate()
        });
        if improves {
            let key = state.canonical_key();
            self.trajectory.push(TrajectoryPoint {
                key: record.key,
                step: record.step,
                rate: evaluation.estimate.rate,
                edges: key.edges().to_vec(),
            });
            self.best = Some(Best {
                state: state.clone(),
                evaluation: *evaluation,
                step: record.step,
                record: self.records.len(),
            });
        }
        self.records.push(record);
        Ok(())
    }
}

/// One of the three search strategies with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Strategy {
    Plain(PlainConfig),
    Sa(SaConfig),
    Ps(PsTrainConfig),
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Plain(_) => "plain",
            Strategy::Sa(_) => "sa",
            Strategy::Ps(_) => "ps",
        }
    }

    /// Upper bound on the number of records a run emits.
    pub fn evaluation_budget(&self) -> usize {
        match self {
            Strategy::Plain(c) => c.sample_width * c.walk_length,
            Strategy::Sa(c) => c.t_max + 1,
            Strategy::Ps(c) => c.episodes * c.max_steps,
        }
    }
}

/// What a finished [`run`] reports beyond its log.
#[derive(Debug)]
pub struct RunOutcome {
    /// Cost of the start state. Projective simulation never logs the start
    /// state, so this is the reference a run is judged against.
    pub initial: Evaluation,
    /// Per-episode step counts; empty unless the strategy is PS.
    pub episode_lengths: Vec<usize>,
}

/// Runs `strategy` from `start`, recording every evaluation in `log`.
pub fn run<C: CostFunction>(
    start: &TannerState,
    strategy: &Strategy,
    cost: &mut C,
    seed: u64,
    log: &mut RunLog,
) -> Result<RunOutcome, OptimizeError> {
    let initial = cost.evaluate(start)?;
    let mut episode_lengths = Vec::new();
    match strategy {
        Strategy::Plain(cfg) => plain_exploration(start, cfg, cost, seed, log)?,
        Strategy::Sa(cfg) => simulated_annealing(start, cfg, cost, seed, log)?,
        Strategy::Ps(cfg) => {
            let agent = PsAgent::new(cfg.agent(), start.action_count())?;
            episode_lengths = ps_train(start, agent, cfg, cost, seed, log)?.episode_lengths;
        }
    }
    Ok(RunOutcome {
        initial,
        episode_lengths,
    })
}
