//! One plain-exploration, annealing and projective-simulation run on a random
//! (3,4)-regular [[625,25]] code with 10^3 trials per cost call.

use std::time::Instant;

use hgp_optim::optimize::*;
use hgp_optim::tanner::TannerState;

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0);
    let start = TannerState::random_regular(15, 20, 3, 4, seed).unwrap();
    let p = 9.0 / 32.0;

    let mut cost = MonteCarloCost::new(p, 1000, seed).unwrap();
    let initial = cost.evaluate(&start).unwrap();
    println!(
        "initial rate {:.4} +- {:.4}",
        initial.rate(),
        initial.estimate.std_error
    );

    let t = Instant::now();
    let mut log = RunLog::new();
    let cfg = PlainConfig {
        sample_width: 24,
        walk_length: 120,
        walk_policy: WalkPolicy::Random,
    };
    plain_exploration(&start, &cfg, &mut cost, seed, &mut log).unwrap();
    report("plain", &log, t);

    let t = Instant::now();
    let mut cost = MonteCarloCost::new(p, 1000, seed).unwrap();
    let mut log = RunLog::new();
    simulated_annealing(
        &start,
        &SaConfig {
            t_max: 2400,
            beta: 4.0,
        },
        &mut cost,
        seed,
        &mut log,
    )
    .unwrap();
    report("sa", &log, t);

    let t = Instant::now();
    let mut cost = MonteCarloCost::new(p, 1000, seed).unwrap();
    let mut log = RunLog::new();
    let cfg = PsTrainConfig {
        episodes: 20,
        max_steps: 120,
        beta: 6.79,
        gamma: 4.56e-4,
        eta: 1.90e-3,
        theta: 1e-2,
    };
    let agent = PsAgent::new(cfg.agent(), start.action_count()).unwrap();
    let out = ps_train(&start, agent, &cfg, &mut cost, seed, &mut log).unwrap();
    report("ps", &log, t);
    println!("ps episode lengths {:?}", out.episode_lengths);
}

fn report(name: &str, log: &RunLog, t: Instant) {
    let best = log.best().unwrap();
    println!(
        "{name}: {} evaluations, best rate {:.4} +- {:.4} at step {} in {:.1?}",
        log.len(),
        best.evaluation.rate(),
        best.evaluation.estimate.std_error,
        best.step,
        t.elapsed()
    );
}
