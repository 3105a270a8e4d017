//! Times one failure-rate estimate on a random (3,4)-regular [[625,25]] code.

use std::time::Instant;

use hgp_optim::erasure::estimate_failure_rate;
use hgp_optim::hgp::build_hgp;
use hgp_optim::tanner::TannerState;

fn main() {
    let trials: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(10_000);
    let state = TannerState::random_regular_full_rank(15, 20, 3, 4, 1, 1000).unwrap();
    let code = build_hgp(&state.binary_matrix()).unwrap();
    let start = Instant::now();
    let est = estimate_failure_rate(&code, 9.0 / 32.0, trials, 0).unwrap();
    let elapsed = start.elapsed();
    println!(
        "[[{}, {}]] p=9/32 trials={} rate={:.5} std_error={:.5} ratio={:.4} in {:?} ({:.1} us/trial)",
        code.num_qubits(),
        code.num_logical(),
        est.trials,
        est.rate,
        est.std_error,
        est.relative_error(),
        elapsed,
        elapsed.as_secs_f64() * 1e6 / trials as f64
    );
}
