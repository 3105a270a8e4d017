use std::fs::{self, File};
use std::io::{LineWriter, Write};
use std::path::Path;

use hgp_optim::erasure::{estimate_failure_rate, sweep_curve};
use hgp_optim::hgp::build_hgp;
use hgp_optim::optimize::{run, MonteCarloCost, RunLog};
use serde::Serialize;
use serde_json::json;

use crate::config::RunConfig;
use crate::CliError;

pub const CONFIG_ECHO: &str = "config.toml";
pub const RUN_LOG: &str = "run.jsonl";
pub const BEST_ALIST: &str = "best.alist";
pub const TRAJECTORY: &str = "best_trajectory.json";
pub const SUMMARY: &str = "summary.json";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const CODE_ALIST: &str = "code.alist";

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Output {
        path: dir.to_path_buf(),
        source,
    })
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Output {
        path: "<stdout>".into(),
        source,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes") + "\n"
}

/// Prints the quantum and classical parameters of the configured code.
pub fn build(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let state = cfg.start_state()?;
    let code = build_hgp(&state.binary_matrix())?;
    let girth = state.girth();
    let girth_text = girth.map_or_else(|| "inf".to_string(), |g| g.to_string());
    writeln!(stdout, "N={} K={}", code.num_qubits(), code.num_logical()).map_err(stdout_err)?;
    writeln!(
        stdout,
        "n={} m={} rank={} girth={}",
        code.classical_len(),
        code.classical_checks(),
        code.classical_rank(),
        girth_text
    )
    .map_err(stdout_err)?;
    if let Some(dir) = &cfg.out {
        create_dir(dir)?;
        let summary = json!({
            "num_qubits": code.num_qubits(),
            "num_logical": code.num_logical(),
            "classical_len": code.classical_len(),
            "classical_checks": code.classical_checks(),
            "classical_rank": code.classical_rank(),
            "girth": girth,
        });
        write_file(&dir.join("build.json"), to_json(&summary))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalRecord {
    p: f64,
    trials: u64,
    failures: u64,
    rate: f64,
    std_error: f64,
    seed: u64,
}

/// One Monte Carlo estimate of the configured code's failure rate.
pub fn eval(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let state = cfg.start_state()?;
    let code = build_hgp(&state.binary_matrix())?;
    let e = estimate_failure_rate(&code, cfg.erasure_prob()?, cfg.trials()?, cfg.seed)?;
    let record = EvalRecord {
        p: e.erasure_prob,
        trials: e.trials,
        failures: e.failures,
        rate: e.rate,
        std_error: e.std_error,
        seed: e.seed,
    };
    let line = serde_json::to_string(&record).expect("plain data serializes");
    writeln!(stdout, "{line}").map_err(stdout_err)?;
    if let Some(dir) = &cfg.out {
        create_dir(dir)?;
        write_file(&dir.join("eval.json"), to_json(&record))?;
    }
    Ok(())
}

/// Runs the configured strategy and writes its log, best code and summary.
pub fn optimize(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let strategy = cfg
        .strategy
        .ok_or_else(|| CliError::Config("a [strategy] block or --preset is required".into()))?;
    let dir = cfg.out()?;
    let start = cfg.start_state()?;
    let seeds = cfg.seeds();
    let mut cost = MonteCarloCost::new(cfg.erasure_prob()?, cfg.trials()?, seeds.cost)?;

    create_dir(dir)?;
    write_file(&dir.join(CONFIG_ECHO), cfg.to_toml()?)?;
    let log_path = dir.join(RUN_LOG);
    let file = File::create(&log_path).map_err(|source| CliError::Output {
        path: log_path.clone(),
        source,
    })?;
    let mut writer = LineWriter::new(file);
    let mut log = RunLog::with_sink(move |record| {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")
    });
    let outcome = run(&start, &strategy, &mut cost, seeds.strategy, &mut log)?;

    let best = log
        .best()
        .ok_or_else(|| CliError::Config("the run made no evaluations".into()))?;
    write_file(&dir.join(BEST_ALIST), best.state.to_alist())?;
    write_file(&dir.join(TRAJECTORY), to_json(&log.trajectory()))?;
    let summary = json!({
        "strategy": strategy.name(),
        "evaluations": log.len(),
        "distinct_states": cost.computed(),
        "initial": {
            "rate": outcome.initial.estimate.rate,
            "std_error": outcome.initial.estimate.std_error,
            "num_logical": outcome.initial.num_logical,
        },
        "best": {
            "rate": best.evaluation.estimate.rate,
            "std_error": best.evaluation.estimate.std_error,
            "num_logical": best.evaluation.num_logical,
            "step": best.step,
            "record": best.record,
            "key": format!("{:016x}", best.state.canonical_key().digest()),
        },
        "episode_lengths": outcome.episode_lengths,
    });
    write_file(&dir.join(SUMMARY), to_json(&summary))?;
    writeln!(
        stdout,
        "{}: {} evaluations, initial rate {:.4e}, best rate {:.4e} at step {}",
        strategy.name(),
        log.len(),
        outcome.initial.rate(),
        best.evaluation.rate(),
        best.step
    )
    .map_err(stdout_err)?;
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    p: f64,
    rate: f64,
    std_error: f64,
    trials: u64,
    seed: u64,
}

/// Failure-rate curve over the configured probability grid, as CSV.
pub fn sweep(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("a [sweep] block or --p-grid is required".into()))?;
    let trials = match sweep.trials {
        Some(t) => t,
        None => cfg.trials()?,
    };
    let state = cfg.start_state()?;
    let code = build_hgp(&state.binary_matrix())?;
    let curve = sweep_curve(&code, &sweep.p_grid, trials, cfg.seed)?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    for e in &curve {
        csv.serialize(SweepRow {
            p: e.erasure_prob,
            rate: e.rate,
            std_error: e.std_error,
            trials: e.trials,
            seed: e.seed,
        })
        .map_err(|e| CliError::Config(format!("writing CSV: {e}")))?;
    }
    let bytes = csv
        .into_inner()
        .map_err(|e| CliError::Config(format!("writing CSV: {e}")))?;
    match &cfg.out {
        Some(dir) => {
            create_dir(dir)?;
            write_file(&dir.join(SWEEP_CSV), bytes)
        }
        None => stdout.write_all(&bytes).map_err(stdout_err),
    }
}

/// Writes the configured classical code in alist format.
pub fn export_alist(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = cfg.start_state()?.to_alist();
    match &cfg.out {
        Some(dir) => {
            create_dir(dir)?;
            write_file(&dir.join(CODE_ALIST), text)
        }
        None => stdout.write_all(text.as_bytes()).map_err(stdout_err),
    }
}
