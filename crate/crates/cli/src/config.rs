//! Run configuration: preset, then config file, then command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use hgp_optim::optimize::Strategy;
use hgp_optim::seed::derive_seed;
use hgp_optim::tanner::TannerState;
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::{presets, CliError};

/// Attempts at drawing a simple full-rank graph before giving up.
const DEFAULT_MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub erasure_prob: Option<f64>,
    /// Monte Carlo trials per cost evaluation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Strategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSource {
    /// Relative paths in a config file are resolved against the file's
    /// directory.
    Alist { path: PathBuf },
    RandomRegular {
        num_checks: usize,
        num_bits: usize,
        col_weight: usize,
        row_weight: usize,
        /// Redraw until the graph is simple and its matrix has full rank.
        #[serde(default = "yes")]
        full_rank: bool,
        /// Defaults to a seed derived from the run seed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p_grid: Vec<f64>,
    /// Overrides the top-level `trials` for sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
}

/// Independent seeds for the parts of a run, all derived from `seed`.
#[derive(Debug, Clone, Copy)]
pub struct Seeds {
    pub code: u64,
    pub cost: u64,
    pub strategy: u64,
}

/// Everything that can override a config value from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub alist: Option<PathBuf>,
    pub erasure_prob: Option<f64>,
    pub trials: Option<u64>,
    pub p_grid: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(o: &Overrides) -> Result<Self, CliError> {
        let mut table = Table::new();
        if let Some(name) = &o.preset {
            let text = presets::get(name).ok_or_else(|| {
                let known: Vec<_> = presets::names().collect();
                CliError::Config(format!(
                    "unknown preset `{name}` (known: {})",
                    known.join(", ")
                ))
            })?;
            let preset: Table = text
                .parse()
                .map_err(|e| CliError::Config(format!("preset {name}: {e}")))?;
            merge(&mut table, preset);
        }
        if let Some(path) = &o.config {
            let text = fs::read_to_string(path).map_err(|source| CliError::Input {
                path: path.clone(),
                source,
            })?;
            let mut file: Table = text
                .parse()
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            resolve_alist_path(&mut file, path.parent().unwrap_or(Path::new("")));
            merge(&mut table, file);
        }
        merge(&mut table, o.flag_table()?);
        let source = o
            .config
            .as_ref()
            .map(|p| p.display().to_string())
            .or_else(|| o.preset.as_ref().map(|p| format!("preset {p}")))
            .unwrap_or_else(|| "command line".into());
        let cfg: RunConfig = Value::Table(table)
            .try_into()
            .map_err(|e| CliError::Config(format!("{source}: {}", e.to_string().trim_end())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(p) = self.erasure_prob {
            check_probability(p)?;
        }
        if self.trials == Some(0) {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.trials == Some(0) {
                return Err(CliError::Config("sweep.trials must be at least 1".into()));
            }
            for &p in &sweep.p_grid {
                check_probability(p)?;
            }
        }
        Ok(())
    }

    pub fn seeds(&self) -> Seeds {
        Seeds {
            code: derive_seed(self.seed, 1),
            cost: derive_seed(self.seed, 2),
            strategy: derive_seed(self.seed, 3),
        }
    }

    pub fn erasure_prob(&self) -> Result<f64, CliError> {
        self.erasure_prob
            .ok_or_else(|| CliError::Config("`erasure_prob` is required for this command".into()))
    }

    pub fn trials(&self) -> Result<u64, CliError> {
        self.trials
            .ok_or_else(|| CliError::Config("`trials` is required for this command".into()))
    }

    pub fn out(&self) -> Result<&Path, CliError> {
        self.out.as_deref().ok_or_else(|| {
            CliError::Config("an output directory (`out` or --out) is required".into())
        })
    }

    /// Loads or generates the classical code.
    pub fn start_state(&self) -> Result<TannerState, CliError> {
        match &self.code {
            None => Err(CliError::Config(
                "no code given: set [code], --preset or --alist".into(),
            )),
            Some(CodeSource::Alist { path }) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Input {
                    path: path.clone(),
                    source,
                })?;
                TannerState::from_alist(&text).map_err(|source| CliError::Alist {
                    path: path.clone(),
                    source,
                })
            }
            Some(CodeSource::RandomRegular {
                num_checks,
                num_bits,
                col_weight,
                row_weight,
                full_rank,
                seed,
            }) => {
                let seed = seed.unwrap_or(self.seeds().code);
                let state = if *full_rank {
                    TannerState::random_regular_full_rank(
                        *num_checks,
                        *num_bits,
                        *col_weight,
                        *row_weight,
                        seed,
                        DEFAULT_MAX_ATTEMPTS,
                    )
                } else {
                    TannerState::random_regular(
                        *num_checks,
                        *num_bits,
                        *col_weight,
                        *row_weight,
                        seed,
                    )
                };
                state.map_err(|e| CliError::Config(format!("code: {e}")))
            }
        }
    }

    /// The resolved configuration as TOML.
    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("serializing config: {e}")))
    }
}

impl Overrides {
    fn flag_table(&self) -> Result<Table, CliError> {
        let mut t = Table::new();
        if let Some(seed) = self.seed {
            let seed = i64::try_from(seed).map_err(|_| {
                CliError::Config(format!("seed {seed} does not fit a TOML integer"))
            })?;
            t.insert("seed".into(), Value::Integer(seed));
        }
        if let Some(out) = &self.out {
            t.insert("out".into(), Value::String(out.display().to_string()));
        }
        if let Some(p) = self.erasure_prob {
            t.insert("erasure_prob".into(), Value::Float(p));
        }
        if let Some(trials) = self.trials {
            let trials = i64::try_from(trials)
                .map_err(|_| CliError::Config(format!("trials {trials} is too large")))?;
            t.insert("trials".into(), Value::Integer(trials));
        }
        if let Some(path) = &self.alist {
            let mut code = Table::new();
            code.insert("kind".into(), Value::String("alist".into()));
            code.insert("path".into(), Value::String(path.display().to_string()));
            t.insert("code".into(), Value::Table(code));
        }
        if let Some(grid) = &self.p_grid {
            let mut sweep = Table::new();
            let grid = grid.iter().map(|&p| Value::Float(p)).collect();
            sweep.insert("p_grid".into(), Value::Array(grid));
            t.insert("sweep".into(), Value::Table(sweep));
        }
        Ok(t)
    }
}

fn check_probability(p: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "erasure probability {p} is outside [0, 1]"
        )))
    }
}

/// Recursive merge where `over` wins. A table whose `kind` differs from the
/// one it overrides replaces it instead of merging into it.
pub fn merge(base: &mut Table, over: Table) {
    for (key, value) in over {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(o)) if same_kind(b, &o) => merge(b, o),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

fn same_kind(a: &Table, b: &Table) -> bool {
    match (a.get("kind"), b.get("kind")) {
        (Some(x), Some(y)) => x == y,
        _ => true,
    }
}

fn resolve_alist_path(file: &mut Table, dir: &Path) {
    let Some(Value::Table(code)) = file.get_mut("code") else {
        return;
    };
    if code.get("kind").and_then(Value::as_str) != Some("alist") {
        return;
    }
    if let Some(Value::String(path)) = code.get_mut("path") {
        if Path::new(path.as_str()).is_relative() {
            *path = dir.join(&*path).display().to_string();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hgp_optim::optimize::SaConfig;

    fn preset(name: &str) -> RunConfig {
        RunConfig::load(&Overrides {
            preset: Some(name.into()),
            ..Overrides::default()
        })
        .unwrap()
    }

    #[test]
    fn every_preset_loads() {
        for name in presets::names() {
            let cfg = preset(name);
            assert_eq!(cfg.trials, Some(10_000), "{name}");
            assert!(cfg.strategy.is_some(), "{name}");
            assert!(!cfg.sweep.unwrap().p_grid.is_empty(), "{name}");
        }
    }

    #[test]
    fn flags_override_preset() {
        let cfg = RunConfig::load(&Overrides {
            preset: Some("1600-sa".into()),
            seed: Some(42),
            trials: Some(100),
            ..Overrides::default()
        })
        .unwrap();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.trials, Some(100));
        assert_eq!(
            cfg.strategy,
            Some(Strategy::Sa(SaConfig {
                t_max: 450,
                beta: 10.0
            }))
        );
    }

    #[test]
    fn strategy_kind_change_replaces_block() {
        let mut base: Table = "[strategy]\nkind = \"sa\"\nt_max = 3\nbeta = 1.0\n"
            .parse()
            .unwrap();
        let over: Table = "[strategy]\nkind = \"plain\"\nsample_width = 2\nwalk_length = 2\n"
            .parse()
            .unwrap();
        merge(&mut base, over);
        let strategy = base["strategy"].as_table().unwrap();
        assert!(strategy.get("t_max").is_none());
        let partial: Table = "[strategy]\nbeta = 2.0\n".parse().unwrap();
        let mut base2: Table = "[strategy]\nkind = \"sa\"\nt_max = 3\nbeta = 1.0\n"
            .parse()
            .unwrap();
        merge(&mut base2, partial);
        assert_eq!(base2["strategy"]["t_max"].as_integer(), Some(3));
        assert_eq!(base2["strategy"]["beta"].as_float(), Some(2.0));
    }

    #[test]
    fn echo_round_trips() {
        for name in presets::names() {
            let cfg = preset(name);
            let back: RunConfig = toml::from_str(&cfg.to_toml().unwrap()).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(
            &path,
            "seed = 1\n[strategy]\nkind = \"sa\"\nt_max = 3\nbeta = 1.0\ntmax = 4\n",
        )
        .unwrap();
        let err = RunConfig::load(&Overrides {
            config: Some(path),
            ..Overrides::default()
        })
        .unwrap_err();
        assert!(err.to_string().contains("tmax"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn alist_path_is_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "[code]\nkind = \"alist\"\npath = \"h.alist\"\n").unwrap();
        let cfg = RunConfig::load(&Overrides {
            config: Some(path),
            ..Overrides::default()
        })
        .unwrap();
        assert_eq!(
            cfg.code,
            Some(CodeSource::Alist {
                path: dir.path().join("h.alist")
            })
        );
    }

    #[test]
    fn bad_probability_is_a_config_error() {
        let err = RunConfig::load(&Overrides {
            erasure_prob: Some(1.5),
            ..Overrides::default()
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
