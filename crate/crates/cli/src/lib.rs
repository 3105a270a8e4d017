//! Configuration and subcommands behind the `hgp-optim` binary.

pub mod commands;
pub mod config;
pub mod presets;

use std::io;
use std::path::PathBuf;

use hgp_optim::erasure::ErasureError;
use hgp_optim::hgp::HgpError;
use hgp_optim::optimize::OptimizeError;
use hgp_optim::tanner::TannerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Alist { path: PathBuf, source: TannerError },
    #[error("{}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Hgp(#[from] HgpError),
    #[error(transparent)]
    Erasure(#[from] ErasureError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
}

impl CliError {
    /// 2 for anything wrong with the inputs, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input { .. } | CliError::Alist { .. } => 2,
            CliError::Erasure(_) | CliError::Hgp(_) => 2,
            CliError::Optimize(OptimizeError::Config(_)) => 2,
            CliError::Output { .. } | CliError::Optimize(_) => 1,
        }
    }
}
