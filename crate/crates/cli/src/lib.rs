//! Config ingestion, experiment orchestration and CSV/JSON reports for the
//! `specsemi` command line.

pub mod commands;
pub mod config;
pub mod output;
pub mod report;
pub mod suites;

use std::path::PathBuf;

pub use config::RunConfig;
pub use report::ReportRow;

/// Exit codes of the command line.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const NUMERICAL: i32 = 2;
    pub const CONFIG: i32 = 64;
    pub const IO: i32 = 74;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(#[from] specsemi_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Installs the global rayon pool, capped by `SPECSEMI_THREADS` when set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("SPECSEMI_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!("SPECSEMI_THREADS={v:?} is not a positive integer"))
    })?;
    // a pool that already exists (tests) is left alone
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}
