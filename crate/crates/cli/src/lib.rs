//! Command line front end: configuration files in, CSV or JSON tables out.

pub mod config;
pub mod output;
pub mod run;

use std::fs;
use std::path::{Path, PathBuf};

use parastab::experiments::SweepResult;
use thiserror::Error;

pub use config::{parse_config, to_config_text, ConfigError, ExperimentKind, OutputFormat, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Solver(#[from] parastab::Error),
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("{failed} of {total} rows failed; partial results in {}", path.display())]
    PartialFailure { failed: usize, total: usize, path: PathBuf },
}

impl CliError {
    /// 1 for configuration and file problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Pool(_) => 1,
            CliError::Solver(_) | CliError::PartialFailure { .. } => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Pool(_) => "runtime",
            CliError::Solver(_) => "solver",
            CliError::PartialFailure { .. } => "partial",
        }
    }

    /// Single machine-readable line for stderr.
    pub fn structured(&self) -> String {
        let line = match self {
            CliError::Config(e) => e.line().map(|l| format!(" line={l}")).unwrap_or_default(),
            _ => String::new(),
        };
        let msg = self.to_string().replace('"', "'");
        format!("error kind={}{line} exit={} message=\"{msg}\"", self.kind(), self.exit_code())
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_config(&text)?)
}

/// Runs `cfg` with an optional worker count (falls back to the config's,
/// then to rayon's default).
pub fn run_config(cfg: &RunConfig, workers: Option<usize>) -> Result<SweepResult, CliError> {
    match workers.or(cfg.workers) {
        None => Ok(run::execute(cfg)?),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Pool(e.to_string()))?;
            Ok(pool.install(|| run::execute(cfg))?)
        }
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub path: PathBuf,
    pub rows: usize,
    pub failed: usize,
    pub notes: Vec<String>,
}

/// Full `run` command: parse, compute, write `<out_dir>/<output>.<ext>`.
/// The file is written even when some rows failed; that case is reported
/// as [`CliError::PartialFailure`] afterwards.
pub fn run_file(
    config_path: &Path,
    out_dir: &Path,
    workers: Option<usize>,
    reproducible: bool,
) -> Result<RunReport, CliError> {
    let cfg = load_config(config_path)?;
    let table = run_config(&cfg, workers)?;
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let path = out_dir.join(format!("{}.{}", cfg.output, cfg.format.extension()));
    fs::write(&path, output::render(&cfg, &table, reproducible)).map_err(io(&path))?;
    let failed = table.failures();
    if failed > 0 {
        return Err(CliError::PartialFailure {
            failed,
            total: table.rows.len(),
            path,
        });
    }
    Ok(RunReport {
        path,
        rows: table.rows.len(),
        failed,
        notes: table.notes,
    })
}
