//! Command-line driver for the monotonized-scheme experiments.

pub mod compare;
pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod summary;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::Format;
use crate::error::{CliError, CliResult};
use crate::experiments::Overrides;

#[derive(Debug, Parser)]
#[command(name = "monoscheme", version, about = "Monotonized difference schemes: experiments and comparisons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory (overrides `[output] dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Seed for randomized experiments.
        #[arg(long)]
        seed: Option<u64>,
        /// Convergence tolerance for iterative experiments.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare the answer metrics of two summaries.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Directory for `comparison.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Execute a parsed command; returns what should go to stdout.
pub fn execute(cmd: Command) -> CliResult<String> {
    match cmd {
        Command::Run { config, out, format, seed, tol } => {
            let cfg = config::load(&config)?;
            let dir = out
                .or_else(|| cfg.output.dir.clone())
                .unwrap_or_else(|| default_dir(&config));
            let format = format.or(cfg.output.format).unwrap_or_default();
            let mut result = experiments::run(&cfg, &Overrides { seed, tol })?;
            let path = output::write_all(&dir, format, &mut result.summary, &result.tables)?;
            let failed: Vec<&str> =
                result.summary.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let mut msg = format!("wrote {}", path.display());
            if !failed.is_empty() {
                msg.push_str(&format!(" (checks failed: {})", failed.join(", ")));
            }
            Ok(msg)
        }
        Command::Compare { a, b, out } => {
            let cmp = compare::compare(&compare::load_summary(&a)?, &compare::load_summary(&b)?)?;
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
                output::write_json_pretty(&dir.join("comparison.json"), &cmp)?;
            }
            serde_json::to_string_pretty(&cmp).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn default_dir(config: &Path) -> PathBuf {
    let stem = config.file_stem().map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned());
    PathBuf::from("out").join(stem)
}
