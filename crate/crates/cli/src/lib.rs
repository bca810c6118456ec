//! Library side of the `qflag` command-line tool: configuration, commands and report rendering.

pub mod commands;
pub mod config;
pub mod table;

use serde_json::{json, Value};

use commands::Outcome;
use config::{ConfigError, Format, RunConfig};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVARIANT_FAILURE: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
    pub const NUMERICAL_FAILURE: i32 = 3;
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Library(qflag::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Library(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        use qflag::Error as E;
        match self {
            RunError::Config(_) => exit::CONFIG_ERROR,
            RunError::Io(_) => exit::NUMERICAL_FAILURE,
            RunError::Library(e) => match e {
                E::UnsupportedType(_)
                | E::UnsupportedWeight(..)
                | E::MismatchedCartan(..)
                | E::OutOfSupportedDomain(_)
                | E::CutoffTooSmall { .. }
                | E::Config(_) => exit::CONFIG_ERROR,
                E::NumericalFailure(_) | E::NonTerminating(_) | E::ClosureBudgetExceeded(_) | E::DegeneratePairing(_) => {
                    exit::NUMERICAL_FAILURE
                }
                E::WellDefinednessViolated(_)
                | E::NoEquivariantEmbedding
                | E::AmbiguousEmbedding(_)
                | E::BranchingTableMissing(_) => exit::INVARIANT_FAILURE,
            },
        }
    }
}

pub fn metadata(cfg: &RunConfig) -> Value {
    json!({
        "command": cfg.command.name(),
        "lie_type": cfg.lie_type.to_string(),
        "rank": cfg.rank,
        "r": cfg.r,
        "n": cfg.n,
        "cutoff": cfg.cutoff,
        "q_values": cfg.q_values,
        "gauge": { "dplus": cfg.dplus.name() },
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Validates the configuration, runs the command and renders the report.
pub fn run(cfg: &RunConfig) -> Result<(String, Outcome), RunError> {
    cfg.validate().map_err(RunError::Config)?;
    let outcome = commands::execute(cfg).map_err(RunError::Library)?;
    let text = match cfg.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => outcome.table.to_json(metadata(cfg)),
    };
    Ok((text, outcome))
}
