use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use qflag_cli::config::{Command, ConfigError, RunConfig};
use qflag_cli::{exit, run, RunError};

/// Dirac operators on quantum irreducible flag manifolds.
#[derive(Parser, Debug)]
#[command(name = "qflag", version)]
struct Cli {
    /// spectrum | invariants | calculus-check | info
    command: String,
    /// Configuration file with `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Values of q, comma separated; each must lie in (1, ∞).
    #[arg(long)]
    q: Option<String>,
    /// Cutoff L on the level of the highest weights.
    #[arg(long)]
    cutoff: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    rank: Option<String>,
    /// Crossed node, counted from 0.
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Construction of D+: auto | mirror | adjoint.
    #[arg(long)]
    dplus: Option<String>,
}

fn configure(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.command = Command::parse(&cli.command).ok_or_else(|| ConfigError {
        line: None,
        key: "command".into(),
        message: format!("unknown command `{}`", cli.command),
    })?;
    let overrides = [
        ("q", &cli.q),
        ("cutoff", &cli.cutoff),
        ("format", &cli.format),
        ("rank", &cli.rank),
        ("r", &cli.r),
        ("n", &cli.n),
        ("dplus", &cli.dplus),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("QFLAG_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    let result = configure(&cli).map_err(RunError::Config).and_then(|cfg| run(&cfg));
    match result {
        Ok((text, outcome)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("qflag: cannot write output: {e}");
                return ExitCode::from(exit::NUMERICAL_FAILURE as u8);
            }
            if outcome.failures.is_empty() {
                ExitCode::from(exit::OK as u8)
            } else {
                eprintln!("qflag: failed checks: {}", outcome.failures.join(", "));
                ExitCode::from(exit::INVARIANT_FAILURE as u8)
            }
        }
        Err(e) => {
            eprintln!("qflag: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
