//! Run configuration: a `key = value` file with command-line overrides.

use std::fmt;
use std::path::Path;

use qflag::cartan::LieType;
use qflag::dirac::PlusPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Invariants,
    CalculusCheck,
    Info,
}

impl Command {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "spectrum" => Some(Command::Spectrum),
            "invariants" => Some(Command::Invariants),
            "calculus-check" => Some(Command::CalculusCheck),
            "info" => Some(Command::Info),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Invariants => "invariants",
            Command::CalculusCheck => "calculus-check",
            Command::Info => "info",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lie_type: LieType,
    pub rank: usize,
    /// Crossed node, counted from 0.
    pub r: usize,
    pub n: i64,
    pub q_values: Vec<f64>,
    pub cutoff: usize,
    pub dplus: PlusPolicy,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Spectrum,
            lie_type: LieType::A,
            rank: 1,
            r: 0,
            n: 1,
            q_values: vec![1.2],
            cutoff: 4,
            dplus: PlusPolicy::Auto,
            format: Format::Csv,
        }
    }
}

/// A configuration problem, located by line (when it comes from a file) and key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config error at line {l}, key `{}`: {}", self.key, self.message),
            None => write!(f, "config error, key `{}`: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    line: Some(i + 1),
                    key: line.to_string(),
                    message: "expected `key = value`".into(),
                });
            };
            cfg.set(key.trim(), value.trim()).map_err(|mut e| {
                e.line = Some(i + 1);
                e
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: None,
            key: "config".into(),
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    /// Sets one key; the same entry point serves config files and flag overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let err = |message: String| ConfigError {
            line: None,
            key: key.to_string(),
            message,
        };
        let int = |v: &str| v.parse::<i64>().map_err(|_| err(format!("expected an integer, got `{v}`")));
        match key {
            "command" => self.command = Command::parse(value).ok_or_else(|| err(format!("unknown command `{value}`")))?,
            "lie_type" => {
                self.lie_type = LieType::parse(value).map_err(|_| err(format!("unknown Lie type `{value}`")))?;
            }
            "rank" => self.rank = usize::try_from(int(value)?).map_err(|_| err("rank must be positive".into()))?,
            "r" => self.r = usize::try_from(int(value)?).map_err(|_| err("r must be non-negative".into()))?,
            "n" => self.n = int(value)?,
            "q" | "q_values" => {
                self.q_values = value
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|_| err(format!("expected a real number, got `{}`", s.trim()))))
                    .collect::<Result<_, _>>()?;
            }
            "cutoff" | "L" => {
                self.cutoff = usize::try_from(int(value)?).map_err(|_| err("the cutoff L must satisfy L ≥ 0".into()))?;
            }
            "dplus" | "gauge" => {
                self.dplus = PlusPolicy::parse(value).ok_or_else(|| err(format!("expected auto, mirror or adjoint, got `{value}`")))?;
            }
            "format" => self.format = Format::parse(value).ok_or_else(|| err(format!("expected csv or json, got `{value}`")))?,
            _ => return Err(err("unknown key".into())),
        }
        Ok(())
    }

    /// Checks the constraints that do not depend on a single key.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |key: &str, message: String| ConfigError {
            line: None,
            key: key.into(),
            message,
        };
        if self.q_values.is_empty() {
            return Err(err("q", "at least one value of q is required".into()));
        }
        if let Some(q) = self.q_values.iter().find(|q| !(**q > 1.0) || !q.is_finite()) {
            return Err(err("q", format!("q must lie in (1, ∞), got {q}")));
        }
        if self.rank == 0 {
            return Err(err("rank", "rank must be positive".into()));
        }
        if self.r >= self.rank {
            return Err(err("r", format!("crossed node r = {} must be below the rank {}", self.r, self.rank)));
        }
        if self.n <= 0 {
            return Err(err("n", format!("n must be positive, got {}", self.n)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports_lines() {
        let cfg = RunConfig::parse("# comment\nrank = 2\nq = 1.1, 1.5\ncutoff = 3 # trailing\nformat = json\n").unwrap();
        assert_eq!((cfg.rank, cfg.cutoff, cfg.format), (2, 3, Format::Json));
        assert_eq!(cfg.q_values, vec![1.1, 1.5]);
        let e = RunConfig::parse("rank = 1\nbogus = 3\n").unwrap_err();
        assert_eq!((e.line, e.key.as_str()), (Some(2), "bogus"));
        let e = RunConfig::parse("cutoff = -1").unwrap_err();
        assert_eq!(e.line, Some(1));
    }

    #[test]
    fn q_must_exceed_one() {
        let mut cfg = RunConfig::default();
        cfg.set("q", "0.5").unwrap();
        let e = cfg.validate().unwrap_err();
        assert!(e.to_string().contains("(1, ∞)"));
        cfg.set("q", "1.0").unwrap();
        assert!(cfg.validate().is_err());
        cfg.set("q", "1.01").unwrap();
        assert!(cfg.validate().is_ok());
        cfg.set("r", "1").unwrap();
        assert_eq!(cfg.validate().unwrap_err().key, "r");
    }
}
