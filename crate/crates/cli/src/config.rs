use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::CliError;

/// Default evaluation budget per Mazur–Tate element: `theta_3` at `p = 60`.
pub const DEFAULT_MAX_EVALS: u64 = 60 * 60 * 60 * 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Table,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "table" => Ok(OutputFormat::Table),
            other => Err(CliError::Config(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Table => "table",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub curves: PathBuf,
    pub pmin: u64,
    pub pmax: u64,
    pub n_max: u32,
    pub jobs: usize,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
    /// Directory receiving one file per `(curve, p, n)`.
    pub dump_theta: Option<PathBuf>,
    /// Largest `p^n` for which dumps expand `theta_n` in powers of `T`.
    pub dump_limit: u64,
    /// Skip any level needing more symbol evaluations than this.
    pub max_evals: Option<u64>,
}

impl RunConfig {
    pub fn new(curves: impl Into<PathBuf>) -> Self {
        RunConfig {
            curves: curves.into(),
            pmin: 5,
            pmax: 60,
            n_max: 3,
            jobs: 1,
            cache_dir: None,
            format: OutputFormat::Csv,
            dump_theta: None,
            dump_limit: 400,
            max_evals: Some(DEFAULT_MAX_EVALS),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.pmin < 5 {
            return Err(CliError::Config(format!(
                "pmin must be at least 5, got {}",
                self.pmin
            )));
        }
        if !(2..=4).contains(&self.n_max) {
            return Err(CliError::Config(format!(
                "nmax must lie in [2, 4], got {}",
                self.n_max
            )));
        }
        if self.jobs == 0 {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut c = RunConfig::new("x");
        assert!(c.validate().is_ok());
        c.pmin = 3;
        assert!(c.validate().is_err());
        c.pmin = 5;
        c.n_max = 5;
        assert!(c.validate().is_err());
        c.n_max = 2;
        c.jobs = 0;
        assert!(c.validate().is_err());
        // an empty range is allowed
        c.jobs = 1;
        c.pmax = 4;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn formats() {
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
        assert_eq!(OutputFormat::Table.to_string(), "table");
    }
}
