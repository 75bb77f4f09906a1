use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::tensor::{DEFAULT_RANK_RTOL, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// Settings shared by all command-line subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub tol: f64,
    pub rank_rtol: f64,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub report_format: ReportFormat,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            tol: DEFAULT_TOL,
            rank_rtol: DEFAULT_RANK_RTOL,
            seed: 0,
            output_path: None,
            report_format: ReportFormat::Text,
        }
    }
}

impl CliConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::OutOfRange(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if !(self.rank_rtol.is_finite() && self.rank_rtol > 0.0) {
            return Err(Error::OutOfRange(format!(
                "rank tolerance must be positive, got {}",
                self.rank_rtol
            )));
        }
        Ok(())
    }
}
