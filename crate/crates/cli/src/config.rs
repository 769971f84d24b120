use std::path::PathBuf;

use linv_core::arith::is_prime;
use linv_core::modsym::Sign;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

/// Everything that determines a run's output, echoed into each report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
    pub cache_dir: PathBuf,
    pub format: Format,
    pub dual: bool,
    pub parallel: bool,
}

pub const MIN_PRECISION: u32 = 5;
pub const MAX_DEPTH: u32 = 4;

impl RunConfig {
    pub fn new(command: &str, cache_dir: PathBuf, format: Format, dual: bool, parallel: bool) -> Self {
        RunConfig {
            command: command.into(),
            curve: None,
            p: None,
            precision: None,
            depth: None,
            sign: None,
            cache_dir,
            format,
            dual,
            parallel,
        }
    }

    /// Desk-scale guards for the curve commands.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(p) = self.p {
            if !is_prime(p) {
                return Err(CliError::Config(format!("p = {p} is not prime")));
            }
        }
        if let Some(n) = self.precision {
            if n < MIN_PRECISION {
                return Err(CliError::Config(format!("precision {n} is below {MIN_PRECISION}")));
            }
        }
        if let Some(d) = self.depth {
            if !(1..=MAX_DEPTH).contains(&d) {
                return Err(CliError::Config(format!("depth {d} is outside 1..={MAX_DEPTH}")));
            }
        }
        Ok(())
    }
}
