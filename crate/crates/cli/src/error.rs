use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] linv_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cache corrupt: {0}")]
    CacheCorrupt(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 2 domain errors, 3 parse errors, 4 cache corruption.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(linv_core::Error::Parse(_)) | CliError::Parse(_) => 3,
            CliError::Domain(_) | CliError::Config(_) | CliError::Io(_) => 2,
            CliError::CacheCorrupt(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            3 => "parse",
            4 => "cache",
            _ => "domain",
        }
    }
}
