use sbc_core::pipelines::PipelineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Malformed container or input data.
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Compression errors: budget overruns, bad input data, anything else
    /// is a plain failure.
    pub fn from_compress(e: PipelineError) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else if matches!(e, PipelineError::Input(_)) || e.is_format() {
            CliError::Input(e.to_string())
        } else {
            CliError::Failed(e.to_string())
        }
    }

    /// Decompression errors: everything but a budget overrun is a bad
    /// container.
    pub fn from_decompress(e: PipelineError) -> Self {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}
