use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("cannot parse configuration: {0}")]
    Parse(#[from] toml::de::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed trajectory file: {0}")]
    Format(String),

    #[error("cannot write table: {0}")]
    Csv(#[from] csv::Error),

    #[error("cannot serialise report: {0}")]
    Serialize(#[from] toml::ser::Error),

    #[error(transparent)]
    Solver(#[from] navier_mild::Error),
}

impl HarnessError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        HarnessError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 validation, 2 contraction or blow-up, 3 invariant violation.
    pub fn exit_code(&self) -> i32 {
        use navier_mild::Error as E;
        match self {
            HarnessError::Config { .. }
            | HarnessError::Parse(_)
            | HarnessError::Io { .. }
            | HarnessError::Format(_) => 1,
            HarnessError::Solver(E::NoContraction { .. } | E::Blowup { .. }) => 2,
            HarnessError::Solver(
                E::InvalidArgument(_)
                | E::ScalingLine { .. }
                | E::Horizon { .. }
                | E::NegativeTime(_)
                | E::InsufficientDecade { .. },
            ) => 1,
            _ => 3,
        }
    }
}
