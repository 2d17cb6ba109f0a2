use std::path::PathBuf;

/// Errors surfaced by the command-line layer, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or unusable input data.
    #[error("input error: {0}")]
    Input(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    /// Files that do not belong together.
    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => 2,
            CliError::Parameter(_) => 3,
            CliError::Consistency(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<copent_core::Error> for CliError {
    fn from(e: copent_core::Error) -> Self {
        use copent_core::Error as E;
        match e {
            E::NonFinite { .. } | E::Shape(_) | E::Degenerate(_) | E::Statistics(_) => {
                CliError::Input(e.to_string())
            }
            E::Parameter(_) | E::Matrix(_) => CliError::Parameter(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
