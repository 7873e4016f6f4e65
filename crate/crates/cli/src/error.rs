use singular_bie_core::Error as CoreError;

/// Failures of a command, each mapped to a process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// One or more verification checks failed.
    #[error("{0} verification check(s) failed")]
    VerifyFailed(usize),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver error: {message} (condition estimate: {condition})")]
    Solver { message: String, condition: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Solver { .. } => 3,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidAlpha(_)
            | CoreError::Incompatible(_)
            | CoreError::OutOfDomain(..)
            | CoreError::Domain(_)
            | CoreError::DegenerateSurface { .. }
            | CoreError::Dimension { .. } => CliError::Config(e.to_string()),
            CoreError::SingularSystem { condition } => {
                CliError::Solver { message: e.to_string(), condition: format!("{condition:.3e}") }
            }
            CoreError::EigenvalueCase => CliError::Solver { message: e.to_string(), condition: "infinite".into() },
            other => CliError::Solver { message: other.to_string(), condition: "unavailable".into() },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
