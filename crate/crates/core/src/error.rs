use std::path::PathBuf;

use thiserror::Error;

/// A configuration problem, located by a dotted key path such as
/// `optimization.objectives.max_boron.goal`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// Caller violated an operation's precondition.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("usage error: {0}")]
pub struct UsageError(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerationError {
    #[error("no allowed decision could be placed at position {position} within the retry budget")]
    PositionExhausted { position: usize },
    #[error("constrained generation failed after {restarts} restarts")]
    RestartsExhausted { restarts: usize },
    #[error("generation precondition failed: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvaluationError {
    #[error("objective `{0}` missing from evaluation result")]
    MissingObjective(String),
    #[error("solution is not a valid input for this evaluator: {0}")]
    InvalidSolution(String),
    #[error("external command `{command}` failed with {status} (workdir {workdir:?}); stderr: {stderr}")]
    CommandFailed {
        command: String,
        status: String,
        workdir: PathBuf,
        stderr: String,
    },
    #[error("external command `{command}` timed out after {seconds} s (workdir {workdir:?})")]
    Timeout {
        command: String,
        seconds: f64,
        workdir: PathBuf,
    },
    #[error("malformed response {file:?}: {message}")]
    MalformedResponse { file: PathBuf, message: String },
    #[error("I/O error during evaluation at {path:?}: {message}")]
    Io { path: PathBuf, message: String },
}

/// Exhaustive enumeration refused because the feasible space is too large.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("enumeration refused: more than {cap} feasible solutions (upper bound {estimate:.3e})")]
pub struct OracleCapExceeded {
    pub cap: u64,
    pub estimate: f64,
}

/// Top-level error for optimizer runs, report writing and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Generation(#[from] GenerationError),
    #[error("evaluation of solution [{solution}] failed: {source}")]
    Evaluation {
        solution: String,
        #[source]
        source: EvaluationError,
    },
    #[error(transparent)]
    OracleCap(#[from] OracleCapExceeded),
    #[error("solution is infeasible: {0}")]
    Infeasible(String),
    #[error("I/O error at {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 config, 2 evaluation, 3 infeasible or oracle refusal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) | Error::Io { .. } => 1,
            Error::Evaluation { .. } => 2,
            Error::Generation(_) | Error::OracleCap(_) | Error::Infeasible(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
