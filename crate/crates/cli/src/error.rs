//! Error type mapping every failure onto the tool's exit-code contract:
//! 0 success, 2 invalid input, 3 model not convergent where convergence
//! is required, 4 solver finished without converging.

use thiserror::Error;

pub type ExitCode = i32;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("model is not convergent: {0}")]
    NotConvergent(String),
    #[error("solver stopped at the iteration cap without converging")]
    SolverNotConverged,
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::NotConvergent(_) => 3,
            CliError::SolverNotConverged => 4,
        }
    }

    /// Machine-readable diagnostic for stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Validation(_) => "validation",
            CliError::NotConvergent(_) => "not_convergent",
            CliError::SolverNotConverged => "solver_not_converged",
        };
        serde_json::json!({
            "error": { "kind": kind, "detail": self.to_string(), "exit_code": self.exit_code() }
        })
    }
}

pub fn io_err(path: &std::path::Path, source: std::io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), source }
}
