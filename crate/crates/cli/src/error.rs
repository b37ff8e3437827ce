use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::Solver(_) => "solver",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    /// `error[kind]: message` on one line.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("error[{}]: {}", self.kind(), msg.trim())
    }

    pub(crate) fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }

    pub(crate) fn solver(e: impl std::fmt::Display) -> Self {
        CliError::Solver(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
