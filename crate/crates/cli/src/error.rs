use std::fmt::Display;

/// Exit code 2: the inputs or flags are wrong. Exit code 3: the inputs were
/// fine but something failed while processing them.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input(_) => 2,
            Self::Runtime(_) => 3,
        }
    }
}

/// `result.map_err(...)` for any displayable error, tagged input or runtime.
pub trait Tag<T> {
    fn input_err(self, context: impl Display) -> Result<T, CliError>;
    fn runtime_err(self, context: impl Display) -> Result<T, CliError>;
}

impl<T, E: Display> Tag<T> for Result<T, E> {
    fn input_err(self, context: impl Display) -> Result<T, CliError> {
        self.map_err(|e| CliError::Input(format!("{context}: {e}")))
    }

    fn runtime_err(self, context: impl Display) -> Result<T, CliError> {
        self.map_err(|e| CliError::Runtime(format!("{context}: {e}")))
    }
}
