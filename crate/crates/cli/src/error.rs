use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid scenario:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("validity flags failed: {}", .0.join(", "))]
    PhysicsFlags(Vec<String>),
    #[error("{module}: {source}")]
    Module {
        module: &'static str,
        #[source]
        source: magnetomech::Error,
    },
    #[error("output: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::PhysicsFlags(_) => 4,
            CliError::Module { .. } | CliError::Io(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Tag a core error with the module that raised it.
pub(crate) trait InModule<T> {
    fn in_module(self, module: &'static str) -> Result<T, CliError>;
}

impl<T> InModule<T> for magnetomech::Result<T> {
    fn in_module(self, module: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Module { module, source })
    }
}
