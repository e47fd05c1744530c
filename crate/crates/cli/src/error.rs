use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] onecircle::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("self-test failed: {0} failing criteria")]
    SelfTest(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for bad input or out-of-domain parameters, 3 for packings that fail
    /// validation, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(e) => match e {
                onecircle::Error::Numeric(_) => 1,
                _ => 2,
            },
            CliError::Validation(_) => 3,
            CliError::SelfTest(_) | CliError::Io(_) => 1,
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
