use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] steklov_core::Error),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("inequality violated: {0}")]
    Violation(String),
}

impl CliError {
    /// 0 ok, 1 I/O, 2 validation, 3 solver, 4 violated inequality.
    pub fn exit_code(&self) -> i32 {
        use steklov_core::Error as E;
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Violation(_) => 4,
            CliError::Core(e) => match e {
                E::Domain(_) | E::Inadmissible(_) | E::Geometry(_) => 2,
                E::Assertion(_) => 4,
                E::Overflow(_)
                | E::NonConvergence(_)
                | E::Numerical(_)
                | E::Factorization { .. }
                | E::MassNormalization { .. }
                | E::ZeroDenominator => 3,
            },
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

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::Validation(format!("malformed JSON: {e}"))
        }
    }
}
