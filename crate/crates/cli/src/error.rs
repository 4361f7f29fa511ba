use spectra_forge::models::ModelError;
use spectra_forge::qalg::QalgError;
use spectra_forge::verify::VerifyError;
use thiserror::Error;

/// Exit code for a failed verification suite.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit code when no representation, real root or bracket exists.
pub const EXIT_NO_SOLUTION: i32 = 2;
/// Exit code for rejected parameters, quantum numbers or configuration.
pub const EXIT_INVALID_INPUT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("verification failed: {0}")]
    Failed(String),
    #[error("output: {0}")]
    Output(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_INVALID_INPUT,
            CliError::Model(e) | CliError::Verify(VerifyError::Model(e)) => model_exit_code(e),
            CliError::Verify(_) => EXIT_NO_SOLUTION,
            CliError::Failed(_) => EXIT_VERIFY_FAILED,
            CliError::Output(_) => EXIT_VERIFY_FAILED,
        }
    }
}

fn model_exit_code(e: &ModelError) -> i32 {
    match e {
        ModelError::UnknownModel(_)
        | ModelError::UnknownParameter { .. }
        | ModelError::UnknownQuantumNumber { .. }
        | ModelError::InvalidValue { .. }
        | ModelError::NegativeRadicand { .. }
        | ModelError::WrongKind(_) => EXIT_INVALID_INPUT,
        ModelError::Algebra(QalgError::ComplexRoot { .. }) | ModelError::Unirrep(_) => EXIT_NO_SOLUTION,
        ModelError::Algebra(_) | ModelError::Special(_) => EXIT_NO_SOLUTION,
    }
}
