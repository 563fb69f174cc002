use sepsemi_core::error::ErrorClass;

/// Errors of the command line and the pipelines.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sepsemi_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAIL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

/// Exit code for an error class.
pub fn class_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Input => exit::INPUT,
        ErrorClass::Numerical => exit::NUMERICAL,
        ErrorClass::Verification => exit::FAIL,
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => class_code(e.class()),
            CliError::Io(_) | CliError::Json(_) | CliError::Input(_) => exit::INPUT,
        }
    }
}
