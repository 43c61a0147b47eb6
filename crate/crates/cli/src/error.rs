use latcoh::complex::ComplexError;
use latcoh::reduction::ReductionError;
use latcoh::series::SeriesError;
use latcoh::verify::VerifyError;
use latcoh::{GraphError, SpecError};

/// Exit codes: 1 failed identity, 2 parse, 3 validation, 4 budget, 5 internal.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Budget(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) | CliError::Budget(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        if e.is_syntax() {
            CliError::Parse(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Budget { .. } => CliError::Budget(e.to_string()),
            ComplexError::RectTooSmall(_) => CliError::Validation(e.to_string()),
            ComplexError::Inconsistent(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::TooLarge(_) => CliError::Budget(e.to_string()),
            SpecError::Mismatch(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Complex(c) => c.into(),
            SeriesError::Spec(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Complex(c) => c.into(),
            ReductionError::Spec(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Complex(c) => c.into(),
            VerifyError::Spec(s) => s.into(),
            VerifyError::Series(s) => s.into(),
        }
    }
}
