use logkg::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input: exit code 2.
    #[error("validation: {field}: {reason}")]
    Validation { field: String, reason: String },
    /// The computation itself failed: exit code 3.
    #[error("numerical: {0}")]
    Numerical(String),
    /// Writing the output failed: exit code 1.
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn validation(field: &str, reason: impl Into<String>) -> Self {
        Self::Validation {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation { .. } => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 1,
        }
    }

    /// Attribute a library error to the input field it concerns; errors that
    /// are not about the input are numerical failures.
    pub fn from_core(field: &str, err: Error) -> Self {
        match err {
            Error::Branch { c, source } => match Self::from_core(field, *source) {
                Self::Validation { field, reason } => Self::Validation {
                    field,
                    reason: format!("at c = {c}: {reason}"),
                },
                Self::Numerical(m) => Self::Numerical(format!("at c = {c}: {m}")),
                other => other,
            },
            Error::InvalidParams(_)
            | Error::Domain(_)
            | Error::AmplitudeOutOfRange { .. }
            | Error::PeriodOutOfRange { .. }
            | Error::WindowViolation { .. }
            | Error::DomainTooSmall(_) => Self::validation(field, err.to_string()),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Io(e.to_string())
    }
}
