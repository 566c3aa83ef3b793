use serde::Serialize;
use thiserror::Error;

use resample::Error as EngineError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    EnumerationCap(String),
    #[error("{0}")]
    Data(String),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    exit_code: u8,
    message: String,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

impl CliError {
    pub const EXIT_VALIDATION: u8 = 2;
    pub const EXIT_IO: u8 = 3;
    pub const EXIT_CAP: u8 = 4;
    pub const EXIT_DATA: u8 = 5;

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => Self::EXIT_VALIDATION,
            CliError::Io(_) => Self::EXIT_IO,
            CliError::EnumerationCap(_) => Self::EXIT_CAP,
            CliError::Data(_) => Self::EXIT_DATA,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Io(_) => "io",
            CliError::EnumerationCap(_) => "enumeration_cap",
            CliError::Data(_) => "data",
        }
    }

    pub fn to_json(&self) -> String {
        let doc = ErrorDoc {
            error: ErrorBody {
                kind: self.kind(),
                exit_code: self.exit_code(),
                message: self.to_string(),
            },
        };
        serde_json::to_string(&doc).unwrap_or_else(|_| self.to_string())
    }

    pub fn io(context: impl std::fmt::Display, err: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl From<EngineError> for CliError {
    fn from(err: EngineError) -> Self {
        let message = err.to_string();
        match err {
            EngineError::UnknownStatistic { .. }
            | EngineError::InvalidParameter(_)
            | EngineError::ArityMismatch { .. }
            | EngineError::InvalidTable(_) => CliError::Validation(message),
            EngineError::EnumerationCap { .. } => CliError::EnumerationCap(message),
            EngineError::EmptySample
            | EngineError::NonFinite { .. }
            | EngineError::LengthMismatch { .. }
            | EngineError::TooFewObservations { .. }
            | EngineError::ZeroVariance(_)
            | EngineError::Csv(_)
            | EngineError::NonNumericCell { .. }
            | EngineError::RaggedRow { .. } => CliError::Data(message),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Io(format!("serializing report: {err}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Io(format!("writing csv: {err}"))
    }
}
