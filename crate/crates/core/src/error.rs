use thiserror::Error;

/// Errors produced by the resampling engines and the data model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("observation {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("paired sample columns differ in length ({xs} vs {ys})")]
    LengthMismatch { xs: usize, ys: usize },

    #[error("{what} needs at least {required} observations, got {actual}")]
    TooFewObservations {
        what: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("statistic `{statistic}` expects {expected} data")]
    ArityMismatch {
        statistic: &'static str,
        expected: &'static str,
    },

    #[error("unknown statistic `{name}`; valid statistics are: {valid}")]
    UnknownStatistic { name: String, valid: String },

    #[error("{0} has zero variance")]
    ZeroVariance(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration of {count} items exceeds the cap of {cap}: {hint}")]
    EnumerationCap {
        count: String,
        cap: u64,
        hint: &'static str,
    },

    #[error("invalid enrichment table: {0}")]
    InvalidTable(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("non-numeric cell at row {row}, column {column}: `{cell}`")]
    NonNumericCell {
        row: usize,
        column: usize,
        cell: String,
    },

    #[error("ragged csv: row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
