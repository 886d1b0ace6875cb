use thiserror::Error;

/// Errors raised by data validation, analysis and I/O.
#[derive(Debug, Error)]
pub enum FdhError {
    #[error("dataset has no DMUs, inputs or outputs")]
    EmptyDataset,
    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("DMU `{dmu}`: {column} must be strictly positive")]
    NonPositiveValue { dmu: String, column: String },
    #[error("duplicate DMU name `{0}`")]
    DuplicateName(String),
    #[error("DMU index {index} out of range for {n} units")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("unknown DMU `{0}`")]
    UnknownDmu(String),
    #[error("point has {found_inputs} inputs and {found_outputs} outputs, dataset has {inputs} and {outputs}")]
    DimensionMismatch {
        inputs: usize,
        outputs: usize,
        found_inputs: usize,
        found_outputs: usize,
    },
    #[error("DMU `{0}` is not FDH-VRS efficient")]
    InefficientUnit(String),
    #[error("DMU `{dmu}`: scores fit no global returns-to-scale pattern (crs={crs}, nirs={nirs}, ndrs={ndrs})")]
    Unclassifiable {
        dmu: String,
        crs: f64,
        nirs: f64,
        ndrs: f64,
    },
    #[error("alpha {0} lies below the response domain")]
    OutsideDomain(f64),
    #[error("tolerance must lie in (0, 1e-3), got {0}")]
    InvalidTolerance(f64),
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },
    #[error("header has no `in_` columns")]
    NoInputColumns,
    #[error("header has no `out_` columns")]
    NoOutputColumns,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl FdhError {
    /// `true` for errors caused by the content of the input data.
    pub fn is_data_error(&self) -> bool {
        !matches!(
            self,
            FdhError::Io(_) | FdhError::Json(_) | FdhError::InvalidTolerance(_) | FdhError::InvalidConfig(_)
        )
    }
}

pub type Result<T, E = FdhError> = std::result::Result<T, E>;
