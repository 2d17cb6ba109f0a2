use alloc::string::String;

/// Errors produced by the estimators, oracles and samplers.
///
/// The variants line up with the exit-code classes of the command-line tool:
/// bad data, bad parameters, degenerate input, and insufficient statistics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite value {value} at row {row}, column {column}")]
    NonFinite {
        row: usize,
        column: usize,
        value: f64,
    },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("matrix error: {0}")]
    Matrix(String),

    #[error("insufficient statistics: {0}")]
    Statistics(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! param_err {
    ($($arg:tt)*) => {
        $crate::Error::Parameter(alloc::format!($($arg)*))
    };
}
pub(crate) use param_err;
