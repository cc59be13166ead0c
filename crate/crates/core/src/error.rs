use thiserror::Error;

/// Errors produced by the benefit engine and its file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A scenario, grid or parameter failed validation. `path` names the
    /// offending field the way it appears in a scenario document.
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },

    /// A point fell outside the grid where a per-cell lookup was required.
    #[error("point ({x}, {y}) lies outside the grid bounds")]
    OutOfDomain { x: f64, y: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("shape mismatch for {what}: expected {expected_ny}x{expected_nx}, found {found_ny}x{found_nx}")]
    ShapeMismatch {
        what: String,
        expected_ny: usize,
        expected_nx: usize,
        found_ny: usize,
        found_nx: usize,
    },

    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    /// The uniformity coefficient was requested on a field that includes
    /// negative (disamenity) contributions.
    #[error(
        "uniformity is not meaningful for fields that include disamenities (negative A); \
         compute it on the amenity-only field instead"
    )]
    DisamenityContribution,

    #[error("incompatible fields: {0}")]
    Incompatible(String),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
