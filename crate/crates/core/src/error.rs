use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the algorithmic core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A column (axis or attribute) name that the cloud does not carry.
    UnknownColumn(String),
    /// No rows survived construction or filtering.
    EmptyCloud,
    /// The cloud violates one of its structural invariants.
    InvalidCloud(String),
    /// A column was used as numbers but holds text.
    NotNumeric(String),
    /// A numeric parameter outside its domain, e.g. `epsilon <= 0`.
    InvalidParameter(String),
    /// Two inputs that must describe the same cloud or graph do not.
    Consistency(String),
    /// A per-row function has no value for a row that needs one.
    IncompleteFunction { label: String, row: usize },
    /// A ball id that the graph does not contain.
    UnknownBall(u32),
    /// A group of balls was empty.
    EmptyGroup,
    /// A normalising scale of zero on the named axis.
    DegenerateScale(String),
    /// Too few observations for the requested statistic.
    SampleTooSmall { needed: usize, got: usize },
    /// The named regressor is a linear combination of earlier columns.
    Collinear(String),
    /// Vectors of different length where equal length is required.
    DimensionMismatch { expected: usize, got: usize },
}

impl Error {
    /// Stable, machine-readable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownColumn(_) => "unknown_column",
            Error::EmptyCloud => "empty_cloud",
            Error::InvalidCloud(_) => "invalid_cloud",
            Error::NotNumeric(_) => "not_numeric",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Consistency(_) => "consistency",
            Error::IncompleteFunction { .. } => "incomplete_function",
            Error::UnknownBall(_) => "unknown_ball",
            Error::EmptyGroup => "empty_group",
            Error::DegenerateScale(_) => "degenerate_scale",
            Error::SampleTooSmall { .. } => "sample_too_small",
            Error::Collinear(_) => "collinear",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownColumn(name) => write!(f, "unknown column `{name}`"),
            Error::EmptyCloud => f.write_str("no rows left in the point cloud"),
            Error::InvalidCloud(msg) => write!(f, "invalid point cloud: {msg}"),
            Error::NotNumeric(name) => write!(f, "column `{name}` is not numeric"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Consistency(msg) => write!(f, "inconsistent inputs: {msg}"),
            Error::IncompleteFunction { label, row } => {
                write!(f, "`{label}` has no value for row {row}")
            }
            Error::UnknownBall(id) => write!(f, "unknown ball id {id}"),
            Error::EmptyGroup => f.write_str("ball group is empty"),
            Error::DegenerateScale(axis) => {
                write!(f, "axis `{axis}` has zero standard deviation")
            }
            Error::SampleTooSmall { needed, got } => {
                write!(f, "sample too small: need at least {needed} values, got {got}")
            }
            Error::Collinear(name) => {
                write!(f, "design matrix is rank deficient: `{name}` is collinear")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
        }
    }
}

impl core::error::Error for Error {}
