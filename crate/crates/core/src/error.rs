use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated an operation's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A path-loss evaluation hit a zero distance.
    #[error("singular geometry: {0}")]
    Singularity(String),

    /// A numerical routine failed to converge to its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

/// Bails out with [`Error::InvalidParameter`] unless `cond` holds.
///
/// The expansion negates `cond` rather than inverting it so that float
/// comparisons reject NaN: `!(x > y)` holds for NaN where `x <= y` does not.
macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !($cond) {
            return Err($crate::error::Error::invalid(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
