use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Caller violated a precondition (mismatched weights, out-of-range lookup, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// A series without an invertible constant term was inverted.
    #[error("singular series: constant term is zero")]
    SingularSeries,
    /// A parameter choice makes some required factor vanish or blow up.
    #[error("singular parameter: {0}")]
    SingularParameter(String),
    /// Coincident evaluation points or similar degenerate input.
    #[error("singular input: {0}")]
    SingularInput(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    /// An oracle was asked for a size it refuses to enumerate.
    #[error("scale guard: {0}")]
    ScaleGuard(String),
}

impl Error {
    /// Stable machine-readable code for this error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::SingularSeries => "singular_series",
            Error::SingularParameter(_) => "singular_parameter",
            Error::SingularInput(_) => "singular_input",
            Error::DivisionByZero(_) => "division_by_zero",
            Error::ScaleGuard(_) => "scale_guard",
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
