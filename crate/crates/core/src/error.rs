//! Error type shared by all modules.

use crate::channel::ChannelKind;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A distribution or configuration parameter is outside its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was called with a config of the wrong channel kind.
    #[error("config mismatch: operation requires {expected} but config is {actual}")]
    ConfigMismatch {
        expected: ChannelKind,
        actual: ChannelKind,
    },

    /// Matrix or vector dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A quantity left its mathematical domain (e.g. nonpositive mean).
    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    /// Gamma moment matching needs strictly positive variance.
    #[error("degenerate fit: variance must be positive")]
    DegenerateFit,

    /// A quadrature failed to reach its accuracy target.
    #[error("accuracy failure: achieved {achieved:e}, target {target:e} (estimate {estimate})")]
    AccuracyFailure {
        achieved: f64,
        target: f64,
        estimate: f64,
    },

    /// An operation requiring data got an empty input.
    #[error("empty input")]
    EmptyInput,

    /// The closed form does not cover the requested regime.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
}

pub type Result<T> = std::result::Result<T, Error>;
