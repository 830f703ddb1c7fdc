//! Error type shared by all core modules.

use thiserror::Error;

/// Errors produced by signal handling, feature extraction, model updates and
/// cascade routing.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("sampling rate must be a positive number of hertz")]
    ZeroRate,

    #[error("cannot decimate from {source_hz} Hz to {target_hz} Hz: target rate exceeds source")]
    RateAboveSource { source_hz: u32, target_hz: u32 },

    #[error("segment must contain at least one row and one channel")]
    EmptySegment,

    #[error("non-finite sample at row {row}, channel {channel}")]
    NonFiniteSample { row: usize, channel: usize },

    #[error("window of {window_s} s is not a whole number of samples at {hz} Hz")]
    NonIntegralWindow { window_s: f64, hz: u32 },

    #[error("feature computation requires a non-empty channel")]
    EmptyChannel,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    #[error("step requires at least one buffered observation")]
    EmptyWindow,

    #[error("label `{0}` is not part of the cascade")]
    UnknownLabel(String),

    #[error("invalid cascade spec: {0}")]
    InvalidSpec(String),

    #[error("segment rate {got_hz} Hz does not match the cascade source rate {expected_hz} Hz")]
    SegmentRateMismatch { expected_hz: u32, got_hz: u32 },

    #[error("invalid synthetic stream parameters: {0}")]
    InvalidSynthParams(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
