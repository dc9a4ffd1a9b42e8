//! Error type shared by every module in the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
///
/// File-level problems (I/O, PGM parsing) are distinguished from domain
/// errors (bad windows, mismatched dimensions, degenerate parameters) so the
/// CLI can map them to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed PGM header: {detail}")]
    PgmHeader { path: PathBuf, detail: String },

    #[error("{path}: unsupported PGM maxval {maxval} (only 255 is supported)")]
    PgmMaxval { path: PathBuf, maxval: u32 },

    #[error("{path}: truncated PGM payload: expected {expected} pixel bytes, found {found}")]
    PgmTruncated {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("invalid plane dimensions {width}x{height} (need width >= {min_width}, height >= {min_height})")]
    InvalidDimensions {
        width: usize,
        height: usize,
        min_width: usize,
        min_height: usize,
    },

    #[error("plane data length {len} does not match {width}x{height}")]
    PlaneLength {
        width: usize,
        height: usize,
        len: usize,
    },

    #[error("plane contains a non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("median window {window} is invalid for a {width}x{height} plane (must be odd, >= 3 and <= min(width, height))")]
    InvalidWindow {
        window: usize,
        width: usize,
        height: usize,
    },

    #[error("noise sigma must be finite and >= 0, got {sigma}")]
    InvalidSigma { sigma: f64 },

    #[error("noise mean must be finite, got {mean}")]
    InvalidMean { mean: f64 },

    #[error("Gaussian density is degenerate for sigma = 0")]
    DegenerateSigma,

    #[error("threshold inputs must be >= 0, got sigma_hat = {sigma_hat}, sigma_x = {sigma_x}")]
    NegativeThresholdInput { sigma_hat: f64, sigma_x: f64 },

    #[error("MSE must be >= 0, got {mse}")]
    NegativeMse { mse: f64 },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
}

impl Error {
    /// Process exit code for the CLI: 2 for file/format problems, 3 for
    /// domain errors. Usage errors (exit 1) are handled by the CLI itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::PgmHeader { .. }
            | Error::PgmMaxval { .. }
            | Error::PgmTruncated { .. } => 2,
            _ => 3,
        }
    }
}
