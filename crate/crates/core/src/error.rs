//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// No usable input (empty directory, empty score list, ...).
    #[error("EmptyInput: {0}")]
    EmptyInput(String),

    /// A file could not be read, parsed or written.
    #[error("FileError: {path}: {message}")]
    FileError { path: PathBuf, message: String },

    /// Multi-channel image rejected; inputs must be single-channel grayscale.
    #[error("ChannelError: {path}: expected single-channel grayscale, found {channels} channels")]
    ChannelError { path: PathBuf, channels: u8 },

    /// Wavelet kernel taps are not L2-normalized.
    #[error("KernelError: {0}")]
    KernelError(String),

    /// Fewer samples than the operation requires.
    #[error("SampleSizeError: {0}")]
    SampleSizeError(String),

    /// Vector/matrix dimensions disagree.
    #[error("DimError: expected dimension {expected}, got {got}")]
    DimError { expected: usize, got: usize },

    /// Two feature matrices carry different catalogs.
    #[error("CatalogError: {0}")]
    CatalogError(String),

    /// Non-finite values where finite ones are required.
    #[error("NumericError: {0}")]
    NumericError(String),

    /// Paired operations received mismatched image ids.
    #[error("PairingError: {0}")]
    PairingError(String),

    /// Parameter outside its documented range.
    #[error("ParamError: {0}")]
    ParamError(String),

    /// A feature came out non-finite after all documented fallbacks.
    #[error("InternalError: non-finite feature '{feature}' ({variant}) for image '{image}'")]
    InternalError {
        image: String,
        variant: String,
        feature: String,
    },
}
