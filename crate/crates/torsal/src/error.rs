use thiserror::Error;

/// Errors surfaced by the library.
///
/// [`Error::Input`] covers malformed or unsupported arrangements and maps to
/// exit code 2 in the CLI; [`Error::Check`] is a failed mathematical
/// verification and maps to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("integer overflow in sparse elimination")]
    Overflow,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
