use thiserror::Error;

/// Errors raised across the library.
///
/// The `Display` form is a single line of the shape `<kind>: <detail>` so the
/// CLI can forward it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain: {0}")]
    Domain(String),
    #[error("argument: {0}")]
    Argument(String),
    #[error("capacity: {0}")]
    Capacity(String),
    #[error("bracketing: {0}")]
    Bracketing(String),
    #[error("generator: {0}")]
    Generator(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
