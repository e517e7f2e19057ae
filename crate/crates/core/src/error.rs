use std::path::PathBuf;

use thiserror::Error;

/// Problems reading or validating a flat `key = value` configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, found {content:?}")]
    Syntax { line: usize, content: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("key `{key}`: cannot parse {value:?}")]
    Unparsable { key: String, value: String },
    #[error("key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("override {0:?} is not of the form KEY=VALUE")]
    BadOverride(String),
}

impl ConfigError {
    /// Key the error refers to, when there is one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::DuplicateKey { key, .. }
            | ConfigError::Unparsable { key, .. }
            | ConfigError::Invalid { key, .. } => Some(key),
            ConfigError::UnknownKey(key) | ConfigError::MissingKey(key) => Some(key),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("element array has {found} entries, the surface has {expected} elements")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("reflection amplitude {value} of element {index} is outside [0, 1]")]
    AmplitudeOutOfRange { index: usize, value: f64 },
    #[error("no candidate sites given")]
    NoCandidates,
    #[error("exhaustive search over {levels}^{elements} profiles exceeds the tractability guard")]
    Intractable { levels: usize, elements: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
