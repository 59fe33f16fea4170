use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("image format error: {0}")]
    Format(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("palette ranges of `{first}` and `{second}` overlap")]
    PaletteOverlap { first: String, second: String },

    #[error("schema violation at `{pointer}`: {message}")]
    Schema { pointer: String, message: String },

    #[error("missing artifacts in {dir}: expected {}", expected.join(", "))]
    MissingArtifacts { dir: PathBuf, expected: Vec<String> },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// Process exit code: 2 validation/config, 3 I/O, 4 internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::MissingArtifacts { .. } => 3,
            Error::Invariant(_) => 4,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}

impl From<image::ImageError> for Error {
    fn from(err: image::ImageError) -> Self {
        match err {
            image::ImageError::IoError(e) => Error::Io { path: PathBuf::new(), source: e },
            other => Error::Format(other.to_string()),
        }
    }
}
