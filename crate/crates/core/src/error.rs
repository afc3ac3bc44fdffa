use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the segmentation, feature and classification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no connected component survived the area filter")]
    NoForeground,

    #[error("invalid Zernike index (n={n}, m={m})")]
    InvalidIndex { n: u32, m: u32 },

    #[error("empty sample table")]
    EmptyTable,

    #[error("label {label} is not valid for sample `{id}` under this problem")]
    InvalidLabel { id: String, label: String },

    #[error("duplicate sample id `{0}`")]
    DuplicateId(String),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("unsupported model version {found} (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },

    #[error("degenerate shape spec for `{id}`: {reason}")]
    DegenerateSpec { id: String, reason: String },

    #[error("invalid shape spec: {0}")]
    InvalidSpec(String),

    #[error("invalid segmentation config: {0}")]
    InvalidConfig(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Image { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(row: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            row,
            message: message.into(),
        }
    }

    /// True for failures of the filesystem or image decoding rather than the data itself.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Image { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
