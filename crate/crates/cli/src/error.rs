use std::fmt;
use std::path::Path;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for filesystem and image decoding failures.
pub const EXIT_IO: i32 = 2;
/// Exit status for bad data, bad flags and inconsistent inputs.
pub const EXIT_DATA: i32 = 3;

/// A command failure, reported on standard error as `ERROR:<kind>:<detail>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: &'static str,
    pub detail: String,
    pub code: i32,
}

impl CliError {
    pub fn data(kind: &'static str, detail: impl Into<String>) -> Self {
        Self {
            kind,
            detail: detail.into(),
            code: EXIT_DATA,
        }
    }

    pub fn usage(detail: impl Into<String>) -> Self {
        Self::data("usage", detail)
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        Self {
            kind: "io",
            detail: format!("{}: {err}", path.display()),
            code: EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let detail = self.detail.replace(['\n', '\r'], " ");
        write!(f, "ERROR:{}:{}", self.kind, detail)
    }
}

impl std::error::Error for CliError {}

impl From<fetal_doppler::Error> for CliError {
    fn from(err: fetal_doppler::Error) -> Self {
        use fetal_doppler::Error as E;
        let kind = match &err {
            E::Io { .. } => "io",
            E::Image { .. } => "image",
            E::NoForeground => "no_foreground",
            E::InvalidIndex { .. } => "invalid_index",
            E::EmptyTable => "empty_table",
            E::InvalidLabel { .. } => "invalid_label",
            E::DuplicateId(_) => "duplicate_id",
            E::Parse { .. } => "parse",
            E::VersionMismatch { .. } => "version_mismatch",
            E::DegenerateSpec { .. } => "degenerate_spec",
            E::InvalidSpec(_) => "invalid_spec",
            E::InvalidConfig(_) => "invalid_config",
            E::InvalidFrame(_) => "invalid_frame",
        };
        let code = if err.is_io() { EXIT_IO } else { EXIT_DATA };
        Self {
            kind,
            detail: err.to_string(),
            code,
        }
    }
}
