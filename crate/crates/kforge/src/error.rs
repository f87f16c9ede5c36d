use std::path::PathBuf;

/// Errors of the IO layer, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] kforge_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invariant violated: {0}")]
    Violation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

impl Error {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// `2` for bad input, `1` for everything that went wrong while running.
    pub fn exit_code(&self) -> i32 {
        use kforge_core::Error as E;
        match self {
            Error::Config(_) | Error::Json { .. } => EXIT_INVALID,
            Error::Core(e) => match e {
                E::InvalidParams(_)
                | E::InvalidEps { .. }
                | E::InvalidParameter(_)
                | E::InvalidInterval(_)
                | E::UnsupportedCodimension { .. }
                | E::SupportCollision { .. }
                | E::Plan { .. } => EXIT_INVALID,
                E::Ball { source, .. } if matches!(**source, E::InvalidParameter(_)) => EXIT_INVALID,
                _ => EXIT_VIOLATION,
            },
            _ => EXIT_VIOLATION,
        }
    }
}
