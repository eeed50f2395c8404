use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty identifier")]
    EmptyIdentifier,

    #[error("no splittable content in {0:?}")]
    NoSplittableContent(String),

    #[error("empty term sequence")]
    EmptyTermSequence,

    /// A line-oriented input (TSV, JSON lines, config) could not be parsed.
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("{origin}:{line}: missing required field `{field}`")]
    MissingField {
        origin: String,
        line: usize,
        field: String,
    },

    #[error("synonym/antonym conflict between {0:?} and {1:?}")]
    SynonymAntonymConflict(String, String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("not a git repository: {}", .0.display())]
    NotARepository(PathBuf),

    #[error("git failed: {0}")]
    Git(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(origin: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}
