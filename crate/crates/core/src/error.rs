use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed line in a `.names`, `.data`, CSV or rules file. Lines are 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error(
        "subset class weights do not add up to the parent distribution (relative error {0:e})"
    )]
    MassMismatch(f64),

    #[error("discretization rules do not match the dataset: {0}")]
    RuleMismatch(String),

    #[error("cannot build folds: {0}")]
    Folds(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("tree file: {0}")]
    TreeFormat(String),

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: Box<Error> },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
