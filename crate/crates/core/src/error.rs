use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: duplicate id {id}")]
    DuplicateId { id: String, line: usize },

    #[error("line {line}: negative citation count")]
    NegativeCount { line: usize },

    #[error("line {line}: publication {id} has pub_year {year} outside [{first_year}, {census_year}]")]
    YearOutOfRange {
        line: usize,
        id: String,
        year: i32,
        first_year: i32,
        census_year: i32,
    },

    #[error("line {line}: publication {id}: {message}")]
    CitationsByYear {
        line: usize,
        id: String,
        message: String,
    },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("no baseline cell for field {field} in year {year}")]
    MissingBaseline { field: String, year: i32 },

    #[error("unit {0} has no publications")]
    UnknownUnit(String),

    #[error("empty publication list")]
    EmptyPublications,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least 2 values, got {0}")]
    TooFewValues(usize),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no plottable units")]
    NoPlottableUnits,

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            message: message.into(),
        }
    }

    /// True for errors that come from the filesystem rather than the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
