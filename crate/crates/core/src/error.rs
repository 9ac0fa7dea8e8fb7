use thiserror::Error;

use crate::dictionary::DictionaryError;
use crate::logits::LogitError;
use crate::prevalence::PrevalenceError;
use crate::rank::RankError;
use crate::scanner::ScanError;
use crate::stats::StatsError;
use crate::templates::TemplateError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Dictionary(#[from] DictionaryError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Logits(#[from] LogitError),
    #[error(transparent)]
    Prevalence(#[from] PrevalenceError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// 1 usage, 2 data, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Usage(_) => 1,
            Error::Io { .. }
            | Error::Dictionary(DictionaryError::Io { .. })
            | Error::Scan(ScanError::Io(_))
            | Error::Template(TemplateError::Io { .. })
            | Error::Logits(LogitError::Io { .. })
            | Error::Prevalence(PrevalenceError::Io { .. }) => 3,
            Error::Rank(RankError::Csv(e)) | Error::Prevalence(PrevalenceError::Csv(e))
                if e.is_io_error() =>
            {
                3
            }
            _ => 2,
        }
    }
}
