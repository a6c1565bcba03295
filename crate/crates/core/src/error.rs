use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("dialog {0:?} has no utterances")]
    EmptyDialog(String),

    #[error("line {line}: {message}")]
    Record { line: usize, message: String },

    #[error("line {line}: unknown role {role:?} (expected customer, agent or portal_user)")]
    UnknownRole { line: usize, role: String },

    #[error("dialog {dialog:?} mixes {roles} roles; corpora with more than two roles must be read in single-role mode")]
    RoleModeMismatch { dialog: String, roles: usize },

    #[error("dialog {dialog:?} has domain {found:?} but the corpus domain is {expected:?}")]
    DomainMismatch {
        dialog: String,
        expected: String,
        found: String,
    },

    #[error("no non-stop tokens left for domain-term extraction")]
    EmptyVocabulary,

    #[error("lexicon has no domain terms")]
    EmptyDomainTerms,

    #[error("role comparison needs a two-role (customer/agent) corpus; single-role corpora treat every speaker alike")]
    NotTwoRole,

    #[error("trimming removed every dialog")]
    OverTrimmed,

    #[error("dialog {dialog:?} has {turns} turns, fewer than the {baskets} baskets requested")]
    TooShort {
        dialog: String,
        turns: usize,
        baskets: usize,
    },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
