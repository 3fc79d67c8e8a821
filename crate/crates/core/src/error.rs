use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid resolver: {0}")]
    InvalidResolver(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid MDP: {0}")]
    InvalidMdp(String),
    #[error("invalid Zielonka DAG: {0}")]
    InvalidDag(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("input is not semantically resolvable: {0}")]
    NotResolvable(String),
    #[error("resource bound exceeded: {what} (limit {limit})")]
    ResourceLimit { what: String, limit: usize },
    #[error("deadline exceeded")]
    DeadlineExceeded,
    #[error("cancelled")]
    Cancelled,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by a resource guard rather than by the input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::ResourceLimit { .. } | Error::DeadlineExceeded | Error::Cancelled
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
