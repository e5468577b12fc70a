use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("annotation csv line {line}: {message}")]
    Annotation { line: usize, message: String },

    #[error("cxt line {line}: {message}")]
    Cxt { line: usize, message: String },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("unknown convention `{0}`")]
    UnknownConvention(String),

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("object lists differ between contexts")]
    ObjectMismatch,

    #[error("attribute universes differ between contexts")]
    UniverseMismatch,

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("infeasible fixture: {0}")]
    Infeasible(String),

    #[error("attribute universe of size {size} exceeds the exhaustive limit of {limit}; restrict the attributes first")]
    UniverseTooLarge { size: usize, limit: usize },

    #[error("duplicate concept with intent {0}")]
    DuplicateConcept(String),

    #[error("unknown concept id {0}")]
    UnknownConcept(usize),

    #[error("unknown article `{0}`")]
    UnknownArticle(String),

    #[error("invalid map document: {0}")]
    Map(#[from] serde_json::Error),
}
