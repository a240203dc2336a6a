use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: undeclared generator `{name}`")]
    UndeclaredGenerator { line: usize, name: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("letter {letter} out of range for alphabet of size {size}")]
    LetterOutOfRange { letter: usize, size: usize },

    #[error("elements belong to different presentations")]
    MixedPresentations,

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// A configurable resource cap was hit; the computation makes no claim.
    #[error("{what} budget exceeded (limit {limit})")]
    Budget { what: &'static str, limit: usize },

    #[error("invalid coset transversal: {0}")]
    InvalidTransversal(String),

    #[error("invalid preset: {0}")]
    InvalidPreset(String),

    #[error("matrix is not expanding: {0}")]
    NonExpanding(String),

    #[error("path lifting failed: {0}")]
    BranchAmbiguity(String),

    #[error("path passes too close to a postcritical point: {0}")]
    Clearance(String),

    #[error("preimage tree nodes not separated at level {level} (distance {distance:e})")]
    Separation { level: usize, distance: f64 },

    #[error("ambiguous endpoint match: {0}")]
    AmbiguousMatch(String),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("no restriction word found: {0}")]
    NoMatch(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
