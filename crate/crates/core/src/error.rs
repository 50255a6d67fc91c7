use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field GF({0}); expected 2, 3 or 5")]
    UnsupportedField(u8),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-admissible relations: {0}")]
    NonAdmissible(String),

    #[error("infinite dimensional: more than {cap} irreducible paths")]
    InfiniteDimensional { cap: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("empty vertex subset")]
    EmptySigma,

    #[error("enumeration cap exceeded ({what}: {size} elements, cap {cap})")]
    EnumerationCap {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("search budget exceeded at dimension vector {dimvec:?} ({size} candidates, budget {budget})")]
    SearchBudget {
        dimvec: Vec<usize>,
        size: u128,
        budget: u128,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("not a local extension")]
    NotLocalExtension,

    #[error("modules over different algebras")]
    AlgebraMismatch,
}

impl Error {
    /// Cap and budget failures mean "undecided at the configured scale".
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::EnumerationCap { .. } | Error::SearchBudget { .. }
        )
    }
}
