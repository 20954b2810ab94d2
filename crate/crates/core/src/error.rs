use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("image {image} out of range 1..={n}")]
    ImageOutOfRange { image: i64, n: usize },

    #[error("malformed transformation text: {0}")]
    Malformed(String),

    #[error("transformation {0} is not aperiodic")]
    NotAperiodic(String),

    #[error("transformation {0} is partial where a full transformation is required")]
    NotTotal(String),

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("closure exceeded the ceiling of {limit} elements")]
    ClosureTooLarge { limit: usize },

    #[error("{what} out of supported range: {value}")]
    OutOfRange { what: &'static str, value: usize },

    #[error("automaton is not minimal")]
    NotMinimal,

    #[error("the language is empty, so the quotient IDFA has no states")]
    EmptyLanguage,

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("malformed order: {0}")]
    InvalidOrder(String),

    #[error("search ({n}, {k}) exceeds the budget table; pass the override to run it")]
    BudgetExceeded { n: usize, k: usize },

    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
