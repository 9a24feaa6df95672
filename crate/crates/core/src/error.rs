use thiserror::Error;

/// Errors produced anywhere in the bound pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JsrError {
    #[error("invalid word: letter {letter} is outside 1..={m}")]
    InvalidWord { letter: usize, m: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("edge {edge} ({from} -> {to}) references an undeclared node")]
    DanglingEdge {
        edge: usize,
        from: String,
        to: String,
    },

    #[error("edge {edge} ({from} -> {to}) has an empty label")]
    EmptyLabel {
        edge: usize,
        from: String,
        to: String,
    },

    #[error("edge {edge} ({from} -> {to}) uses letter {letter} but the alphabet has {m} letters")]
    LetterOutOfRange {
        edge: usize,
        from: String,
        to: String,
        letter: usize,
        m: usize,
    },

    #[error("duplicate node identifier {0:?}")]
    DuplicateNode(String),

    #[error("subset construction exceeded {budget} reachable subsets; path-completeness undecided")]
    StateBudgetExceeded { budget: usize },

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("gamma must be positive, got {0}")]
    GammaNonPositive(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition not verified: {0}")]
    PreconditionUnverified(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("graph is not path-complete (no path for word {witness})")]
    GraphNotPathComplete { witness: String },

    #[error("no feasible gamma found after {halvings} halvings")]
    BracketFailure { halvings: usize },

    #[error("no approximation guarantee is known for {0}")]
    UnknownGuarantee(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, JsrError>;
