use thiserror::Error;

/// Errors raised by constructors and procedures across the crate.
///
/// Property violations (a failed axiom, a non-thin interval) are not errors;
/// they come back as ordinary return values from the checkers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("invalid chirotope: Grassmann-Plucker relation fails at {0:?}")]
    InvalidChirotope([usize; 4]),
    #[error("element {0} is a loop")]
    LoopElement(usize),
    #[error("elements {0} and {1} are not comparable")]
    NotComparable(usize, usize),
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("n = {n} exceeds the limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("element not found: {0}")]
    ElementNotFound(String),
    #[error("realization does not realize the oriented matroid: {0}")]
    RealizationMismatch(String),
    #[error("{0} is not a coatom")]
    NotACoatom(String),
    #[error("no nonzero covector lies below {0}")]
    EmptyBelowSet(String),
    #[error("covectors below {0} have no unique maximum")]
    NonUniqueMax(String),
    #[error("row space of Y is not contained in row space of X")]
    NotContained,
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("not an atom ordering: {0}")]
    NotAnAtomOrdering(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
