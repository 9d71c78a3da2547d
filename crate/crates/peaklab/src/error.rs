//! Crate-wide error type.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong when constructing or combining objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letters must be distinct, `{0}` repeats")]
    DuplicateLetter(u32),
    #[error("letters must be positive")]
    ZeroLetter,
    #[error("letter `{0}` occurs in both words")]
    NotDisjoint(u32),
    #[error("operation requires a nonempty permutation")]
    EmptyPermutation,
    #[error("`{got}` is not a lacunar subset of [{n}]")]
    NotLacunar { n: usize, got: String },
    #[error("`{got}` is not a subset of [{n}]")]
    NotSubsetOfRange { n: usize, got: String },
    #[error("composition parts must be positive")]
    ZeroPart,
    #[error("statistic `{0}` does not factor through descent compositions")]
    NotDescentStatistic(&'static str),
    #[error("statistic `{0}` is not defined for this operation")]
    UnsupportedStatistic(&'static str),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("multiset difference would be negative at `{0}`")]
    MultisetNotContained(String),
    #[error("elements live in different bases")]
    BasisMismatch,
    #[error("elements carry different degree bounds ({0} vs {1})")]
    DegreeBoundMismatch(usize, usize),
    #[error("term of size {size} exceeds the degree bound {bound}")]
    DegreeExceeded { size: usize, bound: usize },
    #[error("computation would truncate beyond the degree bound {0}")]
    TruncationRequired(usize),
    #[error("polynomial is not the expansion of a quasisymmetric element")]
    NotQuasisymmetric,
    #[error("polynomial oracle needs at least {need} variables, has {have}")]
    TooFewVariables { need: usize, have: usize },
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("map is not weakly increasing")]
    NotWeaklyIncreasing,
    #[error("lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("cover relations contain a cycle")]
    CyclicPoset,
    #[error("labels must be injective")]
    NonInjectiveLabels,
    #[error("alphabet preset `{0}` is not supported here")]
    UnsupportedAlphabet(&'static str),
    #[error("ideal test needs max degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("verdicts from independent criteria disagree: {0}")]
    CrossCheckFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}
