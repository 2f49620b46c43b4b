use alloc::string::String;
use core::fmt;

/// Errors raised by the matrix, matroid and spike layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    UnknownLabel(String),
    DuplicateLabel(String),
    /// A label reserved for the es-splitting columns is already in use.
    ReservedLabel(String),
    InvalidBitstring(String),
    /// An enumeration would need `2^required` items, above the configured limit.
    MemoryBudget {
        required: usize,
        limit: usize,
    },
    /// Ground sets are stored as 64-bit masks.
    GroundTooLarge(usize),
    RankTooSmall(usize),
    InvalidC3(String),
    InvalidCircuits(String),
    NotCircuitHyperplane,
    ElementNotInX(String),
    NotBinary,
    ParityMismatch {
        rank: usize,
    },
    Unsupported(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnknownLabel(l) => write!(f, "unknown label `{l}`"),
            Error::DuplicateLabel(l) => write!(f, "duplicate label `{l}`"),
            Error::ReservedLabel(l) => write!(f, "label `{l}` is reserved for es-splitting"),
            Error::InvalidBitstring(s) => write!(f, "invalid bitstring `{s}`"),
            Error::MemoryBudget { required, limit } => write!(
                f,
                "enumeration of 2^{required} items exceeds the budget of 2^{limit}"
            ),
            Error::GroundTooLarge(n) => write!(f, "ground set of {n} elements exceeds 64"),
            Error::RankTooSmall(r) => write!(f, "spike rank must be at least 3, got {r}"),
            Error::InvalidC3(why) => write!(f, "invalid transversal-circuit family: {why}"),
            Error::InvalidCircuits(why) => write!(f, "circuit axioms violated: {why}"),
            Error::NotCircuitHyperplane => f.write_str("set is not a circuit-hyperplane"),
            Error::ElementNotInX(e) => write!(f, "split element `{e}` is not in X"),
            Error::NotBinary => f.write_str("circuit family is not binary"),
            Error::ParityMismatch { rank } => {
                write!(f, "variant does not apply to rank {rank}")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
