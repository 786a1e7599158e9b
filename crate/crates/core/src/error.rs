use thiserror::Error;

/// Errors raised by instance validation, model construction and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the string set is empty")]
    EmptySet,

    #[error("string {index} is empty")]
    ZeroLength { index: usize },

    #[error("length mismatch{}: expected {expected}, found {found}", .index.map(|i| format!(" at string {i}")).unwrap_or_default())]
    LengthMismatch {
        /// 1-based position of the offending string, when it belongs to a set.
        index: Option<usize>,
        expected: usize,
        found: usize,
    },

    #[error("{name} = {value} is out of range 1..={max}")]
    IndexOutOfRange {
        name: &'static str,
        value: usize,
        max: usize,
    },

    #[error("symbol map is not injective: {first:?} and {second:?} both map to {value}")]
    NonInjectiveBijection { first: char, second: char, value: f64 },

    #[error("symbol map has no value for {0:?}")]
    UnmappedSymbol(char),

    #[error("search space of {size} candidates exceeds the limit of {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },

    #[error("{num_vars} variables exceed the exhaustive limit of {limit}")]
    TooManyVariables { num_vars: usize, limit: usize },

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
