use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
/// Mode and position fields are 0-based; messages print them 1-based.
pub enum Error {
    #[error("not a permutation of 0..{len}: {values:?}")]
    InvalidPermutation { len: usize, values: Vec<usize> },

    #[error("operator at position {} has no definite +/- class; decompose it first", .position + 1)]
    NotPureClass { position: usize },

    #[error("mode {} is outside the model's mode table (size {n_modes}); modes are 1-based", .mode + 1)]
    UnknownMode { mode: usize, n_modes: usize },

    #[error("spin-momentum mode {} (pair {}) does not belong to any of the {n_pairs} Cooper pairs", .mode + 1, .mode / 2 + 1)]
    UnknownPair { mode: usize, n_pairs: usize },

    #[error("no contraction value declared for {left} {right}")]
    UndeclaredContraction { left: String, right: String },

    #[error("the operator product is empty")]
    EmptyProduct,

    #[error("pair partitions need an even number of positions, got {0}")]
    OddLength(usize),

    #[error("operator at position {} has no time label", .position + 1)]
    MissingTime { position: usize },

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("Fock space too large: {0}")]
    SpaceTooLarge(String),

    #[error("inconsistent reference state: {0}")]
    BadStateSpec(String),

    #[error("symbol {0} cannot be represented on this Fock space")]
    UnknownSymbol(String),

    #[error("invalid model: {0}")]
    BadModel(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
