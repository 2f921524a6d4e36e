use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A requested object would exceed a dense or enumeration budget.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The operation needs basis-permutation elements but found a dense unitary.
    #[error("unsupported representation: {0}")]
    Unsupported(String),

    #[error("group closure exceeded cap of {cap} elements")]
    Overflow { cap: usize },

    /// Two unitaries agree to 1e-8 but not to 1e-10, so deduplication is unreliable.
    #[error("ambiguous unitary deduplication: max entrywise distance {distance:e}")]
    Ambiguity { distance: f64 },

    #[error("generator set is not symmetric: inverse of member {0} is missing")]
    NotSymmetric(usize),

    #[error("generator set contains the identity (member {0})")]
    ContainsIdentity(usize),

    #[error("generator set does not generate the group: closure has {reached} of {total} elements")]
    NotGenerating { reached: usize, total: usize },

    #[error("generator member {0} is not an element of the group")]
    NotInGroup(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
