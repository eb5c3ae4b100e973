use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` is not in the sequence universe")]
    LabelNotInUniverse(String),
    #[error("too many labels: {got} (maximum {max})")]
    TooManyLabels { got: usize, max: usize },
    #[error("label set must not be empty")]
    EmptyLabelSet,
    #[error("input graph contains a directed cycle")]
    CyclicInput,
    #[error("graph is not a quasi-skeleton graph")]
    NotQuasiSkeleton,
    #[error("graphs are defined over different label tables")]
    LabelMismatch,
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("restriction set must not be empty")]
    EmptyRestriction,
    #[error("sequence is not simple")]
    NotSimple,
    #[error("sequence contains an empty term")]
    EmptyTerm,
    #[error("graph does not admit a layered partition")]
    NotLayered,
    #[error("input must contain at least one sequence")]
    EmptyInput,
    #[error("threshold must lie in [0, 100], got {0}")]
    InvalidThreshold(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("both a label-1 and a label-0 sequence are required")]
    MissingClass,
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
