use thiserror::Error;

/// Errors raised by the workbench. Failed predicates are verdicts, not errors;
/// these variants cover malformed input and violated preconditions.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CtError {
    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("attributes `{first}` and `{second}` overlap: shared state {witness}")]
    Disjointness {
        first: String,
        second: String,
        witness: String,
    },

    #[error("duplicate label `{0}` in variable")]
    DuplicateLabel(String),

    #[error("label arithmetic requires numeric labels, found `{0}`")]
    LabelArithmetic(String),

    #[error("dispatch error: {0}")]
    Dispatch(String),

    #[error("representation error: {0}")]
    Representation(String),

    #[error("size guard exceeded: {0}")]
    Size(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid attribute: {0}")]
    InvalidAttribute(String),

    #[error("substrate mismatch: {0}")]
    SubstrateMismatch(String),

    #[error("not measurable: {0}")]
    NotMeasurable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("factor index {index} out of range for {factors} factors")]
    BadFactor { index: usize, factors: usize },

    #[error("permutation not closed on label set: {0}")]
    PermutationClosure(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("illegitimate game attribute: {0}")]
    IllegitimateAttribute(String),

    #[error("transform error: {0}")]
    Transform(String),

    #[error("not a measurer of the variable: {0}")]
    NotAMeasurer(String),
}

pub type Result<T> = std::result::Result<T, CtError>;
