use thiserror::Error;

/// Errors produced by the kernel. Failed *checks* (axiom violations, broken
/// connections, unstable subcomplexes) are returned as witness data by the
/// check functions themselves; this enum covers malformed inputs and misuse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("algebra mismatch")]
    AlgebraMismatch,

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator index {0} out of range")]
    GeneratorIndex(usize),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("image of generator `{name}` must be homogeneous of degree {expected}, got {found}")]
    ImageDegree {
        name: String,
        expected: i64,
        found: String,
    },

    #[error("operator is not nilpotent on the degree window (power {0} still nonzero)")]
    NotNilpotent(usize),

    #[error("degree-{0} generator makes degree components infinite-dimensional")]
    UnboundedDegree(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("lie algebra data rejected: {0}")]
    LieData(String),

    #[error("index {0} out of range for Lie algebra of dimension {1}")]
    LieIndex(usize, usize),

    #[error("subcomplex not d-stable: d({0}) leaves the span in degree {1}")]
    NotStable(String, i64),

    #[error("element is not basic: {0}")]
    NotBasic(String),

    #[error("element is not invariant: {0}")]
    NotInvariant(String),

    #[error("element is not linear in the degree-1 generators: {0}")]
    NotLinear(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("{0}")]
    Invalid(String),
}
