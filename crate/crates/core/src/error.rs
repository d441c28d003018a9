use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("subset is not a subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("field error: {0}")]
    Field(String),

    #[error("norms are undefined over {0}")]
    NormUndefined(String),

    #[error("subspace inclusion fails: vector {index} of the smaller span is outside the larger span")]
    NotASubspace { index: usize },

    #[error("not a complex: composite at degree {degree} is nonzero at ({row}, {col}) with value {value}")]
    NotAComplex { degree: usize, row: usize, col: usize, value: String },

    #[error("splitting identity fails at degree {degree} on basis vector {basis}")]
    SplitIdentity { degree: usize, basis: usize },

    #[error("homotopy at degree {degree} has norm {norm} > 1")]
    NormBound { degree: usize, norm: String },

    #[error("chain map check fails at degree {degree} on basis vector {basis}: {reason}")]
    ChainMap { degree: usize, basis: usize, reason: String },

    #[error("bimodule axiom fails for {label}: {reason}")]
    Bimodule { label: String, reason: String },

    #[error("equivariance fails for group element {element}")]
    Equivariance { element: usize },

    #[error("functional is not central: psi(a.x) != psi(x.a) for a = {element}, x = basis {basis}")]
    NotCentral { element: usize, basis: usize },

    #[error("long exact sequence fails at degree {degree}, node {node}: {reason}")]
    LongExactSequence { degree: usize, node: String, reason: String },

    #[error("size {requested} exceeds memory cap {cap}; reduce --max-degree")]
    MemoryCap { requested: u128, cap: u128 },

    #[error("parse error in {source_name}: {message}")]
    Parse { source_name: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// A mathematical check failed, as opposed to bad input or a resource
    /// limit.
    pub fn is_verdict_failure(&self) -> bool {
        matches!(
            self,
            Error::NotAComplex { .. }
                | Error::SplitIdentity { .. }
                | Error::NormBound { .. }
                | Error::ChainMap { .. }
                | Error::Bimodule { .. }
                | Error::Equivariance { .. }
                | Error::LongExactSequence { .. }
        )
    }
}
