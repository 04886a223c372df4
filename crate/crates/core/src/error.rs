use thiserror::Error;

/// Errors raised by the library. `code()` gives the stable identifier used
/// in CLI error envelopes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadratic fields differ: D = {0} vs D = {1}")]
    MismatchedField(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("incompatible representations: {0}")]
    IncompatibleRepresentations(String),
    #[error("value not representable: {0}")]
    NotRepresentable(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("degenerate lattice: generators are R-dependent")]
    DegenerateLattice,
    #[error("sublattice not contained in the given lattice")]
    NotContained,
    #[error("lattices are not commensurable")]
    NotCommensurable,
    #[error("lattice is not commensurable with its conjugate")]
    NotCommensurableWithConjugate,
    #[error("lattice is not invariant under conjugation")]
    NotInvariant,
    #[error("operation needs exact generators")]
    NotExact,
    #[error("pole at lattice point {m} + {n}*w2")]
    PoleAt { m: i64, n: i64 },
    #[error("zero of a denominator at {0}")]
    ZeroAt(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("unsupported descriptor kind: {0}")]
    UnsupportedKind(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("evaluation did not converge: {0}")]
    NoConvergence(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::MismatchedField(..) => "MismatchedField",
            Error::DivisionByZero => "DivisionByZero",
            Error::SingularMatrix => "SingularMatrix",
            Error::IncompatibleRepresentations(_) => "IncompatibleRepresentations",
            Error::NotRepresentable(_) => "NotRepresentable",
            Error::InvalidValue(_) => "InvalidValue",
            Error::DegenerateLattice => "DegenerateLattice",
            Error::NotContained => "NotContained",
            Error::NotCommensurable => "NotCommensurable",
            Error::NotCommensurableWithConjugate => "NotCommensurableWithConjugate",
            Error::NotInvariant => "NotInvariant",
            Error::NotExact => "NotExact",
            Error::PoleAt { .. } => "PoleAt",
            Error::ZeroAt(_) => "ZeroAt",
            Error::BasisMismatch(_) => "BasisMismatch",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::InvalidDescriptor(_) => "InvalidDescriptor",
            Error::UnknownSuite(_) => "UnknownSuite",
            Error::BadParams(_) => "BadParams",
            Error::NoConvergence(_) => "NoConvergence",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
