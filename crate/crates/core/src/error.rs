use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("t must be positive (got {0})")]
    NonPositiveParameter(String),

    #[error("expected a homogeneous form, got mixed degrees {0:?}")]
    MixedDegree(Vec<usize>),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,

    #[error("spinor is not of unit length (|ψ|² = {0})")]
    NotUnitSpinor(String),

    #[error("eigenvalue {eigenvalue} has multiplicity {multiplicity}, expected 1")]
    EigenvalueNotSimple { eigenvalue: i64, multiplicity: usize },

    #[error("the G2-structure is not cocalibrated (d*ω ≠ 0)")]
    NotCocalibrated,

    #[error("torsion is not parallel for the connection")]
    TorsionNotParallel,

    #[error("spinor is not invariant under the isotropy algebra")]
    NotIsotropyInvariant,

    #[error("holonomy closure exceeded dim so({0})")]
    HolonomyOverflow(usize),

    #[error("invalid coset space: {0}")]
    InvalidCoset(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
