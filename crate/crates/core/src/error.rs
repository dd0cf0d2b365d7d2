use thiserror::Error;

/// Errors raised by the toy-theory library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u32),

    #[error("unknown field `{0}` (expected Z<p> or Q)")]
    UnknownField(String),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("phase space needs at least one degree of freedom")]
    EmptyPhaseSpace,

    #[error("matrix is not symplectic: (MᵀΩM − Ω)[{row}][{col}] = {value}")]
    NotSymplectic { row: usize, col: usize, value: String },

    #[error("subspace is not isotropic: ω(b{i}, b{j}) = {value}")]
    NotIsotropic { i: usize, j: usize, value: String },

    #[error("subspace is not Lagrangian: {0}")]
    NotLagrangian(String),

    #[error("variable is not Poisson: bracket of rows {i} and {j} is {value}")]
    NotPoisson { i: usize, j: usize, value: String },

    #[error("not a physical transformation: {0}")]
    NotPhysical(String),

    #[error("codomain dimension {codomain} exceeds domain dimension {domain}")]
    DimensionShrinkViolation { domain: usize, codomain: usize },

    #[error("unknown factor `{0}`")]
    UnknownFactor(String),

    #[error("factor name `{0}` is ambiguous")]
    AmbiguousFactor(String),

    #[error("vector lies outside the manifest subspace")]
    ValueOutsideSubspace,

    #[error("{0} cannot be enumerated over the rationals")]
    NotEnumerable(&'static str),

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("step `{label}` rejected: {reason}")]
    StepGate { label: String, reason: String },

    #[error("closed form mismatch at {0}")]
    ClosedFormMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
