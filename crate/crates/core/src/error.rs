//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by series arithmetic, genus construction, fixed-point
/// validation and the rigidity pipelines.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Two values from incompatible contexts were combined (different
    /// parameter symbol lists, variable lists or truncation orders).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Inversion of a series whose constant term is not a nonzero rational.
    #[error("not a unit: constant term is {0}")]
    NotAUnit(String),

    /// A series used as a genus exponent does not satisfy f(0)=0, f'(0)=1.
    #[error("invalid exponent series: {0}")]
    InvalidExponent(String),

    /// A series does not carry enough terms for the requested operation.
    #[error("insufficient series order: {0}")]
    OrderError(String),

    /// Malformed genus specification or unknown symbol binding.
    #[error("genus spec error: {0}")]
    SpecError(String),

    /// Quasitoric pair validation failed.
    #[error("invalid quasitoric pair: {0}")]
    ValidationFailed(String),

    /// No generic line found within the retry budget (bound too small).
    #[error("genericity exhausted: {0}")]
    GenericityError(String),

    /// The constant terms of the localised genus disagreed across generic
    /// lines. This indicates a bug, never a property of the input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    /// A rigidity constraint was not affine-solvable in its top unknown.
    /// Indicates an implementation bug, not a mathematical ambiguity.
    #[error("structure error: {0}")]
    StructureError(String),

    /// Series expected to be divisible by a variable was not.
    #[error("identity violation: {0}")]
    IdentityViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
