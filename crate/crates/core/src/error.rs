use thiserror::Error;

use crate::multiring::ValidationReport;

/// Errors raised by constructions and checks.
///
/// `TheoremViolation` is reserved for a computed instance contradicting a
/// structural identity the library relies on; it carries a witness string.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("multiring axioms fail: {0}")]
    Invalid(ValidationReport),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("budget exceeded: {what} ({detail})")]
    BudgetExceeded { what: String, detail: String },
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("not a prime ideal: {0}")]
    NotPrime(String),
    #[error("not a multiplicative set: {0}")]
    NotMultiplicative(String),
    #[error("not a hyperring: {0}")]
    NotHyperring(String),
    #[error("not von Neumann regular: {0}")]
    NotVNH(String),
    #[error("complement of idempotent is not unique: {0}")]
    NonUniqueComplement(String),
    #[error("real spectrum is empty")]
    EmptyRealSpectrum,
    #[error("preorder not preserved: {0}")]
    PreorderNotPreserved(String),
    #[error("not semi-real: {0}")]
    NotSemireal(String),
    #[error("improper preorder: {0}")]
    ImproperPreorder(String),
    #[error("containment violated: {0}")]
    ContainmentViolation(String),
    #[error("codomain is not a geometric von Neumann hyperring: {0}")]
    CodomainNotGvNH(String),
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("map does not factor: {0}")]
    NotWellDefined(String),
    #[error("identity fails on instance: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for a failed structural identity with a formatted witness.
macro_rules! violation {
    ($($arg:tt)*) => {
        $crate::error::Error::TheoremViolation(format!($($arg)*))
    };
}
pub(crate) use violation;

/// Returns a `TheoremViolation` unless the condition holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::violation!($($arg)*));
        }
    };
}
pub(crate) use ensure;
