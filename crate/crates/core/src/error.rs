use alloc::string::String;

/// Errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix")]
    Singular,
    #[error("determinant of the transition matrix is not a monomial unit: {0}")]
    NotBundleCocycle(String),
    #[error("group closure exceeds the cap of {0} elements")]
    ClosureExceedsCap(usize),
    #[error("element does not have determinant 1")]
    NonUnitDeterminant,
    #[error("representation is inconsistent: {0}")]
    InconsistentRepresentation(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("graded piece is not semistable: {0}")]
    NotSemistable(String),
    #[error("invalid equivariant structure: {0}")]
    InvalidEquivariantStructure(String),
    #[error("map is not a splitting of the quotient: {0}")]
    NotASplitting(String),
    #[error("subbundle is not invariant under the action: {0}")]
    SubbundleNotInvariant(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
}

impl Error {
    /// True for errors that reject mathematically meaningful input (as
    /// opposed to malformed or inconsistent data).
    pub fn is_mathematical_rejection(&self) -> bool {
        matches!(
            self,
            Error::ParityViolation(_)
                | Error::NotSemistable(_)
                | Error::InvalidEquivariantStructure(_)
                | Error::NotASplitting(_)
                | Error::SubbundleNotInvariant(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
