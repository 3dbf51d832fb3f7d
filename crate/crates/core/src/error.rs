use alloc::string::String;

/// Errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration budget exceeded for {what}: need {needed} points, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },
    #[error("operands live in different field levels")]
    LevelMismatch,
    #[error("inversion of zero")]
    InverseOfZero,
    #[error("defining polynomial is not monic and irreducible")]
    NotIrreducible,
    #[error("basis elements are linearly dependent over the base field")]
    SingularBasis,
    #[error("arity mismatch: expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("derivative vanishes identically (p-th power pattern); square-free criterion inapplicable")]
    DerivativeVanishes,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("degree {sub} does not divide degree {target}")]
    NotSubfield { sub: u32, target: u32 },
    #[error("no root of the defining polynomial found in the target field")]
    NoRootFound,
    #[error("descent coefficient is not fixed by Frobenius (arithmetic bug)")]
    RationalityFailure,
    #[error("e = {e} does not divide q - 1 = {q_minus_one}")]
    NotDivisor { e: u64, q_minus_one: u64 },
    #[error("m = {m} is not coprime to r = {r}")]
    NotCoprime { m: u32, r: u32 },
    #[error("exact identity violated: {what} ({left} != {right})")]
    IdentityViolation {
        what: &'static str,
        left: String,
        right: String,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
