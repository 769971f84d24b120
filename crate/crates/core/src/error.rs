use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("Teichmüller lift of a non-unit residue")]
    NotAUnitResidue,
    #[error("not a branch direction: element has valuation 0")]
    NotABranchDirection,
    #[error("not a period: total valuation is 0")]
    NotAPeriod,
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not irreducible modulo {0}")]
    Reducible(u64),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("singular Weierstrass model (discriminant 0)")]
    SingularCurve,
    #[error("no Tate period: reduction at {0} is not multiplicative")]
    NoTatePeriod(u64),
    #[error("reduction at {0} is not split multiplicative")]
    NotSplit(u64),
    #[error("additive reduction at {0}: conductor exponent unknown")]
    AdditiveConductor(u64),
    #[error("curve not found at this level: {0}")]
    CurveNotFound(String),
    #[error("supersingular not supported (p = {0})")]
    Supersingular(u64),
    #[error("additive reduction at {0} is not supported")]
    AdditiveNotSupported(u64),
    #[error("symbol vanishes on {{0 -> oo}} at level {0}")]
    CentralValueVanishes(u64),
    #[error("order of vanishing less than {0}")]
    OrderOfVanishing(u32),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown curve label {0}")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
