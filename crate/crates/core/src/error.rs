use thiserror::Error;

/// Errors raised by the algebra and experiment layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("operation not supported over {0}")]
    UnsupportedRing(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division is not exact: {0}")]
    DivisionNotExact(String),
    #[error("not a complex: d∘d ≠ 0 at degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("not a chain map: commutation fails at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("η_f needs a non-zero-divisor f")]
    InvalidF,
    #[error("operators {i} and {j} do not commute")]
    NonCommuting { i: usize, j: usize },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("incompatible framings: {0}")]
    IncompatibleFramings(String),
    #[error("window {window} is not divisible by p = {p}")]
    WindowNotDivisibleByP { window: i64, p: u64 },
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("a = {a} is not a unit in the coefficient ring")]
    NonUnitA { a: i64 },
    #[error("no monomial-diagonal solution: {0}")]
    NonDiagonalRequired(String),
    #[error("connection is not flat: ∇_{i}∇_{j} ≠ ∇_{j}∇_{i} on basis vector {basis}")]
    NotFlat { i: usize, j: usize, basis: usize },
    #[error("modules live over different framed algebras")]
    MismatchedAlgebra,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
