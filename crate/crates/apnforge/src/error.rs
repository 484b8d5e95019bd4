use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported degree: n = {0} (need 1 <= n <= 48)")]
    UnsupportedDegree(u32),
    #[error("modulus 0x{0:x} is not a monic irreducible of degree {1}")]
    BadModulus(u64, u32),
    #[error("zero inversion")]
    ZeroInversion,
    #[error("not a cubic extension: degree {0} is not divisible by 3")]
    NotCubicExtension(u32),
    #[error("no such subfield: {d} does not divide {n}")]
    NoSuchSubfield { d: u32, n: u32 },
    #[error("not irreducible of matching degree: g has no root in the subfield of size 2^{0}")]
    NotIrreducibleOfMatchingDegree(u32),
    #[error("exponent not invertible: gcd({e}, 2^{n} - 1) != 1")]
    ExponentNotInvertible { e: u64, n: u32 },
    #[error("zero has no unit solution")]
    ZeroHasNoUnitSolution,
    #[error("ambient field is not a cubic extension (degree {0})")]
    AmbientNotCubic(u32),
    #[error("iteration starts at 1")]
    IterationStartsAtOne,
    #[error("semilinearity violated: nullity {nullity} not divisible by m = {m}")]
    SemilinearityViolated { nullity: u32, m: u32 },
    #[error("nonlinear fiber: mu = 0x{mu:x} has fiber size {size}, not of the form 2^i - 1")]
    NonlinearFiber { mu: u64, size: u64 },
    #[error("Question 1 negative for (m, s) = ({m}, {s})")]
    QuestionOneNegative { m: u32, s: u32 },
    #[error("Table-1 contract violated: {0}")]
    TableOneContractViolated(String),
    #[error("v not in F_{{2^m}}^*")]
    BadSubfieldUnit,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("not divisible")]
    NotDivisible,
    #[error("degenerate resultant: an operand is constant in the eliminated variable")]
    DegenerateResultant,
    #[error("wrong arity: expected a polynomial in {expected} variables, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("hypothesis violated: gcd(s + m, 3m) != 1 for (m, s) = ({m}, {s})")]
    HypothesisViolated { m: u32, s: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("table file error: {0}")]
    TableFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
