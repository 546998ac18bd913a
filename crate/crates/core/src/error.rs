use thiserror::Error;

/// Every failure the library can surface.
///
/// Variants that end in `Violation` signal a broken implementation invariant,
/// never a mathematical outcome; callers map them to exit code 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus {0:?} is reducible or malformed")]
    ReducibleModulus(Vec<u64>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("no embedding of a degree-{sub} field into a degree-{sup} field")]
    NoEmbedding { sub: u32, sup: u32 },
    #[error("curve is reducible: found a zero divisor in the function field")]
    ReducibleCurve,
    #[error("x is not a separating variable (df/dy vanishes in the function field)")]
    NotSeparating,
    #[error("degenerate morphism: only {found} of {needed} independent rows with orders <= {cap}")]
    Degenerate { found: usize, needed: usize, cap: u32 },
    #[error("u = {u} and m = {m} must be coprime with m > u >= 1")]
    CoprimalityViolated { u: u32, m: u32 },
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is singular on the affine model; supply a parametrization instead")]
    SingularPoint,
    #[error("series precision {0} is insufficient")]
    PrecisionExhausted(i64),
    #[error("kappa sequence does not match the morphism: {0}")]
    KappaMismatch(String),
    #[error("singular rational point at {0} has no declared branch data")]
    UndeclaredSingularity(String),
    #[error("curve is not certified smooth")]
    NotSmoothCertified,
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("bivariate division left a nonzero remainder")]
    InexactDivision,
    #[error("rationality class over F_(q^{0}) adds no points")]
    EmptyClass(u32),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("internal violation: {0}")]
    ReportedViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
