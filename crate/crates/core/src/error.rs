use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty diagram")]
    EmptyDiagram,
    #[error("arc label {label} occurs {count} times (expected 2)")]
    ArcMultiplicity { label: i64, count: usize },
    #[error("not a knot: diagram has {0} components")]
    NotAKnot(usize),
    #[error("unknown knot: {0}")]
    UnknownKnot(String),
    #[error("knot table: {0}")]
    KnotTable(String),
    #[error("generator index {index} out of range (presentation has {count} generators)")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("presentation is not of Wirtinger form: {0}")]
    NotWirtinger(String),
    #[error("abelianization is not infinite cyclic")]
    NotInfiniteCyclic,
    #[error("Jacobian rank too small: {0}")]
    RankDeficient(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("no representation exists at p = {0}: the Alexander polynomial is trivial mod p")]
    NoRepresentation(u64),
    #[error("no kernel vector with spanning orbit: {0}")]
    NoSpanningKernel(String),
    #[error("representation check failed: {0}")]
    RepVerification(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("mixed primes in cyclotomic matrix ({0} vs {1})")]
    MixedPrimes(u64, u64),
    #[error("skipped (budget): {0}")]
    BudgetExceeded(String),
    #[error("theorem violated: {0}")]
    TheoremViolation(String),
    #[error("index cap {cap} exceeds the maximum {max}")]
    CapExceeded { cap: usize, max: usize },
    #[error("n must be positive")]
    ZeroIndex,
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
