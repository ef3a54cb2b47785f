use thiserror::Error;

/// Errors surfaced by exact computations.
///
/// Every failure names its cause; no operation silently truncates or rounds.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus {ell}^{r} does not fit in 64 bits")]
    ModulusOverflow { ell: u64, r: u32 },
    #[error("exponent r must be at least 1")]
    ZeroExponent,
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    #[error("coefficient prime 2 is not supported here (odd primes only)")]
    EvenPrime,
    #[error("coefficient exponent {r} exceeds a cyclic factor exponent {n}")]
    ExponentTooLarge { r: u32, n: u32 },
    #[error("mismatched coefficient rings: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("mismatched groups: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("map is not injective")]
    NotInjective,
    #[error("residue characteristic {ell} divides q = {q}")]
    CharacteristicClash { ell: u64, q: u64 },
    #[error("regime violation: {0}")]
    Regime(String),
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("unknown group name {0}")]
    UnknownGroup(String),
    #[error("coweight is not dominant: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("class is not invariant under the required stabilizer")]
    NotStabilizerInvariant,
    #[error("element is not W-invariant")]
    NotWeylInvariant,
    #[error("matrix is not regular semisimple")]
    NotRegularSemisimple,
    #[error("character orbit is not free")]
    OrbitNotFree,
    #[error("character takes a non-unit value")]
    NonUnitCharacterValue,
    #[error("class is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} exceeds the configured cap {1}")]
    DegreeCapExceeded(usize, usize),
    #[error("support radius {radius} exceeds the configured bound {bound}")]
    SupportBoundExceeded { radius: i64, bound: i64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("compatibility square broken at level {level}: {detail}")]
    BrokenSquare { level: u32, detail: String },
    #[error("linear system has no solution (chain lift failed)")]
    NoSolution,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
