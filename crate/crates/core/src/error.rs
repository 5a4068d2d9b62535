use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed backend: {0}")]
    MalformedBackend(String),
    #[error("improper relations: {0}")]
    ImproperRelations(String),
    #[error("element not in blueprint: {0}")]
    ForeignElement(String),
    #[error("not an ideal: {0}")]
    NotAnIdeal(String),
    #[error("ideal is not proper")]
    NotProper,
    #[error("ideal is not proper or not saturated: {0}")]
    ImproperIdeal(String),
    #[error("derivation budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("rank undetermined: {0}")]
    RankUndetermined(String),
    #[error("no positive-degree generator: irrelevant complement is empty")]
    EmptyIrrelevantComplement,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("counts are not polynomial: {0}")]
    NotPolynomial(String),
    #[error("dimension {0} exceeds the enumeration cap")]
    DimensionTooLarge(usize),
    #[error("rank {0} exceeds the enumeration cap")]
    RankTooLarge(usize),
    #[error("seed is not a simplex: {0}")]
    SeedNotSimplex(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("generator {0} lies outside the stalk")]
    GeneratorOutsideStalk(String),
    #[error("not a congruence: {0}")]
    NotACongruence(String),
    #[error("morphism is not a monomorphism")]
    NotMono,
    #[error("morphism is not an epimorphism")]
    NotEpi,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
