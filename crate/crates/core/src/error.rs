use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("malformed root datum: {0}")]
    Malformed(String),
    #[error("root datum fails the axioms: {0}")]
    Invalid(String),
    #[error("root datum has {0} positive roots, expected exactly one")]
    NotRankOne(usize),
    #[error("simple index {0} out of range")]
    NoSuchSimpleRoot(usize),
    #[error("lattice map is not a coordinate projection")]
    NotProjection,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("coefficient ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("elements belong to different algebra contexts")]
    ContextMismatch,
    #[error("operation requires a prime field, got {0}")]
    RequiresPrimeField(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Datum(#[from] DatumError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("modules live over different contexts")]
    ContextMismatch,
    #[error("malformed module: {0}")]
    Malformed(String),
    #[error("character is not in the span of the chosen basis at weight {0:?}")]
    NotInSpan(Vec<i64>),
    #[error("the requested basis needs a semisimple-rank-one context of torus rank one")]
    UnsupportedContext,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
