use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("product of two coefficients that both contain unknowns")]
    NonlinearProduct,
    #[error("variable index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("unknown coefficients present; use the constraint extractor instead")]
    UnknownsPresent,
    #[error("bidegree mismatch: expected ({0},{1}), found ({2},{3})")]
    BidegreeMismatch(u32, u32, u32, u32),
    #[error("{count} monomials exceed the configured cap of {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("weight {0:?} is not dominant integral")]
    NonDominantWeight(Vec<i64>),
    #[error("weight has {got} labels, root system has rank {rank}")]
    WeightLength { got: usize, rank: usize },
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
