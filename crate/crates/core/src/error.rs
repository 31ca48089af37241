use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid slope {0}")]
    InvalidSlope(String),
    #[error("the slope 1/0 is not a surgery slope")]
    InfiniteSlope,
    #[error("T({0},{1}) is not a nontrivial torus knot")]
    InvalidKnot(u64, u64),
    #[error("invalid exceptional fiber ({0},{1})")]
    InvalidFiber(u64, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} exceptional fibers; a lens space has at most two")]
    NotLens(usize),
    #[error("{0} exceptional fibers; compare lens-type spaces with sfs_to_lens")]
    LensRegime(usize),
    #[error("degree {degree} shares a factor with fiber order {alpha}")]
    NotCoprime { degree: String, alpha: u64 },
    #[error("surgery has |rsq - p| = {0}, no three-fiber Seifert structure")]
    NotThreeFiber(String),
    #[error("cone order {0} does not fit in 64 bits")]
    OrderOverflow(String),
    #[error("malformed partition system: {0}")]
    MalformedPartition(String),
    #[error("degree {degree} exceeds the enumeration budget {budget}")]
    BudgetExceeded { degree: u64, budget: u64 },
    #[error("T({0},{1}) is outside the fast-path hypotheses")]
    ExcludedKnot(u64, u64),
    #[error("{0}")]
    InvalidInput(String),
}
