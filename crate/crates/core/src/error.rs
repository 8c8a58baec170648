use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("subspaces of dims {dim_u} and {dim_t} are not complementary in k^{ambient}")]
    NotComplementary { dim_u: usize, dim_t: usize, ambient: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("degenerate request: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cutoff exceeded at {cutoff}: {context}")]
    CutoffExceeded { cutoff: usize, context: String },

    #[error("malformed relation: {0}")]
    MalformedRelation(String),

    #[error("property (G) fails at (i, j) = ({i}, {j})")]
    PropertyG { i: usize, j: usize },

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn verify(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(msg()))
    }
}
