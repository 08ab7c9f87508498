use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series did not converge after {terms} terms (partial value {partial:e})")]
    Convergence { partial: f64, terms: usize },

    #[error("order {0} is neither an integer nor a half-integer")]
    InvalidOrder(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("basis {kind} is not available in dimension {dim}")]
    UnsupportedBasis { kind: &'static str, dim: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("index {index} out of range for degree {degree} (valid 1..={count})")]
    IndexOutOfRange { degree: usize, index: usize, count: usize },

    #[error("dimension mismatch: {0}")]
    Mismatch(String),

    #[error("J_{order}({eta}) vanishes; choose another radius")]
    BesselZero { order: f64, eta: f64 },

    #[error("angular grid is not uniform: {0}")]
    NonUniformGrid(String),

    #[error("data are not zonal: deviation {deviation:e}")]
    NotZonal { deviation: f64 },

    #[error("design matrix is rank deficient; colliding pairs {pairs:?}")]
    RankDeficient { pairs: Vec<(usize, usize)> },

    #[error("inconsistent data: forward residual {residual:e}")]
    Inconsistent { residual: f64 },

    #[error("branch not applicable: {0}")]
    BranchNotApplicable(String),

    #[error("data are not sparse in this basis (degree {degree}, best fit residual {residual:e})")]
    NotSparse { degree: usize, residual: f64 },

    #[error("not a real equal-magnitude pair: {0}")]
    NotRealPair(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
