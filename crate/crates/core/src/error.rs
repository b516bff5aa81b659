use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A decision vector left the feasible box.
    #[error("coordinate {index} = {value} lies outside [{lower}, {upper}]")]
    Domain { index: usize, value: f64, lower: f64, upper: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite value encountered: {0}")]
    Numeric(String),

    #[error("unsupported problem `{0}`")]
    UnsupportedProblem(String),

    #[error("unsupported objective count m = {m}: {hint}")]
    UnsupportedDimension { m: usize, hint: &'static str },

    #[error("population of size {0} is too small for pairwise potentials (need at least 2)")]
    DegeneratePopulation(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("run aborted at epoch {epoch}: {source}")]
    RunAborted {
        epoch: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
