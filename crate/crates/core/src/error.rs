use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("side matrix is not realizable: Gram matrix has eigenvalue {eigenvalue:.3e} (threshold {threshold:.3e})")]
    NotRealizable { eigenvalue: f64, threshold: f64 },
    #[error("squared side sum {sum} falls short of the required {required} (deficit {deficit})")]
    SumConditionViolated {
        sum: String,
        required: String,
        deficit: String,
    },
    #[error("obtuse triangle (a^2 + b^2 - c^2 = {excess}); obtuse triangles are handled by the degeneracy tools")]
    ObtuseTriangle { excess: String },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("singleton hyperedge {0:?}: chromatic number undefined")]
    SingletonEdge(Vec<usize>),
    #[error("search budget of {0} nodes exhausted before a decision")]
    BudgetExhausted(u64),
    #[error("optimizer failed on every restart: {0}")]
    OptimizerFailed(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
