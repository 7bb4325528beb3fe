use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weight evaluated outside its domain: t = {0} < 1")]
    Domain(f64),
    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("analytic indices are only available for closed-form families")]
    AnalyticUnavailable,
    #[error("orders ({s0}, {s1}) do not bracket the indices ({lower}, {upper})")]
    OrdersOutOfRange { s0: f64, s1: f64, lower: f64, upper: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("zero field: relative error undefined (absolute error {0:e})")]
    ZeroField(f64),
    #[error("infeasible extension: constraint violation {0:e}")]
    Infeasible(f64),
    #[error("incompatible data: defect {defect:?}")]
    Incompatible { defect: Vec<f64> },
    #[error("lower index {0} must exceed -1/2")]
    LowerIndexTooSmall(f64),
    #[error("invalid mask: {0}")]
    InvalidMask(String),
    #[error("radial quadrature failure: {0}")]
    Quadrature(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
