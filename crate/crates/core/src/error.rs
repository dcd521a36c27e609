use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0} (expected 2 or 3)")]
    Dimension(usize),
    #[error("domain has no sites")]
    EmptyDomain,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("site {0:?} is not in the domain")]
    SiteOutOfDomain([i32; 3]),
    #[error("invalid plane partition: {0}")]
    InvalidPartition(String),
    #[error("invalid lattice-path bundle: {0}")]
    InvalidPaths(String),
    #[error("invalid dimer parameters: {0}")]
    InvalidDimerSpec(String),
    #[error("malformed edge: white {white:?}, black {black:?}")]
    MalformedEdge { white: (i64, i64), black: (i64, i64) },
    #[error("quadrature did not converge for offset ({x}, {y})")]
    Quadrature { x: i64, y: i64 },
    #[error("eigenvalue {value} outside [0, 1]")]
    EigenvalueOutOfRange { value: f64 },
    #[error("eigensolver did not converge: {0}")]
    Eigensolver(String),
    #[error("state space of {states} states exceeds the budget of {budget}")]
    Budget { states: u64, budget: u64 },
    #[error("non-positive stationary weight")]
    NonPositiveWeight,
    #[error("every replica was censored at the horizon")]
    AllCensored,
    #[error("not enough uncensored replicas for the requested quantile")]
    InsufficientSample,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
