use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("subsystem dimension {0} is smaller than 2")]
    InvalidDimension(usize),
    #[error("at least one subsystem is required")]
    NoSubsystems,
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("matrix is not Hermitian (max |m - m†| = {0:e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    NotNormalized(f64),
    #[error("operator has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("invalid subsystem selection: {0}")]
    InvalidSelection(String),
    #[error("measurement basis does not match the subsystem dimensions")]
    BasisMismatch,
    #[error("local basis is not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("operation requires qubit subsystems, got dimensions {0:?}")]
    NotQubits(Vec<usize>),
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("chain of {sites} sites exceeds the {limit}-site budget of the selected solver")]
    OverBudget { sites: usize, limit: usize },
    #[error("invalid spin group: {0}")]
    InvalidGroup(String),
    #[error("strategy {0} is not supported here")]
    UnsupportedStrategy(String),
    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
