use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {0:?} lies outside the open Poincaré disk")]
    OutsideDisk(Vec<f64>),

    #[error("non-finite coordinate in point {0:?}")]
    NonFinite(Vec<f64>),

    #[error("combination parameter {0} not in [0, 1]")]
    LambdaOutOfRange(f64),

    #[error("modulus argument out of domain: {0}")]
    ModulusDomain(String),

    #[error("descriptor `{kind}` cannot be used as {role}")]
    WrongRole { kind: &'static str, role: &'static str },

    #[error("descriptor `{0}` has no exact evaluation in this scalar type")]
    Inexact(&'static str),

    #[error("integer overflow evaluating {0}")]
    Overflow(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("point outside the mapping domain: {0}")]
    OutsideDomain(String),

    #[error("incompatible mapping: {0}")]
    IncompatibleMapping(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid rate inputs: {0}")]
    InvalidRateInputs(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("step budget exceeded: requested {requested} steps, cap is {cap}")]
    StepBudgetExceeded { requested: u64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
