use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("pattern length must be at least 1")]
    EmptyPattern,
    #[error("pattern store must contain at least one pattern")]
    EmptyStore,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{what} = {value} exceeds the number of neurons {n_neurons}")]
    TooManyFlips {
        what: &'static str,
        value: usize,
        n_neurons: usize,
    },
    #[error("neuron index {index} out of range for {n_neurons} neurons")]
    NeuronOutOfRange { index: usize, n_neurons: usize },
    #[error("pattern index {index} out of range for {n_patterns} patterns")]
    PatternOutOfRange { index: usize, n_patterns: usize },
    #[error("polynomial degree must be at least 2, got {0}")]
    InvalidDegree(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed pattern data: {0}")]
    Format(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("empty sweep grid")]
    EmptyGrid,
    #[error("model does not support this operation: {0}")]
    UnsupportedModel(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
