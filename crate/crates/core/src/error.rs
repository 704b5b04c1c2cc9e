use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {degree} exceeds cutoff {cutoff}")]
    DegreeOutOfRange { degree: usize, cutoff: usize },

    #[error("coefficient of degree {cutoff} would overflow the cutoff under the strict policy")]
    Overflow { cutoff: usize },

    #[error("deformation is degenerate (q = 1)")]
    DegenerateDeformation,

    #[error("q = 0 has no logarithm")]
    ZeroQ,

    #[error("real parameter required, got imaginary part {0}")]
    RealParameterRequired(f64),

    #[error("parameter must be finite")]
    NonFinite,

    #[error("scaling parameter rho must be nonzero")]
    SingularScaling,

    #[error("dimension {0} is below the minimum of {1}")]
    Dimension(usize, usize),

    #[error("block {block} exceeds half the dimension {dim}")]
    Block { block: usize, dim: usize },

    #[error("test functions live on incompatible grids: {0}")]
    IncompatibleGrid(String),

    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),

    #[error("mode count must be at least 1")]
    EmptyModes,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
