use thiserror::Error;

/// Errors raised by the numerical kernels and transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The argument sits on (or within tolerance of) a pole of a gamma factor.
    #[error("pole: {0}")]
    Pole(String),

    /// A parameter is outside the admissible set of the function.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An iterative evaluation did not reach its tolerance within the iteration cap.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// An index or order is outside the supported range.
    #[error("out of range: {0}")]
    Range(String),

    /// A real argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation needs a closed-form model the parameters do not describe.
    #[error("unsupported model: {0}")]
    Model(String),

    /// Adaptive quadrature exhausted its panel budget.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// A half-line integral did not show the required decay.
    #[error("tail criterion not met: {0}")]
    Tail(String),

    /// Manifold parameters violate the structural constraints.
    #[error("invalid manifold parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
