//! Complex special-function kernels.

mod bernoulli;
mod gamma;
mod hypergeometric;

pub use bernoulli::bernoulli;
pub use gamma::{gamma, log_gamma};
pub use hypergeometric::{gauss_2f1, gauss_2f1_derivative, HypergeometricPath};
