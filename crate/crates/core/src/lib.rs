//! Spherical Fourier analysis on harmonic Hadamard manifolds of hypergeometric
//! type.
//!
//! A manifold in this class is fixed by its dimension `n` and volume entropy
//! `Q`. Everything else follows from those two numbers: the volume density
//! and mean curvature of geodesic spheres, the spherical functions (Gauss
//! hypergeometric functions in the variable `z = -sinh²(r/2)`), the
//! Harish-Chandra c-function, and the forward and inverse spherical Fourier
//! transforms weighted by the Plancherel density.
//!
//! The crate is organised bottom-up:
//!
//! - [`specfun`]: complex log-gamma, Gauss 2F1 on the non-positive axis, Bernoulli numbers
//! - [`quadrature`]: Gauss-Legendre panels, adaptive and half-line integration
//! - [`geometry`]: the `(n, Q)` model, Ledger coefficients, curvature invariants
//! - [`spherical`]: spherical functions, Jacobi functions of the second kind, c-function
//! - [`transform`]: forward/inverse transforms, Plancherel pairings, convolution, Abel transform

pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod specfun;
pub mod spherical;
pub mod transform;

pub use error::{Error, Result};
pub use geometry::{CurvatureInvariants, Enforcement, EntropyReport, ManifoldParams};
pub use spherical::{JacobiOrder, SphericalFunction};
pub use transform::{RadialFunction, SpectralFunction, TransformOptions};

/// Complex scalar used for spectral parameters, hypergeometric parameters and
/// function values.
pub type ComplexValue = num_complex::Complex64;
