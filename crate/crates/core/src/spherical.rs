//! Spherical functions, second-kind Jacobi functions, the c-function and the
//! hyperbolic Poisson-kernel oracle.
//!
//! `φ_λ(r) = F(Q/2 - iλ, Q/2 + iλ, n/2; -sinh²(r/2))` is evaluated directly
//! for `tanh²(r/2) <= 0.95` and through the connection formula
//! `φ_λ(r) = c(λ) Φ_{2λ}(r/2) + c(-λ) Φ_{-2λ}(r/2)` beyond. Near poles and
//! zeros of the c-function the direct route is used for every `r`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{mean_curvature, sphere_area, ManifoldParams};
use crate::quadrature::integrate_adaptive;
use crate::specfun::{gauss_2f1, gauss_2f1_derivative, log_gamma, HypergeometricPath};

/// Largest `tanh²(r/2)` handled by the direct route.
pub const SERIES_TANH2_LIMIT: f64 = 0.95;
/// Distance from a c-function singularity inside which the direct route is forced.
pub const SINGULAR_DISTANCE: f64 = 0.05;
const POLE_TOLERANCE: f64 = 1e-12;
const DERIVATIVE_STEP: f64 = 1e-5;
const POISSON_TOL: f64 = 1e-13;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Radius where the direct route hands over to the connection formula.
pub fn switch_radius() -> f64 {
    2.0 * SERIES_TANH2_LIMIT.sqrt().atanh()
}

/// Jacobi order `(α, β)` with `T = α + β + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOrder {
    pub alpha: f64,
    pub beta: f64,
    pub t_const: f64,
}

impl JacobiOrder {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta, t_const: alpha + beta + 1.0 }
    }

    /// `α = n/2 - 1`, `β = Q - n/2`, so that `T = Q`.
    pub fn from_params(p: &ManifoldParams) -> Self {
        let half_n = f64::from(p.n()) / 2.0;
        Self::new(half_n - 1.0, p.q() - half_n)
    }

    /// Hypergeometric parameters of `Φ_μ`.
    fn second_kind_parameters(&self, mu: Complex64) -> (Complex64, Complex64, Complex64) {
        let a = (real(self.beta - self.alpha + 1.0) - I * mu) / 2.0;
        let b = (real(self.t_const) - I * mu) / 2.0;
        let c = real(1.0) - I * mu;
        (a, b, c)
    }

    fn check_mu(&self, mu: Complex64) -> Result<()> {
        // μ = -ik with k = 1, 2, ... makes 1 - iμ a non-positive integer
        let c = real(1.0) - I * mu;
        let nearest = c.re.round();
        if nearest <= 0.0 && (c - nearest).norm() < POLE_TOLERANCE {
            return Err(Error::Parameter(format!("second-kind function undefined at mu = {mu}")));
        }
        if !(mu.re.is_finite() && mu.im.is_finite()) {
            return Err(Error::Parameter(format!("non-finite mu = {mu}")));
        }
        Ok(())
    }
}

fn direct_parameters(p: &ManifoldParams, lambda: Complex64) -> (Complex64, Complex64, Complex64) {
    let half_q = real(p.q() / 2.0);
    (half_q - I * lambda, half_q + I * lambda, real(f64::from(p.n()) / 2.0))
}

fn near_non_positive_integer(z: Complex64, distance: f64) -> bool {
    let nearest = z.re.round();
    nearest <= 0.0 && (z - nearest).norm() < distance
}

/// True when the connection formula is unusable at `λ`: within
/// [`SINGULAR_DISTANCE`] of a pole `±ik/2` of `c(±λ)` or of a zero of `c(±λ)`.
pub fn connection_is_singular(p: &ManifoldParams, lambda: Complex64) -> bool {
    let scaled = 2.0 * I * lambda;
    let nearest = scaled.re.round();
    if (scaled - nearest).norm() < 2.0 * SINGULAR_DISTANCE {
        return true;
    }
    let half_n = f64::from(p.n()) / 2.0;
    let half_q = p.q() / 2.0;
    [1.0, -1.0].iter().any(|&sign| {
        let shift = sign * I * lambda;
        near_non_positive_integer(real(half_n - half_q) + shift, SINGULAR_DISTANCE)
            || near_non_positive_integer(real(half_q) + shift, SINGULAR_DISTANCE)
    })
}

fn uses_direct_route(p: &ManifoldParams, lambda: Complex64, r: f64) -> bool {
    r <= switch_radius() || connection_is_singular(p, lambda)
}

/// Spherical function `φ_λ(r)`.
pub fn phi(p: &ManifoldParams, lambda: Complex64, r: f64) -> Result<Complex64> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(real(1.0));
    }
    if uses_direct_route(p, lambda, r) {
        phi_series(p, lambda, r)
    } else {
        phi_connection(p, lambda, r)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be finite and non-negative, got {r}")));
    }
    Ok(())
}

/// `φ_λ(r)` from the hypergeometric representation, at any `r`.
pub fn phi_series(p: &ManifoldParams, lambda: Complex64, r: f64) -> Result<Complex64> {
    check_radius(r)?;
    let (a, b, c) = direct_parameters(p, lambda);
    let z = -(0.5 * r).sinh().powi(2);
    gauss_2f1(a, b, c, z)
}

/// `φ_λ(r)` from the connection formula; needs `sinh(r/2) > 1`.
pub fn phi_connection(p: &ManifoldParams, lambda: Complex64, r: f64) -> Result<Complex64> {
    let order = JacobiOrder::from_params(p);
    let t = 0.5 * r;
    let plus = c_function(p, lambda)? * phi_second_kind(&order, 2.0 * lambda, t)?;
    let minus = c_function(p, -lambda)? * phi_second_kind(&order, -2.0 * lambda, t)?;
    Ok(plus + minus)
}

/// `ln(2 sinh t)`, accurate for large `t`.
fn ln_two_sinh(t: f64) -> f64 {
    t + (-(-2.0 * t).exp()).ln_1p()
}

/// Jacobi function of the second kind `Φ_μ(t)`.
pub fn phi_second_kind(order: &JacobiOrder, mu: Complex64, t: f64) -> Result<Complex64> {
    order.check_mu(mu)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("second-kind function needs t > 0, got {t}")));
    }
    let sinh_t = t.sinh();
    if sinh_t <= 1.0 {
        return Err(Error::Convergence(format!(
            "second-kind expansion needs sinh t > 1, got t = {t}"
        )));
    }
    let (a, b, c) = order.second_kind_parameters(mu);
    let x = -1.0 / (sinh_t * sinh_t);
    let series = gauss_2f1(a, b, c, x)?;
    Ok(((I * mu - order.t_const) * ln_two_sinh(t)).exp() * series)
}

fn second_kind_with_derivative(order: &JacobiOrder, mu: Complex64, t: f64) -> Result<(Complex64, Complex64)> {
    order.check_mu(mu)?;
    let sinh_t = t.sinh();
    if sinh_t <= 1.0 {
        return Err(Error::Convergence(format!(
            "second-kind expansion needs sinh t > 1, got t = {t}"
        )));
    }
    let (a, b, c) = order.second_kind_parameters(mu);
    let x = -1.0 / (sinh_t * sinh_t);
    let g = gauss_2f1(a, b, c, x)?;
    let dg = gauss_2f1_derivative(a, b, c, x)?;
    Ok(assemble_second_kind(order, mu, t, g, dg))
}

/// `(Φ, dΦ/dt)` from `G(x)` and `G'(x)` at `x = -sinh^{-2} t`.
fn assemble_second_kind(
    order: &JacobiOrder,
    mu: Complex64,
    t: f64,
    g: Complex64,
    dg: Complex64,
) -> (Complex64, Complex64) {
    let exponent = I * mu - order.t_const;
    let prefactor = (exponent * ln_two_sinh(t)).exp();
    let sinh_t = t.sinh();
    let dx_dt = 2.0 * t.cosh() / (sinh_t * sinh_t * sinh_t);
    let value = prefactor * g;
    let deriv = exponent / t.tanh() * value + prefactor * dg * dx_dt;
    (value, deriv)
}

/// `ln c(λ)`, principal branch of each gamma factor.
pub fn log_c_function(p: &ManifoldParams, lambda: Complex64) -> Result<Complex64> {
    let scaled = 2.0 * I * lambda;
    if lambda.norm() < POLE_TOLERANCE || near_non_positive_integer(scaled, POLE_TOLERANCE) {
        return Err(Error::Pole(format!("c-function pole at lambda = {lambda}")));
    }
    let half_n = f64::from(p.n()) / 2.0;
    let half_q = p.q() / 2.0;
    let numerator = (real(p.q()) - scaled) * 2f64.ln() + log_gamma(real(half_n))? + log_gamma(scaled)?;
    let denominator = log_gamma(real(half_n - half_q) + I * lambda)? + log_gamma(real(half_q) + I * lambda)?;
    Ok(numerator - denominator)
}

/// Harish-Chandra c-function.
pub fn c_function(p: &ManifoldParams, lambda: Complex64) -> Result<Complex64> {
    Ok(log_c_function(p, lambda)?.exp())
}

/// c-function of the Jacobi transform of order `(α, β)`, in the
/// `Γ(iμ/2) Γ((1+iμ)/2)` form.
pub fn jacobi_c_function(order: &JacobiOrder, mu: Complex64) -> Result<Complex64> {
    let imu = I * mu;
    let log_value = real(order.t_const * 2f64.ln()) + log_gamma(imu / 2.0)? + log_gamma((1.0 + imu) / 2.0)?
        - log_gamma((order.t_const + imu) / 2.0)?
        - log_gamma((order.alpha - order.beta + 1.0 + imu) / 2.0)?;
    Ok(log_value.exp())
}

/// Plancherel weight `d_g / |c(λ)|²` for real `λ > 0`.
pub fn plancherel_density(p: &ManifoldParams, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite()) || lambda <= 0.0 {
        return Err(Error::Pole(format!("Plancherel density needs lambda > 0, got {lambda}")));
    }
    let log_c = log_c_function(p, real(lambda))?;
    Ok((p.plancherel_constant().ln() - 2.0 * log_c.re).exp())
}

/// Busemann function of the hyperbolic model with curvature `-s²`, for a
/// point at distance `r` and angle `θ` to the boundary direction.
pub fn busemann(scale: f64, r: f64, theta: f64) -> f64 {
    let sr = scale * r;
    let half = (0.5 * theta).sin();
    ((-sr).exp() + 2.0 * sr.sinh() * half * half).ln() / scale
}

/// Sphere average of the Poisson kernel `exp((-Q/2 + iλ) b)`; equals
/// `φ_λ(r)` on the two real hyperbolic models.
pub fn poisson_average(p: &ManifoldParams, lambda: Complex64, r: f64) -> Result<Complex64> {
    let model = p.hyperbolic_model().ok_or_else(|| {
        Error::Model(format!(
            "no closed-form Busemann function for n = {}, Q = {}",
            p.n(),
            p.q()
        ))
    })?;
    check_radius(r)?;
    let scale = model.curvature_scale();
    let exponent = real(-p.q() / 2.0) + I * lambda;
    let power = p.n() as i32 - 2;
    let ratio = sphere_area(p.n() - 1) / sphere_area(p.n());
    let panels = (lambda.norm() * r / PI).ceil() as usize + 4;
    let integral = integrate_adaptive(
        |theta: f64| (exponent * busemann(scale, r, theta)).exp() * theta.sin().powi(power),
        0.0,
        PI,
        POISSON_TOL,
        panels,
    )?;
    Ok(integral * ratio)
}

/// `|φ'' + σ φ' + (Q²/4 + λ²) φ|` at `r > 0`.
pub fn ode_residual(p: &ManifoldParams, lambda: Complex64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("ODE residual needs r > 0, got {r}")));
    }
    let direct = uses_direct_route(p, lambda, r);
    let h = DERIVATIVE_STEP.min(0.5 * r);
    let (value, first) = phi_with_derivative(p, lambda, r, direct)?;
    let (_, ahead) = phi_with_derivative(p, lambda, r + h, direct)?;
    let (_, behind) = phi_with_derivative(p, lambda, r - h, direct)?;
    let second = (ahead - behind) / (2.0 * h);
    let eigenvalue = real(p.q() * p.q() / 4.0) + lambda * lambda;
    let sigma = mean_curvature(p, r)?;
    Ok((second + sigma * first + eigenvalue * value).norm())
}

fn phi_with_derivative(p: &ManifoldParams, lambda: Complex64, r: f64, direct: bool) -> Result<(Complex64, Complex64)> {
    if direct {
        let (a, b, c) = direct_parameters(p, lambda);
        let z = -(0.5 * r).sinh().powi(2);
        let value = gauss_2f1(a, b, c, z)?;
        let dz_dr = -0.5 * r.sinh();
        Ok((value, gauss_2f1_derivative(a, b, c, z)? * dz_dr))
    } else {
        let order = JacobiOrder::from_params(p);
        let t = 0.5 * r;
        let (plus, dplus) = second_kind_with_derivative(&order, 2.0 * lambda, t)?;
        let (minus, dminus) = second_kind_with_derivative(&order, -2.0 * lambda, t)?;
        let cp = c_function(p, lambda)?;
        let cm = c_function(p, -lambda)?;
        Ok((cp * plus + cm * minus, 0.5 * (cp * dplus + cm * dminus)))
    }
}

/// `Φ_μ` tabulated on `t >= t_min` by one continued hypergeometric path.
#[derive(Debug, Clone)]
struct SecondKindTable {
    order: JacobiOrder,
    mu: Complex64,
    path: HypergeometricPath,
}

impl SecondKindTable {
    fn new(order: JacobiOrder, mu: Complex64, t_min: f64) -> Result<Self> {
        order.check_mu(mu)?;
        let (a, b, c) = order.second_kind_parameters(mu);
        let x_min = -1.0 / t_min.sinh().powi(2);
        Ok(Self { order, mu, path: HypergeometricPath::build(a, b, c, x_min)? })
    }

    fn eval(&self, t: f64) -> Result<(Complex64, Complex64)> {
        let x = -1.0 / t.sinh().powi(2);
        let (g, dg) = self.path.eval(x.max(self.path.z_end()))?;
        Ok(assemble_second_kind(&self.order, self.mu, t, g, dg))
    }
}

/// `φ_λ` prepared for repeated evaluation on `[0, r_max]`.
///
/// Continues the relevant hypergeometric functions once; each later
/// evaluation is a single polynomial evaluation. Values agree with [`phi`]
/// to rounding level.
#[derive(Debug, Clone)]
pub struct SphericalFunction {
    lambda: Complex64,
    r_max: f64,
    eigenvalue: Complex64,
    direct_limit: f64,
    direct: HypergeometricPath,
    connection: Option<Connection>,
}

#[derive(Debug, Clone)]
struct Connection {
    plus: SecondKindTable,
    minus: SecondKindTable,
    c_plus: Complex64,
    c_minus: Complex64,
}

impl SphericalFunction {
    pub fn new(p: &ManifoldParams, lambda: Complex64, r_max: f64) -> Result<Self> {
        check_radius(r_max)?;
        let singular = connection_is_singular(p, lambda);
        let direct_limit = if singular { r_max } else { r_max.min(switch_radius()) };
        let (a, b, c) = direct_parameters(p, lambda);
        let direct = HypergeometricPath::build(a, b, c, -(0.5 * direct_limit).sinh().powi(2))?;
        let connection = if direct_limit < r_max {
            let order = JacobiOrder::from_params(p);
            let t_min = 0.5 * direct_limit;
            Some(Connection {
                plus: SecondKindTable::new(order, 2.0 * lambda, t_min)?,
                minus: SecondKindTable::new(order, -2.0 * lambda, t_min)?,
                c_plus: c_function(p, lambda)?,
                c_minus: c_function(p, -lambda)?,
            })
        } else {
            None
        };
        Ok(Self {
            lambda,
            r_max,
            eigenvalue: real(p.q() * p.q() / 4.0) + lambda * lambda,
            direct_limit,
            direct,
            connection,
        })
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Eigenvalue `Q²/4 + λ²` of minus the radial Laplacian.
    pub fn eigenvalue(&self) -> Complex64 {
        self.eigenvalue
    }

    pub fn eval(&self, r: f64) -> Result<Complex64> {
        Ok(self.eval_with_derivative(r)?.0)
    }

    /// `(φ_λ(r), dφ_λ/dr)`.
    pub fn eval_with_derivative(&self, r: f64) -> Result<(Complex64, Complex64)> {
        if !(r >= 0.0 && r <= self.r_max * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "r = {r} outside the prepared range [0, {}]",
                self.r_max
            )));
        }
        match &self.connection {
            Some(conn) if r > self.direct_limit => {
                let t = 0.5 * r;
                let (plus, dplus) = conn.plus.eval(t)?;
                let (minus, dminus) = conn.minus.eval(t)?;
                Ok((
                    conn.c_plus * plus + conn.c_minus * minus,
                    0.5 * (conn.c_plus * dplus + conn.c_minus * dminus),
                ))
            }
            _ => {
                let half = 0.5 * r;
                let z = -half.sinh().powi(2);
                let (value, deriv) = self.direct.eval(z.max(self.direct.z_end()))?;
                Ok((value, deriv * (-0.5 * r.sinh())))
            }
        }
    }
}
