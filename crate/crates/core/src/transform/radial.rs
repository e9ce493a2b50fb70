use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Minimum number of sample intervals over the support of a sampled function.
pub const MIN_SAMPLE_INTERVALS: usize = 512;

type Callable = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A compactly supported radial function with declared support radius.
///
/// Evaluation outside `[0, R]` returns zero; negative radii are reflected.
#[derive(Clone)]
pub struct RadialFunction {
    support: f64,
    repr: Repr,
    note: String,
}

#[derive(Clone)]
enum Repr {
    Callable(Callable),
    Sampled(Arc<CubicSpline>),
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction")
            .field("support", &self.support)
            .field("note", &self.note)
            .finish()
    }
}

impl RadialFunction {
    pub fn new(support: f64, note: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        check_support(support)?;
        Ok(Self { support, repr: Repr::Callable(Arc::new(f)), note: note.into() })
    }

    /// Zero function with the given nominal support.
    pub fn zero(support: f64) -> Result<Self> {
        Self::new(support, "zero", |_| 0.0)
    }

    /// `exp(-1/(1 - (r/R)²))` on `[0, R)`.
    pub fn bump(radius: f64) -> Result<Self> {
        Self::new(radius, format!("C-infinity bump, R = {radius}"), move |r| bump_profile(r / radius))
    }

    /// `exp(-r²)` times a smooth cutoff that is one on `[0, R/2]` and zero from `R` on.
    pub fn truncated_gaussian(radius: f64) -> Result<Self> {
        Self::new(radius, format!("truncated Gaussian, R = {radius}"), move |r| {
            (-r * r).exp() * smooth_cutoff(r / radius)
        })
    }

    /// Cubic spline through `values[k]` at `r = k * step`; the support is
    /// the last sample position.
    pub fn sampled(values: Vec<f64>, step: f64) -> Result<Self> {
        if values.len() < MIN_SAMPLE_INTERVALS + 1 {
            return Err(Error::Domain(format!(
                "sampled radial function needs at least {} samples, got {}",
                MIN_SAMPLE_INTERVALS + 1,
                values.len()
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Domain(format!("sample step must be positive, got {step}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite sample".into()));
        }
        let support = step * (values.len() - 1) as f64;
        Ok(Self {
            support,
            repr: Repr::Sampled(Arc::new(CubicSpline::new(values, step))),
            note: format!("cubic spline, {} samples", support / step + 1.0),
        })
    }

    pub fn support_radius(&self) -> f64 {
        self.support
    }

    pub fn smoothness_note(&self) -> &str {
        &self.note
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        if r > self.support {
            return 0.0;
        }
        match &self.repr {
            Repr::Callable(f) => f(r),
            Repr::Sampled(spline) => spline.eval(r),
        }
    }

    /// `a f + b g`, supported on the larger of the two supports.
    pub fn linear_combination(a: f64, f: &RadialFunction, b: f64, g: &RadialFunction) -> RadialFunction {
        let (f, g) = (f.clone(), g.clone());
        let support = f.support.max(g.support);
        RadialFunction {
            support,
            repr: Repr::Callable(Arc::new(move |r| a * f.eval(r) + b * g.eval(r))),
            note: "linear combination".into(),
        }
    }

    pub fn scaled(&self, factor: f64) -> RadialFunction {
        let f = self.clone();
        RadialFunction {
            support: self.support,
            repr: Repr::Callable(Arc::new(move |r| factor * f.eval(r))),
            note: self.note.clone(),
        }
    }
}

fn check_support(support: f64) -> Result<()> {
    if !(support > 0.0 && support.is_finite()) {
        return Err(Error::Domain(format!("support radius must be positive, got {support}")));
    }
    Ok(())
}

fn bump_profile(x: f64) -> f64 {
    let gap = 1.0 - x * x;
    if gap <= 0.0 {
        0.0
    } else {
        (-1.0 / gap).exp()
    }
}

fn exp_ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// One on `[0, 1/2]`, zero on `[1, ∞)`, smooth in between.
fn smooth_cutoff(x: f64) -> f64 {
    let t = 2.0 * (1.0 - x);
    let up = exp_ramp(t);
    let down = exp_ramp(1.0 - t);
    if up + down == 0.0 {
        0.0
    } else {
        up / (up + down)
    }
}

/// Cubic spline on a uniform grid: zero slope at the origin, natural at the far end.
#[derive(Debug, Clone)]
pub(crate) struct CubicSpline {
    values: Vec<f64>,
    second: Vec<f64>,
    step: f64,
}

impl CubicSpline {
    pub(crate) fn new(values: Vec<f64>, step: f64) -> Self {
        let n = values.len() - 1;
        let h = step;
        // tridiagonal system for second derivatives
        let mut lower = vec![0.0; n + 1];
        let mut diag = vec![0.0; n + 1];
        let mut upper = vec![0.0; n + 1];
        let mut rhs = vec![0.0; n + 1];
        diag[0] = h / 3.0;
        upper[0] = h / 6.0;
        rhs[0] = (values[1] - values[0]) / h;
        for i in 1..n {
            lower[i] = h / 6.0;
            diag[i] = 2.0 * h / 3.0;
            upper[i] = h / 6.0;
            rhs[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h;
        }
        diag[n] = 1.0;
        let second = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        Self { values, second, step }
    }

    pub(crate) fn eval(&self, r: f64) -> f64 {
        let n = self.values.len() - 1;
        let h = self.step;
        let k = ((r / h).floor() as usize).min(n - 1);
        let a = ((k + 1) as f64 * h - r) / h;
        let b = 1.0 - a;
        a * self.values[k]
            + b * self.values[k + 1]
            + ((a * a * a - a) * self.second[k] + (b * b * b - b) * self.second[k + 1]) * h * h / 6.0
    }
}

fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
