use super::SpectralFunction;

const COARSE_POINTS: usize = 2001;
const FINE_POINTS: usize = 20001;
/// Largest tolerated excess of the fine-grid maximum over the fitted constant.
const FIT_SLACK: f64 = 1e-2;
/// The maximizer must lie in this leading fraction of the window.
const INTERIOR_FRACTION: f64 = 0.9;

/// Outcome of a decay fit `|h(λ)| <= c_N (1 + λ)^{-N}` on `[0, λ_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaleyWienerReport {
    pub order: u32,
    pub support: f64,
    pub lambda_max: f64,
    /// Fitted constant on the coarse grid.
    pub c_n: f64,
    /// Largest relative excess of `|h| (1 + λ)^N` over `c_N` on the fine grid.
    pub worst_violation: f64,
    /// Where the fine-grid maximum of `|h| (1 + λ)^N` sits.
    pub argmax: f64,
    pub passed: bool,
}

/// Fit the smallest `c_N` with `|h(λ)| <= c_N (1 + |λ|)^{-N}` on the real
/// axis, where the exponential-type factor is one.
///
/// The fit fails when the weighted maximum sits at the end of the window:
/// the bound is then still growing and no finite constant is determined.
pub fn paley_wiener_check(h: &SpectralFunction, support: f64, order: u32, lambda_max: f64) -> PaleyWienerReport {
    let weighted = |lambda: f64| h.eval(lambda).norm() * (1.0 + lambda).powi(order as i32);
    let grid = |points: usize| (0..points).map(move |k| lambda_max * k as f64 / (points - 1) as f64);
    let c_n = grid(COARSE_POINTS).map(weighted).fold(0.0, f64::max);
    let mut best = (0.0_f64, 0.0);
    for lambda in grid(FINE_POINTS) {
        let v = weighted(lambda);
        if v > best.0 || !v.is_finite() {
            best = (v, lambda);
        }
    }
    let worst_violation = if c_n > 0.0 { best.0 / c_n - 1.0 } else { 0.0 };
    let finite = c_n.is_finite() && best.0.is_finite();
    let interior = c_n == 0.0 || best.1 <= INTERIOR_FRACTION * lambda_max;
    PaleyWienerReport {
        order,
        support,
        lambda_max,
        c_n,
        worst_violation,
        argmax: best.1,
        passed: finite && interior && worst_violation <= FIT_SLACK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_fails_and_decay_passes() {
        let one = SpectralFunction::real(|_| 1.0);
        let report = paley_wiener_check(&one, 1.0, 1, 50.0);
        assert!(!report.passed);
        let decaying = SpectralFunction::real(|l: f64| (-l).exp());
        let report = paley_wiener_check(&decaying, 1.0, 4, 50.0);
        assert!(report.passed, "{report:?}");
        assert!((report.argmax - 3.0).abs() < 0.01);
    }
}
