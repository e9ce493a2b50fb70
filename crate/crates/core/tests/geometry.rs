use hspec_core::geometry::{
    curvature_invariants, ledger_coefficient, mean_curvature, validate_entropy, volume_density, HyperbolicModel,
};
use hspec_core::{Error, ManifoldParams};
use proptest::prelude::*;

fn admissible() -> impl Strategy<Value = ManifoldParams> {
    (3u32..=12, 0.0..=1.0_f64).prop_map(|(n, s)| {
        let m = f64::from(n - 1);
        ManifoldParams::new(n, m / 2.0 + s * m / 2.0).unwrap()
    })
}

#[test]
fn density_limits() {
    let hyperbolic = ManifoldParams::new(3, 2.0).unwrap();
    for r in [0.01, 0.7, 5.0] {
        assert!((volume_density(&hyperbolic, r) - r.sinh().powi(2)).abs() < 1e-13 * r.sinh().powi(2));
    }
    for (n, q) in [(3, 1.5), (4, 2.0), (6, 4.0)] {
        let p = ManifoldParams::new(n, q).unwrap();
        assert_eq!(volume_density(&p, 0.0), 0.0);
        let r = 1e-4;
        assert!((volume_density(&p, r) / r.powi(n as i32 - 1) - 1.0).abs() < 1e-6);
        let far = volume_density(&p, 40.0) * (-q * 40.0).exp();
        assert!((far - 2f64.powf(f64::from(n) - 1.0 - 2.0 * q)).abs() < 1e-8);
    }
}

#[test]
fn mean_curvature_limits() {
    let hyperbolic = ManifoldParams::new(3, 2.0).unwrap();
    assert!((mean_curvature(&hyperbolic, 1.3).unwrap() - 2.0 / 1.3f64.tanh()).abs() < 1e-14);
    for (n, q) in [(3, 1.0), (5, 3.0), (8, 5.5)] {
        let p = ManifoldParams::new(n, q).unwrap();
        let near = mean_curvature(&p, 1e-3).unwrap() - f64::from(n - 1) / 1e-3;
        assert!(near.abs() < 1e-2);
        assert!((mean_curvature(&p, 40.0).unwrap() - q).abs() < 1e-12);
        assert!(matches!(mean_curvature(&p, 0.0), Err(Error::Domain(_))));
    }
}

#[test]
fn ledger_reference_values() {
    let p = ManifoldParams::new(3, 2.0).unwrap();
    assert!((ledger_coefficient(&p, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    for m in [2, 4, 10, 40] {
        assert_eq!(ledger_coefficient(&p, m).unwrap(), 0.0);
    }
    assert!(matches!(ledger_coefficient(&p, 0), Err(Error::Range(_))));
    assert!(matches!(ledger_coefficient(&p, 41), Err(Error::Range(_))));
}

#[test]
fn curvature_boundary_cases() {
    for n in 3..=9u32 {
        let m = f64::from(n - 1);
        let top = curvature_invariants(&ManifoldParams::new(n, m).unwrap());
        assert_eq!(top.ric, -m);
        assert!((top.tr_r2 - m).abs() < 1e-12);
        let bottom = curvature_invariants(&ManifoldParams::new(n, m / 2.0).unwrap());
        assert_eq!(bottom.ric, -m / 4.0);
        assert!((bottom.tr_r2 - m / 16.0).abs() < 1e-12);
    }
    assert_eq!(curvature_invariants(&ManifoldParams::new(3, 2.0).unwrap()).delta_g, -1.0);
}

#[test]
fn entropy_reports() {
    let report = validate_entropy(&ManifoldParams::new(4, 2.0).unwrap());
    assert!(report.passed());
    assert_eq!(report.equality, None);

    let report = validate_entropy(&ManifoldParams::new(3, 2.0).unwrap());
    assert!(report.passed());
    assert_eq!(report.equality, Some(HyperbolicModel::UnitCurvature));
    assert_eq!(report.equality.unwrap().label(), "isometric to RH^n(-1)");

    let report = validate_entropy(&ManifoldParams::permissive(3, 2.5).unwrap());
    assert!(!report.passed());
    assert!(report.checks.iter().any(|c| !c.passed && c.name == "Q <= n-1"));
}

#[test]
fn strict_and_permissive_construction() {
    assert!(matches!(ManifoldParams::new(3, 2.5), Err(Error::InvalidParams(_))));
    assert!(matches!(ManifoldParams::new(2, 1.0), Err(Error::InvalidParams(_))));
    assert!(matches!(ManifoldParams::permissive(4, -1.0), Err(Error::InvalidParams(_))));
    let loose = ManifoldParams::permissive(4, 0.3).unwrap();
    assert!(!loose.in_hypergeometric_range());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mean_curvature_is_log_derivative(p in admissible(), r in 0.1..30.0_f64) {
        let h = 1e-6;
        let fd = (volume_density(&p, r + h).ln() - volume_density(&p, r - h).ln()) / (2.0 * h);
        let sigma = mean_curvature(&p, r).unwrap();
        prop_assert!((fd - sigma).abs() <= 1e-6 * sigma.abs());
    }

    #[test]
    fn density_increases(p in admissible(), r in 0.0..30.0_f64, dr in 1e-3..1.0_f64) {
        prop_assert!(volume_density(&p, r + dr) > volume_density(&p, r));
    }

    #[test]
    fn truncated_ledger_series(p in admissible(), r in 1e-3..=0.5_f64) {
        let mut series = (f64::from(p.n()) - 1.0) / r;
        let mut factorial = 1.0;
        for m in 1..=15u32 {
            factorial *= f64::from(m);
            series += ledger_coefficient(&p, m).unwrap() * r.powi(m as i32) / factorial;
        }
        prop_assert!((series - mean_curvature(&p, r).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn invariant_relations(p in admissible()) {
        let m = f64::from(p.n()) - 1.0;
        let inv = curvature_invariants(&p);
        prop_assert!((inv.ric - m * inv.delta_g).abs() < 1e-12 * m);
        prop_assert!((inv.tr_r2 + 0.25 * (m + 5.0 * inv.ric)).abs() < 1e-12 * m);
        prop_assert!((inv.tr_r2 - inv.h_const).abs() < 1e-12 * m);
        prop_assert!((ledger_coefficient(&p, 1).unwrap() + inv.ric / 3.0).abs() < 1e-12 * m);
        prop_assert!(inv.ric >= -m * (1.0 + 1e-12) && inv.ric <= -m / 4.0 * (1.0 - 1e-12));
        prop_assert!(inv.tr_r2 >= m / 16.0 * (1.0 - 1e-12) && inv.tr_r2 <= m * (1.0 + 1e-12));
        prop_assert!((inv.entropy_from_ricci(p.n()) - p.q()).abs() < 1e-12 * m);
        prop_assert!(validate_entropy(&p).passed());
    }
}
