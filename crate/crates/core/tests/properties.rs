mod common;

use cdpanel::cd_tests::{cd, cd_power_enhanced, cd_weighted, p_value};
use cdpanel::estimators::Estimator;
use cdpanel::panel::{validate_panel, PanelDataset, ResidualMatrix, ResidualSource};
use common::*;
use ndarray::{Array2, Axis};
use proptest::prelude::*;
use rand::Rng;

fn max_abs(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0, |m, x| m.max(x.abs()))
}

fn sum_check(e: &Array2<f64>, axis: usize) -> f64 {
    let scale = max_abs(e.iter().copied()).max(1.0);
    max_abs(e.sum_axis(Axis(axis)).iter().copied()) / scale
}

fn shift_y(panel: &PanelDataset, c: f64) -> PanelDataset {
    let (y, x) = panel.clone().into_parts();
    validate_panel(y.mapv(|v| v + c), x).unwrap()
}

/// `y_i + X_i delta` with a common `delta`.
fn tilt_y(panel: &PanelDataset, delta: &[f64]) -> PanelDataset {
    let (mut y, x) = panel.clone().into_parts();
    for ((i, s), v) in y.indexed_iter_mut() {
        for (k, d) in delta.iter().enumerate() {
            *v += d * x[[i, s, k]];
        }
    }
    validate_panel(y, x).unwrap()
}

fn max_diff(a: &ResidualMatrix, b: &ResidualMatrix) -> f64 {
    max_abs(a.values().iter().zip(b.values().iter()).map(|(u, v)| u - v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cce_residual_columns_sum_to_zero(seed in any::<u64>()) {
        let panel = random_panel(seed);
        let out = Estimator::CCEPooled.estimate(&panel).unwrap();
        let e = out.residuals.values().to_owned();
        prop_assert!(sum_check(&e, 0) < 1e-8);
    }

    #[test]
    fn two_way_residuals_are_double_zero(seed in any::<u64>()) {
        let panel = random_panel(seed);
        let out = Estimator::TwoWayFE.estimate(&panel).unwrap();
        let e = out.residuals.values().to_owned();
        prop_assert!(sum_check(&e, 0) < 1e-8);
        prop_assert!(sum_check(&e, 1) < 1e-8);
    }

    #[test]
    fn two_way_residuals_ignore_a_common_shift_in_y(seed in any::<u64>(), c in -50.0f64..50.0) {
        let panel = random_panel(seed);
        let a = Estimator::TwoWayFE.estimate(&panel).unwrap().residuals;
        let b = Estimator::TwoWayFE.estimate(&shift_y(&panel, c)).unwrap().residuals;
        prop_assert!(max_diff(&a, &b) < 1e-10 * (1.0 + c.abs()));
    }

    #[test]
    fn residuals_ignore_the_slope_of_y(seed in any::<u64>(), d0 in -5.0f64..5.0, d1 in -5.0f64..5.0) {
        let panel = random_panel(seed);
        let delta = &[d0, d1][..panel.n_regressors()];
        let tilted = tilt_y(&panel, delta);
        for est in [Estimator::TwoWayFE, Estimator::CCEPooled, Estimator::FirstDiffTimeDummies] {
            let a = est.estimate(&panel).unwrap();
            let b = est.estimate(&tilted).unwrap();
            prop_assert!(max_diff(&a.residuals, &b.residuals) < 1e-8, "{:?}", est);
            for (k, d) in delta.iter().enumerate() {
                prop_assert!((b.beta_hat[k] - a.beta_hat[k] - d).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn cd_is_invariant_to_row_scale_and_location(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = small_instance(&mut r);
        let mut scaled = e.clone();
        for mut row in scaled.axis_iter_mut(Axis(0)) {
            let a = r.gen_range(0.01..100.0);
            let b = r.gen_range(-10.0..10.0);
            row.mapv_inplace(|v| a * v + b);
        }
        let x = cd(&residuals(&e)).unwrap().statistic;
        let y = cd(&ResidualMatrix::new(scaled, ResidualSource::Raw).unwrap()).unwrap().statistic;
        prop_assert!(close(x, y, 1e-9), "{x} vs {y}");
    }

    #[test]
    fn cd_weighted_is_symmetric_in_weight_sign(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = small_instance(&mut r);
        let w = weights(&signs(&mut r, e.nrows()));
        let res = residuals(&e);
        let a = cd_weighted(&res, &w).unwrap().statistic;
        let b = cd_weighted(&res, &w.negated()).unwrap().statistic;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn power_enhancement_never_lowers_the_statistic(seed in any::<u64>(), correlated in any::<bool>()) {
        let mut r = rng(seed);
        let e = if correlated { correlated_instance(&mut r) } else { small_instance(&mut r) };
        let w = weights(&signs(&mut r, e.nrows()));
        let res = residuals(&e);
        let plain = cd_weighted(&res, &w).unwrap().statistic;
        let enhanced = cd_power_enhanced(&res, &w).unwrap();
        prop_assert!(enhanced.statistic >= plain);
        if enhanced.aux.exceedances == Some(0) {
            prop_assert_eq!(enhanced.statistic, plain);
        }
    }

    #[test]
    fn p_value_is_symmetric_and_monotone(z in -40.0f64..40.0, dz in 0.0f64..5.0) {
        let p = p_value(z).unwrap();
        prop_assert_eq!(p, p_value(-z).unwrap());
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(p_value(z.abs() + dz).unwrap() <= p);
    }
}

#[test]
fn p_value_reference_points() {
    assert_eq!(p_value(0.0).unwrap(), 1.0);
    assert!((p_value(1.959963984540054).unwrap() - 0.05).abs() < 1e-10);
    assert!((p_value(2.5758293035489).unwrap() - 0.01).abs() < 1e-10);
    assert!(p_value(f64::NAN).is_err());
}
