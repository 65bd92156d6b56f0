// SPDX-License-Identifier: Apache-2.0

use approx::assert_relative_eq;
use optosteer::dynamics::closed_form_trajectory;
use optosteer::model::{cooperativity_expanded, single_photon_coupling};
use optosteer::{
    build_drift_diffusion, cooperativity, covariance_closed_form, covariance_ode,
    enhanced_coupling, mean_fields, reduce, regime_check, renyi2_entanglement,
    stationary_covariance, steering_a_to_b, steering_b_to_a, Mode, Panel, PhysicalParams,
    ReducedParams, TimeGrid, TwoModeCovariance,
};
use proptest::prelude::*;

/// Direct `½ ln(det V₁ / (4 det V))` with no Schur complement.
fn steering_from_determinants(v: &TwoModeCovariance) -> f64 {
    (0.5 * (v.block_a().determinant() / (4.0 * v.determinant())).ln()).max(0.0)
}

#[test]
fn ode_matches_closed_form_on_a_coarse_grid_for_every_panel() {
    let grid = TimeGrid::new(0.0, 5.0, 51).unwrap().times();
    for p in Panel::ALL {
        let rp = p.params();
        let ode = covariance_ode(&rp, &grid).unwrap();
        let exact = closed_form_trajectory(&rp, &grid).unwrap();
        assert!(ode.max_abs_diff(&exact).unwrap() < 1e-8, "panel {}", p.id());
    }
}

#[test]
fn late_closed_form_reaches_the_stationary_state() {
    let rp = Panel::Fig2d.params();
    let late = covariance_closed_form(&rp, 40.0).unwrap();
    let inf = stationary_covariance(&rp).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert_relative_eq!(late.get(i, j), inf.get(i, j), epsilon = 1e-12);
        }
    }
}

#[test]
fn frozen_stationary_values() {
    let rp = ReducedParams::new(15.0, 35.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let v = stationary_covariance(&rp).unwrap();
    let n = 1f64.sinh().powi(2);
    assert_relative_eq!(
        v.get(0, 0),
        ((2.0 * n + 1.0) * 15.0 + 3.0) / 32.0,
        max_relative = 1e-15
    );
    assert_relative_eq!(v.get(0, 0), 1.8573, epsilon = 5e-5);
    assert_relative_eq!(v.get(0, 2), 1.598, epsilon = 5e-4);
    assert_relative_eq!(
        v.get(0, 2),
        2.0f64.sinh() * 525f64.sqrt() / 52.0,
        max_relative = 1e-15
    );
}

#[test]
fn steering_matches_determinant_form_along_a_panel() {
    let rp = Panel::Fig2c.params();
    for k in 0..=100 {
        let v = covariance_closed_form(&rp, 0.05 * k as f64).unwrap();
        let swapped = v.swap_modes();
        assert_relative_eq!(
            steering_a_to_b(&v).unwrap(),
            steering_from_determinants(&v),
            epsilon = 1e-12
        );
        assert_relative_eq!(
            steering_b_to_a(&v).unwrap(),
            steering_from_determinants(&swapped),
            epsilon = 1e-12
        );
    }
}

#[test]
fn groblacher_reduction_chain() {
    let p = PhysicalParams::groblacher([1.0, 1.0], 1.0);
    let rp = reduce(&p).unwrap();
    for j in [Mode::A, Mode::B] {
        let g = enhanced_coupling(&p, j).unwrap();
        let direct = single_photon_coupling(&p, j) * mean_fields(&p, j).unwrap().cavity.norm();
        assert_relative_eq!(g, direct, max_relative = 1e-12);
        assert_relative_eq!(
            cooperativity(&p, j).unwrap(),
            cooperativity_expanded(&p, j).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            rp.cooperativity(j),
            cooperativity(&p, j).unwrap(),
            max_relative = 1e-15
        );
    }
    assert_relative_eq!(rp.c2 / rp.c1, 11.0 / 5.0, max_relative = 1e-12);
    assert!(regime_check(&p, 4.0).unwrap().passed());
    assert!(!regime_check(&p, 5.0).unwrap().passed());
}

#[test]
fn diffusion_cross_term_at_panel_values() {
    let rp = ReducedParams::new(15.0, 35.0, 0.5, 1.0, 1.0, 1.0).unwrap();
    let dd = build_drift_diffusion(&rp).unwrap();
    assert_relative_eq!(
        dd.diffusion[(0, 2)],
        0.5 * 2f64.sinh() * 525f64.sqrt(),
        max_relative = 1e-14
    );
    assert_eq!(dd.diffusion[(1, 3)], -dd.diffusion[(0, 2)]);
}

prop_compose! {
    fn params()(c1 in 0.0..60.0f64, c2 in 0.0..60.0f64, n1 in 0.0..20.0f64, n2 in 0.0..20.0f64,
                r in 0.0..2.0f64) -> ReducedParams {
        ReducedParams::new(c1, c2, n1, n2, r, 1.0).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_states_are_physical_with_finite_measures(rp in params(), t in 0.0..8.0f64) {
        let v = covariance_closed_form(&rp, t).unwrap();
        let e = renyi2_entanglement(&v).unwrap();
        let g = steering_a_to_b(&v).unwrap().max(steering_b_to_a(&v).unwrap());
        prop_assert!(e.is_finite() && e >= 0.0);
        prop_assert!(g <= e + 1e-12);
    }
}
