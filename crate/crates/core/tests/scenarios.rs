// SPDX-License-Identifier: Apache-2.0

use optosteer::scenario::all_panels;
use optosteer::{
    detect_birth, figure_panel, steering_windows, sweep_time, Execution, Measure, MeasureSample,
    Panel, ReducedParams, SteeringClass, TimeGrid, DEFAULT_EPSILON,
};

fn panel(p: Panel) -> Vec<MeasureSample> {
    figure_panel(
        p,
        &TimeGrid::default(),
        DEFAULT_EPSILON,
        Execution::Parallel,
    )
    .unwrap()
}

#[test]
fn panel_3d_steers_only_from_b_at_two_tenths() {
    let s = MeasureSample::at(&Panel::Fig3d.params(), 0.2, DEFAULT_EPSILON).unwrap();
    assert_eq!(s.class, SteeringClass::OneWayBToA);
    assert_eq!(s.g_ab, 0.0);
    assert_eq!(s.g_delta(), s.g_ba);
}

#[test]
fn panel_2a_is_separable_at_five_hundredths() {
    let s = MeasureSample::at(&Panel::Fig2a.params(), 0.05, DEFAULT_EPSILON).unwrap();
    assert_eq!(s.g_ab, 0.0);
    assert_eq!(s.g_ba, 0.0);
}

#[test]
fn default_grid_has_1001_rows_ending_at_five() {
    let rows = panel(Panel::Fig2a);
    assert_eq!(rows.len(), 1001);
    assert_eq!(rows[0].gamma_t, 0.0);
    assert_eq!(rows[1000].gamma_t, 5.0);
}

#[test]
fn every_panel_starts_from_a_product_state() {
    for (p, rows) in all_panels(&TimeGrid::default(), DEFAULT_EPSILON, Execution::Parallel).unwrap()
    {
        let first = rows[0];
        assert_eq!(
            (first.g_ab, first.g_ba, first.e2),
            (0.0, 0.0, 0.0),
            "panel {}",
            p.id()
        );
    }
}

#[test]
fn birth_times_are_stable_under_grid_refinement() {
    let rp = Panel::Fig2a.params();
    let births: Vec<f64> = [101, 1001, 4001]
        .iter()
        .map(|&n| {
            let grid = TimeGrid::new(0.0, 5.0, n).unwrap().times();
            let series = sweep_time(&rp, &grid, DEFAULT_EPSILON, Execution::Parallel).unwrap();
            detect_birth(&rp, &series, Measure::Entanglement, DEFAULT_EPSILON)
                .unwrap()
                .unwrap()
        })
        .collect();
    for b in &births {
        assert!((b - births[0]).abs() < 1e-8, "{births:?}");
    }
}

#[test]
fn window_edges_are_stable_under_grid_refinement() {
    let rp = Panel::Fig2c.params();
    let edges = |n: usize| -> Vec<(SteeringClass, f64)> {
        let grid = TimeGrid::new(0.0, 5.0, n).unwrap().times();
        let series = sweep_time(&rp, &grid, DEFAULT_EPSILON, Execution::Sequential).unwrap();
        steering_windows(&rp, &series, DEFAULT_EPSILON)
            .unwrap()
            .iter()
            .map(|w| (w.kind, w.end))
            .collect()
    };
    let (coarse, fine) = (edges(501), edges(2001));
    assert_eq!(coarse.len(), fine.len());
    for (a, b) in coarse.iter().zip(&fine) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() < 1e-8);
    }
}

#[test]
fn panel_2c_sequence_of_steering_regimes() {
    let rp = Panel::Fig2c.params();
    let windows = steering_windows(&rp, &panel(Panel::Fig2c), DEFAULT_EPSILON).unwrap();
    let kinds: Vec<SteeringClass> = windows.iter().map(|w| w.kind).collect();
    use SteeringClass::*;
    assert_eq!(kinds, vec![NoWay, OneWayBToA, TwoWay, OneWayBToA]);
}

#[test]
fn panel_3d_never_steers_both_ways() {
    let rp = Panel::Fig3d.params();
    let windows = steering_windows(&rp, &panel(Panel::Fig3d), DEFAULT_EPSILON).unwrap();
    assert!(windows.iter().all(|w| w.kind != SteeringClass::TwoWay));
    let one_way = windows
        .iter()
        .find(|w| w.kind == SteeringClass::OneWayBToA)
        .unwrap();
    assert!(one_way.start < 0.2 && 0.2 < one_way.end);
}

#[test]
fn warmer_baths_delay_the_birth() {
    let cold = ReducedParams::new(15.0, 35.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    let warm = ReducedParams::new(15.0, 35.0, 5.0, 5.0, 1.0, 1.0).unwrap();
    let birth = |rp: &ReducedParams| {
        let grid = TimeGrid::default().times();
        let s = sweep_time(rp, &grid, DEFAULT_EPSILON, Execution::Parallel).unwrap();
        detect_birth(rp, &s, Measure::Entanglement, DEFAULT_EPSILON)
            .unwrap()
            .unwrap()
    };
    assert!(birth(&cold) < birth(&warm));
}

#[test]
fn panel_ids_parse() {
    for p in Panel::ALL {
        assert_eq!(p.id().parse::<Panel>().unwrap(), p);
    }
    assert!("4a".parse::<Panel>().is_err());
}
