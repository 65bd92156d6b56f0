// SPDX-License-Identifier: Apache-2.0

use optosteer::{Panel, TimeGrid};
use optosteer_cli::config::{PhysicalSpec, ReducedSpec};
use optosteer_cli::{
    parse_config, render, ConfigError, OutputFormat, ParamBlock, RunConfig, RunMode,
};
use proptest::prelude::*;
use std::path::PathBuf;

fn reduced() -> impl Strategy<Value = ParamBlock> {
    (
        0.0..100.0f64,
        0.0..100.0f64,
        0.0..50.0f64,
        0.0..50.0f64,
        0.0..3.0f64,
        1.0..1e4f64,
    )
        .prop_map(|(c1, c2, nth1, nth2, r, gamma_hz)| {
            ParamBlock::Reduced(ReducedSpec {
                c1,
                c2,
                nth1,
                nth2,
                r,
                gamma_hz,
            })
        })
}

fn physical() -> impl Strategy<Value = ParamBlock> {
    (0.0..5.0f64, 0.0..5.0f64, 0.0..2.0f64, any::<bool>()).prop_map(
        |(n1, n2, r, by_temperature)| {
            let mut spec = PhysicalSpec::groblacher([n1, n2], r);
            if by_temperature {
                spec.temperature_k = [Some(n1 + 0.01), Some(n2 + 0.01)];
                spec.nth = [None, None];
            }
            ParamBlock::Physical(spec)
        },
    )
}

prop_compose! {
    fn grid()(start in 0.0..2.0f64, span in 0.1..10.0f64, points in 2usize..5000) -> TimeGrid {
        TimeGrid { start, end: start + span, points }
    }
}

fn config() -> impl Strategy<Value = RunConfig> {
    let mode = prop_oneof![
        Just(RunMode::Eval),
        Just(RunMode::Sweep),
        Just(RunMode::Stationary),
        Just(RunMode::Figure),
        Just(RunMode::Regime),
    ];
    (
        mode,
        prop_oneof![reduced(), physical()],
        0usize..9,
        0.0..10.0f64,
        grid(),
        1e-14..1e-3f64,
        1.0..20.0f64,
        any::<bool>(),
        proptest::option::of("[a-z]{1,8}\\.(csv|json)"),
    )
        .prop_map(
            |(mode, block, panel, time, grid, epsilon, threshold, json, out)| {
                let regime = mode == RunMode::Regime;
                let params = match (mode, block) {
                    (RunMode::Figure, _) => None,
                    (_, b @ ParamBlock::Physical(_)) => Some(b),
                    (_, b) if !regime => Some(b),
                    _ => Some(ParamBlock::Physical(PhysicalSpec::groblacher(
                        [1.0, 1.0],
                        1.0,
                    ))),
                };
                RunConfig {
                    mode,
                    params,
                    panel: (mode == RunMode::Figure).then_some(Panel::ALL[panel]),
                    time: (mode == RunMode::Eval).then_some(time),
                    grid,
                    epsilon,
                    regime_threshold: threshold,
                    format: if json {
                        OutputFormat::Json
                    } else {
                        OutputFormat::Csv
                    },
                    out: out.map(PathBuf::from),
                }
            },
        )
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(c in config()) {
        let text = render(&c);
        let back = parse_config(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, c);
    }
}

#[test]
fn reduced_block_for_panel_2a() {
    let text = "[reduced]\nc1 = 15\nc2 = 35\nnth1 = 0.5\nnth2 = 1\nr = 1\ngamma_hz = 879.6\n\n[run]\nmode = \"sweep\"\n";
    let c = parse_config(text).unwrap();
    let rp = c.reduced_params().unwrap();
    let panel = Panel::Fig2a.params();
    assert_eq!(
        (rp.c1, rp.c2, rp.n_th1, rp.n_th2, rp.squeezing),
        (
            panel.c1,
            panel.c2,
            panel.n_th1,
            panel.n_th2,
            panel.squeezing
        )
    );
    assert_eq!(c.grid, TimeGrid::default());
}

#[test]
fn both_blocks_are_rejected() {
    let text = "[reduced]\nc1 = 1\n[physical]\nr = 1\n[run]\nmode = \"sweep\"\n";
    assert!(matches!(
        parse_config(text),
        Err(ConfigError::ExclusiveBlocks)
    ));
}

#[test]
fn unknown_keys_are_rejected() {
    let text = "[run]\nmode = \"figure\"\npanel = \"2a\"\ncolour = 3\n";
    let err = parse_config(text).unwrap_err();
    assert!(err.to_string().contains("colour"), "{err}");
}
