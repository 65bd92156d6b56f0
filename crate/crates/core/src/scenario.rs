// SPDX-License-Identifier: Apache-2.0

//! Time sweeps of the steering and entanglement measures, sudden-birth and
//! steering-window detection, and the preset figure panels.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::dynamics::{check_grid, covariance_closed_form};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::gaussian::{
    renyi2_entanglement, steering_a_to_b, steering_b_to_a, SteeringClass, TwoModeCovariance,
};
use crate::model::ReducedParams;

/// Width of the final bracket when refining a birth time or a window edge.
pub const BISECTION_TOLERANCE: f64 = 1e-9;

/// Uniform grid in scaled time `γt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            start: 0.0,
            end: 5.0,
            points: 1001,
        }
    }
}

impl TimeGrid {
    pub fn new(start: f64, end: f64, points: usize) -> Result<Self> {
        let g = Self { start, end, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || self.start < 0.0 {
            return Err(invalid(format!(
                "grid start must be >= 0, got {}",
                self.start
            )));
        }
        if !self.end.is_finite() || self.end <= self.start {
            return Err(invalid(format!(
                "grid end must exceed start, got {}",
                self.end
            )));
        }
        if self.points < 2 {
            return Err(invalid(format!(
                "grid needs at least 2 points, got {}",
                self.points
            )));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.end
                } else {
                    self.start + (self.end - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// All measures at one scaled time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSample {
    pub gamma_t: f64,
    pub g_ab: f64,
    pub g_ba: f64,
    pub e2: f64,
    pub class: SteeringClass,
}

impl MeasureSample {
    pub fn from_covariance(gamma_t: f64, v: &TwoModeCovariance, epsilon: f64) -> Result<Self> {
        let g_ab = steering_a_to_b(v)?;
        let g_ba = steering_b_to_a(v)?;
        Ok(Self {
            gamma_t,
            g_ab,
            g_ba,
            e2: renyi2_entanglement(v)?,
            class: SteeringClass::from_measures(g_ab, g_ba, epsilon),
        })
    }

    pub fn at(rp: &ReducedParams, gamma_t: f64, epsilon: f64) -> Result<Self> {
        Self::from_covariance(gamma_t, &covariance_closed_form(rp, gamma_t)?, epsilon)
    }

    /// Steering asymmetry `|G^{A→B} − G^{B→A}|`.
    pub fn g_delta(&self) -> f64 {
        (self.g_ab - self.g_ba).abs()
    }

    pub fn get(&self, measure: Measure) -> f64 {
        match measure {
            Measure::SteeringAToB => self.g_ab,
            Measure::SteeringBToA => self.g_ba,
            Measure::Asymmetry => self.g_delta(),
            Measure::Entanglement => self.e2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    SteeringAToB,
    SteeringBToA,
    Asymmetry,
    Entanglement,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("epsilon must be positive, got {epsilon}")))
    }
}

/// Measures at every grid time, evaluated from the closed-form covariance.
pub fn sweep_time(
    rp: &ReducedParams,
    grid: &[f64],
    epsilon: f64,
    exec: Execution,
) -> Result<Vec<MeasureSample>> {
    rp.validate()?;
    check_grid(grid)?;
    check_epsilon(epsilon)?;
    exec.try_map(grid, |&t| MeasureSample::at(rp, t, epsilon))
}

/// Shrinks `[lo, hi]` (with `pred(lo)` false and `pred(hi)` true) to
/// [`BISECTION_TOLERANCE`] and returns the upper end.
fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn check_series(series: &[MeasureSample]) -> Result<()> {
    if series.is_empty() {
        return Err(invalid("measure series is empty"));
    }
    if series.windows(2).any(|w| w[1].gamma_t <= w[0].gamma_t) {
        return Err(invalid("measure series must be on an increasing grid"));
    }
    Ok(())
}

/// First time the selected measure exceeds `epsilon`, refined by bisection
/// on the closed form between the last grid point below and the first above.
pub fn detect_birth(
    rp: &ReducedParams,
    series: &[MeasureSample],
    measure: Measure,
    epsilon: f64,
) -> Result<Option<f64>> {
    check_series(series)?;
    check_epsilon(epsilon)?;
    let Some(k) = series.iter().position(|s| s.get(measure) > epsilon) else {
        return Ok(None);
    };
    if k == 0 {
        return Ok(Some(series[0].gamma_t));
    }
    let t = bisect(series[k - 1].gamma_t, series[k].gamma_t, |t| {
        Ok(MeasureSample::at(rp, t, epsilon)?.get(measure) > epsilon)
    })?;
    Ok(Some(t))
}

/// Maximal time interval with a constant steering class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringWindow {
    pub kind: SteeringClass,
    pub start: f64,
    pub end: f64,
    /// The window reaches the end of the sampled grid.
    pub open_end: bool,
}

impl SteeringWindow {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Splits a series into runs of constant [`SteeringClass`]; interior edges
/// are refined by bisection on the closed form. Windows are contiguous and
/// cover the grid span.
pub fn steering_windows(
    rp: &ReducedParams,
    series: &[MeasureSample],
    epsilon: f64,
) -> Result<Vec<SteeringWindow>> {
    check_series(series)?;
    check_epsilon(epsilon)?;
    let mut windows = Vec::new();
    let mut start = series[0].gamma_t;
    for w in series.windows(2) {
        let (left, right) = (w[0], w[1]);
        if left.class == right.class {
            continue;
        }
        let edge = bisect(left.gamma_t, right.gamma_t, |t| {
            Ok(MeasureSample::at(rp, t, epsilon)?.class != left.class)
        })?;
        windows.push(SteeringWindow {
            kind: left.class,
            start,
            end: edge,
            open_end: false,
        });
        start = edge;
    }
    let last = series[series.len() - 1];
    windows.push(SteeringWindow {
        kind: last.class,
        start,
        end: last.gamma_t,
        open_end: true,
    });
    Ok(windows)
}

/// The nine preset panels: four thermal-occupation settings at `r = 1`
/// and five squeezing settings at `n_th = (1, 1)`, all with `C = (15, 35)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Panel {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig3Inset,
}

impl Panel {
    pub const ALL: [Panel; 9] = [
        Panel::Fig2a,
        Panel::Fig2b,
        Panel::Fig2c,
        Panel::Fig2d,
        Panel::Fig3a,
        Panel::Fig3b,
        Panel::Fig3c,
        Panel::Fig3d,
        Panel::Fig3Inset,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Panel::Fig2a => "2a",
            Panel::Fig2b => "2b",
            Panel::Fig2c => "2c",
            Panel::Fig2d => "2d",
            Panel::Fig3a => "3a",
            Panel::Fig3b => "3b",
            Panel::Fig3c => "3c",
            Panel::Fig3d => "3d",
            Panel::Fig3Inset => "3inset",
        }
    }

    /// `(n_th1, n_th2, r)` of the panel.
    fn environment(self) -> (f64, f64, f64) {
        match self {
            Panel::Fig2a => (0.5, 1.0, 1.0),
            Panel::Fig2b => (1.0, 0.5, 1.0),
            Panel::Fig2c => (1.0, 1.2, 1.0),
            Panel::Fig2d => (1.0, 1.5, 1.0),
            Panel::Fig3a => (1.0, 1.0, 0.1),
            Panel::Fig3b => (1.0, 1.0, 0.5),
            Panel::Fig3c => (1.0, 1.0, 1.0),
            Panel::Fig3d => (1.0, 1.0, 1.1),
            Panel::Fig3Inset => (1.0, 1.0, 1.7),
        }
    }

    /// Reduced parameters with `γ = 2π·140 Hz`.
    pub fn params(self) -> ReducedParams {
        let (n1, n2, r) = self.environment();
        ReducedParams::new(15.0, 35.0, n1, n2, r, 2.0 * PI * 140.0)
            .expect("panel parameters are valid")
    }
}

impl fmt::Display for Panel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Panel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("fig").unwrap_or(&key);
        match key {
            "3inset" | "3-inset" | "3i" => Ok(Panel::Fig3Inset),
            other => Panel::ALL
                .into_iter()
                .find(|p| p.id() == other)
                .ok_or_else(|| invalid(format!("unknown panel id '{s}'"))),
        }
    }
}

/// Measure series for one figure panel.
pub fn figure_panel(
    panel: Panel,
    grid: &TimeGrid,
    epsilon: f64,
    exec: Execution,
) -> Result<Vec<MeasureSample>> {
    grid.validate()?;
    sweep_time(&panel.params(), &grid.times(), epsilon, exec)
}

/// Every panel on the same grid, in [`Panel::ALL`] order.
pub fn all_panels(
    grid: &TimeGrid,
    epsilon: f64,
    exec: Execution,
) -> Result<Vec<(Panel, Vec<MeasureSample>)>> {
    exec.try_map(&Panel::ALL, |&p| {
        Ok((p, figure_panel(p, grid, epsilon, Execution::Sequential)?))
    })
}
