// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a TOML document with the sections `[physical]` or
//! `[reduced]` (exactly one), `[run]` and `[output]`.
//!
//! Frequencies and rates are written in Hz and converted to angular units
//! (×2π) when the model parameters are built. Unknown keys are rejected.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use optosteer::model::{Cavity, Mirror, PhysicalParams, ReducedParams, DEFAULT_REGIME_THRESHOLD};
use optosteer::{Panel, TimeGrid, DEFAULT_EPSILON};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("missing required keys: {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("exclusive blocks: [physical] and [reduced] cannot both be present")]
    ExclusiveBlocks,
    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("cannot read config {path}: {message}")]
    Read { path: String, message: String },
}

impl ConfigError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Eval,
    Sweep,
    Figure,
    Regime,
    Stationary,
}

impl RunMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RunMode::Eval => "eval",
            RunMode::Sweep => "sweep",
            RunMode::Figure => "figure",
            RunMode::Regime => "regime",
            RunMode::Stationary => "stationary",
        }
    }
}

impl FromStr for RunMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eval" => Ok(RunMode::Eval),
            "sweep" => Ok(RunMode::Sweep),
            "figure" => Ok(RunMode::Figure),
            "regime" => Ok(RunMode::Regime),
            "stationary" => Ok(RunMode::Stationary),
            other => Err(format!(
                "unknown mode '{other}' (expected eval, sweep, figure, regime or stationary)"
            )),
        }
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// `[reduced]` block, in config units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSpec {
    pub c1: f64,
    pub c2: f64,
    pub nth1: f64,
    pub nth2: f64,
    pub r: f64,
    pub gamma_hz: f64,
}

/// `[physical]` block, in config units (Hz, m, W, kg, K).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSpec {
    pub cavity_freq_hz: [f64; 2],
    pub laser_freq_hz: [f64; 2],
    pub length_m: [f64; 2],
    pub kappa_hz: [f64; 2],
    pub power_w: [f64; 2],
    pub mass_kg: [f64; 2],
    pub mech_freq_hz: [f64; 2],
    pub gamma_hz: [f64; 2],
    pub temperature_k: [Option<f64>; 2],
    pub nth: [Option<f64>; 2],
    pub r: f64,
}

impl PhysicalSpec {
    pub fn to_params(&self) -> PhysicalParams {
        let w = 2.0 * PI;
        let cavity = |j: usize| Cavity {
            cavity_frequency: w * self.cavity_freq_hz[j],
            laser_frequency: w * self.laser_freq_hz[j],
            length: self.length_m[j],
            decay_rate: w * self.kappa_hz[j],
            laser_power: self.power_w[j],
        };
        let mirror = |j: usize| Mirror {
            mass: self.mass_kg[j],
            frequency: w * self.mech_freq_hz[j],
            damping: w * self.gamma_hz[j],
            temperature: self.temperature_k[j],
            thermal_occupation: self.nth[j],
        };
        PhysicalParams {
            cavities: [cavity(0), cavity(1)],
            mirrors: [mirror(0), mirror(1)],
            squeezing: self.r,
        }
    }

    /// The strong-coupling membrane setup in config units.
    pub fn groblacher(nth: [f64; 2], r: f64) -> Self {
        Self {
            cavity_freq_hz: [5.26e14; 2],
            laser_freq_hz: [2.82e14; 2],
            length_m: [25e-3; 2],
            kappa_hz: [215e3; 2],
            power_w: [5e-3, 11e-3],
            mass_kg: [145e-9; 2],
            mech_freq_hz: [947e3; 2],
            gamma_hz: [140.0; 2],
            temperature_k: [None; 2],
            nth: [Some(nth[0]), Some(nth[1])],
            r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamBlock {
    Physical(PhysicalSpec),
    Reduced(ReducedSpec),
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    /// Absent only in figure mode, where the panel supplies the parameters.
    pub params: Option<ParamBlock>,
    pub panel: Option<Panel>,
    /// Scaled time for `eval`.
    pub time: Option<f64>,
    pub grid: TimeGrid,
    pub epsilon: f64,
    pub regime_threshold: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Reduced model parameters for the configured block (or panel).
    pub fn reduced_params(&self) -> Result<ReducedParams, ConfigError> {
        match (&self.params, self.panel) {
            (Some(ParamBlock::Reduced(r)), _) => {
                ReducedParams::new(r.c1, r.c2, r.nth1, r.nth2, r.r, 2.0 * PI * r.gamma_hz)
                    .map_err(|e| ConfigError::invalid("reduced", e.to_string()))
            }
            (Some(ParamBlock::Physical(p)), _) => optosteer::reduce(&p.to_params())
                .map_err(|e| ConfigError::invalid("physical", e.to_string())),
            (None, Some(panel)) => Ok(panel.params()),
            (None, None) => Err(ConfigError::Missing(vec!["physical | reduced".into()])),
        }
    }
}

// ---- raw document ---------------------------------------------------------

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedSection>,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedSection {
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub nth1: Option<f64>,
    pub nth2: Option<f64>,
    pub r: Option<f64>,
    pub gamma_hz: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSection {
    pub cavity_freq1_hz: Option<f64>,
    pub cavity_freq2_hz: Option<f64>,
    pub laser_freq1_hz: Option<f64>,
    pub laser_freq2_hz: Option<f64>,
    pub length1_m: Option<f64>,
    pub length2_m: Option<f64>,
    pub kappa1_hz: Option<f64>,
    pub kappa2_hz: Option<f64>,
    pub power1_w: Option<f64>,
    pub power2_w: Option<f64>,
    pub mass1_kg: Option<f64>,
    pub mass2_kg: Option<f64>,
    pub mech_freq1_hz: Option<f64>,
    pub mech_freq2_hz: Option<f64>,
    pub gamma1_hz: Option<f64>,
    pub gamma2_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature1_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature2_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nth1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nth2: Option<f64>,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub panel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regime_threshold: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl FromStr for ConfigDocument {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))
    }
}

/// Collects required values, remembering which keys were missing.
struct Required<'a> {
    section: &'a str,
    missing: Vec<String>,
}

impl Required<'_> {
    fn take(&mut self, key: &str, value: Option<f64>) -> f64 {
        value.unwrap_or_else(|| {
            self.missing.push(format!("{}.{}", self.section, key));
            f64::NAN
        })
    }
}

fn check_range(key: &str, x: f64, allow_zero: bool) -> Result<(), ConfigError> {
    let ok = x.is_finite() && if allow_zero { x >= 0.0 } else { x > 0.0 };
    if ok {
        Ok(())
    } else {
        let bound = if allow_zero { ">= 0" } else { "> 0" };
        Err(ConfigError::invalid(
            key,
            format!("must be finite and {bound}, got {x}"),
        ))
    }
}

impl ReducedSection {
    fn validate(&self, missing: &mut Vec<String>) -> Result<Option<ReducedSpec>, ConfigError> {
        let mut req = Required {
            section: "reduced",
            missing: Vec::new(),
        };
        let spec = ReducedSpec {
            c1: req.take("c1", self.c1),
            c2: req.take("c2", self.c2),
            nth1: req.take("nth1", self.nth1),
            nth2: req.take("nth2", self.nth2),
            r: req.take("r", self.r),
            gamma_hz: req.take("gamma_hz", self.gamma_hz),
        };
        if !req.missing.is_empty() {
            missing.extend(req.missing);
            return Ok(None);
        }
        for (k, v) in [
            ("c1", spec.c1),
            ("c2", spec.c2),
            ("nth1", spec.nth1),
            ("nth2", spec.nth2),
            ("r", spec.r),
        ] {
            check_range(&format!("reduced.{k}"), v, true)?;
        }
        check_range("reduced.gamma_hz", spec.gamma_hz, false)?;
        Ok(Some(spec))
    }
}

impl PhysicalSection {
    fn validate(&self, missing: &mut Vec<String>) -> Result<Option<PhysicalSpec>, ConfigError> {
        let mut req = Required {
            section: "physical",
            missing: Vec::new(),
        };
        let mut pair = |k1: &str, v1, k2: &str, v2| [req.take(k1, v1), req.take(k2, v2)];
        let cavity_freq_hz = pair(
            "cavity_freq1_hz",
            self.cavity_freq1_hz,
            "cavity_freq2_hz",
            self.cavity_freq2_hz,
        );
        let laser_freq_hz = pair(
            "laser_freq1_hz",
            self.laser_freq1_hz,
            "laser_freq2_hz",
            self.laser_freq2_hz,
        );
        let length_m = pair("length1_m", self.length1_m, "length2_m", self.length2_m);
        let kappa_hz = pair("kappa1_hz", self.kappa1_hz, "kappa2_hz", self.kappa2_hz);
        let power_w = pair("power1_w", self.power1_w, "power2_w", self.power2_w);
        let mass_kg = pair("mass1_kg", self.mass1_kg, "mass2_kg", self.mass2_kg);
        let mech_freq_hz = pair(
            "mech_freq1_hz",
            self.mech_freq1_hz,
            "mech_freq2_hz",
            self.mech_freq2_hz,
        );
        let gamma_hz = pair("gamma1_hz", self.gamma1_hz, "gamma2_hz", self.gamma2_hz);
        let r = req.take("r", self.r);
        let temperature_k = [self.temperature1_k, self.temperature2_k];
        let nth = [self.nth1, self.nth2];
        for j in 0..2 {
            if temperature_k[j].is_none() && nth[j].is_none() {
                req.missing.push(format!(
                    "physical.nth{} | physical.temperature{}_k",
                    j + 1,
                    j + 1
                ));
            }
        }
        if !req.missing.is_empty() {
            missing.extend(req.missing);
            return Ok(None);
        }
        let spec = PhysicalSpec {
            cavity_freq_hz,
            laser_freq_hz,
            length_m,
            kappa_hz,
            power_w,
            mass_kg,
            mech_freq_hz,
            gamma_hz,
            temperature_k,
            nth,
            r,
        };
        for j in 0..2 {
            let n = j + 1;
            check_range(
                &format!("physical.cavity_freq{n}_hz"),
                spec.cavity_freq_hz[j],
                false,
            )?;
            check_range(
                &format!("physical.laser_freq{n}_hz"),
                spec.laser_freq_hz[j],
                false,
            )?;
            check_range(&format!("physical.length{n}_m"), spec.length_m[j], false)?;
            check_range(&format!("physical.kappa{n}_hz"), spec.kappa_hz[j], false)?;
            check_range(&format!("physical.power{n}_w"), spec.power_w[j], true)?;
            check_range(&format!("physical.mass{n}_kg"), spec.mass_kg[j], false)?;
            check_range(
                &format!("physical.mech_freq{n}_hz"),
                spec.mech_freq_hz[j],
                false,
            )?;
            check_range(&format!("physical.gamma{n}_hz"), spec.gamma_hz[j], false)?;
            if let Some(t) = spec.temperature_k[j] {
                check_range(&format!("physical.temperature{n}_k"), t, true)?;
            }
            if let Some(x) = spec.nth[j] {
                check_range(&format!("physical.nth{n}"), x, true)?;
            }
        }
        check_range("physical.r", spec.r, true)?;
        Ok(Some(spec))
    }
}

impl ConfigDocument {
    /// Validates the document into a [`RunConfig`].
    pub fn validate(&self) -> Result<RunConfig, ConfigError> {
        if self.physical.is_some() && self.reduced.is_some() {
            return Err(ConfigError::ExclusiveBlocks);
        }
        let mut missing = Vec::new();

        let mode = match self.run.mode.as_deref() {
            Some(m) => Some(
                m.parse::<RunMode>()
                    .map_err(|e| ConfigError::invalid("run.mode", e))?,
            ),
            None => {
                missing.push("run.mode".to_string());
                None
            }
        };
        let panel = self
            .run
            .panel
            .as_deref()
            .map(|p| {
                p.parse::<Panel>()
                    .map_err(|e| ConfigError::invalid("run.panel", e.to_string()))
            })
            .transpose()?;

        let params = match (&self.physical, &self.reduced) {
            (Some(p), None) => p.validate(&mut missing)?.map(ParamBlock::Physical),
            (None, Some(r)) => r.validate(&mut missing)?.map(ParamBlock::Reduced),
            _ => None,
        };
        let has_block = self.physical.is_some() || self.reduced.is_some();

        match mode {
            Some(RunMode::Figure) => {
                if has_block {
                    return Err(ConfigError::invalid(
                        "run.mode",
                        "figure mode uses the panel's own parameters; remove [physical]/[reduced]",
                    ));
                }
                if panel.is_none() {
                    missing.push("run.panel".into());
                }
            }
            Some(m) => {
                if !has_block {
                    missing.push("physical | reduced".into());
                }
                if m == RunMode::Eval && self.run.time.is_none() {
                    missing.push("run.time".into());
                }
                if m == RunMode::Regime && self.reduced.is_some() {
                    return Err(ConfigError::invalid(
                        "run.mode",
                        "regime mode needs a [physical] block",
                    ));
                }
            }
            None => {
                if !has_block && panel.is_none() {
                    missing.push("physical | reduced".into());
                }
            }
        }
        if !missing.is_empty() {
            return Err(ConfigError::Missing(missing));
        }
        let mode = mode.expect("mode checked above");

        if let Some(t) = self.run.time {
            check_range("run.time", t, true)?;
        }
        let default_grid = TimeGrid::default();
        let points = match self.run.points {
            Some(p) if p < 2 => {
                return Err(ConfigError::invalid(
                    "run.points",
                    format!("must be >= 2, got {p}"),
                ))
            }
            Some(p) => p as usize,
            None => default_grid.points,
        };
        let grid = TimeGrid {
            start: self.run.start.unwrap_or(default_grid.start),
            end: self.run.end.unwrap_or(default_grid.end),
            points,
        };
        check_range("run.start", grid.start, true)?;
        if !grid.end.is_finite() || grid.end <= grid.start {
            return Err(ConfigError::invalid(
                "run.end",
                format!("must exceed run.start, got {}", grid.end),
            ));
        }
        let epsilon = self.run.epsilon.unwrap_or(DEFAULT_EPSILON);
        check_range("run.epsilon", epsilon, false)?;
        let regime_threshold = self
            .run
            .regime_threshold
            .unwrap_or(DEFAULT_REGIME_THRESHOLD);
        check_range("run.regime_threshold", regime_threshold, false)?;
        let format = match self.output.format.as_deref() {
            Some(f) => f
                .parse()
                .map_err(|e| ConfigError::invalid("output.format", e))?,
            None => OutputFormat::default(),
        };
        Ok(RunConfig {
            mode,
            params,
            panel,
            time: self.run.time,
            grid,
            epsilon,
            regime_threshold,
            format,
            out: self.output.path.as_ref().map(PathBuf::from),
        })
    }
}

impl From<&RunConfig> for ConfigDocument {
    fn from(c: &RunConfig) -> Self {
        let (physical, reduced) = match c.params {
            Some(ParamBlock::Physical(p)) => (
                Some(PhysicalSection {
                    cavity_freq1_hz: Some(p.cavity_freq_hz[0]),
                    cavity_freq2_hz: Some(p.cavity_freq_hz[1]),
                    laser_freq1_hz: Some(p.laser_freq_hz[0]),
                    laser_freq2_hz: Some(p.laser_freq_hz[1]),
                    length1_m: Some(p.length_m[0]),
                    length2_m: Some(p.length_m[1]),
                    kappa1_hz: Some(p.kappa_hz[0]),
                    kappa2_hz: Some(p.kappa_hz[1]),
                    power1_w: Some(p.power_w[0]),
                    power2_w: Some(p.power_w[1]),
                    mass1_kg: Some(p.mass_kg[0]),
                    mass2_kg: Some(p.mass_kg[1]),
                    mech_freq1_hz: Some(p.mech_freq_hz[0]),
                    mech_freq2_hz: Some(p.mech_freq_hz[1]),
                    gamma1_hz: Some(p.gamma_hz[0]),
                    gamma2_hz: Some(p.gamma_hz[1]),
                    temperature1_k: p.temperature_k[0],
                    temperature2_k: p.temperature_k[1],
                    nth1: p.nth[0],
                    nth2: p.nth[1],
                    r: Some(p.r),
                }),
                None,
            ),
            Some(ParamBlock::Reduced(r)) => (
                None,
                Some(ReducedSection {
                    c1: Some(r.c1),
                    c2: Some(r.c2),
                    nth1: Some(r.nth1),
                    nth2: Some(r.nth2),
                    r: Some(r.r),
                    gamma_hz: Some(r.gamma_hz),
                }),
            ),
            None => (None, None),
        };
        ConfigDocument {
            physical,
            reduced,
            run: RunSection {
                mode: Some(c.mode.as_str().into()),
                panel: c.panel.map(|p| p.id().into()),
                time: c.time,
                start: Some(c.grid.start),
                end: Some(c.grid.end),
                points: Some(c.grid.points as i64),
                epsilon: Some(c.epsilon),
                regime_threshold: Some(c.regime_threshold),
            },
            output: OutputSection {
                format: Some(c.format.as_str().into()),
                path: c.out.as_ref().map(|p| p.display().to_string()),
            },
        }
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    text.parse::<ConfigDocument>()?.validate()
}

/// Renders a config back to TOML; `parse_config(&render(c)) == c`.
pub fn render(config: &RunConfig) -> String {
    toml::to_string(&ConfigDocument::from(config)).expect("config document serializes")
}
