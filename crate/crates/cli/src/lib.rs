// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for `optosteer`.
//!
//! Modes: `eval` (one sample at a scaled time), `sweep` (samples on a
//! grid), `figure` (a preset panel), `regime` (validity ratios of a
//! physical setup) and `stationary` (the `γt → ∞` covariance and its
//! measures). Data goes to the output stream, diagnostics to stderr.
//!
//! Exit status: 0 on success, 1 on configuration errors, 2 on
//! computational or output errors.

pub mod config;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;
use optosteer::{
    covariance_closed_form, figure_panel, regime_check, stationary_covariance, sweep_time,
    Execution, MeasureSample,
};
use thiserror::Error;

pub use config::{
    parse_config, render, ConfigDocument, ConfigError, OutputFormat, ParamBlock, RunConfig, RunMode,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] optosteer::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Compute(_) | CliError::Output(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "optosteer",
    version,
    about = "Gaussian steering dynamics of two optomechanical mirrors"
)]
pub struct Args {
    /// eval | sweep | figure | regime | stationary
    pub mode_arg: Option<String>,
    /// Panel id for figure mode (2a..2d, 3a..3d, 3inset)
    pub panel_arg: Option<String>,

    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub panel: Option<String>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Scaled time γt for eval mode
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub end: Option<f64>,
    #[arg(long)]
    pub points: Option<i64>,
}

impl Args {
    /// Loads the config file (if any) and applies flag overrides.
    pub fn into_config(self) -> Result<RunConfig, ConfigError> {
        let mut doc = match &self.config {
            Some(path) => std::fs::read_to_string(path)
                .map_err(|e| ConfigError::Read {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?
                .parse::<ConfigDocument>()?,
            None => ConfigDocument::default(),
        };
        let run = &mut doc.run;
        if let Some(m) = self.mode.or(self.mode_arg) {
            run.mode = Some(m);
        }
        if let Some(p) = self.panel.or(self.panel_arg) {
            run.panel = Some(p);
        }
        run.epsilon = self.epsilon.or(run.epsilon);
        run.time = self.time.or(run.time);
        run.start = self.start.or(run.start);
        run.end = self.end.or(run.end);
        run.points = self.points.or(run.points);
        if let Some(f) = self.format {
            doc.output.format = Some(f);
        }
        if let Some(o) = self.out {
            doc.output.path = Some(o.display().to_string());
        }
        doc.validate()
    }
}

fn emit_samples(
    w: &mut dyn Write,
    format: OutputFormat,
    samples: &[MeasureSample],
) -> io::Result<()> {
    match format {
        OutputFormat::Csv => output::write_samples_csv(w, samples),
        OutputFormat::Json => output::write_samples_json(w, samples),
    }
}

/// Executes a validated configuration, writing data to `config.out` or to
/// `stdout` when no path is set.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut file;
    let w: &mut dyn Write = match &config.out {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    let eps = config.epsilon;
    match config.mode {
        RunMode::Eval => {
            let rp = config.reduced_params()?;
            let t = config.time.expect("validated eval config has a time");
            let sample = MeasureSample::from_covariance(t, &covariance_closed_form(&rp, t)?, eps)?;
            emit_samples(w, config.format, &[sample])?;
        }
        RunMode::Sweep => {
            let rp = config.reduced_params()?;
            let samples = sweep_time(&rp, &config.grid.times(), eps, Execution::Parallel)?;
            emit_samples(w, config.format, &samples)?;
        }
        RunMode::Figure => {
            let panel = config.panel.expect("validated figure config has a panel");
            let samples = figure_panel(panel, &config.grid, eps, Execution::Parallel)?;
            emit_samples(w, config.format, &samples)?;
        }
        RunMode::Regime => {
            let Some(ParamBlock::Physical(spec)) = &config.params else {
                return Err(ConfigError::Missing(vec!["physical".into()]).into());
            };
            let report = regime_check(&spec.to_params(), config.regime_threshold).map_err(|e| {
                ConfigError::Invalid {
                    key: "physical".into(),
                    message: e.to_string(),
                }
            })?;
            match config.format {
                OutputFormat::Csv => output::write_regime_csv(w, &report)?,
                OutputFormat::Json => output::write_regime_json(w, &report)?,
            }
            if !report.passed() {
                eprintln!("regime: worst status {}", report.worst().as_str());
            }
        }
        RunMode::Stationary => {
            let rp = config.reduced_params()?;
            let v = stationary_covariance(&rp)?;
            let sample = MeasureSample::from_covariance(f64::INFINITY, &v, eps)?;
            match config.format {
                OutputFormat::Csv => output::write_stationary_csv(w, &v, &sample)?,
                OutputFormat::Json => output::write_stationary_json(w, &v, &sample)?,
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Full command-line entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let result = args
        .into_config()
        .map_err(CliError::from)
        .and_then(|cfg| run(&cfg, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
