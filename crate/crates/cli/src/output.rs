// SPDX-License-Identifier: Apache-2.0

//! Data-stream rendering. Numbers carry 12 significant digits.

use std::io::{self, Write};

use optosteer::model::RegimeReport;
use optosteer::{MeasureSample, TwoModeCovariance};
use serde::Serialize;

pub const SAMPLE_HEADER: &str = "gamma_t,g_ab,g_ba,g_delta,e2";

const SIGNIFICANT: usize = 12;

/// `%.12g`-style rendering: fixed notation for decimal exponents in
/// `[-5, 12)`, scientific otherwise; trailing zeros trimmed.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Value after rounding to the rendered precision.
pub fn rounded(x: f64) -> f64 {
    format_number(x).parse().unwrap_or(x)
}

pub fn write_samples_csv(w: &mut dyn Write, samples: &[MeasureSample]) -> io::Result<()> {
    writeln!(w, "{SAMPLE_HEADER}")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            format_number(s.gamma_t),
            format_number(s.g_ab),
            format_number(s.g_ba),
            format_number(s.g_delta()),
            format_number(s.e2)
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SampleRow {
    gamma_t: f64,
    g_ab: f64,
    g_ba: f64,
    g_delta: f64,
    e2: f64,
}

impl From<&MeasureSample> for SampleRow {
    fn from(s: &MeasureSample) -> Self {
        Self {
            gamma_t: rounded(s.gamma_t),
            g_ab: rounded(s.g_ab),
            g_ba: rounded(s.g_ba),
            g_delta: rounded(s.g_delta()),
            e2: rounded(s.e2),
        }
    }
}

pub fn write_samples_json(w: &mut dyn Write, samples: &[MeasureSample]) -> io::Result<()> {
    let rows: Vec<SampleRow> = samples.iter().map(SampleRow::from).collect();
    serde_json::to_writer_pretty(&mut *w, &rows)?;
    writeln!(w)
}

pub fn write_regime_csv(w: &mut dyn Write, report: &RegimeReport) -> io::Result<()> {
    writeln!(w, "check,ratio,threshold,status")?;
    for c in &report.checks {
        writeln!(
            w,
            "{},{},{},{}",
            c.name,
            format_number(c.ratio),
            format_number(report.threshold),
            c.status.as_str()
        )?;
    }
    Ok(())
}

pub fn write_regime_json(w: &mut dyn Write, report: &RegimeReport) -> io::Result<()> {
    #[derive(Serialize)]
    struct Check<'a> {
        check: &'a str,
        ratio: f64,
        status: &'a str,
    }
    #[derive(Serialize)]
    struct Report<'a> {
        threshold: f64,
        passed: bool,
        checks: Vec<Check<'a>>,
    }
    let report = Report {
        threshold: report.threshold,
        passed: report.passed(),
        checks: report
            .checks
            .iter()
            .map(|c| Check {
                check: &c.name,
                ratio: rounded(c.ratio),
                status: c.status.as_str(),
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut *w, &report)?;
    writeln!(w)
}

pub const STATIONARY_HEADER: &str = "v11,v22,v33,v44,v13,v24,g_ab,g_ba,g_delta,e2";

fn stationary_values(v: &TwoModeCovariance, s: &MeasureSample) -> [f64; 10] {
    [
        v.get(0, 0),
        v.get(1, 1),
        v.get(2, 2),
        v.get(3, 3),
        v.get(0, 2),
        v.get(1, 3),
        s.g_ab,
        s.g_ba,
        s.g_delta(),
        s.e2,
    ]
}

pub fn write_stationary_csv(
    w: &mut dyn Write,
    v: &TwoModeCovariance,
    s: &MeasureSample,
) -> io::Result<()> {
    writeln!(w, "{STATIONARY_HEADER}")?;
    let row: Vec<String> = stationary_values(v, s)
        .iter()
        .map(|&x| format_number(x))
        .collect();
    writeln!(w, "{}", row.join(","))
}

pub fn write_stationary_json(
    w: &mut dyn Write,
    v: &TwoModeCovariance,
    s: &MeasureSample,
) -> io::Result<()> {
    let keys = STATIONARY_HEADER.split(',');
    let map: serde_json::Map<String, serde_json::Value> = keys
        .zip(stationary_values(v, s))
        .map(|(k, x)| (k.to_string(), serde_json::json!(rounded(x))))
        .collect();
    let matrix: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| rounded(v.get(i, j))).collect())
        .collect();
    let mut obj = map;
    obj.insert("covariance".into(), serde_json::json!(matrix));
    serde_json::to_writer_pretty(&mut *w, &obj)?;
    writeln!(w)
}
