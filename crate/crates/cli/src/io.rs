//! CSV ingestion and export.
//!
//! Series files are UTF-8, one observation per line or comma-separated
//! columns, with an optional single header row (detected by a non-numeric
//! first row). Exports print 17 significant digits so values reload
//! bit-exactly.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use delaynet_core::estimate::RelevanceProfile;
use delaynet_core::forecast::ForecastReport;
use delaynet_core::series::TimeSeries;

/// Reads one column of a CSV file as a time series, in file order.
pub fn load_csv(path: &Path, column: usize) -> Result<TimeSeries> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading series file {}", path.display()))?;
    let mut values = Vec::new();
    let mut first_data_row = true;
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let Some(cell) = fields.get(column) else {
            bail!(
                "row {}: only {} column(s), wanted column {column}",
                index + 1,
                fields.len()
            );
        };
        match cell.parse::<f64>() {
            Ok(value) => values.push(value),
            // A non-numeric first row is a header; later rows must parse.
            Err(_) if first_data_row => {}
            Err(_) => bail!("row {}: cannot parse {cell:?} as a number", index + 1),
        }
        first_data_row = false;
    }
    if values.is_empty() {
        bail!("column {column} of {} holds no numeric data", path.display());
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".to_string());
    let series = TimeSeries::new(values, name)?;
    Ok(series)
}

/// Formats a float with 17 significant digits (round-trip exact for f64).
pub fn full_precision(value: f64) -> String {
    format!("{value:.16e}")
}

/// Writes a series as one value per line.
pub fn write_series_csv(path: &Path, series: &TimeSeries) -> Result<()> {
    let mut out = String::with_capacity(series.len() * 24);
    for &v in &series.values {
        out.push_str(&full_precision(v));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Writes phase states as comma-separated rows.
pub fn write_states_csv(path: &Path, states: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    for state in states {
        let row: Vec<String> = state.iter().map(|&v| full_precision(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Writes the per-dimension relevance summary table.
pub fn write_relevance_csv(path: &Path, profile: &RelevanceProfile) -> Result<()> {
    let mut out = String::from("dimension,mean,min,q1,median,q3,max\n");
    for (i, (mean, s)) in profile.mean.iter().zip(&profile.summaries).enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            i + 1,
            full_precision(*mean),
            full_precision(s.min),
            full_precision(s.q1),
            full_precision(s.median),
            full_precision(s.q3),
            full_precision(s.max),
        ));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Writes the forecast overlay: step, predicted, expected.
pub fn write_overlay_csv(path: &Path, report: &ForecastReport) -> Result<()> {
    let mut out = String::from("step,predicted,expected\n");
    for (i, (p, t)) in report.predictions.iter().zip(&report.targets).enumerate() {
        out.push_str(&format!("{i},{},{}\n", full_precision(*p), full_precision(*t)));
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}
