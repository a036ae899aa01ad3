use std::io::Write;

use serde::Serialize;

use crate::experiments::{BetaReport, LorentzRow};
use crate::Result;

pub const CSV_HEADER: [&str; 10] = [
    "experiment",
    "function",
    "n",
    "which",
    "error_mean",
    "error_stderr",
    "grid_m",
    "mc_samples",
    "seed",
    "wall_ms",
];

/// One `(experiment, function, n)` cell. `None` error fields mark a cell that
/// failed numerically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub experiment: String,
    pub function: String,
    pub n: usize,
    pub which: String,
    pub error_mean: Option<f64>,
    pub error_stderr: Option<f64>,
    pub grid_m: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub wall_ms: u64,
    /// Corpus class tag; JSON only, the CSV schema is fixed.
    pub class: String,
}

impl ConvergenceRecord {
    pub fn sort_key(&self) -> (&str, &str, usize) {
        (&self.experiment, &self.function, self.n)
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn write_records_csv<W: Write>(records: &[ConvergenceRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.experiment.clone(),
            r.function.clone(),
            r.n.to_string(),
            r.which.clone(),
            opt_float(r.error_mean),
            opt_float(r.error_stderr),
            r.grid_m.to_string(),
            r.mc_samples.to_string(),
            r.seed.to_string(),
            r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per line.
pub fn write_json_lines<W: Write, T: Serialize>(items: &[T], mut out: W) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_beta_csv<W: Write>(report: &BetaReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n_max",
        "exhaustive_n_max",
        "exhaustive_cases",
        "sampled_cases",
        "max_deviation_exhaustive",
        "max_deviation_sampled",
        "max_deviation",
        "seed",
    ])?;
    w.write_record([
        report.n_max.to_string(),
        report.exhaustive_n_max.to_string(),
        report.exhaustive_cases.to_string(),
        report.sampled_cases.to_string(),
        format_float(report.max_deviation_exhaustive),
        format_float(report.max_deviation_sampled),
        format_float(report.max_deviation),
        report.seed.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_lorentz_csv<W: Write>(rows: &[LorentzRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["function", "n", "x", "value", "deviation"])?;
    for r in rows {
        w.write_record([
            r.function.clone(),
            r.n.to_string(),
            format_float(r.x),
            opt_float(r.value),
            opt_float(r.deviation),
        ])?;
    }
    w.flush()?;
    Ok(())
}
