//! Result emission: JSON documents and per-experiment CSV tables.
//!
//! Floats serialize with 17 significant digits in both formats, which
//! round-trips every f64 exactly; output bytes depend only on the document.
//!
//! CSV schemas, one table per experiment:
//!
//! - `meter-check`: `bin_lo,bin_hi,count,expected_count`
//! - `idealized`:   `pointer_index,probability,mc_count,mc_frequency`
//! - `repeat` with embedded traces:
//!   `realization,step,outcome,y_running,fidelity_to_initial`
//! - `repeat` without traces:
//!   `realization,y_mean,nearest_eigenvalue_index,trace_distance_to_nearest`
//! - `lg`:           `repetition,weak_mean`
//! - `tomo-optimize`: `b_plus_sq,objective,closed_form_reference`
//! - `tomo-roundtrip`: `trial,infidelity`

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::experiment::{ExperimentResults, ResultDocument};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

/// Output formats of the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

/// serde_json formatter that writes every float with 17 significant digits.
struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes the document as JSON with lossless float formatting.
pub fn to_json_string(doc: &ResultDocument) -> Result<String, ReportError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitFormatter);
    doc.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Parses a document produced by [`to_json_string`].
pub fn parse_json(text: &str) -> Result<ResultDocument, ReportError> {
    Ok(serde_json::from_str(text)?)
}

/// Renders the experiment's CSV table (header row included).
pub fn to_csv_string(doc: &ResultDocument) -> String {
    let mut out = String::new();
    match &doc.results {
        ExperimentResults::MeterCheck(r) => {
            out.push_str("bin_lo,bin_hi,count,expected_count\n");
            let h = &r.summary.histogram;
            for i in 0..h.n_bins() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    f17(h.edges[i]),
                    f17(h.edges[i + 1]),
                    h.counts[i],
                    f17(r.histogram_expected[i]),
                ));
            }
        }
        ExperimentResults::Idealized(r) => {
            out.push_str("pointer_index,probability,mc_count,mc_frequency\n");
            for row in &r.rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    row.index,
                    f17(row.probability),
                    row.mc_count,
                    f17(row.mc_frequency),
                ));
            }
        }
        ExperimentResults::Repeat(r) => {
            if !r.trace_rows.is_empty() {
                out.push_str("realization,step,outcome,y_running,fidelity_to_initial\n");
                for row in &r.trace_rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        row.realization,
                        row.step,
                        f17(row.outcome),
                        f17(row.y_running),
                        f17(row.fidelity_to_initial),
                    ));
                }
            } else {
                out.push_str(
                    "realization,y_mean,nearest_eigenvalue_index,trace_distance_to_nearest\n",
                );
                for row in &r.realization_rows {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        row.realization,
                        f17(row.y_mean),
                        row.nearest_eigenvalue_index,
                        f17(row.trace_distance_to_nearest),
                    ));
                }
            }
        }
        ExperimentResults::Lg(r) => {
            out.push_str("repetition,weak_mean\n");
            for (i, m) in r.repetition_means.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i, f17(*m)));
            }
        }
        ExperimentResults::TomoOptimize(r) => {
            out.push_str("b_plus_sq,objective,closed_form_reference\n");
            for row in &r.grid {
                out.push_str(&format!(
                    "{},{},{}\n",
                    f17(row.b_plus_sq),
                    f17(row.objective),
                    f17(row.closed_form_reference),
                ));
            }
        }
        ExperimentResults::TomoRoundtrip(r) => {
            out.push_str("trial,infidelity\n");
            for row in &r.trial_rows {
                out.push_str(&format!("{},{}\n", row.trial, f17(row.infidelity)));
            }
        }
    }
    out
}

/// Writes the document to `path`, or to stdout when `path` is `None`.
pub fn emit_results(
    doc: &ResultDocument,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), ReportError> {
    let payload = match format {
        OutputFormat::Json => to_json_string(doc)?,
        OutputFormat::Csv => to_csv_string(doc),
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(p, payload.as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(payload.as_bytes())?;
        }
    }
    Ok(())
}
