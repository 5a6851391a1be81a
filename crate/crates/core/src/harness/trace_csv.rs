//! Per-RO trace CSV.
//!
//! Decimal columns use exactly six fractional digits; booleans are `0`/`1`.
//! `ue_power_db` and `detected` are empty on ROs without a UE attempt.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::PowerMetric;
use crate::sim::TraceRecord;

pub const TRACE_HEADER: &str =
    "ro,measured_db,threshold_db,attacker_tx,ue_attempt,ue_power_db,detected,analytic_threshold_db";
const COLUMNS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceCsvError {
    #[error("expected header `{TRACE_HEADER}`")]
    Header,
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("trace has no rows")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceCsvRow {
    pub record: TraceRecord,
    pub analytic_threshold: PowerMetric,
}

fn flag(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

/// Serializes a trace; `analytic` holds one analytic threshold per record.
pub fn write_trace_csv(trace: &[TraceRecord], analytic: &[f64]) -> String {
    assert_eq!(trace.len(), analytic.len(), "one analytic threshold per RO");
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (r, a) in trace.iter().zip(analytic) {
        let _ = write!(
            out,
            "{},{:.6},{:.6},{},{},",
            r.ro,
            r.measured,
            r.p_th,
            flag(r.attacker_tx),
            flag(r.ue_attempt)
        );
        if let Some(p) = r.ue_attempt_power {
            let _ = write!(out, "{p:.6}");
        }
        out.push(',');
        if r.ue_attempt {
            out.push(flag(r.detected));
        }
        let _ = writeln!(out, ",{a:.6}");
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceCsvRow>, TraceCsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|_| TraceCsvError::Header)?;
    if header.iter().collect::<Vec<_>>().join(",") != TRACE_HEADER {
        return Err(TraceCsvError::Header);
    }

    let mut rows = Vec::new();
    for (idx, result) in reader.records().enumerate() {
        let line = idx + 2;
        let bad = |message: String| TraceCsvError::Row { line, message };
        let rec = result.map_err(|e| bad(e.to_string()))?;
        if rec.len() != COLUMNS {
            return Err(bad(format!(
                "expected {COLUMNS} columns, found {}",
                rec.len()
            )));
        }
        let power = |col: usize| -> Result<PowerMetric, TraceCsvError> {
            rec[col]
                .parse::<f64>()
                .ok()
                .and_then(|v| PowerMetric::new(v).ok())
                .ok_or_else(|| {
                    bad(format!(
                        "column {col}: expected a finite number, got `{}`",
                        &rec[col]
                    ))
                })
        };
        let boolean = |col: usize| -> Result<bool, TraceCsvError> {
            match &rec[col] {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(bad(format!("column {col}: expected 0 or 1, got `{other}`"))),
            }
        };

        let ro: u32 = rec[0]
            .parse()
            .map_err(|_| bad(format!("bad RO index `{}`", &rec[0])))?;
        if ro as usize != rows.len() {
            return Err(bad(format!(
                "RO {ro} out of sequence (expected {})",
                rows.len()
            )));
        }
        let ue_attempt = boolean(4)?;
        let (ue_attempt_power, detected) = match (ue_attempt, rec[5].is_empty(), rec[6].is_empty())
        {
            (true, false, false) => (Some(power(5)?), boolean(6)?),
            (false, true, true) => (None, false),
            _ => {
                return Err(bad(
                    "ue_power_db and detected must be present exactly on attempt ROs".into(),
                ))
            }
        };
        rows.push(TraceCsvRow {
            record: TraceRecord {
                ro,
                measured: power(1)?,
                p_th: power(2)?,
                attacker_tx: boolean(3)?,
                ue_attempt,
                ue_attempt_power,
                detected,
            },
            analytic_threshold: power(7)?,
        });
    }
    if rows.is_empty() {
        return Err(TraceCsvError::Empty);
    }
    Ok(rows)
}
