//! Report rendering: a flat csv table or json-lines, both ending with
//! per-formulation summary lines (average, population standard deviation,
//! and a best-count per quality measure).

use crate::run::{BenchRecord, BenchStatus};
use edgp_core::formulations::FormulationKind;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    JsonLines,
}

impl ReportFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::JsonLines => "json-lines",
        }
    }
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json-lines" => Ok(ReportFormat::JsonLines),
            other => Err(format!("unknown report format `{other}` (csv|json-lines)")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

const CSV_HEADER: &str =
    "instance,n,m,formulation,mde,lde,objective,cpu_seconds,starts_used,seed,status";

/// Markers in the instance column that set summary rows apart from data
/// rows; instance names never collide with them because generated names
/// are prefixed and file stems containing commas are rejected earlier.
const SUMMARY_MARKERS: [&str; 3] = ["avg", "stdev", "|best|"];

/// Per-formulation aggregates over records with status `ok`. The best
/// counter says on how many instances the formulation achieved the
/// minimum of a measure; ties credit every tied formulation.
struct Summary {
    formulation: FormulationKind,
    avg: [Option<f64>; 4],
    stdev: [Option<f64>; 4],
    /// Best counts for mde, lde, cpu. Objectives are not comparable
    /// across formulations, so they carry no count.
    best: [usize; 3],
}

fn measures(r: &BenchRecord) -> [Option<f64>; 4] {
    let cpu = (r.status == BenchStatus::Ok).then_some(r.cpu_seconds);
    [r.mde, r.lde, r.objective, cpu]
}

fn summaries(records: &[BenchRecord]) -> Vec<Summary> {
    let mut kinds: Vec<FormulationKind> = Vec::new();
    for r in records {
        if !kinds.contains(&r.formulation) {
            kinds.push(r.formulation);
        }
    }
    kinds.sort_by_key(|k| k.as_str());

    let mut result: Vec<Summary> = kinds
        .iter()
        .map(|&formulation| {
            let mut avg = [None; 4];
            let mut stdev = [None; 4];
            for i in 0..4 {
                let values: Vec<f64> = records
                    .iter()
                    .filter(|r| r.formulation == formulation && r.status == BenchStatus::Ok)
                    .filter_map(|r| measures(r)[i])
                    .collect();
                if values.is_empty() {
                    continue;
                }
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                let var =
                    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
                avg[i] = Some(mean);
                stdev[i] = Some(var.sqrt());
            }
            Summary {
                formulation,
                avg,
                stdev,
                best: [0; 3],
            }
        })
        .collect();

    // Best counts: compare formulations instance by instance. Measure
    // indices 0, 1, 3 of `measures` (mde, lde, cpu).
    let mut by_instance: BTreeMap<&str, Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        if r.status == BenchStatus::Ok {
            by_instance.entry(&r.instance).or_default().push(r);
        }
    }
    for (slot, measure) in [(0usize, 0usize), (1, 1), (2, 3)] {
        for rows in by_instance.values() {
            let best = rows
                .iter()
                .filter_map(|r| measures(r)[measure])
                .fold(f64::INFINITY, f64::min);
            if !best.is_finite() {
                continue;
            }
            for r in rows {
                if measures(r)[measure] == Some(best) {
                    if let Some(s) = result.iter_mut().find(|s| s.formulation == r.formulation) {
                        s.best[slot] += 1;
                    }
                }
            }
        }
    }
    result
}

fn csv_float(v: Option<f64>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "-".to_string(),
    }
}

/// Renders the full report as one string; [`write_report`] puts the same
/// bytes in a file. Zero records render as just the header (csv) or an
/// empty document (json-lines).
pub fn render_report(records: &[BenchRecord], format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(records),
        ReportFormat::JsonLines => render_json_lines(records),
    }
}

fn render_csv(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.instance,
            r.n,
            r.m,
            r.formulation.as_str(),
            csv_float(r.mde),
            csv_float(r.lde),
            csv_float(r.objective),
            r.cpu_seconds,
            r.starts_used,
            r.seed,
            r.status.as_str(),
        )
        .expect("string write");
    }
    for s in summaries(records) {
        let kind = s.formulation.as_str();
        writeln!(
            out,
            "avg,-,-,{},{},{},{},{},-,-,-",
            kind,
            csv_float(s.avg[0]),
            csv_float(s.avg[1]),
            csv_float(s.avg[2]),
            csv_float(s.avg[3]),
        )
        .expect("string write");
        writeln!(
            out,
            "stdev,-,-,{},{},{},{},{},-,-,-",
            kind,
            csv_float(s.stdev[0]),
            csv_float(s.stdev[1]),
            csv_float(s.stdev[2]),
            csv_float(s.stdev[3]),
        )
        .expect("string write");
        writeln!(
            out,
            "|best|,-,-,{},{},{},-,{},-,-,-",
            kind, s.best[0], s.best[1], s.best[2],
        )
        .expect("string write");
    }
    out
}

fn render_json_lines(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    for s in summaries(records) {
        let names = ["mde", "lde", "objective", "cpu_seconds"];
        let obj = |vals: &[Option<f64>; 4]| -> Value {
            let map: serde_json::Map<String, Value> = names
                .iter()
                .zip(vals)
                .filter_map(|(n, v)| v.map(|v| (n.to_string(), json!(v))))
                .collect();
            Value::Object(map)
        };
        let line = json!({
            "summary": s.formulation.as_str(),
            "avg": obj(&s.avg),
            "stdev": obj(&s.stdev),
            "best": {"mde": s.best[0], "lde": s.best[1], "cpu_seconds": s.best[2]},
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

pub fn write_report(
    records: &[BenchRecord],
    format: ReportFormat,
    path: &Path,
) -> std::io::Result<()> {
    std::fs::write(path, render_report(records, format))
}

/// Reads the data rows back out of a rendered report, skipping header and
/// summary lines. Floats round trip exactly: rendering uses the shortest
/// decimal form that parses back to the same value.
pub fn parse_report(text: &str, format: ReportFormat) -> Result<Vec<BenchRecord>, ReportError> {
    match format {
        ReportFormat::Csv => parse_csv(text),
        ReportFormat::JsonLines => parse_json_lines(text),
    }
}

fn parse_csv(text: &str) -> Result<Vec<BenchRecord>, ReportError> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() || (lineno == 1 && line == CSV_HEADER) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if SUMMARY_MARKERS.contains(&fields[0]) {
            continue;
        }
        if fields.len() != 11 {
            return Err(ReportError::Line {
                line: lineno,
                message: format!("expected 11 fields, found {}", fields.len()),
            });
        }
        let field = |i: usize, what: &str| -> Result<&str, ReportError> {
            fields.get(i).copied().ok_or_else(|| ReportError::Line {
                line: lineno,
                message: format!("missing {what}"),
            })
        };
        let parse_num = |i: usize, what: &str| -> Result<f64, ReportError> {
            field(i, what)?.parse().map_err(|_| ReportError::Line {
                line: lineno,
                message: format!("bad {what}"),
            })
        };
        let parse_opt = |i: usize, what: &str| -> Result<Option<f64>, ReportError> {
            let s = field(i, what)?;
            if s == "-" {
                Ok(None)
            } else {
                parse_num(i, what).map(Some)
            }
        };
        let parse_int = |i: usize, what: &str| -> Result<u64, ReportError> {
            field(i, what)?.parse().map_err(|_| ReportError::Line {
                line: lineno,
                message: format!("bad {what}"),
            })
        };
        records.push(BenchRecord {
            instance: field(0, "instance")?.to_string(),
            n: parse_int(1, "n")? as usize,
            m: parse_int(2, "m")? as usize,
            formulation: field(3, "formulation")?
                .parse()
                .map_err(|e: String| ReportError::Line {
                    line: lineno,
                    message: e,
                })?,
            mde: parse_opt(4, "mde")?,
            lde: parse_opt(5, "lde")?,
            objective: parse_opt(6, "objective")?,
            cpu_seconds: parse_num(7, "cpu_seconds")?,
            starts_used: parse_int(8, "starts_used")? as usize,
            seed: parse_int(9, "seed")?,
            status: field(10, "status")?
                .parse()
                .map_err(|e: String| ReportError::Line {
                    line: lineno,
                    message: e,
                })?,
        });
    }
    Ok(records)
}

fn parse_json_lines(text: &str) -> Result<Vec<BenchRecord>, ReportError> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let value: Value = serde_json::from_str(line).map_err(|e| ReportError::Line {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if value.get("summary").is_some() {
            continue;
        }
        let record = serde_json::from_value(value).map_err(|e| ReportError::Line {
            line: idx + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}
