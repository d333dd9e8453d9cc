//! File formats: run tables and traces as CSV, models / profiles / ranges /
//! reports as JSON. Everything is plain text with exact headers and field
//! names; JSON output is pretty-printed with sorted keys so files diff
//! cleanly and identical inputs produce identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiment::ParameterRanges;
use crate::model::RegressionModel;
use crate::simulator::AppProfile;
use crate::types::{ConfigPoint, ExperimentRun, TimeSeries};

/// Exact column set of a run table.
pub const RUN_TABLE_HEADER: [&str; 7] = [
    "app_name",
    "map_count",
    "reduce_count",
    "fs_size_mb",
    "in_size_mb",
    "cpu_total_ticks",
    "trace_file",
];

/// Exact column set of a trace file.
pub const TRACE_HEADER: [&str; 2] = ["t_seconds", "cpu_percent"];

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path_str(path), source }
}

fn format_err(path: &Path, problem: impl Into<String>) -> Error {
    Error::FileFormat { path: path_str(path), problem: problem.into() }
}

/// Serialize as pretty JSON with sorted keys and a trailing newline.
pub fn to_sorted_json(value: &impl Serialize) -> String {
    // Routing through Value sorts the keys: serde_json's map is a BTreeMap.
    let value = serde_json::to_value(value).expect("in-memory serialization cannot fail");
    let mut text = serde_json::to_string_pretty(&value).expect("valid JSON value");
    text.push('\n');
    text
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    fs::write(path, to_sorted_json(value)).map_err(|e| io_err(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Json { path: path_str(path), source: e })
}

pub fn save_model(path: impl AsRef<Path>, model: &RegressionModel) -> Result<()> {
    write_json(path.as_ref(), model)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<RegressionModel> {
    let model: RegressionModel = read_json(path.as_ref())?;
    model
        .validate()
        .map_err(|e| format_err(path.as_ref(), e.to_string()))?;
    Ok(model)
}

pub fn save_profile(path: impl AsRef<Path>, profile: &AppProfile) -> Result<()> {
    write_json(path.as_ref(), profile)
}

pub fn load_profile(path: impl AsRef<Path>) -> Result<AppProfile> {
    let profile: AppProfile = read_json(path.as_ref())?;
    profile
        .validate()
        .map_err(|e| format_err(path.as_ref(), e.to_string()))?;
    Ok(profile)
}

pub fn save_ranges(path: impl AsRef<Path>, ranges: &ParameterRanges) -> Result<()> {
    write_json(path.as_ref(), ranges)
}

pub fn load_ranges(path: impl AsRef<Path>) -> Result<ParameterRanges> {
    let ranges: ParameterRanges = read_json(path.as_ref())?;
    ranges
        .validate()
        .map_err(|e| format_err(path.as_ref(), e.to_string()))?;
    Ok(ranges)
}

/// Write a run table. Runs that carry a trace get one CSV each under
/// `<table stem>_traces/run_NNNN.csv` next to the table, referenced in the
/// `trace_file` column by a path relative to the table's directory.
pub fn write_run_table(path: impl AsRef<Path>, runs: &[ExperimentRun]) -> Result<()> {
    let path = path.as_ref();
    let parent = path.parent().unwrap_or_else(|| Path::new("."));
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "runs".to_string());
    let trace_dir_name = format!("{stem}_traces");

    if runs.iter().any(|r| r.trace.is_some()) {
        fs::create_dir_all(parent.join(&trace_dir_name)).map_err(|e| io_err(path, e))?;
    }

    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::Csv { path: path_str(path), source: e })?;
    writer
        .write_record(RUN_TABLE_HEADER)
        .map_err(|e| Error::Csv { path: path_str(path), source: e })?;

    for (i, run) in runs.iter().enumerate() {
        let trace_file = match &run.trace {
            Some(trace) => {
                let relative = format!("{trace_dir_name}/run_{i:04}.csv");
                write_trace_csv(parent.join(&relative), trace)?;
                relative
            }
            None => String::new(),
        };
        writer
            .write_record([
                run.app_name.as_str(),
                &run.config.map_count.to_string(),
                &run.config.reduce_count.to_string(),
                &run.config.fs_size_mb.to_string(),
                &run.config.in_size_mb.to_string(),
                &run.cpu_total.to_string(),
                &trace_file,
            ])
            .map_err(|e| Error::Csv { path: path_str(path), source: e })?;
    }
    writer.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

/// Read a run table back, loading and validating any referenced traces.
pub fn load_run_table(path: impl AsRef<Path>) -> Result<Vec<ExperimentRun>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Csv { path: path_str(path), source: e })?;

    let headers = reader
        .headers()
        .map_err(|e| Error::Csv { path: path_str(path), source: e })?;
    let got: Vec<&str> = headers.iter().collect();
    if got != RUN_TABLE_HEADER {
        return Err(format_err(
            path,
            format!("bad header: expected {:?}, got {:?}", RUN_TABLE_HEADER.join(","), got.join(",")),
        ));
    }

    let mut runs = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Csv { path: path_str(path), source: e })?;
        let row = i + 2; // 1-based, after the header
        if record.len() != RUN_TABLE_HEADER.len() {
            return Err(format_err(path, format!("row {row}: expected 7 fields, got {}", record.len())));
        }
        let field = |j: usize| record.get(j).unwrap_or_default();
        let config = ConfigPoint {
            map_count: parse_field(path, row, "map_count", field(1))?,
            reduce_count: parse_field(path, row, "reduce_count", field(2))?,
            fs_size_mb: parse_field(path, row, "fs_size_mb", field(3))?,
            in_size_mb: parse_field(path, row, "in_size_mb", field(4))?,
        };
        let cpu_total: f64 = parse_field(path, row, "cpu_total_ticks", field(5))?;
        let trace = match field(6) {
            "" => None,
            relative => Some(load_trace_csv(base.join(relative))?),
        };
        let run = ExperimentRun::new(field(0).to_string(), config, cpu_total, trace)
            .map_err(|e| format_err(path, format!("row {row}: {e}")))?;
        runs.push(run);
    }
    Ok(runs)
}

fn parse_field<T: std::str::FromStr>(path: &Path, row: usize, name: &str, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| format_err(path, format!("row {row}: cannot parse {name} from {text:?}")))
}

pub fn write_trace_csv(path: impl AsRef<Path>, trace: &TimeSeries) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::with_capacity(trace.len() * 16);
    out.push_str(&TRACE_HEADER.join(","));
    out.push('\n');
    for (i, v) in trace.values().iter().enumerate() {
        let t = i as f64 * trace.interval_seconds();
        out.push_str(&format!("{t},{v}\n"));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Read a trace, requiring the exact header and uniform sample spacing.
pub fn load_trace_csv(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == TRACE_HEADER.join(",") => {}
        other => {
            return Err(format_err(
                path,
                format!("bad header: expected {:?}, got {:?}", TRACE_HEADER.join(","), other.unwrap_or("")),
            ))
        }
    }

    let mut times = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 2;
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, ',');
        let t: f64 = parse_field(path, row, "t_seconds", parts.next().unwrap_or(""))?;
        let v: f64 = parse_field(path, row, "cpu_percent", parts.next().unwrap_or(""))?;
        times.push(t);
        values.push(v);
    }
    if values.len() < 2 {
        return Err(format_err(path, format!("need at least 2 samples, got {}", values.len())));
    }

    let interval = times[1] - times[0];
    if !(interval.is_finite() && interval > 0.0) {
        return Err(format_err(path, format!("non-increasing sample times: {} then {}", times[0], times[1])));
    }
    for (i, pair) in times.windows(2).enumerate() {
        let step = pair[1] - pair[0];
        if (step - interval).abs() > 1e-9 * interval {
            return Err(format_err(
                path,
                format!("non-uniform spacing at row {}: step {step} vs interval {interval}", i + 3),
            ));
        }
    }
    TimeSeries::new(values, interval).map_err(|e| format_err(path, e.to_string()))
}

/// Write a report (or any serializable summary) as sorted pretty JSON.
pub fn save_report(path: impl AsRef<Path>, report: &impl Serialize) -> Result<()> {
    write_json(path.as_ref(), report)
}

/// Per-run residual CSV next to an evaluation report.
pub fn write_residuals_csv(path: impl AsRef<Path>, residuals: &[crate::model::Residual]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("predicted,actual,percent_error\n");
    for r in residuals {
        out.push_str(&format!("{},{},{}\n", r.predicted, r.actual, r.percent_error));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Resolve a trace the same way `load_run_table` does; handy for callers
/// holding a table path plus the relative `trace_file` field.
pub fn trace_path(table_path: impl AsRef<Path>, trace_file: &str) -> PathBuf {
    let base = table_path.as_ref().parent().unwrap_or_else(|| Path::new("."));
    base.join(trace_file)
}
