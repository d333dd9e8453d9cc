//! Domain types shared across the toolkit: configuration points, observed
//! runs, and CPU-utilization traces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observed trace integral may drift from the recorded total by at most
/// this relative amount before a run is rejected as inconsistent.
pub const TRACE_INTEGRAL_TOLERANCE: f64 = 0.01;

/// One setting of the four tunable MapReduce parameters.
///
/// `fs_size_mb` is the file-system block size and `in_size_mb` the input
/// data size, both in megabytes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigPoint {
    pub map_count: u32,
    pub reduce_count: u32,
    pub fs_size_mb: f64,
    pub in_size_mb: f64,
}

impl ConfigPoint {
    /// Build a config point, enforcing that every parameter is strictly
    /// positive and the sizes are finite.
    pub fn new(map_count: u32, reduce_count: u32, fs_size_mb: f64, in_size_mb: f64) -> Result<Self> {
        let point = Self { map_count, reduce_count, fs_size_mb, in_size_mb };
        point.validate()?;
        Ok(point)
    }

    pub fn validate(&self) -> Result<()> {
        if self.map_count < 1 {
            return Err(invalid("config point", "map_count must be >= 1"));
        }
        if self.reduce_count < 1 {
            return Err(invalid("config point", "reduce_count must be >= 1"));
        }
        if !(self.fs_size_mb.is_finite() && self.fs_size_mb > 0.0) {
            return Err(invalid(
                "config point",
                format!("fs_size_mb must be finite and > 0, got {}", self.fs_size_mb),
            ));
        }
        if !(self.in_size_mb.is_finite() && self.in_size_mb > 0.0) {
            return Err(invalid(
                "config point",
                format!("in_size_mb must be finite and > 0, got {}", self.in_size_mb),
            ));
        }
        Ok(())
    }
}

/// A uniformly sampled CPU-utilization trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    interval_seconds: f64,
}

impl TimeSeries {
    /// At least two samples, every value finite and non-negative, and a
    /// positive sampling interval.
    pub fn new(values: Vec<f64>, interval_seconds: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(invalid("time series", format!("need at least 2 samples, got {}", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid("time series", format!("values must be finite and >= 0, found {v}")));
        }
        if !(interval_seconds.is_finite() && interval_seconds > 0.0) {
            return Err(invalid(
                "time series",
                format!("interval must be finite and > 0, got {interval_seconds}"),
            ));
        }
        Ok(Self { values, interval_seconds })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn interval_seconds(&self) -> f64 {
        self.interval_seconds
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Discrete integral: sum of samples times the sampling interval.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.interval_seconds
    }
}

/// One observed application run: a configuration plus its measured total
/// CPU cost, optionally with the per-interval utilization trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub app_name: String,
    pub config: ConfigPoint,
    /// Total CPU cost of the run, in tick units.
    pub cpu_total: f64,
    pub trace: Option<TimeSeries>,
}

impl ExperimentRun {
    pub fn new(
        app_name: impl Into<String>,
        config: ConfigPoint,
        cpu_total: f64,
        trace: Option<TimeSeries>,
    ) -> Result<Self> {
        let run = Self { app_name: app_name.into(), config, cpu_total, trace };
        run.validate()?;
        Ok(run)
    }

    /// Enforces cpu_total >= 0 and, when a trace is attached, that the trace
    /// integrates to cpu_total within [`TRACE_INTEGRAL_TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if !(self.cpu_total.is_finite() && self.cpu_total >= 0.0) {
            return Err(invalid(
                "experiment run",
                format!("cpu_total must be finite and >= 0, got {}", self.cpu_total),
            ));
        }
        if let Some(trace) = &self.trace {
            let integral = trace.integral();
            let scale = self.cpu_total.abs().max(1e-12);
            let drift = (integral - self.cpu_total).abs() / scale;
            if drift > TRACE_INTEGRAL_TOLERANCE {
                return Err(invalid(
                    "experiment run",
                    format!(
                        "trace integral {integral} disagrees with cpu_total {} by {:.2}% (limit {:.0}%)",
                        self.cpu_total,
                        drift * 100.0,
                        TRACE_INTEGRAL_TOLERANCE * 100.0
                    ),
                ));
            }
        }
        Ok(())
    }
}

fn invalid(what: &'static str, why: impl Into<String>) -> Error {
    Error::InvalidValue { what, why: why.into() }
}
