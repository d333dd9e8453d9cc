//! Application similarity from CPU-utilization traces, and cross-application
//! model transfer.
//!
//! Trace similarity mixes two views: Dynamic Time Warping distance (shape
//! alignment tolerant of temporal stretching) and Pearson correlation on
//! length-aligned samples. Transfer error applies one application's fitted
//! model to another application's runs and reports the same statistics as a
//! within-application evaluation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{evaluate, ErrorReport, RegressionModel};
use crate::types::{ExperimentRun, TimeSeries};

/// Dynamic Time Warping distance between two series.
///
/// Warping paths move through the cost grid with steps (1,0), (0,1) and
/// (1,1); the local cost is `|a_i - b_j|`. The minimum cumulative cost is
/// divided by the number of cells on the optimal path (ties between
/// equal-cost paths resolved toward the shortest), so series of different
/// lengths are comparable. `band` is an optional Sakoe-Chiba half-width
/// restricting the path to `|i - j| <= band`.
pub fn dtw_distance(a: &TimeSeries, b: &TimeSeries, band: Option<usize>) -> Result<f64> {
    dtw_normalized(a.values(), b.values(), band)
}

pub(crate) fn dtw_normalized(a: &[f64], b: &[f64], band: Option<usize>) -> Result<f64> {
    let (cost, len) = dtw_raw(a, b, band)?;
    Ok(cost / len as f64)
}

/// Minimum cumulative cost and, among minimum-cost paths, the smallest
/// path length (cell count). Lexicographic (cost, length) dynamic program.
fn dtw_raw(a: &[f64], b: &[f64], band: Option<usize>) -> Result<(f64, usize)> {
    assert!(!a.is_empty() && !b.is_empty());
    let (n, m) = (a.len(), b.len());
    let diff = n.abs_diff(m);
    if let Some(w) = band {
        if w < diff {
            return Err(Error::BandTooNarrow { band: w, diff });
        }
    }
    let in_band = |i: usize, j: usize| match band {
        Some(w) => i.abs_diff(j) <= w,
        None => true,
    };

    let mut cost = vec![f64::INFINITY; n * m];
    let mut len = vec![0usize; n * m];
    let at = |i: usize, j: usize| i * m + j;

    for i in 0..n {
        for j in 0..m {
            if !in_band(i, j) {
                continue;
            }
            let local = (a[i] - b[j]).abs();
            if i == 0 && j == 0 {
                cost[at(0, 0)] = local;
                len[at(0, 0)] = 1;
                continue;
            }
            let mut best_cost = f64::INFINITY;
            let mut best_len = usize::MAX;
            let mut consider = |idx: usize| {
                let c = cost[idx];
                if c < best_cost || (c == best_cost && len[idx] < best_len) {
                    best_cost = c;
                    best_len = len[idx];
                }
            };
            if i > 0 {
                consider(at(i - 1, j));
            }
            if j > 0 {
                consider(at(i, j - 1));
            }
            if i > 0 && j > 0 {
                consider(at(i - 1, j - 1));
            }
            if best_cost.is_finite() {
                cost[at(i, j)] = best_cost + local;
                len[at(i, j)] = best_len + 1;
            }
        }
    }

    let final_cost = cost[at(n - 1, m - 1)];
    debug_assert!(final_cost.is_finite(), "band admitted no path despite width check");
    Ok((final_cost, len[at(n - 1, m - 1)]))
}

/// Pearson product-moment correlation. Series of different lengths are
/// linearly resampled to the shorter length first.
pub fn pearson_correlation(a: &TimeSeries, b: &TimeSeries) -> Result<f64> {
    let target = a.len().min(b.len());
    let x = resample(a.values(), target);
    let y = resample(b.values(), target);
    if is_constant(&x) {
        return Err(Error::ZeroVariance { which: "first" });
    }
    if is_constant(&y) {
        return Err(Error::ZeroVariance { which: "second" });
    }

    let n = target as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (xv, yv) in x.iter().zip(&y) {
        let dx = xv - mean_x;
        let dy = yv - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn resample(values: &[f64], target: usize) -> Vec<f64> {
    let n = values.len();
    if n == target {
        return values.to_vec();
    }
    (0..target)
        .map(|i| {
            let pos = i as f64 * (n - 1) as f64 / (target - 1) as f64;
            let lo = pos.floor() as usize;
            let frac = pos - lo as f64;
            if lo + 1 < n {
                values[lo] * (1.0 - frac) + values[lo + 1] * frac
            } else {
                values[n - 1]
            }
        })
        .collect()
}

fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|v| *v == values[0])
}

fn z_normalize(values: &[f64], which: &'static str) -> Result<Vec<f64>> {
    if is_constant(values) {
        return Err(Error::ZeroVariance { which });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    Ok(values.iter().map(|v| (v - mean) / sd).collect())
}

/// Combined similarity of two traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    /// Path-normalized DTW distance between the z-normalized series.
    pub dtw_normalized: f64,
    /// Correlation on length-aligned samples.
    pub pearson: f64,
    /// `weight * max(pearson, 0) + (1 - weight) * exp(-dtw_normalized)`,
    /// in [0, 1] and monotone in both inputs.
    pub combined: f64,
    /// The weight the combination used.
    pub weight: f64,
}

/// Score two traces. Both series are z-normalized before DTW so amplitude
/// differences don't drown out shape; correlation is amplitude-blind anyway.
pub fn similarity_score(
    a: &TimeSeries,
    b: &TimeSeries,
    weight: f64,
    band: Option<usize>,
) -> Result<SimilarityScore> {
    if !(weight.is_finite() && (0.0..=1.0).contains(&weight)) {
        return Err(Error::InvalidValue {
            what: "similarity weight",
            why: format!("must be in [0, 1], got {weight}"),
        });
    }
    let pearson = pearson_correlation(a, b)?;
    let za = z_normalize(a.values(), "first")?;
    let zb = z_normalize(b.values(), "second")?;
    let dtw = dtw_normalized(&za, &zb, band)?;
    let combined = weight * pearson.max(0.0) + (1.0 - weight) * (-dtw).exp();
    Ok(SimilarityScore { dtw_normalized: dtw, pearson, combined, weight })
}

/// Cross-application evaluation: `model` (fitted on one application) scored
/// against `runs` (possibly from another). Names on both sides are recorded;
/// the statistics are exactly those of [`evaluate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub model_app: String,
    pub runs_app: String,
    pub error: ErrorReport,
}

pub fn transfer_error(model: &RegressionModel, runs: &[ExperimentRun]) -> Result<TransferReport> {
    let error = evaluate(model, runs)?;
    let names: BTreeSet<&str> = runs.iter().map(|r| r.app_name.as_str()).collect();
    let runs_app = names.into_iter().collect::<Vec<_>>().join(",");
    Ok(TransferReport { model_app: model.app_name.clone(), runs_app, error })
}
