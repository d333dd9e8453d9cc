//! Synthetic stand-in for running a MapReduce application on a cluster.
//!
//! An [`AppProfile`] carries a known quadratic cost surface. Simulated runs
//! report that ground truth with multiplicative Gaussian noise and a
//! two-plateau CPU-utilization trace, which makes every downstream analysis
//! checkable against the generating coefficients. An optional sinusoidal
//! mismatch term (in the log of the input size) gives the fitter something
//! it cannot represent, producing the irreducible few-percent residuals a
//! real cluster shows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::ParameterRanges;
use crate::model::{design_row, COEFFICIENT_COUNT};
use crate::rng::{derive_seed, SplitMix64};
use crate::types::{ConfigPoint, ExperimentRun, TimeSeries};

/// Sampling interval of simulated traces, seconds.
pub const TRACE_INTERVAL_SECONDS: f64 = 1.0;

/// Noise deviations are truncated at this many sigmas.
const NOISE_TRUNCATION_SIGMAS: f64 = 4.0;

/// Hard floor on the noise factor so cpu_total stays positive even under
/// absurd noise settings.
const MIN_NOISE_FACTOR: f64 = 1e-6;

/// Shape of a simulated CPU trace: a map plateau burning at twice the
/// reduce plateau's rate, joined by a linear ramp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceShape {
    /// Share of total CPU spent in the map phase, in (0, 1). Positions the
    /// phase switch: a larger share keeps the hot plateau longer.
    pub map_fraction: f64,
    pub samples_per_run: usize,
    /// Width of the ramp between plateaus, as a fraction of run length.
    pub phase_smoothness: f64,
}

/// A synthetic application: ground-truth coefficients plus noise and trace
/// character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppProfile {
    pub app_name: String,
    /// Ground-truth coefficients in design-row order, applied to *raw*
    /// (unscaled) features.
    pub true_coefficients: [f64; COEFFICIENT_COUNT],
    /// Standard deviation of the multiplicative Gaussian noise on cpu_total,
    /// as a fraction of the noiseless value.
    pub noise_sigma_fraction: f64,
    /// Relative amplitude of the sinusoidal model-mismatch term; 0 disables.
    pub mismatch_amplitude: f64,
    pub trace_shape: TraceShape,
}

impl AppProfile {
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.true_coefficients.iter().find(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite coefficient {c}")));
        }
        if !(self.noise_sigma_fraction.is_finite() && self.noise_sigma_fraction >= 0.0) {
            return Err(invalid(format!(
                "noise_sigma_fraction must be >= 0, got {}",
                self.noise_sigma_fraction
            )));
        }
        if !(self.mismatch_amplitude.is_finite()
            && (0.0..1.0).contains(&self.mismatch_amplitude))
        {
            return Err(invalid(format!(
                "mismatch_amplitude must be in [0, 1), got {}",
                self.mismatch_amplitude
            )));
        }
        let shape = &self.trace_shape;
        if !(shape.map_fraction > 0.0 && shape.map_fraction < 1.0) {
            return Err(invalid(format!(
                "map_fraction must be in (0, 1), got {}",
                shape.map_fraction
            )));
        }
        if shape.samples_per_run < 4 {
            return Err(invalid(format!(
                "samples_per_run must be >= 4, got {}",
                shape.samples_per_run
            )));
        }
        if !(shape.phase_smoothness.is_finite() && (0.0..=1.0).contains(&shape.phase_smoothness)) {
            return Err(invalid(format!(
                "phase_smoothness must be in [0, 1], got {}",
                shape.phase_smoothness
            )));
        }
        Ok(())
    }

    /// Noiseless total CPU cost at a configuration: the quadratic surface
    /// times the mismatch ripple
    /// `1 + amplitude * sin(tau * log2(in_size / 64) / 4)`.
    pub fn ground_truth(&self, c: &ConfigPoint) -> f64 {
        let row = design_row(c);
        let poly: f64 = row.iter().zip(&self.true_coefficients).map(|(x, a)| x * a).sum();
        if self.mismatch_amplitude == 0.0 {
            return poly;
        }
        let phase = std::f64::consts::TAU * (c.in_size_mb / 64.0).log2() / 4.0;
        poly * (1.0 + self.mismatch_amplitude * phase.sin())
    }

    /// Sample `n` configs from `ranges` with a fixed internal seed and check
    /// that the noiseless surface stays strictly positive at each of them.
    pub fn check_positive_over(&self, ranges: &ParameterRanges, n: usize) -> Result<()> {
        // Fixed seed: the check is part of profile loading, not of the
        // caller's random stream.
        let configs = crate::experiment::sample_configs(n.max(1), ranges, 0x70_51_71_7e)?;
        for c in &configs {
            let value = self.ground_truth(c);
            if !value.is_finite() || value <= 0.0 {
                return Err(self.non_positive(c, value));
            }
        }
        Ok(())
    }

    fn non_positive(&self, c: &ConfigPoint, value: f64) -> Error {
        Error::NonPositiveGroundTruth {
            app_name: self.app_name.clone(),
            value,
            map: c.map_count,
            reduce: c.reduce_count,
            fs_size: c.fs_size_mb,
            in_size: c.in_size_mb,
        }
    }

    /// Bundled WordCount-style profile.
    pub fn wordcount_like() -> Self {
        Self {
            app_name: "wordcount_like".into(),
            true_coefficients: [
                12000.0, 350.0, 520.0, -45.0, 2.1, 0.9, 0.4, 0.12, 0.00021,
            ],
            noise_sigma_fraction: 0.03,
            mismatch_amplitude: 0.05,
            trace_shape: TraceShape {
                map_fraction: 0.60,
                samples_per_run: 64,
                phase_smoothness: 0.06,
            },
        }
    }

    /// Bundled log-parsing-style profile. Its cost surface is the WordCount
    /// surface scaled by 1.05, so a WordCount model transfers to it with a
    /// small, systematic error; its trace shape is close to WordCount's.
    pub fn logparse_like() -> Self {
        let wordcount = Self::wordcount_like();
        let mut coefficients = wordcount.true_coefficients;
        for c in &mut coefficients {
            *c *= 1.05;
        }
        Self {
            app_name: "logparse_like".into(),
            true_coefficients: coefficients,
            noise_sigma_fraction: 0.03,
            mismatch_amplitude: 0.05,
            trace_shape: TraceShape {
                map_fraction: 0.65,
                samples_per_run: 64,
                phase_smoothness: 0.08,
            },
        }
    }

    /// Bundled contrast profile with a different coefficient shape (heavy
    /// reducer and block-size terms, negligible input-size curvature) and a
    /// reduce-dominated trace.
    pub fn dissimilar() -> Self {
        Self {
            app_name: "dissimilar".into(),
            true_coefficients: [
                40000.0, -120.0, 30.0, 95.0, 0.8, 6.5, 22.0, 0.5, 0.000004,
            ],
            noise_sigma_fraction: 0.03,
            mismatch_amplitude: 0.05,
            trace_shape: TraceShape {
                map_fraction: 0.25,
                samples_per_run: 48,
                phase_smoothness: 0.03,
            },
        }
    }

    /// Copy of the profile with noise and mismatch switched off; the
    /// simulator then reproduces the polynomial exactly.
    pub fn noiseless(&self) -> Self {
        let mut profile = self.clone();
        profile.noise_sigma_fraction = 0.0;
        profile.mismatch_amplitude = 0.0;
        profile
    }
}

fn invalid(why: String) -> Error {
    Error::InvalidValue { what: "app profile", why }
}

/// Simulate one run: ground truth times truncated multiplicative noise,
/// plus a trace whose discrete integral equals the reported total.
pub fn simulate_run(profile: &AppProfile, c: &ConfigPoint, seed: u64) -> Result<ExperimentRun> {
    profile.validate()?;
    c.validate()?;
    let truth = profile.ground_truth(c);
    if !truth.is_finite() || truth <= 0.0 {
        return Err(profile.non_positive(c, truth));
    }

    let mut rng = SplitMix64::new(seed);
    let z = rng
        .normal()
        .clamp(-NOISE_TRUNCATION_SIGMAS, NOISE_TRUNCATION_SIGMAS);
    let factor = (1.0 + profile.noise_sigma_fraction * z).max(MIN_NOISE_FACTOR);
    let cpu_total = truth * factor;

    let trace = build_trace(&profile.trace_shape, cpu_total);
    ExperimentRun::new(profile.app_name.clone(), *c, cpu_total, Some(trace))
}

/// Simulate a batch. Run `i` uses [`derive_seed`]`(seed, i)`, so each run
/// depends only on its own config and index: batches are prefix-stable and
/// may be evaluated in any order (or in parallel) with identical results.
pub fn batch_simulate(
    profile: &AppProfile,
    configs: &[ConfigPoint],
    seed: u64,
) -> Result<Vec<ExperimentRun>> {
    configs
        .iter()
        .enumerate()
        .map(|(index, c)| {
            simulate_run(profile, c, derive_seed(seed, index as u64))
                .map_err(|source| Error::AtIndex { index, source: Box::new(source) })
        })
        .collect()
}

/// Two-plateau trace: the map phase burns at twice the reduce rate, with a
/// linear ramp of width `phase_smoothness` at the switch. Samples are taken
/// at interval midpoints and scaled so the discrete integral equals
/// `cpu_total` exactly (up to float rounding).
fn build_trace(shape: &TraceShape, cpu_total: f64) -> TimeSeries {
    let n = shape.samples_per_run;
    // Phase switch position making the hot plateau carry `map_fraction` of
    // the area: with heights 2:1, theta = mf / (2 - mf).
    let theta = shape.map_fraction / (2.0 - shape.map_fraction);
    let half_ramp = shape.phase_smoothness / 2.0;
    let ramp_start = (theta - half_ramp).max(0.0);
    let ramp_end = (theta + half_ramp).min(1.0);

    let mut values: Vec<f64> = (0..n)
        .map(|i| {
            let u = (i as f64 + 0.5) / n as f64;
            if u <= ramp_start {
                2.0
            } else if u >= ramp_end {
                1.0
            } else {
                2.0 - (u - ramp_start) / (ramp_end - ramp_start)
            }
        })
        .collect();

    let raw_integral: f64 = values.iter().sum::<f64>() * TRACE_INTERVAL_SECONDS;
    let scale = cpu_total / raw_integral;
    for v in &mut values {
        *v *= scale;
    }
    TimeSeries::new(values, TRACE_INTERVAL_SECONDS).expect("simulated trace is always valid")
}
