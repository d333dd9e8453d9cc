//! The quadratic CPU-cost model: feature expansion, least-squares fitting,
//! prediction, and error reporting.
//!
//! A configuration expands into nine features, and the model is a single
//! coefficient per feature with no interaction terms:
//!
//! ```text
//! cpu = a0 + a1*map + a2*reduce + a3*fs_size + a4*in_size
//!          + a5*map^2 + a6*reduce^2 + a7*fs_size^2 + a8*in_size^2
//! ```
//!
//! The eight non-intercept features are standardized (zero mean, unit
//! variance over the training set) before fitting, purely for conditioning;
//! the scaler is stored in the model so predictions are unchanged. The
//! coefficients stored here therefore apply to *standardized* features.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qr::HouseholderQr;
use crate::types::{ConfigPoint, ExperimentRun};

/// Number of model coefficients (intercept plus eight features).
pub const COEFFICIENT_COUNT: usize = 9;

/// Number of non-intercept features covered by the scaler.
pub const FEATURE_COUNT: usize = 8;

/// Column names in design-row order. Index 0 is the intercept.
pub const COLUMN_NAMES: [&str; COEFFICIENT_COUNT] = [
    "intercept",
    "map",
    "reduce",
    "fs_size",
    "in_size",
    "map^2",
    "reduce^2",
    "fs_size^2",
    "in_size^2",
];

/// Expand a configuration into the fixed design row
/// `[1, map, reduce, fs_size, in_size, map^2, reduce^2, fs_size^2, in_size^2]`.
///
/// This order is part of the model-file contract and never changes. The
/// function is total over numeric inputs; it happily expands degenerate
/// points (all zeros) that would not pass [`ConfigPoint::new`].
pub fn design_row(c: &ConfigPoint) -> [f64; COEFFICIENT_COUNT] {
    let m = f64::from(c.map_count);
    let r = f64::from(c.reduce_count);
    let f = c.fs_size_mb;
    let i = c.in_size_mb;
    [1.0, m, r, f, i, m * m, r * r, f * f, i * i]
}

/// Per-feature standardization parameters for the eight non-intercept
/// features, in design-row order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scaler {
    pub means: [f64; FEATURE_COUNT],
    pub stds: [f64; FEATURE_COUNT],
}

impl Scaler {
    /// Identity scaler: zero means, unit deviations. Standardization becomes
    /// a no-op, so coefficients apply to raw features.
    pub fn identity() -> Self {
        Self { means: [0.0; FEATURE_COUNT], stds: [1.0; FEATURE_COUNT] }
    }

    /// Means and population standard deviations of the non-intercept columns
    /// of the given design rows. Zero deviations are left at zero here;
    /// the fitter substitutes 1.0 and lets rank detection flag the column.
    fn from_rows(rows: &[[f64; COEFFICIENT_COUNT]]) -> Self {
        let n = rows.len() as f64;
        let mut means = [0.0; FEATURE_COUNT];
        let mut stds = [0.0; FEATURE_COUNT];
        for row in rows {
            for (j, mean) in means.iter_mut().enumerate() {
                *mean += row[j + 1];
            }
        }
        for mean in &mut means {
            *mean /= n;
        }
        for row in rows {
            for (j, std) in stds.iter_mut().enumerate() {
                let d = row[j + 1] - means[j];
                *std += d * d;
            }
        }
        for std in &mut stds {
            *std = (*std / n).sqrt();
        }
        Self { means, stds }
    }

    pub fn standardize(&self, features: [f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        let mut out = [0.0; FEATURE_COUNT];
        for j in 0..FEATURE_COUNT {
            out[j] = (features[j] - self.means[j]) / self.stds[j];
        }
        out
    }

    pub fn destandardize(&self, scaled: [f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        let mut out = [0.0; FEATURE_COUNT];
        for j in 0..FEATURE_COUNT {
            out[j] = scaled[j] * self.stds[j] + self.means[j];
        }
        out
    }

    /// Design row with the non-intercept entries standardized.
    pub fn scaled_design_row(&self, c: &ConfigPoint) -> [f64; COEFFICIENT_COUNT] {
        let raw = design_row(c);
        let mut features = [0.0; FEATURE_COUNT];
        features.copy_from_slice(&raw[1..]);
        let scaled = self.standardize(features);
        let mut out = [1.0; COEFFICIENT_COUNT];
        out[1..].copy_from_slice(&scaled);
        out
    }

    pub fn validate(&self) -> Result<()> {
        for (j, std) in self.stds.iter().enumerate() {
            if !(std.is_finite() && *std > 0.0) {
                return Err(Error::InvalidValue {
                    what: "scaler",
                    why: format!("std for {} must be finite and > 0, got {std}", COLUMN_NAMES[j + 1]),
                });
            }
        }
        if let Some(mean) = self.means.iter().find(|m| !m.is_finite()) {
            return Err(Error::InvalidValue {
                what: "scaler",
                why: format!("non-finite mean {mean}"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingSummary {
    pub n_runs: usize,
    pub mape_percent: f64,
}

/// A fitted nine-coefficient model. Coefficients are in design-row order
/// and apply to features standardized by `scaler`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressionModel {
    pub app_name: String,
    pub coefficients: [f64; COEFFICIENT_COUNT],
    pub scaler: Scaler,
    pub training_summary: TrainingSummary,
}

/// Result of a single prediction. `clamped` reports that the raw polynomial
/// went negative and the value was floored at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub cpu_ticks: f64,
    pub clamped: bool,
}

impl RegressionModel {
    /// Fit the model to observed runs by least squares on the standardized
    /// design matrix.
    ///
    /// Needs at least [`COEFFICIENT_COUNT`] runs and a full-rank design;
    /// a parameter held constant across all runs (or taking too few distinct
    /// values to separate its linear and quadratic columns) comes back as
    /// [`Error::RankDeficient`] naming the offending columns.
    pub fn fit(runs: &[ExperimentRun]) -> Result<Self> {
        if runs.len() < COEFFICIENT_COUNT {
            return Err(Error::InsufficientData { needed: COEFFICIENT_COUNT, got: runs.len() });
        }

        let rows: Vec<[f64; COEFFICIENT_COUNT]> =
            runs.iter().map(|run| design_row(&run.config)).collect();
        let mut scaler = Scaler::from_rows(&rows);
        // A zero-variance feature standardizes to an all-zero column; give it
        // a harmless unit deviation and let the QR flag the deficiency.
        for std in &mut scaler.stds {
            if *std == 0.0 {
                *std = 1.0;
            }
        }

        let mut matrix = Vec::with_capacity(rows.len() * COEFFICIENT_COUNT);
        for run in runs {
            matrix.extend_from_slice(&scaler.scaled_design_row(&run.config));
        }
        let qr = HouseholderQr::factor(matrix, runs.len(), COEFFICIENT_COUNT);
        let deficient = qr.deficient_columns();
        if !deficient.is_empty() {
            return Err(Error::RankDeficient {
                columns: deficient.iter().map(|&k| COLUMN_NAMES[k].to_string()).collect(),
            });
        }

        let observed: Vec<f64> = runs.iter().map(|run| run.cpu_total).collect();
        let solution = qr.solve(&observed);
        let mut coefficients = [0.0; COEFFICIENT_COUNT];
        coefficients.copy_from_slice(&solution);

        let mut model = Self {
            app_name: runs[0].app_name.clone(),
            coefficients,
            scaler,
            training_summary: TrainingSummary { n_runs: runs.len(), mape_percent: 0.0 },
        };
        let (residuals, _) = percentage_errors(&model, runs);
        model.training_summary.mape_percent = mean_absolute(&residuals);
        Ok(model)
    }

    /// Evaluate the model at a configuration. The raw polynomial value is
    /// floored at zero (CPU cost cannot be negative); the flag records when
    /// that happened.
    pub fn predict(&self, c: &ConfigPoint) -> Prediction {
        let row = self.scaler.scaled_design_row(c);
        let raw: f64 = row.iter().zip(&self.coefficients).map(|(x, a)| x * a).sum();
        if raw < 0.0 {
            Prediction { cpu_ticks: 0.0, clamped: true }
        } else {
            Prediction { cpu_ticks: raw, clamped: false }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scaler.validate()?;
        if let Some(c) = self.coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidValue {
                what: "model",
                why: format!("non-finite coefficient {c}"),
            });
        }
        Ok(())
    }
}

/// One evaluated run: clamped prediction, observation, and signed percent
/// error `100 * (predicted - actual) / actual`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub predicted: f64,
    pub actual: f64,
    pub percent_error: f64,
}

/// Prediction-error report over a set of runs.
///
/// Runs with `cpu_total = 0` cannot contribute a percentage error; they are
/// excluded from every statistic and counted in `excluded_zero_actuals`, so
/// `residuals.len() + excluded_zero_actuals` equals the input run count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub mape_percent: f64,
    pub max_ape_percent: f64,
    pub r_squared: f64,
    pub excluded_zero_actuals: usize,
    pub residuals: Vec<Residual>,
}

/// Compare model predictions against observed runs.
///
/// MAPE and R-squared are accumulated in value-sorted order, so the report
/// is exactly invariant under permutations of the run list.
pub fn evaluate(model: &RegressionModel, runs: &[ExperimentRun]) -> Result<ErrorReport> {
    if runs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (residuals, excluded_zero_actuals) = percentage_errors(model, runs);
    if residuals.is_empty() {
        return Err(Error::AllZeroActuals);
    }

    let mape_percent = mean_absolute(&residuals);
    let max_ape_percent = residuals
        .iter()
        .fold(0.0f64, |acc, r| acc.max(r.percent_error.abs()));

    let actual_mean = sorted_sum(residuals.iter().map(|r| r.actual)) / residuals.len() as f64;
    let ss_res = sorted_sum(residuals.iter().map(|r| {
        let d = r.actual - r.predicted;
        d * d
    }));
    let ss_tot = sorted_sum(residuals.iter().map(|r| {
        let d = r.actual - actual_mean;
        d * d
    }));
    let r_squared = if ss_tot == 0.0 {
        // Every included observation identical: 1 for a perfect match, 0 otherwise.
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };

    Ok(ErrorReport { mape_percent, max_ape_percent, r_squared, excluded_zero_actuals, residuals })
}

/// Residuals for runs with positive observations, plus the excluded count.
/// Residual order follows the input order.
fn percentage_errors(model: &RegressionModel, runs: &[ExperimentRun]) -> (Vec<Residual>, usize) {
    let mut residuals = Vec::with_capacity(runs.len());
    let mut excluded = 0usize;
    for run in runs {
        let predicted = model.predict(&run.config).cpu_ticks;
        if run.cpu_total > 0.0 {
            residuals.push(Residual {
                predicted,
                actual: run.cpu_total,
                percent_error: 100.0 * (predicted - run.cpu_total) / run.cpu_total,
            });
        } else {
            excluded += 1;
        }
    }
    (residuals, excluded)
}

fn mean_absolute(residuals: &[Residual]) -> f64 {
    if residuals.is_empty() {
        return 0.0;
    }
    sorted_sum(residuals.iter().map(|r| r.percent_error.abs())) / residuals.len() as f64
}

/// Sum in ascending value order: the result does not depend on the order the
/// terms were produced in.
fn sorted_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut terms: Vec<f64> = values.collect();
    terms.sort_by(f64::total_cmp);
    terms.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(m: u32, r: u32, f: f64, i: f64) -> ConfigPoint {
        ConfigPoint { map_count: m, reduce_count: r, fs_size_mb: f, in_size_mb: i }
    }

    fn run(c: ConfigPoint, cpu: f64) -> ExperimentRun {
        ExperimentRun { app_name: "test".into(), config: c, cpu_total: cpu, trace: None }
    }

    /// Test-only oracle: solve the normal equations A^T A x = A^T b by
    /// Gaussian elimination with partial pivoting. Independent of the QR path.
    #[allow(clippy::needless_range_loop)]
    fn normal_equations(rows: &[[f64; 9]], y: &[f64]) -> [f64; 9] {
        let n = 9;
        let mut ata = [[0.0f64; 9]; 9];
        let mut atb = [0.0f64; 9];
        for (row, &target) in rows.iter().zip(y) {
            for i in 0..n {
                atb[i] += row[i] * target;
                for j in 0..n {
                    ata[i][j] += row[i] * row[j];
                }
            }
        }
        // Forward elimination.
        let mut a = ata;
        let mut b = atb;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
                .unwrap();
            a.swap(col, pivot);
            b.swap(col, pivot);
            for row in (col + 1)..n {
                let factor = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
        let mut x = [0.0f64; 9];
        for row in (0..n).rev() {
            let mut acc = b[row];
            for k in (row + 1)..n {
                acc -= a[row][k] * x[k];
            }
            x[row] = acc / a[row][row];
        }
        x
    }

    fn spread_configs(n: usize) -> Vec<ConfigPoint> {
        // Deterministic grid walk covering all four parameters.
        (0..n)
            .map(|k| {
                point(
                    1 + (k % 13) as u32 * 3,
                    1 + (k % 7) as u32 * 2,
                    16.0 + (k % 11) as f64 * 20.0,
                    64.0 + (k % 17) as f64 * 700.0,
                )
            })
            .collect()
    }

    #[test]
    fn design_row_zero_point() {
        let c = point(0, 0, 0.0, 0.0);
        assert_eq!(design_row(&c), [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn design_row_direct_expansion() {
        let c = point(2, 3, 4.0, 5.0);
        assert_eq!(design_row(&c), [1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 9.0, 16.0, 25.0]);
    }

    #[test]
    fn design_row_identity_point() {
        let c = point(1, 1, 1.0, 1.0);
        assert_eq!(design_row(&c), [1.0; 9]);
    }

    #[test]
    fn fit_rejects_fewer_than_nine_runs() {
        let runs: Vec<_> = spread_configs(8).into_iter().map(|c| run(c, 100.0)).collect();
        match RegressionModel::fit(&runs) {
            Err(Error::InsufficientData { needed: 9, got: 8 }) => {}
            other => panic!("expected InsufficientData, got {other:?}"),
        }
    }

    #[test]
    fn fit_flags_constant_parameter_as_rank_deficient() {
        let runs: Vec<_> = spread_configs(100)
            .into_iter()
            .map(|mut c| {
                c.map_count = 4;
                let cost = 10.0 + 2.0 * f64::from(c.reduce_count) + 0.1 * c.in_size_mb;
                run(c, cost)
            })
            .collect();
        match RegressionModel::fit(&runs) {
            Err(Error::RankDeficient { columns }) => {
                assert!(columns.contains(&"map".to_string()), "columns: {columns:?}");
                assert!(columns.contains(&"map^2".to_string()), "columns: {columns:?}");
            }
            other => panic!("expected RankDeficient, got {other:?}"),
        }
    }

    #[test]
    fn noiseless_quadratic_is_recovered() {
        let truth = [120.0, 3.5, 5.2, -0.45, 0.021, 0.09, 0.04, 0.0012, 0.0000021];
        let runs: Vec<_> = spread_configs(100)
            .into_iter()
            .map(|c| {
                let row = design_row(&c);
                let cost: f64 = row.iter().zip(&truth).map(|(x, a)| x * a).sum();
                run(c, cost)
            })
            .collect();
        let model = RegressionModel::fit(&runs).unwrap();
        for r in &runs {
            let predicted = model.predict(&r.config).cpu_ticks;
            let rel = (predicted - r.cpu_total).abs() / r.cpu_total.abs();
            assert!(rel < 1e-8, "relative error {rel}");
        }
        assert!(model.training_summary.mape_percent < 1e-6);
    }

    #[test]
    fn fit_matches_normal_equations_oracle() {
        let truth = [50.0, 1.5, 2.5, -0.2, 0.01, 0.3, 0.2, 0.002, 0.000001];
        let runs: Vec<_> = spread_configs(60)
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                let row = design_row(&c);
                let clean: f64 = row.iter().zip(&truth).map(|(x, a)| x * a).sum();
                // Deterministic pseudo-noise so the system is inconsistent.
                let bump = 1.0 + 0.02 * ((k as f64 * 0.7).sin());
                run(c, clean * bump)
            })
            .collect();
        let model = RegressionModel::fit(&runs).unwrap();

        let scaled_rows: Vec<[f64; 9]> = runs
            .iter()
            .map(|r| model.scaler.scaled_design_row(&r.config))
            .collect();
        let y: Vec<f64> = runs.iter().map(|r| r.cpu_total).collect();
        let oracle = normal_equations(&scaled_rows, &y);
        for (a, b) in model.coefficients.iter().zip(&oracle) {
            let scale = a.abs().max(b.abs()).max(1.0);
            assert!((a - b).abs() / scale < 1e-6, "qr {a} vs normal-equations {b}");
        }
    }

    #[test]
    fn predict_intercept_only_model() {
        let model = RegressionModel {
            app_name: "flat".into(),
            coefficients: [10.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            scaler: Scaler::identity(),
            training_summary: TrainingSummary { n_runs: 0, mape_percent: 0.0 },
        };
        for c in spread_configs(5) {
            assert_eq!(model.predict(&c).cpu_ticks, 10.0);
        }
    }

    #[test]
    fn predict_linear_map_model() {
        let model = RegressionModel {
            app_name: "lin".into(),
            coefficients: [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            scaler: Scaler::identity(),
            training_summary: TrainingSummary { n_runs: 0, mape_percent: 0.0 },
        };
        let p = model.predict(&point(3, 1, 1.0, 1.0));
        assert_eq!(p.cpu_ticks, 4.0);
        assert!(!p.clamped);
    }

    #[test]
    fn negative_prediction_is_clamped_with_flag() {
        let model = RegressionModel {
            app_name: "neg".into(),
            coefficients: [-5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            scaler: Scaler::identity(),
            training_summary: TrainingSummary { n_runs: 0, mape_percent: 0.0 },
        };
        let p = model.predict(&point(1, 1, 1.0, 1.0));
        assert_eq!(p.cpu_ticks, 0.0);
        assert!(p.clamped);
    }

    #[test]
    fn evaluate_single_run_arithmetic() {
        let model = RegressionModel {
            app_name: "const".into(),
            coefficients: [110.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            scaler: Scaler::identity(),
            training_summary: TrainingSummary { n_runs: 0, mape_percent: 0.0 },
        };
        let report = evaluate(&model, &[run(point(1, 1, 1.0, 1.0), 100.0)]).unwrap();
        assert_eq!(report.mape_percent, 10.0);
        assert_eq!(report.max_ape_percent, 10.0);
        assert_eq!(report.residuals.len(), 1);
        assert_eq!(report.excluded_zero_actuals, 0);
        assert_eq!(report.residuals[0].percent_error, 10.0);
    }

    #[test]
    fn evaluate_counts_zero_actuals() {
        let model = RegressionModel {
            app_name: "const".into(),
            coefficients: [50.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            scaler: Scaler::identity(),
            training_summary: TrainingSummary { n_runs: 0, mape_percent: 0.0 },
        };
        let runs = vec![
            run(point(1, 1, 1.0, 1.0), 50.0),
            run(point(2, 1, 1.0, 1.0), 0.0),
            run(point(3, 1, 1.0, 1.0), 100.0),
        ];
        let report = evaluate(&model, &runs).unwrap();
        assert_eq!(report.excluded_zero_actuals, 1);
        assert_eq!(report.residuals.len(), 2);
        assert_eq!(report.residuals.len() + report.excluded_zero_actuals, runs.len());
        // APEs: 0% and 50% -> mean 25%.
        assert_eq!(report.mape_percent, 25.0);
        assert!(report.mape_percent <= report.max_ape_percent);
    }

    #[test]
    fn evaluate_error_paths() {
        let model = RegressionModel {
            app_name: "const".into(),
            coefficients: [50.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            scaler: Scaler::identity(),
            training_summary: TrainingSummary { n_runs: 0, mape_percent: 0.0 },
        };
        assert!(matches!(evaluate(&model, &[]), Err(Error::EmptyInput)));
        let zeros = vec![run(point(1, 1, 1.0, 1.0), 0.0)];
        assert!(matches!(evaluate(&model, &zeros), Err(Error::AllZeroActuals)));
    }

    #[test]
    fn evaluate_is_permutation_invariant() {
        let truth = [900.0, 12.0, 7.0, -0.9, 0.05, 0.4, 0.6, 0.004, 0.000003];
        let mut runs: Vec<_> = spread_configs(40)
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                let row = design_row(&c);
                let clean: f64 = row.iter().zip(&truth).map(|(x, a)| x * a).sum();
                run(c, clean * (1.0 + 0.03 * ((k as f64).cos())))
            })
            .collect();
        let model = RegressionModel::fit(&runs).unwrap();
        let before = evaluate(&model, &runs).unwrap();
        runs.reverse();
        runs.swap(3, 17);
        let after = evaluate(&model, &runs).unwrap();
        assert_eq!(before.mape_percent.to_bits(), after.mape_percent.to_bits());
        assert_eq!(before.max_ape_percent.to_bits(), after.max_ape_percent.to_bits());
        assert_eq!(before.r_squared.to_bits(), after.r_squared.to_bits());
    }

    #[test]
    fn perfect_model_has_zero_mape_and_unit_r_squared() {
        let truth = [300.0, 2.0, 3.0, 0.5, 0.02, 0.1, 0.2, 0.001, 0.000002];
        let runs: Vec<_> = spread_configs(30)
            .into_iter()
            .map(|c| {
                let row = design_row(&c);
                run(c, row.iter().zip(&truth).map(|(x, a)| x * a).sum())
            })
            .collect();
        let model = RegressionModel::fit(&runs).unwrap();
        let report = evaluate(&model, &runs).unwrap();
        assert!(report.mape_percent < 1e-9);
        assert!((report.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaler_round_trip() {
        let scaler = Scaler {
            means: [3.0, -2.0, 128.0, 9000.0, 55.0, 12.0, 30000.0, 8.1e7],
            stds: [1.5, 0.3, 64.0, 4000.0, 40.0, 9.0, 20000.0, 6.0e7],
        };
        let original = [4.2, -1.7, 200.0, 12345.0, 99.0, 16.0, 41000.0, 9.9e7];
        let back = scaler.destandardize(scaler.standardize(original));
        for (a, b) in original.iter().zip(&back) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn fitted_coefficients_are_a_local_sse_minimum() {
        let truth = [2000.0, 40.0, 25.0, -3.0, 0.3, 1.1, 0.9, 0.02, 0.00001];
        let runs: Vec<_> = spread_configs(80)
            .into_iter()
            .enumerate()
            .map(|(k, c)| {
                let row = design_row(&c);
                let clean: f64 = row.iter().zip(&truth).map(|(x, a)| x * a).sum();
                run(c, clean * (1.0 + 0.05 * ((k as f64 * 1.3).sin())))
            })
            .collect();
        let model = RegressionModel::fit(&runs).unwrap();

        let rows: Vec<[f64; 9]> = runs
            .iter()
            .map(|r| model.scaler.scaled_design_row(&r.config))
            .collect();
        let residuals: Vec<f64> = rows
            .iter()
            .zip(&runs)
            .map(|(row, r)| {
                row.iter().zip(&model.coefficients).map(|(x, a)| x * a).sum::<f64>() - r.cpu_total
            })
            .collect();

        // Change in SSE from perturbing coefficient k by delta, accumulated
        // per-term as delta_i * (2 r_i + delta_i) to dodge cancellation in
        // the big SSE totals.
        for k in 0..9 {
            for delta in [1e-3, -1e-3] {
                let change: f64 = rows
                    .iter()
                    .zip(&residuals)
                    .map(|(row, r)| {
                        let d = delta * row[k];
                        d * (2.0 * r + d)
                    })
                    .sum();
                assert!(change >= 0.0, "coefficient {k} delta {delta} decreased SSE by {change}");
            }
        }
    }
}
