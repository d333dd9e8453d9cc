//! Randomized experiment designs over the four-parameter space.
//!
//! Parameter values are drawn independently per run: integers uniform over
//! their closed interval, block size uniform, input size uniform or
//! log-uniform. The draw order per config is fixed (map, reduce, fs, in),
//! so a `(n, ranges, seed)` triple always yields the same list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::types::ConfigPoint;

/// Sampling intervals for the four tunable parameters. All intervals are
/// closed and must have `0 < lo <= hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterRanges {
    pub map: (u32, u32),
    pub reduce: (u32, u32),
    pub fs_size_mb: (f64, f64),
    pub in_size_mb: (f64, f64),
    pub in_size_log_uniform: bool,
}

impl Default for ParameterRanges {
    /// Spans typical pseudo-distributed Hadoop settings: 1-64 mappers,
    /// 1-32 reducers, 16-256 MB blocks, 64 MB-16 GB inputs (log-uniform).
    fn default() -> Self {
        Self {
            map: (1, 64),
            reduce: (1, 32),
            fs_size_mb: (16.0, 256.0),
            in_size_mb: (64.0, 16384.0),
            in_size_log_uniform: true,
        }
    }
}

impl ParameterRanges {
    pub fn validate(&self) -> Result<()> {
        check_int_range("map", self.map)?;
        check_int_range("reduce", self.reduce)?;
        check_real_range("fs_size_mb", self.fs_size_mb)?;
        check_real_range("in_size_mb", self.in_size_mb)?;
        Ok(())
    }
}

fn check_int_range(field: &'static str, (lo, hi): (u32, u32)) -> Result<()> {
    if lo < 1 || lo > hi {
        return Err(Error::InvalidRange { field, lo: f64::from(lo), hi: f64::from(hi) });
    }
    Ok(())
}

fn check_real_range(field: &'static str, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || lo > hi {
        return Err(Error::InvalidRange { field, lo, hi });
    }
    Ok(())
}

/// Draw `n` configuration points from the given ranges, deterministically
/// in `seed`.
pub fn sample_configs(n: usize, ranges: &ParameterRanges, seed: u64) -> Result<Vec<ConfigPoint>> {
    if n < 1 {
        return Err(Error::InvalidValue { what: "sample count", why: "n must be >= 1".into() });
    }
    ranges.validate()?;
    let mut rng = SplitMix64::new(seed);
    let configs = (0..n)
        .map(|_| {
            let map_count = rng.uniform_u32(ranges.map.0, ranges.map.1);
            let reduce_count = rng.uniform_u32(ranges.reduce.0, ranges.reduce.1);
            let fs_size_mb = rng.uniform_f64(ranges.fs_size_mb.0, ranges.fs_size_mb.1);
            let in_size_mb = if ranges.in_size_log_uniform {
                rng.log_uniform_f64(ranges.in_size_mb.0, ranges.in_size_mb.1)
            } else {
                rng.uniform_f64(ranges.in_size_mb.0, ranges.in_size_mb.1)
            };
            ConfigPoint { map_count, reduce_count, fs_size_mb, in_size_mb }
        })
        .collect();
    Ok(configs)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Regularized lower incomplete gamma P(a, x), series + continued
    /// fraction. Test-only oracle for chi-square p-values.
    fn gamma_p(a: f64, x: f64) -> f64 {
        assert!(a > 0.0 && x >= 0.0);
        if x == 0.0 {
            return 0.0;
        }
        let ln_gamma_a = ln_gamma(a);
        if x < a + 1.0 {
            // Series representation.
            let mut term = 1.0 / a;
            let mut sum = term;
            let mut ap = a;
            for _ in 0..500 {
                ap += 1.0;
                term *= x / ap;
                sum += term;
                if term.abs() < sum.abs() * 1e-15 {
                    break;
                }
            }
            sum * (-x + a * x.ln() - ln_gamma_a).exp()
        } else {
            // Continued fraction for Q, then P = 1 - Q.
            let tiny = 1e-300;
            let mut b = x + 1.0 - a;
            let mut c = 1.0 / tiny;
            let mut d = 1.0 / b;
            let mut h = d;
            for i in 1..500 {
                let an = -(i as f64) * (i as f64 - a);
                b += 2.0;
                d = an * d + b;
                if d.abs() < tiny {
                    d = tiny;
                }
                c = b + an / c;
                if c.abs() < tiny {
                    c = tiny;
                }
                d = 1.0 / d;
                let del = d * c;
                h *= del;
                if (del - 1.0).abs() < 1e-15 {
                    break;
                }
            }
            1.0 - (-x + a * x.ln() - ln_gamma_a).exp() * h
        }
    }

    /// Lanczos log-gamma.
    fn ln_gamma(x: f64) -> f64 {
        const COEFFS: [f64; 6] = [
            76.18009172947146,
            -86.50532032941677,
            24.01409824083091,
            -1.231739572450155,
            0.1208650973866179e-2,
            -0.5395239384953e-5,
        ];
        let mut y = x;
        let tmp = x + 5.5;
        let tmp = tmp - (x + 0.5) * tmp.ln();
        let mut ser = 1.000000000190015;
        for c in COEFFS {
            y += 1.0;
            ser += c / y;
        }
        -tmp + (2.5066282746310005 * ser / x).ln()
    }

    #[test]
    fn gamma_p_sanity() {
        // Chi-square with 2 dof: CDF(x) = 1 - exp(-x/2).
        for x in [0.5, 1.0, 3.0, 8.0] {
            let expected = 1.0 - (-x / 2.0f64).exp();
            assert!((gamma_p(1.0, x / 2.0) - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_ranges_yield_identical_points() {
        let ranges = ParameterRanges {
            map: (4, 4),
            reduce: (2, 2),
            fs_size_mb: (64.0, 64.0),
            in_size_mb: (1024.0, 1024.0),
            in_size_log_uniform: false,
        };
        let configs = sample_configs(5, &ranges, 7).unwrap();
        assert_eq!(configs.len(), 5);
        for c in &configs {
            assert_eq!(c.map_count, 4);
            assert_eq!(c.reduce_count, 2);
            assert_eq!(c.fs_size_mb, 64.0);
            assert_eq!(c.in_size_mb, 1024.0);
        }
    }

    #[test]
    fn sampling_is_deterministic_in_seed() {
        let ranges = ParameterRanges::default();
        let a = sample_configs(100, &ranges, 42).unwrap();
        let b = sample_configs(100, &ranges, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_configs(100, &ranges, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn samples_stay_inside_closed_ranges() {
        let ranges = ParameterRanges::default();
        for c in sample_configs(5000, &ranges, 11).unwrap() {
            assert!((1..=64).contains(&c.map_count));
            assert!((1..=32).contains(&c.reduce_count));
            assert!((16.0..=256.0).contains(&c.fs_size_mb));
            assert!((64.0..=16384.0).contains(&c.in_size_mb));
        }
    }

    #[test]
    fn map_count_mean_matches_uniform_closed_form() {
        // Uniform over 1..=64: mean 32.5, variance (64^2 - 1)/12.
        let ranges = ParameterRanges::default();
        let n = 10_000usize;
        let configs = sample_configs(n, &ranges, 42).unwrap();
        let mean = configs.iter().map(|c| f64::from(c.map_count)).sum::<f64>() / n as f64;
        let sd = ((64.0f64 * 64.0 - 1.0) / 12.0).sqrt();
        let three_se = 3.0 * sd / (n as f64).sqrt();
        assert!((mean - 32.5).abs() < three_se, "mean {mean}, bound {three_se}");
    }

    #[test]
    fn log_uniform_input_size_mean_matches_closed_form() {
        // ln(in_size) is uniform on [ln 64, ln 16384]; its mean is the
        // midpoint and its variance (ln hi - ln lo)^2 / 12.
        let ranges = ParameterRanges::default();
        let n = 10_000usize;
        let configs = sample_configs(n, &ranges, 9).unwrap();
        let mean_log = configs.iter().map(|c| c.in_size_mb.ln()).sum::<f64>() / n as f64;
        let (lo, hi) = (64.0f64.ln(), 16384.0f64.ln());
        let expected = 0.5 * (lo + hi);
        let sd = (hi - lo) / 12.0f64.sqrt();
        let three_se = 3.0 * sd / (n as f64).sqrt();
        assert!((mean_log - expected).abs() < three_se, "mean {mean_log} vs {expected}");
    }

    #[test]
    fn integer_parameters_pass_chi_square_uniformity() {
        let ranges = ParameterRanges::default();
        let n = 10_000usize;
        let configs = sample_configs(n, &ranges, 1234).unwrap();

        for (label, values, bins) in [
            ("map", configs.iter().map(|c| c.map_count - 1).collect::<Vec<_>>(), 64usize),
            ("reduce", configs.iter().map(|c| c.reduce_count - 1).collect::<Vec<_>>(), 32usize),
        ] {
            let mut counts = vec![0usize; bins];
            for v in values {
                counts[v as usize] += 1;
            }
            let expected = n as f64 / bins as f64;
            let chi2: f64 = counts
                .iter()
                .map(|&c| {
                    let d = c as f64 - expected;
                    d * d / expected
                })
                .sum();
            let dof = (bins - 1) as f64;
            let cdf = gamma_p(dof / 2.0, chi2 / 2.0);
            assert!(cdf < 0.999, "{label}: chi2 {chi2} rejected at the 0.001 level (cdf {cdf})");
        }
    }

    #[test]
    fn invalid_ranges_are_rejected() {
        let flipped = ParameterRanges { map: (8, 4), ..ParameterRanges::default() };
        assert!(matches!(
            sample_configs(10, &flipped, 1),
            Err(Error::InvalidRange { field: "map", .. })
        ));

        let zero_lo = ParameterRanges { map: (0, 4), ..ParameterRanges::default() };
        assert!(sample_configs(10, &zero_lo, 1).is_err());

        let negative = ParameterRanges { fs_size_mb: (-1.0, 4.0), ..ParameterRanges::default() };
        assert!(matches!(
            sample_configs(10, &negative, 1),
            Err(Error::InvalidRange { field: "fs_size_mb", .. })
        ));

        assert!(sample_configs(0, &ParameterRanges::default(), 1).is_err());
    }
}
