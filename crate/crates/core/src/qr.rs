//! Householder-QR linear least squares.
//!
//! Normal equations square the condition number, and quadratic feature
//! columns over wide parameter ranges are already ill-conditioned, so the
//! fitter goes through an orthogonal factorization instead. Layout follows
//! the classic compact scheme: Householder vectors live below the diagonal
//! of the working matrix, R above it, with R's diagonal kept separately.

/// Relative magnitude below which an R-diagonal entry marks a rank-deficient
/// column: smallest magnitude under 1e-10 times the largest is deficient.
pub const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HouseholderQr {
    qr: Vec<f64>,
    r_diag: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl HouseholderQr {
    /// Factor an m x n matrix given in row-major order, m >= n.
    pub fn factor(matrix: Vec<f64>, rows: usize, cols: usize) -> Self {
        assert_eq!(matrix.len(), rows * cols);
        assert!(rows >= cols, "need at least as many rows as columns");
        let mut qr = matrix;
        let mut r_diag = vec![0.0; cols];

        for k in 0..cols {
            let mut norm = 0.0f64;
            for i in k..rows {
                norm = norm.hypot(qr[i * cols + k]);
            }
            if norm == 0.0 {
                r_diag[k] = 0.0;
                continue;
            }
            if qr[k * cols + k] < 0.0 {
                norm = -norm;
            }
            for i in k..rows {
                qr[i * cols + k] /= norm;
            }
            qr[k * cols + k] += 1.0;

            for j in (k + 1)..cols {
                let mut s = 0.0;
                for i in k..rows {
                    s += qr[i * cols + k] * qr[i * cols + j];
                }
                s = -s / qr[k * cols + k];
                for i in k..rows {
                    qr[i * cols + j] += s * qr[i * cols + k];
                }
            }
            r_diag[k] = -norm;
        }

        Self { qr, r_diag, rows, cols }
    }

    /// Indices of columns whose R-diagonal magnitude falls below
    /// [`RANK_TOLERANCE`] times the largest diagonal magnitude.
    pub fn deficient_columns(&self) -> Vec<usize> {
        let largest = self.r_diag.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
        let cutoff = largest * RANK_TOLERANCE;
        self.r_diag
            .iter()
            .enumerate()
            .filter(|(_, d)| d.abs() <= cutoff)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn is_full_rank(&self) -> bool {
        self.deficient_columns().is_empty()
    }

    /// Least-squares solution of `A x = b`. Requires full column rank.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.rows);
        assert!(self.is_full_rank(), "solve called on a rank-deficient factorization");
        let (m, n) = (self.rows, self.cols);
        let mut y = b.to_vec();

        // Apply the stored reflections: y <- Q^T b.
        for k in 0..n {
            let mut s = 0.0;
            for i in k..m {
                s += self.qr[i * n + k] * y[i];
            }
            s = -s / self.qr[k * n + k];
            for i in k..m {
                y[i] += s * self.qr[i * n + k];
            }
        }

        // Back-substitute R x = y[..n].
        for k in (0..n).rev() {
            y[k] /= self.r_diag[k];
            for i in 0..k {
                y[i] -= y[k] * self.qr[i * n + k];
            }
        }
        y.truncate(n);
        y
    }
}
