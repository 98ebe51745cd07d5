//! Small dense weighted least squares through the normal equations.
//!
//! The systems met here have at most a dozen unknowns, so `AᵀWA` is formed
//! explicitly and factored as `LDLᵀ` with symmetric (diagonal) pivoting. A
//! pivot smaller than [`RANK_TOLERANCE`] times the largest pivot marks the
//! matrix as rank deficient.

use crate::error::{Error, Result};

/// Relative pivot threshold below which the normal matrix is declared singular.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Row-major dense matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i / cols));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `AᵀW(b - Ax)`: the gradient of the weighted objective up to a factor -2.
    pub fn weighted_normal_residual(&self, weights: &[f64], b: &[f64], x: &[f64]) -> Vec<f64> {
        let fitted = self.mul_vec(x);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let r = weights[i] * (b[i] - fitted[i]);
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * r;
            }
        }
        out
    }
}

/// Minimizes `Σ wᵢ (bᵢ - (Ax)ᵢ)²` for nonnegative weights.
pub fn solve_weighted_normal_equations(a: &DenseMatrix, weights: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let (k, q) = (a.rows, a.cols);
    if weights.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: weights.len(),
        });
    }
    if b.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: b.len(),
        });
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::Config("weights must be finite and nonnegative".into()));
    }
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(Error::DegenerateNeighborhood);
    }

    let mut normal = vec![0.0; q * q];
    let mut rhs = vec![0.0; q];
    for i in 0..k {
        let w = weights[i];
        if w == 0.0 {
            continue;
        }
        let row = a.row(i);
        for r in 0..q {
            let wr = w * row[r];
            rhs[r] += wr * b[i];
            for c in r..q {
                normal[r * q + c] += wr * row[c];
            }
        }
    }
    for r in 0..q {
        for c in 0..r {
            normal[r * q + c] = normal[c * q + r];
        }
    }
    solve_symmetric(normal, rhs, q)
}

/// Ordinary least squares: all weights one.
pub fn solve_least_squares(a: &DenseMatrix, f: &[f64]) -> Result<Vec<f64>> {
    solve_weighted_normal_equations(a, &vec![1.0; a.rows], f)
}

/// Solves a symmetric positive semidefinite system by `LDLᵀ` with diagonal
/// pivoting, reporting the effective rank when a pivot collapses.
fn solve_symmetric(mut m: Vec<f64>, mut rhs: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut largest = 0.0f64;

    for step in 0..n {
        let (pivot_at, pivot) = (step..n)
            .map(|i| (i, m[i * n + i]))
            .fold(
                (step, f64::NEG_INFINITY),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if step == 0 {
            largest = pivot;
        }
        if !(pivot > RANK_TOLERANCE * largest) || !(pivot > 0.0) {
            return Err(Error::RankDeficient { rank: step, size: n });
        }
        if pivot_at != step {
            swap_symmetric(&mut m, n, step, pivot_at);
            rhs.swap(step, pivot_at);
            perm.swap(step, pivot_at);
        }

        // Eliminate below the pivot; the trailing block stays symmetric.
        for i in step + 1..n {
            let factor = m[i * n + step] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in step + 1..n {
                m[i * n + j] -= factor * m[step * n + j];
            }
            m[i * n + step] = factor;
            rhs[i] -= factor * rhs[step];
        }
    }

    // Back substitution on the upper triangle (Dᴸᵀ).
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s -= m[i * n + j] * x[j];
        }
        x[i] = s / m[i * n + i];
    }

    let mut out = vec![0.0; n];
    for (slot, &orig) in perm.iter().enumerate() {
        out[orig] = x[slot];
    }
    Ok(out)
}

fn swap_symmetric(m: &mut [f64], n: usize, a: usize, b: usize) {
    for j in 0..n {
        m.swap(a * n + j, b * n + j);
    }
    for i in 0..n {
        m.swap(i * n + a, i * n + b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let a = DenseMatrix::identity(2);
        let x = solve_weighted_normal_equations(&a, &[1.0, 1.0], &[3.0, 5.0]).unwrap();
        assert_eq!(x, vec![3.0, 5.0]);
    }

    #[test]
    fn consistent_line() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]]).unwrap();
        let x = solve_weighted_normal_equations(&a, &[1.0; 3], &[0.0, 1.0, 2.0]).unwrap();
        assert!(x[0].abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_least_squares() {
        let a = DenseMatrix::from_rows(&[[2.0]]).unwrap();
        assert_eq!(solve_least_squares(&a, &[6.0]).unwrap(), vec![3.0]);
        let a = DenseMatrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap();
        assert!((solve_least_squares(&a, &[1.0, 2.0, 3.0]).unwrap()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rank_deficiency_reports_rank() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [3.0, 6.0, 1.0]]).unwrap();
        match solve_least_squares(&a, &[1.0, 2.0, 3.0]) {
            Err(Error::RankDeficient { rank, size }) => assert_eq!((rank, size), (2, 3)),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn zero_weights_are_degenerate() {
        let a = DenseMatrix::identity(2);
        assert!(matches!(
            solve_weighted_normal_equations(&a, &[0.0, 0.0], &[1.0, 1.0]),
            Err(Error::DegenerateNeighborhood)
        ));
    }

    #[test]
    fn zero_weight_row_is_ignored() {
        let a = DenseMatrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [1.0, 2.0], [1.0, 50.0]]).unwrap();
        let b = [0.3, 1.1, 1.9, -400.0];
        let with = solve_weighted_normal_equations(&a, &[1.0, 0.5, 0.7, 0.0], &b).unwrap();
        let a3 = DenseMatrix::from_rows(&[[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]]).unwrap();
        let without = solve_weighted_normal_equations(&a3, &[1.0, 0.5, 0.7], &b[..3]).unwrap();
        assert_eq!(with, without);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(DenseMatrix::new(1, 1, vec![f64::NAN]).is_err());
        let a = DenseMatrix::identity(2);
        assert!(solve_weighted_normal_equations(&a, &[1.0], &[1.0, 1.0]).is_err());
        assert!(solve_weighted_normal_equations(&a, &[1.0, -1.0], &[1.0, 1.0]).is_err());
    }
}
