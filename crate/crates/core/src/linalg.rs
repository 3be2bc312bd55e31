//! Small dense matrices and a one-sided Jacobi SVD.
//!
//! Matrices here are at most a few dozen rows and columns, so the
//! O(n^3)-per-sweep Jacobi iteration is cheap and gives singular values
//! to near machine precision.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Row-major constructor. Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
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

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn col_norm_sq(&self, j: usize) -> f64 {
        (0..self.rows).map(|i| self[(i, j)] * self[(i, j)]).sum()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin SVD `A = U diag(s) Vᵀ` with `k = min(m, n)` components, singular
/// values non-increasing. Columns of `U` for zero singular values are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    pub v: Matrix,
}

const JACOBI_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 100;

pub fn svd(a: &Matrix) -> Svd {
    if a.rows >= a.cols {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.transpose());
        Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        }
    }
}

fn svd_tall(a: &Matrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut v = Matrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || libm::fabs(gamma) <= JACOBI_EPS * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * x - s * y;
                    w[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<f64> = (0..n).map(|j| libm::sqrt(w.col_norm_sq(j))).collect();

    // Selection sort keeps the column swaps in lockstep across W and V.
    for k in 0..n {
        let mut best = k;
        for j in k + 1..n {
            if sigma[j] > sigma[best] {
                best = j;
            }
        }
        sigma.swap(k, best);
        w.swap_cols(k, best);
        v.swap_cols(k, best);
    }

    let mut u = Matrix::zeros(m, n);
    for (j, &s) in sigma.iter().enumerate() {
        if s > 0.0 {
            for i in 0..m {
                u[(i, j)] = w[(i, j)] / s;
            }
        }
    }
    Svd {
        u,
        singular_values: sigma,
        v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(s: &Svd) -> Matrix {
        let k = s.singular_values.len();
        let mut us = s.u.clone();
        for j in 0..k {
            for i in 0..us.rows() {
                us[(i, j)] *= s.singular_values[j];
            }
        }
        us.matmul(&s.v.transpose())
    }

    fn assert_close(a: &Matrix, b: &Matrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((x - y).abs() <= tol, "{x} vs {y}");
        }
    }

    #[test]
    fn reconstructs_tall_and_wide() {
        let a = Matrix::from_row_major(3, 2, vec![3.0, 1.0, -1.0, 2.0, 0.5, 4.0]);
        let s = svd(&a);
        assert_close(&reconstruct(&s), &a, 1e-13);
        assert!(s.singular_values[0] >= s.singular_values[1]);

        let b = a.transpose();
        let s = svd(&b);
        assert_close(&reconstruct(&s), &b, 1e-13);
    }

    #[test]
    fn orthonormal_factors() {
        let a = Matrix::from_row_major(4, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0, -1.0, 0.0, 2.0]);
        let s = svd(&a);
        let utu = s.u.transpose().matmul(&s.u);
        let vtv = s.v.transpose().matmul(&s.v);
        assert_close(&utu, &Matrix::identity(3), 1e-13);
        assert_close(&vtv, &Matrix::identity(3), 1e-13);
    }

    #[test]
    fn known_singular_values() {
        let a = Matrix::from_row_major(2, 2, vec![0.5, -0.5, -0.5, 0.5]);
        let s = svd(&a);
        assert!((s.singular_values[0] - 1.0).abs() < 1e-15);
        assert!(s.singular_values[1].abs() < 1e-15);
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&Matrix::zeros(3, 2));
        assert_eq!(s.singular_values, [0.0, 0.0]);
    }
}
