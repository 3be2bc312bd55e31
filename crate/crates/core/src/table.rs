//! Labeled two-way count tables.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("table shape {rows}x{cols} does not match {len} counts")]
pub struct ShapeError {
    pub rows: usize,
    pub cols: usize,
    pub len: usize,
}

/// A row-major matrix of non-negative integer counts with row and column
/// labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable<R, C> {
    rows: Vec<R>,
    cols: Vec<C>,
    counts: Vec<u64>,
}

impl<R: Copy, C: Copy> ContingencyTable<R, C> {
    pub fn zeros(rows: Vec<R>, cols: Vec<C>) -> Self {
        let len = rows.len() * cols.len();
        ContingencyTable {
            rows,
            cols,
            counts: vec![0; len],
        }
    }

    pub fn new(rows: Vec<R>, cols: Vec<C>, counts: Vec<u64>) -> Result<Self, ShapeError> {
        if rows.len() * cols.len() != counts.len() {
            return Err(ShapeError {
                rows: rows.len(),
                cols: cols.len(),
                len: counts.len(),
            });
        }
        Ok(ContingencyTable { rows, cols, counts })
    }

    pub fn rows(&self) -> &[R] {
        &self.rows
    }

    pub fn cols(&self) -> &[C] {
        &self.cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols.len() + j]
    }

    pub fn increment(&mut self, i: usize, j: usize) {
        let w = self.cols.len();
        self.counts[i * w + j] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        let w = self.cols.len();
        self.counts[i * w..(i + 1) * w].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        (0..self.rows.len()).map(|i| self.get(i, j)).sum()
    }

    pub fn row(&self, i: usize) -> &[u64] {
        let w = self.cols.len();
        &self.counts[i * w..(i + 1) * w]
    }

    pub fn transpose(&self) -> ContingencyTable<C, R> {
        let (h, w) = (self.rows.len(), self.cols.len());
        let mut counts = vec![0; h * w];
        for i in 0..h {
            for j in 0..w {
                counts[j * h + i] = self.get(i, j);
            }
        }
        ContingencyTable {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            counts,
        }
    }

    /// Every count multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Self {
        ContingencyTable {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            counts: self.counts.iter().map(|c| c * k).collect(),
        }
    }

    /// Cell-wise sum of two tables with identical labels.
    pub fn add(&self, other: &Self) -> Option<Self>
    where
        R: PartialEq,
        C: PartialEq,
    {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        Some(ContingencyTable {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Relabel rows and columns, keeping counts.
    pub fn relabel<R2: Copy, C2: Copy>(
        &self,
        rows: impl Fn(R) -> R2,
        cols: impl Fn(C) -> C2,
    ) -> ContingencyTable<R2, C2> {
        ContingencyTable {
            rows: self.rows.iter().copied().map(rows).collect(),
            cols: self.cols.iter().copied().map(cols).collect(),
            counts: self.counts.clone(),
        }
    }
}
