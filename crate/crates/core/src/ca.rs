//! Correspondence analysis of a two-way count table.
//!
//! The table is reduced to its non-empty rows and columns, turned into a
//! correspondence matrix `P = N / n` with row masses `r` and column masses
//! `c`, and the standardized residuals
//! `A = D_r^{-1/2} (P - r cᵀ) D_c^{-1/2}` are decomposed as `U Σ Vᵀ`.
//! Principal coordinates are `F = D_r^{-1/2} U Σ` and `G = D_c^{-1/2} V Σ`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{Display, Write};

use crate::linalg::{svd, Matrix};
use crate::table::ContingencyTable;

/// Singular values at or below this are treated as zero when counting
/// dimensions.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Two `|U|` entries closer than this count as tied when picking the sign
/// of a dimension.
const SIGN_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum CaError {
    #[error("degenerate matrix: table total is zero")]
    DegenerateMatrix,
    #[error("table has no dependence structure (rank zero)")]
    RankZero,
}

/// Rows and columns with positive margins, as indices into the original table.
struct Reduced {
    rows: Vec<usize>,
    cols: Vec<usize>,
    n: u64,
}

fn reduce<R: Copy, C: Copy>(t: &ContingencyTable<R, C>) -> Result<Reduced, CaError> {
    let n = t.total();
    if n == 0 {
        return Err(CaError::DegenerateMatrix);
    }
    Ok(Reduced {
        rows: (0..t.n_rows()).filter(|&i| t.row_sum(i) > 0).collect(),
        cols: (0..t.n_cols()).filter(|&j| t.col_sum(j) > 0).collect(),
        n,
    })
}

/// Observed-over-expected ratios on the non-empty part of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct PearsonRatios<R, C> {
    pub rows: Vec<R>,
    pub cols: Vec<C>,
    pub ratios: Matrix,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    pub n: u64,
}

/// `alpha_ij = P_ij / (P_i. P_.j)` over the rows and columns with positive
/// sums.
pub fn pearson_ratios<R: Copy, C: Copy>(
    t: &ContingencyTable<R, C>,
) -> Result<PearsonRatios<R, C>, CaError> {
    let red = reduce(t)?;
    let n = red.n as f64;
    let row_masses: Vec<f64> = red.rows.iter().map(|&i| t.row_sum(i) as f64 / n).collect();
    let col_masses: Vec<f64> = red.cols.iter().map(|&j| t.col_sum(j) as f64 / n).collect();
    let mut ratios = Matrix::zeros(red.rows.len(), red.cols.len());
    for (a, &i) in red.rows.iter().enumerate() {
        for (b, &j) in red.cols.iter().enumerate() {
            let p = t.get(i, j) as f64 / n;
            ratios[(a, b)] = p / (row_masses[a] * col_masses[b]);
        }
    }
    Ok(PearsonRatios {
        rows: red.rows.iter().map(|&i| t.rows()[i]).collect(),
        cols: red.cols.iter().map(|&j| t.cols()[j]).collect(),
        ratios,
        row_masses,
        col_masses,
        n: red.n,
    })
}

/// Pearson's statistic `n Σ_ij r_i c_j (alpha_ij - 1)²`.
pub fn chi_square<R: Copy, C: Copy>(t: &ContingencyTable<R, C>) -> Result<f64, CaError> {
    let pr = pearson_ratios(t)?;
    let mut sum = 0.0;
    for (a, r) in pr.row_masses.iter().enumerate() {
        for (b, c) in pr.col_masses.iter().enumerate() {
            let d = pr.ratios[(a, b)] - 1.0;
            sum += r * c * d * d;
        }
    }
    Ok(pr.n as f64 * sum)
}

/// Output of [`correspondence_analysis`]. Row `i` of `row_coords` belongs to
/// `rows[i]`; dropped (zero-mass) labels are listed separately.
#[derive(Debug, Clone, PartialEq)]
pub struct CaResult<R, C> {
    pub rows: Vec<R>,
    pub cols: Vec<C>,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    /// Retained singular values, non-increasing, all above [`RANK_CUTOFF`].
    pub singular_values: Vec<f64>,
    /// `F`, rows × K.
    pub row_coords: Matrix,
    /// `G`, cols × K.
    pub col_coords: Matrix,
    pub inertia: f64,
    pub n: u64,
    pub dropped_rows: Vec<R>,
    pub dropped_cols: Vec<C>,
}

impl<R: Copy + PartialEq, C: Copy + PartialEq> CaResult<R, C> {
    /// Number of retained dimensions K.
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// Fewer than two dimensions: the 2-D projection is zero-padded.
    pub fn is_low_rank(&self) -> bool {
        self.rank() < 2
    }

    /// First two principal coordinates of row `i`, zero-padded.
    pub fn row_2d(&self, i: usize) -> [f64; 2] {
        first_two(&self.row_coords, i)
    }

    pub fn col_2d(&self, j: usize) -> [f64; 2] {
        first_two(&self.col_coords, j)
    }

    pub fn row_index(&self, label: R) -> Option<usize> {
        self.rows.iter().position(|&r| r == label)
    }

    pub fn col_index(&self, label: C) -> Option<usize> {
        self.cols.iter().position(|&c| c == label)
    }

    /// `F′` and `G′`: the first two columns of `F` and `G`.
    pub fn retained_2d(&self) -> (Matrix, Matrix) {
        let f = Matrix::from_row_major(
            self.rows.len(),
            2,
            (0..self.rows.len()).flat_map(|i| self.row_2d(i)).collect(),
        );
        let g = Matrix::from_row_major(
            self.cols.len(),
            2,
            (0..self.cols.len()).flat_map(|j| self.col_2d(j)).collect(),
        );
        (f, g)
    }
}

fn first_two(m: &Matrix, i: usize) -> [f64; 2] {
    let mut out = [0.0; 2];
    for (k, slot) in out.iter_mut().enumerate().take(m.cols()) {
        *slot = m[(i, k)];
    }
    out
}

/// Run correspondence analysis on a count table.
pub fn correspondence_analysis<R: Copy, C: Copy>(
    t: &ContingencyTable<R, C>,
) -> Result<CaResult<R, C>, CaError> {
    let red = reduce(t)?;
    if red.rows.len() < 2 || red.cols.len() < 2 {
        return Err(CaError::RankZero);
    }
    let n = red.n as f64;
    let (ni, nj) = (red.rows.len(), red.cols.len());
    let r: Vec<f64> = red.rows.iter().map(|&i| t.row_sum(i) as f64 / n).collect();
    let c: Vec<f64> = red.cols.iter().map(|&j| t.col_sum(j) as f64 / n).collect();

    let mut a = Matrix::zeros(ni, nj);
    for (x, &i) in red.rows.iter().enumerate() {
        for (y, &j) in red.cols.iter().enumerate() {
            let p = t.get(i, j) as f64 / n;
            let e = r[x] * c[y];
            a[(x, y)] = (p - e) / libm::sqrt(e);
        }
    }

    let mut dec = svd(&a);
    let k = dec
        .singular_values
        .iter()
        .take_while(|&&s| s > RANK_CUTOFF)
        .count();
    if k == 0 {
        return Err(CaError::RankZero);
    }

    for dim in 0..k {
        let mut best = 0;
        for i in 1..ni {
            if libm::fabs(dec.u[(i, dim)]) > libm::fabs(dec.u[(best, dim)]) + SIGN_TIE {
                best = i;
            }
        }
        if dec.u[(best, dim)] < 0.0 {
            for i in 0..ni {
                dec.u[(i, dim)] = -dec.u[(i, dim)];
            }
            for j in 0..nj {
                dec.v[(j, dim)] = -dec.v[(j, dim)];
            }
        }
    }

    let sigma: Vec<f64> = dec.singular_values[..k].to_vec();
    let mut f = Matrix::zeros(ni, k);
    for i in 0..ni {
        let w = 1.0 / libm::sqrt(r[i]);
        for d in 0..k {
            f[(i, d)] = w * dec.u[(i, d)] * sigma[d];
        }
    }
    let mut g = Matrix::zeros(nj, k);
    for j in 0..nj {
        let w = 1.0 / libm::sqrt(c[j]);
        for d in 0..k {
            g[(j, d)] = w * dec.v[(j, d)] * sigma[d];
        }
    }
    let inertia = sigma.iter().map(|s| s * s).sum();

    let keep = |len: usize, kept: &[usize]| -> Vec<usize> {
        (0..len).filter(|i| !kept.contains(i)).collect()
    };
    Ok(CaResult {
        rows: red.rows.iter().map(|&i| t.rows()[i]).collect(),
        cols: red.cols.iter().map(|&j| t.cols()[j]).collect(),
        row_masses: r,
        col_masses: c,
        singular_values: sigma,
        row_coords: f,
        col_coords: g,
        inertia,
        n: red.n,
        dropped_rows: keep(t.n_rows(), &red.rows).into_iter().map(|i| t.rows()[i]).collect(),
        dropped_cols: keep(t.n_cols(), &red.cols).into_iter().map(|j| t.cols()[j]).collect(),
    })
}

/// Full-precision (17 significant digits) float formatting.
pub fn fmt_full(x: f64) -> String {
    format!("{:.16e}", x)
}

impl<R: Copy + PartialEq + Display, C: Copy + PartialEq + Display> CaResult<R, C> {
    /// Labeled tab-separated export for fixture diffing.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |it: &mut dyn Iterator<Item = String>| -> String {
            it.collect::<Vec<_>>().join("\t")
        };
        let _ = writeln!(out, "n\t{}", self.n);
        let _ = writeln!(out, "rank\t{}", self.rank());
        let _ = writeln!(out, "inertia\t{}", fmt_full(self.inertia));
        let _ = writeln!(
            out,
            "singular_values\t{}",
            join(&mut self.singular_values.iter().map(|&s| fmt_full(s)))
        );
        let _ = writeln!(
            out,
            "dropped_rows\t{}",
            join(&mut self.dropped_rows.iter().map(|r| format!("{r}")))
        );
        let _ = writeln!(
            out,
            "dropped_cols\t{}",
            join(&mut self.dropped_cols.iter().map(|c| format!("{c}")))
        );
        section(&mut out, "row", &self.rows, &self.row_masses, &self.row_coords);
        section(&mut out, "col", &self.cols, &self.col_masses, &self.col_coords);
        out
    }
}

fn section<L: Display>(out: &mut String, kind: &str, labels: &[L], masses: &[f64], coords: &Matrix) {
    let _ = write!(out, "{kind}\tmass");
    for d in 0..coords.cols() {
        let _ = write!(out, "\tdim{}", d + 1);
    }
    out.push('\n');
    for (i, label) in labels.iter().enumerate() {
        let _ = write!(out, "{label}\t{}", fmt_full(masses[i]));
        for d in 0..coords.cols() {
            let _ = write!(out, "\t{}", fmt_full(coords[(i, d)]));
        }
        out.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn table(rows: usize, cols: usize, counts: Vec<u64>) -> ContingencyTable<usize, usize> {
        ContingencyTable::new((0..rows).collect(), (0..cols).collect(), counts).unwrap()
    }

    #[test]
    fn independence_has_unit_ratios_and_zero_chi_square() {
        let t = table(2, 2, vec![1, 2, 2, 4]);
        let pr = pearson_ratios(&t).unwrap();
        for &a in pr.ratios.as_slice() {
            assert!((a - 1.0).abs() < 1e-15);
        }
        assert!(chi_square(&t).unwrap().abs() < 1e-12);
        assert_eq!(correspondence_analysis(&t), Err(CaError::RankZero));
    }

    #[test]
    fn diagonal_two_by_two() {
        let t = table(2, 2, vec![10, 0, 0, 10]);
        let pr = pearson_ratios(&t).unwrap();
        assert_eq!(pr.ratios.as_slice(), &[2.0, 0.0, 0.0, 2.0]);
        assert!((chi_square(&t).unwrap() - 20.0).abs() < 1e-12);

        let ca = correspondence_analysis(&t).unwrap();
        assert_eq!(ca.rank(), 1);
        assert!((ca.singular_values[0] - 1.0).abs() < 1e-12);
        assert!((ca.inertia - 1.0).abs() < 1e-12);
        assert!((ca.row_coords[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((ca.row_coords[(1, 0)] + 1.0).abs() < 1e-12);
        assert!((ca.col_coords[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((ca.col_coords[(1, 0)] + 1.0).abs() < 1e-12);
        assert!(ca.is_low_rank());
        assert_eq!(ca.row_2d(1)[1], 0.0);
    }

    #[test]
    fn zero_cells_have_zero_ratio() {
        let t = table(2, 3, vec![3, 0, 1, 1, 2, 0]);
        let pr = pearson_ratios(&t).unwrap();
        assert_eq!(pr.ratios[(0, 1)], 0.0);
        assert_eq!(pr.ratios[(1, 2)], 0.0);
        assert!(pr.ratios[(0, 0)] > 0.0);
    }

    #[test]
    fn scaling_preserves_masses() {
        let t = table(2, 3, vec![3, 5, 1, 1, 2, 7]);
        let x = chi_square(&t).unwrap();
        let x3 = chi_square(&t.scaled(3)).unwrap();
        assert!((x3 - 3.0 * x).abs() < 1e-9 * x3);
        assert_eq!(correspondence_analysis(&t.scaled(4)), correspondence_analysis(&t).map(|mut c| {
            c.n *= 4;
            c
        }));
    }

    #[test]
    fn drops_empty_rows_and_columns() {
        let t = table(3, 3, vec![5, 0, 1, 0, 0, 0, 1, 0, 6]);
        let ca = correspondence_analysis(&t).unwrap();
        assert_eq!(ca.rows, [0, 2]);
        assert_eq!(ca.cols, [0, 2]);
        assert_eq!(ca.dropped_rows, [1]);
        assert_eq!(ca.dropped_cols, [1]);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(correspondence_analysis(&table(2, 2, vec![0; 4])), Err(CaError::DegenerateMatrix));
        assert_eq!(chi_square(&table(2, 2, vec![0; 4])), Err(CaError::DegenerateMatrix));
        // A single non-empty row cannot be analysed.
        assert_eq!(correspondence_analysis(&table(2, 3, vec![1, 2, 3, 0, 0, 0])), Err(CaError::RankZero));
    }

    #[test]
    fn export_is_full_precision() {
        let ca = correspondence_analysis(&table(2, 2, vec![10, 0, 0, 10])).unwrap();
        let text = ca.to_text();
        assert!(text.contains("rank\t1\n"));
        assert!(text.contains("row\tmass\tdim1\n"));
        assert!(text.contains("0\t5.0000000000000000e-1\t"));
    }
}
