//! Column-major dense matrix storage and rectangular views.
//!
//! A [`View`] is a plain offset/extent descriptor, not a borrow: it is
//! resolved against a concrete [`DenseMatrix`] at each access. That lets a
//! factorization hand several disjoint regions of one matrix to a kernel
//! without fighting the borrow checker, while keeping all partitioning
//! arithmetic in one place.

use crate::error::{Error, Result};

/// Dense matrix of `f64` stored column-major: element `(i, j)` lives at
/// `data[i + j * rows]`. Zero-sized dimensions are legal everywhere.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Wraps an existing column-major buffer.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "buffer of length {} cannot hold a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + j * self.rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i + j * self.rows] = value;
    }

    /// Element access through a view; `(i, j)` are view-relative.
    #[inline]
    pub fn vget(&self, v: View, i: usize, j: usize) -> f64 {
        debug_assert!(i < v.rows && j < v.cols);
        self.get(v.row0 + i, v.col0 + j)
    }

    #[inline]
    pub fn vset(&mut self, v: View, i: usize, j: usize, value: f64) {
        debug_assert!(i < v.rows && j < v.cols);
        self.set(v.row0 + i, v.col0 + j, value);
    }

    /// Contiguous slice of column `j`, rows `r0..r1`.
    #[inline]
    pub fn col_slice(&self, j: usize, r0: usize, r1: usize) -> &[f64] {
        debug_assert!(j < self.cols && r0 <= r1 && r1 <= self.rows);
        &self.data[r0 + j * self.rows..r1 + j * self.rows]
    }

    #[inline]
    pub fn col_slice_mut(&mut self, j: usize, r0: usize, r1: usize) -> &mut [f64] {
        debug_assert!(j < self.cols && r0 <= r1 && r1 <= self.rows);
        let base = j * self.rows;
        &mut self.data[base + r0..base + r1]
    }

    pub fn full_view(&self) -> View {
        View::new(0, 0, self.rows, self.cols)
    }

    /// Swaps view-relative rows `r1` and `r2` across all columns of `v`.
    pub fn swap_rows_within(&mut self, v: View, r1: usize, r2: usize) {
        debug_assert!(r1 < v.rows && r2 < v.rows);
        if r1 == r2 {
            return;
        }
        let a = v.row0 + r1;
        let b = v.row0 + r2;
        for j in v.col0..v.col0 + v.cols {
            self.data.swap(a + j * self.rows, b + j * self.rows);
        }
    }

    /// Copies the region under `v` into a fresh matrix.
    pub fn extract(&self, v: View) -> DenseMatrix {
        DenseMatrix::from_fn(v.rows, v.cols, |i, j| self.vget(v, i, j))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    /// Exact equality, distinguishing `-0.0` from `0.0` and treating equal
    /// NaN bit patterns as equal.
    pub fn bitwise_eq(&self, other: &DenseMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Rectangular region of a matrix: row/column offsets plus extent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct View {
    pub row0: usize,
    pub col0: usize,
    pub rows: usize,
    pub cols: usize,
}

impl View {
    pub fn new(row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        View {
            row0,
            col0,
            rows,
            cols,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// True when the view lies entirely within `m`.
    pub fn fits(&self, m: &DenseMatrix) -> bool {
        self.row0 + self.rows <= m.rows && self.col0 + self.cols <= m.cols
    }

    /// Splits into four quadrants at row `k`, column `l`:
    /// `(TL, TR, BL, BR)` with TL of size `k x l`. The quadrants are disjoint
    /// and cover the view.
    pub fn split_2x2(self, k: usize, l: usize) -> Result<(View, View, View, View)> {
        if k > self.rows || l > self.cols {
            return Err(Error::Bounds(format!(
                "split at ({k}, {l}) outside a {}x{} view",
                self.rows, self.cols
            )));
        }
        let tl = View::new(self.row0, self.col0, k, l);
        let tr = View::new(self.row0, self.col0 + l, k, self.cols - l);
        let bl = View::new(self.row0 + k, self.col0, self.rows - k, l);
        let br = View::new(self.row0 + k, self.col0 + l, self.rows - k, self.cols - l);
        Ok((tl, tr, bl, br))
    }

    /// Repartitions into a 3x3 grid of blocks indexed `[row][col]`, where the
    /// middle band starts at row `k` / column `l` and spans `bi` rows and
    /// `bj` columns.
    pub fn repart_3x3(self, k: usize, bi: usize, l: usize, bj: usize) -> Result<[[View; 3]; 3]> {
        if k + bi > self.rows || l + bj > self.cols {
            return Err(Error::Bounds(format!(
                "3x3 repartition (rows {k}+{bi}, cols {l}+{bj}) outside a {}x{} view",
                self.rows, self.cols
            )));
        }
        let rs = [(0, k), (k, bi), (k + bi, self.rows - k - bi)];
        let cs = [(0, l), (l, bj), (l + bj, self.cols - l - bj)];
        let mut out = [[View::new(0, 0, 0, 0); 3]; 3];
        for (bi, &(r0, rn)) in rs.iter().enumerate() {
            for (bj, &(c0, cn)) in cs.iter().enumerate() {
                out[bi][bj] = View::new(self.row0 + r0, self.col0 + c0, rn, cn);
            }
        }
        Ok(out)
    }
}

/// Largest absolute difference between two same-shaped matrices.
pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    a.data
        .iter()
        .zip(&b.data)
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
