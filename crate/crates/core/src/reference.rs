//! Independent naive elimination oracle.
//!
//! Textbook Gaussian elimination with explicit row-swap bookkeeping, written
//! against its own row-major buffer with no code shared with the library's
//! factorization path. Right-looking semantics: pick the largest-magnitude
//! candidate (ties to the lowest index), swap the full rows, divide the
//! column, update the trailing block. Exists so the test suites have
//! something to disagree with.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::piv::PackedLu;
use crate::pivot::PivotVector;

struct RowMajor {
    m: usize,
    n: usize,
    x: Vec<f64>,
}

impl RowMajor {
    fn from(a: &DenseMatrix) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut x = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                x[i * n + j] = a.get(i, j);
            }
        }
        RowMajor { m, n, x }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.x[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.x[i * self.n + j]
    }

    fn swap_full_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.n {
            self.x.swap(r1 * self.n + j, r2 * self.n + j);
        }
    }

    fn into_matrix(self) -> DenseMatrix {
        DenseMatrix::from_fn(self.m, self.n, |i, j| self.x[i * self.n + j])
    }
}

fn eliminate(a: &DenseMatrix) -> Result<(RowMajor, Vec<usize>, Vec<f64>)> {
    let (m, n) = (a.rows(), a.cols());
    if n > m {
        return Err(Error::Shape(format!(
            "reference elimination needs cols <= rows, got {m}x{n}"
        )));
    }
    let mut w = RowMajor::from(a);
    let mut pivots = Vec::with_capacity(n);
    let mut margins = Vec::with_capacity(n);
    for k in 0..n {
        // Largest-magnitude candidate, first occurrence wins; also track the
        // runner-up so callers can measure how decisive the choice was.
        let mut best = k;
        let mut best_mag = w.at(k, k).abs();
        let mut second_mag: f64 = 0.0;
        for i in k + 1..m {
            let mag = w.at(i, k).abs();
            if mag > best_mag {
                second_mag = best_mag;
                best = i;
                best_mag = mag;
            } else if mag > second_mag {
                second_mag = mag;
            }
        }
        if best_mag == 0.0 {
            return Err(Error::RankDeficient { step: k });
        }
        margins.push(best_mag - second_mag);
        pivots.push(best - k);
        w.swap_full_rows(k, best);
        let piv = w.at(k, k);
        for i in k + 1..m {
            *w.at_mut(i, k) /= piv;
        }
        for i in k + 1..m {
            let l = w.at(i, k);
            for j in k + 1..n {
                *w.at_mut(i, j) -= l * w.at(k, j);
            }
        }
    }
    Ok((w, pivots, margins))
}

/// Factors a copy of `a` with the naive right-looking elimination and returns
/// the packed result. Same contract as the library factorization.
pub fn reference_lu_piv(a: &DenseMatrix) -> Result<PackedLu> {
    let (w, pivots, _) = eliminate(a)?;
    PackedLu::from_parts(w.into_matrix(), PivotVector::new(pivots, a.rows())?)
}

/// Pivot decision margins: for each step, the gap between the winning
/// candidate magnitude and the runner-up. A small margin means rounding could
/// flip the pivot choice between arithmetic orderings.
pub fn reference_pivot_margins(a: &DenseMatrix) -> Result<Vec<f64>> {
    let (_, _, margins) = eliminate(a)?;
    Ok(margins)
}
