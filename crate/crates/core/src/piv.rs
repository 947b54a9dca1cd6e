//! LU factorization with partial pivoting: four unblocked and four blocked
//! variants plus the triangular solve built on the result.
//!
//! Every variant computes the same factorization `P A = L U` with all
//! multipliers bounded by one in magnitude; they differ in when rows are
//! swapped and which region each iteration updates:
//!
//! * `V3a` keeps everything right of the current column untouched (not even
//!   swapped) and catches the current column up with the accumulated pivots.
//! * `V3b` swaps rows across the full width as pivots are found but defers
//!   all arithmetic on the right.
//! * `V4` additionally keeps the `U` rows to the right current (Crout).
//! * `V5` is the eager right-looking algorithm that maintains the trailing
//!   Schur complement.
//!
//! Blocked variants advance `nb` columns per iteration, factoring each panel
//! with the unblocked right-looking algorithm and applying the same catch-up
//! and back-swap steps at block granularity. Pivot offsets are relative, so
//! a panel's pivots drop into the global pivot vector unchanged.

use crate::error::{Error, Result};
use crate::kernels::{back_sub_upper, forward_sub_unit, gemm_update, trsm_unit_lower};
use crate::matrix::{DenseMatrix, View};
use crate::pivot::{apply_offsets, imax, PivotVector};

/// Identifier for a pivoted variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PivVariant {
    V3a,
    V3b,
    V4,
    V5,
}

impl PivVariant {
    pub const ALL: [PivVariant; 4] = [
        PivVariant::V3a,
        PivVariant::V3b,
        PivVariant::V4,
        PivVariant::V5,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PivVariant::V3a => "3a",
            PivVariant::V3b => "3b",
            PivVariant::V4 => "4",
            PivVariant::V5 => "5",
        }
    }
}

/// Unblocked, or blocked with a panel width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Unblocked,
    Blocked(usize),
}

/// A completed factorization: the matrix overwritten with `L\U` plus the
/// pivot vector. `L` is unit lower trapezoidal (diagonal implicit) in the
/// strictly lower part; `U` is upper triangular on and above the diagonal.
#[derive(Clone, Debug)]
pub struct PackedLu {
    factors: DenseMatrix,
    pivots: PivotVector,
}

impl PackedLu {
    pub fn from_parts(factors: DenseMatrix, pivots: PivotVector) -> Result<Self> {
        if pivots.len() != factors.cols() || pivots.target_rows() != factors.rows() {
            return Err(Error::Shape(format!(
                "{}x{} factors need {} pivots over {} rows, got {} over {}",
                factors.rows(),
                factors.cols(),
                factors.cols(),
                factors.rows(),
                pivots.len(),
                pivots.target_rows()
            )));
        }
        if factors.cols() > factors.rows() {
            return Err(Error::Shape(format!(
                "packed factors must have cols <= rows, got {}x{}",
                factors.rows(),
                factors.cols()
            )));
        }
        Ok(PackedLu { factors, pivots })
    }

    pub fn factors(&self) -> &DenseMatrix {
        &self.factors
    }

    pub fn pivots(&self) -> &PivotVector {
        &self.pivots
    }

    pub fn rows(&self) -> usize {
        self.factors.rows()
    }

    pub fn cols(&self) -> usize {
        self.factors.cols()
    }

    /// Largest multiplier magnitude (0 for an empty `L`).
    pub fn max_multiplier(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.factors.cols() {
            for i in j + 1..self.factors.rows() {
                worst = worst.max(self.factors.get(i, j).abs());
            }
        }
        worst
    }

    /// Recomputes `L * U` from the packed storage.
    pub fn reconstruct(&self) -> DenseMatrix {
        let (m, n) = (self.rows(), self.cols());
        DenseMatrix::from_fn(m, n, |i, j| {
            // L(i, t) is zero past the diagonal and U(t, j) past column j,
            // so only t <= min(i, j) contributes; j < n keeps t in range.
            let mut s = 0.0;
            for t in 0..=i.min(j) {
                let l = if t == i { 1.0 } else { self.factors.get(i, t) };
                s += l * self.factors.get(t, j);
            }
            s
        })
    }
}

/// Callback invoked at the top of every (outer) iteration with the boundary
/// index, the current matrix contents, and the pivot offsets found so far.
pub type PivObserver<'a> = &'a mut dyn FnMut(usize, &DenseMatrix, &[usize]);

/// Factors `a` (`m x n`, `n <= m`) in place and returns the pivot vector.
///
/// On success the contents satisfy: permuting the original rows by the
/// returned pivots gives `L * U`, with every multiplier bounded by one in
/// magnitude. A pivot column that is entirely zero at step `k` means the
/// columns are linearly dependent and yields [`Error::RankDeficient`]
/// carrying `k`.
pub fn lu_piv(
    a: &mut DenseMatrix,
    variant: PivVariant,
    mode: Mode,
    mut observer: Option<PivObserver<'_>>,
) -> Result<PivotVector> {
    let (m, n) = (a.rows(), a.cols());
    if n > m {
        return Err(Error::Shape(format!(
            "lu_piv needs cols <= rows, got {m}x{n}"
        )));
    }
    let mut pivots: Vec<usize> = Vec::with_capacity(n);
    match mode {
        Mode::Unblocked => match variant {
            PivVariant::V3a => unblocked_3a(a, &mut pivots, &mut observer)?,
            PivVariant::V3b => unblocked_3b(a, &mut pivots, &mut observer)?,
            PivVariant::V4 => unblocked_4(a, &mut pivots, &mut observer)?,
            PivVariant::V5 => unblocked_5(a, &mut pivots, &mut observer)?,
        },
        Mode::Blocked(nb) => {
            if nb == 0 {
                return Err(Error::Domain("blocked mode needs nb >= 1".into()));
            }
            match variant {
                PivVariant::V3a => blocked_3a(a, nb, &mut pivots, &mut observer)?,
                PivVariant::V3b => blocked_3b(a, nb, &mut pivots, &mut observer)?,
                PivVariant::V4 => blocked_4(a, nb, &mut pivots, &mut observer)?,
                PivVariant::V5 => blocked_5(a, nb, &mut pivots, &mut observer)?,
            }
        }
    }
    PivotVector::new(pivots, m)
}

/// Convenience wrapper that consumes a copy and returns the packed result.
///
/// ```
/// use luvar::{factor_piv, solve, DenseMatrix, Mode, PivVariant};
///
/// let a = DenseMatrix::from_col_major(2, 2, vec![4.0, 6.0, 3.0, 3.0]).unwrap();
/// let lu = factor_piv(a, PivVariant::V5, Mode::Unblocked).unwrap();
/// assert_eq!(lu.pivots().offsets(), &[1, 0]); // |6| > |4|, rows swapped
///
/// let x = solve(&lu, &[7.0, 9.0]).unwrap();
/// assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
/// ```
pub fn factor_piv(mut a: DenseMatrix, variant: PivVariant, mode: Mode) -> Result<PackedLu> {
    let pivots = lu_piv(&mut a, variant, mode, None)?;
    PackedLu::from_parts(a, pivots)
}

fn notify(observer: &mut Option<PivObserver<'_>>, k: usize, a: &DenseMatrix, pivots: &[usize]) {
    if let Some(obs) = observer.as_mut() {
        obs(k, a, pivots);
    }
}

/// Selects the pivot for column `k` among rows `k..m`, records its offset,
/// and swaps rows `k` and `k + offset` across the columns of `swap_cols`.
///
/// The global pivot count is the current column index, so the error step is
/// `pivots.len()` even inside a panel.
fn select_and_swap(
    a: &mut DenseMatrix,
    k: usize,
    swap_cols: View,
    pivots: &mut Vec<usize>,
) -> Result<()> {
    let m = a.rows();
    let pi = imax(a.col_slice(k, k, m)).map_err(|_| Error::RankDeficient { step: pivots.len() })?;
    if a.get(k + pi, k) == 0.0 {
        return Err(Error::RankDeficient { step: pivots.len() });
    }
    pivots.push(pi);
    if pi != 0 {
        m_swap(a, swap_cols, k, k + pi);
    }
    Ok(())
}

/// Swaps absolute rows `r1`, `r2` within the columns covered by `cols`.
fn m_swap(a: &mut DenseMatrix, cols: View, r1: usize, r2: usize) {
    let v = View::new(0, cols.col0, a.rows(), cols.cols);
    a.swap_rows_within(v, r1, r2);
}

fn divide_column(a: &mut DenseMatrix, k: usize) {
    let m = a.rows();
    let alpha = a.get(k, k);
    for v in a.col_slice_mut(k, k + 1, m) {
        *v /= alpha;
    }
}

/// Right-looking elimination of a diagonal panel reaching the bottom of the
/// matrix, swapping only within the panel's columns. This is the unblocked
/// variant 5 when the panel spans the whole matrix.
fn panel_factor_v5(
    a: &mut DenseMatrix,
    panel: View,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    debug_assert!(panel.row0 + panel.rows == a.rows());
    debug_assert!(panel.row0 == panel.col0);
    for local in 0..panel.cols {
        let k = panel.row0 + local;
        notify(observer, k, a, pivots);
        select_and_swap(a, k, panel, pivots)?;
        divide_column(a, k);
        // Trailing update within the panel only.
        let trail = View::new(k + 1, k + 1, a.rows() - k - 1, panel.cols - local - 1);
        let col = View::new(k + 1, k, a.rows() - k - 1, 1);
        let row = View::new(k, k + 1, 1, panel.cols - local - 1);
        gemm_update(a, trail, col, row)?;
    }
    Ok(())
}

fn unblocked_5(
    a: &mut DenseMatrix,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    // The full matrix is one panel: swaps span every column.
    let panel = View::new(0, 0, a.rows(), a.cols());
    panel_factor_v5(a, panel, pivots, observer)
}

fn unblocked_3a(
    a: &mut DenseMatrix,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    for k in 0..n {
        notify(observer, k, a, pivots);
        // Catch the untouched middle column up: permutations first, then the
        // arithmetic the factored part implies.
        let mid = View::new(0, k, m, 1);
        apply_offsets(a, mid, pivots, true);
        trsm_unit_lower(a, View::new(0, 0, k, k), View::new(0, k, k, 1))?;
        gemm_update(
            a,
            View::new(k, k, m - k, 1),
            View::new(k, 0, m - k, k),
            View::new(0, k, k, 1),
        )?;
        // Swap only the current column and the multiplier block on its left;
        // everything to the right stays pristine.
        select_and_swap(a, k, View::new(0, 0, m, k + 1), pivots)?;
        divide_column(a, k);
    }
    Ok(())
}

fn unblocked_3b(
    a: &mut DenseMatrix,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    for k in 0..n {
        notify(observer, k, a, pivots);
        // Rows were swapped along eagerly, so only the arithmetic catch-up
        // remains.
        trsm_unit_lower(a, View::new(0, 0, k, k), View::new(0, k, k, 1))?;
        gemm_update(
            a,
            View::new(k, k, m - k, 1),
            View::new(k, 0, m - k, k),
            View::new(0, k, k, 1),
        )?;
        select_and_swap(a, k, View::new(0, 0, m, n), pivots)?;
        divide_column(a, k);
    }
    Ok(())
}

fn unblocked_4(
    a: &mut DenseMatrix,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    for k in 0..n {
        notify(observer, k, a, pivots);
        // The column above the diagonal already holds u01.
        gemm_update(
            a,
            View::new(k, k, m - k, 1),
            View::new(k, 0, m - k, k),
            View::new(0, k, k, 1),
        )?;
        select_and_swap(a, k, View::new(0, 0, m, n), pivots)?;
        divide_column(a, k);
        // Bring the new U row current.
        gemm_update(
            a,
            View::new(k, k + 1, 1, n - k - 1),
            View::new(k, 0, 1, k),
            View::new(0, k + 1, k, n - k - 1),
        )?;
    }
    Ok(())
}

fn blocked_3a(
    a: &mut DenseMatrix,
    nb: usize,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    let mut k = 0;
    while k < n {
        let b = nb.min(n - k);
        notify(observer, k, a, pivots);
        // Permute-catchup, solve, update, panel-factor, back-swap.
        let block_col = View::new(0, k, m, b);
        apply_offsets(a, block_col, pivots, true);
        trsm_unit_lower(a, View::new(0, 0, k, k), View::new(0, k, k, b))?;
        gemm_update(
            a,
            View::new(k, k, m - k, b),
            View::new(k, 0, m - k, k),
            View::new(0, k, k, b),
        )?;
        let panel = View::new(k, k, m - k, b);
        let before = pivots.len();
        panel_factor_v5(a, panel, pivots, &mut None)?;
        let left = View::new(k, 0, m - k, k);
        apply_offsets_shifted(a, left, &pivots[before..], k);
        k += b;
    }
    Ok(())
}

fn blocked_3b(
    a: &mut DenseMatrix,
    nb: usize,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    let mut k = 0;
    while k < n {
        let b = nb.min(n - k);
        notify(observer, k, a, pivots);
        trsm_unit_lower(a, View::new(0, 0, k, k), View::new(0, k, k, b))?;
        gemm_update(
            a,
            View::new(k, k, m - k, b),
            View::new(k, 0, m - k, k),
            View::new(0, k, k, b),
        )?;
        let panel = View::new(k, k, m - k, b);
        let before = pivots.len();
        panel_factor_v5(a, panel, pivots, &mut None)?;
        // Swapped-along invariant: the panel's pivots hit both sides.
        apply_offsets_shifted(a, View::new(k, 0, m - k, k), &pivots[before..], k);
        apply_offsets_shifted(
            a,
            View::new(k, k + b, m - k, n - k - b),
            &pivots[before..],
            k,
        );
        k += b;
    }
    Ok(())
}

fn blocked_4(
    a: &mut DenseMatrix,
    nb: usize,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    let mut k = 0;
    while k < n {
        let b = nb.min(n - k);
        notify(observer, k, a, pivots);
        // The block column above the diagonal already holds U01.
        gemm_update(
            a,
            View::new(k, k, m - k, b),
            View::new(k, 0, m - k, k),
            View::new(0, k, k, b),
        )?;
        let panel = View::new(k, k, m - k, b);
        let before = pivots.len();
        panel_factor_v5(a, panel, pivots, &mut None)?;
        apply_offsets_shifted(a, View::new(k, 0, m - k, k), &pivots[before..], k);
        apply_offsets_shifted(
            a,
            View::new(k, k + b, m - k, n - k - b),
            &pivots[before..],
            k,
        );
        // Bring the new U rows current: subtract the part already factored,
        // then solve with the panel's unit lower triangle.
        gemm_update(
            a,
            View::new(k, k + b, b, n - k - b),
            View::new(k, 0, b, k),
            View::new(0, k + b, k, n - k - b),
        )?;
        trsm_unit_lower(a, View::new(k, k, b, b), View::new(k, k + b, b, n - k - b))?;
        k += b;
    }
    Ok(())
}

fn blocked_5(
    a: &mut DenseMatrix,
    nb: usize,
    pivots: &mut Vec<usize>,
    observer: &mut Option<PivObserver<'_>>,
) -> Result<()> {
    let (m, n) = (a.rows(), a.cols());
    let mut k = 0;
    while k < n {
        let b = nb.min(n - k);
        notify(observer, k, a, pivots);
        let panel = View::new(k, k, m - k, b);
        let before = pivots.len();
        panel_factor_v5(a, panel, pivots, &mut None)?;
        apply_offsets_shifted(a, View::new(k, 0, m - k, k), &pivots[before..], k);
        apply_offsets_shifted(
            a,
            View::new(k, k + b, m - k, n - k - b),
            &pivots[before..],
            k,
        );
        trsm_unit_lower(a, View::new(k, k, b, b), View::new(k, k + b, b, n - k - b))?;
        gemm_update(
            a,
            View::new(k + b, k + b, m - k - b, n - k - b),
            View::new(k + b, k, m - k - b, b),
            View::new(k, k + b, b, n - k - b),
        )?;
        k += b;
    }
    Ok(())
}

/// Applies panel-local pivot offsets to a view whose rows start at the panel
/// top (absolute row `shift`).
fn apply_offsets_shifted(a: &mut DenseMatrix, v: View, offsets: &[usize], shift: usize) {
    debug_assert_eq!(v.row0, shift);
    apply_offsets(a, v, offsets, true);
}

/// Solves `A x = b` from a square packed factorization: permute `b`, then a
/// unit-lower solve followed by an upper solve.
pub fn solve(lu: &PackedLu, b: &[f64]) -> Result<Vec<f64>> {
    let n = lu.cols();
    if lu.rows() != n {
        return Err(Error::Shape(format!(
            "solve needs a square factorization, got {}x{n}",
            lu.rows()
        )));
    }
    if b.len() != n {
        return Err(Error::Shape(format!(
            "right-hand side has length {}, expected {n}",
            b.len()
        )));
    }
    let mut x = b.to_vec();
    lu.pivots().apply_vec_forward(&mut x)?;
    let all = lu.factors().full_view();
    forward_sub_unit(lu.factors(), all, &mut x)?;
    back_sub_upper(lu.factors(), all, &mut x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(seed: u64, m: usize, n: usize) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(m, n, |_, _| rng.gen_range(-1.0..=1.0))
    }

    fn modes_for(n: usize) -> Vec<Mode> {
        let mut modes = vec![Mode::Unblocked];
        let mut nbs = vec![1, 2, 3, 8, n.max(1)];
        nbs.sort_unstable();
        nbs.dedup();
        modes.extend(nbs.into_iter().map(Mode::Blocked));
        modes
    }

    #[test]
    fn identity_gives_zero_pivots() {
        for v in PivVariant::ALL {
            for mode in modes_for(4) {
                let mut a = DenseMatrix::identity(4);
                let p = lu_piv(&mut a, v, mode, None).unwrap();
                assert_eq!(p.offsets(), &[0, 0, 0, 0], "{v:?} {mode:?}");
                assert!(a.bitwise_eq(&DenseMatrix::identity(4)));
            }
        }
    }

    #[test]
    fn two_by_two_with_swap() {
        // [[4,3],[6,3]]: |6| > |4| so rows swap, then l = 2/3, u22 = 1.
        for v in PivVariant::ALL {
            for mode in modes_for(2) {
                let mut a = DenseMatrix::from_col_major(2, 2, vec![4.0, 6.0, 3.0, 3.0]).unwrap();
                let p = lu_piv(&mut a, v, mode, None).unwrap();
                assert_eq!(p.offsets(), &[1, 0], "{v:?} {mode:?}");
                assert_eq!(a.get(0, 0), 6.0);
                assert_eq!(a.get(0, 1), 3.0);
                assert_eq!(a.get(1, 0), 4.0 / 6.0);
                assert_eq!(a.get(1, 1), 1.0);
            }
        }
    }

    /// `P(p) Ahat` compared against `L * U`, max elementwise.
    fn postcondition_residual(lu: &PackedLu, a_hat: &DenseMatrix) -> f64 {
        let mut permuted = a_hat.clone();
        let v = permuted.full_view();
        lu.pivots().apply_forward(&mut permuted, v).unwrap();
        max_abs_diff(&lu.reconstruct(), &permuted)
    }

    #[test]
    fn postcondition_on_random_square_and_rectangular() {
        for &(m, n) in &[(1usize, 1usize), (5, 5), (16, 16), (7, 4), (33, 20)] {
            let a0 = random_matrix(m as u64 * 37 + n as u64, m, n);
            for v in PivVariant::ALL {
                for mode in modes_for(n) {
                    let mut a = a0.clone();
                    let p = lu_piv(&mut a, v, mode, None).unwrap();
                    let lu = PackedLu::from_parts(a, p).unwrap();
                    let bound = 50.0 * n as f64 * f64::EPSILON * a0.max_abs();
                    assert!(
                        postcondition_residual(&lu, &a0) <= bound,
                        "{v:?} {mode:?} {m}x{n}"
                    );
                    assert!(
                        lu.max_multiplier() <= 1.0 + 4.0 * f64::EPSILON,
                        "{v:?} {mode:?} multiplier"
                    );
                }
            }
        }
    }

    #[test]
    fn blocked_3a_nb1_matches_unblocked_3a_bitwise() {
        for trial in 0..10 {
            let a0 = random_matrix(900 + trial, 9, 6);
            let mut ub = a0.clone();
            let pu = lu_piv(&mut ub, PivVariant::V3a, Mode::Unblocked, None).unwrap();
            let mut bl = a0.clone();
            let pb = lu_piv(&mut bl, PivVariant::V3a, Mode::Blocked(1), None).unwrap();
            assert_eq!(pu, pb, "trial {trial}");
            assert!(ub.bitwise_eq(&bl), "trial {trial}");
        }
    }

    #[test]
    fn blocked_5_full_width_matches_unblocked_5_bitwise() {
        for trial in 0..10 {
            let a0 = random_matrix(950 + trial, 8, 8);
            let mut ub = a0.clone();
            let pu = lu_piv(&mut ub, PivVariant::V5, Mode::Unblocked, None).unwrap();
            let mut bl = a0.clone();
            let pb = lu_piv(&mut bl, PivVariant::V5, Mode::Blocked(8), None).unwrap();
            assert_eq!(pu, pb);
            assert!(ub.bitwise_eq(&bl));
        }
    }

    #[test]
    fn rank_deficiency_is_reported() {
        // Columns 0..=1 supported on row 0 only: column 1 depends on column 0.
        let mut a = random_matrix(3, 3, 3);
        for i in 1..3 {
            a.set(i, 0, 0.0);
            a.set(i, 1, 0.0);
        }
        for v in PivVariant::ALL {
            for mode in modes_for(3) {
                let mut work = a.clone();
                let err = lu_piv(&mut work, v, mode, None).unwrap_err();
                match err {
                    Error::RankDeficient { step } => assert_eq!(step, 1, "{v:?} {mode:?}"),
                    other => panic!("{v:?} {mode:?}: unexpected error {other}"),
                }
            }
        }
    }

    #[test]
    fn wide_matrix_rejected() {
        let mut a = DenseMatrix::zeros(2, 3);
        assert!(matches!(
            lu_piv(&mut a, PivVariant::V5, Mode::Unblocked, None),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn empty_matrix_succeeds() {
        let mut a = DenseMatrix::zeros(0, 0);
        let p = lu_piv(&mut a, PivVariant::V3a, Mode::Blocked(4), None).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn solve_identity() {
        let lu = factor_piv(DenseMatrix::identity(3), PivVariant::V5, Mode::Unblocked).unwrap();
        let x = solve(&lu, &[2.0, -1.0, 0.5]).unwrap();
        assert_eq!(x, vec![2.0, -1.0, 0.5]);
    }

    #[test]
    fn solve_two_by_two() {
        // A = [[4,3],[6,3]], b = A * (1,1) = (7,9).
        let a = DenseMatrix::from_col_major(2, 2, vec![4.0, 6.0, 3.0, 3.0]).unwrap();
        let lu = factor_piv(a, PivVariant::V4, Mode::Unblocked).unwrap();
        let x = solve(&lu, &[7.0, 9.0]).unwrap();
        assert!((x[0] - 1.0).abs() <= 4.0 * f64::EPSILON);
        assert!((x[1] - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn solve_residual_random() {
        let n = 50;
        let a0 = random_matrix(77, n, n);
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let lu = factor_piv(a0.clone(), PivVariant::V5, Mode::Blocked(8)).unwrap();
        let x = solve(&lu, &b).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut ax = 0.0;
            for j in 0..n {
                ax += a0.get(i, j) * x[j];
            }
            worst = worst.max((b[i] - ax).abs());
        }
        let xmax = x.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let denom = n as f64 * a0.max_abs() * xmax;
        assert!(worst / denom <= 100.0 * f64::EPSILON);
    }

    #[test]
    fn solve_rejects_rectangular() {
        let a = random_matrix(5, 6, 4);
        let lu = factor_piv(a, PivVariant::V5, Mode::Unblocked).unwrap();
        assert!(matches!(solve(&lu, &[0.0; 4]), Err(Error::Shape(_))));
    }
}
