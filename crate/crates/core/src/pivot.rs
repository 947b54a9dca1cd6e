//! Pivot vectors and row-permutation algebra.
//!
//! A pivot vector stores relative offsets: entry `i` means "swap row `i` with
//! row `i + offset[i]`". Applying the swaps in ascending order realizes the
//! permutation; applying them in descending order undoes it. Every offset is
//! 0-based and bounded by `target_rows - i - 1`.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, View};

/// Index of the first element of largest magnitude in `x`.
///
/// Ties resolve to the lowest index so pivot sequences are reproducible
/// across variants.
pub fn imax(x: &[f64]) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::Domain("imax of an empty vector".into()));
    }
    let mut best = 0;
    let mut mag = x[0].abs();
    for (i, &v) in x.iter().enumerate().skip(1) {
        if v.abs() > mag {
            best = i;
            mag = v.abs();
        }
    }
    Ok(best)
}

/// Swaps view-relative rows `0` and `pi` of `a`. The operation is its own
/// inverse; `pi == 0` is the identity.
pub fn apply_single_pivot(m: &mut DenseMatrix, a: View, pi: usize) -> Result<()> {
    if !a.fits(m) {
        return Err(Error::Bounds("pivot target view outside matrix".into()));
    }
    if pi >= a.rows {
        return Err(Error::Bounds(format!(
            "pivot offset {pi} outside a view of {} rows",
            a.rows
        )));
    }
    m.swap_rows_within(a, 0, pi);
    Ok(())
}

/// Sequence of relative pivot offsets together with the row count of the
/// matrices it applies to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotVector {
    offsets: Vec<usize>,
    target_rows: usize,
}

impl PivotVector {
    pub fn new(offsets: Vec<usize>, target_rows: usize) -> Result<Self> {
        if offsets.len() > target_rows {
            return Err(Error::Bounds(format!(
                "{} pivots for {} rows",
                offsets.len(),
                target_rows
            )));
        }
        for (i, &p) in offsets.iter().enumerate() {
            if i + p >= target_rows {
                return Err(Error::Bounds(format!(
                    "pivot {i} has offset {p}, beyond row {}",
                    target_rows - 1
                )));
            }
        }
        Ok(PivotVector {
            offsets,
            target_rows,
        })
    }

    /// The identity permutation of length `n` on `target_rows` rows.
    pub fn identity(n: usize, target_rows: usize) -> Result<Self> {
        PivotVector::new(vec![0; n], target_rows)
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn target_rows(&self) -> usize {
        self.target_rows
    }

    /// Absolute form: entry `i` is the row index swapped with row `i`,
    /// i.e. `i + offset[i]`.
    pub fn to_absolute(&self) -> Vec<usize> {
        self.offsets
            .iter()
            .enumerate()
            .map(|(i, &p)| i + p)
            .collect()
    }

    /// Inverse of [`PivotVector::to_absolute`].
    pub fn from_absolute(absolute: &[usize], target_rows: usize) -> Result<Self> {
        let mut offsets = Vec::with_capacity(absolute.len());
        for (i, &r) in absolute.iter().enumerate() {
            if r < i {
                return Err(Error::Bounds(format!(
                    "absolute pivot {r} at position {i} points above the diagonal"
                )));
            }
            offsets.push(r - i);
        }
        PivotVector::new(offsets, target_rows)
    }

    fn check_view(&self, m: &DenseMatrix, a: View) -> Result<()> {
        if !a.fits(m) {
            return Err(Error::Bounds("pivot target view outside matrix".into()));
        }
        // A shorter view is rejected rather than silently truncated.
        if a.rows != self.target_rows {
            return Err(Error::Bounds(format!(
                "pivot vector targets {} rows, view has {}",
                self.target_rows, a.rows
            )));
        }
        Ok(())
    }

    /// Applies the permutation: for `i = 0..n` in order, swaps view rows `i`
    /// and `i + offset[i]`.
    pub fn apply_forward(&self, m: &mut DenseMatrix, a: View) -> Result<()> {
        self.check_view(m, a)?;
        apply_offsets(m, a, &self.offsets, true);
        Ok(())
    }

    /// Undoes [`PivotVector::apply_forward`] by swapping in reverse order.
    pub fn apply_inverse(&self, m: &mut DenseMatrix, a: View) -> Result<()> {
        self.check_view(m, a)?;
        apply_offsets(m, a, &self.offsets, false);
        Ok(())
    }

    pub fn apply_vec_forward(&self, x: &mut [f64]) -> Result<()> {
        if x.len() != self.target_rows {
            return Err(Error::Bounds(format!(
                "pivot vector targets {} rows, vector has {}",
                self.target_rows,
                x.len()
            )));
        }
        for (i, &p) in self.offsets.iter().enumerate() {
            x.swap(i, i + p);
        }
        Ok(())
    }

    pub fn apply_vec_inverse(&self, x: &mut [f64]) -> Result<()> {
        if x.len() != self.target_rows {
            return Err(Error::Bounds(format!(
                "pivot vector targets {} rows, vector has {}",
                self.target_rows,
                x.len()
            )));
        }
        for (i, &p) in self.offsets.iter().enumerate().rev() {
            x.swap(i, i + p);
        }
        Ok(())
    }

    /// The explicit `target_rows x target_rows` 0/1 matrix `P` with
    /// `P * A == apply_forward(A)` for every `A`.
    pub fn permutation_matrix(&self) -> DenseMatrix {
        let mut p = DenseMatrix::identity(self.target_rows);
        let v = p.full_view();
        apply_offsets(&mut p, v, &self.offsets, true);
        p
    }
}

/// Raw swap loop shared by the checked entry points and the factorizations
/// (which apply validated prefixes of their own pivot storage).
pub(crate) fn apply_offsets(m: &mut DenseMatrix, a: View, offsets: &[usize], forward: bool) {
    if forward {
        for (i, &p) in offsets.iter().enumerate() {
            if p != 0 {
                m.swap_rows_within(a, i, i + p);
            }
        }
    } else {
        for (i, &p) in offsets.iter().enumerate().rev() {
            if p != 0 {
                m.swap_rows_within(a, i, i + p);
            }
        }
    }
}

/// Checks the partition law: applying `p` in one pass must equal applying the
/// first `split` offsets to the whole matrix and the rest embedded in the
/// bottom rows. Returns the largest elementwise difference (exactly 0 when
/// the law holds; swaps move values without arithmetic).
pub fn split_composition_check(p: &PivotVector, split: usize) -> Result<f64> {
    if split > p.len() {
        return Err(Error::Bounds(format!(
            "split {split} beyond pivot vector of length {}",
            p.len()
        )));
    }
    let m = p.target_rows();
    // Probe with distinct entries so any misrouted row is visible.
    let probe = DenseMatrix::from_fn(m, m, |i, j| (i * m + j) as f64);

    let mut one_pass = probe.clone();
    let full = one_pass.full_view();
    p.apply_forward(&mut one_pass, full)?;

    let mut two_pass = probe;
    let head = PivotVector::new(p.offsets()[..split].to_vec(), m)?;
    head.apply_forward(&mut two_pass, full)?;
    let tail = PivotVector::new(p.offsets()[split..].to_vec(), m - split)?;
    let bottom = View::new(split, 0, m - split, two_pass.cols());
    tail.apply_forward(&mut two_pass, bottom)?;

    let mut worst: f64 = 0.0;
    for j in 0..one_pass.cols() {
        for i in 0..one_pass.rows() {
            worst = worst.max((one_pass.get(i, j) - two_pass.get(i, j)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn imax_picks_largest_magnitude() {
        assert_eq!(imax(&[1.0, -3.0, 2.0]).unwrap(), 1);
    }

    #[test]
    fn imax_tie_goes_low() {
        assert_eq!(imax(&[2.0, -2.0]).unwrap(), 0);
    }

    #[test]
    fn imax_all_zero() {
        assert_eq!(imax(&[0.0, 0.0, 0.0]).unwrap(), 0);
    }

    #[test]
    fn imax_empty_is_domain_error() {
        assert!(matches!(imax(&[]), Err(Error::Domain(_))));
    }

    #[test]
    fn single_pivot_zero_is_identity() {
        let mut m = DenseMatrix::from_fn(4, 1, |i, _| i as f64);
        let v = m.full_view();
        apply_single_pivot(&mut m, v, 0).unwrap();
        assert_eq!(m.data(), &[0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn single_pivot_swaps_top_with_indexed() {
        let mut m = DenseMatrix::from_fn(4, 1, |i, _| i as f64);
        let v = m.full_view();
        apply_single_pivot(&mut m, v, 2).unwrap();
        assert_eq!(m.data(), &[2.0, 1.0, 0.0, 3.0]);
    }

    #[test]
    fn single_pivot_is_involution() {
        let mut m = DenseMatrix::from_fn(5, 3, |i, j| (i * 3 + j) as f64);
        let orig = m.clone();
        let v = m.full_view();
        apply_single_pivot(&mut m, v, 3).unwrap();
        apply_single_pivot(&mut m, v, 3).unwrap();
        assert!(m.bitwise_eq(&orig));
    }

    #[test]
    fn single_pivot_out_of_range() {
        let mut m = DenseMatrix::zeros(3, 1);
        let v = m.full_view();
        assert!(apply_single_pivot(&mut m, v, 3).is_err());
    }

    #[test]
    fn pivot_vector_validates_offsets() {
        assert!(PivotVector::new(vec![2, 0], 3).is_ok());
        assert!(PivotVector::new(vec![3, 0], 3).is_err());
        assert!(PivotVector::new(vec![0, 2], 3).is_err());
        assert!(PivotVector::new(vec![0; 4], 3).is_err());
    }

    #[test]
    fn apply_unrolled_by_hand() {
        // p = (1, 0) sends (a, b, c) to (b, a, c).
        let p = PivotVector::new(vec![1, 0], 3).unwrap();
        let mut x = [10.0, 20.0, 30.0];
        p.apply_vec_forward(&mut x).unwrap();
        assert_eq!(x, [20.0, 10.0, 30.0]);
    }

    #[test]
    fn identity_pivots_do_nothing() {
        let p = PivotVector::identity(3, 5).unwrap();
        let mut m = DenseMatrix::from_fn(5, 2, |i, j| (i * 2 + j) as f64);
        let orig = m.clone();
        let v = m.full_view();
        p.apply_forward(&mut m, v).unwrap();
        assert!(m.bitwise_eq(&orig));
    }

    #[test]
    fn shorter_view_is_rejected() {
        let p = PivotVector::new(vec![1, 0], 4).unwrap();
        let mut m = DenseMatrix::zeros(3, 2);
        let v = m.full_view();
        assert!(matches!(p.apply_forward(&mut m, v), Err(Error::Bounds(_))));
    }

    #[test]
    fn absolute_round_trip() {
        let p = PivotVector::new(vec![1, 0], 3).unwrap();
        assert_eq!(p.to_absolute(), vec![1, 1]);
        let q = PivotVector::from_absolute(&[1, 1], 3).unwrap();
        assert_eq!(p, q);
        let r = PivotVector::identity(3, 3).unwrap();
        assert_eq!(r.to_absolute(), vec![0, 1, 2]);
    }

    #[test]
    fn permutation_matrix_of_identity() {
        let p = PivotVector::identity(4, 4).unwrap();
        assert!(p.permutation_matrix().bitwise_eq(&DenseMatrix::identity(4)));
    }

    #[test]
    fn scalar_composition_corollary() {
        // Applying the leading single swap and then the full inverse equals
        // the inverse of the tail embedded in the bottom rows.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = rng.gen_range(2..=10usize);
            let offsets: Vec<usize> = (0..m).map(|i| rng.gen_range(0..m - i)).collect();
            let p = PivotVector::new(offsets.clone(), m).unwrap();

            let probe = DenseMatrix::from_fn(m, 2, |i, j| (i * 2 + j) as f64);

            let mut lhs = probe.clone();
            let v = lhs.full_view();
            p.apply_inverse(&mut lhs, v).unwrap();
            apply_single_pivot(&mut lhs, v, offsets[0]).unwrap();

            let mut rhs = probe;
            let tail = PivotVector::new(offsets[1..].to_vec(), m - 1).unwrap();
            let bottom = View::new(1, 0, m - 1, 2);
            tail.apply_inverse(&mut rhs, bottom).unwrap();

            assert!(lhs.bitwise_eq(&rhs));
        }
    }

    fn arb_pivot_vector() -> impl Strategy<Value = PivotVector> {
        (1usize..=32)
            .prop_flat_map(|m| (Just(m), proptest::collection::vec(0usize..32, 0..=m)))
            .prop_map(|(m, raw)| {
                let offsets: Vec<usize> =
                    raw.iter().enumerate().map(|(i, &r)| r % (m - i)).collect();
                PivotVector::new(offsets, m).unwrap()
            })
    }

    proptest! {
        #[test]
        fn forward_then_inverse_is_identity(p in arb_pivot_vector()) {
            let m = p.target_rows();
            let probe = DenseMatrix::from_fn(m, 3, |i, j| (i * 3 + j) as f64);
            let mut work = probe.clone();
            let v = work.full_view();
            p.apply_forward(&mut work, v).unwrap();
            p.apply_inverse(&mut work, v).unwrap();
            prop_assert!(work.bitwise_eq(&probe));
        }

        #[test]
        fn explicit_matrix_agrees_with_in_place(p in arb_pivot_vector()) {
            let m = p.target_rows();
            let probe = DenseMatrix::from_fn(m, 2, |i, j| (i as f64) * 1.5 + j as f64);
            let mut in_place = probe.clone();
            let v = in_place.full_view();
            p.apply_forward(&mut in_place, v).unwrap();

            let pm = p.permutation_matrix();
            let by_matrix = DenseMatrix::from_fn(m, 2, |i, j| {
                (0..m).map(|t| pm.get(i, t) * probe.get(t, j)).sum()
            });
            // 0/1 matrix times values is exact.
            prop_assert!(in_place.bitwise_eq(&by_matrix));
        }

        #[test]
        fn transpose_is_inverse(p in arb_pivot_vector()) {
            let m = p.target_rows();
            let pm = p.permutation_matrix();
            let mut inv = DenseMatrix::identity(m);
            let v = inv.full_view();
            p.apply_inverse(&mut inv, v).unwrap();
            let transpose = DenseMatrix::from_fn(m, m, |i, j| pm.get(j, i));
            prop_assert!(inv.bitwise_eq(&transpose));
        }

        #[test]
        fn partition_law_exact(p in arb_pivot_vector(), frac in 0.0f64..=1.0) {
            let split = ((p.len() as f64) * frac).floor() as usize;
            let split = split.min(p.len());
            prop_assert_eq!(split_composition_check(&p, split).unwrap(), 0.0);
        }
    }
}
