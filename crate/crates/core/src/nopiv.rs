//! The five unblocked LU-without-pivoting variants.
//!
//! All five perform the same arithmetic in different orders; they differ in
//! which region of the matrix each iteration brings up to date. Variant 5 is
//! the classic right-looking elimination; variant 3 is left-looking; variant
//! 4 is Crout's method; variants 1 and 2 defer progressively more of the
//! update. The numbering is the authoritative identifier.

use crate::error::{Error, Result};
use crate::kernels::{gemm_update, trsm_unit_lower, trsm_upper_right};
use crate::matrix::{DenseMatrix, View};

/// Identifier for an unblocked no-pivot variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NopivVariant {
    /// Bordered: brings the new row and column of the leading block current.
    V1,
    /// Row-lazy: maintains the factored block plus the current `U` rows.
    V2,
    /// Left-looking: maintains the factored block plus the `L` columns.
    V3,
    /// Crout: maintains everything except the trailing block.
    V4,
    /// Right-looking: eagerly updates the trailing block each iteration.
    V5,
}

impl NopivVariant {
    pub const ALL: [NopivVariant; 5] = [
        NopivVariant::V1,
        NopivVariant::V2,
        NopivVariant::V3,
        NopivVariant::V4,
        NopivVariant::V5,
    ];

    pub fn index(self) -> u8 {
        match self {
            NopivVariant::V1 => 1,
            NopivVariant::V2 => 2,
            NopivVariant::V3 => 3,
            NopivVariant::V4 => 4,
            NopivVariant::V5 => 5,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get(i.checked_sub(1)? as usize).copied()
    }
}

/// Callback invoked at the top of every iteration with the boundary index and
/// the current matrix contents.
pub type NopivObserver<'a> = &'a mut dyn FnMut(usize, &DenseMatrix);

/// Factors square `a` in place into `L\U` (unit diagonal of `L` implicit) so
/// that the original contents equal `L * U`.
///
/// Requires every leading principal submatrix to be nonsingular; this is
/// checked lazily by testing each updated diagonal element for exact zero,
/// which yields [`Error::Singular`] carrying the failing step. Tiny nonzero
/// pivots proceed and may overflow; bounding multipliers is what the pivoted
/// factorizations are for.
pub fn lu_nopiv(
    a: &mut DenseMatrix,
    variant: NopivVariant,
    mut observer: Option<NopivObserver<'_>>,
) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::Shape(format!(
            "lu_nopiv needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    for k in 0..n {
        if let Some(obs) = observer.as_mut() {
            obs(k, a);
        }
        let b = a.full_view().repart_3x3(k, 1, k, 1)?;
        let (a00, a01, a02) = (b[0][0], b[0][1], b[0][2]);
        let (a10, a12) = (b[1][0], b[1][2]);
        let (a20, a21, a22) = (b[2][0], b[2][1], b[2][2]);

        match variant {
            NopivVariant::V1 => {
                trsm_unit_lower(a, a00, a01)?;
                trsm_upper_right(a, a10, a00)?;
                sub_dot(a, k, a10, a01);
                check_pivot(a, k)?;
            }
            NopivVariant::V2 => {
                trsm_upper_right(a, a10, a00)?;
                sub_dot(a, k, a10, a01);
                check_pivot(a, k)?;
                gemm_update(a, a12, a10, a02)?;
            }
            NopivVariant::V3 => {
                trsm_unit_lower(a, a00, a01)?;
                sub_dot(a, k, a10, a01);
                gemm_update(a, a21, a20, a01)?;
                check_pivot(a, k)?;
                scale_column(a, k, k + 1, n);
            }
            NopivVariant::V4 => {
                sub_dot(a, k, a10, a01);
                gemm_update(a, a21, a20, a01)?;
                check_pivot(a, k)?;
                scale_column(a, k, k + 1, n);
                gemm_update(a, a12, a10, a02)?;
            }
            NopivVariant::V5 => {
                check_pivot(a, k)?;
                scale_column(a, k, k + 1, n);
                gemm_update(a, a22, a21, a12)?;
            }
        }
    }
    Ok(())
}

/// `alpha_11 -= a10 . a01`, the scalar update shared by variants 1-4.
fn sub_dot(a: &mut DenseMatrix, k: usize, a10: View, a01: View) {
    let mut acc = 0.0;
    for t in 0..a10.cols {
        acc += a.vget(a10, 0, t) * a.vget(a01, t, 0);
    }
    let cur = a.get(k, k);
    a.set(k, k, cur - acc);
}

fn check_pivot(a: &DenseMatrix, k: usize) -> Result<()> {
    if a.get(k, k) == 0.0 {
        Err(Error::Singular { step: k })
    } else {
        Ok(())
    }
}

/// `a21 := a21 / alpha_11` for rows `r0..r1` of column `k`.
fn scale_column(a: &mut DenseMatrix, k: usize, r0: usize, r1: usize) {
    let alpha = a.get(k, k);
    for v in a.col_slice_mut(k, r0, r1) {
        *v /= alpha;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(seed: u64, n: usize) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..=1.0))
    }

    // Without pivoting the tight tolerances only hold on well-conditioned
    // inputs; diagonal dominance keeps element growth near one.
    fn dominant_matrix(seed: u64, n: usize) -> DenseMatrix {
        crate::generate::random_dominant(seed, n)
    }

    /// `L * U` from packed storage.
    fn reconstruct(f: &DenseMatrix) -> DenseMatrix {
        let n = f.rows();
        DenseMatrix::from_fn(n, n, |i, j| {
            let mut s = 0.0;
            for t in 0..n {
                let l = if t < i {
                    f.get(i, t)
                } else if t == i {
                    1.0
                } else {
                    0.0
                };
                let u = if t <= j { f.get(t, j) } else { 0.0 };
                s += l * u;
            }
            s
        })
    }

    #[test]
    fn identity_factors_to_identity() {
        for v in NopivVariant::ALL {
            let mut a = DenseMatrix::identity(5);
            lu_nopiv(&mut a, v, None).unwrap();
            assert!(a.bitwise_eq(&DenseMatrix::identity(5)), "variant {v:?}");
        }
    }

    #[test]
    fn two_by_two_by_hand() {
        // [[4,3],[6,3]]: l21 = 1.5, u22 = 3 - 1.5*3 = -1.5
        for v in NopivVariant::ALL {
            let mut a = DenseMatrix::from_col_major(2, 2, vec![4.0, 6.0, 3.0, 3.0]).unwrap();
            lu_nopiv(&mut a, v, None).unwrap();
            assert_eq!(a.get(0, 0), 4.0, "variant {v:?}");
            assert_eq!(a.get(0, 1), 3.0);
            assert_eq!(a.get(1, 0), 1.5);
            assert_eq!(a.get(1, 1), -1.5);
        }
    }

    #[test]
    fn variants_agree_pairwise() {
        for trial in 0..50 {
            let a0 = dominant_matrix(100 + trial, 12);
            let mut results = Vec::new();
            for v in NopivVariant::ALL {
                let mut a = a0.clone();
                lu_nopiv(&mut a, v, None).unwrap();
                results.push(a);
            }
            let scale = a0.max_abs();
            for w in results.windows(2) {
                assert!(
                    max_abs_diff(&w[0], &w[1]) <= 64.0 * f64::EPSILON * scale.max(1.0),
                    "variants disagree on trial {trial}"
                );
            }
        }
    }

    #[test]
    fn reconstruction_bound() {
        for &n in &[1usize, 2, 5, 16, 64] {
            let a0 = dominant_matrix(7 + n as u64, n);
            let mut a = a0.clone();
            lu_nopiv(&mut a, NopivVariant::V5, None).unwrap();
            let lu = reconstruct(&a);
            let bound = 50.0 * n as f64 * f64::EPSILON * a0.max_abs();
            assert!(max_abs_diff(&lu, &a0) <= bound.max(f64::EPSILON), "n = {n}");
        }
    }

    #[test]
    fn empty_matrix_is_a_noop() {
        let mut a = DenseMatrix::zeros(0, 0);
        lu_nopiv(&mut a, NopivVariant::V3, None).unwrap();
    }

    #[test]
    fn non_square_rejected() {
        let mut a = DenseMatrix::zeros(3, 2);
        assert!(matches!(
            lu_nopiv(&mut a, NopivVariant::V5, None),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn exact_zero_pivot_reports_step() {
        // Leading 2x2 minor singular: row 1 zeroed in columns 0..2.
        let mut base = random_matrix(42, 4);
        base.set(1, 0, 0.0);
        base.set(1, 1, 0.0);
        for v in NopivVariant::ALL {
            let mut a = base.clone();
            let err = lu_nopiv(&mut a, v, None).unwrap_err();
            match err {
                Error::Singular { step } => assert_eq!(step, 1, "variant {v:?}"),
                other => panic!("variant {v:?}: unexpected error {other}"),
            }
        }
    }

    #[test]
    fn observer_sees_every_iteration() {
        let mut a = random_matrix(5, 6);
        let mut seen = Vec::new();
        let mut obs = |k: usize, _: &DenseMatrix| seen.push(k);
        lu_nopiv(&mut a, NopivVariant::V2, Some(&mut obs)).unwrap();
        assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
    }
}
