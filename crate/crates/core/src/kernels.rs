//! The small set of level-1/2/3 kernels every factorization variant is built
//! from: a rank-k update and two triangular solves, plus their vector forms.
//!
//! Kernels are plain loop nests on purpose. All variants share them, so
//! timing comparisons between variants stay fair, and the arithmetic order is
//! easy to audit. Operands are views into a single matrix; regions written
//! must be disjoint from regions read.

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, View};

fn check_fits(m: &DenseMatrix, v: View, what: &str) -> Result<()> {
    if v.fits(m) {
        Ok(())
    } else {
        Err(Error::Bounds(format!(
            "{what} view {}x{} at ({}, {}) outside a {}x{} matrix",
            v.rows,
            v.cols,
            v.row0,
            v.col0,
            m.rows(),
            m.cols()
        )))
    }
}

/// `C := C - A * B` where `C` is `m x n`, `A` is `m x k`, `B` is `k x n`.
///
/// `k == 0` leaves `C` untouched. Elements outside `c` are never written.
pub fn gemm_update(m: &mut DenseMatrix, c: View, a: View, b: View) -> Result<()> {
    check_fits(m, c, "C")?;
    check_fits(m, a, "A")?;
    check_fits(m, b, "B")?;
    if c.rows != a.rows || c.cols != b.cols || a.cols != b.rows {
        return Err(Error::Shape(format!(
            "gemm_update: C {}x{}, A {}x{}, B {}x{}",
            c.rows, c.cols, a.rows, a.cols, b.rows, b.cols
        )));
    }
    for j in 0..c.cols {
        for i in 0..c.rows {
            let mut acc = 0.0;
            for t in 0..a.cols {
                acc += m.vget(a, i, t) * m.vget(b, t, j);
            }
            let cur = m.vget(c, i, j);
            m.vset(c, i, j, cur - acc);
        }
    }
    Ok(())
}

/// `B := L^{-1} B` with `L` unit lower triangular (forward substitution,
/// column by column).
///
/// Only the strictly lower part of `l` is read; the stored diagonal and upper
/// part are ignored, so a packed factor matrix can be passed directly.
pub fn trsm_unit_lower(m: &mut DenseMatrix, l: View, b: View) -> Result<()> {
    check_fits(m, l, "L")?;
    check_fits(m, b, "B")?;
    if l.rows != l.cols {
        return Err(Error::Shape(format!("triangle is {}x{}", l.rows, l.cols)));
    }
    if b.rows != l.rows {
        return Err(Error::Shape(format!(
            "trsm_unit_lower: L {}x{}, B {}x{}",
            l.rows, l.cols, b.rows, b.cols
        )));
    }
    for j in 0..b.cols {
        for i in 0..b.rows {
            let mut acc = 0.0;
            for t in 0..i {
                acc += m.vget(l, i, t) * m.vget(b, t, j);
            }
            let cur = m.vget(b, i, j);
            m.vset(b, i, j, cur - acc);
        }
    }
    Ok(())
}

/// `B := B * U^{-1}` with `U` upper triangular (nonzero diagonal required).
///
/// A zero diagonal element yields [`Error::Singular`] carrying its index; the
/// matrix is left untouched from that column on.
pub fn trsm_upper_right(m: &mut DenseMatrix, b: View, u: View) -> Result<()> {
    check_fits(m, b, "B")?;
    check_fits(m, u, "U")?;
    if u.rows != u.cols {
        return Err(Error::Shape(format!("triangle is {}x{}", u.rows, u.cols)));
    }
    if b.cols != u.rows {
        return Err(Error::Shape(format!(
            "trsm_upper_right: B {}x{}, U {}x{}",
            b.rows, b.cols, u.rows, u.cols
        )));
    }
    for j in 0..u.cols {
        let d = m.vget(u, j, j);
        if d == 0.0 {
            return Err(Error::Singular { step: j });
        }
        for i in 0..b.rows {
            let mut acc = 0.0;
            for t in 0..j {
                acc += m.vget(b, i, t) * m.vget(u, t, j);
            }
            let cur = m.vget(b, i, j);
            m.vset(b, i, j, (cur - acc) / d);
        }
    }
    Ok(())
}

/// Vector form of [`trsm_unit_lower`]: solves `L y = x` in place.
pub fn forward_sub_unit(m: &DenseMatrix, l: View, x: &mut [f64]) -> Result<()> {
    check_fits(m, l, "L")?;
    if l.rows != l.cols || x.len() != l.rows {
        return Err(Error::Shape(format!(
            "forward_sub_unit: L {}x{}, x length {}",
            l.rows,
            l.cols,
            x.len()
        )));
    }
    for i in 0..x.len() {
        let mut acc = 0.0;
        for t in 0..i {
            acc += m.vget(l, i, t) * x[t];
        }
        x[i] -= acc;
    }
    Ok(())
}

/// Vector companion of the upper-triangular solve: solves `U x = b` in place
/// by back substitution. Reports a zero diagonal like [`trsm_upper_right`].
pub fn back_sub_upper(m: &DenseMatrix, u: View, x: &mut [f64]) -> Result<()> {
    check_fits(m, u, "U")?;
    if u.rows != u.cols || x.len() != u.rows {
        return Err(Error::Shape(format!(
            "back_sub_upper: U {}x{}, x length {}",
            u.rows,
            u.cols,
            x.len()
        )));
    }
    for i in (0..x.len()).rev() {
        let d = m.vget(u, i, i);
        if d == 0.0 {
            return Err(Error::Singular { step: i });
        }
        let mut acc = 0.0;
        for t in i + 1..x.len() {
            acc += m.vget(u, i, t) * x[t];
        }
        x[i] = (x[i] - acc) / d;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::max_abs_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = f64::EPSILON;

    fn random_matrix(seed: u64, rows: usize, cols: usize) -> DenseMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0))
    }

    // Independent reference: plain triple loop over extracted copies.
    fn oracle_gemm(c: &DenseMatrix, a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::from_fn(c.rows(), c.cols(), |i, j| {
            let mut s = c.get(i, j);
            for t in 0..a.cols() {
                s -= a.get(i, t) * b.get(t, j);
            }
            s
        })
    }

    #[test]
    fn gemm_rank1_by_hand() {
        // C = I2, A = (1;1), B = (1 1) -> C - A*B = [[0,-1],[-1,0]]
        let mut m = DenseMatrix::zeros(3, 4);
        m.set(0, 0, 1.0);
        m.set(1, 1, 1.0); // C in rows 0..2, cols 0..2
        m.set(0, 2, 1.0);
        m.set(1, 2, 1.0); // A in rows 0..2, col 2
        m.set(2, 0, 1.0);
        m.set(2, 1, 1.0); // B in row 2, cols 0..2
        let c = View::new(0, 0, 2, 2);
        let a = View::new(0, 2, 2, 1);
        let b = View::new(2, 0, 1, 2);
        gemm_update(&mut m, c, a, b).unwrap();
        assert_eq!(m.get(0, 0), 0.0);
        assert_eq!(m.get(0, 1), -1.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(1, 1), 0.0);
    }

    #[test]
    fn gemm_empty_inner_dimension() {
        let mut m = random_matrix(1, 4, 4);
        let before = m.clone();
        let c = View::new(0, 0, 4, 2);
        let a = View::new(0, 2, 4, 0);
        let b = View::new(0, 2, 0, 2);
        gemm_update(&mut m, c, a, b).unwrap();
        assert!(m.bitwise_eq(&before));
    }

    #[test]
    fn gemm_shape_mismatch() {
        let mut m = DenseMatrix::zeros(4, 8);
        let c = View::new(0, 0, 2, 2);
        let a = View::new(0, 2, 3, 2);
        let b = View::new(0, 4, 2, 2);
        assert!(matches!(gemm_update(&mut m, c, a, b), Err(Error::Shape(_))));
    }

    #[test]
    fn gemm_matches_triple_loop_oracle_all_shapes() {
        // Every m, with n and k sampled across 1..=16; tolerance 4*k*eps
        // relative to max magnitude.
        let mut seed = 10u64;
        for mm in 1..=16usize {
            for nn in (1..=16usize).step_by(3) {
                for kk in (0..=16usize).step_by(4) {
                    seed += 1;
                    let mut host = random_matrix(seed, mm + kk.max(1), nn + kk.max(1));
                    let c = View::new(0, 0, mm, nn);
                    let a = View::new(0, nn, mm, kk);
                    let b = View::new(mm, 0, kk, nn);
                    let want = oracle_gemm(&host.extract(c), &host.extract(a), &host.extract(b));
                    gemm_update(&mut host, c, a, b).unwrap();
                    let got = host.extract(c);
                    let scale = want.max_abs().max(1.0);
                    assert!(
                        max_abs_diff(&got, &want) <= 4.0 * kk.max(1) as f64 * EPS * scale,
                        "gemm differs from oracle for {mm}x{nn}x{kk}"
                    );
                }
            }
        }
    }

    #[test]
    fn gemm_complement_untouched() {
        let mut m = random_matrix(3, 8, 8);
        let before = m.clone();
        let c = View::new(4, 4, 4, 4);
        let a = View::new(4, 0, 4, 4);
        let b = View::new(0, 4, 4, 4);
        gemm_update(&mut m, c, a, b).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                if i >= 4 && j >= 4 {
                    continue;
                }
                assert_eq!(m.get(i, j).to_bits(), before.get(i, j).to_bits());
            }
        }
    }

    #[test]
    fn trsm_unit_lower_identity_leaves_b() {
        // Strict lower part of the triangle all zero means L = I.
        let mut host = random_matrix(4, 3, 6);
        for i in 0..3 {
            for t in 0..i {
                host.set(i, t, 0.0);
            }
        }
        let before = host.clone();
        trsm_unit_lower(&mut host, View::new(0, 0, 3, 3), View::new(0, 3, 3, 3)).unwrap();
        assert!(host.bitwise_eq(&before));
    }

    #[test]
    fn trsm_unit_lower_2x2_by_hand() {
        // L = [[1,0],[2,1]], B = (1;5) -> (1;3)
        let mut m = DenseMatrix::zeros(2, 3);
        m.set(1, 0, 2.0);
        m.set(0, 2, 1.0);
        m.set(1, 2, 5.0);
        trsm_unit_lower(&mut m, View::new(0, 0, 2, 2), View::new(0, 2, 2, 1)).unwrap();
        assert_eq!(m.get(0, 2), 1.0);
        assert_eq!(m.get(1, 2), 3.0);
    }

    #[test]
    fn trsm_unit_lower_residual() {
        // L * B_post - B_pre stays within the 8*n*eps budget on random
        // well-conditioned (unit lower) triangles.
        for (seed, n) in [(9u64, 8usize), (10, 5), (11, 12)] {
            let mut host = random_matrix(seed, n, 2 * n);
            let l = View::new(0, 0, n, n);
            let b = View::new(0, n, n, n);
            let b_pre = host.extract(b);
            let l_mat = host.extract(l);
            trsm_unit_lower(&mut host, l, b).unwrap();
            let b_post = host.extract(b);
            let mut worst: f64 = 0.0;
            for j in 0..n {
                for i in 0..n {
                    let mut s = b_post.get(i, j);
                    for t in 0..i {
                        s += l_mat.get(i, t) * b_post.get(t, j);
                    }
                    worst = worst.max((s - b_pre.get(i, j)).abs());
                }
            }
            assert!(
                worst <= 8.0 * n as f64 * EPS * b_pre.max_abs().max(1.0),
                "n = {n}"
            );
        }
    }

    #[test]
    fn trsm_upper_right_identity() {
        let mut host = DenseMatrix::zeros(2, 4);
        host.set(0, 2, 1.0);
        host.set(1, 3, 1.0);
        host.set(0, 0, 0.25);
        host.set(0, 1, -3.0);
        let before = host.clone();
        trsm_upper_right(&mut host, View::new(0, 0, 1, 2), View::new(0, 2, 2, 2)).unwrap();
        assert_eq!(host.get(0, 0), before.get(0, 0));
        assert_eq!(host.get(0, 1), before.get(0, 1));
    }

    #[test]
    fn trsm_upper_right_by_hand() {
        // U = [[2,1],[0,1]], B = (2 2) -> (1 1)
        let mut host = DenseMatrix::zeros(2, 4);
        host.set(0, 0, 2.0);
        host.set(0, 1, 2.0);
        host.set(0, 2, 2.0);
        host.set(0, 3, 1.0);
        host.set(1, 3, 1.0);
        trsm_upper_right(&mut host, View::new(0, 0, 1, 2), View::new(0, 2, 2, 2)).unwrap();
        assert_eq!(host.get(0, 0), 1.0);
        assert_eq!(host.get(0, 1), 1.0);
    }

    #[test]
    fn trsm_upper_right_zero_diagonal() {
        let mut host = DenseMatrix::zeros(2, 4);
        host.set(0, 2, 2.0); // U(0,0) = 2, U(1,1) left at 0
        host.set(0, 0, 1.0);
        host.set(0, 1, 1.0);
        let err =
            trsm_upper_right(&mut host, View::new(0, 0, 1, 2), View::new(0, 2, 2, 2)).unwrap_err();
        assert!(matches!(err, Error::Singular { step: 1 }));
    }

    #[test]
    fn vector_solves_round_trip_hand_built_lu() {
        // L = [[1,0],[2,1]], U = [[2,1],[0,1]], x = (1, 2); b = L*U*x.
        let mut host = DenseMatrix::zeros(2, 4);
        host.set(1, 0, 2.0); // L strict lower
        host.set(0, 2, 2.0);
        host.set(0, 3, 1.0);
        host.set(1, 3, 1.0); // U
        let l = View::new(0, 0, 2, 2);
        let u = View::new(0, 2, 2, 2);
        let x_true = [1.0, 2.0];
        // U*x = (4, 2); L*(4,2) = (4, 10)
        let mut x = [4.0, 10.0];
        forward_sub_unit(&host, l, &mut x).unwrap();
        assert_eq!(x, [4.0, 2.0]);
        back_sub_upper(&host, u, &mut x).unwrap();
        assert_eq!(x, x_true);
    }

    #[test]
    fn forward_sub_identity_triangle() {
        let host = DenseMatrix::zeros(3, 3);
        let mut x = [1.0, -2.0, 0.5];
        forward_sub_unit(&host, View::new(0, 0, 3, 3), &mut x).unwrap();
        assert_eq!(x, [1.0, -2.0, 0.5]);
    }

    #[test]
    fn forward_sub_2x2_by_hand() {
        let mut host = DenseMatrix::zeros(2, 2);
        host.set(1, 0, 2.0);
        let mut x = [1.0, 5.0];
        forward_sub_unit(&host, View::new(0, 0, 2, 2), &mut x).unwrap();
        assert_eq!(x, [1.0, 3.0]);
    }
}
