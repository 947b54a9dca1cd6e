//! Matrix generators for tests and the CLI.
//!
//! The structured kinds are built so that floating-point elimination hits the
//! degeneracy exactly, not just approximately: a singular leading block or a
//! dependent column is arranged as exact zeros in positions the elimination
//! can only fill with products of exact zeros. That makes "errors at step k"
//! a bitwise guarantee for every variant, whatever its update order.

use rand::distributions::Uniform;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Reproducible i.i.d. uniform `[-1, 1]` matrix, filled column by column.
pub fn random(seed: u64, m: usize, n: usize) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-1.0, 1.0);
    DenseMatrix::from_fn(m, n, |_, _| rng.sample(dist))
}

/// Random square matrix made strictly diagonally dominant, rescaled into
/// `[-1, 1]`. Elimination without pivoting is stable on these, so they are
/// the inputs of choice for exercising the no-pivot variants at tight
/// tolerances.
pub fn random_dominant(seed: u64, n: usize) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-1.0, 1.0);
    let scale = 1.0 / (n as f64 + 1.0);
    DenseMatrix::from_fn(n, n, |i, j| {
        let r: f64 = rng.sample(dist);
        if i == j {
            (r.signum() * n as f64 + r) * scale
        } else {
            r * scale
        }
    })
}

fn check_k(k: usize, m: usize, n: usize) -> Result<()> {
    if k == 0 || k >= m.min(n) {
        Err(Error::Domain(format!(
            "structured kind needs 0 < k < min(m, n) = {}, got {k}",
            m.min(n)
        )))
    } else {
        Ok(())
    }
}

/// Random matrix whose leading `k x k` block is exactly singular.
///
/// Row `k-1` of the leading `k` columns is zeroed, so every multiplier that
/// elimination computes for that row is an exact zero and the updated
/// diagonal element at step `k-1` comes out bitwise zero. No-pivot
/// factorization therefore fails at step `k-1` in every variant.
pub fn singular_minor(seed: u64, m: usize, n: usize, k: usize) -> Result<DenseMatrix> {
    check_k(k, m, n)?;
    let mut a = random(seed, m, n);
    for j in 0..k {
        a.set(k - 1, j, 0.0);
    }
    Ok(a)
}

/// The classic element-growth matrix: unit diagonal, `-1` strictly below,
/// last column all ones. Partial pivoting never swaps (ties resolve to the
/// diagonal) and the last column doubles every step, reaching `2^(n-1)`.
pub fn growth(m: usize, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(m, n, |i, j| {
        if j + 1 == n || i == j {
            1.0
        } else if i > j {
            -1.0
        } else {
            0.0
        }
    })
}

/// Random matrix whose column `k` is an exact linear combination of columns
/// `0..k`.
///
/// Columns `0..=k` are supported on rows `0..k` only (zeros below), so the
/// first `k` columns span exactly the vectors living on those rows and column
/// `k` lies in that span. All multipliers for rows `k..m` are exact zeros
/// during the first `k` elimination steps, every update to those rows
/// subtracts a product with an exact zero, and the pivot search at step `k`
/// finds a bitwise-zero column: pivoted factorization fails at step `k`
/// exactly, in every variant and mode.
pub fn rankdef(seed: u64, m: usize, n: usize, k: usize) -> Result<DenseMatrix> {
    check_k(k, m, n)?;
    let mut a = random(seed, m, n);
    for j in 0..=k {
        for i in k..m {
            a.set(i, j, 0.0);
        }
    }
    Ok(a)
}
