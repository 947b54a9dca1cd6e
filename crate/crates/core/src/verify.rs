//! Runtime verification: postcondition checks, per-iteration loop-invariant
//! checks for all nine variants, componentwise backward error, and element
//! growth.
//!
//! Each no-pivot invariant describes, for a boundary `k`, which quadrants of
//! the working matrix hold factored data, which hold partially updated data,
//! and which are still bitwise pristine. The pivoted invariants say the same
//! thing relative to `B = P(p_T) Ahat`, the original matrix with the pivots
//! found so far applied; using `B` removes the unknown future pivots from
//! every conjunct. Residual conjuncts are measured max-elementwise and
//! compared against a tolerance; "untouched region" conjuncts must hold
//! bitwise.
//!
//! The checks recompute everything from scratch on each call. They share no
//! state with the factorizations they judge.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{max_abs_diff, DenseMatrix, View};
use crate::nopiv::{lu_nopiv, NopivVariant};
use crate::piv::{lu_piv, Mode, PackedLu, PivVariant};
use crate::pivot::PivotVector;
use crate::variant::VariantId;

/// Allowed multiplier magnitude: one, plus rounding slack.
pub const MULTIPLIER_BOUND: f64 = 1.0 + 4.0 * f64::EPSILON;

/// The default residual tolerance `50 * n * eps * maxabs(Ahat)`.
pub fn default_tolerance(a_hat: &DenseMatrix) -> f64 {
    50.0 * a_hat.cols() as f64 * f64::EPSILON * a_hat.max_abs()
}

/// Outcome of one invariant or postcondition check.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    /// Variant the checked state belongs to; `None` for a bare postcondition
    /// check, where the factors do not say which algorithm made them.
    pub variant: Option<VariantId>,
    pub iteration: usize,
    /// Residual conjuncts: name -> max elementwise residual.
    pub conjunct_residuals: BTreeMap<&'static str, f64>,
    /// Bitwise conjuncts: name -> held exactly.
    pub exact_conjuncts_ok: BTreeMap<&'static str, bool>,
    /// Largest multiplier magnitude, when the invariant bounds multipliers.
    pub multiplier_bound: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl InvariantReport {
    fn recompute_passed(&mut self) {
        let residuals_ok = self
            .conjunct_residuals
            .values()
            .all(|&r| r <= self.tolerance);
        let exact_ok = self.exact_conjuncts_ok.values().all(|&b| b);
        let mult_ok = self.multiplier_bound.is_none_or(|b| b <= MULTIPLIER_BOUND);
        self.passed = residuals_ok && exact_ok && mult_ok;
    }

    fn finish(mut self) -> Self {
        self.recompute_passed();
        self
    }

    fn new(variant: Option<VariantId>, iteration: usize, tolerance: f64) -> Self {
        InvariantReport {
            variant,
            iteration,
            conjunct_residuals: BTreeMap::new(),
            exact_conjuncts_ok: BTreeMap::new(),
            multiplier_bound: None,
            tolerance,
            passed: false,
        }
    }
}

/// Flat `key=value` serialization, one conjunct per line.
impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            Some(v) => writeln!(f, "variant={v}")?,
            None => writeln!(f, "variant=postcondition")?,
        }
        writeln!(f, "iteration={}", self.iteration)?;
        writeln!(f, "tolerance={}", self.tolerance)?;
        for (name, r) in &self.conjunct_residuals {
            writeln!(f, "residual.{name}={r}")?;
        }
        for (name, ok) in &self.exact_conjuncts_ok {
            writeln!(f, "exact.{name}={ok}")?;
        }
        if let Some(b) = self.multiplier_bound {
            writeln!(f, "multiplier_bound={b}")?;
        }
        write!(f, "passed={}", self.passed)
    }
}

/// Measured backward-error quantities for a completed factorization.
#[derive(Clone, Copy, Debug)]
pub struct BackwardErrorReport {
    /// Largest `|LU - P(p)Ahat|` cell divided by `eps * (|L||U| + |P(p)Ahat|)`
    /// in that cell; infinite when a zero denominator meets a nonzero
    /// numerator.
    pub componentwise_c: f64,
    /// `max |P(p)Ahat - LU|`.
    pub normwise_residual: f64,
    /// Largest factor magnitude over the largest input magnitude (growth as
    /// visible in the stored factors; see [`growth_factor`] for the
    /// trajectory measurement).
    pub growth_factor: f64,
    /// Machine epsilon used in the denominators.
    pub epsilon: f64,
}

impl fmt::Display for BackwardErrorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "componentwise_c={}", self.componentwise_c)?;
        writeln!(f, "normwise_residual={}", self.normwise_residual)?;
        writeln!(f, "growth_factor={}", self.growth_factor)?;
        write!(f, "epsilon={}", self.epsilon)
    }
}

fn check_same_shape(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Unit-lower-trapezoidal copy of a packed block: strict lower kept, diagonal
/// set to one, upper zeroed.
fn unit_lower_of(m: &DenseMatrix, v: View) -> DenseMatrix {
    DenseMatrix::from_fn(v.rows, v.cols, |i, j| {
        if i == j {
            1.0
        } else if i > j {
            m.vget(v, i, j)
        } else {
            0.0
        }
    })
}

/// Upper-triangular copy of a packed block.
fn upper_of(m: &DenseMatrix, v: View) -> DenseMatrix {
    DenseMatrix::from_fn(
        v.rows,
        v.cols,
        |i, j| if i <= j { m.vget(v, i, j) } else { 0.0 },
    )
}

fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.cols(), b.rows());
    DenseMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut s = 0.0;
        for t in 0..a.cols() {
            s += a.get(i, t) * b.get(t, j);
        }
        s
    })
}

fn block_bitwise_eq(a: &DenseMatrix, va: View, b: &DenseMatrix, vb: View) -> bool {
    debug_assert_eq!((va.rows, va.cols), (vb.rows, vb.cols));
    for j in 0..va.cols {
        for i in 0..va.rows {
            if a.vget(va, i, j).to_bits() != b.vget(vb, i, j).to_bits() {
                return false;
            }
        }
    }
    true
}

fn strict_lower_max(m: &DenseMatrix, v: View) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..v.cols {
        for i in j + 1..v.rows {
            worst = worst.max(m.vget(v, i, j).abs());
        }
    }
    worst
}

fn block_abs_max(m: &DenseMatrix, v: View) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..v.cols {
        for i in 0..v.rows {
            worst = worst.max(m.vget(v, i, j).abs());
        }
    }
    worst
}

/// Checks the completed-factorization contract: permuting the original rows
/// by the pivots reproduces `L * U` within `tol`, and no multiplier exceeds
/// one (plus rounding slack).
pub fn check_postcondition(
    lu: &PackedLu,
    a_hat: &DenseMatrix,
    tol: f64,
) -> Result<InvariantReport> {
    check_same_shape(lu.factors(), a_hat)?;
    let mut permuted = a_hat.clone();
    let v = permuted.full_view();
    lu.pivots().apply_forward(&mut permuted, v)?;
    let residual = max_abs_diff(&lu.reconstruct(), &permuted);

    let mut report = InvariantReport::new(None, lu.cols(), tol);
    report.conjunct_residuals.insert("reconstruction", residual);
    report.multiplier_bound = Some(lu.max_multiplier());
    Ok(report.finish())
}

/// Checks no-pivot invariant `1..=5` at boundary `k` against the pristine
/// input. The working matrix and the original must be square and same-sized.
pub fn check_nopiv_invariant(
    invariant: NopivVariant,
    k: usize,
    a_cur: &DenseMatrix,
    a_hat: &DenseMatrix,
    tol: f64,
) -> Result<InvariantReport> {
    check_same_shape(a_cur, a_hat)?;
    if a_cur.rows() != a_cur.cols() {
        return Err(Error::Shape("invariant check needs a square matrix".into()));
    }
    let n = a_cur.rows();
    if k > n {
        return Err(Error::Bounds(format!("boundary {k} beyond size {n}")));
    }
    let (tl, tr, bl, br) = a_cur.full_view().split_2x2(k, k)?;
    let (htl, htr, hbl, hbr) = a_hat.full_view().split_2x2(k, k)?;

    let l_tl = unit_lower_of(a_cur, tl);
    let u_tl = upper_of(a_cur, tl);

    let mut report = InvariantReport::new(Some(VariantId::Nopiv(invariant)), k, tol);

    // TL always holds L\U with Ahat_TL = L_TL U_TL.
    report.conjunct_residuals.insert(
        "tl",
        max_abs_diff(&matmul(&l_tl, &u_tl), &a_hat.extract(htl)),
    );

    let tr_current = matches!(
        invariant,
        NopivVariant::V2 | NopivVariant::V4 | NopivVariant::V5
    );
    let bl_current = matches!(
        invariant,
        NopivVariant::V3 | NopivVariant::V4 | NopivVariant::V5
    );

    if tr_current {
        // Ahat_TR = L_TL U_TR with U_TR stored in TR.
        let u_tr = a_cur.extract(tr);
        report.conjunct_residuals.insert(
            "tr",
            max_abs_diff(&matmul(&l_tl, &u_tr), &a_hat.extract(htr)),
        );
    } else {
        report
            .exact_conjuncts_ok
            .insert("tr_pristine", block_bitwise_eq(a_cur, tr, a_hat, htr));
    }

    if bl_current {
        // Ahat_BL = L_BL U_TL with L_BL stored in BL.
        let l_bl = a_cur.extract(bl);
        report.conjunct_residuals.insert(
            "bl",
            max_abs_diff(&matmul(&l_bl, &u_tl), &a_hat.extract(hbl)),
        );
    } else {
        report
            .exact_conjuncts_ok
            .insert("bl_pristine", block_bitwise_eq(a_cur, bl, a_hat, hbl));
    }

    match invariant {
        NopivVariant::V5 => {
            // BR holds the Schur complement Ahat_BR - L_BL U_TR.
            let schur_expect = {
                let l_bl = a_cur.extract(bl);
                let u_tr = a_cur.extract(tr);
                let prod = matmul(&l_bl, &u_tr);
                DenseMatrix::from_fn(br.rows, br.cols, |i, j| {
                    a_hat.vget(hbr, i, j) - prod.get(i, j)
                })
            };
            report
                .conjunct_residuals
                .insert("br", max_abs_diff(&schur_expect, &a_cur.extract(br)));
        }
        _ => {
            report
                .exact_conjuncts_ok
                .insert("br_pristine", block_bitwise_eq(a_cur, br, a_hat, hbr));
        }
    }

    Ok(report.finish())
}

/// Checks pivoted invariant `3a`, `3b`, `4`, or `5` at boundary `k`.
///
/// `p_t` must hold exactly the `k` pivots found so far; the conjuncts are
/// stated against `B = P(p_t) Ahat`.
pub fn check_piv_invariant(
    invariant: PivVariant,
    k: usize,
    a_cur: &DenseMatrix,
    p_t: &PivotVector,
    a_hat: &DenseMatrix,
    tol: f64,
) -> Result<InvariantReport> {
    check_same_shape(a_cur, a_hat)?;
    let (m, n) = (a_cur.rows(), a_cur.cols());
    if n > m {
        return Err(Error::Shape("invariant check needs cols <= rows".into()));
    }
    if k > n {
        return Err(Error::Bounds(format!("boundary {k} beyond size {n}")));
    }
    if p_t.len() != k || p_t.target_rows() != m {
        return Err(Error::Bounds(format!(
            "pivot prefix has {} entries over {} rows, expected {k} over {m}",
            p_t.len(),
            p_t.target_rows()
        )));
    }

    // The pivots so far applied to the pristine original: every conjunct is
    // stated against this, which removes the unknown future pivots.
    let mut b = a_hat.clone();
    let bv = b.full_view();
    p_t.apply_forward(&mut b, bv)?;

    let (tl, tr, bl, br) = a_cur.full_view().split_2x2(k, k)?;
    let (btl, btr, bbl, bbr) = b.full_view().split_2x2(k, k)?;
    let (_, htr, _, hbr) = a_hat.full_view().split_2x2(k, k)?;

    let l_tl = unit_lower_of(a_cur, tl);
    let u_tl = upper_of(a_cur, tl);

    let mut report = InvariantReport::new(Some(VariantId::Piv(invariant, Mode::Unblocked)), k, tol);

    // B_TL = L_TL U_TL.
    report
        .conjunct_residuals
        .insert("tl", max_abs_diff(&matmul(&l_tl, &u_tl), &b.extract(btl)));
    // B_BL = A_BL U_TL: BL stores the multipliers with future swaps pending.
    let a_bl = a_cur.extract(bl);
    report
        .conjunct_residuals
        .insert("bl", max_abs_diff(&matmul(&a_bl, &u_tl), &b.extract(bbl)));

    match invariant {
        PivVariant::V3a => {
            // Right side pristine: not even swapped.
            report
                .exact_conjuncts_ok
                .insert("tr_pristine", block_bitwise_eq(a_cur, tr, a_hat, htr));
            report
                .exact_conjuncts_ok
                .insert("br_pristine", block_bitwise_eq(a_cur, br, a_hat, hbr));
        }
        PivVariant::V3b => {
            // Right side swapped along, no arithmetic.
            report
                .exact_conjuncts_ok
                .insert("tr_swapped", block_bitwise_eq(a_cur, tr, &b, btr));
            report
                .exact_conjuncts_ok
                .insert("br_swapped", block_bitwise_eq(a_cur, br, &b, bbr));
        }
        PivVariant::V4 => {
            // TR holds U_TR: B_TR = L_TL U_TR. BR swapped only.
            let u_tr = a_cur.extract(tr);
            report
                .conjunct_residuals
                .insert("tr", max_abs_diff(&matmul(&l_tl, &u_tr), &b.extract(btr)));
            report
                .exact_conjuncts_ok
                .insert("br_swapped", block_bitwise_eq(a_cur, br, &b, bbr));
        }
        PivVariant::V5 => {
            // TR holds U_TR and BR the trailing Schur complement
            // B_BR - A_BL U_TR.
            let u_tr = a_cur.extract(tr);
            report
                .conjunct_residuals
                .insert("tr", max_abs_diff(&matmul(&l_tl, &u_tr), &b.extract(btr)));
            let prod = matmul(&a_bl, &u_tr);
            let schur_expect =
                DenseMatrix::from_fn(br.rows, br.cols, |i, j| b.vget(bbr, i, j) - prod.get(i, j));
            report
                .conjunct_residuals
                .insert("br", max_abs_diff(&schur_expect, &a_cur.extract(br)));
        }
    }

    // Multipliers live in the strict lower part of TL and all of BL.
    report.multiplier_bound = Some(strict_lower_max(a_cur, tl).max(block_abs_max(a_cur, bl)));

    Ok(report.finish())
}

/// Componentwise backward error of a completed factorization.
pub fn backward_error(lu: &PackedLu, a_hat: &DenseMatrix) -> Result<BackwardErrorReport> {
    check_same_shape(lu.factors(), a_hat)?;
    let eps = f64::EPSILON;
    let (m, n) = (lu.rows(), lu.cols());

    let mut permuted = a_hat.clone();
    let v = permuted.full_view();
    lu.pivots().apply_forward(&mut permuted, v)?;

    let product = lu.reconstruct();

    // |L| |U| from the packed factors.
    let f = lu.factors();
    let labs = DenseMatrix::from_fn(m, n, |i, j| {
        if i == j {
            1.0
        } else if i > j {
            f.get(i, j).abs()
        } else {
            0.0
        }
    });
    let uabs = DenseMatrix::from_fn(n, n, |i, j| if i <= j { f.get(i, j).abs() } else { 0.0 });
    let prod_abs = matmul(&labs, &uabs);

    let mut c: f64 = 0.0;
    let mut residual: f64 = 0.0;
    for j in 0..n {
        for i in 0..m {
            let delta = (product.get(i, j) - permuted.get(i, j)).abs();
            residual = residual.max(delta);
            let denom = eps * (prod_abs.get(i, j) + permuted.get(i, j).abs());
            if denom == 0.0 {
                if delta != 0.0 {
                    c = f64::INFINITY;
                }
            } else {
                c = c.max(delta / denom);
            }
        }
    }

    let in_max = a_hat.max_abs();
    let growth = if in_max == 0.0 {
        0.0
    } else {
        lu.factors().max_abs() / in_max
    };

    Ok(BackwardErrorReport {
        componentwise_c: c,
        normwise_residual: residual,
        growth_factor: growth,
        epsilon: eps,
    })
}

/// Runs `variant` on a copy of `a_hat`, tracking the largest element
/// magnitude over all observed intermediate states and the final factors;
/// returns that maximum divided by the largest input magnitude.
pub fn growth_factor(a_hat: &DenseMatrix, variant: VariantId) -> Result<f64> {
    let mut work = a_hat.clone();
    let mut peak: f64 = a_hat.max_abs();
    match variant {
        VariantId::Nopiv(v) => {
            let mut obs = |_k: usize, cur: &DenseMatrix| {
                peak = peak.max(cur.max_abs());
            };
            lu_nopiv(&mut work, v, Some(&mut obs))?;
        }
        VariantId::Piv(v, mode) => {
            let mut obs = |_k: usize, cur: &DenseMatrix, _p: &[usize]| {
                peak = peak.max(cur.max_abs());
            };
            lu_piv(&mut work, v, mode, Some(&mut obs))?;
        }
    }
    peak = peak.max(work.max_abs());
    let in_max = a_hat.max_abs();
    if in_max == 0.0 {
        return Err(Error::Domain("growth factor of a zero matrix".into()));
    }
    Ok(peak / in_max)
}

/// Factors a copy of `a_hat` with the observer wired to the matching
/// invariant check, then checks the boundary `k = n` state and the
/// postcondition. Returns one report per checked boundary plus the final
/// postcondition report.
pub fn run_nopiv_checked(
    a_hat: &DenseMatrix,
    variant: NopivVariant,
    invariant: NopivVariant,
    tol: f64,
) -> Result<Vec<InvariantReport>> {
    let mut reports = Vec::new();
    let mut failure: Option<Error> = None;
    let mut work = a_hat.clone();
    {
        let mut obs = |k: usize, cur: &DenseMatrix| {
            if failure.is_none() {
                match check_nopiv_invariant(invariant, k, cur, a_hat, tol) {
                    Ok(r) => reports.push(r),
                    Err(e) => failure = Some(e),
                }
            }
        };
        lu_nopiv(&mut work, variant, Some(&mut obs))?;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let n = a_hat.cols();
    reports.push(check_nopiv_invariant(invariant, n, &work, a_hat, tol)?);
    let lu = PackedLu::from_parts(work, PivotVector::identity(n, n)?)?;
    let mut post = check_postcondition(&lu, a_hat, tol)?;
    post.variant = Some(VariantId::Nopiv(variant));
    // No-pivot factorization claims nothing about multiplier magnitudes.
    post.multiplier_bound = None;
    post.recompute_passed();
    reports.push(post);
    Ok(reports)
}

/// Pivoted counterpart of [`run_nopiv_checked`]. Blocked modes are checked at
/// panel boundaries (where their invariant is restored).
pub fn run_piv_checked(
    a_hat: &DenseMatrix,
    variant: PivVariant,
    mode: Mode,
    invariant: PivVariant,
    tol: f64,
) -> Result<Vec<InvariantReport>> {
    let m = a_hat.rows();
    let mut reports = Vec::new();
    let mut failure: Option<Error> = None;
    let mut work = a_hat.clone();
    let pivots = {
        let mut obs = |k: usize, cur: &DenseMatrix, p: &[usize]| {
            if failure.is_none() {
                let check = PivotVector::new(p.to_vec(), m)
                    .and_then(|p_t| check_piv_invariant(invariant, k, cur, &p_t, a_hat, tol));
                match check {
                    Ok(r) => reports.push(r),
                    Err(e) => failure = Some(e),
                }
            }
        };
        lu_piv(&mut work, variant, mode, Some(&mut obs))?
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let n = a_hat.cols();
    reports.push(check_piv_invariant(
        invariant, n, &work, &pivots, a_hat, tol,
    )?);
    let lu = PackedLu::from_parts(work, pivots)?;
    let mut post = check_postcondition(&lu, a_hat, tol)?;
    post.variant = Some(VariantId::Piv(variant, mode));
    reports.push(post);
    Ok(reports)
}
