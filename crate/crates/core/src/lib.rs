#![allow(clippy::needless_range_loop)]

//! Dense LU factorization as a family of algorithms: five unblocked no-pivot
//! variants and four partial-pivoting variants in both unblocked and blocked
//! form, all built on the same handful of kernels, together with the pivot
//! algebra they rely on and a verification harness that checks each variant's
//! loop invariant at runtime and measures backward error and element growth.

pub mod error;
pub mod generate;
pub mod io;
pub mod kernels;
pub mod matrix;
pub mod nopiv;
pub mod piv;
pub mod pivot;
pub mod reference;
pub mod variant;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, View};
pub use nopiv::{lu_nopiv, NopivVariant};
pub use piv::{factor_piv, lu_piv, solve, Mode, PackedLu, PivVariant};
pub use pivot::{imax, PivotVector};
pub use variant::VariantId;
