//! Drives the C ABI the way a foreign caller would: through raw pointers and
//! status codes only.

use std::ffi::CString;
use std::ptr;

use luvar_ffi::*;

fn make_matrix(rows: usize, cols: usize, col_major: &[f64]) -> *mut LuvarMatrix {
    let mut out: *mut LuvarMatrix = ptr::null_mut();
    let status = unsafe { luvar_matrix_from_data(rows, cols, col_major.as_ptr(), &mut out) };
    assert_eq!(status, LuvarStatus::Ok);
    assert!(!out.is_null());
    out
}

#[test]
fn factor_solve_and_check_through_the_abi() {
    unsafe {
        // A = [[4,3],[6,3]] column-major.
        let a = make_matrix(2, 2, &[4.0, 6.0, 3.0, 3.0]);
        assert_eq!(luvar_matrix_rows(a), 2);
        assert_eq!(luvar_matrix_cols(a), 2);

        let mut lu: *mut LuvarPackedLu = ptr::null_mut();
        let mut step = usize::MAX;
        let status = luvar_lu_piv(a, LuvarPivVariant::Piv5, 0, &mut lu, &mut step);
        assert_eq!(status, LuvarStatus::Ok);

        let mut pivot0 = 0usize;
        assert_eq!(luvar_packed_pivot_get(lu, 0, &mut pivot0), LuvarStatus::Ok);
        assert_eq!(pivot0, 1);
        let mut f00 = 0.0;
        assert_eq!(luvar_packed_factor_get(lu, 0, 0, &mut f00), LuvarStatus::Ok);
        assert_eq!(f00, 6.0);

        let b = [7.0, 9.0];
        let mut x = [0.0, 0.0];
        assert_eq!(
            luvar_solve(lu, b.as_ptr(), 2, x.as_mut_ptr()),
            LuvarStatus::Ok
        );
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);

        let mut residual = f64::NAN;
        let mut mult = f64::NAN;
        let mut passed = false;
        assert_eq!(
            luvar_check_postcondition(lu, a, -1.0, &mut residual, &mut mult, &mut passed),
            LuvarStatus::Ok
        );
        assert!(passed, "residual {residual}, multiplier {mult}");
        assert!(mult <= 1.0 + 4.0 * f64::EPSILON);

        let mut be = LuvarBackwardError {
            componentwise_c: f64::NAN,
            normwise_residual: f64::NAN,
            growth_factor: f64::NAN,
            epsilon: 0.0,
        };
        assert_eq!(luvar_backward_error(lu, a, &mut be), LuvarStatus::Ok);
        assert!(be.componentwise_c.is_finite());

        luvar_packed_free(lu);
        luvar_matrix_free(a);
    }
}

#[test]
fn rank_deficiency_reports_step_through_the_abi() {
    unsafe {
        let mut a: *mut LuvarMatrix = ptr::null_mut();
        assert_eq!(luvar_gen_rankdef(9, 6, 6, 2, &mut a), LuvarStatus::Ok);
        let mut lu: *mut LuvarPackedLu = ptr::null_mut();
        let mut step = usize::MAX;
        let status = luvar_lu_piv(a, LuvarPivVariant::Piv3a, 2, &mut lu, &mut step);
        assert_eq!(status, LuvarStatus::RankDeficientError);
        assert_eq!(step, 2);
        assert!(lu.is_null());
        luvar_matrix_free(a);
    }
}

#[test]
fn nopiv_in_place_and_growth() {
    unsafe {
        let mut g: *mut LuvarMatrix = ptr::null_mut();
        assert_eq!(luvar_gen_growth(4, 4, &mut g), LuvarStatus::Ok);

        let mut growth = 0.0;
        assert_eq!(
            luvar_growth_piv(g, LuvarPivVariant::Piv5, 0, &mut growth),
            LuvarStatus::Ok
        );
        assert_eq!(growth, 8.0);

        // In-place no-pivot factorization of the same matrix succeeds (its
        // diagonal stays nonzero).
        assert_eq!(
            luvar_lu_nopiv(g, LuvarNopivVariant::Nopiv5, ptr::null_mut()),
            LuvarStatus::Ok
        );
        luvar_matrix_free(g);
    }
}

#[test]
fn file_round_trip_through_the_abi() {
    unsafe {
        let dir = std::env::temp_dir().join(format!("luvar-ffi-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = CString::new(dir.join("m.txt").to_str().unwrap()).unwrap();

        let mut a: *mut LuvarMatrix = ptr::null_mut();
        assert_eq!(luvar_gen_random(3, 4, 4, &mut a), LuvarStatus::Ok);
        assert_eq!(luvar_matrix_write_file(a, path.as_ptr()), LuvarStatus::Ok);

        let mut back: *mut LuvarMatrix = ptr::null_mut();
        assert_eq!(
            luvar_matrix_read_file(path.as_ptr(), &mut back),
            LuvarStatus::Ok
        );
        for i in 0..4 {
            for j in 0..4 {
                let (mut x, mut y) = (0.0, 0.0);
                assert_eq!(luvar_matrix_get(a, i, j, &mut x), LuvarStatus::Ok);
                assert_eq!(luvar_matrix_get(back, i, j, &mut y), LuvarStatus::Ok);
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }

        // Packed file round trip.
        let lu_path = CString::new(dir.join("m.lu").to_str().unwrap()).unwrap();
        let mut lu: *mut LuvarPackedLu = ptr::null_mut();
        assert_eq!(
            luvar_lu_piv(a, LuvarPivVariant::Piv4, 2, &mut lu, ptr::null_mut()),
            LuvarStatus::Ok
        );
        assert_eq!(
            luvar_packed_write_file(lu, lu_path.as_ptr()),
            LuvarStatus::Ok
        );
        let mut lu2: *mut LuvarPackedLu = ptr::null_mut();
        assert_eq!(
            luvar_packed_read_file(lu_path.as_ptr(), &mut lu2),
            LuvarStatus::Ok
        );
        assert_eq!(luvar_packed_rows(lu2), 4);
        assert_eq!(luvar_packed_cols(lu2), 4);

        luvar_packed_free(lu);
        luvar_packed_free(lu2);
        luvar_matrix_free(a);
        luvar_matrix_free(back);
        std::fs::remove_dir_all(&dir).ok();
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        assert_eq!(luvar_matrix_rows(ptr::null()), 0);
        let mut out = 0.0;
        assert_eq!(
            luvar_matrix_get(ptr::null(), 0, 0, &mut out),
            LuvarStatus::NullPointer
        );
        assert_eq!(
            luvar_lu_nopiv(ptr::null_mut(), LuvarNopivVariant::Nopiv1, ptr::null_mut()),
            LuvarStatus::NullPointer
        );
        let msg = luvar_status_message(LuvarStatus::RankDeficientError);
        assert!(!msg.is_null());
    }
}

#[test]
fn oob_indices_are_bounds_errors() {
    unsafe {
        let a = make_matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let mut v = 0.0;
        assert_eq!(luvar_matrix_get(a, 2, 0, &mut v), LuvarStatus::BoundsError);
        assert_eq!(luvar_matrix_set(a, 0, 5, 1.0), LuvarStatus::BoundsError);
        luvar_matrix_free(a);
    }
}
