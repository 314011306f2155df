use std::ffi::CStr;
use std::ptr;

use cwvo_ffi::*;

#[test]
fn solve_evaluate_and_free() {
    unsafe {
        let mut sol = ptr::null_mut();
        assert_eq!(cwvo_solve_example(4, 1, 4, &mut sol), CwvoStatus::Ok);
        assert!(!sol.is_null());

        let mut u = 0.0;
        assert_eq!(cwvo_solution_eval(sol, 0.25, 0.5, &mut u), CwvoStatus::Ok);
        let exact = 0.5f64.powi(3) * 0.5f64.powi(3);
        assert!((u - exact).abs() < 1e-9);

        let mut size = 0;
        assert_eq!(cwvo_solution_size(sol, &mut size), CwvoStatus::Ok);
        assert_eq!(size, 8);
        let mut coeffs = vec![0.0; size * size];
        assert_eq!(
            cwvo_solution_coefficients(sol, coeffs.as_mut_ptr(), coeffs.len()),
            CwvoStatus::Ok
        );
        assert!(coeffs.iter().any(|c| *c != 0.0));
        assert_eq!(
            cwvo_solution_coefficients(sol, coeffs.as_mut_ptr(), 3),
            CwvoStatus::BufferTooSmall
        );

        let (mut cond, mut res) = (0.0, 0.0);
        assert_eq!(cwvo_solution_diagnostics(sol, &mut cond, &mut res), CwvoStatus::Ok);
        assert!(cond.is_finite() && cond > 1.0);

        assert_eq!(cwvo_solution_eval(sol, 2.0, 0.5, &mut u), CwvoStatus::Domain);
        let msg = CStr::from_ptr(cwvo_last_error()).to_str().unwrap();
        assert!(msg.contains("x"), "{msg}");
        cwvo_solution_free(sol);
        cwvo_solution_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut sol = ptr::null_mut();
        assert_eq!(cwvo_solve_example(9, 0, 4, &mut sol), CwvoStatus::InvalidArgument);
        assert!(sol.is_null());
        assert_eq!(cwvo_solve_example(1, 0, 4, ptr::null_mut()), CwvoStatus::NullPointer);
        let mut g = 0.0;
        assert_eq!(cwvo_gamma(-1.0, &mut g), CwvoStatus::Domain);
        assert_eq!(cwvo_gamma(5.0, &mut g), CwvoStatus::Ok);
        assert_eq!(g, 24.0);
        let msg = CStr::from_ptr(cwvo_status_message(CwvoStatus::SingularSystem));
        assert_eq!(msg.to_str().unwrap(), "singular collocation system");
    }
}

#[test]
fn matrices_through_the_c_abi() {
    unsafe {
        let mut dim = 0;
        assert_eq!(
            cwvo_operational_matrix(
                CwvoMatrixKind::WaveletOrder,
                1,
                3,
                0.5,
                0.5,
                ptr::null_mut(),
                0,
                &mut dim
            ),
            CwvoStatus::Ok
        );
        assert_eq!(dim, 6);
        let mut q = vec![0.0; dim * dim];
        assert_eq!(
            cwvo_operational_matrix(
                CwvoMatrixKind::WaveletOrder,
                1,
                3,
                0.5,
                0.5,
                q.as_mut_ptr(),
                q.len(),
                &mut dim
            ),
            CwvoStatus::Ok
        );
        // Block A, row 2, column 1: t^{-ϑ} √2 / Γ(2 - ϑ).
        let want = 0.5f64.powf(-0.5) * 2f64.sqrt() / cwvo::gamma(1.5).unwrap();
        assert!((q[6] - want).abs() < 1e-12);

        let mut d = vec![0.0; 1];
        assert_eq!(
            cwvo_operational_matrix(CwvoMatrixKind::Derivative, 0, 1, 0.5, 1.0, d.as_mut_ptr(), 1, &mut dim),
            CwvoStatus::Ok
        );
        assert_eq!(d[0], 0.0);
        assert_eq!(
            cwvo_operational_matrix(
                CwvoMatrixKind::MonomialOrder,
                0,
                3,
                0.5,
                0.0,
                d.as_mut_ptr(),
                9,
                &mut dim
            ),
            CwvoStatus::Domain
        );
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cwvo.h")).unwrap();
    for sym in [
        "cwvo_solve_example",
        "cwvo_solution_free",
        "CwvoSolution",
        "CWVO_STATUS_SINGULAR_SYSTEM",
    ] {
        assert!(header.contains(sym), "missing {sym}");
    }
}
