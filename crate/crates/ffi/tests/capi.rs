//! Exercise the C ABI exactly as a foreign caller would: through raw
//! pointers and status codes.

use isonlcs_ffi::*;

#[test]
fn basis_lifecycle_and_validation() {
    let basis = isonlcs_basis_new(64);
    assert!(!basis.is_null());
    unsafe {
        assert_eq!(isonlcs_basis_dim(basis), 65);
        isonlcs_basis_free(basis);
    }
    // invalid size reports by returning null
    assert!(isonlcs_basis_new(4).is_null());
    unsafe {
        isonlcs_basis_free(std::ptr::null_mut());
    }
}

#[test]
fn canonical_state_statistics_roundtrip() {
    unsafe {
        let basis = isonlcs_basis_new(100);
        let ops = isonlcs_witness_ops_new(basis);
        assert!(!ops.is_null());

        let mut state = std::ptr::null_mut();
        let status = isonlcs_state_canonical(basis, 2.0, 0.0, &mut state);
        assert_eq!(status, IsonlcsStatus::Ok);

        let len = isonlcs_state_len(state);
        assert_eq!(len, 101);
        let mut probs = vec![0.0; len];
        assert_eq!(
            isonlcs_state_probabilities(state, probs.as_mut_ptr(), len),
            IsonlcsStatus::Ok
        );
        let total: f64 = probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);

        let (mut a3, mut q, mut g2, mut mean) = (0.0, 0.0, 0.0, 0.0);
        let status = isonlcs_stats(state, ops, &mut a3, &mut q, &mut g2, &mut mean);
        assert_eq!(status, IsonlcsStatus::Ok);
        assert!(a3.abs() < 1e-8);
        assert!(q.abs() < 1e-10);
        assert!((g2 - 1.0).abs() < 1e-10);
        assert!((mean - 4.0).abs() < 1e-10);

        let mut rep = IsonlcsSqueezeReport {
            r: 0.0,
            theta: 0.0,
            i1: 0.0,
            i2: 0.0,
            i3: 0.0,
            i4: 0.0,
            var_x: 0.0,
            var_p: 0.0,
            var_big_x: 0.0,
            var_big_p: 0.0,
        };
        assert_eq!(isonlcs_squeeze(state, ops, &mut rep), IsonlcsStatus::Ok);
        assert!((rep.var_x - 0.5).abs() < 1e-10);
        assert!((rep.var_big_x - 9.0).abs() < 1e-9);

        isonlcs_state_free(state);
        isonlcs_witness_ops_free(ops);
        isonlcs_basis_free(basis);
    }
}

#[test]
fn wigner_of_lowest_level_through_c_abi() {
    unsafe {
        let basis = isonlcs_basis_new(32);
        let mut state = std::ptr::null_mut();
        assert_eq!(
            isonlcs_state_nlcs(basis, 0.0, 0.0, &mut state),
            IsonlcsStatus::Ok
        );
        let mut w = 0.0;
        assert_eq!(
            isonlcs_s_function(state, 0.5, -0.25, 0.0, &mut w),
            IsonlcsStatus::Ok
        );
        let expect = 2.0 / std::f64::consts::PI * (-2.0 * (0.5f64 * 0.5 + 0.25 * 0.25)).exp();
        assert!((w - expect).abs() < 1e-12);
        // the P-function regime is rejected
        assert_eq!(
            isonlcs_s_function(state, 0.0, 0.0, 1.0, &mut w),
            IsonlcsStatus::InvalidArgument
        );
        isonlcs_state_free(state);
        isonlcs_basis_free(basis);
    }
}

#[test]
fn status_codes_cover_error_paths() {
    unsafe {
        // null pointers
        let mut out = 0.0;
        assert_eq!(
            isonlcs_s_function(std::ptr::null(), 0.0, 0.0, 0.0, &mut out),
            IsonlcsStatus::NullPointer
        );

        let basis = isonlcs_basis_new(32);
        let mut state = std::ptr::null_mut();
        // canonical tail control: |zeta|^2 + 6|zeta| >= n_max
        assert_eq!(
            isonlcs_state_canonical(basis, 5.0, 0.0, &mut state),
            IsonlcsStatus::TruncationInadequate
        );
        // p-function needs an nlcs
        assert_eq!(
            isonlcs_state_canonical(basis, 1.0, 0.0, &mut state),
            IsonlcsStatus::Ok
        );
        assert_eq!(isonlcs_pfunction_len(state), 0);
        let mut buf = [0.0; 4];
        assert_eq!(
            isonlcs_pfunction_coefficients(state, buf.as_mut_ptr(), 4),
            IsonlcsStatus::UnsupportedState
        );
        isonlcs_state_free(state);

        // short buffers
        let mut small = [0.0; 2];
        let mut nl = std::ptr::null_mut();
        assert_eq!(
            isonlcs_state_nlcs(basis, 1.0, 0.0, &mut nl),
            IsonlcsStatus::Ok
        );
        assert_eq!(
            isonlcs_state_probabilities(nl, small.as_mut_ptr(), 2),
            IsonlcsStatus::InvalidArgument
        );
        isonlcs_state_free(nl);
        isonlcs_basis_free(basis);

        // eigenbasis levels 1 and 2 are spectral gaps
        assert_eq!(
            isonlcs_eigen_psi(1, 0.3, &mut out),
            IsonlcsStatus::InvalidArgument
        );
        assert_eq!(isonlcs_eigen_psi(3, 0.3, &mut out), IsonlcsStatus::Ok);
    }
}

#[test]
fn pfunction_and_dual_series_through_c_abi() {
    unsafe {
        let basis = isonlcs_basis_new(64);
        let mut state = std::ptr::null_mut();
        assert_eq!(
            isonlcs_state_nlcs(basis, 1.0, 0.0, &mut state),
            IsonlcsStatus::Ok
        );
        let len = isonlcs_pfunction_len(state);
        assert!(len > 1);
        let mut coeffs = vec![0.0; len];
        assert_eq!(
            isonlcs_pfunction_coefficients(state, coeffs.as_mut_ptr(), len),
            IsonlcsStatus::Ok
        );
        assert!((-coeffs[1] / coeffs[0] - 1.0 / 12.0).abs() < 1e-12);
        isonlcs_state_free(state);

        let mut verdict = -1;
        assert_eq!(
            isonlcs_dual_series_diverges(0.01, 0.0, 60, &mut verdict),
            IsonlcsStatus::Ok
        );
        assert_eq!(verdict, 1);
        assert_eq!(
            isonlcs_dual_series_diverges(0.0, 0.0, 60, &mut verdict),
            IsonlcsStatus::Ok
        );
        assert_eq!(verdict, 0);

        let mut residual = f64::NAN;
        assert_eq!(
            isonlcs_algebra_residual(basis, IsonlcsAlgebraIdentity::HeisIII, &mut residual),
            IsonlcsStatus::Ok
        );
        assert!(residual < 1e-12);
        isonlcs_basis_free(basis);
    }
}
