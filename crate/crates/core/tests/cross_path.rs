//! Series coefficients against the brute-force oracle.

use kramers_core::neumann::{build_series, u_coefficient};
use kramers_core::oracle;
use kramers_core::QuadratureSpec;

const TOL: f64 = 1e-5;

#[test]
fn series_matches_oracle() {
    let spec = QuadratureSpec::default();
    let j = oracle::j_constants(&spec).unwrap();
    for gamma in [0.0, 0.25, 0.5] {
        let s = build_series(gamma, 2, &spec).unwrap();
        let u1 = oracle::u1_direct(gamma, &spec).unwrap();
        let u2 = oracle::u2_from(gamma, j);
        let (d1, d2) = (s.u_coeffs()[1] - u1, s.u_coeffs()[2] - u2);
        println!("gamma={gamma}: dU1={d1:.2e} dU2={d2:.2e}");
        assert!(d1.abs() < TOL && d2.abs() < TOL, "gamma={gamma}: {d1} {d2}");
    }
}

#[test]
fn flipped_kernel_sign_is_rejected() {
    let spec = QuadratureSpec::default();
    let j = oracle::j_constants(&spec).unwrap();
    for gamma in [0.0, 0.25] {
        let s = build_series(gamma, 1, &spec).unwrap();
        let flipped = s.phi_funcs()[1].scaled(-1.0, "-phi_1").unwrap();
        let u2_flipped = u_coefficient(2, gamma, &flipped, &spec).unwrap();
        let miss = (u2_flipped - oracle::u2_from(gamma, j)).abs();
        assert!(miss > 100.0 * TOL, "gamma={gamma}: flipped sign misses by only {miss}");
    }
}
