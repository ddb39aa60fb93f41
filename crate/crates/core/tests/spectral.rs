mod common;

use std::f64::consts::PI;

use mra_core::spectral::SpectralState;
use proptest::prelude::*;

proptest! {
    #[test]
    fn parseval_on_the_grid(raw in prop::collection::vec(-3.0f64..3.0, 24)) {
        let b = common::basis(24);
        let u = SpectralState::new(raw);
        let g = b.synthesize(&u).unwrap();
        let lhs = b.grid_norm_sq(&g);
        let rhs = u.norm_sq();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn analyze_inverts_synthesize(raw in prop::collection::vec(-5.0f64..5.0, 16)) {
        let b = common::basis(16);
        let u = SpectralState::new(raw);
        let back = b.analyze(&b.synthesize(&u).unwrap()).unwrap();
        for (x, y) in u.coeffs().iter().zip(back.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn poincare(raw in prop::collection::vec(-5.0f64..5.0, 12)) {
        let b = common::basis(12);
        let n = b.sobolev_norms(&SpectralState::new(raw));
        prop_assert!(n.v_sq >= b.first_eigenvalue() * n.h_sq - 1e-12 * (1.0 + n.v_sq));
    }
}

#[test]
fn eigenvalues_are_squares_on_pi() {
    let b = common::basis(6);
    for (j, &l) in b.eigenvalues().iter().enumerate() {
        let k = (j + 1) as f64;
        assert!((l - k * k).abs() < 1e-12);
    }
}

#[test]
fn eigenfunctions_are_orthonormal() {
    let b = common::basis(4);
    for i in 1..=4 {
        for j in 1..=4 {
            let ip = common::simpson(|x| b.eigenfunction(i, x) * b.eigenfunction(j, x), 0.0, PI, 2000);
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((ip - want).abs() < 1e-9, "({i},{j}) -> {ip}");
        }
    }
}

#[test]
fn projection_of_a_smooth_function_matches_quadrature() {
    let b = common::basis(8);
    let f = |x: f64| x * (PI - x);
    let grid: Vec<f64> = (1..=b.grid_size()).map(|k| f(b.node(k))).collect();
    let got = b.analyze(&mra_core::spectral::GridFunction::new(grid)).unwrap();
    for j in 1..=8 {
        let want = common::simpson(|x| f(x) * b.eigenfunction(j, x), 0.0, PI, 4000);
        assert!((got.coeffs()[j - 1] - want).abs() < 1e-4, "mode {j}");
    }
}
