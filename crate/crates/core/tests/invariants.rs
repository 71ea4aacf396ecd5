//! Property tests over randomly generated specs.

use nalgebra::Vector3;
use num_complex::Complex64;
use proptest::prelude::*;
use spinstat_core::quantization::{lambda_matrix, solve_lambda, unique_lambda, Verdict};
use spinstat_core::ratfunc::rational;
use spinstat_core::spectrum::{energy, solve_generalized_eigenproblem};
use spinstat_core::{
    branch_points, build, decide_statistics, eigenvectors, parse_expr, verify_symmetries,
    FieldSpec, Params,
};

/// `c0 + c1 x + c2 y + c3 x^2` with quarter-integer coefficients.
fn poly(c: [i64; 4]) -> String {
    format!(
        "({})/4 + ({})/4*x + ({})/4*y + ({})/4*x^2",
        c[0], c[1], c[2], c[3]
    )
}

fn spec(two_j: u32, plus: [i64; 4], minus: [i64; 4]) -> FieldSpec {
    let params = Params::new();
    FieldSpec::new(
        two_j,
        parse_expr(&poly(plus), &params).unwrap(),
        parse_expr(&poly(minus), &params).unwrap(),
    )
}

/// `M₊ > 0` for all real p at every helicity up to 2j = 6.
fn positive_plus() -> impl Strategy<Value = [i64; 4]> {
    (4i64..=20, 4i64..=16, 0i64..=8).prop_map(|(a0, a1, a3)| [a0, a1, 0, a3])
}

fn coeffs() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-4i64..=4)
}

fn momentum() -> impl Strategy<Value = Vector3<f64>> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 0.01)
        .prop_map(|(x, y, z)| Vector3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_form_satisfies_symmetries(two_j in 0u32..=4, plus in coeffs(), minus in coeffs(), p in momentum()) {
        let s = spec(two_j, plus, minus);
        prop_assume!(!s.m_plus.is_zero());
        let field = build(s).unwrap();
        let r = verify_symmetries(&field, &[p]).unwrap();
        prop_assert!(r.max_residual() < 1e-10, "{:?}", r.residuals());
    }

    #[test]
    fn closed_form_matches_eigenproblem(two_j in 0u32..=4, plus in positive_plus(), minus in coeffs(), p in momentum()) {
        let s = spec(two_j, plus, minus);
        let field = build(s.clone()).unwrap();
        let mut closed = Vec::new();
        for sigma in field.rep.helicities() {
            match energy(&s, p.norm(), sigma) {
                Ok(e) => closed.push(e),
                Err(_) => return Ok(()),
            }
        }
        closed.sort_by(f64::total_cmp);
        let eig = solve_generalized_eigenproblem(&field, &p).unwrap();
        let positive: Vec<f64> = eig.iter().rev().take(closed.len()).map(|(e, _)| *e).rev().collect();
        for (a, b) in closed.iter().zip(&positive) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn mode_normalization_is_one(two_j in 0u32..=4, plus in positive_plus(), minus in coeffs(), p in momentum()) {
        prop_assume!(minus.iter().any(|&c| c != 0));
        let s = spec(two_j, plus, minus);
        let field = build(s).unwrap();
        let weight = lambda_matrix(unique_lambda(two_j), field.block_dim()) * &field.omega;
        for sigma in field.rep.helicities() {
            let Ok(mode) = eigenvectors(&field, &p, sigma) else { continue };
            let n = (mode.u.adjoint() * &weight * &mode.u)[(0, 0)];
            prop_assert!((n - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn lambda_dimension_is_scale_invariant(two_j in 0u32..=3, plus in positive_plus(), minus in coeffs(), k in 1i64..=9) {
        let s = spec(two_j, plus, minus);
        let base = solve_lambda(&build(s.clone()).unwrap()).unwrap();
        let scaled = solve_lambda(&build(s.scaled(&rational(k, 3))).unwrap()).unwrap();
        prop_assert_eq!(base.dimension, scaled.dimension);
        prop_assert_eq!(base.dimension, if minus.iter().all(|&c| c == 0) { 2 } else { 1 });
    }

    #[test]
    fn zero_m_minus_has_no_branch_points(two_j in 0u32..=4, plus in coeffs()) {
        let s = spec(two_j, plus, [0; 4]);
        prop_assume!(!s.m_plus.is_zero());
        for sigma in build(s.clone()).unwrap().rep.helicities() {
            if let Ok(r) = branch_points(&s, sigma, &Vector3::z()) {
                prop_assert!(r.finite_branch_points.is_empty() && !r.branch_at_infinity);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn unique_lambda_forces_spin_statistics(two_j in 0u32..=5, plus in positive_plus(), small in prop::array::uniform4(-1i64..=1)) {
        // |M₋| ≤ M₊/2 keeps integer-spin specs gapped
        let minus = [small[0], small[1], small[2], small[3].min(0).max(-(plus[3] / 2))];
        prop_assume!(minus.iter().any(|&c| c != 0));
        let s = spec(two_j, plus, minus);
        let Ok(v) = decide_statistics(&s) else { return Ok(()) };
        let expected = if two_j % 2 == 0 { Verdict::Bose } else { Verdict::Fermi };
        prop_assert_eq!(v.kind, expected);
    }
}
