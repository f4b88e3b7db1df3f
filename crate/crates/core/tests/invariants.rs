//! Cross-module properties: closed forms against the oracles at random
//! chamber points, and identities that tie the modules together.

use num_complex::Complex64;
use proptest::prelude::*;
use symspace::fundsol::{sinh_ratio_product, u_eval, SolutionParams};
use symspace::oracle::{
    hecke_check, integral_i_reduced, jacobian_sqrt, prefactor, residue_check, LineIntegralMethod, QuadratureConfig,
};
use symspace::rootsys::RootSystem;
use symspace::spherical::{CartanVector, SphericalEvaluator};
use symspace::verify::{canonical_nu, chamber_direction, eigenvalue_error_rank1, FDConfig};

fn systems() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["A:1", "A:2", "C:2", "G:2", "A:3", "B:3", "A:1xA:1"])
}

/// A chamber-interior point of norm `length` with simple-root values
/// proportional to `weights`.
fn chamber_point(rs: &RootSystem, weights: &[f64], length: f64) -> CartanVector {
    chamber_direction(rs, &weights[..rs.rank()]).unwrap().scaled(length)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_reduced_oracle(
        spec in systems(),
        weights in prop::collection::vec(0.2f64..3.0, 3),
        length in 0.1f64..4.0,
        z in 0.3f64..3.0,
    ) {
        let rs = RootSystem::from_spec(spec).unwrap();
        let nu = canonical_nu(&rs);
        let h = chamber_point(&rs, &weights, length);
        let p = SolutionParams::new(&rs, nu, Complex64::new(z, 0.0)).unwrap();
        let closed = u_eval(&p, &h).unwrap();
        let cfg = QuadratureConfig::with_rel_tol(1e-10);
        let oracle = prefactor(&rs, &h, nu).unwrap()
            * integral_i_reduced(&rs, &h, z, nu, LineIntegralMethod::Quadrature, &cfg).unwrap();
        prop_assert!((oracle - closed).norm() <= 1e-8 * closed.norm(), "{} vs {}", oracle, closed);
        prop_assert!(oracle.im.abs() <= 1e-12 * oracle.norm());
    }

    #[test]
    fn jacobian_times_sinh_ratio_is_constant(
        spec in systems(),
        coords in prop::collection::vec(-6.0f64..6.0, 3),
    ) {
        let rs = RootSystem::from_spec(spec).unwrap();
        let h = CartanVector::new(coords[..rs.rank()].to_vec()).unwrap();
        let expected = 2f64.powi(-(rs.num_positive() as i32));
        let product = jacobian_sqrt(&rs, &h) * sinh_ratio_product(&rs, &h);
        prop_assert!((product - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn residue_identity_holds(z in 0.2f64..4.0, t in 0.0f64..8.0) {
        let (lhs, rhs) = residue_check(z, t).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs);
    }

    #[test]
    fn gaussian_identity_rank1(x in -3.0f64..3.0, t in 0.2f64..4.0) {
        let rs = RootSystem::from_spec("A:1").unwrap();
        let h = CartanVector::new(vec![x]).unwrap();
        let (lhs, rhs) = hecke_check(&rs, &h, t, &QuadratureConfig::default()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn spherical_functions_are_bounded(
        spec in systems(),
        lambda in prop::collection::vec(-5.0f64..5.0, 3),
        h in prop::collection::vec(-3.0f64..3.0, 3),
    ) {
        let rs = RootSystem::from_spec(spec).unwrap();
        let n = rs.rank();
        let eval = SphericalEvaluator::new(&rs).unwrap();
        let phi = eval.phi_coords(&lambda[..n], &h[..n]);
        prop_assert!(phi.norm() <= 1.0 + 1e-9, "{}", phi);
    }

    #[test]
    fn rank1_eigenvalue_identity(t in 0.1f64..3.0, s in 0.3f64..3.0) {
        let err = eigenvalue_error_rank1(t, s, &FDConfig::new(1e-3, 4).unwrap()).unwrap();
        prop_assert!(err < 1e-5, "t={} s={}: {}", t, s, err);
    }
}
