//! π⁺(μ) = Π_{α>0} ⟨α, μ⟩ as an exact polynomial, and the pair sum whose
//! vanishing makes it harmonic.

use num_traits::Zero;

use super::{Metric, Rational, RationalPolynomial, RootSystem, WeylElement};

/// π⁺ kept both as its list of linear factors and as the expanded product.
///
/// Variables are the simple-root coordinates of μ, so every factor has
/// rational coefficients.
#[derive(Debug, Clone)]
pub struct PiPlus {
    factors: Vec<Vec<Rational>>,
    metric: Metric,
}

impl PiPlus {
    pub fn new(rs: &RootSystem) -> Self {
        let factors = rs.positive_roots().iter().map(|r| rs.root_covector(r)).collect();
        PiPlus { factors, metric: rs.metric().clone() }
    }

    /// Builds from arbitrary linear forms; used to inject corrupted data in
    /// negative-control checks.
    pub fn from_factors(factors: Vec<Vec<Rational>>, metric: Metric) -> Self {
        PiPlus { factors, metric }
    }

    pub fn factors(&self) -> &[Vec<Rational>] {
        &self.factors
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn nvars(&self) -> usize {
        self.metric.dim()
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// Product of all factors except those at `skip`.
    fn product_without(&self, skip: &[usize]) -> RationalPolynomial {
        self.factors
            .iter()
            .enumerate()
            .filter(|(k, _)| !skip.contains(k))
            .fold(RationalPolynomial::one(self.nvars()), |acc, (_, f)| {
                &acc * &RationalPolynomial::linear(f)
            })
    }

    pub fn expand(&self) -> RationalPolynomial {
        self.product_without(&[])
    }

    /// Σ_{β≠γ} ⟨β,γ⟩ · π⁺/(βγ) over ordered pairs of distinct, non-orthogonal
    /// factors. The quotient is formed by leaving the two factors out of the
    /// product.
    pub fn pair_sum(&self) -> RationalPolynomial {
        let d = self.factors.len();
        let mut out = RationalPolynomial::zero(self.nvars());
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let ip = self.metric.pair_covectors(&self.factors[i], &self.factors[j]);
                if ip.is_zero() {
                    continue;
                }
                out = out + self.product_without(&[i, j]).scale(&ip);
            }
        }
        out
    }

    pub fn laplacian(&self) -> RationalPolynomial {
        self.expand().laplacian(&self.metric)
    }
}

/// π⁺ as an expanded polynomial in simple-root coordinates.
pub fn pi_plus_poly(rs: &RootSystem) -> RationalPolynomial {
    PiPlus::new(rs).expand()
}

/// The exact pair sum for `rs`.
pub fn pair_sum_poly(rs: &RootSystem) -> RationalPolynomial {
    PiPlus::new(rs).pair_sum()
}

/// `|π⁺(wμ) − sgn(w) π⁺(μ)| ≤ 1e-12 (1 + |π⁺(μ)|)` for Euclidean `mu`.
pub fn weyl_sign_equivariance_check(rs: &RootSystem, mu: &[f64], w: &WeylElement) -> bool {
    let p = rs.pi_plus_euclid(mu);
    let pw = rs.pi_plus_euclid(&w.act_euclid(mu));
    (pw - w.sign() as f64 * p).abs() <= 1e-12 * (1.0 + p.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, rat, to_rational, weyl_group, Family};
    use proptest::prelude::*;

    const SYSTEMS: [&str; 9] = ["A:1", "A:2", "A:3", "C:2", "G:2", "A:1xA:1", "B:3", "C:3", "D:4"];

    #[test]
    fn laplacian_of_pi_plus_vanishes() {
        for spec in SYSTEMS {
            let rs = RootSystem::from_spec(spec).unwrap();
            let pp = PiPlus::new(&rs);
            let lap = pp.laplacian();
            assert!(lap.is_zero(), "{spec}: Δπ⁺ = {lap}");
            let ps = pp.pair_sum();
            assert!(ps.is_zero(), "{spec}: pair sum = {ps}");
        }
    }

    #[test]
    fn degree_is_number_of_positive_roots() {
        for spec in SYSTEMS {
            let rs = RootSystem::from_spec(spec).unwrap();
            let p = pi_plus_poly(&rs);
            assert!(p.is_homogeneous());
            assert_eq!(p.degree(), Some(rs.num_positive() as u32));
        }
    }

    #[test]
    fn laplacian_of_product_of_two_roots() {
        // Δ(⟨α,λ⟩⟨β,λ⟩) = 2⟨α,β⟩
        let rs = build_root_system(Family::G, 2).unwrap();
        let roots = rs.positive_roots();
        for a in roots {
            for b in roots {
                let p = &RationalPolynomial::linear(&rs.root_covector(a))
                    * &RationalPolynomial::linear(&rs.root_covector(b));
                let expected = RationalPolynomial::constant(2, rat(2, 1) * rs.inner_int(a, b));
                assert_eq!(p.laplacian(rs.metric()), expected);
            }
        }
    }

    #[test]
    fn laplacian_of_norm_squared_is_2n() {
        for spec in ["A:2", "G:2", "A:3", "C:3"] {
            let rs = RootSystem::from_spec(spec).unwrap();
            let n = rs.rank();
            // |μ|² = yᵀ B y
            let mut r2 = RationalPolynomial::zero(n);
            for i in 0..n {
                for j in 0..n {
                    let m = &RationalPolynomial::var(n, i) * &RationalPolynomial::var(n, j);
                    r2 = r2 + m.scale(&rs.gram()[i][j]);
                }
            }
            let lap = r2.laplacian(rs.metric());
            assert_eq!(lap, RationalPolynomial::constant(n, rat(2 * n as i64, 1)));
        }
    }

    #[test]
    fn a2_pi_plus_at_rho() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let p = pi_plus_poly(&rs);
        let rho = to_rational(&rs.rho());
        assert_eq!(p.eval(&rho), rat(16, 1));
        assert_eq!(rs.pi_plus_rho(), rat(16, 1));
        let w = weyl_group(&rs).unwrap();
        let s_alpha = w.simple_reflection(0);
        let image = to_rational(&s_alpha.act_coords(&rs.rho()));
        assert_eq!(p.eval(&image), rat(-16, 1));
        assert!((rs.pi_plus_euclid(&rs.rho_euclid()) - 16.0).abs() < 1e-12);
    }

    #[test]
    fn a1_pi_plus_is_linear() {
        let rs = build_root_system(Family::A, 1).unwrap();
        let p = pi_plus_poly(&rs);
        assert_eq!(p, RationalPolynomial::linear(&[rat(2, 1)]));
    }

    #[test]
    fn vanishes_on_root_hyperplanes() {
        let rs = build_root_system(Family::C, 2).unwrap();
        let p = pi_plus_poly(&rs);
        let cov = rs.root_covector(&[1, 0]);
        // μ with cov·μ = 0 lies on the α₁ wall
        let mu = vec![cov[1].clone(), -cov[0].clone()];
        assert_eq!(p.eval(&mu), rat(0, 1));
    }

    #[test]
    fn pair_sum_matches_laplacian_for_corrupted_factors() {
        // The identity Δ(Πℓ) = Σ ⟨ℓ_i,ℓ_j⟩ Π_{k≠i,j} ℓ_k holds for any linear forms.
        let rs = build_root_system(Family::A, 2).unwrap();
        let mut factors = PiPlus::new(&rs).factors().to_vec();
        factors[1][0] += rat(1, 7);
        let bad = PiPlus::from_factors(factors, rs.metric().clone());
        assert!(!bad.laplacian().is_zero());
        assert_eq!(bad.laplacian(), bad.pair_sum());
    }

    #[test]
    fn g2_equivariance_all_elements() {
        let rs = build_root_system(Family::G, 2).unwrap();
        let w = weyl_group(&rs).unwrap();
        for mu in [[0.3, -1.7], [2.2, 0.4], [-0.9, -0.1]] {
            for e in w.iter() {
                assert!(weyl_sign_equivariance_check(&rs, &mu, e));
            }
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=9).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exact_sign_equivariance(spec in prop::sample::select(vec!["A:2", "C:2", "G:2", "A:3"]),
                                   coords in prop::collection::vec(small_rational(), 3),
                                   idx in 0usize..24) {
            let rs = RootSystem::from_spec(spec).unwrap();
            let n = rs.rank();
            let p = pi_plus_poly(&rs);
            let w = weyl_group(&rs).unwrap();
            let e = &w.elements()[idx % w.order()];
            let mu: Vec<Rational> = coords.into_iter().take(n).collect();
            let wmu: Vec<Rational> = e.coord_matrix().iter().map(|row| {
                row.iter().zip(&mu).fold(rat(0, 1), |acc, (a, b)| acc + rat(*a, 1) * b)
            }).collect();
            let lhs = p.eval(&wmu);
            let rhs = p.eval(&mu) * rat(e.sign() as i64, 1);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exact_homogeneity(spec in prop::sample::select(vec!["A:2", "C:2", "G:2"]),
                             coords in prop::collection::vec(small_rational(), 2),
                             c in small_rational()) {
            let rs = RootSystem::from_spec(spec).unwrap();
            let p = pi_plus_poly(&rs);
            let scaled: Vec<Rational> = coords.iter().map(|x| x * &c).collect();
            let d = rs.num_positive();
            prop_assert_eq!(p.eval(&scaled), p.eval(&coords) * num_traits::pow(c, d));
        }
    }
}
