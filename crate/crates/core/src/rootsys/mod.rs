//! Root systems of complex semisimple Lie algebras, their Weyl groups, and
//! the fundamental alternating polynomial π⁺.
//!
//! Roots are stored exactly as integer coefficient vectors over the simple
//! roots together with the rational Gram matrix of the simple roots. Floating
//! Euclidean coordinates (rows of a Cholesky factor of the Gram matrix) are
//! derived from that data for numerical work.

mod harmonic;
mod poly;
mod weyl;

pub use harmonic::{pair_sum_poly, pi_plus_poly, weyl_sign_equivariance_check, PiPlus};
pub use poly::{invert, rat, Metric, Monomial, Rational, RationalPolynomial};
pub use weyl::{weyl_group, WeylElement, WeylGroup, WEYL_GROUP_BOUND};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest total rank handled.
pub const MAX_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "G" => Ok(Family::G),
            _ => Err(Error::BadSpec(s.to_string())),
        }
    }
}

/// A simple factor `X_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::UnsupportedRootSystem {
                family: family.to_string(),
                rank,
                reason: "no such simple root system".into(),
            });
        }
        if rank > MAX_RANK {
            return Err(Error::UnsupportedRootSystem {
                family: family.to_string(),
                rank,
                reason: format!("rank above {MAX_RANK} is not supported"),
            });
        }
        Ok(CartanType { family, rank })
    }

    /// Gram matrix `⟨α_i, α_j⟩` of the simple roots.
    fn gram(&self) -> Vec<Vec<Rational>> {
        let n = self.rank;
        let mut g = vec![vec![Rational::zero(); n]; n];
        let chain = |g: &mut Vec<Vec<Rational>>, upto: usize, diag: Rational, off: Rational| {
            for i in 0..upto {
                g[i][i] = diag.clone();
                if i + 1 < upto {
                    g[i][i + 1] = off.clone();
                    g[i + 1][i] = off.clone();
                }
            }
        };
        match self.family {
            Family::A => chain(&mut g, n, rat(2, 1), rat(-1, 1)),
            Family::B => {
                // e_i - e_{i+1}, e_n
                chain(&mut g, n, rat(2, 1), rat(-1, 1));
                g[n - 1][n - 1] = rat(1, 1);
            }
            Family::C => {
                // e_i - e_{i+1}, 2e_n with the inner product halved, so that
                // C2 has |short|^2 = 1, |long|^2 = 2, <short, long> = -1.
                chain(&mut g, n, rat(1, 1), rat(-1, 2));
                g[n - 1][n - 1] = rat(2, 1);
                g[n - 2][n - 1] = rat(-1, 1);
                g[n - 1][n - 2] = rat(-1, 1);
            }
            Family::D => {
                // e_i - e_{i+1} (i < n), e_{n-1} + e_n
                chain(&mut g, n - 1, rat(2, 1), rat(-1, 1));
                g[n - 1][n - 1] = rat(2, 1);
                g[n - 3][n - 1] = rat(-1, 1);
                g[n - 1][n - 3] = rat(-1, 1);
            }
            Family::G => {
                g[0][0] = rat(1, 1);
                g[1][1] = rat(3, 1);
                g[0][1] = rat(-3, 2);
                g[1][0] = rat(-3, 2);
            }
        }
        g
    }

    /// Classical number of positive roots.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::G => 6,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Parsed `FAMILY:RANK` name, possibly a product joined by `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemSpec(pub Vec<CartanType>);

impl FromStr for RootSystemSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSpec(s.to_string());
        let mut parts = Vec::new();
        for piece in s.split(['x', 'X', '*']) {
            let (fam, rank) = piece.trim().split_once(':').ok_or_else(bad)?;
            let family: Family = fam.parse().map_err(|_| bad())?;
            let rank: usize = rank.trim().parse().map_err(|_| bad())?;
            parts.push(CartanType::new(family, rank)?);
        }
        if parts.is_empty() {
            return Err(bad());
        }
        Ok(RootSystemSpec(parts))
    }
}

/// A reduced root system with rational Gram data.
#[derive(Debug, Clone)]
pub struct RootSystem {
    components: Vec<CartanType>,
    gram: Vec<Vec<Rational>>,
    metric: Metric,
    positive_roots: Vec<Vec<i64>>,
    simple_euclid: Vec<Vec<f64>>,
    positive_euclid: Vec<Vec<f64>>,
}

/// Builds the simple root system `family_rank`.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    RootSystem::from_components(vec![CartanType::new(family, rank)?])
}

impl RootSystem {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        build_root_system(family, rank)
    }

    pub fn from_spec(spec: &str) -> Result<Self> {
        let RootSystemSpec(parts) = spec.parse()?;
        Self::from_components(parts)
    }

    /// Orthogonal direct sum of simple factors.
    pub fn from_components(components: Vec<CartanType>) -> Result<Self> {
        let rank: usize = components.iter().map(|c| c.rank).sum();
        if components.is_empty() || rank > MAX_RANK {
            let label = components.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("x");
            return Err(Error::UnsupportedRootSystem {
                family: label,
                rank,
                reason: format!("total rank must be between 1 and {MAX_RANK}"),
            });
        }
        let mut gram = vec![vec![Rational::zero(); rank]; rank];
        let mut offset = 0;
        for c in &components {
            let block = c.gram();
            for i in 0..c.rank {
                for j in 0..c.rank {
                    gram[offset + i][offset + j] = block[i][j].clone();
                }
            }
            offset += c.rank;
        }
        let metric = Metric::from_gram(&gram).expect("Gram matrix of simple roots is nonsingular");
        let positive_roots = enumerate_positive_roots(&gram);
        let simple_euclid = cholesky_rows(&gram);
        let positive_euclid = positive_roots
            .iter()
            .map(|c| combine(&simple_euclid, c))
            .collect();
        Ok(RootSystem { components, gram, metric, positive_roots, simple_euclid, positive_euclid })
    }

    pub fn components(&self) -> &[CartanType] {
        &self.components
    }

    /// `A2`, `G2`, `A1xA1`, ...
    pub fn label(&self) -> String {
        self.components.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("x")
    }

    /// Family letter(s): `A`, or `AxA` for products.
    pub fn family_label(&self) -> String {
        self.components.iter().map(|c| c.family.to_string()).collect::<Vec<_>>().join("x")
    }

    /// Rank `n`.
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Number of positive roots `d`.
    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// Inverse metric in simple-root coordinates.
    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    /// Positive roots as coefficient vectors over the simple roots, ordered by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn simple_roots_euclid(&self) -> &[Vec<f64>] {
        &self.simple_euclid
    }

    pub fn positive_roots_euclid(&self) -> &[Vec<f64>] {
        &self.positive_euclid
    }

    /// Exact inner product of two vectors given in simple-root coordinates.
    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                acc += ai * &self.gram[i][j] * bj;
            }
        }
        acc
    }

    pub fn inner_int(&self, a: &[i64], b: &[i64]) -> Rational {
        self.inner(&to_rational(a), &to_rational(b))
    }

    /// ρ = Σ_{α>0} α in simple-root coordinates (all multiplicities are 2).
    pub fn rho(&self) -> Vec<i64> {
        let mut r = vec![0; self.rank()];
        for a in &self.positive_roots {
            for (ri, ai) in r.iter_mut().zip(a) {
                *ri += ai;
            }
        }
        r
    }

    pub fn rho_euclid(&self) -> Vec<f64> {
        combine(&self.simple_euclid, &self.rho())
    }

    /// |ρ|², exact.
    pub fn rho_norm_sq(&self) -> Rational {
        let r = self.rho();
        self.inner_int(&r, &r)
    }

    /// Euclidean coordinates of `Σ c_i α_i` for rational or float `c`.
    pub fn to_euclid(&self, simple_coords: &[f64]) -> Vec<f64> {
        assert_eq!(simple_coords.len(), self.rank());
        let mut x = vec![0.0; self.rank()];
        for (c, row) in simple_coords.iter().zip(&self.simple_euclid) {
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi += c * ri;
            }
        }
        x
    }

    /// Linear-form coefficients of `μ ↦ ⟨α, μ⟩` in simple-root coordinates of μ.
    pub fn root_covector(&self, root: &[i64]) -> Vec<Rational> {
        let n = self.rank();
        (0..n)
            .map(|j| {
                let mut acc = Rational::zero();
                for (i, &c) in root.iter().enumerate() {
                    if c != 0 {
                        acc += &self.gram[i][j] * Rational::from_integer(BigInt::from(c));
                    }
                }
                acc
            })
            .collect()
    }

    /// π⁺(x) = Π_{α>0} ⟨α, x⟩ for Euclidean `x`.
    pub fn pi_plus_euclid(&self, x: &[f64]) -> f64 {
        self.positive_euclid.iter().map(|a| dot(a, x)).product()
    }

    /// π⁺(ρ), exact.
    pub fn pi_plus_rho(&self) -> Rational {
        let r = self.rho();
        self.positive_roots
            .iter()
            .map(|a| self.inner_int(a, &r))
            .fold(rat(1, 1), |acc, v| acc * v)
    }

    /// Checks the structural invariants of the root data.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let expected: usize = self.components.iter().map(|c| c.positive_root_count()).sum();
        if self.num_positive() != expected {
            return Err(format!("{} positive roots, expected {expected}", self.num_positive()));
        }
        if self.positive_roots.iter().any(|r| r.iter().any(|&c| c < 0)) {
            return Err("positive root with a negative coefficient".into());
        }
        let all: BTreeSet<Vec<i64>> = self
            .positive_roots
            .iter()
            .flat_map(|r| [r.clone(), r.iter().map(|c| -c).collect()])
            .collect();
        for beta in &all {
            for gamma in &all {
                if !all.contains(&self.reflect(gamma, beta)) {
                    return Err(format!("root set not closed under s_{beta:?}"));
                }
            }
        }
        Ok(())
    }

    /// s_β(γ) = γ − 2⟨γ,β⟩/⟨β,β⟩ β, exact on integer coordinates.
    pub fn reflect(&self, gamma: &[i64], beta: &[i64]) -> Vec<i64> {
        let k = rat(2, 1) * self.inner_int(gamma, beta) / self.inner_int(beta, beta);
        let k = k.to_integer().to_i64().expect("Cartan integer");
        gamma.iter().zip(beta).map(|(g, b)| g - k * b).collect()
    }
}

pub(crate) fn to_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(rows: &[Vec<f64>], coeffs: &[i64]) -> Vec<f64> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut x = vec![0.0; n];
    for (c, row) in coeffs.iter().zip(rows) {
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi += *c as f64 * ri;
        }
    }
    x
}

fn cholesky_rows(gram: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    let n = gram.len();
    let g: Vec<Vec<f64>> = gram
        .iter()
        .map(|row| row.iter().map(|v| v.to_f64().unwrap()).collect())
        .collect();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (g[i][i] - s).sqrt();
            } else {
                l[i][j] = (g[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

/// Closes the simple roots under simple reflections and keeps the positive ones.
fn enumerate_positive_roots(gram: &[Vec<Rational>]) -> Vec<Vec<i64>> {
    let n = gram.len();
    // cartan[i][j] = 2⟨α_i, α_j⟩/⟨α_j, α_j⟩
    let cartan: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = rat(2, 1) * &gram[i][j] / &gram[j][j];
                    v.to_integer().to_i64().unwrap()
                })
                .collect()
        })
        .collect();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(g) = queue.pop_front() {
        for j in 0..n {
            let pairing: i64 = (0..n).map(|i| g[i] * cartan[i][j]).sum();
            let mut r = g.clone();
            r[j] -= pairing;
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    let mut pos: Vec<Vec<i64>> = seen.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
    pos.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    pos
}

#[derive(Serialize)]
struct RootSystemJson {
    family: String,
    rank: usize,
    coordinates: &'static str,
    gram: Vec<Vec<String>>,
    simple_roots: Vec<Vec<String>>,
    positive_roots: Vec<Vec<String>>,
    weyl_order: usize,
}

impl RootSystem {
    /// JSON export. Roots are written in simple-root coordinates as `"p/q"`
    /// strings, with the rational Gram matrix alongside.
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let fmt_vec = |v: &[i64]| v.iter().map(|c| format!("{c}/1")).collect::<Vec<_>>();
        let fmt_rat = |r: &Rational| format!("{}/{}", r.numer(), r.denom());
        let n = self.rank();
        let json = RootSystemJson {
            family: self.family_label(),
            rank: n,
            coordinates: "simple_roots",
            gram: self.gram.iter().map(|row| row.iter().map(fmt_rat).collect()).collect(),
            simple_roots: (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    fmt_vec(&e)
                })
                .collect(),
            positive_roots: self.positive_roots.iter().map(|r| fmt_vec(r)).collect(),
            weyl_order: weyl_group(self)?.order(),
        };
        Ok(serde_json::to_value(json).expect("serializable"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram_f64(rs: &RootSystem) -> Vec<Vec<f64>> {
        rs.gram().iter().map(|r| r.iter().map(|v| v.to_f64().unwrap()).collect()).collect()
    }

    #[test]
    fn positive_root_counts() {
        for (f, n, d) in [
            (Family::A, 1, 1),
            (Family::A, 2, 3),
            (Family::A, 3, 6),
            (Family::A, 4, 10),
            (Family::B, 2, 4),
            (Family::B, 3, 9),
            (Family::C, 2, 4),
            (Family::C, 3, 9),
            (Family::D, 3, 6),
            (Family::D, 4, 12),
            (Family::G, 2, 6),
        ] {
            let rs = build_root_system(f, n).unwrap();
            assert_eq!(rs.num_positive(), d, "{f}{n}");
            rs.validate().unwrap();
        }
    }

    #[test]
    fn rank_two_gram_data() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        assert_eq!(a2.gram(), &[vec![rat(2, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]);
        let c2 = build_root_system(Family::C, 2).unwrap();
        assert_eq!(c2.gram(), &[vec![rat(1, 1), rat(-1, 1)], vec![rat(-1, 1), rat(2, 1)]]);
        let g2 = build_root_system(Family::G, 2).unwrap();
        assert_eq!(g2.gram(), &[vec![rat(1, 1), rat(-3, 2)], vec![rat(-3, 2), rat(3, 1)]]);
    }

    #[test]
    fn listed_positive_roots() {
        let a2 = build_root_system(Family::A, 2).unwrap();
        assert_eq!(a2.positive_roots(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let c2 = build_root_system(Family::C, 2).unwrap();
        assert_eq!(c2.positive_roots(), &[vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1]]);
        let g2 = build_root_system(Family::G, 2).unwrap();
        assert_eq!(
            g2.positive_roots(),
            &[vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1], vec![3, 2]]
        );
    }

    #[test]
    fn rho_values() {
        assert_eq!(build_root_system(Family::A, 1).unwrap().rho(), vec![1]);
        assert_eq!(build_root_system(Family::A, 2).unwrap().rho(), vec![2, 2]);
        assert_eq!(build_root_system(Family::C, 2).unwrap().rho(), vec![4, 3]);
        assert_eq!(build_root_system(Family::G, 2).unwrap().rho(), vec![10, 6]);
        assert_eq!(build_root_system(Family::A, 1).unwrap().rho_norm_sq(), rat(2, 1));
    }

    #[test]
    fn euclidean_embedding_reproduces_gram() {
        for spec in ["A:3", "B:3", "C:4", "D:4", "G:2", "A:1xA:1", "A:2xA:1"] {
            let rs = RootSystem::from_spec(spec).unwrap();
            let g = gram_f64(&rs);
            let s = rs.simple_roots_euclid();
            for i in 0..rs.rank() {
                for j in 0..rs.rank() {
                    assert!((dot(&s[i], &s[j]) - g[i][j]).abs() < 1e-14, "{spec}");
                }
            }
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(build_root_system(Family::B, 1).is_err());
        assert!(build_root_system(Family::D, 2).is_err());
        assert!(build_root_system(Family::G, 3).is_err());
        assert!(build_root_system(Family::A, 5).is_err());
        assert!(RootSystem::from_spec("Q:9").is_err());
        assert!(RootSystem::from_spec("A2").is_err());
        assert!(RootSystem::from_spec("A:3xA:2").is_err());
    }

    #[test]
    fn semisimple_product_is_block_diagonal() {
        let rs = RootSystem::from_spec("A:1xA:1").unwrap();
        assert_eq!(rs.label(), "A1xA1");
        assert_eq!(rs.num_positive(), 2);
        assert_eq!(rs.inner_int(&[1, 0], &[0, 1]), rat(0, 1));
    }

    #[test]
    fn json_export_shape() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let j = rs.to_json().unwrap();
        assert_eq!(j["family"], "A");
        assert_eq!(j["rank"], 2);
        assert_eq!(j["weyl_order"], 6);
        assert_eq!(j["positive_roots"][2], serde_json::json!(["1/1", "1/1"]));
        assert_eq!(j["gram"][0][1], "-1/1");
    }
}
