//! Zonal spherical functions, the c-function density and Casimir
//! eigenvalues for complex groups.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::rootsys::{weyl_group, RootSystem, WeylGroup};

macro_rules! euclidean_point {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(Vec<f64>);

        impl $name {
            /// Euclidean coordinates of the root-system embedding.
            pub fn new(coords: Vec<f64>) -> Result<Self> {
                if coords.iter().all(|c| c.is_finite()) {
                    Ok($name(coords))
                } else {
                    Err(Error::InvalidParameter(format!(
                        concat!(stringify!($name), " has non-finite entries: {:?}"),
                        coords
                    )))
                }
            }

            /// Point `Σ yᵢ αᵢ` given by simple-root coordinates.
            pub fn from_simple_coords(rs: &RootSystem, y: &[f64]) -> Result<Self> {
                if y.len() != rs.rank() {
                    return Err(Error::InvalidParameter(format!(
                        "expected {} coordinates, got {}",
                        rs.rank(),
                        y.len()
                    )));
                }
                Self::new(rs.to_euclid(y))
            }

            pub fn zero(dim: usize) -> Self {
                $name(vec![0.0; dim])
            }

            pub fn coords(&self) -> &[f64] {
                &self.0
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn norm(&self) -> f64 {
                self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
            }

            pub fn scaled(&self, s: f64) -> Self {
                $name(self.0.iter().map(|c| c * s).collect())
            }
        }
    };
}

euclidean_point!(
    /// A point `H` of the Cartan subspace (the logarithm of `a`).
    CartanVector
);
euclidean_point!(
    /// A spectral parameter `λ` or `ξ` in the dual of the Cartan subspace.
    SpectralVector
);

/// `z`, `λ_z = z² − |ρ|²`, and optionally `λ_ξ = −(|ξ|² + |ρ|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueParams {
    pub z: Complex64,
    pub lambda_z: Complex64,
    pub lambda_xi: Option<f64>,
}

impl EigenvalueParams {
    pub fn new(rs: &RootSystem, z: Complex64) -> Result<Self> {
        if !(z.re > 0.0) || !z.im.is_finite() || !z.re.is_finite() {
            return Err(Error::InvalidParameter(format!("need Re(z) > 0, got z = {z}")));
        }
        let rho2 = rho_norm_sq(rs);
        Ok(EigenvalueParams { z, lambda_z: z * z - rho2, lambda_xi: None })
    }

    pub fn with_spectral(rs: &RootSystem, z: Complex64, xi: &SpectralVector) -> Result<Self> {
        let mut p = Self::new(rs, z)?;
        p.lambda_xi = Some(casimir_eigenvalue(rs, xi));
        Ok(p)
    }
}

pub(crate) fn rho_norm_sq(rs: &RootSystem) -> f64 {
    rs.rho_norm_sq().to_f64().unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `x / sinh x`, even, with a Taylor branch near 0 and no overflow for
/// large `|x|`.
pub fn x_over_sinh(x: f64) -> f64 {
    let a = x.abs();
    if a < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0 - 31.0 * x2 * x2 * x2 / 15120.0
    } else if a < 20.0 {
        x / x.sinh()
    } else {
        2.0 * a * (-a).exp() / (1.0 - (-2.0 * a).exp())
    }
}

/// `Π_{α>0} 2 sinh α(H)`.
pub fn weyl_denominator(rs: &RootSystem, h: &CartanVector) -> f64 {
    rs.positive_roots_euclid().iter().map(|a| 2.0 * dot(a, h.coords()).sinh()).product()
}

/// `|c(ξ)|⁻² = (π⁺(ξ)/π⁺(ρ))²`.
pub fn c_function_density(rs: &RootSystem, xi: &SpectralVector) -> f64 {
    let ratio = rs.pi_plus_euclid(xi.coords()) / rs.pi_plus_rho().to_f64().unwrap();
    ratio * ratio
}

/// `−(|ξ|² + |ρ|²)`.
pub fn casimir_eigenvalue(rs: &RootSystem, xi: &SpectralVector) -> f64 {
    -(xi.norm().powi(2) + rho_norm_sq(rs))
}

/// Evaluates `φ_{ρ+iλ}(exp H)` with the Weyl group and root data cached.
///
/// With `A(λ,H) = Σ_w sgn(w) e^{i⟨wλ,H⟩}` the function is
/// `π⁺(ρ) i^{−d} F(λ,H) Π α(H)/(2 sinh α(H))`, where `F = A/(π⁺(λ)π⁺(H))`
/// is entire in both arguments and satisfies `F(sλ, H/s) = F(λ, H)`.
/// Where `A` suffers cancellation (near walls, or `|λ||H|` small) `F` is
/// replaced by its mean over a complex circle `τ ↦ (λ + τcρ̂, H + τcρ̂)`,
/// which is exact for entire functions and stays away from the zeros of
/// `π⁺`.
#[derive(Debug, Clone)]
pub struct SphericalEvaluator {
    rs: RootSystem,
    weyl: WeylGroup,
    roots: Vec<Vec<f64>>,
    pi_rho: f64,
    rho_hat: Vec<f64>,
    max_condition: f64,
}

/// Default ratio `Σ|terms| / |A|` above which the direct Weyl sum is not
/// trusted.
const MAX_CONDITION: f64 = 1e4;
const CIRCLE_NODES: usize = 64;
const CIRCLE_RADII: [f64; 3] = [0.5, 1.0, 2.0];

type Cvec = Vec<Complex64>;

impl SphericalEvaluator {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        let weyl = weyl_group(rs)?;
        let rho = rs.rho_euclid();
        let norm = dot(&rho, &rho).sqrt();
        Ok(SphericalEvaluator {
            rs: rs.clone(),
            weyl,
            roots: rs.positive_roots_euclid().to_vec(),
            pi_rho: rs.pi_plus_rho().to_f64().unwrap(),
            rho_hat: rho.iter().map(|r| r / norm).collect(),
            max_condition: MAX_CONDITION,
        })
    }

    /// Raises or lowers the condition number above which the Weyl sum is
    /// replaced by the circle mean. Callers that weight `φ` by `|c(λ)|^{−2}`
    /// can afford a larger value, since the weight vanishes where the
    /// condition number blows up.
    pub fn with_max_condition(mut self, max_condition: f64) -> Self {
        self.max_condition = max_condition;
        self
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn weyl_group(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn pi_plus_rho(&self) -> f64 {
        self.pi_rho
    }

    fn d(&self) -> usize {
        self.roots.len()
    }

    /// `F(0, H) = i^d 2^d / π⁺(ρ)`.
    fn quotient_at_origin(&self) -> Complex64 {
        Complex64::i().powu(self.d() as u32) * 2f64.powi(self.d() as i32) / self.pi_rho
    }

    /// `A/(π⁺(λ)π⁺(H))` for complex arguments, with the condition number of
    /// the alternating sum.
    fn quotient(&self, lambda: &[Complex64], h: &[Complex64]) -> (Complex64, f64) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        for w in self.weyl.iter() {
            let wl: Cvec = w
                .euclid_matrix()
                .iter()
                .map(|row| row.iter().zip(lambda).map(|(a, b)| b * a).sum())
                .collect();
            let phase: Complex64 = wl.iter().zip(h).map(|(a, b)| a * b).sum();
            let term = (Complex64::i() * phase).exp();
            magnitude += term.norm();
            sum += term * f64::from(w.sign());
        }
        let mut denom = Complex64::new(1.0, 0.0);
        for a in &self.roots {
            let la: Complex64 = a.iter().zip(lambda).map(|(x, y)| y * x).sum();
            let ha: Complex64 = a.iter().zip(h).map(|(x, y)| y * x).sum();
            denom *= la * ha;
        }
        let cond = if sum.norm() > 0.0 { magnitude / sum.norm() } else { f64::INFINITY };
        (sum / denom, cond)
    }

    /// `F(λ, H)` for real arguments.
    pub fn reduced_quotient(&self, lambda: &[f64], h: &[f64]) -> Complex64 {
        let nl = dot(lambda, lambda).sqrt();
        let nh = dot(h, h).sqrt();
        if nl == 0.0 || nh == 0.0 {
            return self.quotient_at_origin();
        }
        let to_c = |v: &[f64]| -> Cvec { v.iter().map(|&x| Complex64::new(x, 0.0)).collect() };
        let (direct, cond) = self.quotient(&to_c(lambda), &to_c(h));
        if cond <= self.max_condition && direct.is_finite() {
            return direct;
        }
        let m = (nl * nh).sqrt();
        let ls: Vec<f64> = lambda.iter().map(|x| x * m / nl).collect();
        let hs: Vec<f64> = h.iter().map(|x| x * m / nh).collect();
        // Each radius gets an error estimate from round-off (condition of the
        // worst node) and aliasing (full rule against its even-node subrule).
        let mut best: Option<(f64, Complex64)> = None;
        for kappa in CIRCLE_RADII {
            let c = kappa / m.max(1.0);
            let mut full = Complex64::new(0.0, 0.0);
            let mut half = Complex64::new(0.0, 0.0);
            let mut worst: f64 = 0.0;
            for k in 0..CIRCLE_NODES {
                let angle = 2.0 * PI * (k as f64 + 0.5) / CIRCLE_NODES as f64;
                let tau = Complex64::from_polar(c, angle);
                let lt: Cvec = ls.iter().zip(&self.rho_hat).map(|(x, r)| tau * r + x).collect();
                let ht: Cvec = hs.iter().zip(&self.rho_hat).map(|(x, r)| tau * r + x).collect();
                let (f, cond) = self.quotient(&lt, &ht);
                full += f;
                if k % 2 == 0 {
                    half += f;
                }
                worst = worst.max(cond);
            }
            let full = full / CIRCLE_NODES as f64;
            let half = half / (CIRCLE_NODES / 2) as f64;
            let error = f64::EPSILON * worst * full.norm() + (full - half).norm();
            if best.map_or(true, |(e, _)| error < e) {
                best = Some((error, full));
            }
        }
        best.unwrap().1
    }

    /// `φ_{ρ+iλ}(exp H)`.
    pub fn phi(&self, lambda: &SpectralVector, h: &CartanVector) -> Complex64 {
        self.phi_coords(lambda.coords(), h.coords())
    }

    pub fn phi_coords(&self, lambda: &[f64], h: &[f64]) -> Complex64 {
        if h.iter().all(|&x| x == 0.0) {
            return Complex64::new(1.0, 0.0);
        }
        let ratio: f64 = self.roots.iter().map(|a| 0.5 * x_over_sinh(dot(a, h))).product();
        let f = self.reduced_quotient(lambda, h);
        f * Complex64::i().powu(self.d() as u32).inv() * (self.pi_rho * ratio)
    }
}

/// `φ_{ρ+iλ}(exp H)`; builds the Weyl group on each call, so repeated
/// evaluation should go through [`SphericalEvaluator`].
pub fn zonal_spherical(rs: &RootSystem, lambda: &SpectralVector, h: &CartanVector) -> Result<Complex64> {
    Ok(SphericalEvaluator::new(rs)?.phi(lambda, h))
}
