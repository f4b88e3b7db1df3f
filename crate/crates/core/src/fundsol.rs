//! Closed-form fundamental solutions `u_z` of `(Δ − λ_z)^ν`.
//!
//! Every formula carries the factor `2^{−d}` produced by the Fourier
//! transform of a Gaussian times `π⁺`; the constants are pinned by the
//! quadrature oracles in [`crate::oracle`].

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::rootsys::RootSystem;
use crate::special::bessel_k;
use crate::spherical::{x_over_sinh, CartanVector};

/// Which closed form a parameter set selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    /// Odd rank, `ν = d + (n+1)/2`: elementary.
    Odd,
    /// Even rank, `ν = d + n/2 + 1`: `K₁`.
    Even,
    /// Any `ν` with `ν − d − n/2 > 0`: `K_{ν−d−n/2}`.
    General,
}

/// `(R, n, d, ν, z)` with `Re(z) > 0`.
#[derive(Debug, Clone)]
pub struct SolutionParams {
    rs: RootSystem,
    nu: u32,
    z: Complex64,
}

impl SolutionParams {
    pub fn new(rs: &RootSystem, nu: u32, z: Complex64) -> Result<Self> {
        if !(z.re > 0.0 && z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("need Re(z) > 0, got z = {z}")));
        }
        if nu == 0 {
            return Err(Error::InvalidParameter("ν must be a positive integer".into()));
        }
        Ok(SolutionParams { rs: rs.clone(), nu, z })
    }

    /// The odd-rank canonical exponent `ν = d + (n+1)/2`.
    pub fn odd(rs: &RootSystem, z: Complex64) -> Result<Self> {
        let nu = canonical_nu_odd(rs).ok_or_else(|| parity_error(rs, 0, "odd-rank exponent d + (n+1)/2"))?;
        Self::new(rs, nu, z)
    }

    /// The even-rank canonical exponent `ν = d + n/2 + 1`.
    pub fn even(rs: &RootSystem, z: f64) -> Result<Self> {
        let nu = canonical_nu_even(rs).ok_or_else(|| parity_error(rs, 0, "even-rank exponent d + n/2 + 1"))?;
        Self::new(rs, nu, Complex64::new(z, 0.0))
    }

    /// Any `ν` with `ν − d − n/2 > 0`; `z` real.
    pub fn general(rs: &RootSystem, nu: u32, z: f64) -> Result<Self> {
        let p = Self::new(rs, nu, Complex64::new(z, 0.0))?;
        if p.bessel_order() <= 0.0 {
            return Err(parity_error(rs, nu, "condition ν − d − n/2 > 0"));
        }
        Ok(p)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn num_positive(&self) -> usize {
        self.rs.num_positive()
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `λ_z = z² − |ρ|²`.
    pub fn lambda_z(&self) -> Complex64 {
        self.z * self.z - self.rs.rho_norm_sq().to_f64().unwrap()
    }

    /// `ν − d − n/2`.
    pub fn bessel_order(&self) -> f64 {
        f64::from(self.nu) - self.num_positive() as f64 - self.rank() as f64 / 2.0
    }

    /// The closed form that applies to these parameters.
    pub fn kind(&self) -> SolutionKind {
        if Some(self.nu) == canonical_nu_odd(&self.rs) {
            SolutionKind::Odd
        } else if Some(self.nu) == canonical_nu_even(&self.rs) {
            SolutionKind::Even
        } else {
            SolutionKind::General
        }
    }

    fn real_z(&self, what: &str) -> Result<f64> {
        if self.z.im == 0.0 {
            Ok(self.z.re)
        } else {
            Err(Error::InvalidParameter(format!("{what} needs real z > 0, got z = {}", self.z)))
        }
    }

    /// `π⁺(ρ)`.
    fn pi_rho(&self) -> f64 {
        self.rs.pi_plus_rho().to_f64().unwrap()
    }

    fn sign(&self) -> f64 {
        if self.nu % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

fn parity_error(rs: &RootSystem, nu: u32, expected: &'static str) -> Error {
    Error::ParityMismatch { nu, rank: rs.rank(), positive_roots: rs.num_positive(), expected }
}

/// `d + (n+1)/2` when `n` is odd.
pub fn canonical_nu_odd(rs: &RootSystem) -> Option<u32> {
    let n = rs.rank();
    (n % 2 == 1).then(|| (rs.num_positive() + (n + 1) / 2) as u32)
}

/// `d + n/2 + 1` when `n` is even.
pub fn canonical_nu_even(rs: &RootSystem) -> Option<u32> {
    let n = rs.rank();
    (n % 2 == 0).then(|| (rs.num_positive() + n / 2 + 1) as u32)
}

/// `Π_{α>0} α(H) / (2 sinh α(H))`, equal to `2^{−d}` at `H = 0`.
pub fn sinh_ratio_product(rs: &RootSystem, h: &CartanVector) -> f64 {
    rs.positive_roots_euclid()
        .iter()
        .map(|a| 0.5 * x_over_sinh(a.iter().zip(h.coords()).map(|(x, y)| x * y).sum()))
        .product()
}

fn check_dim(p: &SolutionParams, h: &CartanVector) -> Result<()> {
    if h.dim() == p.rank() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("H has dimension {}, rank is {}", h.dim(), p.rank())))
    }
}

/// Odd rank, `ν = d + (n+1)/2`:
/// `(−1)^ν π^{(n+1)/2} / (2^d π⁺(ρ) Γ(ν)) · Π α/(2 sinh α) · e^{−z|H|}/z`.
pub fn u_odd(p: &SolutionParams, h: &CartanVector) -> Result<Complex64> {
    check_dim(p, h)?;
    if p.kind() != SolutionKind::Odd {
        return Err(parity_error(&p.rs, p.nu, "odd-rank exponent d + (n+1)/2"));
    }
    let n = p.rank() as f64;
    let d = p.num_positive() as i32;
    let constant = p.sign() * PI.powf((n + 1.0) / 2.0) / (2f64.powi(d) * p.pi_rho() * gamma(f64::from(p.nu)));
    let r = h.norm();
    Ok((-p.z * r).exp() / p.z * (constant * sinh_ratio_product(&p.rs, h)))
}

/// `(r/2z)^q K_q(zr)`, continuous at `r = 0` with value `Γ(q)/(2 z^{2q})`.
fn bessel_profile(q: f64, z: f64, r: f64) -> Result<f64> {
    let x = z * r;
    if q == 0.5 {
        return Ok(PI.sqrt() / (2.0 * z) * (-x).exp());
    }
    if x < 1e-8 {
        return Ok(gamma(q) / (2.0 * z.powf(2.0 * q)));
    }
    Ok((r / (2.0 * z)).powf(q) * bessel_k(q, x)?)
}

/// General `ν`:
/// `2(−1)^ν π^{n/2} / (2^d π⁺(ρ) Γ(ν)) · Π α/(2 sinh α) · (|H|/2z)^q K_q(z|H|)`
/// with `q = ν − d − n/2 > 0`.
pub fn u_general(p: &SolutionParams, h: &CartanVector) -> Result<Complex64> {
    check_dim(p, h)?;
    let q = p.bessel_order();
    if q <= 0.0 {
        return Err(parity_error(&p.rs, p.nu, "condition ν − d − n/2 > 0"));
    }
    let z = p.real_z("the K-Bessel form")?;
    let n = p.rank() as f64;
    let d = p.num_positive() as i32;
    let constant = 2.0 * p.sign() * PI.powf(n / 2.0) / (2f64.powi(d) * p.pi_rho() * gamma(f64::from(p.nu)));
    let value = constant * sinh_ratio_product(&p.rs, h) * bessel_profile(q, z, h.norm())?;
    Ok(Complex64::new(value, 0.0))
}

/// Even rank, `ν = d + n/2 + 1`:
/// `(−1)^ν π^{n/2} / (2^d π⁺(ρ) Γ(ν)) · Π α/(2 sinh α) · (|H|/z) K₁(z|H|)`.
pub fn u_even(p: &SolutionParams, h: &CartanVector) -> Result<Complex64> {
    if p.kind() != SolutionKind::Even {
        return Err(parity_error(&p.rs, p.nu, "even-rank exponent d + n/2 + 1"));
    }
    u_general(p, h)
}

/// Dispatches on [`SolutionParams::kind`]; the odd form is used whenever it
/// applies, since it accepts complex `z`.
pub fn u_eval(p: &SolutionParams, h: &CartanVector) -> Result<Complex64> {
    match p.kind() {
        SolutionKind::Odd => u_odd(p, h),
        SolutionKind::Even => u_even(p, h),
        SolutionKind::General => u_general(p, h),
    }
}

/// Odd rank with `ν = m + d + (n+1)/2`, written elementarily:
/// `(−1)^ν π^{(n+1)/2} / (2^d (ν−1)! π⁺(ρ)) · Π α/(2 sinh α) · e^{−z|H|}/z ·
/// P(|H|, 1/z)` with `P(r, w) = Σ_{j≤m} (m+j)!/(j!(m−j)!) r^{m−j} (w/2)^{m+j}`.
pub fn u_elementary(p: &SolutionParams, h: &CartanVector) -> Result<Complex64> {
    check_dim(p, h)?;
    let q = p.bessel_order();
    if p.rank() % 2 == 0 || q < 0.5 {
        return Err(parity_error(&p.rs, p.nu, "odd-rank exponent m + d + (n+1)/2"));
    }
    let m = (q - 0.5).round() as u32;
    let n = p.rank() as f64;
    let d = p.num_positive() as i32;
    let r = h.norm();
    let half_w = 0.5 / p.z;
    let mut poly = Complex64::new(0.0, 0.0);
    let mut coeff = 1.0;
    for j in 0..=m {
        if j > 0 {
            coeff *= f64::from(m + j) * f64::from(m - j + 1) / f64::from(j);
        }
        poly += half_w.powu(m + j) * (coeff * r.powi((m - j) as i32));
    }
    let constant = p.sign() * PI.powf((n + 1.0) / 2.0) / (2f64.powi(d) * gamma(f64::from(p.nu)) * p.pi_rho());
    Ok((-p.z * r).exp() / p.z * poly * (constant * sinh_ratio_product(&p.rs, h)))
}

/// Large-`z|H|` form of the even-rank solution, with `K₁(x)` replaced by
/// `√(π/2x) e^{−x}`.
pub fn u_even_asymptotic(p: &SolutionParams, h: &CartanVector) -> Result<Complex64> {
    check_dim(p, h)?;
    if p.kind() != SolutionKind::Even {
        return Err(parity_error(&p.rs, p.nu, "even-rank exponent d + n/2 + 1"));
    }
    let z = p.real_z("the asymptotic form")?;
    let n = p.rank() as f64;
    let d = p.num_positive() as i32;
    let r = h.norm();
    let constant =
        p.sign() * PI.powf((n + 1.0) / 2.0) / (2f64.sqrt() * 2f64.powi(d) * p.pi_rho() * gamma(f64::from(p.nu)));
    let value = constant * sinh_ratio_product(&p.rs, h) * (r / z).sqrt() * (-z * r).exp() / z;
    Ok(Complex64::new(value, 0.0))
}

/// Value at the base point `H = 0`.
pub fn u_at_base_point(p: &SolutionParams) -> Result<Complex64> {
    u_eval(p, &CartanVector::zero(p.rank()))
}
