//! Quadrature oracles for every analytic step that leads to the closed forms:
//! spectral synthesis against the spherical transform, the inversion
//! integral `I`, its reduction to a line integral, the Gaussian–harmonic
//! Fourier identity, the residue identity and the Jacobian square root.
//!
//! Each oracle computes its integral numerically and never calls the closed
//! forms in [`crate::fundsol`].

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
pub use crate::quad::QuadratureConfig;
use crate::quad::{
    cosine_transform_inverse_power, integrate, integrate_2d_from, integrate_fourier, integrate_oscillatory,
    integrate_to_infinity, symmetric_breaks, Estimate, Weight,
};
use crate::rootsys::RootSystem;
use crate::special::bessel_k;
use crate::spherical::{x_over_sinh, CartanVector, SphericalEvaluator};

/// How the line integral `∫_ℝ e^{iλr}/(λ²+z²)^p dλ` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineIntegralMethod {
    /// Adaptive Fourier quadrature.
    Quadrature,
    /// `2√π/Γ(p) · (r/2z)^{p−1/2} K_{p−1/2}(zr)`.
    ClosedForm,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sign_of_power(nu: u32) -> f64 {
    if nu % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_inputs(rs: &RootSystem, h: &CartanVector, z: f64, max_rank: Option<usize>) -> Result<()> {
    if h.dim() != rs.rank() {
        return Err(Error::InvalidParameter(format!("H has dimension {}, rank is {}", h.dim(), rs.rank())));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::InvalidParameter(format!("need real z > 0, got {z}")));
    }
    if let Some(max) = max_rank {
        if rs.rank() > max {
            return Err(Error::InvalidParameter(format!(
                "direct quadrature supports rank ≤ {max}, got rank {}",
                rs.rank()
            )));
        }
    }
    Ok(())
}

fn require_exponent(nu: u32, bound: f64, what: &str) -> Result<()> {
    if f64::from(nu) > bound {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} needs ν > {bound}, got ν = {nu}")))
    }
}

/// `(−1)^ν (−i)^d / (π⁺(ρ) Π_{α>0} 2 sinh α(H))`; `H` must be regular.
pub fn prefactor(rs: &RootSystem, h: &CartanVector, nu: u32) -> Result<Complex64> {
    let denom: f64 = rs.positive_roots_euclid().iter().map(|a| 2.0 * dot(a, h.coords()).sinh()).product();
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::InvalidParameter("prefactor needs H off every root wall".into()));
    }
    let pi_rho = rs.pi_plus_rho().to_f64().unwrap();
    let phase = (-Complex64::i()).powu(rs.num_positive() as u32);
    Ok(phase * (sign_of_power(nu) / (pi_rho * denom)))
}

/// `J^{1/2}(H) = Π_{α>0} sinh α(H) / α(H)`, equal to 1 on walls' limits.
pub fn jacobian_sqrt(rs: &RootSystem, h: &CartanVector) -> f64 {
    rs.positive_roots_euclid().iter().map(|a| 1.0 / x_over_sinh(dot(a, h.coords()))).product()
}

/// `(lhs, rhs)` of `∫_ℝ e^{iλt}/(λ²+z²) dλ = π e^{−zt}/z`, the left side
/// by quadrature.
pub fn residue_check(z: f64, t: f64) -> Result<(f64, f64)> {
    let cfg = QuadratureConfig { rel_tol: 1e-12, ..QuadratureConfig::default() };
    let lhs = 2.0 * cosine_transform_inverse_power(1.0, z, t.abs(), &cfg)?.value;
    Ok((lhs, PI * (-z * t.abs()).exp() / z))
}

/// `∫_ℝ e^{iλr}/(λ²+z²)^p dλ` for `p > 1/2`, `r ≥ 0`.
pub fn line_integral(p: f64, z: f64, r: f64, method: LineIntegralMethod, cfg: &QuadratureConfig) -> Result<f64> {
    if !(p > 0.5 && z > 0.0 && r >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "line integral needs p > 1/2, z > 0, r ≥ 0 (got p = {p}, z = {z}, r = {r})"
        )));
    }
    match method {
        LineIntegralMethod::Quadrature => Ok(2.0 * cosine_transform_inverse_power(p, z, r, cfg)?.value),
        LineIntegralMethod::ClosedForm => {
            let q = p - 0.5;
            if r == 0.0 {
                return Ok(PI.sqrt() * gamma(q) / (gamma(p) * z.powf(2.0 * q)));
            }
            Ok(2.0 * PI.sqrt() / gamma(p) * (r / (2.0 * z)).powf(q) * bessel_k(q, z * r)?)
        }
    }
}

/// `I(H)` reduced to one real variable:
/// `i^d 2^{−d} π⁺(H) π^{(n−1)/2} Γ(p)/Γ(ν) ∫_ℝ e^{iλ|H|}/(λ²+z²)^p dλ`
/// with `p = ν − d − (n−1)/2`. Valid in every rank.
pub fn integral_i_reduced(
    rs: &RootSystem,
    h: &CartanVector,
    z: f64,
    nu: u32,
    method: LineIntegralMethod,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    check_inputs(rs, h, z, None)?;
    let n = rs.rank() as f64;
    let d = rs.num_positive();
    let p = f64::from(nu) - d as f64 - (n - 1.0) / 2.0;
    if p <= 0.5 {
        return Err(Error::InvalidParameter(format!("reduction needs ν − d − (n−1)/2 > 1/2, got {p}")));
    }
    let pi_h = rs.pi_plus_euclid(h.coords());
    if pi_h == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let line = line_integral(p, z, h.norm(), method, cfg)?;
    let scale = 2f64.powi(-(d as i32)) * pi_h * PI.powf((n - 1.0) / 2.0) * gamma(p) / gamma(f64::from(nu)) * line;
    Ok(Complex64::i().powu(d as u32) * scale)
}

/// `I(H) = ∫_{𝔞*} π⁺(λ) e^{i⟨λ,H⟩} / (|λ|²+z²)^ν dλ` by direct quadrature
/// in rank 1 and 2.
pub fn integral_i_direct(
    rs: &RootSystem,
    h: &CartanVector,
    z: f64,
    nu: u32,
    cfg: &QuadratureConfig,
) -> Result<Estimate<Complex64>> {
    check_inputs(rs, h, z, Some(2))?;
    cfg.validate()?;
    let n = rs.rank() as f64;
    let d = rs.num_positive() as f64;
    require_exponent(nu, (n + d) / 2.0, "the inversion integral")?;
    let nu = f64::from(nu);
    if rs.rank() == 1 {
        // π⁺(λ) = aλ, and only the odd part of e^{iλh} survives.
        let a = rs.positive_roots_euclid()[0][0];
        let hx = h.coords()[0];
        let est = integrate_fourier(|l| l * (l * l + z * z).powf(-nu), hx.abs(), Weight::Sin, cfg)?;
        let factor = Complex64::new(0.0, 2.0 * a * hx.signum());
        return Ok(Estimate { value: factor * est.value, error: 2.0 * a.abs() * est.error });
    }
    let radius = cfg.radius_for(z);
    let breaks = symmetric_breaks(radius, 1.0);
    let hc = h.coords().to_vec();
    integrate_2d_from(
        |x: f64, y: f64| {
            let l = [x, y];
            let weight = rs.pi_plus_euclid(&l) * (x * x + y * y + z * z).powf(-nu);
            Complex64::from_polar(weight, dot(&l, &hc))
        },
        &breaks,
        &breaks,
        cfg,
    )
}

/// `(1/|W|) ∫_{𝔞*} (−1)^ν (|ξ|²+z²)^{−ν} φ_{ρ+iξ}(exp H) |c(ξ)|^{−2} dξ` in
/// rank 1 and 2.
pub fn spectral_synthesis(
    rs: &RootSystem,
    h: &CartanVector,
    z: f64,
    nu: u32,
    cfg: &QuadratureConfig,
) -> Result<Estimate<Complex64>> {
    check_inputs(rs, h, z, Some(2))?;
    cfg.validate()?;
    let n = rs.rank() as f64;
    let d = rs.num_positive() as f64;
    require_exponent(nu, (n + 2.0 * d) / 2.0, "spectral synthesis")?;
    let sign = sign_of_power(nu);
    let nu_f = f64::from(nu);
    // The density is O(dist²) near walls while the Weyl-sum error is
    // O(ε/dist), so the direct sum stays accurate enough far longer.
    let eval = SphericalEvaluator::new(rs)?.with_max_condition(1e8);
    let order = eval.weyl_group().order() as f64;
    let density = |xi: &[f64]| {
        let ratio = rs.pi_plus_euclid(xi) / eval.pi_plus_rho();
        ratio * ratio
    };
    let at_base = h.coords().iter().all(|&x| x == 0.0);

    if rs.rank() == 1 {
        // The integrand is even in ξ, so the full line over |W| = 2 is the
        // half line.
        let radial = |xi: f64| sign * (xi * xi + z * z).powf(-nu_f) * density(&[xi]);
        let est = if at_base {
            integrate_to_infinity(radial, 0.0, cfg)?
        } else {
            // φ ∝ sin(ξ·H)/ξ changes sign every π/|H|.
            let period = PI / h.coords()[0].abs();
            integrate_oscillatory(|xi| radial(xi) * eval.phi_coords(&[xi], h.coords()).re, period, period, cfg)?
        };
        return Ok(Estimate { value: Complex64::new(est.value, 0.0), error: est.error });
    }

    if at_base {
        // φ(·, 0) = 1: split into angular and radial factors.
        let angular = integrate(
            |theta: f64| density(&[theta.cos(), theta.sin()]),
            0.0,
            2.0 * PI,
            cfg,
        )?;
        let radial = integrate_to_infinity(
            |r: f64| r.powi(2 * rs.num_positive() as i32 + 1) * (r * r + z * z).powf(-nu_f),
            0.0,
            cfg,
        )?;
        let value = sign * angular.value * radial.value / order;
        let error = (angular.error * radial.value.abs() + radial.error * angular.value.abs()) / order;
        return Ok(Estimate { value: Complex64::new(value, 0.0), error });
    }

    let radius = cfg.radius_for(z);
    let breaks = symmetric_breaks(radius, 1.0);
    let est = integrate_2d_from(
        |x: f64, y: f64| {
            let xi = [x, y];
            let w = density(&xi);
            if w == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            eval.phi_coords(&xi, h.coords()) * (sign * (x * x + y * y + z * z).powf(-nu_f) * w)
        },
        &breaks,
        &breaks,
        cfg,
    )?;
    Ok(Estimate { value: est.value / order, error: est.error / order })
}

/// `(lhs, rhs)` of `∫ e^{−|λ|²} π⁺(λ) e^{i⟨λ,H⟩/√t} dλ
/// = π^{n/2} (i/2)^d t^{−d/2} π⁺(H) e^{−|H|²/(4t)}`, the left side by
/// quadrature over `|λ_i| ≤ 8` in rank 1 and 2.
pub fn hecke_check(
    rs: &RootSystem,
    h: &CartanVector,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, Complex64)> {
    check_inputs(rs, h, 1.0, Some(2))?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("need t > 0, got {t}")));
    }
    let n = rs.rank();
    let d = rs.num_positive();
    let scaled: Vec<f64> = h.coords().iter().map(|x| x / t.sqrt()).collect();
    const EDGE: f64 = 8.0;
    let lhs = if n == 1 {
        let a = rs.positive_roots_euclid()[0][0];
        let w = scaled[0];
        let est = integrate(|l: f64| l * (-l * l).exp() * (l * w).sin(), 0.0, EDGE, cfg)?;
        Complex64::new(0.0, 2.0 * a * est.value)
    } else {
        let breaks = symmetric_breaks(EDGE, 1.0);
        integrate_2d_from(
            |x: f64, y: f64| {
                let l = [x, y];
                let weight = (-(x * x + y * y)).exp() * rs.pi_plus_euclid(&l);
                Complex64::from_polar(weight, dot(&l, &scaled))
            },
            &breaks,
            &breaks,
            cfg,
        )?
        .value
    };
    let r2 = h.norm().powi(2);
    let rhs = (Complex64::i() * 0.5).powu(d as u32)
        * (PI.powf(n as f64 / 2.0) * t.powf(-(d as f64) / 2.0) * rs.pi_plus_euclid(h.coords()) * (-r2 / (4.0 * t)).exp());
    Ok((lhs, rhs))
}
