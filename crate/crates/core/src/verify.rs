//! Finite-difference checks in rank 1 and the repository-wide consistency
//! report.
//!
//! The radial Laplacian on a rank-one space is `|ρ|²(∂_s² + 2 coth s ∂_s)` in
//! the variable `s = ρ(H)`; with this normalization `φ_{ρ+iξ}` has
//! eigenvalue `−(|ξ|² + |ρ|²)`, which [`eigenvalue_error_rank1`] checks.

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fundsol::{
    canonical_nu_even, canonical_nu_odd, u_elementary, u_eval, u_even_asymptotic, u_general, u_odd, SolutionParams,
};
use crate::oracle::{
    hecke_check, integral_i_direct, integral_i_reduced, prefactor, residue_check, spectral_synthesis,
    LineIntegralMethod, QuadratureConfig,
};
use crate::rootsys::{invert, rat, weyl_group, PiPlus, RootSystem};
use crate::special::{bessel_k, bessel_k_quadrature_with};
use crate::spherical::{casimir_eigenvalue, CartanVector, SpectralVector, SphericalEvaluator};

/// Central-difference step and stencil order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDConfig {
    step: f64,
    order: u8,
}

impl FDConfig {
    pub fn new(step: f64, order: u8) -> Result<Self> {
        if !(1e-5..=1e-1).contains(&step) {
            return Err(Error::InvalidParameter(format!("finite-difference step must lie in [1e-5, 1e-1], got {step}")));
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidParameter(format!("stencil order must be 2 or 4, got {order}")));
        }
        Ok(FDConfig { step, order })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    /// Half-width of the stencil.
    fn reach(&self) -> f64 {
        f64::from(self.order / 2) * self.step
    }

    fn derivatives<F: Fn(f64) -> f64>(&self, f: &F, s: f64) -> (f64, f64) {
        let h = self.step;
        let (fm1, f0, fp1) = (f(s - h), f(s), f(s + h));
        if self.order == 2 {
            return ((fp1 - fm1) / (2.0 * h), (fp1 - 2.0 * f0 + fm1) / (h * h));
        }
        let (fm2, fp2) = (f(s - 2.0 * h), f(s + 2.0 * h));
        let d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
        let d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        (d1, d2)
    }
}

impl Default for FDConfig {
    fn default() -> Self {
        FDConfig { step: 1e-2, order: 4 }
    }
}

fn require_rank_one(rs: &RootSystem) -> Result<f64> {
    if rs.rank() != 1 {
        return Err(Error::InvalidParameter(format!("radial operator needs rank 1, got {}", rs.label())));
    }
    Ok(rs.rho_norm_sq().to_f64().unwrap())
}

/// `H` on the ray through `ρ` with `ρ(H) = s`.
pub fn ray_point_rank1(rs: &RootSystem, s: f64) -> Result<CartanVector> {
    let rho2 = require_rank_one(rs)?;
    CartanVector::new(rs.rho_euclid().iter().map(|r| r * s / rho2).collect())
}

/// `|ρ|² (f''(s) + 2 coth(s) f'(s))` by central differences.
pub fn radial_laplacian_rank1<F: Fn(f64) -> f64>(f: F, s: f64, rs: &RootSystem, cfg: &FDConfig) -> Result<f64> {
    let rho2 = require_rank_one(rs)?;
    if s <= cfg.reach() {
        return Err(Error::InvalidParameter(format!(
            "s = {s} is too close to the origin for a stencil reaching {}",
            cfg.reach()
        )));
    }
    let (d1, d2) = cfg.derivatives(&f, s);
    Ok(rho2 * (d2 + 2.0 * d1 / s.tanh()))
}

/// `|(Δ_rad + |ξ|² + |ρ|²) φ| / |φ|` at `ξ = tρ`, `ρ(H) = s`, on `A₁`.
pub fn eigenvalue_error_rank1(t: f64, s: f64, cfg: &FDConfig) -> Result<f64> {
    let rs = RootSystem::from_spec("A:1")?;
    let eval = SphericalEvaluator::new(&rs)?;
    let xi: Vec<f64> = rs.rho_euclid().iter().map(|r| r * t).collect();
    let phi = |x: f64| -> f64 {
        let h = ray_point_rank1(&rs, x).unwrap();
        eval.phi_coords(&xi, h.coords()).re
    };
    let lap = radial_laplacian_rank1(phi, s, &rs, cfg)?;
    let eigen = casimir_eigenvalue(&rs, &SpectralVector::new(xi.clone())?);
    let value = phi(s);
    Ok((lap - eigen * value).abs() / value.abs())
}

/// `|(Δ_rad − λ_z)² u(s)| / |λ_z² u(s)|` for the odd-rank solution on `A₁`,
/// with nested differences.
pub fn pde_residual_rank1(z: f64, s: f64, cfg: &FDConfig) -> Result<f64> {
    if !(0.2..=10.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("s must lie in [0.2, 10], got {s}")));
    }
    if 2.0 * cfg.reach() >= s {
        return Err(Error::InvalidParameter(format!(
            "step {} is too large for order {} nested differences at s = {s}",
            cfg.step, cfg.order
        )));
    }
    let rs = RootSystem::from_spec("A:1")?;
    let p = SolutionParams::odd(&rs, Complex64::new(z, 0.0))?;
    let lambda = p.lambda_z().re;
    let u = |x: f64| -> f64 { u_odd(&p, &ray_point_rank1(&rs, x).unwrap()).unwrap().re };
    let g = |x: f64| -> f64 { radial_laplacian_rank1(u, x, &rs, cfg).unwrap() - lambda * u(x) };
    let outer = radial_laplacian_rank1(g, s, &rs, cfg)? - lambda * g(s);
    Ok(outer.abs() / (lambda * lambda * u(s)).abs())
}

/// Unit vector `H` with `α_i(H)` proportional to `values` for the simple
/// roots; positive values give a chamber-interior direction.
pub fn chamber_direction(rs: &RootSystem, values: &[f64]) -> Result<CartanVector> {
    let n = rs.rank();
    if values.len() != n {
        return Err(Error::InvalidParameter(format!("need {n} simple-root values, got {}", values.len())));
    }
    let inv = invert(rs.gram()).ok_or_else(|| Error::InvalidParameter("singular Gram matrix".into()))?;
    let y: Vec<f64> =
        inv.iter().map(|row| row.iter().zip(values).map(|(a, v)| a.to_f64().unwrap() * v).sum()).collect();
    let x = rs.to_euclid(&y);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    CartanVector::new(x.iter().map(|v| v / norm).collect())
}

/// The `ρ` direction and, in rank ≥ 2, a second chamber direction with
/// distinct simple-root values.
pub fn chamber_rays(rs: &RootSystem) -> Result<Vec<CartanVector>> {
    let rho = rs.rho_euclid();
    let norm = rho.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut rays = vec![CartanVector::new(rho.iter().map(|v| v / norm).collect())?];
    if rs.rank() >= 2 {
        let values: Vec<f64> = (1..=rs.rank()).map(|k| k as f64).collect();
        rays.push(chamber_direction(rs, &values)?);
    }
    Ok(rays)
}

/// Points `|H| = 2.5·k/count`, `k = 1..count`, on each chamber ray.
pub fn ray_grid(rs: &RootSystem, count: usize) -> Result<Vec<CartanVector>> {
    let mut out = Vec::new();
    for ray in chamber_rays(rs)? {
        for k in 1..=count {
            out.push(ray.scaled(2.5 * k as f64 / count as f64));
        }
    }
    Ok(out)
}

/// Whether [`three_way_point`] multiplies the prefactor by −1, to confirm
/// that the comparison detects a sign error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefactorSign {
    Correct,
    Flipped,
}

/// A closed-form value with the oracle values it is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeWayPoint {
    pub closed_form: Complex64,
    /// prefactor × reduced line integral.
    pub reduced: Complex64,
    /// prefactor × direct quadrature; rank ≤ 2 only.
    pub direct: Option<Complex64>,
    /// Spectral synthesis; rank ≤ 2 only.
    pub synthesis: Option<Complex64>,
}

impl ThreeWayPoint {
    fn rel(&self, v: Complex64) -> f64 {
        (v - self.closed_form).norm() / self.closed_form.norm()
    }

    pub fn reduced_error(&self) -> f64 {
        self.rel(self.reduced)
    }

    pub fn direct_error(&self) -> Option<f64> {
        self.direct.map(|v| self.rel(v))
    }

    pub fn synthesis_error(&self) -> Option<f64> {
        self.synthesis.map(|v| self.rel(v))
    }

    /// Largest `|Im v| / |v|` over the oracle values.
    pub fn imaginary_ratio(&self) -> f64 {
        [Some(self.reduced), self.direct, self.synthesis]
            .into_iter()
            .flatten()
            .map(|v| v.im.abs() / v.norm())
            .fold(0.0, f64::max)
    }
}

/// The canonical exponent for the rank parity of `rs`.
pub fn canonical_nu(rs: &RootSystem) -> u32 {
    canonical_nu_odd(rs).or_else(|| canonical_nu_even(rs)).unwrap()
}

/// Compares the closed form at `(H, z)` with the reduced, direct and
/// spectral oracles.
pub fn three_way_point(
    rs: &RootSystem,
    h: &CartanVector,
    z: f64,
    cfg: &QuadratureConfig,
    sign: PrefactorSign,
) -> Result<ThreeWayPoint> {
    let nu = canonical_nu(rs);
    let params = SolutionParams::new(rs, nu, Complex64::new(z, 0.0))?;
    let closed_form = u_eval(&params, h)?;
    let mut pre = prefactor(rs, h, nu)?;
    if sign == PrefactorSign::Flipped {
        pre = -pre;
    }
    let reduced = pre * integral_i_reduced(rs, h, z, nu, LineIntegralMethod::Quadrature, cfg)?;
    let (direct, synthesis) = if rs.rank() <= 2 {
        (
            Some(pre * integral_i_direct(rs, h, z, nu, cfg)?.value),
            Some(spectral_synthesis(rs, h, z, nu, cfg)?.value),
        )
    } else {
        (None, None)
    };
    Ok(ThreeWayPoint { closed_form, reduced, direct, synthesis })
}

/// A family of checks that run together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Harmonicity,
    Spherical,
    Bessel,
    Fundsol,
    ThreeWay,
    Residue,
    Hecke,
    Pde,
    NegativeControl,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Harmonicity,
        Suite::Spherical,
        Suite::Bessel,
        Suite::Fundsol,
        Suite::ThreeWay,
        Suite::Residue,
        Suite::Hecke,
        Suite::Pde,
        Suite::NegativeControl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Harmonicity => "harmonicity",
            Suite::Spherical => "spherical",
            Suite::Bessel => "bessel",
            Suite::Fundsol => "fundsol",
            Suite::ThreeWay => "three_way",
            Suite::Residue => "residue",
            Suite::Hecke => "hecke",
            Suite::Pde => "pde",
            Suite::NegativeControl => "negative_control",
        }
    }

    pub fn parse(name: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {name:?}")))
    }

    /// Suites whose tolerances follow the quadrature override.
    pub fn uses_quadrature(self) -> bool {
        matches!(self, Suite::Bessel | Suite::ThreeWay | Suite::Residue | Suite::Hecke)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: Status,
    pub achieved_error: f64,
    pub tolerance: f64,
    pub parameters: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl CheckResult {
    fn measured(check_id: String, achieved_error: f64, tolerance: f64, parameters: Value) -> Self {
        let status = if achieved_error <= tolerance { Status::Pass } else { Status::Fail };
        CheckResult { check_id, status, achieved_error, tolerance, parameters, diagnostic: None }
    }

    fn from_result(check_id: String, result: Result<f64>, tolerance: f64, parameters: Value) -> Self {
        match result {
            Ok(err) => Self::measured(check_id, err, tolerance, parameters),
            Err(e) => CheckResult {
                check_id,
                status: Status::Fail,
                achieved_error: f64::INFINITY,
                tolerance,
                parameters,
                diagnostic: Some(e.to_string()),
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Which suites to run and how.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    /// Empty runs every suite.
    pub suites: Vec<Suite>,
    /// Replaces the tolerance of every quadrature-based check; the quadrature
    /// itself is then run a hundred times more tightly.
    pub tolerance: Option<f64>,
    /// Systems for the multi-system suites.
    pub systems: Vec<String>,
    /// Points per chamber ray in the three-way suite.
    pub points_per_ray: usize,
    /// Perturbs one coefficient of π⁺ in the harmonicity suite.
    pub corrupt_pi_plus: bool,
    /// Flips the prefactor sign in the three-way suite.
    pub flip_prefactor_sign: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            suites: Vec::new(),
            tolerance: None,
            systems: ["A:1", "A:2", "C:2", "G:2", "A:3"].map(String::from).to_vec(),
            points_per_ray: 3,
            corrupt_pi_plus: false,
            flip_prefactor_sign: false,
        }
    }
}

impl ReportOptions {
    fn quadrature_config(&self, default_rel: f64) -> QuadratureConfig {
        let rel = self.tolerance.map_or(default_rel, |t| (t * 1e-2).clamp(1e-13, 1e-4));
        QuadratureConfig::with_rel_tol(rel)
    }

    fn tol(&self, suite: Suite, default: f64) -> f64 {
        match self.tolerance {
            Some(t) if suite.uses_quadrature() => t,
            _ => default,
        }
    }

    fn root_systems(&self) -> Result<Vec<RootSystem>> {
        self.systems.iter().map(|s| RootSystem::from_spec(s)).collect()
    }
}

/// Every check that was run, in a fixed order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Runs the selected suites, each on its own thread, and collects the results
/// in suite order.
pub fn consistency_report(options: &ReportOptions) -> Result<Report> {
    if let Some(t) = options.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("tolerance must be positive, got {t}")));
        }
    }
    let systems = options.root_systems()?;
    let suites: Vec<Suite> = if options.suites.is_empty() { Suite::ALL.to_vec() } else { options.suites.clone() };
    let results: Vec<Vec<CheckResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&suite| {
                let systems = &systems;
                scope.spawn(move || run_suite(suite, systems, options))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let checks: Vec<CheckResult> = results.into_iter().flatten().collect();
    Ok(Report { passed: checks.iter().all(CheckResult::passed), checks })
}

fn run_suite(suite: Suite, systems: &[RootSystem], options: &ReportOptions) -> Vec<CheckResult> {
    match suite {
        Suite::Harmonicity => harmonicity_suite(systems, options),
        Suite::Spherical => spherical_suite(systems),
        Suite::Bessel => bessel_suite(options),
        Suite::Fundsol => fundsol_suite(systems),
        Suite::ThreeWay => three_way_suite(systems, options),
        Suite::Residue => residue_suite(options),
        Suite::Hecke => hecke_suite(options),
        Suite::Pde => pde_suite(),
        Suite::NegativeControl => negative_control_suite(),
    }
}

/// π⁺ with `1/7` added to a single coefficient of one linear factor.
///
/// Some such perturbations leave the product harmonic (a rescaled factor,
/// or one that stays orthogonal to the others), so the first coefficient
/// whose perturbation breaks harmonicity is used. For a single factor every
/// linear form is harmonic and the first coefficient is perturbed anyway.
pub fn corrupted_pi_plus(rs: &RootSystem) -> PiPlus {
    let base = PiPlus::new(rs).factors().to_vec();
    let perturbed = |i: usize, j: usize| {
        let mut factors = base.clone();
        factors[i][j] += rat(1, 7);
        PiPlus::from_factors(factors, rs.metric().clone())
    };
    (0..base.len())
        .flat_map(|i| (0..rs.rank()).map(move |j| (i, j)))
        .map(|(i, j)| perturbed(i, j))
        .find(|p| !p.laplacian().is_zero())
        .unwrap_or_else(|| perturbed(0, 0))
}

fn harmonicity_suite(systems: &[RootSystem], options: &ReportOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for rs in systems {
        let pp = if options.corrupt_pi_plus { corrupted_pi_plus(rs) } else { PiPlus::new(rs) };
        let params = json!({ "system": rs.label(), "corrupted": options.corrupt_pi_plus });
        let lap = pp.laplacian();
        out.push(CheckResult::measured(
            format!("harmonicity.laplacian.{}", rs.label()),
            lap.num_terms() as f64,
            0.0,
            params.clone(),
        ));
        let pair = pp.pair_sum();
        out.push(CheckResult::measured(format!("harmonicity.pair_sum.{}", rs.label()), pair.num_terms() as f64, 0.0, params));
    }
    out
}

fn spherical_suite(systems: &[RootSystem]) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for rs in systems {
        let label = rs.label();
        let eval = match SphericalEvaluator::new(rs) {
            Ok(e) => e,
            Err(e) => {
                out.push(CheckResult::from_result(format!("spherical.setup.{label}"), Err(e), 0.0, json!({})));
                continue;
            }
        };
        let n = rs.rank();
        let lambda: Vec<f64> = (0..n).map(|i| 1.3 - 0.7 * i as f64).collect();
        let dir = chamber_rays(rs).map(|r| r[0].clone());
        let norm_err = dir.map(|d| {
            let tiny = eval.phi_coords(&lambda, d.scaled(1e-6).coords());
            let zero = eval.phi_coords(&lambda, &vec![0.0; n]);
            (tiny - 1.0).norm().max((zero - 1.0).norm())
        });
        out.push(CheckResult::from_result(
            format!("spherical.normalization.{label}"),
            norm_err,
            1e-8,
            json!({ "system": label, "lambda": lambda, "h_norm": 1e-6 }),
        ));
        let h: Vec<f64> = (0..n).map(|i| 0.45 + 0.31 * i as f64).collect();
        let base = eval.phi_coords(&lambda, &h);
        let worst = eval
            .weyl_group()
            .iter()
            .map(|w| (eval.phi_coords(&w.act_euclid(&lambda), &h) - base).norm())
            .fold(0.0, f64::max);
        out.push(CheckResult::measured(
            format!("spherical.weyl_invariance.{label}"),
            worst,
            1e-10,
            json!({ "system": label, "lambda": lambda, "h": h }),
        ));
    }
    out
}

fn bessel_suite(options: &ReportOptions) -> Vec<CheckResult> {
    let cfg = options.quadrature_config(1e-11);
    let tol = options.tol(Suite::Bessel, 1e-8);
    let mut out = Vec::new();
    for alpha in [0.5, 1.0, 1.5, 2.0] {
        let result = (|| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for k in 0..100 {
                let x = 0.1 * 200f64.powf(k as f64 / 99.0);
                let reference = bessel_k(alpha, x)?;
                let quad = bessel_k_quadrature_with(alpha, x, 1.0, &cfg)?;
                worst = worst.max((quad - reference).abs() / reference);
            }
            Ok(worst)
        })();
        out.push(CheckResult::from_result(
            format!("bessel.quadrature.alpha_{alpha}"),
            result,
            tol,
            json!({ "alpha": alpha, "x_range": [0.1, 20.0], "points": 100 }),
        ));
    }
    let small = bessel_k(1.0, 1e-4).map(|k| (1e-4 * k - 1.0).abs());
    out.push(CheckResult::from_result("bessel.small_argument".into(), small, 1e-4, json!({ "alpha": 1, "x": 1e-4 })));
    out
}

fn fundsol_suite(systems: &[RootSystem]) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for rs in systems {
        let label = rs.label();
        let nu = canonical_nu(rs);
        let z = 0.8;
        let rays = match chamber_rays(rs) {
            Ok(r) => r,
            Err(e) => {
                out.push(CheckResult::from_result(format!("fundsol.setup.{label}"), Err(e), 0.0, json!({})));
                continue;
            }
        };
        let collapse = (|| -> Result<f64> {
            let p = SolutionParams::new(rs, nu, Complex64::new(z, 0.0))?;
            let mut worst: f64 = 0.0;
            for k in 1..=6 {
                let h = rays[0].scaled(0.5 * k as f64);
                let canonical = u_eval(&p, &h)?;
                let general = u_general(&p, &h)?;
                worst = worst.max((general - canonical).norm() / canonical.norm());
                if rs.rank() % 2 == 1 {
                    let elementary = u_elementary(&p, &h)?;
                    worst = worst.max((elementary - canonical).norm() / canonical.norm());
                }
            }
            Ok(worst)
        })();
        out.push(CheckResult::from_result(
            format!("fundsol.collapse.{label}"),
            collapse,
            1e-10,
            json!({ "system": label, "nu": nu, "z": z }),
        ));
        let invariance = (|| -> Result<f64> {
            let p = SolutionParams::new(rs, nu, Complex64::new(z, 0.0))?;
            let h: Vec<f64> = (0..rs.rank()).map(|i| 0.7 - 0.45 * i as f64).collect();
            let base = u_eval(&p, &CartanVector::new(h.clone())?)?;
            let mut worst: f64 = 0.0;
            for w in weyl_group(rs)?.iter() {
                let v = u_eval(&p, &CartanVector::new(w.act_euclid(&h))?)?;
                worst = worst.max((v - base).norm() / base.norm());
            }
            Ok(worst)
        })();
        out.push(CheckResult::from_result(
            format!("fundsol.weyl_invariance.{label}"),
            invariance,
            1e-12,
            json!({ "system": label, "nu": nu, "z": z }),
        ));
        let continuity = (|| -> Result<f64> {
            let p = SolutionParams::new(rs, nu, Complex64::new(z, 0.0))?;
            let base = u_eval(&p, &CartanVector::zero(rs.rank()))?;
            let near = u_eval(&p, &rays[0].scaled(1e-6))?;
            Ok((near - base).norm() / base.norm())
        })();
        out.push(CheckResult::from_result(
            format!("fundsol.base_point_continuity.{label}"),
            continuity,
            1e-5,
            json!({ "system": label, "nu": nu, "z": z, "h_norm": 1e-6 }),
        ));
        if rs.rank() % 2 == 0 {
            let asymptotic = (|| -> Result<f64> {
                let z = 3.0;
                let p = SolutionParams::new(rs, nu, Complex64::new(z, 0.0))?;
                let h = rays[0].scaled(30.0 / z);
                let exact = u_eval(&p, &h)?;
                let approx = u_even_asymptotic(&p, &h)?;
                Ok((approx / exact - 1.0).norm())
            })();
            out.push(CheckResult::from_result(
                format!("fundsol.asymptotic.{label}"),
                asymptotic,
                0.02,
                json!({ "system": label, "nu": nu, "z_times_h": 30.0 }),
            ));
        }
    }
    out
}

fn three_way_suite(systems: &[RootSystem], options: &ReportOptions) -> Vec<CheckResult> {
    let cfg = options.quadrature_config(1e-8);
    let sign = if options.flip_prefactor_sign { PrefactorSign::Flipped } else { PrefactorSign::Correct };
    let per_system: Vec<Vec<CheckResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = systems
            .iter()
            .map(|rs| scope.spawn(move || three_way_system(rs, options, &cfg, sign)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("three-way thread panicked")).collect()
    });
    per_system.into_iter().flatten().collect()
}

fn three_way_system(
    rs: &RootSystem,
    options: &ReportOptions,
    cfg: &QuadratureConfig,
    sign: PrefactorSign,
) -> Vec<CheckResult> {
    let label = rs.label();
    let nu = canonical_nu(rs);
    let params = json!({
        "system": label,
        "nu": nu,
        "z": [0.5, 1.0, 2.0],
        "points_per_ray": options.points_per_ray,
        "prefactor_sign": if sign == PrefactorSign::Flipped { "flipped" } else { "correct" },
    });
    let points = (|| -> Result<Vec<ThreeWayPoint>> {
        let grid = ray_grid(rs, options.points_per_ray)?;
        let mut out = Vec::new();
        for z in [0.5, 1.0, 2.0] {
            for h in &grid {
                out.push(three_way_point(rs, h, z, cfg, sign)?);
            }
        }
        Ok(out)
    })();
    let points = match points {
        Ok(p) => p,
        Err(e) => {
            return vec![CheckResult::from_result(format!("three_way.{label}"), Err(e), options.tol(Suite::ThreeWay, 1e-6), params)]
        }
    };
    let max = |f: &dyn Fn(&ThreeWayPoint) -> Option<f64>| points.iter().filter_map(f).fold(0.0, f64::max);
    let mut out = vec![CheckResult::measured(
        format!("three_way.reduced.{label}"),
        max(&|p| Some(p.reduced_error())),
        options.tol(Suite::ThreeWay, 1e-6),
        params.clone(),
    )];
    if rs.rank() <= 2 {
        out.push(CheckResult::measured(
            format!("three_way.direct.{label}"),
            max(&|p| p.direct_error()),
            options.tol(Suite::ThreeWay, 1e-5),
            params.clone(),
        ));
        out.push(CheckResult::measured(
            format!("three_way.synthesis.{label}"),
            max(&|p| p.synthesis_error()),
            options.tol(Suite::ThreeWay, 1e-5),
            params.clone(),
        ));
    }
    out.push(CheckResult::measured(
        format!("three_way.realness.{label}"),
        max(&|p| Some(p.imaginary_ratio())),
        1e-8,
        params,
    ));
    out
}

fn residue_suite(options: &ReportOptions) -> Vec<CheckResult> {
    let tol = options.tol(Suite::Residue, 1e-8);
    let result = (|| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for z in [0.5, 1.0, 2.0] {
            for t in [0.0, 1.0, 5.0] {
                let (lhs, rhs) = residue_check(z, t)?;
                worst = worst.max((lhs - rhs).abs() / rhs);
            }
        }
        Ok(worst)
    })();
    vec![CheckResult::from_result("residue.grid".into(), result, tol, json!({ "z": [0.5, 1.0, 2.0], "t": [0.0, 1.0, 5.0] }))]
}

/// `(system, |H|, t)` pairs for the Gaussian identity, `H` on the `ρ` ray.
pub const HECKE_CASES: [(&str, f64, f64); 5] =
    [("A:1", 0.5, 1.0), ("A:1", 1.7, 0.5), ("A:2", 1.0, 2.0), ("A:2", 0.6, 1.0), ("G:2", 1.2, 0.7)];

fn hecke_suite(options: &ReportOptions) -> Vec<CheckResult> {
    let cfg = options.quadrature_config(1e-10);
    let tol = options.tol(Suite::Hecke, 1e-6);
    HECKE_CASES
        .iter()
        .map(|&(spec, length, t)| {
            let result = (|| -> Result<f64> {
                let rs = RootSystem::from_spec(spec)?;
                let h = chamber_rays(&rs)?[0].scaled(length);
                let (lhs, rhs) = hecke_check(&rs, &h, t, &cfg)?;
                Ok((lhs - rhs).norm() / rhs.norm())
            })();
            CheckResult::from_result(
                format!("hecke.{}.h_{length}.t_{t}", spec.replace(':', "")),
                result,
                tol,
                json!({ "system": spec, "h_norm": length, "t": t }),
            )
        })
        .collect()
}

fn pde_suite() -> Vec<CheckResult> {
    let residual = (|| -> Result<f64> {
        let cfg = FDConfig::new(1e-2, 4)?;
        let mut worst: f64 = 0.0;
        for z in [0.5, 1.0, 2.0] {
            for s in [0.3, 1.0, 3.0] {
                worst = worst.max(pde_residual_rank1(z, s, &cfg)?);
            }
        }
        Ok(worst)
    })();
    let eigen = (|| -> Result<f64> {
        let cfg = FDConfig::new(1e-3, 4)?;
        let mut worst: f64 = 0.0;
        for t in [0.5, 1.0, 2.0] {
            for s in [0.5, 1.0, 2.0] {
                worst = worst.max(eigenvalue_error_rank1(t, s, &cfg)?);
            }
        }
        Ok(worst)
    })();
    vec![
        CheckResult::from_result(
            "pde.residual.A1".into(),
            residual,
            1e-3,
            json!({ "z": [0.5, 1.0, 2.0], "s": [0.3, 1.0, 3.0], "step": 1e-2, "order": 4 }),
        ),
        CheckResult::from_result(
            "pde.eigenvalue.A1".into(),
            eigen,
            1e-6,
            json!({ "t": [0.5, 1.0, 2.0], "s": [0.5, 1.0, 2.0], "step": 1e-3, "order": 4 }),
        ),
    ]
}

/// Each control passes when the corruption it injects is detected.
fn negative_control_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let detected = (|| -> Result<f64> {
        let rs = RootSystem::from_spec("A:2")?;
        let bad = corrupted_pi_plus(&rs);
        Ok(if bad.laplacian().is_zero() || bad.pair_sum().is_zero() { 1.0 } else { 0.0 })
    })();
    out.push(CheckResult::from_result(
        "negative_control.pi_plus_perturbation".into(),
        detected,
        0.0,
        json!({ "system": "A:2", "perturbation": "1/7 added to one coefficient" }),
    ));
    let detected = (|| -> Result<f64> {
        let rs = RootSystem::from_spec("A:1")?;
        let h = chamber_rays(&rs)?[0].scaled(1.0);
        let p = three_way_point(&rs, &h, 1.0, &QuadratureConfig::default(), PrefactorSign::Flipped)?;
        Ok(if p.reduced_error() <= 1e-6 { 1.0 } else { 0.0 })
    })();
    out.push(CheckResult::from_result(
        "negative_control.prefactor_sign".into(),
        detected,
        0.0,
        json!({ "system": "A:1", "z": 1.0, "h_norm": 1.0 }),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fd_config_bounds() {
        assert!(FDConfig::new(1e-6, 4).is_err());
        assert!(FDConfig::new(0.2, 4).is_err());
        assert!(FDConfig::new(1e-3, 3).is_err());
        assert!(FDConfig::new(1e-3, 2).is_ok());
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let rs = RootSystem::from_spec("A:1").unwrap();
        let v = radial_laplacian_rank1(|_| 3.0, 1.0, &rs, &FDConfig::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn laplacian_rejects_points_near_origin() {
        let rs = RootSystem::from_spec("A:1").unwrap();
        let cfg = FDConfig::new(1e-2, 4).unwrap();
        assert!(radial_laplacian_rank1(|s| s, 0.015, &rs, &cfg).is_err());
        let a2 = RootSystem::from_spec("A:2").unwrap();
        assert!(radial_laplacian_rank1(|s| s, 1.0, &a2, &cfg).is_err());
    }

    #[test]
    fn spherical_function_is_an_eigenfunction() {
        let cfg = FDConfig::new(1e-3, 4).unwrap();
        for t in [0.5, 1.0, 2.0] {
            for s in [0.5, 1.0, 2.0] {
                let err = eigenvalue_error_rank1(t, s, &cfg).unwrap();
                assert!(err < 1e-6, "t={t} s={s}: {err}");
            }
        }
    }

    #[test]
    fn residual_examples() {
        let cfg = FDConfig::new(1e-2, 4).unwrap();
        assert!(pde_residual_rank1(1.0, 1.0, &cfg).unwrap() < 1e-4);
        assert!(pde_residual_rank1(2.0, 0.5, &cfg).unwrap() < 1e-3);
        assert!(pde_residual_rank1(1.0, 0.1, &cfg).is_err());
    }

    #[test]
    fn residual_converges_at_stencil_order() {
        let coarse = pde_residual_rank1(1.0, 1.0, &FDConfig::new(4e-2, 2).unwrap()).unwrap();
        let fine = pde_residual_rank1(1.0, 1.0, &FDConfig::new(2e-2, 2).unwrap()).unwrap();
        let rate = (coarse / fine).log2();
        assert!((rate - 2.0).abs() < 0.3, "rate {rate}");
    }

    #[test]
    fn chamber_direction_has_requested_root_values() {
        for spec in ["A:2", "C:2", "G:2", "A:3"] {
            let rs = RootSystem::from_spec(spec).unwrap();
            let values: Vec<f64> = (1..=rs.rank()).map(|k| k as f64).collect();
            let h = chamber_direction(&rs, &values).unwrap();
            let got: Vec<f64> =
                rs.simple_roots_euclid().iter().map(|a| a.iter().zip(h.coords()).map(|(x, y)| x * y).sum()).collect();
            for (g, v) in got.iter().zip(&values) {
                assert_relative_eq!(g / got[0], v / values[0], max_relative = 1e-12);
            }
            assert_relative_eq!(h.norm(), 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn harmonicity_report_and_control() {
        let opts = ReportOptions { suites: vec![Suite::Harmonicity], ..ReportOptions::default() };
        let report = consistency_report(&opts).unwrap();
        assert!(report.passed);
        assert_eq!(report.checks.len(), 10);
        let bad = ReportOptions { corrupt_pi_plus: true, ..opts };
        let report = consistency_report(&bad).unwrap();
        assert!(!report.passed);
        // a single linear form stays harmonic; every other system is caught
        for c in &report.checks {
            assert_eq!(c.passed(), c.check_id.ends_with("A1"), "{}", c.check_id);
        }
    }

    #[test]
    fn negative_controls_detect_corruption() {
        let opts = ReportOptions { suites: vec![Suite::NegativeControl], ..ReportOptions::default() };
        let report = consistency_report(&opts).unwrap();
        assert!(report.passed, "{:?}", report.checks);
    }

    #[test]
    fn report_serializes() {
        let opts = ReportOptions { suites: vec![Suite::Residue, Suite::Pde], ..ReportOptions::default() };
        let report = consistency_report(&opts).unwrap();
        let v = report.to_json();
        let first = &v["checks"][0];
        for key in ["check_id", "status", "achieved_error", "tolerance", "parameters"] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
        assert_eq!(first["status"], "pass");
    }
}
