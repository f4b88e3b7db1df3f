//! Adaptive Gauss–Kronrod quadrature, Fourier integrals on the half line,
//! and iterated two-dimensional integration.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: real or complex.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// Tolerances and limits for every quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Box half-width `Λ` for truncated spectral integrals; `None` picks
    /// `40·max(1, z)`.
    pub truncation_radius: Option<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { truncation_radius: None, abs_tol: 1e-13, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

impl QuadratureConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureConfig { rel_tol, ..Self::default() }
    }

    pub fn radius_for(&self, z: f64) -> f64 {
        self.truncation_radius.unwrap_or(40.0 * z.max(1.0))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_subdivisions > 0
            && self.truncation_radius.map_or(true, |r| r > 0.0 && r.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bad quadrature configuration {self:?}")))
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

/// An integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One 21-point Kronrod panel with the embedded 10-point Gauss estimate.
pub fn gk21<T: Scalar, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Estimate<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    let mut abs_sum = fc.modulus() * WGK[10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        kronrod = kronrod + pair * WGK[j];
        abs_sum += WGK[j] * (f1.modulus() + f2.modulus());
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).modulus();
    let resabs = abs_sum * half.abs();
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Estimate { value, error }
}

struct Panel<T> {
    a: f64,
    b: f64,
    est: Estimate<T>,
}

/// Adaptive bisection on `[a, b]`, always splitting the panel with the
/// largest error. Never fails; the caller inspects the error.
pub fn adapt<T: Scalar, F: FnMut(f64) -> T>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Estimate<T> {
    adapt_from(f, &[a, b], abs_tol, rel_tol, max_subdivisions)
}

/// [`adapt`] starting from the panels between consecutive `breaks`.
pub fn adapt_from<T: Scalar, F: FnMut(f64) -> T>(
    f: &mut F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Estimate<T> {
    // Each panel's error is floored at 50ε of its magnitude, so tighter
    // relative targets could never be met.
    let rel_tol = rel_tol.max(100.0 * f64::EPSILON);
    let mut panels: Vec<Panel<T>> =
        breaks.windows(2).map(|w| Panel { a: w[0], b: w[1], est: gk21(f, w[0], w[1]) }).collect();
    loop {
        let (value, error) = panels
            .iter()
            .fold((T::zero(), 0.0), |(v, e), p| (v + p.est.value, e + p.est.error));
        if error <= abs_tol.max(rel_tol * value.modulus()) || panels.len() >= max_subdivisions {
            return Estimate { value, error };
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.est.error.total_cmp(&y.1.est.error))
            .map(|(i, _)| i)
            .unwrap();
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            return Estimate { value, error };
        }
        panels.push(Panel { a: p.a, b: mid, est: gk21(f, p.a, mid) });
        panels.push(Panel { a: mid, b: p.b, est: gk21(f, mid, p.b) });
    }
}

fn check<T: Scalar>(est: Estimate<T>, cfg: &QuadratureConfig, context: &str) -> Result<Estimate<T>> {
    let target = cfg.target(est.value.modulus());
    if est.error.is_finite() && est.error <= target {
        Ok(est)
    } else {
        Err(Error::Quadrature { achieved: est.error, requested: target, context: context.to_string() })
    }
}

/// `∫_a^b f` to the configured tolerance.
pub fn integrate<T: Scalar, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate<T>> {
    let est = adapt(&mut f, a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions);
    check(est, cfg, "finite interval")
}

/// `∫_a^∞ f` via the map `t = a + (1 − u)/u`.
pub fn integrate_to_infinity<T: Scalar, F: FnMut(f64) -> T>(
    mut f: F,
    a: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate<T>> {
    let mut g = |u: f64| {
        if u <= 0.0 {
            return T::zero();
        }
        let t = a + (1.0 - u) / u;
        f(t) * (1.0 / (u * u))
    };
    let est = adapt(&mut g, 0.0, 1.0, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions);
    check(est, cfg, "semi-infinite interval")
}

/// Trigonometric weight for [`integrate_fourier`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Cos,
    Sin,
}

/// Wynn's ε-algorithm on a sequence of partial sums; returns the latest
/// extrapolated value and the distance to the previous one.
pub fn wynn_epsilon(sums: &[f64]) -> (f64, f64) {
    let n = sums.len();
    if n < 3 {
        let last = sums.last().copied().unwrap_or(0.0);
        let prev = if n >= 2 { sums[n - 2] } else { f64::INFINITY };
        return (last, (last - prev).abs());
    }
    // Even columns of the ε table hold the extrapolants.
    let extrapolate = |s: &[f64]| -> f64 {
        let m = s.len();
        let mut prev: Vec<f64> = vec![0.0; m + 1];
        let mut cur: Vec<f64> = s.to_vec();
        let mut best = *s.last().unwrap();
        for k in 1..m {
            let next: Vec<f64> = (0..cur.len() - 1)
                .map(|j| {
                    let diff = cur[j + 1] - cur[j];
                    let inv = if diff == 0.0 { f64::INFINITY } else { 1.0 / diff };
                    prev[j + 1] + inv
                })
                .collect();
            if k % 2 == 0 {
                match next.last() {
                    Some(v) if v.is_finite() => best = *v,
                    _ => break,
                }
            }
            prev = cur;
            cur = next;
            if cur.len() < 2 {
                break;
            }
        }
        best
    };
    let a = extrapolate(sums);
    let b = extrapolate(&sums[..n - 1]);
    (a, (a - b).abs())
}

/// `∫_0^∞ f(t)·w(ωt) dt` for slowly varying, decaying `f`.
pub fn integrate_fourier<F: FnMut(f64) -> f64>(
    mut f: F,
    omega: f64,
    weight: Weight,
    cfg: &QuadratureConfig,
) -> Result<Estimate<f64>> {
    if omega == 0.0 {
        return match weight {
            Weight::Cos => integrate_to_infinity(f, 0.0, cfg),
            Weight::Sin => Ok(Estimate { value: 0.0, error: 0.0 }),
        };
    }
    let omega = omega.abs();
    let half_period = std::f64::consts::PI / omega;
    let first = match weight {
        Weight::Cos => 0.5 * half_period,
        Weight::Sin => half_period,
    };
    let g = |t: f64| {
        let w = match weight {
            Weight::Cos => (omega * t).cos(),
            Weight::Sin => (omega * t).sin(),
        };
        f(t) * w
    };
    integrate_oscillatory(g, first, half_period, cfg)
}

/// `∫_0^∞ g` for an integrand whose sign alternates between the break
/// points `first, first + step, first + 2·step, …`.
///
/// Each panel is integrated adaptively and the alternating partial sums are
/// accelerated with Wynn's ε-algorithm.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(
    mut g: F,
    first: f64,
    step: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate<f64>> {
    let (panel_abs, panel_rel) = (cfg.abs_tol * 1e-2, cfg.rel_tol * 1e-2);
    let mut sums: Vec<f64> = Vec::new();
    let first_est = adapt(&mut g, 0.0, first, panel_abs, panel_rel, cfg.max_subdivisions);
    let mut total = first_est.value;
    let mut quad_err = first_est.error;
    // Round-off floor from summing panels of alternating sign.
    let mut magnitude = first_est.value.abs();
    sums.push(total);
    let mut left = first;
    let mut best = (total, f64::INFINITY);
    // Recent extrapolants; two of them can agree by accident, so the error
    // estimate uses the spread of the last four.
    let mut history: Vec<f64> = Vec::new();
    const MIN_PANELS: usize = 8;
    const MAX_PANELS: usize = 400;
    for k in 0..MAX_PANELS {
        let right = left + step;
        let est = adapt(&mut g, left, right, panel_abs, panel_rel, cfg.max_subdivisions);
        total += est.value;
        quad_err += est.error;
        magnitude += est.value.abs();
        sums.push(total);
        left = right;
        if k < 2 {
            continue;
        }
        // The table is rebuilt from a bounded window of recent partial sums.
        let window = &sums[sums.len().saturating_sub(24)..];
        let (value, _) = wynn_epsilon(window);
        history.push(value);
        if history.len() < 4 {
            continue;
        }
        let recent = &history[history.len() - 4..];
        let spread: f64 = recent[..3].iter().map(|v| (value - v).abs()).sum();
        let err = spread + quad_err + 4.0 * f64::EPSILON * magnitude;
        if err < best.1 {
            best = (value, err);
        }
        if sums.len() >= MIN_PANELS && spread <= 0.1 * cfg.target(value.abs()) {
            return check(Estimate { value, error: err }, cfg, "oscillatory integral");
        }
    }
    check(Estimate { value: best.0, error: best.1 }, cfg, "oscillatory integral")
}

/// `∫_0^∞ cos(xt) (t² + z²)^{−p} dt` for `p > 0`, `x ≥ 0`, `z > 0`.
///
/// For large `xz` the plain integral is exponentially small compared with
/// its panels. Integrating by parts `2k` times (all odd derivatives vanish at
/// 0) gives `(−1)^k x^{−2k} ∫ cos(xt) f^{(2k)}(t) dt`, whose panels are of the
/// same order as the result when `2k ≈ xz`. Derivatives come from the Taylor
/// recurrence of `(1 + u)^{−p}`.
pub fn cosine_transform_inverse_power(p: f64, z: f64, x: f64, cfg: &QuadratureConfig) -> Result<Estimate<f64>> {
    if !(p > 0.0 && z > 0.0 && x >= 0.0 && x.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "cosine transform needs p > 0, z > 0, x ≥ 0 (got p = {p}, z = {z}, x = {x})"
        )));
    }
    let k = ((0.5 * x * z).round() as usize).min(40);
    let order = 2 * k;
    let scale = (1..=order).fold(1.0, |acc, j| acc * j as f64 / x) * if k % 2 == 0 { 1.0 } else { -1.0 };
    let mut coeffs = vec![0.0; order + 1];
    let f = move |t: f64| {
        let c = t * t + z * z;
        let base = c.powf(-p);
        if order == 0 {
            return base;
        }
        // (t+h)² + z² = c (1 + u), u = (2t h + h²)/c
        let (u1, u2) = (2.0 * t / c, 1.0 / c);
        coeffs[0] = 1.0;
        coeffs[1] = -p * u1;
        for n in 2..=order {
            let nf = n as f64;
            coeffs[n] = ((-p - (nf - 1.0)) * u1 * coeffs[n - 1] + (-2.0 * p - (nf - 2.0)) * u2 * coeffs[n - 2]) / nf;
        }
        scale * base * coeffs[order]
    };
    let tight = QuadratureConfig { abs_tol: f64::MIN_POSITIVE, ..*cfg };
    let est = integrate_fourier(f, x, Weight::Cos, &tight)?;
    check(est, cfg, "cosine transform of (t² + z²)^(-p)")
}

/// Iterated adaptive integration over `[a, b] × [c, d]`.
pub fn integrate_2d<T: Scalar, F: FnMut(f64, f64) -> T>(
    f: F,
    (a, b): (f64, f64),
    (c, d): (f64, f64),
    cfg: &QuadratureConfig,
) -> Result<Estimate<T>> {
    integrate_2d_from(f, &[a, b], &[c, d], cfg)
}

/// Iterated adaptive integration with initial break points in each
/// variable; the inner integrals are solved ten times more tightly.
pub fn integrate_2d_from<T: Scalar, F: FnMut(f64, f64) -> T>(
    mut f: F,
    outer_breaks: &[f64],
    inner_breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate<T>> {
    let width = (outer_breaks[outer_breaks.len() - 1] - outer_breaks[0]).abs().max(1.0);
    let inner_rel = cfg.rel_tol * 0.1;
    let inner_abs = cfg.abs_tol * 0.1 / width;
    let mut outer = |x: f64| {
        let mut g = |y: f64| f(x, y);
        adapt_from(&mut g, inner_breaks, inner_abs, inner_rel, cfg.max_subdivisions).value
    };
    let est = adapt_from(&mut outer, outer_breaks, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions);
    check(est, cfg, "two-dimensional integral")
}

/// Break points `±scale·2^k` between `−radius` and `radius`, clustering
/// panels near the origin.
pub fn symmetric_breaks(radius: f64, scale: f64) -> Vec<f64> {
    let mut pos = vec![0.0];
    let mut x = 0.25 * scale;
    while x < radius {
        pos.push(x);
        x *= 2.0;
    }
    pos.push(radius);
    let mut all: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    all.pop();
    all.extend(pos);
    all
}
