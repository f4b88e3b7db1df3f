use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use symspace::fundsol::{
    canonical_nu_even, canonical_nu_odd, sinh_ratio_product, u_eval, SolutionKind, SolutionParams,
};
use symspace::rootsys::{weyl_group, RootSystem};
use symspace::special::{bessel_k, bessel_k_asymptotic, bessel_k_quadrature};
use symspace::spherical::CartanVector;
use symspace::verify::{consistency_report, ReportOptions, Suite};
use symspace::Error;

/// Fundamental solutions of (Δ − λ_z)^ν on complex symmetric spaces.
#[derive(Debug, Parser)]
#[command(name = "symspace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank, positive roots, canonical exponents, ρ, π⁺(ρ) and |W|.
    Info {
        /// Root system, e.g. A:2, G:2 or A:1xA:1.
        system: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate u_z at one point.
    Eval {
        system: String,
        #[arg(long)]
        z: f64,
        /// Imaginary part of z (odd rank only).
        #[arg(long, default_value_t = 0.0)]
        z_imag: f64,
        /// Exponent; defaults to the canonical one for the rank parity.
        #[arg(long)]
        nu: Option<u32>,
        /// H in simple-root coordinates, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        h: Vec<f64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tabulate u_z along the ray H = s·d.
    Table {
        system: String,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        nu: Option<u32>,
        #[arg(long, default_value_t = 0.0)]
        start: f64,
        #[arg(long, default_value_t = 3.0)]
        stop: f64,
        #[arg(long, default_value_t = 31)]
        count: usize,
        /// Ray direction d in simple-root coordinates; defaults to ρ.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the consistency report and print it as JSON.
    Verify {
        /// Suites to run, comma separated (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Tolerance for every quadrature-based check.
        #[arg(long)]
        tol: Option<f64>,
        /// Root systems for the multi-system suites.
        #[arg(long, value_delimiter = ',')]
        systems: Option<Vec<String>>,
        /// Points per chamber ray in the three-way suite.
        #[arg(long, default_value_t = 3)]
        points: usize,
        /// Perturb π⁺ before the harmonicity suite.
        #[arg(long)]
        corrupt_pi_plus: bool,
        /// Flip the prefactor sign in the three-way suite.
        #[arg(long)]
        flip_prefactor_sign: bool,
    },
    /// Evaluate K_α(x) by series or continued fraction, quadrature and
    /// asymptotic expansion.
    Bessel {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        x: f64,
        /// Terms of the large-x expansion.
        #[arg(long, default_value_t = 4)]
        terms: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

const USAGE: u8 = 2;
const FAILED: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let usage = matches!(
                err.downcast_ref::<Error>(),
                Some(
                    Error::BadSpec(_)
                        | Error::InvalidParameter(_)
                        | Error::ParityMismatch { .. }
                        | Error::UnsupportedRootSystem { .. }
                )
            ) || err.downcast_ref::<UsageError>().is_some();
            ExitCode::from(if usage { USAGE } else { FAILED })
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Info { system, format } => info(&system, format),
        Command::Eval { system, z, z_imag, nu, h, format } => eval(&system, Complex64::new(z, z_imag), nu, &h, format),
        Command::Table { system, z, nu, start, stop, count, direction, format } => {
            table(&system, z, nu, (start, stop, count), direction, format)
        }
        Command::Verify { only, tol, systems, points, corrupt_pi_plus, flip_prefactor_sign } => {
            let suites = only.iter().map(|s| Suite::parse(s)).collect::<Result<Vec<_>, _>>()?;
            let mut options = ReportOptions { suites, tolerance: tol, corrupt_pi_plus, flip_prefactor_sign, ..ReportOptions::default() };
            if let Some(systems) = systems {
                options.systems = systems;
            }
            if points == 0 {
                return Err(usage("--points must be at least 1"));
            }
            options.points_per_ray = points;
            let report = consistency_report(&options)?;
            println!("{}", serde_json::to_string_pretty(&report.to_json())?);
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(FAILED) })
        }
        Command::Bessel { alpha, x, terms, format } => bessel(alpha, x, terms, format),
    }
}

fn parse_system(spec: &str) -> anyhow::Result<RootSystem> {
    Ok(RootSystem::from_spec(spec)?)
}

fn info(spec: &str, format: Format) -> anyhow::Result<ExitCode> {
    let rs = parse_system(spec)?;
    let weyl = weyl_group(&rs)?.order();
    let pi_rho = rs.pi_plus_rho();
    let value = json!({
        "system": rs.label(),
        "rank": rs.rank(),
        "positive_roots": rs.num_positive(),
        "nu_odd": canonical_nu_odd(&rs),
        "nu_even": canonical_nu_even(&rs),
        "rho": rs.rho(),
        "rho_norm_sq": rs.rho_norm_sq().to_string(),
        "pi_plus_rho": pi_rho.to_string(),
        "weyl_order": weyl,
        "root_system": rs.to_json()?,
    });
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
        _ => {
            let show = |v: Option<u32>| v.map_or_else(|| "n/a".to_string(), |n| n.to_string());
            println!("system      {}", rs.label());
            println!("rank n      {}", rs.rank());
            println!("d           {}", rs.num_positive());
            println!("nu_odd      {}", show(canonical_nu_odd(&rs)));
            println!("nu_even     {}", show(canonical_nu_even(&rs)));
            println!("rho         {:?}", rs.rho());
            println!("|rho|^2     {}", rs.rho_norm_sq());
            println!("pi+(rho)    {pi_rho}");
            println!("|W|         {weyl}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn params_for(rs: &RootSystem, z: Complex64, nu: Option<u32>) -> anyhow::Result<SolutionParams> {
    let nu = match nu {
        Some(nu) => nu,
        None => canonical_nu_odd(rs).or_else(|| canonical_nu_even(rs)).context("no canonical exponent")?,
    };
    Ok(SolutionParams::new(rs, nu, z)?)
}

fn kind_name(kind: SolutionKind) -> &'static str {
    match kind {
        SolutionKind::Odd => "odd",
        SolutionKind::Even => "even",
        SolutionKind::General => "general",
    }
}

fn eval(spec: &str, z: Complex64, nu: Option<u32>, h: &[f64], format: Format) -> anyhow::Result<ExitCode> {
    let rs = parse_system(spec)?;
    if h.len() != rs.rank() {
        return Err(usage(format!("--h needs {} coordinates, got {}", rs.rank(), h.len())));
    }
    let p = params_for(&rs, z, nu)?;
    let hv = CartanVector::from_simple_coords(&rs, h)?;
    let u = u_eval(&p, &hv)? + 0.0;
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "system": rs.label(),
                "nu": p.nu(),
                "kind": kind_name(p.kind()),
                "z": [z.re, z.im],
                "h_simple": h,
                "h_euclid": hv.coords(),
                "h_norm": hv.norm(),
                "u": [u.re, u.im],
            }))?
        ),
        Format::Csv => {
            println!("# system={} nu={} kind={} z={}", rs.label(), p.nu(), kind_name(p.kind()), z);
            println!("re_u,im_u,h_norm");
            println!("{:.16e},{:.16e},{:.16e}", u.re, u.im, hv.norm());
        }
        Format::Text => {
            println!("u = {:.16e} {:+.16e}i  (nu = {}, {} form, |H| = {:.16e})", u.re, u.im, p.nu(), kind_name(p.kind()), hv.norm());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn table(
    spec: &str,
    z: f64,
    nu: Option<u32>,
    (start, stop, count): (f64, f64, usize),
    direction: Option<Vec<f64>>,
    format: Format,
) -> anyhow::Result<ExitCode> {
    let rs = parse_system(spec)?;
    if !(z > 0.0) {
        return Err(usage(format!("z must be positive, got {z}")));
    }
    if count == 0 || !(start.is_finite() && stop.is_finite()) {
        return Err(usage("grid needs finite start/stop and count ≥ 1"));
    }
    let direction = direction.unwrap_or_else(|| rs.rho().iter().map(|&c| c as f64).collect());
    if direction.len() != rs.rank() {
        return Err(usage(format!("--direction needs {} coordinates, got {}", rs.rank(), direction.len())));
    }
    if direction.iter().all(|&c| c == 0.0) {
        return Err(usage("--direction must be nonzero"));
    }
    let p = params_for(&rs, Complex64::new(z, 0.0), nu)?;
    let d = CartanVector::from_simple_coords(&rs, &direction)?;
    // Adding 0.0 turns −0.0 into 0.0 so columns print without a stray sign.
    let mut rows = Vec::with_capacity(count);
    for k in 0..count {
        let s = if count == 1 { start } else { start + (stop - start) * k as f64 / (count - 1) as f64 };
        let h = d.scaled(s);
        let u = u_eval(&p, &h)?;
        rows.push((s, u + 0.0, sinh_ratio_product(&rs, &h), h.norm()));
    }
    match format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(s, u, r, n)| json!({ "s": s, "re_u": u.re, "im_u": u.im, "sinh_ratio_product": r, "h_norm": n }))
                .collect();
            let out = json!({
                "system": rs.label(), "nu": p.nu(), "kind": kind_name(p.kind()), "z": z,
                "direction_simple": direction, "rows": rows,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Format::Csv | Format::Text => {
            let mut out = String::new();
            writeln!(out, "# system={} nu={} kind={} z={z}", rs.label(), p.nu(), kind_name(p.kind()))?;
            writeln!(out, "# direction (simple-root coordinates) = {direction:?}; H = s * direction")?;
            writeln!(out, "s,re_u,im_u,sinh_ratio_product,h_norm")?;
            for (s, u, r, n) in rows {
                writeln!(out, "{s:.16e},{:.16e},{:.16e},{r:.16e},{n:.16e}", u.re, u.im)?;
            }
            print!("{out}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bessel(alpha: f64, x: f64, terms: usize, format: Format) -> anyhow::Result<ExitCode> {
    if !(x > 0.0) {
        bail!(usage(format!("x must be positive, got {x}")));
    }
    let series = bessel_k(alpha, x)?;
    let quadrature = bessel_k_quadrature(alpha, x, 1.0).ok();
    let asymptotic = bessel_k_asymptotic(alpha, x, terms);
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "alpha": alpha, "x": x, "k": series, "quadrature": quadrature, "asymptotic": asymptotic, "terms": terms,
            }))?
        ),
        Format::Csv => {
            println!("alpha,x,k,quadrature,asymptotic");
            let q = quadrature.map_or_else(String::new, |q| format!("{q:.16e}"));
            println!("{alpha:.16e},{x:.16e},{series:.16e},{q},{asymptotic:.16e}");
        }
        Format::Text => {
            println!("K_{alpha}({x}) = {series:.16e}");
            match quadrature {
                Some(q) => println!("  quadrature  {q:.16e}  (rel diff {:.2e})", (q - series).abs() / series),
                None => println!("  quadrature  did not converge"),
            }
            println!("  asymptotic  {asymptotic:.16e}  ({terms} terms)");
        }
    }
    Ok(ExitCode::SUCCESS)
}
