//! The `resonance-lab` command line: resonance censuses, counting tables,
//! kernel and mode evaluation, and the verification suite.

use crate::error::Error;
use crate::geometry::{cyl_to_plane, CylCoord, HPoint};
use crate::model_kernels::{
    cusp_images, cusp_kernel, cusp_mode, cyl_kernel_fourier, cyl_kernel_images, cyl_mode, funnel_kernel,
    funnel_kernel_fourier, funnel_mode, DiagonalKernel, ImagesConfig,
};
use crate::resonances::{census_between, growth_fit, surface_resonances, Resonance, SurfaceSpec};
use crate::twist::TwistSpec;
use crate::verify::run_suite;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const THREADS_ENV: &str = "RESONANCE_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "resonance-lab",
    version,
    about = "Resolvent kernels and resonance counting on hyperbolic model ends"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the resonances of a surface spec inside a radius.
    Resonances {
        #[command(flatten)]
        io: SpecIo,
        #[arg(long)]
        radius: f64,
    },
    /// Tabulate N(r) on evenly spaced radii and fit N(r) ~ c r^2.
    Count {
        #[command(flatten)]
        io: SpecIo,
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Evaluate a model-end kernel between two points given as `r,phi`.
    Kernel {
        #[command(flatten)]
        io: SpecIo,
        #[arg(long, value_enum)]
        end: EndKind,
        /// Which end of that kind in the spec.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        at: (f64, f64),
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: (f64, f64),
        #[arg(long, value_enum, default_value_t = Method::Images)]
        method: Method,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Tabulate a radial mode function along an r-grid.
    Modes {
        #[arg(long, value_enum)]
        end: EndKind,
        /// Length of the closed geodesic (ignored for the cusp).
        #[arg(long, default_value_t = 1.0)]
        ell: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        /// The fixed second radius.
        #[arg(long, allow_hyphen_values = true)]
        r2: f64,
        #[arg(long, allow_hyphen_values = true)]
        r_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        r_max: f64,
        #[arg(long, default_value_t = 101)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross-oracle suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct SpecIo {
    /// Surface spec in JSON.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    #[arg(long, default_value_t = 1e-13)]
    pub tail_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub k_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EndKind {
    Cylinder,
    Funnel,
    Cusp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Images,
    Fourier,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("{0} verification checks failed")]
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(Error::Spec(_) | Error::Domain(_) | Error::NonUnitary { .. }) => 2,
            CliError::Numeric(_) => 3,
            CliError::Verification(_) => 1,
        }
    }
}

/// Parses `re`, `re+imi`, `re-imi` or `imi`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}, expected re+imi");
    let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => num(v)?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_point(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| format!("expected r,phi, got {text:?}"))?;
    let f = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {v:?} as a number"))
    };
    Ok((f(a)?, f(b)?))
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn load_spec(path: &Path) -> Result<SurfaceSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(SurfaceSpec::from_json(&text)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--{name} must be positive, got {v}")))
    }
}

#[derive(Serialize)]
struct ResonanceReport<'a> {
    spec: &'a SurfaceSpec,
    radius: f64,
    total: u64,
    resonances: &'a [Resonance],
}

fn resonances_cmd(io: &SpecIo, radius: f64) -> Result<(), CliError> {
    positive("radius", radius)?;
    let spec = load_spec(&io.spec)?;
    let set = surface_resonances(&spec, radius)?;
    let text = match io.format {
        Format::Csv => {
            let mut t = String::from("re,im,mult\n");
            for r in &set.resonances {
                writeln!(t, "{},{},{}", fmt(r.re), fmt(r.im), r.mult).unwrap();
            }
            t
        }
        Format::Json => to_json(&ResonanceReport {
            spec: &spec,
            radius,
            total: set.total(),
            resonances: &set.resonances,
        }),
    };
    emit(&io.out, &text)
}

#[derive(Serialize)]
struct CountRow {
    r: f64,
    n: u64,
}

fn count_cmd(io: &SpecIo, r_min: f64, r_max: f64, samples: usize) -> Result<(), CliError> {
    positive("r-min", r_min)?;
    positive("r-max", r_max)?;
    let spec = load_spec(&io.spec)?;
    let table = census_between(&spec, r_min, r_max, samples)?;
    let fit = growth_fit(&table).ok();
    let text = match io.format {
        Format::Csv => {
            let mut t = String::from("r,N\n");
            for (r, n) in &table {
                writeln!(t, "{},{n}", fmt(*r)).unwrap();
            }
            t
        }
        Format::Json => {
            let rows: Vec<CountRow> = table.iter().map(|&(r, n)| CountRow { r, n }).collect();
            to_json(&serde_json::json!({ "spec": spec, "table": rows, "growth_fit": fit }))
        }
    };
    emit(&io.out, &text)?;
    match fit {
        Some(f) => eprintln!(
            "growth_fit coefficient={} rel_spread={}",
            fmt(f.coefficient),
            fmt(f.rel_spread)
        ),
        None => eprintln!("growth_fit skipped: needs five radii spanning a factor of four"),
    }
    Ok(())
}

fn pick_end(spec: &SurfaceSpec, end: EndKind, index: usize) -> Result<(f64, &TwistSpec), CliError> {
    let found = match end {
        EndKind::Cylinder => spec.cylinders.get(index).map(|c| (c.ell, &c.twist)),
        EndKind::Funnel => spec.funnels.get(index).map(|f| (f.ell, &f.twist)),
        EndKind::Cusp => spec.cusps.get(index).map(|c| (1.0, &c.twist)),
    };
    found.ok_or_else(|| CliError::Input(format!("spec has no {end:?} end with index {index}")))
}

#[allow(clippy::too_many_arguments)]
fn kernel_cmd(
    io: &SpecIo,
    end: EndKind,
    index: usize,
    s: Complex64,
    at: (f64, f64),
    to: (f64, f64),
    method: Method,
    tol: &Tolerances,
) -> Result<(), CliError> {
    positive("tail-tol", tol.tail_tol)?;
    if tol.k_max == 0 {
        return Err(CliError::Input("--k-max must be positive".into()));
    }
    let spec = load_spec(&io.spec)?;
    let (ell, twist) = pick_end(&spec, end, index)?;
    let cfg = ImagesConfig {
        tail_tol: tol.tail_tol,
        ..Default::default()
    };
    let (c1, c2) = (CylCoord::new(at.0, at.1), CylCoord::new(to.0, to.1));
    let k: DiagonalKernel = match (end, method) {
        (EndKind::Cylinder, Method::Images) => {
            cyl_kernel_images(s, ell, twist, &cyl_to_plane(&c1, ell), &cyl_to_plane(&c2, ell), &cfg)?
        }
        (EndKind::Cylinder, Method::Fourier) => cyl_kernel_fourier(s, ell, twist, &c1, &c2, tol.k_max)?,
        (EndKind::Funnel, Method::Images) => funnel_kernel(s, ell, twist, &c1, &c2, &cfg)?,
        (EndKind::Funnel, Method::Fourier) => funnel_kernel_fourier(s, ell, twist, &c1, &c2, tol.k_max)?,
        (EndKind::Cusp, Method::Images) => {
            let pt = |c: &CylCoord| HPoint::new(c.angle() / (2.0 * std::f64::consts::PI), c.r.exp());
            cusp_images(s, twist, &pt(&c1)?, &pt(&c2)?, &cfg)?
        }
        (EndKind::Cusp, Method::Fourier) => cusp_kernel(s, twist, &c1, &c2, tol.k_max)?,
    };
    let text = match io.format {
        Format::Csv => {
            let mut t = String::from("theta,log_abs,mult,re,im\n");
            for (a, v) in twist.angles.iter().zip(&k.values) {
                writeln!(
                    t,
                    "{},{},{},{},{}",
                    fmt(a.theta),
                    fmt(a.log_abs),
                    a.mult,
                    fmt(v.re),
                    fmt(v.im)
                )
                .unwrap();
            }
            t
        }
        Format::Json => {
            let rows: Vec<_> = twist
                .angles
                .iter()
                .zip(&k.values)
                .map(|(a, v)| serde_json::json!({ "angle": a, "re": v.re, "im": v.im }))
                .collect();
            to_json(&serde_json::json!({ "s": [s.re, s.im], "values": rows }))
        }
    };
    emit(&io.out, &text)
}

#[allow(clippy::too_many_arguments)]
fn modes_cmd(
    end: EndKind,
    ell: f64,
    s: Complex64,
    kappa: f64,
    r2: f64,
    (r_min, r_max, n): (f64, f64, usize),
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    positive("ell", ell)?;
    if n < 2 || !(r_min < r_max) {
        return Err(CliError::Input("need --n >= 2 and --r-min < --r-max".into()));
    }
    let mode = |r: f64| match end {
        EndKind::Cylinder => cyl_mode(s, kappa, r, r2, ell),
        EndKind::Funnel => funnel_mode(s, kappa, r, r2, ell),
        EndKind::Cusp => cusp_mode(s, 2.0 * std::f64::consts::PI * kappa, r.exp(), r2.exp()),
    };
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let r = r_min + (r_max - r_min) * i as f64 / (n - 1) as f64;
        rows.push((r, mode(r)?));
    }
    let text = match format {
        Format::Csv => {
            let mut t = String::from("r,re,im\n");
            for (r, v) in &rows {
                writeln!(t, "{},{},{}", fmt(*r), fmt(v.re), fmt(v.im)).unwrap();
            }
            t
        }
        Format::Json => {
            let rows: Vec<_> = rows.iter().map(|(r, v)| [*r, v.re, v.im]).collect();
            to_json(&serde_json::json!({ "s": [s.re, s.im], "kappa": kappa, "r2": r2, "rows": rows }))
        }
    };
    emit(out, &text)
}

fn verify_cmd(format: Format) -> Result<(), CliError> {
    let outcomes = run_suite();
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let text = match format {
        Format::Csv => {
            let mut t = String::new();
            for o in &outcomes {
                writeln!(t, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail).unwrap();
            }
            t
        }
        Format::Json => to_json(&outcomes),
    };
    emit(&None, &text)?;
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Resonances { io, radius } => resonances_cmd(&io, radius),
        Command::Count {
            io,
            r_min,
            r_max,
            samples,
        } => count_cmd(&io, r_min, r_max, samples),
        Command::Kernel {
            io,
            end,
            index,
            s,
            at,
            to,
            method,
            tol,
        } => kernel_cmd(&io, end, index, s, at, to, method, &tol),
        Command::Modes {
            end,
            ell,
            s,
            kappa,
            r2,
            r_min,
            r_max,
            n,
            format,
            out,
        } => modes_cmd(end, ell, s, kappa, r2, (r_min, r_max, n), format, &out),
        Command::Verify { format } => verify_cmd(format),
    }
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main_exit_code() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
