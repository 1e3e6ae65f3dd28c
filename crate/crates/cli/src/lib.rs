//! Command-line front end. [`run`] takes the full argument vector and the
//! two output streams and returns the process exit status:
//!
//! - `0` when every residual is within tolerance,
//! - `2` when a residual exceeds it,
//! - `1` on usage, parse or work-cap errors.

mod json;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use guinand::coeffs::{alpha, betas};
use guinand::formulas::{self, shell_partial_sums, shell_rows_csv, VerificationReport};
use guinand::radial::{self, parse_t_grid, SphereFTValue, SphereMethod};
use guinand::schwartz::{parse, GaussPoly};
use guinand::sumsq::{rk_bruteforce_with, rk_table_with};
use guinand::WorkLimits;

pub use json::to_json;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_RESIDUAL: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "guinand", version, about = "Verify summation formulas over sums of squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of r_k(n), the number of representations of n as a sum of k squares.
    Rk(RkArgs),
    /// The coefficients alpha_k and beta_{j,k}.
    Coeffs(CoeffsArgs),
    /// Both sides of the summation formula for odd k.
    Verify(VerifyArgs),
    /// Both sides of the shifted-lattice formula.
    VerifyShifted(ShiftedArgs),
    /// Radial Fourier transform of an even profile in dimension k.
    RadialFt(RadialArgs),
    /// Fourier transform of the unit sphere's surface measure.
    SphereFt(SphereArgs),
    /// Pairing of the transformed comb with phi against the comb with phi_hat.
    Duality(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Exact,
}

#[derive(Args, Debug)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RkArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 100)]
    nmax: u64,
    /// Also count every entry by brute-force enumeration and compare.
    #[arg(long)]
    check: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    k: u32,
    /// Test function, e.g. "t*exp(-pi*t^2/2)". Non-odd input is replaced by f(t) - f(-t).
    #[arg(long)]
    phi: String,
    #[arg(long, default_value_t = 400)]
    nmax: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct ShiftedArgs {
    #[arg(long)]
    k: u32,
    /// Lattice shift, comma-separated; components may be fractions such as 1/3.
    #[arg(long)]
    eta: String,
    /// Character, comma-separated.
    #[arg(long)]
    xi: String,
    #[arg(long)]
    phi: String,
    /// Truncation radius on the node side.
    #[arg(long, default_value_t = 6.0)]
    radius: f64,
    /// Truncation radius on the transform side; defaults to --radius.
    #[arg(long)]
    radius_freq: Option<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum RadialMethod {
    Closed,
    Quadrature,
}

#[derive(Args, Debug)]
struct Points {
    /// A single evaluation point.
    #[arg(long, conflicts_with = "t_grid")]
    t: Option<f64>,
    /// Evaluation grid a:b:step, endpoints included.
    #[arg(long)]
    t_grid: Option<String>,
}

#[derive(Args, Debug)]
struct RadialArgs {
    #[arg(long)]
    k: u32,
    /// Radial profile. Non-even input is replaced by f(t) + f(-t).
    #[arg(long)]
    phi: String,
    #[command(flatten)]
    points: Points,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "closed,quadrature")]
    methods: Vec<RadialMethod>,
    /// Agreement tolerance between methods, absolute.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Quadrature error target.
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SphereArgs {
    #[arg(long)]
    k: u32,
    #[command(flatten)]
    points: Points,
    #[arg(long, value_delimiter = ',', default_value = "closed,bessel,recurrence,besselpoly")]
    methods: Vec<SphereMethod>,
    /// Pairwise relative agreement tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

/// A failure that maps to exit status 1.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

/// Text to emit, plus whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

/// Runs one command line. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let limits = WorkLimits::from_env();
    let mut notes = Vec::new();
    let (result, output) = match &cli.command {
        Command::Rk(a) => (rk(a, &limits), &a.out),
        Command::Coeffs(a) => (coeffs(a), &a.out),
        Command::Verify(a) => (verify(a, &limits, &mut notes), &a.out),
        Command::VerifyShifted(a) => (verify_shifted(a, &limits, &mut notes), &a.out),
        Command::RadialFt(a) => (radial_ft(a, &mut notes), &a.out),
        Command::SphereFt(a) => (sphere_ft(a), &a.out),
        Command::Duality(a) => (duality(a, &limits, &mut notes), &a.out),
    };
    for n in &notes {
        let _ = writeln!(stderr, "note: {n}");
    }
    let outcome = match result {
        Ok(o) => o,
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let written = match &output.output {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_RESIDUAL
    }
}

fn reject_exact(out: &Output) -> Result<(), Usage> {
    if out.format == Format::Exact {
        return Err(Usage("--format exact is only available for coeffs".into()));
    }
    Ok(())
}

fn parse_phi(expr: &str) -> Result<GaussPoly, Usage> {
    Ok(parse(expr)?.value)
}

fn odd_phi(expr: &str, notes: &mut Vec<String>) -> Result<GaussPoly, Usage> {
    let phi = parse_phi(expr)?;
    if phi.is_odd() {
        return Ok(phi);
    }
    let odd = phi.odd_part();
    if odd.is_zero() {
        return Err(Usage("test function has no odd part".into()));
    }
    notes.push(format!("--phi is not odd; using f(t) - f(-t) = {odd}"));
    Ok(odd)
}

fn even_phi(expr: &str, notes: &mut Vec<String>) -> Result<GaussPoly, Usage> {
    let phi = parse_phi(expr)?;
    if phi.is_even() {
        return Ok(phi);
    }
    let even = phi.add(&phi.reflect());
    if even.is_zero() {
        return Err(Usage("radial profile has no even part".into()));
    }
    notes.push(format!("--phi is not even; using f(t) + f(-t) = {even}"));
    Ok(even)
}

fn parse_vector(text: &str, name: &str) -> Result<Vec<f64>, Usage> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            let value = match part.split_once('/') {
                Some((n, d)) => n.trim().parse::<f64>().ok().zip(d.trim().parse::<f64>().ok()).map(|(n, d)| n / d),
                None => part.parse::<f64>().ok(),
            };
            value.filter(|v| v.is_finite()).ok_or_else(|| Usage(format!("--{name}: cannot read component {part:?}")))
        })
        .collect()
}

fn points(p: &Points) -> Result<Vec<f64>, Usage> {
    match (&p.t, &p.t_grid) {
        (Some(t), _) => Ok(vec![*t]),
        (None, Some(grid)) => Ok(parse_t_grid(grid)?),
        (None, None) => Err(Usage("one of --t or --t-grid is required".into())),
    }
}

fn report_csv(r: &VerificationReport) -> String {
    format!(
        "identity,k,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual,tail_bound_lhs,tail_bound_rhs,terms_used,tol,passed\n\
         {},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{:e},{}\n",
        serde_json::to_value(r.identity).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        r.k,
        r.lhs.re,
        r.lhs.im,
        r.rhs.re,
        r.rhs.im,
        r.abs_residual,
        r.rel_residual,
        r.tail_bound_lhs,
        r.tail_bound_rhs,
        r.terms_used,
        r.tol,
        r.passed
    )
}

#[derive(Serialize)]
struct RkReport {
    k: u32,
    max_n: u64,
    /// Decimal strings, since counts outgrow 64 bits.
    counts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce_agrees: Option<bool>,
}

fn rk(a: &RkArgs, limits: &WorkLimits) -> Result<Outcome, Usage> {
    reject_exact(&a.out)?;
    let table = rk_table_with(a.k, a.nmax, limits)?;
    let counts: Vec<String> = table.counts().iter().map(|c| c.to_string()).collect();
    let agrees = if a.check {
        let mut ok = true;
        for n in 0..=a.nmax {
            ok &= rk_bruteforce_with(a.k, n, limits)?.to_string() == counts[n as usize];
        }
        Some(ok)
    } else {
        None
    };
    let text = match a.out.format {
        Format::Csv => {
            let mut s = String::from("n,r_k\n");
            for (n, c) in counts.iter().enumerate() {
                let _ = writeln!(s, "{n},{c}");
            }
            s
        }
        _ => to_json(&RkReport { k: a.k, max_n: a.nmax, counts, bruteforce_agrees: agrees }),
    };
    Ok(Outcome { text, passed: agrees.unwrap_or(true) })
}

#[derive(Serialize)]
struct CoeffEntry {
    name: String,
    j: Option<u32>,
    exact: String,
    value: f64,
}

fn coeffs(a: &CoeffsArgs) -> Result<Outcome, Usage> {
    let al = alpha(a.k)?;
    let mut entries = vec![CoeffEntry { name: "alpha".into(), j: None, exact: al.to_string(), value: al.to_f64() }];
    for (j, b) in betas(a.k)?.iter().enumerate() {
        entries.push(CoeffEntry { name: "beta".into(), j: Some(j as u32), exact: b.to_string(), value: b.to_f64() });
    }
    let text = match a.out.format {
        Format::Exact => {
            let mut s = String::new();
            for e in &entries {
                match e.j {
                    None => writeln!(s, "alpha_{} = {}", a.k, e.exact),
                    Some(j) => writeln!(s, "beta_{j},{} = {}", a.k, e.exact),
                }
                .expect("writing to a String");
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("name,j,exact,value\n");
            for e in &entries {
                let j = e.j.map(|j| j.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{},{j},{},{:e}", e.name, e.exact, e.value);
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                k: u32,
                coefficients: &'a [CoeffEntry],
            }
            to_json(&Doc { k: a.k, coefficients: &entries })
        }
    };
    Ok(Outcome { text, passed: true })
}

fn verify(a: &VerifyArgs, limits: &WorkLimits, notes: &mut Vec<String>) -> Result<Outcome, Usage> {
    reject_exact(&a.out)?;
    let phi = odd_phi(&a.phi, notes)?;
    let report = formulas::verify_with(a.k, &phi, a.nmax, a.tol, limits)?;
    let text = match a.out.format {
        Format::Csv => shell_rows_csv(&shell_partial_sums(a.k, &phi, a.nmax)?),
        _ => to_json(&report),
    };
    Ok(Outcome { text, passed: report.passed })
}

fn verify_shifted(a: &ShiftedArgs, limits: &WorkLimits, notes: &mut Vec<String>) -> Result<Outcome, Usage> {
    reject_exact(&a.out)?;
    let phi = odd_phi(&a.phi, notes)?;
    let eta = parse_vector(&a.eta, "eta")?;
    let xi = parse_vector(&a.xi, "xi")?;
    let r_freq = a.radius_freq.unwrap_or(a.radius);
    let report = formulas::verify_shifted_with(a.k, &eta, &xi, &phi, a.radius, r_freq, a.tol, limits)?;
    let text = match a.out.format {
        Format::Csv => report_csv(&report),
        _ => to_json(&report),
    };
    Ok(Outcome { text, passed: report.passed })
}

fn duality(a: &VerifyArgs, limits: &WorkLimits, notes: &mut Vec<String>) -> Result<Outcome, Usage> {
    reject_exact(&a.out)?;
    if a.nmax > limits.table_max_n {
        return Err(Usage(
            guinand::Error::WorkCap {
                what: "r_k table entries",
                needed: a.nmax as f64,
                cap: limits.table_max_n as f64,
            }
            .to_string(),
        ));
    }
    let phi = odd_phi(&a.phi, notes)?;
    let report = formulas::duality(a.k, &phi, a.nmax, a.tol)?;
    let text = match a.out.format {
        Format::Csv => report_csv(&report),
        _ => to_json(&report),
    };
    Ok(Outcome { text, passed: report.passed })
}

#[derive(Serialize)]
struct RadialRow {
    k: u32,
    t: f64,
    method: RadialMethod,
    value: Complex64,
}

#[derive(Serialize)]
struct GridReport<R> {
    k: u32,
    rows: Vec<R>,
    max_discrepancy: f64,
    tol: f64,
    passed: bool,
}

fn radial_ft(a: &RadialArgs, notes: &mut Vec<String>) -> Result<Outcome, Usage> {
    reject_exact(&a.out)?;
    let f = even_phi(&a.phi, notes)?;
    let ts = points(&a.points)?;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &t in &ts {
        let mut values = Vec::new();
        for &m in &a.methods {
            let v = match m {
                RadialMethod::Closed if t == 0.0 => radial::radial_ft_zero(&f, a.k)?,
                RadialMethod::Closed => radial::radial_ft_closed(&f, a.k, t)?,
                RadialMethod::Quadrature => radial::radial_ft_quadrature(&f, a.k, t.abs(), a.quad_tol)?,
            };
            values.push(v);
            rows.push(RadialRow { k: a.k, t, method: m, value: v });
        }
        for x in &values {
            for y in &values {
                worst = worst.max((x - y).norm());
            }
        }
    }
    let passed = worst <= a.tol;
    let text = match a.out.format {
        Format::Csv => {
            let mut s = String::from("k,t,method,value_re,value_im\n");
            for r in &rows {
                let m = if r.method == RadialMethod::Closed { "closed" } else { "quadrature" };
                let _ = writeln!(s, "{},{:e},{m},{:e},{:e}", r.k, r.t, r.value.re, r.value.im);
            }
            s
        }
        _ => to_json(&GridReport { k: a.k, rows, max_discrepancy: worst, tol: a.tol, passed }),
    };
    Ok(Outcome { text, passed })
}

fn sphere_ft(a: &SphereArgs) -> Result<Outcome, Usage> {
    reject_exact(&a.out)?;
    let ts = points(&a.points)?;
    let rows: Vec<SphereFTValue> = radial::sphere_grid(&[a.k], &ts, &a.methods)?;
    let mut worst: f64 = 0.0;
    for chunk in rows.chunks(a.methods.len().max(1)) {
        for x in chunk {
            for y in chunk {
                let scale = x.value.abs().max(y.value.abs()).max(1e-300);
                worst = worst.max((x.value - y.value).abs() / scale);
            }
        }
    }
    let passed = worst <= a.tol;
    let text = match a.out.format {
        Format::Csv => radial::sphere_grid_csv(&rows),
        _ => to_json(&GridReport { k: a.k, rows, max_discrepancy: worst, tol: a.tol, passed }),
    };
    Ok(Outcome { text, passed })
}
