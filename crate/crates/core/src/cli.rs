//! Command-line front end for the `eigenbound` binary.
//!
//! Exit codes: `0` success, `1` a check or oracle row failed, `2` usage or
//! validation error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{bound_report, BoundReport, GeometryInput};
use crate::check::CheckRecord;
use crate::error::Error;
use crate::oracle::{self, CapProblem, SweepRow};
use crate::verify::{run_verification, VerifyConfig, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the seed of the randomized checks.
pub const SEED_ENV: &str = "EIGENBOUND_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "eigenbound",
    version,
    about = "First Dirichlet eigenvalue lower bounds and their verification"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Run the full identity and inequality ledger.
    Verify {
        /// Replace the tolerance of one check, as `name=value`. Repeatable.
        #[arg(long = "tol", value_parser = parse_override)]
        tol: Vec<(String, f64)>,
        /// Seed for the randomized checks (default: $EIGENBOUND_SEED).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print every lower bound for one geometry.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        dtilde: f64,
    },
    /// Compare bounds against the cap oracle on a grid of (n, R).
    Sweep {
        /// Inclusive integer range `a..b`, or a single value.
        #[arg(long)]
        n: String,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        /// Inclusive range `a..b` subdivided into `--steps` points, or a single value.
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// CSV output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First Dirichlet eigenvalue of a geodesic cap.
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
}

fn parse_override(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(format!("empty check name in {s:?}"));
    }
    let tol: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance {value:?}: {e}"))?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(format!(
            "tolerance must be finite and nonnegative, got {tol}"
        ));
    }
    Ok((name.to_owned(), tol))
}

/// Inclusive integer range `a..b` or a single integer.
pub fn parse_int_range(s: &str) -> Result<Vec<u32>, String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let a: u32 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad range start {a:?}: {e}"))?;
    let b: u32 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad range end {b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a..=b).collect())
}

/// Inclusive real range `a..b` split into `steps` uniform points, or a
/// single value.
pub fn parse_real_range(s: &str, steps: usize) -> Result<Vec<f64>, String> {
    let Some((a, b)) = s.split_once("..") else {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|e| format!("bad value {s:?}: {e}"))?;
        return Ok(vec![v]);
    };
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|e| format!("bad range start {a:?}: {e}"))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|e| format!("bad range end {b:?}: {e}"))?;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(format!("empty range {s:?}"));
    }
    match steps {
        0 => Err("--steps must be at least 1".into()),
        1 => Ok(vec![a]),
        _ => Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub timestamp: String,
    pub seed: u64,
    pub config_digest: String,
}

fn manifest<C: Serialize>(seed: u64, config: &C) -> RunManifest {
    let bytes = serde_json::to_vec(config).unwrap_or_default();
    let digest = Sha256::digest(&bytes);
    RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        seed,
        config_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
    }
}

/// Full-precision decimal for CSV cells; empty when absent or non-finite.
fn cell(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format!("{v:.16e}"),
        _ => String::new(),
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn usage(&mut self, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_USAGE
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let format = if cli.json {
        Format::Json
    } else {
        cli.format.unwrap_or(Format::Text)
    };
    let mut io = Io { out, err };
    let code = match &cli.command {
        Command::Verify { tol, seed } => cmd_verify(&mut io, format, tol, *seed),
        Command::Bound { n, k, dtilde } => cmd_bound(&mut io, format, *n, *k, *dtilde),
        Command::Sweep {
            n,
            k,
            r,
            steps,
            out,
        } => cmd_sweep(
            &mut io,
            format,
            &cli.command,
            n,
            *k,
            r,
            *steps,
            out.as_ref(),
        ),
        Command::Oracle { n, k, r } => cmd_oracle(&mut io, format, *n, *k, *r),
    };
    let _ = io.out.flush();
    code
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| format!("{SEED_ENV}={v:?} is not an unsigned integer: {e}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_verify(io: &mut Io, format: Format, tol: &[(String, f64)], seed: Option<u64>) -> i32 {
    let seed = match resolve_seed(seed) {
        Ok(s) => s,
        Err(e) => return io.usage(e),
    };
    let cfg = VerifyConfig {
        tolerance_overrides: tol.iter().cloned().collect::<BTreeMap<_, _>>(),
        seed,
    };
    let checks = match run_verification(&cfg) {
        Ok(c) => c,
        Err(e) => return io.usage(e),
    };
    let failed = checks.iter().filter(|c| !c.pass).count();
    let written = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                manifest: RunManifest,
                checks: &'a [CheckRecord],
            }
            let report = Report {
                manifest: manifest(seed, &cfg),
                checks: &checks,
            };
            serde_json::to_writer_pretty(&mut io.out, &report)
                .map_err(std::io::Error::from)
                .and_then(|_| writeln!(io.out))
        }
        Format::Csv => write_checks_csv(&mut io.out, &checks),
        Format::Text => (|| {
            for c in &checks {
                writeln!(
                    io.out,
                    "{} {:<40} lhs={:<24} rhs={:<24} discrepancy={:<12.3e} tol={:.1e}{}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.lhs,
                    c.rhs,
                    c.abs_discrepancy,
                    c.tolerance,
                    c.error
                        .as_deref()
                        .map(|e| format!("  ({e})"))
                        .unwrap_or_default()
                )?;
            }
            writeln!(
                io.out,
                "{} checks, {} failed (seed {seed})",
                checks.len(),
                failed
            )
        })(),
    };
    if let Err(e) = written {
        let _ = writeln!(io.err, "error: {e}");
        return EXIT_USAGE;
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn write_checks_csv(out: &mut dyn Write, checks: &[CheckRecord]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "name",
        "paper_anchor",
        "lhs",
        "rhs",
        "abs_discrepancy",
        "tolerance",
        "pass",
        "error",
    ])?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            c.paper_anchor.clone(),
            cell(Some(c.lhs)),
            cell(Some(c.rhs)),
            cell(Some(c.abs_discrepancy)),
            cell(Some(c.tolerance)),
            c.pass.to_string(),
            c.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()
}

fn cmd_bound(io: &mut Io, format: Format, n: u32, k: f64, d_tilde: f64) -> i32 {
    let g = match GeometryInput::new(n, k, d_tilde) {
        Ok(g) => g,
        Err(e) => return io.usage(e),
    };
    let report = match bound_report(&g) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            return EXIT_CHECK_FAILED;
        }
    };
    let written = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                manifest: RunManifest,
                input: &'a GeometryInput,
                report: &'a BoundReport,
            }
            serde_json::to_writer_pretty(
                &mut io.out,
                &Out {
                    manifest: manifest(DEFAULT_SEED, &g),
                    input: &g,
                    report: &report,
                },
            )
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(io.out))
        }
        Format::Csv => (|| {
            let mut w = csv::Writer::from_writer(&mut io.out);
            w.write_record(BOUND_HEADER)?;
            w.write_record(bound_csv_row(&g, &report))?;
            w.flush()
        })(),
        Format::Text => (|| {
            writeln!(io.out, "n = {}, K = {}, d_tilde = {}", g.n, g.k, g.d_tilde)?;
            match report.reilly {
                Some(v) => writeln!(io.out, "reilly   {v}")?,
                None => writeln!(io.out, "reilly   (undefined for K = 0)")?,
            }
            writeln!(io.out, "ling     {}", report.ling)?;
            writeln!(io.out, "refined  {}", report.refined)?;
            writeln!(io.out, "implicit {}", report.implicit)?;
            writeln!(io.out, "best     {}", report.best)?;
            writeln!(io.out, "ratio    {}", report.ratio_refined_over_ling)
        })(),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => io.usage(e),
    }
}

pub const BOUND_HEADER: [&str; 9] = [
    "n", "K", "d_tilde", "reilly", "ling", "refined", "implicit", "best", "ratio",
];

fn bound_csv_row(g: &GeometryInput, r: &BoundReport) -> Vec<String> {
    vec![
        g.n.to_string(),
        cell(Some(g.k)),
        cell(Some(g.d_tilde)),
        cell(r.reilly),
        cell(Some(r.ling)),
        cell(Some(r.refined)),
        cell(Some(r.implicit)),
        cell(Some(r.best)),
        cell(Some(r.ratio_refined_over_ling)),
    ]
}

pub const SWEEP_HEADER: [&str; 13] = [
    "n",
    "K",
    "R",
    "d_tilde",
    "lambda_true",
    "reilly",
    "ling",
    "refined",
    "implicit",
    "best",
    "gap_best",
    "ratio",
    "error",
];

fn sweep_csv_row(r: &SweepRow) -> Vec<String> {
    vec![
        r.n.to_string(),
        cell(Some(r.k)),
        cell(Some(r.r)),
        cell(Some(r.d_tilde)),
        cell(r.lambda_true),
        cell(r.reilly),
        cell(r.ling),
        cell(r.refined),
        cell(r.implicit),
        cell(r.best),
        cell(r.gap_best),
        cell(r.ratio),
        r.error.clone().unwrap_or_default(),
    ]
}

fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record(sweep_csv_row(r))?;
    }
    w.flush()
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    io: &mut Io,
    format: Format,
    command: &Command,
    n_range: &str,
    k: f64,
    r_range: &str,
    steps: usize,
    out_path: Option<&PathBuf>,
) -> i32 {
    let ns = match parse_int_range(n_range) {
        Ok(v) => v,
        Err(e) => return io.usage(format!("--n: {e}")),
    };
    let rs = match parse_real_range(r_range, steps) {
        Ok(v) => v,
        Err(e) => return io.usage(format!("--r: {e}")),
    };
    for &n in &ns {
        for &r in &rs {
            if let Err(e) = CapProblem::new(n, k, r) {
                return io.usage(e);
            }
        }
    }
    let file = match out_path {
        Some(p) => match File::create(p) {
            Ok(f) => Some(f),
            Err(e) => return io.usage(format!("cannot write {}: {e}", p.display())),
        },
        None => None,
    };

    let mut rows = Vec::with_capacity(ns.len() * rs.len());
    for &n in &ns {
        rows.extend(oracle::sharpness_sweep(n, k, &rs));
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();

    let written = match file {
        Some(f) => write_sweep_csv(f, &rows).and_then(|_| match format {
            Format::Json => {
                #[derive(Serialize)]
                struct Summary<'a> {
                    manifest: RunManifest,
                    out: &'a PathBuf,
                    rows: usize,
                    failed: usize,
                }
                serde_json::to_writer_pretty(
                    &mut io.out,
                    &Summary {
                        manifest: manifest(DEFAULT_SEED, command),
                        out: out_path.expect("file implies path"),
                        rows: rows.len(),
                        failed,
                    },
                )
                .map_err(std::io::Error::from)
                .and_then(|_| writeln!(io.out))
            }
            _ => writeln!(
                io.out,
                "wrote {} rows to {} ({failed} failed)",
                rows.len(),
                out_path.expect("file implies path").display()
            ),
        }),
        None => match format {
            Format::Json => {
                #[derive(Serialize)]
                struct Out<'a> {
                    manifest: RunManifest,
                    rows: &'a [SweepRow],
                }
                serde_json::to_writer_pretty(
                    &mut io.out,
                    &Out {
                        manifest: manifest(DEFAULT_SEED, command),
                        rows: &rows,
                    },
                )
                .map_err(std::io::Error::from)
                .and_then(|_| writeln!(io.out))
            }
            _ => write_sweep_csv(&mut io.out, &rows),
        },
    };
    if let Err(e) = written {
        return io.usage(e);
    }
    for r in rows.iter().filter(|r| r.error.is_some()) {
        let _ = writeln!(
            io.err,
            "row n = {}, R = {} failed: {}",
            r.n,
            r.r,
            r.error.as_deref().unwrap_or_default()
        );
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_oracle(io: &mut Io, format: Format, n: u32, k: f64, r: f64) -> i32 {
    let p = match CapProblem::new(n, k, r) {
        Ok(p) => p,
        Err(e) => return io.usage(e),
    };
    let res = match oracle::cap_eigenvalue(&p) {
        Ok(res) => res,
        Err(e @ Error::InvalidGeometry(_)) => return io.usage(e),
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            return EXIT_CHECK_FAILED;
        }
    };
    let written = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                manifest: RunManifest,
                problem: &'a CapProblem,
                #[serde(flatten)]
                result: &'a oracle::ShootingResult,
            }
            serde_json::to_writer_pretty(
                &mut io.out,
                &Out {
                    manifest: manifest(DEFAULT_SEED, &p),
                    problem: &p,
                    result: &res,
                },
            )
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(io.out))
        }
        Format::Csv => (|| {
            let mut w = csv::Writer::from_writer(&mut io.out);
            w.write_record([
                "n",
                "K",
                "R",
                "lambda",
                "residual",
                "bisection_iterations",
                "ode_steps",
            ])?;
            w.write_record([
                p.n.to_string(),
                cell(Some(p.k)),
                cell(Some(p.r)),
                cell(Some(res.lambda)),
                cell(Some(res.residual)),
                res.bisection_iterations.to_string(),
                res.ode_steps.to_string(),
            ])?;
            w.flush()
        })(),
        Format::Text => (|| {
            writeln!(io.out, "n = {}, K = {}, R = {}", p.n, p.k, p.r)?;
            writeln!(io.out, "lambda               {}", res.lambda)?;
            writeln!(io.out, "residual             {:e}", res.residual)?;
            writeln!(io.out, "bisection_iterations {}", res.bisection_iterations)?;
            writeln!(io.out, "ode_steps            {}", res.ode_steps)
        })(),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => io.usage(e),
    }
}
