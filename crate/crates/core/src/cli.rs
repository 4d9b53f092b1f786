//! Command-line surface: enumeration, forward maps, spectra, scattering
//! records, inversion, round-trip audits and the identity report.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use crate::bcf::bcf_expand;
use crate::charpoly::{psi, psi_hat};
use crate::checks::run_identity_suites;
use crate::error::{Error, Result};
use crate::format::{fmt_sig, to_json_string};
use crate::inverse::{interpolate_polynomials, recover_shape};
use crate::scattering::record::{scattering_info_of, ScatterOptions, DEFAULT_SCHEDULE};
use crate::scattering::{LeadTree, ScatteringRecord};
use crate::spectral::eigen::{eigenvalues_in_interval, spectrum_csv};
use crate::spectral::{Potential, Problem};
use crate::tree::{enumerate_rooted_trees, RootedTree};

#[derive(Debug, Parser)]
#[command(name = "qtree", version, about = "Spectral and scattering toolkit for equilateral quantum trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rooted trees up to isomorphism, one JSON object per line.
    Enum(EnumArgs),
    /// Polynomials and branched continued fraction of a tree.
    Forward(ForwardArgs),
    /// Eigenvalues of both root problems in a range, as CSV.
    Spectrum(SpectrumArgs),
    /// Scattering record of a tree with a lead at its root.
    Scatter(ScatterArgs),
    /// Shapes recovered from a scattering record.
    Invert(InvertArgs),
    /// Forward simulation followed by inversion for every tree in a range.
    Roundtrip(RoundtripArgs),
    /// Residuals of every identity suite.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    /// zero | const:Q | sampled:FILE
    #[arg(long, value_name = "SPEC", default_value = "zero", allow_hyphen_values = true)]
    pub potential: String,
    /// Edge length.
    #[arg(long, value_name = "X", allow_hyphen_values = true, default_value_t = 1.0)]
    pub ell: f64,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Lattice indices for the limit, increasing.
    #[arg(long = "n", value_name = "LIST", value_parser = parse_schedule, default_value = "16,32,64,128,256")]
    pub schedule: Schedule,
    /// Agreement required between successive extrapolants.
    #[arg(long, value_name = "TOL", allow_hyphen_values = true, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EnumArgs {
    /// Vertex counts, `A..B` or `A`.
    #[arg(long, value_name = "A..B", value_parser = parse_p_range)]
    pub p: PRange,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ForwardArgs {
    /// Tree JSON: {"p":..,"root":..,"edges":[[u,v],..]}.
    #[arg(long, value_name = "FILE")]
    pub tree: PathBuf,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_name = "FILE")]
    pub tree: PathBuf,
    #[command(flatten)]
    pub pot: PotentialArgs,
    /// Spectral interval.
    #[arg(long, value_name = "A:B", value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Range,
    /// Root-finding tolerance, relative.
    #[arg(long, value_name = "TOL", allow_hyphen_values = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[arg(long, value_name = "FILE")]
    pub tree: PathBuf,
    #[command(flatten)]
    pub pot: PotentialArgs,
    #[command(flatten)]
    pub limit: LimitArgs,
    /// Window for the common eigenvalues.
    #[arg(long, value_name = "A:B", value_parser = parse_range, default_value = "0:200", allow_hyphen_values = true)]
    pub range: Range,
    /// Also write the S-function trace over the window as CSV.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Scattering record JSON.
    #[arg(value_name = "RECORD")]
    pub record: PathBuf,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[arg(long, value_name = "A..B", value_parser = parse_p_range)]
    pub p: PRange,
    #[command(flatten)]
    pub pot: PotentialArgs,
    #[command(flatten)]
    pub limit: LimitArgs,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range(pub f64, pub f64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PRange(pub usize, pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule(pub Vec<u32>);

pub fn parse_range(s: &str) -> std::result::Result<Range, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad number {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad number {b:?}"))?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(format!("empty or infinite range {s:?}"));
    }
    Ok(Range(a, b))
}

pub fn parse_p_range(s: &str) -> std::result::Result<PRange, String> {
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    let a: usize = a.trim().parse().map_err(|_| format!("bad vertex count {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad vertex count {b:?}"))?;
    if a == 0 || a > b {
        return Err(format!("empty vertex range {s:?}"));
    }
    Ok(PRange(a, b))
}

pub fn parse_schedule(s: &str) -> std::result::Result<Schedule, String> {
    let ns = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("bad lattice index {t:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if ns.len() < 2 || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err("need at least two increasing positive indices".into());
    }
    Ok(Schedule(ns))
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule(DEFAULT_SCHEDULE.to_vec())
    }
}

/// Text produced by a command and whether its assertions held.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn read_tree(path: &Path) -> Result<RootedTree> {
    RootedTree::from_json(&std::fs::read_to_string(path)?)
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive, got {x}")))
    }
}

fn check_out(out: &OutArg) -> Result<()> {
    if let Some(path) = &out.out {
        let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
        if dir.is_some_and(|d| !d.is_dir()) {
            return Err(Error::Io(format!("no directory for {}", path.display())));
        }
    }
    Ok(())
}

fn out_of(cmd: &Command) -> &OutArg {
    match cmd {
        Command::Enum(a) => &a.out,
        Command::Forward(a) => &a.out,
        Command::Spectrum(a) => &a.out,
        Command::Scatter(a) => &a.out,
        Command::Invert(a) => &a.out,
        Command::Roundtrip(a) => &a.out,
        Command::Check(a) => &a.out,
    }
}

pub fn cmd_enum(args: &EnumArgs) -> Result<Outcome> {
    let mut text = String::new();
    for p in args.p.0..=args.p.1 {
        for t in enumerate_rooted_trees(p)? {
            text.push_str(&t.to_json());
            text.push('\n');
        }
    }
    Ok(Outcome::ok(text))
}

/// `ψ`, `ψ̂`, the branched continued fraction of `ψ/ψ̂` and the integer
/// coefficient lists, lowest degree first.
pub fn forward_row(tree: &RootedTree) -> Result<serde_json::Value> {
    let (a, b) = (psi(tree), psi_hat(tree)?);
    let ints = |f: &crate::poly::RationalPolynomial| -> Vec<String> {
        f.integer_coeffs().unwrap_or_default().iter().map(|c| c.to_string()).collect()
    };
    Ok(json!({
        "tree": tree.to_json_value(),
        "p": tree.p(),
        "root_degree": tree.degree(tree.root()),
        "psi": a.to_string(),
        "psi_hat": b.to_string(),
        "ratio": bcf_expand(tree)?.to_string(),
        "psi_coeffs": ints(&a),
        "psi_hat_coeffs": ints(&b),
    }))
}

pub fn cmd_forward(args: &ForwardArgs) -> Result<Outcome> {
    let tree = read_tree(&args.tree)?;
    Ok(Outcome::ok(to_json_string(&forward_row(&tree)?) + "\n"))
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<Outcome> {
    check_positive("tolerance", args.tol)?;
    let tree = read_tree(&args.tree)?;
    let pot = Potential::from_spec(&args.pot.potential, args.pot.ell)?;
    let Range(a, b) = args.range;
    let mut rows = Vec::new();
    for which in [Problem::D, Problem::N] {
        for e in eigenvalues_in_interval(&tree, &pot, which, a, b, args.tol)? {
            rows.push((which, e));
        }
    }
    Ok(Outcome::ok(spectrum_csv(&rows)))
}

fn options(limit: &LimitArgs, window: Range) -> Result<ScatterOptions> {
    check_positive("tolerance", limit.tol)?;
    Ok(ScatterOptions {
        schedule: limit.schedule.0.clone(),
        tol: limit.tol,
        window: (window.0, window.1),
    })
}

/// S along `√λ` over the window, skipping the isolated points where `E` vanishes.
pub fn s_trace(lt: &LeadTree, window: Range, points: usize) -> Result<String> {
    let (k0, k1) = (window.0.max(0.0).sqrt(), window.1.max(0.0).sqrt());
    let mut out = String::from("sqrt_lambda,re_S,im_S,abs_S\n");
    for i in 0..points {
        let k = k0 + (k1 - k0) * i as f64 / (points - 1) as f64;
        if k == 0.0 {
            continue;
        }
        match lt.s_function(k.into()) {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_sig(k, 12),
                    fmt_sig(s.re, 12),
                    fmt_sig(s.im, 12),
                    fmt_sig(s.norm(), 12)
                );
            }
            Err(Error::PoleOfS) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn cmd_scatter(args: &ScatterArgs) -> Result<Outcome> {
    let opts = options(&args.limit, args.range)?;
    if let Some(path) = &args.trace {
        check_out(&OutArg { out: Some(path.clone()) })?;
    }
    let tree = read_tree(&args.tree)?;
    let pot = Potential::from_spec(&args.pot.potential, args.pot.ell)?;
    let lt = LeadTree::new(&tree, &pot)?;
    let rec = scattering_info_of(&lt, &opts)?;
    if let Some(path) = &args.trace {
        std::fs::write(path, s_trace(&lt, args.range, 401)?)?;
    }
    Ok(Outcome::ok(rec.to_json() + "\n"))
}

pub fn cmd_invert(args: &InvertArgs) -> Result<Outcome> {
    let rec = ScatteringRecord::from_json(&std::fs::read_to_string(&args.record)?)?;
    let (a, b) = interpolate_polynomials(&rec)?;
    let res = recover_shape(&a, &b)?;
    Ok(Outcome::ok(to_json_string(&res.to_json_value()) + "\n"))
}

/// One audit row: canonical code, shapes recovered, whether the original
/// is among them, and wall time in milliseconds.
#[derive(Clone, Debug)]
pub struct AuditRow {
    pub code: String,
    pub p: usize,
    pub recovered: usize,
    pub matched: bool,
    pub millis: f64,
    pub error: Option<String>,
}

pub fn roundtrip_tree(tree: &RootedTree, pot: &Potential, opts: &ScatterOptions) -> AuditRow {
    let start = Instant::now();
    let result = (|| -> Result<(usize, bool)> {
        let rec = scattering_info_of(&LeadTree::new(tree, pot)?, opts)?;
        let (a, b) = interpolate_polynomials(&rec)?;
        let res = recover_shape(&a, &b)?;
        Ok((res.shapes.len(), res.contains(tree)))
    })();
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let code = tree.canonical_code().to_string();
    match result {
        Ok((recovered, matched)) => AuditRow {
            code,
            p: tree.p(),
            recovered,
            matched,
            millis,
            error: None,
        },
        Err(e) => AuditRow {
            code,
            p: tree.p(),
            recovered: 0,
            matched: false,
            millis,
            error: Some(e.kind().to_string()),
        },
    }
}

pub fn cmd_roundtrip(args: &RoundtripArgs) -> Result<Outcome> {
    let opts = options(&args.limit, Range(0.0, 200.0))?;
    let pot = Potential::from_spec(&args.pot.potential, args.pot.ell)?;
    let mut trees = Vec::new();
    for p in args.p.0.max(2)..=args.p.1 {
        trees.extend(enumerate_rooted_trees(p)?);
    }
    let rows: Vec<AuditRow> = trees.par_iter().map(|t| roundtrip_tree(t, &pot, &opts)).collect();
    let mut text = String::from("code,p,recovered,match,wall_ms,error\n");
    for r in &rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            r.code,
            r.p,
            r.recovered,
            r.matched,
            fmt_sig(r.millis, 6),
            r.error.as_deref().unwrap_or("")
        );
    }
    Ok(Outcome {
        text,
        ok: rows.iter().all(|r| r.matched),
    })
}

pub fn cmd_check(_: &CheckArgs) -> Result<Outcome> {
    let suites = run_identity_suites()?;
    let ok = suites.iter().all(|s| s.passed);
    Ok(Outcome {
        text: to_json_string(&json!({ "passed": ok, "suites": suites })) + "\n",
        ok,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    check_out(out_of(&cli.command))?;
    match &cli.command {
        Command::Enum(a) => cmd_enum(a),
        Command::Forward(a) => cmd_forward(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Scatter(a) => cmd_scatter(a),
        Command::Invert(a) => cmd_invert(a),
        Command::Roundtrip(a) => cmd_roundtrip(a),
        Command::Check(a) => cmd_check(a),
    }
}

/// `{"error": kind, "message": text}`.
pub fn error_json(e: &Error) -> String {
    to_json_string(&json!({ "error": e.kind(), "message": e.to_string() }))
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 when every assertion held, 1 when some did not, 2 on errors.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_json(&Error::InvalidInput(e.to_string().trim().to_string())));
            return 2;
        }
    };
    let outcome = run(&cli).and_then(|o| {
        match &out_of(&cli.command).out {
            Some(path) => std::fs::write(path, &o.text)?,
            None => print!("{}", o.text),
        }
        Ok(o)
    });
    match outcome {
        Ok(o) if o.ok => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            2
        }
    }
}
