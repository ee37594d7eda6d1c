//! Command layer of the `ktorsion` binary.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure.

pub mod verify;

use std::f64::consts::{PI, TAU};
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ktorsion::analysis::{self, critical_points, sweep, CriticalReport, SweepConfig, SweepRow};
use ktorsion::reps::{build_rep, riley_polynomial, su2_solutions};
use ktorsion::torsion::{compute_torsion, twisted_alexander_invariant, TorsionResult};
use ktorsion::{catalog, Complex64, LaurentPoly, Presentation, Tolerances};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("verification failed")]
    Verification,
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification => 2,
            _ => 1,
        }
    }
}

fn input<E: ToString>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "ktorsion", version, about = "Twisted Alexander invariants and adjoint Reidemeister torsion of knots")]
pub struct Cli {
    /// Catalog knot: 3_1 (trefoil) or 5_2.
    #[arg(long, global = true, conflicts_with = "file")]
    pub knot: Option<String>,
    /// Presentation file.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol_relation: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cleanup: Option<f64>,
    #[arg(long, global = true)]
    pub tol_consistency: Option<f64>,
    #[arg(long, global = true)]
    pub tol_multiplicity: Option<f64>,
    #[arg(long, global = true)]
    pub tol_near_multiple: Option<f64>,
    #[arg(long, global = true)]
    pub tol_derivative_step: Option<f64>,
    /// Generator dropped from the Fox matrix, by name or 1-based index.
    #[arg(long, global = true)]
    pub drop: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Riley polynomial of a 2-bridge word, with its σ-form.
    RileyPoly {
        /// Word in x, y; defaults to the knot's bridge word.
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
    },
    /// Torsion at one SU(2) point: both routes and the diagnostics.
    Torsion {
        /// Angle with s = e^{iθ}; accepts numbers and forms like 2pi/3.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: f64,
        /// Index into the SU(2) roots at θ, ascending in u.
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Twisted Alexander invariant: numerator and denominator polynomials.
    Tai {
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0)]
        root: usize,
    },
    /// Torsion over a θ grid, one row per SU(2) root.
    Sweep(GridArgs),
    /// Critical points of the torsion along root branches.
    Critical(GridArgs),
    /// Invariant suite; exit code 2 on any failure.
    Verify {
        #[arg(long, default_value_t = 20240607)]
        seed: u64,
        /// Shift every sampled u by this amount (for exercising failures).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb: f64,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct GridArgs {
    #[arg(long, value_parser = parse_angle, default_value = "0.1")]
    pub theta_lo: f64,
    #[arg(long, value_parser = parse_angle, default_value_t = TAU - 0.1)]
    pub theta_hi: f64,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
}

/// Parses `1.5`, `pi`, `2pi/3`, `-pi/4`, `2pi/3-0.2`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim().replace(' ', "").replace('π', "pi");
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("cannot read angle {text:?}");
    let Some(at) = t.find("pi") else {
        return Err(bad());
    };
    let (head, rest) = (&t[..at], &t[at + 2..]);
    let k = match head.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let (den, tail) = match rest.strip_prefix('/') {
        Some(r) => {
            let end = r.find(['+', '-']).unwrap_or(r.len());
            (r[..end].parse::<f64>().map_err(|_| bad())?, &r[end..])
        }
        None => (1.0, rest),
    };
    let offset = if tail.is_empty() { 0.0 } else { tail.parse::<f64>().map_err(|_| bad())? };
    Ok(k * PI / den + offset)
}

impl Cli {
    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let mut t = Tolerances::default();
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut t.relation, self.tol_relation);
        set(&mut t.cleanup, self.tol_cleanup);
        set(&mut t.consistency, self.tol_consistency);
        set(&mut t.multiplicity, self.tol_multiplicity);
        set(&mut t.near_multiple, self.tol_near_multiple);
        set(&mut t.derivative_step, self.tol_derivative_step);
        if !t.is_valid() {
            return Err(CliError::Input("tolerances must be positive and finite".into()));
        }
        Ok(t)
    }

    /// The knot from `--knot` or `--file`, with a display label.
    pub fn presentation(&self) -> Result<(String, Presentation), CliError> {
        match (&self.knot, &self.file) {
            (Some(name), _) => {
                let e = catalog::find(name).ok_or_else(|| {
                    let known: Vec<&str> = catalog::names().collect();
                    CliError::Input(format!("unknown knot {name:?}; catalog: {}", known.join(", ")))
                })?;
                Ok((e.name.to_string(), e.presentation()))
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
                let p = Presentation::parse(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
                let issues = p.validate();
                if !issues.is_empty() {
                    let list: Vec<String> = issues.iter().map(|v| v.to_string()).collect();
                    return Err(input(format!("{}: {}", path.display(), list.join("; "))));
                }
                Ok((path.display().to_string(), p))
            }
            (None, None) => Err(CliError::Input("give --knot <name> or --file <path>".into())),
        }
    }

    fn drop_index(&self, p: &Presentation) -> Result<usize, CliError> {
        let Some(d) = &self.drop else {
            return Ok(p.meridian());
        };
        if let Some(i) = p.generator_index(d) {
            return Ok(i);
        }
        match d.parse::<usize>() {
            Ok(i) if (1..=p.generator_count()).contains(&i) => Ok(i - 1),
            _ => Err(input(format!("--drop {d:?}: no such generator (names or 1..={})", p.generator_count()))),
        }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_string<F>(fill: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).map_err(input)?;
    let bytes = w.into_inner().map_err(|e| input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    csv_string(|w| {
        if rows.is_empty() {
            w.write_record(analysis::CSV_HEADER)?;
        }
        rows.iter().try_for_each(|r| w.serialize(r))
    })
}

struct Point {
    theta: f64,
    sigma: f64,
    u: f64,
    roots: usize,
    near_multiple: bool,
}

fn su2_point(p: &Presentation, theta: f64, root: usize, tol: &Tolerances) -> Result<Point, CliError> {
    let w = p.bridge_word().ok_or_else(|| input("this command needs a 2-bridge presentation (twobridge w: ...)"))?;
    let phi = riley_polynomial(w).map_err(input)?;
    let sols = su2_solutions(&phi, theta, tol).map_err(input)?;
    if sols.roots.is_empty() {
        return Err(input(format!("no SU(2) solutions at θ = {theta} (σ = {:.6})", sols.sigma)));
    }
    let r = sols.roots.get(root).ok_or_else(|| {
        input(format!("root index {root} out of range: {} SU(2) solutions at θ = {theta}", sols.roots.len()))
    })?;
    Ok(Point { theta, sigma: sols.sigma, u: r.u, roots: sols.roots.len(), near_multiple: sols.near_multiple })
}

fn rep_for(p: &Presentation, pt: &Point, tol: &Tolerances) -> Result<ktorsion::Rep, CliError> {
    let s = Complex64::from_polar(1.0, pt.theta);
    build_rep(p, s, Complex64::new(pt.u, 0.0), Complex64::from_polar(1.0, pt.theta / 2.0), tol.relation).map_err(input)
}

fn poly_rows(w: &mut csv::Writer<Vec<u8>>, part: &str, p: &LaurentPoly) -> Result<(), csv::Error> {
    for (i, c) in p.coeffs().iter().enumerate() {
        let e = p.offset() + i as i64;
        w.write_record([part.to_string(), e.to_string(), c.re.to_string(), c.im.to_string()])?;
    }
    Ok(())
}

fn cmd_riley_poly(cli: &Cli, word: &Option<String>) -> Result<String, CliError> {
    let w = match word {
        Some(text) => ktorsion::presentation::parse_word(text, &["x", "y"]).map_err(input)?,
        None => {
            let (_, p) = cli.presentation()?;
            p.bridge_word().cloned().ok_or_else(|| input("presentation has no 2-bridge word; pass --word"))?
        }
    };
    let phi = riley_polynomial(&w).map_err(input)?;
    let constant = phi.u_degree() == Some(0);
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = phi.to_json();
            v["word"] = json!(w.display_with(&["x", "y"]));
            v["display"] = json!(phi.display_su());
            if constant {
                v["note"] = json!("no nonabelian representations");
            }
            Ok(pretty(&v))
        }
        Format::Csv => csv_string(|out| {
            out.write_record(["u_power", "s_power", "coeff"])?;
            for (k, c) in phi.coeffs().iter().enumerate() {
                for (i, a) in c.coeffs().iter().enumerate() {
                    let e = c.offset() + i as i64;
                    out.write_record([k.to_string(), e.to_string(), a.to_string()])?;
                }
            }
            Ok(())
        }),
    }
}

#[derive(Serialize)]
struct TorsionOutput<'a> {
    knot: &'a str,
    theta: f64,
    sigma: f64,
    u: f64,
    root: usize,
    roots_at_theta: usize,
    near_multiple: bool,
    #[serde(flatten)]
    result: &'a TorsionResult,
}

fn cmd_torsion(cli: &Cli, theta: f64, root: usize) -> Result<String, CliError> {
    let tol = cli.tolerances()?;
    let (label, p) = cli.presentation()?;
    let drop = cli.drop_index(&p)?;
    let pt = su2_point(&p, theta, root, &tol)?;
    let rep = rep_for(&p, &pt, &tol)?;
    let res = compute_torsion(&p, &rep, drop, &tol).map_err(input)?;
    if !res.diagnostics.regular_proxy {
        eprintln!(
            "warning: regularity proxy fails (simple zero: {}, irreducible: {}, boundary trace ok: {})",
            res.diagnostics.simple_zero, res.diagnostics.irreducible, res.diagnostics.denominator_ok
        );
    }
    if let Some(c) = res.consistency {
        eprintln!("formula {:.12} vs limit {:.12}: relative difference {c:.3e}", res.formula_value, res.value);
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&TorsionOutput {
            knot: &label,
            theta,
            sigma: pt.sigma,
            u: pt.u,
            root,
            roots_at_theta: pt.roots,
            near_multiple: pt.near_multiple,
            result: &res,
        })),
        Format::Csv => sweep_csv(&[SweepRow {
            theta,
            sigma: pt.sigma,
            u: pt.u,
            torsion_re: res.value.re,
            torsion_im: res.value.im,
            tai_simple_zero: res.diagnostics.simple_zero,
            trace_mu: res.diagnostics.trace_mu.re,
        }]),
    }
}

fn cmd_tai(cli: &Cli, theta: f64, root: usize) -> Result<String, CliError> {
    let tol = cli.tolerances()?;
    let (label, p) = cli.presentation()?;
    let drop = cli.drop_index(&p)?;
    let pt = su2_point(&p, theta, root, &tol)?;
    let rep = rep_for(&p, &pt, &tol)?;
    let tai = twisted_alexander_invariant(&p, &rep, drop, &tol).map_err(input)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&json!({
            "knot": label,
            "theta": theta,
            "u": pt.u,
            "drop": p.names()[drop],
            "numerator": tai.numerator,
            "denominator": tai.denominator,
            "numerator_display": tai.numerator.to_string(),
            "denominator_display": tai.denominator.to_string(),
        }))),
        Format::Csv => csv_string(|w| {
            w.write_record(["part", "exponent", "re", "im"])?;
            poly_rows(w, "numerator", &tai.numerator)?;
            poly_rows(w, "denominator", &tai.denominator)
        }),
    }
}

fn grid_config(cli: &Cli, g: &GridArgs, p: &Presentation) -> Result<SweepConfig, CliError> {
    let cfg = SweepConfig {
        theta_lo: g.theta_lo,
        theta_hi: g.theta_hi,
        samples: g.samples,
        tol: cli.tolerances()?,
        drop: Some(cli.drop_index(p)?),
    };
    cfg.validate().map_err(input)?;
    Ok(cfg)
}

fn cmd_sweep(cli: &Cli, g: &GridArgs) -> Result<String, CliError> {
    let (_, p) = cli.presentation()?;
    let cfg = grid_config(cli, g, &p)?;
    let rows = sweep(&p, &cfg).map_err(input)?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&rows),
        Format::Json => Ok(pretty(&rows)),
    }
}

fn critical_csv(r: &CriticalReport) -> Result<String, CliError> {
    csv_string(|w| {
        w.write_record(["theta", "u", "torsion_re", "torsion_im", "derivative", "is_dihedral", "branch"])?;
        for c in &r.points {
            w.write_record([
                c.theta.to_string(),
                c.u.to_string(),
                c.torsion.re.to_string(),
                c.torsion.im.to_string(),
                c.derivative.to_string(),
                c.is_dihedral.to_string(),
                c.branch.to_string(),
            ])?;
        }
        Ok(())
    })
}

fn cmd_critical(cli: &Cli, g: &GridArgs) -> Result<String, CliError> {
    let (label, p) = cli.presentation()?;
    let cfg = grid_config(cli, g, &p)?;
    let report = critical_points(&p, &cfg).map_err(input)?;
    for e in &report.events {
        eprintln!("note: θ = {:.6}: {}", e.theta, e.message);
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v: Value = serde_json::to_value(&report).expect("serializable");
            v["knot"] = json!(label);
            Ok(pretty(&v))
        }
        Format::Csv => critical_csv(&report),
    }
}

pub fn verify_table(r: &verify::VerifyReport) -> String {
    let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    let mut out = format!(
        "{:<width$}  {:<6}  {:>10}  {:>9}  {:>7}  detail\n",
        "check", "result", "max error", "tolerance", "samples"
    );
    for c in &r.checks {
        out.push_str(&format!(
            "{:<width$}  {:<6}  {:>10.3e}  {:>9.1e}  {:>7}  {}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.max_error,
            c.tolerance,
            c.samples,
            c.detail
        ));
    }
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {failed} failed (seed {})\n", r.checks.len(), r.seed));
    out
}

fn cmd_verify(cli: &Cli, seed: u64, perturb: f64) -> Result<(String, bool), CliError> {
    let tol = cli.tolerances()?;
    let knots = if cli.knot.is_some() || cli.file.is_some() {
        vec![cli.presentation()?]
    } else {
        catalog::ENTRIES.iter().map(|e| (e.name.to_string(), e.presentation())).collect()
    };
    let report = verify::run(&verify::VerifyConfig { knots, tol, seed, perturb });
    let text = match cli.format {
        None => verify_table(&report),
        Some(Format::Json) => pretty(&report),
        Some(Format::Csv) => csv_string(|w| report.checks.iter().try_for_each(|c| w.serialize(c)))?,
    };
    Ok((text, report.passed()))
}

/// Runs one command and writes its output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (text, ok) = match &cli.command {
        Command::RileyPoly { word } => (cmd_riley_poly(cli, word)?, true),
        Command::Torsion { theta, root } => (cmd_torsion(cli, *theta, *root)?, true),
        Command::Tai { theta, root } => (cmd_tai(cli, *theta, *root)?, true),
        Command::Sweep(g) => (cmd_sweep(cli, g)?, true),
        Command::Critical(g) => (cmd_critical(cli, g)?, true),
        Command::Verify { seed, perturb } => cmd_verify(cli, *seed, *perturb)?,
    };
    cli.emit(&text)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("1.5").unwrap(), 1.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert!((parse_angle("2pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((parse_angle("2pi/3-0.2").unwrap() - (2.0 * PI / 3.0 - 0.2)).abs() < 1e-15);
        assert!((parse_angle("-pi/4").unwrap() + PI / 4.0).abs() < 1e-15);
        assert!(parse_angle("tau").is_err());
    }
}
