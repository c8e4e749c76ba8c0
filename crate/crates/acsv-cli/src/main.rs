//! `acsv`: command-line front end for the exact generating-function
//! analysis library.
//!
//! Subcommands operate on a rational function `P/Q` described by polynomial
//! strings, a comma-separated variable list (which fixes the ring's variable
//! order and therefore every canonical rendering), and an integer direction.
//! Each report comes in a deterministic text form and, with `--json`, a
//! schema-stable JSON form.
//!
//! Exit codes: `0` success (for `spai`: no stationary points at infinity),
//! `10` stationary points at infinity exist, `3` positive-dimensional
//! critical locus, `4` non-smooth dominant point, `2` usage or parse error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use acsv_core::critical::{affine_critical_points, unipoly_to_string, CriticalError};
use acsv_core::groebner::Ideal;
use acsv_core::numeric::CBox;
use acsv_core::poly::{parse_polynomial, Direction, Polynomial, Ring, TermOrder};
use acsv_core::rat::rat_to_f64;
use acsv_core::spai::{
    algorithm1, algorithm2, HeightsOutcome, SpaiError, SpaiProblem, SpaiReport, StratumSpec,
};

#[allow(dead_code)] // wired up by the spai subcommand
const EXIT_SPAI_EXIST: u8 = 10;
const EXIT_POSITIVE_DIM: u8 = 3;
#[allow(dead_code)] // wired up by the asymptotics subcommand
const EXIT_NOT_SMOOTH: u8 = 4;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "acsv",
    version,
    about = "Exact critical-point and asymptotic analysis of rational generating functions",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Groebner basis of an ideal
    Gb(GbArgs),
    /// Stationary points at infinity: existence, witnesses, and heights
    Spai(SpaiArgs),
    /// Affine critical points for a direction, certified, sorted by height
    Critical(CriticalArgs),
}

#[derive(Args)]
struct GbArgs {
    /// Generators, separated by semicolons, e.g. "x^2 - y; x*y - 1"
    #[arg(long, allow_hyphen_values = true)]
    gens: String,
    /// Ring variables in order, e.g. x,y,z
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Monomial order: grevlex, lex, or elim:<k> (first k variables dominate)
    #[arg(long, default_value = "grevlex")]
    order: String,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SpaiArgs {
    /// The denominator polynomial Q
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Ring variables in order, e.g. x,y
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Integer direction, e.g. 1,1
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    dir: Vec<i64>,
    /// Affine locus to saturate away: generators separated by semicolons
    #[arg(long, allow_hyphen_values = true)]
    exclude: Option<String>,
    /// Stratification file: one stratum per line, "codim=<c>: p1; p2; ..."
    #[arg(long, conflicts_with = "poly")]
    strata: Option<String>,
    /// Leave the direction symbolic: report the sliced ideal only
    #[arg(long)]
    symbolic_dir: bool,
    /// Working precision in bits (64..=4096); overrides ACSV_PREC
    #[arg(long)]
    prec: Option<u32>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CriticalArgs {
    /// The denominator polynomial Q
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Ring variables in order, e.g. x,y
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Integer direction, e.g. 1,1
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    dir: Vec<i64>,
    /// Working precision in bits (64..=4096); overrides ACSV_PREC
    #[arg(long)]
    prec: Option<u32>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

/// A failure to report before exiting: message plus process exit code.
struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { message: message.into(), code: EXIT_USAGE }
    }
}

impl From<CriticalError> for Failure {
    fn from(e: CriticalError) -> Failure {
        let code = match &e {
            CriticalError::NotZeroDimensional { .. } => EXIT_POSITIVE_DIM,
            _ => EXIT_USAGE,
        };
        Failure { message: e.to_string(), code }
    }
}

impl From<SpaiError> for Failure {
    fn from(e: SpaiError) -> Failure {
        Failure { message: e.to_string(), code: EXIT_USAGE }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gb(args) => run_gb(&args),
        Command::Spai(args) => run_spai(&args),
        Command::Critical(args) => run_critical(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("acsv: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Print a report line; when the reader has closed the pipe (e.g. `| head`),
/// exit quietly instead of panicking.
fn emit(line: std::fmt::Arguments<'_>) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{line}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! emit {
    ($($arg:tt)*) => { emit(format_args!($($arg)*)) };
}

/// Build the polynomial ring from the --vars list.
fn make_ring(vars: &[String]) -> Result<Ring, Failure> {
    if vars.is_empty() {
        return Err(Failure::usage("--vars must list at least one variable"));
    }
    Ring::new(vars).map_err(|e| Failure::usage(e.to_string()))
}

/// Parse one polynomial against the ring.
fn parse_poly(text: &str, ring: &Ring) -> Result<Polynomial, Failure> {
    parse_polynomial(text, ring).map_err(|e| Failure::usage(format!("in {text:?}: {e}")))
}

/// Parse a semicolon-separated generator list.
fn parse_gens(text: &str, ring: &Ring) -> Result<Vec<Polynomial>, Failure> {
    let mut gens = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        gens.push(parse_poly(part, ring)?);
    }
    if gens.is_empty() {
        return Err(Failure::usage("no generators given"));
    }
    Ok(gens)
}

/// Working precision: --prec flag, else ACSV_PREC, else 128; must lie in
/// 64..=4096.
fn resolve_precision(flag: Option<u32>) -> Result<u32, Failure> {
    let prec = match flag {
        Some(p) => p,
        None => match std::env::var("ACSV_PREC") {
            Ok(s) => s
                .trim()
                .parse::<u32>()
                .map_err(|_| Failure::usage(format!("ACSV_PREC is not a number: {s:?}")))?,
            Err(_) => 128,
        },
    };
    if !(64..=4096).contains(&prec) {
        return Err(Failure::usage(format!(
            "precision must be between 64 and 4096 bits, got {prec}"
        )));
    }
    Ok(prec)
}

fn direction_from(dir: &[i64], nvars: usize) -> Result<Direction, Failure> {
    if dir.len() != nvars {
        return Err(Failure::usage(format!(
            "--dir has {} entries but there are {} variables",
            dir.len(),
            nvars
        )));
    }
    Direction::new(dir.to_vec()).map_err(|e| Failure::usage(e.to_string()))
}

#[derive(Serialize)]
struct GbReport {
    order: String,
    basis: Vec<String>,
}

fn run_gb(args: &GbArgs) -> Result<u8, Failure> {
    let ring = make_ring(&args.vars)?;
    let gens = parse_gens(&args.gens, &ring)?;
    let order = parse_order(&args.order, ring.nvars())?;
    let ideal = Ideal::new(&ring, gens).map_err(|e| Failure::usage(e.to_string()))?;
    let basis = ideal.groebner_basis(&order);
    let rendered: Vec<String> = basis.iter().map(|p| p.to_string()).collect();
    if args.json {
        let report = GbReport { order: args.order.clone(), basis: rendered };
        emit!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for line in &rendered {
            emit!("{line}");
        }
    }
    Ok(0)
}

fn parse_order(text: &str, nvars: usize) -> Result<TermOrder, Failure> {
    match text {
        "grevlex" => Ok(TermOrder::grevlex()),
        "lex" => Ok(TermOrder::lex()),
        _ => {
            let k = text
                .strip_prefix("elim:")
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| {
                    Failure::usage(format!(
                        "unknown order {text:?}; expected grevlex, lex, or elim:<k>"
                    ))
                })?;
            if k == 0 || k > nvars {
                return Err(Failure::usage(format!(
                    "elimination block size must be in 1..={nvars}, got {k}"
                )));
            }
            Ok(TermOrder::elim(k))
        }
    }
}

/// JSON form of one certified complex coordinate.
#[derive(Serialize)]
struct CoordReport {
    approx_re: f64,
    approx_im: f64,
    radius: f64,
}

impl CoordReport {
    fn from_box(b: &CBox) -> CoordReport {
        CoordReport {
            approx_re: rat_to_f64(b.re()),
            approx_im: rat_to_f64(b.im()),
            radius: rat_to_f64(b.rad()),
        }
    }
}

#[derive(Serialize)]
struct CriticalPointReport {
    coords: Vec<CoordReport>,
    height: f64,
    min_polys: Vec<String>,
}

fn run_critical(args: &CriticalArgs) -> Result<u8, Failure> {
    let ring = make_ring(&args.vars)?;
    let q = parse_poly(&args.poly, &ring)?;
    let dir = direction_from(&args.dir, ring.nvars())?;
    let prec = resolve_precision(args.prec)?;
    let points = affine_critical_points(&q, &dir, prec)?;

    let reports: Vec<CriticalPointReport> = points
        .iter()
        .map(|p| CriticalPointReport {
            coords: p.coords.iter().map(CoordReport::from_box).collect(),
            height: p.height,
            min_polys: p
                .min_polys
                .iter()
                .enumerate()
                .map(|(v, mp)| match mp {
                    Some(up) => unipoly_to_string(up, ring.name(v)),
                    None => "0".to_string(),
                })
                .collect(),
        })
        .collect();

    if args.json {
        emit!("{}", serde_json::to_string_pretty(&reports).expect("report serializes"));
        return Ok(0);
    }
    if reports.is_empty() {
        emit!("no affine critical points");
        return Ok(0);
    }
    for (i, p) in reports.iter().enumerate() {
        emit!("point {} (height {}):", i + 1, p.height);
        for (v, c) in p.coords.iter().enumerate() {
            let name = ring.name(v);
            if c.radius == 0.0 && c.approx_im == 0.0 {
                emit!("  {name} = {} (exact)", c.approx_re);
            } else if c.approx_im == 0.0 {
                emit!("  {name} = {} +/- {:e}", c.approx_re, c.radius);
            } else {
                emit!(
                    "  {name} = {} + {}i +/- {:e}",
                    c.approx_re, c.approx_im, c.radius
                );
            }
            emit!("    defining: {}", p.min_polys[v]);
        }
    }
    Ok(0)
}

/// JSON form of one witness coordinate: a defining polynomial plus the
/// certified disk.
#[derive(Serialize)]
struct WitnessCoordReport {
    min_poly: String,
    approx_re: f64,
    approx_im: f64,
    radius: f64,
}

#[derive(Serialize)]
struct WitnessReport {
    chart: usize,
    coords: Vec<WitnessCoordReport>,
}

#[derive(Serialize)]
struct HeightReport {
    eta_min_poly: String,
    eta_approx_re: f64,
    eta_approx_im: f64,
    eta_radius: f64,
    height: f64,
}

#[derive(Serialize)]
struct SpaiJsonReport {
    exists: Option<bool>,
    saturated_ideal: Vec<String>,
    witnesses: Vec<WitnessReport>,
    heights: Option<Vec<HeightReport>>,
    heights_unconstrained: bool,
}

/// Parse a strata file: one stratum per line, `codim=<c>: p1; p2; ...`.
/// Blank lines and `#` comments are skipped.
fn parse_strata(text: &str, ring: &Ring) -> Result<Vec<StratumSpec>, Failure> {
    let mut strata = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ln = idx + 1;
        let rest = line.strip_prefix("codim=").ok_or_else(|| {
            Failure::usage(format!("line {ln}: expected `codim=<c>: p1; p2; ...`"))
        })?;
        let (c_text, gens_text) = rest
            .split_once(':')
            .ok_or_else(|| Failure::usage(format!("line {ln}: missing `:` after codimension")))?;
        let c: usize = c_text.trim().parse().map_err(|_| {
            Failure::usage(format!("line {ln}: codimension is not a number: {:?}", c_text.trim()))
        })?;
        let gens = parse_gens(gens_text, ring)
            .map_err(|f| Failure::usage(format!("line {ln}: {}", f.message)))?;
        strata.push(StratumSpec::new(gens, c));
    }
    if strata.is_empty() {
        return Err(Failure::usage("strata file lists no strata"));
    }
    Ok(strata)
}

fn spai_json(report: &SpaiReport, eta_name: &str) -> SpaiJsonReport {
    let basis = report.saturated_ideal.groebner_basis(&TermOrder::grevlex());
    let ring = report.saturated_ideal.ring().clone();
    let witnesses = report
        .witnesses
        .iter()
        .map(|w| WitnessReport {
            chart: w.chart,
            coords: w
                .point
                .coords
                .iter()
                .zip(w.point.min_polys.iter())
                .enumerate()
                .map(|(v, (b, mp))| WitnessCoordReport {
                    min_poly: match mp {
                        Some(up) => unipoly_to_string(up, ring.name(v)),
                        None => "0".to_string(),
                    },
                    approx_re: rat_to_f64(b.re()),
                    approx_im: rat_to_f64(b.im()),
                    radius: rat_to_f64(b.rad()),
                })
                .collect(),
        })
        .collect();
    let (heights, heights_unconstrained) = match &report.heights {
        None => (None, false),
        Some(HeightsOutcome::Unconstrained) => (None, true),
        Some(HeightsOutcome::Values(vals)) => (
            Some(
                vals.iter()
                    .map(|ev| HeightReport {
                        eta_min_poly: unipoly_to_string(&ev.min_poly, eta_name),
                        eta_approx_re: rat_to_f64(ev.eta.re()),
                        eta_approx_im: rat_to_f64(ev.eta.im()),
                        eta_radius: rat_to_f64(ev.eta.rad()),
                        height: ev.height,
                    })
                    .collect(),
            ),
            false,
        ),
    };
    SpaiJsonReport {
        exists: report.exists,
        saturated_ideal: basis.iter().map(|p| p.to_string()).collect(),
        witnesses,
        heights,
        heights_unconstrained,
    }
}

fn print_spai_text(report: &SpaiJsonReport, ring: &Ring, eta_name: &str) {
    emit!("saturated ideal at infinity:");
    if report.saturated_ideal.is_empty() {
        emit!("  (zero ideal)");
    }
    for g in &report.saturated_ideal {
        emit!("  {g}");
    }
    match report.exists {
        Some(true) => emit!("stationary points at infinity: yes"),
        Some(false) => emit!("stationary points at infinity: no"),
        None => emit!("stationary points at infinity: undetermined (symbolic direction)"),
    }
    for w in &report.witnesses {
        emit!("witness (chart {} = 1):", ring.name(w.chart));
        for (v, c) in w.coords.iter().enumerate() {
            if c.radius == 0.0 && c.approx_im == 0.0 {
                emit!("  {} = {} (exact)", ring.name(v), c.approx_re);
            } else if c.approx_im == 0.0 {
                emit!("  {} = {} +/- {:e}", ring.name(v), c.approx_re, c.radius);
            } else {
                emit!(
                    "  {} = {} + {}i +/- {:e}",
                    ring.name(v),
                    c.approx_re,
                    c.approx_im,
                    c.radius
                );
            }
        }
    }
    if report.heights_unconstrained {
        emit!("heights: unconstrained (the height variable stays free)");
    } else if let Some(hs) = &report.heights {
        if hs.is_empty() {
            emit!("heights: none");
        }
        for h in hs {
            if h.eta_radius == 0.0 && h.eta_approx_im == 0.0 {
                emit!(
                    "height {} at {eta_name} = {} (exact), defining {}",
                    h.height, h.eta_approx_re, h.eta_min_poly
                );
            } else if h.eta_approx_im == 0.0 {
                emit!(
                    "height {} at {eta_name} = {} +/- {:e}, defining {}",
                    h.height, h.eta_approx_re, h.eta_radius, h.eta_min_poly
                );
            } else {
                emit!(
                    "height {} at {eta_name} = {} + {}i +/- {:e}, defining {}",
                    h.height, h.eta_approx_re, h.eta_approx_im, h.eta_radius, h.eta_min_poly
                );
            }
        }
    }
}

fn run_spai(args: &SpaiArgs) -> Result<u8, Failure> {
    let ring = make_ring(&args.vars)?;
    let dir = direction_from(&args.dir, ring.nvars())?;
    let prec = resolve_precision(args.prec)?;

    let reports: Vec<SpaiReport> = if let Some(path) = &args.strata {
        if args.symbolic_dir {
            return Err(Failure::usage("--symbolic-dir applies to --poly runs only"));
        }
        if args.exclude.is_some() {
            return Err(Failure::usage(
                "--exclude applies to --poly runs only; with --strata, list the \
                 higher-codimension strata instead",
            ));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?;
        let strata = parse_strata(&text, &ring)?;
        algorithm2(&strata, &dir, prec)?
    } else {
        let poly_text = args
            .poly
            .as_ref()
            .ok_or_else(|| Failure::usage("one of --poly or --strata is required"))?;
        let q = parse_poly(poly_text, &ring)?;
        let mut problem = SpaiProblem::new(q, dir);
        if let Some(ex) = &args.exclude {
            let gens = parse_gens(ex, &ring)?;
            let ideal = Ideal::new(&ring, gens).map_err(|e| Failure::usage(e.to_string()))?;
            problem = problem.with_exclusion(ideal);
        }
        if args.symbolic_dir {
            problem = problem.with_symbolic_direction();
        }
        vec![algorithm1(&problem, prec)?]
    };

    let eta_index = args.vars.len() + 1;
    let json_reports: Vec<SpaiJsonReport> = reports
        .iter()
        .map(|r| spai_json(r, r.saturated_ideal.ring().name(eta_index)))
        .collect();

    if args.json {
        if args.strata.is_some() {
            emit!("{}", serde_json::to_string_pretty(&json_reports).expect("report serializes"));
        } else {
            emit!(
                "{}",
                serde_json::to_string_pretty(&json_reports[0]).expect("report serializes")
            );
        }
    } else {
        for (i, (r, raw)) in json_reports.iter().zip(reports.iter()).enumerate() {
            if args.strata.is_some() {
                emit!("stratum {}:", i + 1);
            }
            let rring = raw.saturated_ideal.ring().clone();
            print_spai_text(r, &rring, rring.name(eta_index));
        }
    }

    let any_exist = reports.iter().any(|r| r.exists == Some(true));
    Ok(if any_exist { EXIT_SPAI_EXIST } else { 0 })
}
