//! Command-line front end for `lattice-cover`.

pub mod repro;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use lattice_cover::census::{self, ClaimStats};
use lattice_cover::cover::{build_cover, MChoice};
use lattice_cover::genpos::{self, GenPosCertificate};
use lattice_cover::lattice::{successive_minima, BUDGET_ENV};
use lattice_cover::oracle::{check_sandwich, exact_g, exact_h};
use lattice_cover::rational::parse_rational;
use lattice_cover::{Body, BodyDescriptor, Error, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lattice-cover", version, about = "Exact lattice-point covers, general-position sets and hyperplane census")]
pub struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cap on scanned grid points, overriding the LATTICE_COVER_BUDGET variable.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for sampled statistics and randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Successive minima of a body.
    Minima {
        #[arg(long)]
        body: PathBuf,
    },
    /// Build (or verify) a general-position point set.
    Genpos(GenposArgs),
    /// Build a verified hyperplane cover of the body's lattice points.
    Cover {
        #[arg(long)]
        body: PathBuf,
        /// Dimension parameter `m` (0 < m < n) or `auto`.
        #[arg(long, default_value = "auto")]
        m: String,
    },
    /// Hyperplanes spanned by lattice points of a ball.
    Census(CensusArgs),
    /// Exact g or h by exhaustive search.
    Oracle {
        #[arg(value_enum)]
        quantity: OracleQuantity,
        #[arg(long)]
        body: PathBuf,
    },
    /// Run a bundled reproduction suite.
    Repro {
        #[arg(value_enum)]
        suite: repro::Suite,
        /// Also write the suite's CSV table, if it has one.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct GenposArgs {
    #[command(subcommand)]
    pub verify: Option<GenposVerify>,
    #[arg(long)]
    pub body: Option<PathBuf>,
    /// Use this prime instead of the largest admissible one.
    #[arg(long)]
    pub prime: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum GenposVerify {
    /// Check a certificate, or a bare list of points for general position.
    Verify {
        #[arg(long)]
        points: PathBuf,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct CensusArgs {
    #[command(subcommand)]
    pub scan: Option<CensusScan>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: Option<String>,
    /// Also gather λ_1 statistics of the orthogonal lattices.
    #[arg(long)]
    pub claim: bool,
    #[arg(long, requires = "claim")]
    pub rho: Option<String>,
    #[arg(long, requires = "claim")]
    pub t: Option<String>,
    /// Sample this many vectors instead of all of them.
    #[arg(long, requires = "claim")]
    pub sample: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum CensusScan {
    /// Census over several radii with a log-log slope fit.
    Scan {
        #[arg(long)]
        n: usize,
        /// Comma-separated radii.
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
pub enum OracleQuantity {
    G,
    H,
    Sandwich,
}

/// Failure of a command, split by exit code.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Verification(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(inner) if inner.is_verification_failure() => Failure::Verification(e),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

/// A result document plus whether it records a failed check.
struct Outcome {
    json: serde_json::Value,
    verified: bool,
}

impl Outcome {
    fn ok(value: impl Serialize) -> anyhow::Result<Outcome> {
        Ok(Outcome { json: serde_json::to_value(value)?, verified: true })
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    if let Some(b) = cli.budget {
        std::env::set_var(BUDGET_ENV, b.to_string());
    }
    let pool = match cli.threads.map(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build()) {
        Some(Ok(pool)) => Some(pool),
        Some(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
        None => None,
    };
    let result = match &pool {
        Some(pool) => pool.install(|| execute(&cli)),
        None => execute(&cli),
    };
    match result.and_then(|outcome| emit(&cli, &outcome, stdout).map(|_| outcome).map_err(Failure::from)) {
        Ok(outcome) if outcome.verified => EXIT_OK,
        Ok(_) => {
            let _ = writeln!(stderr, "verification failed");
            EXIT_VERIFICATION
        }
        Err(Failure::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_USAGE
        }
        Err(Failure::Verification(e)) => {
            let _ = writeln!(stderr, "verification failed: {e:#}");
            EXIT_VERIFICATION
        }
    }
}

fn emit(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(&outcome.json)?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

pub fn read_body(path: &Path) -> anyhow::Result<Body> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let desc = BodyDescriptor::from_json(&text).with_context(|| format!("parsing body {}", path.display()))?;
    Ok(desc.to_body()?)
}

fn rational_arg(name: &str, value: &str) -> anyhow::Result<Rational> {
    parse_rational(value).with_context(|| format!("--{name}"))
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    Ok(match &cli.command {
        Command::Minima { body } => Outcome::ok(successive_minima(&read_body(body)?)?)?,
        Command::Genpos(args) => genpos_command(args)?,
        Command::Cover { body, m } => {
            let body = read_body(body)?;
            let m = match m.as_str() {
                "auto" => MChoice::Auto,
                k => MChoice::Fixed(k.parse().map_err(|_| anyhow::anyhow!("--m must be an integer or `auto`"))?),
            };
            let family = build_cover(&body, m)?;
            let diagnostics = json!({
                "m": family.m,
                "alpha": family.alpha.to_string(),
                "f_alpha": family.f_alpha,
                "size": family.len(),
                "size_bound": family.size_bound(),
                "points_checked": family.points_checked,
            });
            Outcome::ok(json!({ "cover": family, "diagnostics": diagnostics }))?
        }
        Command::Census(args) => census_command(args, cli.seed)?,
        Command::Oracle { quantity, body } => {
            let body = read_body(body)?;
            match quantity {
                OracleQuantity::G => Outcome::ok(exact_g(&body)?)?,
                OracleQuantity::H => Outcome::ok(exact_h(&body)?)?,
                OracleQuantity::Sandwich => {
                    let report = check_sandwich(&body)?;
                    let verified = report.holds;
                    Outcome { json: serde_json::to_value(report).map_err(anyhow::Error::from)?, verified }
                }
            }
        }
        Command::Repro { suite, csv } => {
            let report = repro::run_suite(*suite, cli.seed)?;
            if let (Some(path), Some(table)) = (csv, &report.csv) {
                std::fs::write(path, table).with_context(|| format!("writing {}", path.display()))?;
            }
            let verified = report.pass;
            Outcome { json: serde_json::to_value(report).map_err(anyhow::Error::from)?, verified }
        }
    })
}

fn genpos_command(args: &GenposArgs) -> Result<Outcome, Failure> {
    if let Some(GenposVerify::Verify { points }) = &args.verify {
        let text = std::fs::read_to_string(points).with_context(|| format!("reading {}", points.display()))?;
        let value: serde_json::Value = serde_json::from_str(&text).context("parsing points")?;
        if value.is_object() {
            let cert: GenPosCertificate = serde_json::from_value(value).context("parsing certificate")?;
            let result = cert.verify();
            let verified = result.is_ok();
            return Ok(Outcome {
                json: json!({
                    "kind": "certificate",
                    "n": cert.body.dim(),
                    "p": cert.p,
                    "count": cert.len(),
                    "valid": verified,
                    "reason": result.err().map(|e| e.to_string()),
                }),
                verified,
            });
        }
        let pts: Vec<Vec<i64>> = serde_json::from_value(value).context("expected an array of integer points")?;
        let Some(n) = pts.first().map(Vec::len) else { return Err(Failure::Usage(anyhow::anyhow!("no points given"))) };
        let verified = genpos::verify_general_position(&pts, n);
        return Ok(Outcome { json: json!({ "kind": "points", "n": n, "count": pts.len(), "valid": verified }), verified });
    }
    let Some(body) = &args.body else {
        return Err(Failure::Usage(anyhow::anyhow!("genpos needs --body or the verify subcommand")));
    };
    let body = read_body(body)?;
    let profile = successive_minima(&body)?;
    let bound = genpos::lower_bound(&profile).ok();
    let cert = match args.prime {
        Some(p) => genpos::build_general_position_with_prime(&body, p)?,
        None => genpos::build_general_position(&body)?,
    };
    cert.verify()?;
    let exceeds = bound.as_ref().map(|b| b.exceeded_by(cert.len()));
    Outcome::ok(json!({
        "certificate": cert,
        "size": cert.len(),
        "lower_bound": bound,
        "exceeds_bound": exceeds,
    }))
    .map_err(Failure::from)
}

fn census_command(args: &CensusArgs, seed: u64) -> Result<Outcome, Failure> {
    if let Some(CensusScan::Scan { n, radii, csv }) = &args.scan {
        let radii = radii.iter().map(|r| rational_arg("radii", r)).collect::<anyhow::Result<Vec<_>>>()?;
        let report = census::scaling_fit(*n, &radii)?;
        if let Some(path) = csv {
            std::fs::write(path, census_csv(&report.reports)?).with_context(|| format!("writing {}", path.display()))?;
        }
        return Ok(Outcome::ok(report)?);
    }
    let (Some(n), Some(r)) = (args.n, &args.r) else {
        return Err(Failure::Usage(anyhow::anyhow!("census needs --n and --r, or the scan subcommand")));
    };
    let r = rational_arg("r", r)?;
    let report = census::census(n, &r)?;
    if !args.claim {
        return Ok(Outcome::ok(report)?);
    }
    let rho = args.rho.as_deref().map(|x| rational_arg("rho", x)).transpose()?.unwrap_or_else(|| r.clone());
    let t = args.t.as_deref().map(|x| rational_arg("t", x)).transpose()?.unwrap_or_else(|| Rational::from_integer(0.into()));
    let stats: ClaimStats = census::claim_stats(n, &rho, &t, args.sample.map(|s| (s, seed)))?;
    let verified = stats.minkowski_violations.is_empty();
    Ok(Outcome { json: json!({ "census": report, "claim": stats }), verified })
}

/// The census table with columns `r, h_count, point_count, s_r, ratio`.
pub fn census_csv(reports: &[census::CensusReport]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "h_count", "point_count", "s_r", "ratio"])?;
    for c in reports {
        w.write_record([
            c.r.to_string(),
            c.h_count.to_string(),
            c.point_count.to_string(),
            c.s_r.to_string(),
            format!("{:.6}", c.ratio),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
