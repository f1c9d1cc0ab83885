//! The `itergcd` command line: argument handling, subcommand dispatch and
//! report emission.

pub mod emit;
pub mod parse;
mod reports;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use itergcd::dynamics::{independence_probe, orbit, ramified_cycle_check};
use itergcd::heights::{canonical_height, special_probe};
use itergcd::lab::{gcd_grid, linear_normal_form, linear_pair_common_root, paper_suite};
use itergcd::multiplicity::{direct_v, divisor_h, multiplicity_bound};
use itergcd::{config, Error, NumberField, NumberFieldElem, Poly};
use thiserror::Error as ThisError;

use emit::{emit, EmitError, Format, Report};
use parse::{parse_poly, ParseError};
use reports::*;

#[derive(Debug, Parser)]
#[command(name = "itergcd", version, about = "Gcds of polynomial iterates, multiplicity certificates and heights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format (default depends on the subcommand).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized internals (modular primes, root-finder starts).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor gcd(f^m - c, g^n - c) over 1 <= m, n <= N.
    GcdGrid {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c: String,
        #[arg(long = "N")]
        grid_n: usize,
        /// Only the cells with m = n.
        #[arg(long)]
        diagonal: bool,
    },
    /// Build h divisible by every grid gcd, with per-factor certificates.
    Divisor {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c: String,
        #[arg(long = "N")]
        grid_n: usize,
    },
    /// Certify a bound on v_λ(q^n - c) and check it against direct values.
    MultCert {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Minimal polynomial of λ; λ is its root.
        #[arg(long = "lambda-minpoly", allow_hyphen_values = true)]
        lambda_minpoly: String,
        /// Check direct values for n = 1..=this.
        #[arg(long, default_value_t = 8)]
        n: u64,
    },
    /// Canonical height of a point.
    Height {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// The point, as a polynomial in the root of --lambda-minpoly (a constant without it).
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long = "lambda-minpoly", allow_hyphen_values = true)]
        lambda_minpoly: Option<String>,
        #[arg(long, default_value_t = 30)]
        steps: usize,
    },
    /// Heights of roots of f^n - c for n = 1..=n.
    SpecialProbe {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        steps: usize,
    },
    /// Forward orbit of a point.
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long = "lambda-minpoly", allow_hyphen_values = true)]
        lambda_minpoly: Option<String>,
        /// Step cap.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Is a point in a ramified cycle?
    Ramified {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long = "lambda-minpoly", allow_hyphen_values = true)]
        lambda_minpoly: Option<String>,
    },
    /// Common root of f^n - c and g^n - c for linear f, g.
    Linear {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long)]
        n: usize,
    },
    /// Search for a word relation between f and g.
    Indep {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Longest word length to try.
        #[arg(long, default_value_t = 10)]
        cap: u32,
    },
    /// Check the explicit example families.
    PaperSuite,
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot parse {flag}: {source}")]
    Parse {
        flag: &'static str,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// The report was produced but some check in it failed.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Emit(EmitError::Unsupported(_)) => 2,
            CliError::Core(e) if e.is_resource_or_undecided() => 3,
            CliError::Core(
                Error::InvalidInput(_) | Error::HypothesisViolation(_) | Error::Degenerate(_),
            ) => 2,
            _ => 1,
        }
    }
}

fn poly(flag: &'static str, text: &str) -> Result<Poly, CliError> {
    parse_poly(text).map_err(|source| CliError::Parse { flag, source })
}

fn field(minpoly: Option<&str>) -> Result<Option<NumberField>, CliError> {
    minpoly
        .map(|m| Ok(NumberField::new(&poly("--lambda-minpoly", m)?)?))
        .transpose()
}

/// A point given as a polynomial in the field generator, or a constant.
fn point(flag: &'static str, text: &str, k: Option<&NumberField>) -> Result<NumberFieldElem, CliError> {
    let p = poly(flag, text)?;
    match k {
        Some(k) => Ok(k.elem(p)),
        None => {
            let a = p
                .as_constant()
                .ok_or_else(|| CliError::Usage(format!("{flag} must be a constant unless --lambda-minpoly is given")))?;
            Ok(NumberField::rational_point(&a).generator())
        }
    }
}

/// Output text and a failure to report after printing it, if any.
type Outcome = (String, Option<CliError>);

fn render<R: Report>(r: &R, format: Format) -> Result<String, CliError> {
    Ok(emit(r, format)?)
}

fn execute(cmd: &Command, format: Option<Format>) -> Result<Outcome, CliError> {
    let fmt = |default: Format| format.unwrap_or(default);
    match cmd {
        Command::GcdGrid { f, g, c, grid_n, diagonal } => {
            let rep = GridReport(gcd_grid(&poly("--f", f)?, &poly("--g", g)?, &poly("--c", c)?, *grid_n, *diagonal));
            Ok((render(&rep, fmt(Format::Csv))?, None))
        }
        Command::Divisor { f, g, c, grid_n } => {
            let rep = DivisorOut(divisor_h(&poly("--f", f)?, &poly("--g", g)?, &poly("--c", c)?, *grid_n)?);
            Ok((render(&rep, fmt(Format::Json))?, None))
        }
        Command::MultCert { q, c, lambda_minpoly, n } => {
            let (q, c) = (poly("--q", q)?, poly("--c", c)?);
            let k = field(Some(lambda_minpoly))?.expect("given");
            let certificate = multiplicity_bound(&q, &c, &k)?;
            let mut checks = Vec::new();
            for i in 1..=*n {
                let v = match direct_v(&q, &c, &k, i) {
                    Ok(v) => v,
                    Err(Error::Degenerate(_)) => continue,
                    Err(e) => return Err(e.into()),
                };
                checks.push(DirectCheck {
                    n: i,
                    v,
                    within_bound: v <= certificate.bound_m,
                    in_class: v == 0 || certificate.congruence.contains(i),
                });
            }
            let failed = checks.iter().find(|c| !c.within_bound || !c.in_class).map(|c| {
                CliError::Failed(format!("direct value v = {} at n = {} violates the certificate", c.v, c.n))
            });
            let rep = CertReport { certificate, checks };
            Ok((render(&rep, fmt(Format::Json))?, failed))
        }
        Command::Height { f, x, lambda_minpoly, steps } => {
            let f = poly("--f", f)?;
            let k = field(lambda_minpoly.as_deref())?;
            let x = point("--x", x, k.as_ref())?;
            let h = canonical_height(&f, &x, *steps)?;
            let rep = HeightReport {
                f,
                x: x.render(),
                field: x.field().modulus().render("t"),
                height: h,
            };
            Ok((render(&rep, fmt(Format::Json))?, None))
        }
        Command::SpecialProbe { f, c, n, steps } => {
            let rows = special_probe(&poly("--f", f)?, &poly("--c", c)?, 1..=*n, *steps)?;
            Ok((render(&ProbeReport(rows), fmt(Format::Json))?, None))
        }
        Command::Orbit { q, x, lambda_minpoly, cap } => {
            let q = poly("--q", q)?;
            let k = field(lambda_minpoly.as_deref())?;
            let x = point("--x", x, k.as_ref())?;
            let cfg = config::get();
            let orb = orbit(&q, &x, cap.unwrap_or(cfg.orbit_step_cap), cfg.orbit_size_cap_bits);
            Ok((render(&OrbitReport::from(&orb), fmt(Format::Json))?, None))
        }
        Command::Ramified { q, c, lambda_minpoly } => {
            let q = poly("--q", q)?;
            let k = field(lambda_minpoly.as_deref())?;
            let c = point("--c", c, k.as_ref())?;
            let status = ramified_cycle_check(&q, &c)?;
            let rep = RamifiedReport {
                q,
                point: c.render(),
                status,
            };
            Ok((render(&rep, fmt(Format::Json))?, None))
        }
        Command::Linear { f, g, c, n } => {
            let (f, g) = (poly("--f", f)?, poly("--g", g)?);
            let c = c.as_deref().map(|c| poly("--c", c)).transpose()?;
            let normal_form = linear_normal_form(&f, &g)?;
            let lambda = linear_pair_common_root(&f, &g, c.as_ref(), *n)?;
            let rep = LinearReport {
                f,
                g,
                c,
                n: *n,
                normal_form,
                lambda,
            };
            Ok((render(&rep, fmt(Format::Json))?, None))
        }
        Command::Indep { f, g, cap } => {
            let (f, g) = (poly("--f", f)?, poly("--g", g)?);
            let result = independence_probe(&f, &g, *cap)?;
            Ok((render(&IndepReport { f, g, result }, fmt(Format::Json))?, None))
        }
        Command::PaperSuite => {
            let rep = SuiteOut(paper_suite());
            let failed = (!rep.0.all_passed()).then(|| CliError::Failed("some example checks failed".into()));
            Ok((render(&rep, fmt(Format::Md))?, failed))
        }
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn run_parsed(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(seed) = cli.global.seed {
        config::set(config::Config { seed, ..config::get() });
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.global.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let (text, failure) = pool.install(|| execute(&cli.command, cli.global.format))?;
    match &cli.global.out {
        Some(path) => write_atomic(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    match failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// Run with explicit streams; returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match run_parsed(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "itergcd: {e}");
            e.exit_code()
        }
    }
}

/// Run against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
