//! Command-line front end for the `rice-ie` crate: point evaluation, grid
//! sweeps, figure data sets and the validation suites.
//!
//! Exit codes: 0 success, 1 domain or usage error, 2 numerical
//! non-convergence, 3 validation failure.

// `!(v > 0.0)` is used deliberately so that NaN arguments are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod grid;
pub mod table;
pub mod validate;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rice_ie::ie::{self, EvalPoint, DEFAULT_MAX_TERMS, ORACLE_TOL};
use rice_ie::{Error, Method};

pub use grid::{FigureId, Spacing, SweepSpec};
pub use validate::{BoundFns, Level, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rice-ie", version, about = "Evaluate and bound the Rice Ie-function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Ie(k, x) at one point.
    Eval {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        x: f64,
        /// Route tag (eq1..eq6, lemma1); chosen automatically when omitted.
        #[arg(long)]
        method: Option<String>,
        #[arg(long, default_value_t = ORACLE_TOL)]
        oracle_tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Evaluate routes, bounds and errors on a (k, x) grid and write CSV.
    Sweep {
        /// Comma-separated k values.
        #[arg(long, value_delimiter = ',', conflicts_with = "k_range")]
        k: Option<Vec<f64>>,
        /// Comma-separated x values.
        #[arg(long, value_delimiter = ',', conflicts_with = "x_range")]
        x: Option<Vec<f64>>,
        /// k range as LO:HI:N.
        #[arg(long)]
        k_range: Option<String>,
        /// x range as LO:HI:N.
        #[arg(long)]
        x_range: Option<String>,
        /// Spacing of the generated ranges: linear or log.
        #[arg(long, default_value = "linear")]
        spacing: String,
        /// Comma-separated route tags (default: eq1..eq6).
        #[arg(long, value_delimiter = ',')]
        method: Option<Vec<String>>,
        #[arg(long, default_value_t = ORACLE_TOL)]
        oracle_tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the data behind one of the figures (3, 4, 5 or 6) as CSV.
    Figure {
        #[arg(long)]
        fig: u8,
        #[arg(long, default_value_t = ORACLE_TOL)]
        oracle_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suites and report pass/fail with worst margins.
    Validate {
        /// quick or full.
        #[arg(long, default_value = "quick")]
        level: String,
    },
}

/// Failures of a command, each mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    NonConvergence(String),
    Validation,
    Io(String),
    /// The reader closed standard output early (e.g. `| head`); not an error.
    ClosedOutput,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_USAGE,
            Failure::NonConvergence(_) => EXIT_NONCONVERGENCE,
            Failure::Validation => EXIT_VALIDATION,
            Failure::ClosedOutput => EXIT_OK,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            Error::NonConvergence { .. } | Error::NotANumber(_) => Failure::NonConvergence(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::ClosedOutput;
        }
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(io_err) = e.kind() {
            if io_err.kind() == io::ErrorKind::BrokenPipe {
                return Failure::ClosedOutput;
            }
        }
        Failure::Io(e.to_string())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to standard output, errors to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let stdout = io::stdout();
    match execute(cli.command, &mut stdout.lock()) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::NonConvergence(m) | Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Validation => eprintln!("validation failed"),
                Failure::ClosedOutput => {}
            }
            f.exit_code()
        }
    }
}

/// Runs one command, writing its report to `report`.
pub fn execute(command: Command, report: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Eval {
            k,
            x,
            method,
            oracle_tol,
            max_terms,
        } => cmd_eval(k, x, method.as_deref(), oracle_tol, max_terms, report),
        Command::Sweep {
            k,
            x,
            k_range,
            x_range,
            spacing,
            method,
            oracle_tol,
            max_terms,
            out,
        } => {
            let spacing: Spacing = spacing.parse()?;
            let default = SweepSpec::default_grid(oracle_tol, max_terms);
            let k_values = values(k, k_range.as_deref(), spacing, default.k_values)?;
            let x_values = values(x, x_range.as_deref(), spacing, default.x_values)?;
            let methods = match method {
                Some(tags) => tags.iter().map(|t| t.parse()).collect::<Result<Vec<Method>, _>>()?,
                None => default.methods,
            };
            let spec = SweepSpec::new(k_values, x_values, spacing, methods, oracle_tol, max_terms)?;
            cmd_sweep(&spec, out, report)
        }
        Command::Figure { fig, oracle_tol, out } => {
            if !(oracle_tol > 0.0) {
                return Err(Failure::Usage(format!("oracle tolerance must be positive, got {oracle_tol}")));
            }
            cmd_figure(FigureId::from_number(fig)?, oracle_tol, out, report)
        }
        Command::Validate { level } => cmd_validate(level.parse()?, &BoundFns::default(), report),
    }
}

fn values(list: Option<Vec<f64>>, range: Option<&str>, spacing: Spacing, default: Vec<f64>) -> Result<Vec<f64>, Failure> {
    match (list, range) {
        (Some(v), _) => Ok(v),
        (None, Some(r)) => parse_range(r, spacing),
        (None, None) => Ok(default),
    }
}

/// Parses `LO:HI:N` into `N` points with the given spacing.
pub fn parse_range(text: &str, spacing: Spacing) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("range must look like LO:HI:N, got '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !(lo <= hi) {
        return Err(bad());
    }
    if spacing == Spacing::Log && !(lo > 0.0) {
        return Err(Failure::Usage("log spacing needs a positive lower end".into()));
    }
    Ok(grid::spaced(lo, hi, n, spacing))
}

pub fn cmd_eval(
    k: f64,
    x: f64,
    method: Option<&str>,
    tol: f64,
    max_terms: usize,
    report: &mut dyn Write,
) -> Result<(), Failure> {
    let p = EvalPoint::new(k, x)?;
    let r = match method {
        Some(tag) => ie::evaluate(tag.parse()?, &p, tol, max_terms)?,
        None => ie::ie_auto(&p)?,
    };
    writeln!(report, "k             {}", table::num(k))?;
    writeln!(report, "x             {}", table::num(x))?;
    writeln!(report, "value         {}", table::num(r.value))?;
    writeln!(report, "method        {}", r.method)?;
    writeln!(report, "error         {}", table::num(r.error_estimate))?;
    writeln!(report, "terms/panels  {}", r.terms_or_panels)?;
    writeln!(report, "converged     {}", r.converged)?;
    if r.converged {
        Ok(())
    } else {
        Err(Failure::NonConvergence(format!(
            "{} did not converge at k={k}, x={x}",
            r.method
        )))
    }
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout()),
    })
}

fn summarize(rows: &[table::Row], out: &Option<PathBuf>, report: &mut dyn Write) -> Result<(), Failure> {
    let flagged = rows.iter().filter(|r| !r.is_ok()).count();
    if let Some(path) = out {
        writeln!(report, "wrote {} rows to {}", rows.len(), path.display())?;
    }
    if flagged > 0 {
        eprintln!("{flagged} of {} rows flagged in the status column", rows.len());
    }
    Ok(())
}

pub fn cmd_sweep(spec: &SweepSpec, out: Option<PathBuf>, report: &mut dyn Write) -> Result<(), Failure> {
    let rows = table::sweep_rows(spec);
    let mut sink = open_output(&out)?;
    table::write_sweep_csv(&rows, &mut sink)?;
    sink.flush()?;
    summarize(&rows, &out, report)
}

pub fn cmd_figure(fig: FigureId, tol: f64, out: Option<PathBuf>, report: &mut dyn Write) -> Result<(), Failure> {
    let rows = table::figure_rows(fig, tol);
    let mut sink = open_output(&out)?;
    table::write_figure_csv(fig, &rows, &mut sink)?;
    sink.flush()?;
    summarize(&rows, &out, report)
}

pub fn cmd_validate(level: Level, fns: &BoundFns, report: &mut dyn Write) -> Result<(), Failure> {
    let result = validate::run(level, fns);
    writeln!(report, "{result}")?;
    if result.passed() {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}
