//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 invalid input or
//! usage, 3 precision certificate failure, 4 singularity or stalled
//! integration.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laxchain::recurrence_forward;
use crate::measures::{rational_decimal, Lattice, MeasureSpec};
use crate::mpnum::{parse_decimal, BigReal};
use crate::oracle::{recurrence_from_hankel, recurrence_from_stieltjes, RecurrenceTable, Source};
use crate::painleve::recurrence_p5chain;
use crate::report::CellParams;
use crate::suites::{self, Grid, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_SINGULARITY: i32 = 4;

pub const PREC_ENV: &str = "CHARLIER_PREC_BITS";

#[derive(Parser, Debug)]
#[command(name = "charlier", version, about = "Three-term recurrence tables for Charlier-type weights")]
pub struct Cli {
    /// Target precision in bits.
    #[arg(long = "prec-bits", global = true, env = PREC_ENV, default_value_t = 512)]
    pub prec_bits: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Table of (a_n², b_n) for one measure.
    Recurrence(RecurrenceArgs),
    /// Run a verification suite and write its JSON report.
    Verify(VerifyArgs),
    /// Tables over an equally spaced range of a.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Clone)]
pub struct MeasureArgs {
    #[arg(long, default_value = "N")]
    pub lattice: String,
    #[arg(long, default_value = "1")]
    pub beta: String,
    /// Shifted-lattice mass ratio, bi-lattice only.
    #[arg(long)]
    pub tau: Option<String>,
}

#[derive(Args, Debug)]
pub struct RecurrenceArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long, default_value = "1")]
    pub a: String,
    #[arg(long = "nmax", default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value = "hankel")]
    pub source: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Comma-separated values of a.
    #[arg(long)]
    pub a: Option<String>,
    /// Comma-separated values of β.
    #[arg(long)]
    pub beta: Option<String>,
    /// Comma-separated lattices.
    #[arg(long)]
    pub lattice: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long = "nmax", default_value_t = 10)]
    pub n_max: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long = "a-from")]
    pub a_from: String,
    #[arg(long = "a-to")]
    pub a_to: String,
    /// Number of points, endpoints included.
    #[arg(long, default_value_t = 2)]
    pub steps: usize,
    #[arg(long = "nmax", default_value_t = 5)]
    pub n_max: usize,
    #[arg(long, default_value = "hankel")]
    pub source: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Precision { .. } => EXIT_PRECISION,
        Error::Singularity { .. } | Error::Integration { .. } => EXIT_SINGULARITY,
        Error::Domain(_) | Error::Invalid(_) | Error::Schema(_) => EXIT_USAGE,
    }
}

impl MeasureArgs {
    fn spec(&self, a: &str) -> Result<MeasureSpec> {
        let lattice: Lattice = self.lattice.parse()?;
        MeasureSpec::parse(a, &self.beta, lattice, self.tau.as_deref())
    }
}

/// Table for `spec` from the chosen source.
pub fn compute_table(spec: &MeasureSpec, n_max: usize, source: Source, prec: u32) -> Result<RecurrenceTable> {
    match source {
        Source::Hankel => recurrence_from_hankel(spec, n_max, prec),
        Source::Stieltjes => recurrence_from_stieltjes(spec, n_max, prec),
        Source::Recursion => recurrence_forward(spec, n_max, prec),
        Source::P5Chain => recurrence_p5chain(spec, n_max, prec),
    }
}

/// Decimal strings shared by the CSV and JSON emitters.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Row {
    pub n: usize,
    pub a2: String,
    pub b: String,
}

#[derive(Serialize, Debug, Clone)]
pub struct TableJson {
    pub params: CellParams,
    pub source: Source,
    pub prec_bits: u32,
    pub rows: Vec<Row>,
}

pub fn rows(table: &RecurrenceTable) -> Vec<Row> {
    let digits = BigReal::digits_for_prec(table.prec);
    (0..=table.n_max)
        .map(|n| Row {
            n,
            a2: table.a2[n].to_decimal(digits),
            b: table.b[n].to_decimal(digits),
        })
        .collect()
}

pub fn table_json(table: &RecurrenceTable) -> TableJson {
    TableJson {
        params: CellParams::from(&table.spec),
        source: table.source,
        prec_bits: table.prec,
        rows: rows(table),
    }
}

pub fn table_csv(table: &RecurrenceTable) -> String {
    let mut out = String::from("n,a2,b,source\n");
    for r in rows(table) {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.a2, r.b, table.source.name()));
    }
    out
}

/// Long-format CSV `a,n,a2,b` over several tables.
pub fn scan_csv(tables: &[RecurrenceTable]) -> String {
    let mut out = String::from("a,n,a2,b\n");
    for t in tables {
        let a = rational_decimal(t.spec.a_exact());
        for r in rows(t) {
            out.push_str(&format!("{a},{},{},{}\n", r.n, r.a2, r.b));
        }
    }
    out
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Schema(e.to_string()))
}

/// `steps` equally spaced exact points from `from` to `to`.
pub fn scan_points(from: &Rational, to: &Rational, steps: usize) -> Result<Vec<Rational>> {
    if steps == 0 {
        return Err(Error::Invalid("scan needs at least one step".into()));
    }
    if from == to || steps == 1 {
        return Ok(vec![from.clone()]);
    }
    let span = Rational::from(to - from);
    Ok((0..steps)
        .map(|k| Rational::from(from + Rational::from(&span * k as u32) / (steps as u32 - 1)))
        .collect())
}

fn emit(output: &Option<PathBuf>, body: &str, stdout: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => fs::write(p, body).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| Error::Invalid(format!("cannot write to stdout: {e}"))),
    }
}

fn cmd_recurrence(args: &RecurrenceArgs, prec: u32, stdout: &mut dyn Write) -> Result<i32> {
    let spec = args.measure.spec(&args.a)?;
    let source: Source = args.source.parse()?;
    let table = compute_table(&spec, args.n_max, source, prec)?;
    let body = match args.format {
        Format::Csv => table_csv(&table),
        Format::Json => to_json(&table_json(&table))? + "\n",
    };
    emit(&args.output, &body, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, prec: u32, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let suite: Suite = args.suite.parse()?;
    let mut grid = Grid::standard(prec).with_lists(args.a.as_deref(), args.beta.as_deref())?;
    grid.n_max = args.n_max;
    if let Some(l) = &args.lattice {
        grid.lattices = l.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?;
    }
    if let Some(t) = &args.tau {
        grid.tau = parse_decimal(t)?;
    }
    let report = suites::run(suite, &grid)?;
    emit(&args.output, &(report.to_json()? + "\n"), stdout)?;
    let _ = writeln!(stderr, "{}", report.summary_line());
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_scan(args: &ScanArgs, prec: u32, stdout: &mut dyn Write) -> Result<i32> {
    let from = parse_decimal(&args.a_from)?;
    let to = parse_decimal(&args.a_to)?;
    let source: Source = args.source.parse()?;
    let mut tables = Vec::new();
    for a in scan_points(&from, &to, args.steps)? {
        let spec = args.measure.spec(&rational_decimal(&a))?;
        tables.push(compute_table(&spec, args.n_max, source, prec)?);
    }
    let body = match args.format {
        Format::Csv => scan_csv(&tables),
        Format::Json => to_json(&tables.iter().map(table_json).collect::<Vec<_>>())? + "\n",
    };
    emit(&args.output, &body, stdout)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if cli.prec_bits < 32 {
        let _ = writeln!(stderr, "error: --prec-bits must be at least 32");
        return EXIT_USAGE;
    }
    let result = match &cli.command {
        Command::Recurrence(a) => cmd_recurrence(a, cli.prec_bits, stdout),
        Command::Verify(a) => cmd_verify(a, cli.prec_bits, stdout, stderr),
        Command::Scan(a) => cmd_scan(a, cli.prec_bits, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs them. Usage errors
/// exit with 2; `--help` and `--version` with 0.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            code
        }
    }
}
