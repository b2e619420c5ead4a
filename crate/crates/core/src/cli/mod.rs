//! The `kchord` command line: tables, route cross-checks, series dumps,
//! OEIS b-files, memory boards and convergence reports.
//!
//! Exit codes: 0 success, 1 verification mismatch or runtime failure,
//! 2 invalid configuration, 3 enumeration budget exceeded.

mod config;
mod oeis;
mod output;
mod verify;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{compute_table, Action, BoardSpec, Route, RunConfig, Stat, BUDGET_ENV};
pub use oeis::{oeis_terms, OeisSequence, SEQUENCES};
pub use output::{table_bfile, table_csv, table_json};
pub use verify::{verify, Mismatch, VerifyReport};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "kchord",
    version,
    about = "Exact statistics of linear k-chord diagrams"
)]
pub struct Cli {
    /// Worker threads for enumeration and sampling.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    /// Write the result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a triangle of exact counts.
    Table(TableArgs),
    /// Cross-check every route against the others and the oracle.
    Verify(VerifyArgs),
    /// Dump a truncated generating function.
    Series(SeriesArgs),
    /// Write an OEIS b-file.
    Oeis(OeisArgs),
    /// Polyomino statistics on a board.
    Memory(MemoryArgs),
    /// Convergence reports for the limit laws.
    Asympt(AsymptArgs),
    /// Statistics of a single diagram.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Bfile,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub stat: Stat,
    #[arg(long = "n-max", visible_alias = "m-max")]
    pub n_max: usize,
    /// Defaults to kp2, closed-form or recurrence depending on the statistic.
    #[arg(long, value_enum)]
    pub route: Option<Route>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// First b-file index.
    #[arg(long, default_value_t = 1)]
    pub offset: i64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long = "n-max")]
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesWhich {
    /// `d(n, l)` generating function in `w, z`.
    F,
    /// `c(n, q)` generating function in `y, z`.
    C,
    /// Non-crossing series `T(x, y)`.
    T,
    /// Subpath series `L(x, y)`.
    L,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub which: SeriesWhich,
    #[arg(long = "n-max")]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct OeisArgs {
    /// Sequence id, e.g. A334056.
    #[arg(long = "id", required_unless_present = "list")]
    pub id: Option<String>,
    /// Chord size for the A062993 slice.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 30)]
    pub terms: usize,
    /// First index; defaults to the entry's own offset.
    #[arg(long)]
    pub offset: Option<i64>,
    /// List the supported ids.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args)]
pub struct MemoryArgs {
    /// `path:LEN`, `grid:RxC` or `torus:RxC`.
    #[arg(
        long,
        conflicts_with = "board_file",
        required_unless_present = "board_file"
    )]
    pub board: Option<String>,
    /// JSON board `{vertices, edges}`.
    #[arg(long)]
    pub board_file: Option<PathBuf>,
    #[arg(long)]
    pub k: usize,
    /// Defaults to vertices / k.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Print the exact (polyominoes, components) histogram as CSV.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymptKind {
    Short,
    Components,
    NcMean,
    /// Mean and variance coefficients from the closed form and the
    /// characteristic equation.
    Characteristic,
}

#[derive(Debug, Args)]
pub struct AsymptArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub kind: AsymptKind,
    /// Comma-separated list of n.
    #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub k: usize,
    /// Comma-separated labels, e.g. `0,1,0,1`.
    #[arg(long)]
    pub word: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let config = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INVALID;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: thread pool: {e}");
            return EXIT_FAILURE;
        }
    };
    let result = pool.install(|| execute(&config));
    match result {
        Ok((text, code, note)) => {
            if let Some(note) = note {
                let _ = writeln!(stderr, "{note}");
            }
            if let Err(e) = emit(cli.output.as_deref(), &text, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_FAILURE;
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Maps library errors onto the exit-code contract.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Io(_) => EXIT_FAILURE,
        _ => EXIT_INVALID,
    }
}

fn emit(path: Option<&std::path::Path>, text: &str, stdout: &mut dyn Write) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => stdout.write_all(text.as_bytes()),
    }
}

/// Output text, exit code and an optional line for stderr.
fn execute(config: &RunConfig) -> crate::Result<(String, i32, Option<String>)> {
    match &config.action {
        Action::Table {
            k,
            stat,
            n_max,
            route,
            format,
            offset,
        } => {
            let table = config::compute_table(*k, *stat, *n_max, *route, config.budget)?;
            let text = match format {
                Format::Csv => table_csv(&table, 1, *n_max),
                Format::Json => table_json(&table, *route, 1, *n_max)?,
                Format::Bfile => table_bfile(&table, 1, *n_max, *offset),
            };
            Ok((text, EXIT_OK, None))
        }
        Action::Verify { k, n_max } => {
            let report = verify(*k, *n_max, config.budget)?;
            let code = if report.mismatch.is_some() {
                EXIT_FAILURE
            } else {
                EXIT_OK
            };
            let note = report.mismatch.as_ref().map(ToString::to_string);
            Ok((report.to_text(), code, note))
        }
        Action::Series { k, which, n_max } => {
            let s = match which {
                SeriesWhich::F => crate::series::f_series(*k, *n_max),
                SeriesWhich::C => crate::series::c_series(*k, *n_max),
                SeriesWhich::T => crate::series::t_series(*k, *n_max, *n_max),
                SeriesWhich::L => crate::series::l_series(*k, *n_max, *n_max),
            };
            Ok((serde_json::to_string(&s.dump(*k))? + "\n", EXIT_OK, None))
        }
        Action::OeisList => {
            let mut text = String::new();
            for s in SEQUENCES {
                text.push_str(&format!("{} {}\n", s.id, s.description));
            }
            Ok((text, EXIT_OK, None))
        }
        Action::Oeis {
            id,
            k,
            terms,
            offset,
        } => {
            let seq = oeis::lookup(id)?;
            let values = oeis_terms(seq, *k, *terms)?;
            let start = offset.unwrap_or(seq.offset);
            Ok((output::bfile(&values, start), EXIT_OK, None))
        }
        Action::Memory {
            board,
            k,
            n,
            samples,
            seed,
            exhaustive,
        } => output::memory_report(board, *k, *n, *samples, *seed, *exhaustive, config.budget)
            .map(|t| (t, EXIT_OK, None)),
        Action::Asympt { k, kind, n, format } => {
            output::asympt_report(*k, *kind, n, *format).map(|t| (t, EXIT_OK, None))
        }
        Action::Stats { k, word } => output::stats_report(*k, word).map(|t| (t, EXIT_OK, None)),
    }
}
