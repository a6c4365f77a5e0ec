//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, singular curve, bad
//! input file), 2 internal invariant violation or panic.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::bounds::{bounds_report, compare_counts};
use crate::census::{run_census, CensusConfig, CountMode};
use crate::curve::CurvePair;
use crate::error::{Error, Result};
use crate::families::TorsionPrime;
use crate::output::{self, BoundsDocument, TorsionDocument};
use crate::torsion::torsion_subgroup;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "torsion-census", version, about = "Count elliptic curves with rational torsion of prime order")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TorsionFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Pairs,
    MinimalPairs,
}

impl From<ModeArg> for CountMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Pairs => CountMode::Pairs,
            ModeArg::MinimalPairs => CountMode::MinimalPairs,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torsion subgroup of y^2 = x^3 + Ax + B.
    Torsion {
        #[arg(long = "A", allow_negative_numbers = true)]
        a: BigInt,
        #[arg(long = "B", allow_negative_numbers = true)]
        b: BigInt,
        #[arg(long, value_enum, default_value = "text")]
        format: TorsionFormat,
    },
    /// Count curves with |A|, |B| <= max having a point of each prime order.
    Census {
        #[arg(long)]
        max: u64,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u32>,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: ModeArg,
        /// Scan every pair instead of using the parametrized families (max <= 1000).
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include per-phase elapsed seconds (JSON; on stderr for CSV).
        #[arg(long)]
        timings: bool,
    },
    /// Theoretical bounds, optionally compared with a census file.
    Bounds {
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        census: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Run with `args` (including the program name), writing the document to
/// `stdout` unless an output file is given and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| dispatch(cli.command, stderr)));
    match outcome {
        Ok(Ok(doc)) => match doc.emit(stdout) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "{e}");
                EXIT_USAGE
            }
        },
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "{e}");
            if e.is_invariant() {
                EXIT_INVARIANT
            } else {
                EXIT_USAGE
            }
        }
        Err(cause) => {
            let msg = cause
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| cause.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INVARIANT
        }
    }
}

struct Document {
    text: String,
    out: Option<PathBuf>,
}

impl Document {
    fn emit(&self, stdout: &mut dyn Write) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, &self.text)
                .map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display()))),
            None => stdout.write_all(self.text.as_bytes()).map_err(|e| Error::invalid(format!("stdout: {e}"))),
        }
    }
}

fn dispatch(command: Command, stderr: &mut dyn Write) -> Result<Document> {
    match command {
        Command::Torsion { a, b, format } => {
            let curve = CurvePair::new(a, b)?;
            let group = torsion_subgroup(&curve)?;
            let text = match format {
                TorsionFormat::Text => format!("{}\n", output::torsion_text(&group)),
                TorsionFormat::Json => output::to_json(&TorsionDocument::new(&curve, &group))?,
            };
            Ok(Document { text, out: None })
        }
        Command::Census { max, primes, mode, oracle, workers, format, out, timings } => {
            let primes = primes.into_iter().map(TorsionPrime::try_from).collect::<Result<Vec<_>>>()?;
            let config = CensusConfig { max_coeff: max, primes, mode: mode.into(), oracle, workers, timings };
            let report = run_census(&config)?;
            let text = match format {
                Format::Csv => {
                    if let Some(elapsed) = &report.elapsed {
                        for (phase, secs) in elapsed {
                            let _ = writeln!(stderr, "{phase}: {secs:.3}s");
                        }
                    }
                    output::census_csv(&report)?
                }
                Format::Json => output::to_json(&report)?,
            };
            Ok(Document { text, out })
        }
        Command::Bounds { max, format, census, out } => {
            let bounds = bounds_report(max)?;
            let comparison = match census {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
                    let (m, counts) = output::parse_census_counts(&text)?;
                    Some(compare_counts(m, &counts, &bounds)?)
                }
                None => None,
            };
            let text = match format {
                Format::Csv => output::bounds_csv(&bounds, comparison.as_ref())?,
                Format::Json => output::to_json(&BoundsDocument { bounds, comparison })?,
            };
            Ok(Document { text, out })
        }
    }
}
