//! Command-line front end.
//!
//! ```text
//! wolstenholme tables    --n 5 --k 2,3 --format csv
//! wolstenholme mhs 2,1   --n 3
//! wolstenholme poly      --n 3
//! wolstenholme verify    --named wolstenholme --primes 5..10000
//! wolstenholme scan      --n 0 --k 2 --primes 5..20000 --checkpoint scan.ckpt --out scan.json
//! wolstenholme bernoulli --n 0 --primes 5..20000
//! ```
//!
//! `verify` and `scan` share one engine; only `scan` takes a checkpoint.
//! The exit code is 0 when every check behaved as predicted, 1 when some
//! did not, and 2 on usage or I/O errors.

pub mod config;
pub mod report;
pub mod scan;
pub mod tables;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{parse_k_set, parse_range, Command, Format, ScanConfig, ScanTarget};
pub use report::{ReportRecord, ReportWriter};
pub use scan::{run_scan, run_scan_to, ScanCheckpoint, ScanSummary, BATCH_SIZE};
pub use tables::{emit_tables, render_tables, TableCell};

use crate::arith::primes_in;
use crate::bernoulli::{bernoulli_exact, BernoulliCache};
use crate::congruence::{NamedTag, DEFAULT_SLACK};
use crate::extremal::extremal_polys;
use crate::mhs::{mhs_exact, Composition};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "wolstenholme",
    version,
    about = "Exact checks of Wolstenholme-type congruences"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Extremal polynomials and their values.
    Tables(TablesArgs),
    /// Exact multiple harmonic sum H(λ; n).
    Mhs(MhsArgs),
    /// The extremal polynomials of one order.
    Poly(PolyArgs),
    /// Check congruences over a prime range.
    Verify(CheckArgs),
    /// Check congruences over a prime range, with checkpoints.
    Scan(CheckArgs),
    /// Bernoulli residues B_{p-3-2n} mod p, or an exact Bernoulli number.
    Bernoulli(BernoulliArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TablesArgs {
    /// Largest order.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Values of k for the value grids.
    #[arg(long, default_value = "2,3", value_parser = parse_k_set)]
    k: ::std::vec::Vec<i64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct MhsArgs {
    /// Composition, e.g. `2,1`.
    #[arg(default_value = "1")]
    composition: Composition,
    /// Upper limit of the sum.
    #[arg(long)]
    n: u64,
}

#[derive(Debug, Args)]
struct PolyArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Orders of the optimized congruence, `A..B` or a single value.
    #[arg(long, default_value = "0", value_parser = parse_range::<u32>)]
    n: std::ops::RangeInclusive<u32>,
    /// Values of k, comma-separated values or ranges.
    #[arg(long, default_value = "2", value_parser = parse_k_set)]
    k: ::std::vec::Vec<i64>,
    /// Prime range `A..B`.
    #[arg(long, value_parser = parse_range::<u64>)]
    primes: std::ops::RangeInclusive<u64>,
    /// Extra powers of p measured past the promised exponent.
    #[arg(long, default_value_t = DEFAULT_SLACK)]
    slack: u32,
    #[command(flatten)]
    output: OutputArgs,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Check a named congruence instead of the optimized ones.
    #[arg(long)]
    named: Option<NamedTag>,
}

#[derive(Debug, Args)]
struct BernoulliArgs {
    /// Order n: report B_{p-3-2n} mod p.
    #[arg(long, default_value_t = 0)]
    n: u64,
    /// Prime range `A..B`.
    #[arg(long, value_parser = parse_range::<u64>)]
    primes: Option<std::ops::RangeInclusive<u64>>,
    /// Print the exact B_m instead.
    #[arg(long, conflicts_with = "primes")]
    index: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Tables(a) => {
            let cells = emit_tables(a.n, &a.k)?;
            emit(&a.output, &render_tables(&cells, a.output.format)?)?;
            Ok(0)
        }
        Cmd::Mhs(a) => {
            println!(
                "H({}; {}) = {}",
                a.composition,
                a.n,
                mhs_exact(&a.composition, a.n)?
            );
            Ok(0)
        }
        Cmd::Poly(a) => {
            for (j, p) in extremal_polys(a.n)?.iter().enumerate() {
                println!("b_{{{j},{}}}(T) = {p}", a.n);
            }
            Ok(0)
        }
        Cmd::Verify(a) => check(a, Command::Verify),
        Cmd::Scan(a) => check(a, Command::Scan),
        Cmd::Bernoulli(a) => bernoulli(a),
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn check(a: CheckArgs, command: Command) -> Result<i32> {
    if command == Command::Verify && a.checkpoint.is_some() {
        return Err(Error::Config(
            "--checkpoint is only accepted by `scan`".into(),
        ));
    }
    let target = match a.named {
        Some(tag) => ScanTarget::Named(tag),
        None => ScanTarget::Optimized {
            n_range: a.n,
            k_set: a.k,
        },
    };
    let config = ScanConfig {
        command,
        target,
        prime_range: a.primes,
        exponent_slack: a.slack,
        output_path: a.output.out,
        format: a.output.format,
        threads: a.threads.unwrap_or_else(default_threads),
        checkpoint_path: a.checkpoint,
    };
    let summary = run_scan(&config)?;
    for e in &summary.errors {
        eprintln!("error: {e}");
    }
    eprintln!(
        "{} records, {} unexpected, {} primes skipped{}",
        summary.records,
        summary.unexpected_failures,
        summary.skipped_primes,
        summary
            .resumed_from
            .map_or_else(String::new, |p| format!(", resumed after p={p}"))
    );
    Ok(summary.exit_code())
}

#[derive(Serialize)]
struct BernoulliRow {
    p: String,
    n: String,
    index: String,
    residue: String,
    exceptional: bool,
}

fn bernoulli(a: BernoulliArgs) -> Result<i32> {
    if let Some(m) = a.index {
        println!("B_{m} = {}", bernoulli_exact(m)?.value);
        return Ok(0);
    }
    let range = a
        .primes
        .ok_or_else(|| Error::Config("give --primes A..B or --index M".into()))?;
    let min = 2 * a.n + 5;
    let mut cache = BernoulliCache::from_env()?;
    let mut rows = Vec::new();
    for p in primes_in((*range.start()).max(min), *range.end()) {
        let r = cache.residue(a.n, p)?;
        rows.push(BernoulliRow {
            p: p.to_string(),
            n: a.n.to_string(),
            index: (p - 3 - 2 * a.n).to_string(),
            residue: r.to_string(),
            exceptional: r == 0,
        });
    }
    cache.save()?;
    let bytes = match a.output.format {
        Format::Json => {
            let mut v = serde_json::to_vec(&rows)?;
            v.push(b'\n');
            v
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            if rows.is_empty() {
                w.write_record(["p", "n", "index", "residue", "exceptional"])
                    .map_err(|e| Error::Config(e.to_string()))?;
            }
            for r in &rows {
                w.serialize(r).map_err(|e| Error::Config(e.to_string()))?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))?
        }
    };
    emit(&a.output, &bytes)?;
    Ok(0)
}

fn emit(output: &OutputArgs, bytes: &[u8]) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}
