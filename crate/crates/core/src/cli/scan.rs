//! Prime-range scans with batch checkpoints.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{ScanConfig, ScanTarget};
use super::report::{ReportRecord, ReportWriter};
use crate::arith::primes_in;
use crate::bernoulli::BernoulliCache;
use crate::congruence::Checker;
use crate::{parallel, Error, Result};

/// Primes per batch; a checkpoint is written after each one.
pub const BATCH_SIZE: usize = 64;

/// Progress marker for resuming an interrupted scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub config_hash: String,
    pub last_completed_prime: u64,
    pub partial_result_count: u64,
}

impl ScanCheckpoint {
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read(path) {
            Ok(bytes) => Ok(Some(serde_json::from_slice(&bytes)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Write through a temporary sibling and rename over the target.
    pub fn store(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = std::path::PathBuf::from(tmp);
        {
            let mut f = fs::File::create(&tmp)?;
            serde_json::to_writer(&mut f, self)?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanSummary {
    /// Records written by this run.
    pub records: u64,
    /// Failed checks, classification mismatches and engine errors.
    pub unexpected_failures: u64,
    /// Primes outside a named congruence's range.
    pub skipped_primes: u64,
    pub resumed_from: Option<u64>,
    /// Error messages for checks that could not run.
    pub errors: Vec<String>,
}

impl ScanSummary {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.unexpected_failures > 0)
    }
}

/// Run the scan and write the report to the configured path, or stdout.
pub fn run_scan(config: &ScanConfig) -> Result<ScanSummary> {
    match &config.output_path {
        Some(path) => {
            let file = std::io::BufWriter::new(fs::File::create(path)?);
            run_scan_to(config, file)
        }
        None => run_scan_to(config, std::io::stdout().lock()),
    }
}

/// Run the scan, streaming records to `out` in ascending `(p, n, k)` order.
/// When resuming, only records for primes past the checkpoint are written.
pub fn run_scan_to<W: Write>(config: &ScanConfig, out: W) -> Result<ScanSummary> {
    config.validate()?;
    let hash = config.config_hash();
    let mut summary = ScanSummary::default();
    let mut total = 0;
    let mut lo = *config.prime_range.start();
    if let Some(path) = &config.checkpoint_path {
        if let Some(cp) = ScanCheckpoint::load(path)? {
            if cp.config_hash != hash {
                return Err(Error::ResumeMismatch { path: path.clone() });
            }
            lo = lo.max(cp.last_completed_prime + 1);
            total = cp.partial_result_count;
            summary.resumed_from = Some(cp.last_completed_prime);
        }
    }
    let hi = *config.prime_range.end();
    let primes = if lo <= hi {
        primes_in(lo, hi)
    } else {
        Vec::new()
    };

    let checker = Checker::new(config.exponent_slack);
    let mut cache = BernoulliCache::from_env()?;
    let mut writer = ReportWriter::new(out, config.format)?;

    for batch in primes.chunks(BATCH_SIZE) {
        let outcomes = parallel::with_threads(config.threads, || {
            parallel::map(batch, |&p| check_prime(&checker, &config.target, p, &cache))
        })?;
        for (p, outcome) in batch.iter().zip(outcomes) {
            for (n, r) in outcome.bernoulli {
                cache.insert(*p, n, r);
            }
            summary.skipped_primes += u64::from(outcome.skipped);
            for result in outcome.results {
                match result {
                    Ok(record) => {
                        summary.unexpected_failures += u64::from(record.is_unexpected());
                        writer.write(&record)?;
                        summary.records += 1;
                        total += 1;
                    }
                    Err(e) => {
                        summary.unexpected_failures += 1;
                        summary.errors.push(format!("p={p}: {e}"));
                    }
                }
            }
        }
        writer.flush()?;
        cache.save()?;
        if let Some(path) = &config.checkpoint_path {
            ScanCheckpoint {
                config_hash: hash.clone(),
                last_completed_prime: *batch.last().expect("non-empty batch"),
                partial_result_count: total,
            }
            .store(path)?;
        }
    }
    writer.finish()?;
    Ok(summary)
}

struct PrimeOutcome {
    results: Vec<Result<ReportRecord>>,
    bernoulli: Vec<(u64, u64)>,
    skipped: bool,
}

fn check_prime(
    checker: &Checker,
    target: &ScanTarget,
    p: u64,
    cache: &BernoulliCache,
) -> PrimeOutcome {
    match target {
        ScanTarget::Optimized { n_range, k_set } => {
            let ns: Vec<u32> = n_range.clone().collect();
            let known: BTreeMap<u64, u64> = ns
                .iter()
                .filter_map(|&n| cache.get(p, n as u64).map(|r| (n as u64, r)))
                .collect();
            match checker.sweep_prime(p, &ns, k_set, &known) {
                Ok(sweep) => PrimeOutcome {
                    results: sweep
                        .reports
                        .into_iter()
                        .map(|r| r.map(|r| ReportRecord::from(&r)))
                        .collect(),
                    bernoulli: sweep.bernoulli,
                    skipped: false,
                },
                Err(e) => PrimeOutcome {
                    results: vec![Err(e)],
                    bernoulli: Vec::new(),
                    skipped: false,
                },
            }
        }
        ScanTarget::Named(tag) => match checker.verify_named(tag, p) {
            Err(Error::PrimeOutOfRange { .. }) => PrimeOutcome {
                results: Vec::new(),
                bernoulli: Vec::new(),
                skipped: true,
            },
            r => PrimeOutcome {
                results: vec![r.map(|r| ReportRecord::from(&r))],
                bernoulli: Vec::new(),
                skipped: false,
            },
        },
    }
}
