use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::congruence::NamedTag;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Tables,
    Mhs,
    Poly,
    Verify,
    Scan,
    Bernoulli,
}

/// What a scan checks at every prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanTarget {
    /// Optimized congruences for every `n` in the range and `k` in the set.
    Optimized {
        n_range: RangeInclusive<u32>,
        k_set: Vec<i64>,
    },
    Named(NamedTag),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub command: Command,
    pub target: ScanTarget,
    pub prime_range: RangeInclusive<u64>,
    pub exponent_slack: u32,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub threads: usize,
    pub checkpoint_path: Option<PathBuf>,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (*self.prime_range.start(), *self.prime_range.end());
        if lo < 3 {
            return Err(Error::Config(format!(
                "prime range must start at 3 or above, got {lo}"
            )));
        }
        if lo > hi {
            return Err(Error::Config(format!("empty prime range {lo}..{hi}")));
        }
        if hi >= 1 << 32 {
            return Err(Error::Config(format!(
                "primes above 2^32 are not supported, got {hi}"
            )));
        }
        if self.threads == 0 {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if let ScanTarget::Optimized { k_set, .. } = &self.target {
            if k_set.is_empty() {
                return Err(Error::Config("empty k set".into()));
            }
        }
        Ok(())
    }

    /// Digest of every field that affects the records, so a checkpoint can
    /// only be resumed by a compatible run. The upper prime bound, thread
    /// count and paths are deliberately left out.
    pub fn config_hash(&self) -> String {
        let target = match &self.target {
            ScanTarget::Optimized { n_range, k_set } => format!(
                "optimized;n={}..{};k={}",
                n_range.start(),
                n_range.end(),
                k_set
                    .iter()
                    .map(i64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            ScanTarget::Named(tag) => format!("named;{tag}"),
        };
        let canonical = format!(
            "v1;{target};p_lo={};slack={};format={}",
            self.prime_range.start(),
            self.exponent_slack,
            self.format.as_str()
        );
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parse `A..B`, `A..=B` or a single value as an inclusive range.
pub fn parse_range<T>(s: &str) -> std::result::Result<RangeInclusive<T>, String>
where
    T: FromStr + PartialOrd + Copy,
{
    let one = |x: &str| -> std::result::Result<T, String> {
        x.trim()
            .parse()
            .map_err(|_| format!("`{x}` is not a valid bound"))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (one(a)?, one(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = one(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("range `{s}` is empty"));
    }
    Ok(lo..=hi)
}

/// Parse a comma-separated list whose items are values or `A..B` ranges;
/// the result is sorted and deduplicated.
pub fn parse_k_set(s: &str) -> std::result::Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        out.extend(parse_range::<i64>(item)?);
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err("empty k set".into());
    }
    Ok(out)
}
