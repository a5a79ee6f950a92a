//! Bernoulli numbers: exact values and residues modulo `p`.
//!
//! Residues come from two independent routes: power sums
//! (`Σ_{a<p} a^m ≡ p B_m mod p²`) and the elementary-symmetric harmonic sums
//! (`H({1}^{2n+2}; p-1) ≡ -B_{p-3-2n} p / (2n+3) mod p²`). The second is what
//! exceptional-congruence scans use; the first exists so that the two can be
//! checked against each other.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{int_binomial, is_prime, rat, PadicResidue};
use crate::mhs::elem_mhs_mod;
use crate::{Error, Result};

/// Largest index `bernoulli_exact` computes by default.
pub const DEFAULT_INDEX_LIMIT: u64 = 2000;

/// Environment variable naming the residue cache directory.
pub const CACHE_DIR_ENV: &str = "WOLSTENHOLME_CACHE_DIR";

const CACHE_FILE: &str = "bernoulli_residues.txt";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliValue {
    pub index: u64,
    pub value: BigRational,
}

/// `B_index mod p`, defined when `(p-1) ∤ index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliResidue {
    pub index: u64,
    pub p: u64,
    pub residue: PadicResidue,
}

impl BernoulliResidue {
    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }
}

/// Exact `B_m` with `B_1 = -1/2`, up to [`DEFAULT_INDEX_LIMIT`].
pub fn bernoulli_exact(m: u64) -> Result<BernoulliValue> {
    bernoulli_exact_with_limit(m, DEFAULT_INDEX_LIMIT)
}

pub fn bernoulli_exact_with_limit(m: u64, limit: u64) -> Result<BernoulliValue> {
    if m > limit {
        return Err(Error::ResourceLimit {
            what: "Bernoulli index",
            requested: m.to_string(),
            limit: limit.to_string(),
        });
    }
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let table =
        TABLE.get_or_init(|| Mutex::new(vec![rat(1), BigRational::new((-1).into(), 2.into())]));
    let mut t = table.lock().unwrap();
    while (t.len() as u64) <= m {
        let next = t.len() as u64;
        let value = if next % 2 == 1 {
            BigRational::zero()
        } else {
            // Σ_{j ≤ m} C(m+1, j) B_j = 0; odd j > 1 contribute nothing
            let mut sum = BigRational::zero();
            for (j, b) in t.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                sum += b * rat(BigInt::from(int_binomial(next + 1, j as u64)));
            }
            -sum / rat(next + 1)
        };
        t.push(value);
    }
    Ok(BernoulliValue {
        index: m,
        value: t[m as usize].clone(),
    })
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// `B_m mod p` by power sums mod `p²`, for even `2 ≤ m ≤ p-3`.
pub fn bernoulli_mod_p(m: u64, p: u64) -> Result<BernoulliResidue> {
    check_odd_prime(p)?;
    if m > 0 && m.is_multiple_of(p - 1) {
        return Err(Error::PoleAtP { m, p });
    }
    if !m.is_multiple_of(2) || m < 2 || m + 3 > p {
        return Err(Error::InvalidArgument(format!(
            "power-sum Bernoulli residue needs even 2 <= m <= p-3 (m={m}, p={p})"
        )));
    }
    let p2 = (p as u128) * (p as u128);
    let mul = |a: u128, b: u128| a * b % p2;
    let pow = |mut b: u128, mut e: u64| {
        let mut r = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let sum = (1..p).fold(0u128, |acc, a| (acc + pow(a as u128, m)) % p2);
    debug_assert_eq!(sum % p as u128, 0);
    let residue = (sum / p as u128) as u64;
    Ok(BernoulliResidue {
        index: m,
        p,
        residue: PadicResidue::from_u64(p, 1, residue),
    })
}

/// `B_{p-3-2n} mod p` from `H({1}^{2n+2}; p-1) mod p²`.
pub fn bernoulli_via_mhs(n: u64, p: u64) -> Result<BernoulliResidue> {
    check_odd_prime(p)?;
    if p < 2 * n + 5 {
        return Err(Error::PrimeTooSmall { p, min: 2 * n + 5 });
    }
    let j = 2 * n as usize + 2;
    let h = elem_mhs_mod(p, 2, j)?;
    let residue = residue_from_elem_sum(n, p, h.entries[j].value());
    Ok(BernoulliResidue {
        index: p - 3 - 2 * n,
        p,
        residue: PadicResidue::from_u64(p, 1, residue),
    })
}

/// `B_m mod p` for every even `2 ≤ m ≤ p-3`, indexed by `m`, from one
/// pass of the harmonic-sum recurrence.
pub fn bernoulli_via_mhs_all(p: u64) -> Result<Vec<BernoulliResidue>> {
    check_odd_prime(p)?;
    if p < 5 {
        return Ok(Vec::new());
    }
    let h = elem_mhs_mod(p, 2, p as usize - 1)?;
    let mut out: Vec<BernoulliResidue> = (0..=(p - 5) / 2)
        .map(|n| BernoulliResidue {
            index: p - 3 - 2 * n,
            p,
            residue: PadicResidue::from_u64(
                p,
                1,
                residue_from_elem_sum(n, p, h.entries[2 * n as usize + 2].value()),
            ),
        })
        .collect();
    out.reverse();
    Ok(out)
}

/// `B_{p-3-2n} mod p` given any lift of `H({1}^{2n+2}; p-1)` that is
/// correct mod `p²`.
pub(crate) fn residue_from_elem_sum(n: u64, p: u64, h: &BigUint) -> u64 {
    let p2 = BigUint::from(p) * p;
    let h = (h % &p2).to_u64().expect("below p^2");
    debug_assert_eq!(h % p, 0);
    let q = (h / p) as u128;
    let factor = (p - (2 * n + 3) % p) as u128;
    (q * factor % p as u128) as u64
}

/// Whether `p` divides the numerator of `B_{p-2n-3}`.
pub fn is_exceptional_bernoulli(n: u64, p: u64) -> Result<bool> {
    Ok(bernoulli_via_mhs(n, p)?.is_zero())
}

/// Product of the primes `q` with `(q-1) | m`: the denominator of `B_m` for
/// even `m ≥ 2`.
pub fn von_staudt_clausen_denominator(m: u64) -> BigInt {
    (2..=m + 1)
        .filter(|&q| m.is_multiple_of(q - 1) && is_prime(q))
        .map(BigInt::from)
        .product()
}

/// On-disk cache of `B_{p-3-2n} mod p`, keyed by `(p, n)`.
///
/// File format: one record per line, `p n residue`, sorted by `(p, n)`.
/// Saves go through a temporary file and an atomic rename, so concurrent
/// readers never see a partial file.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    path: Option<PathBuf>,
    entries: BTreeMap<(u64, u64), u64>,
    dirty: bool,
}

impl BernoulliCache {
    /// A cache that never touches the disk.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Open (or start) the cache in `dir`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut entries = BTreeMap::new();
        if path.exists() {
            for (idx, line) in fs::read_to_string(&path)?.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                let parse = |i: usize, name: &str| -> Result<u64> {
                    fields
                        .get(i)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Parse {
                            line: idx as u64 + 1,
                            field: name.to_string(),
                            message: format!("expected an integer in `{line}`"),
                        })
                };
                entries.insert((parse(0, "p")?, parse(1, "n")?), parse(2, "residue")?);
            }
        }
        Ok(BernoulliCache {
            path: Some(path),
            entries,
            dirty: false,
        })
    }

    /// The cache named by `WOLSTENHOLME_CACHE_DIR`, or an in-memory one.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::open(dir),
            _ => Ok(Self::in_memory()),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: u64, n: u64) -> Option<u64> {
        self.entries.get(&(p, n)).copied()
    }

    pub fn insert(&mut self, p: u64, n: u64, residue: u64) {
        if self.entries.insert((p, n), residue) != Some(residue) {
            self.dirty = true;
        }
    }

    /// `B_{p-3-2n} mod p`, computing and recording it when missing.
    pub fn residue(&mut self, n: u64, p: u64) -> Result<u64> {
        if let Some(r) = self.get(p, n) {
            return Ok(r);
        }
        let r = bernoulli_via_mhs(n, p)?
            .residue
            .value()
            .to_u64()
            .expect("residue mod p fits in u64");
        self.insert(p, n, r);
        Ok(r)
    }

    /// Write the cache back if it changed.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            for ((p, n), r) in &self.entries {
                writeln!(f, "{p} {n} {r}")?;
            }
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        self.dirty = false;
        Ok(())
    }
}
