//! Classical congruences from the literature, by tag.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{
    check_odd_prime, prime_kernel, weighted_sum, Achieved, Checker, CongruenceReport,
    CongruenceSpec, Required,
};
use crate::arith::{is_prime, padic_reduce, rat, ratio, PadicResidue};
use crate::bernoulli::bernoulli_exact;
use crate::{Error, Result};

/// A named congruence.
///
/// Text form: `wolstenholme`, `glaisher:K`, `van_hamme`, `mestrovic`,
/// `easycong:N:K`, `sc1:K`, `sc2`, `zhao:J`, `propextra:1`, `propextra:2`,
/// `glaisher_H1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedTag {
    /// `C(2p-1, p-1) ≡ 1 (mod p³)`, `p ≥ 5`.
    Wolstenholme,
    /// `C(kp-1, p-1) ≡ 1 (mod p³)`, `k ≥ 2`, `p ≥ 5`.
    Glaisher { k: i64 },
    /// `C(2p-1, p-1) ≡ 1 + 2pH({1}) (mod p⁵)`, `p ≥ 7`.
    VanHamme,
    /// `C(2p-1, p-1) ≡ 1 - 2pH({1}) + 4p²H({1,1}) (mod p⁷)`, `p ≥ 11`.
    Mestrovic,
    /// `C(kp-1, p-1) ≡ Σ_{j ≤ 2n} (k-1)^j p^j H({1}^j) (mod p^{2n+3})`,
    /// `p ≥ 2n+5`.
    EasyCong { n: u32, k: i64 },
    /// `C(kp-1, p-1) ≡ 1 + k(k-1)pH({1}) (mod p⁵)`, `p ≠ 2, 5`.
    Sc1 { k: i64 },
    /// `C(2p-1, p-1) ≡ 1 + 14pH({1}) - 12p²H({1}²) + 8p³H({1}³) (mod p⁹)`.
    Sc2,
    /// `H({1}^j; p-1)` against Bernoulli numbers, `1 ≤ j ≤ p-3`.
    Zhao { j: u32 },
    /// `H({1}^{p-2}; p-1) ≡ p/2 (mod p²)`.
    PropExtraPenultimate,
    /// `H({1}^{p-1}; p-1) ≡ -1 (mod p)`.
    PropExtraLast,
    /// `H({1}; p-1) ≡ -(B_{p-3}/3) p² (mod p³)`, `p ≥ 5`.
    GlaisherH1,
}

impl fmt::Display for NamedTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedTag::Wolstenholme => f.write_str("wolstenholme"),
            NamedTag::Glaisher { k } => write!(f, "glaisher:{k}"),
            NamedTag::VanHamme => f.write_str("van_hamme"),
            NamedTag::Mestrovic => f.write_str("mestrovic"),
            NamedTag::EasyCong { n, k } => write!(f, "easycong:{n}:{k}"),
            NamedTag::Sc1 { k } => write!(f, "sc1:{k}"),
            NamedTag::Sc2 => f.write_str("sc2"),
            NamedTag::Zhao { j } => write!(f, "zhao:{j}"),
            NamedTag::PropExtraPenultimate => f.write_str("propextra:1"),
            NamedTag::PropExtraLast => f.write_str("propextra:2"),
            NamedTag::GlaisherH1 => f.write_str("glaisher_H1"),
        }
    }
}

impl FromStr for NamedTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidArgument(format!("tag `{s}`: {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let int = |i: usize| -> Result<i64> {
            parts
                .get(i)
                .ok_or_else(|| bad("missing parameter"))?
                .parse()
                .map_err(|_| bad("parameter is not an integer"))
        };
        let nat = |i: usize| -> Result<u32> {
            u32::try_from(int(i)?).map_err(|_| bad("parameter must be non-negative"))
        };
        let arity = |n: usize| -> Result<()> {
            if parts.len() == n + 1 {
                Ok(())
            } else {
                Err(bad(&format!("expected {n} parameter(s)")))
            }
        };
        let tag = match parts[0] {
            "wolstenholme" => NamedTag::Wolstenholme,
            "glaisher" => {
                arity(1)?;
                let k = int(1)?;
                if k < 2 {
                    return Err(bad("k must be at least 2"));
                }
                NamedTag::Glaisher { k }
            }
            "van_hamme" => NamedTag::VanHamme,
            "mestrovic" => NamedTag::Mestrovic,
            "easycong" => {
                arity(2)?;
                NamedTag::EasyCong {
                    n: nat(1)?,
                    k: int(2)?,
                }
            }
            "sc1" => {
                arity(1)?;
                NamedTag::Sc1 { k: int(1)? }
            }
            "sc2" => NamedTag::Sc2,
            "zhao" => {
                arity(1)?;
                let j = nat(1)?;
                if j == 0 {
                    return Err(bad("j must be at least 1"));
                }
                NamedTag::Zhao { j }
            }
            "propextra" => {
                arity(1)?;
                match nat(1)? {
                    1 => NamedTag::PropExtraPenultimate,
                    2 => NamedTag::PropExtraLast,
                    _ => return Err(bad("part must be 1 or 2")),
                }
            }
            "glaisher_H1" => NamedTag::GlaisherH1,
            _ => return Err(bad("unknown tag")),
        };
        if !matches!(
            tag,
            NamedTag::Glaisher { .. }
                | NamedTag::EasyCong { .. }
                | NamedTag::Sc1 { .. }
                | NamedTag::Zhao { .. }
                | NamedTag::PropExtraPenultimate
                | NamedTag::PropExtraLast
        ) {
            arity(0)?;
        }
        Ok(tag)
    }
}

impl NamedTag {
    /// Smallest admissible prime and a description of the range.
    fn range(&self) -> (u64, String) {
        match self {
            NamedTag::Wolstenholme | NamedTag::Glaisher { .. } | NamedTag::GlaisherH1 => {
                (5, "p >= 5".into())
            }
            NamedTag::VanHamme => (7, "p >= 7".into()),
            NamedTag::Mestrovic => (11, "p >= 11".into()),
            NamedTag::EasyCong { n, .. } => {
                let min = 2 * *n as u64 + 5;
                (min, format!("p >= {min}"))
            }
            NamedTag::Sc1 { .. } => (3, "odd p != 5".into()),
            NamedTag::Sc2 | NamedTag::PropExtraPenultimate | NamedTag::PropExtraLast => {
                (3, "odd p".into())
            }
            NamedTag::Zhao { j } => {
                let min = *j as u64 + 3;
                (min, format!("p >= {min}"))
            }
        }
    }

    /// The `k` in `C(kp-1, p-1)` for tags about binomials.
    pub fn binomial_k(&self) -> Option<i64> {
        match self {
            NamedTag::Wolstenholme | NamedTag::VanHamme | NamedTag::Mestrovic | NamedTag::Sc2 => {
                Some(2)
            }
            NamedTag::Glaisher { k } | NamedTag::EasyCong { k, .. } | NamedTag::Sc1 { k } => {
                Some(*k)
            }
            _ => None,
        }
    }

    /// The order parameter, for tags that carry one.
    pub fn order(&self) -> Option<u64> {
        match self {
            NamedTag::EasyCong { n, .. } => Some(*n as u64),
            NamedTag::Zhao { j } => Some(*j as u64),
            _ => None,
        }
    }
}

impl Checker {
    /// Check the named congruence at `p`.
    pub fn verify_named(&self, tag: &NamedTag, p: u64) -> Result<CongruenceReport> {
        let (min, range) = tag.range();
        let out_of_range = || Error::PrimeOutOfRange {
            tag: tag.to_string(),
            p,
            range: range.clone(),
        };
        if (p == 2 || p < min || (matches!(tag, NamedTag::Sc1 { .. }) && p == 5)) && is_prime(p) {
            return Err(out_of_range());
        }
        check_odd_prime(p)?;
        let spec = CongruenceSpec::Named(*tag);
        let int = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let (required, achieved) = match *tag {
            NamedTag::Wolstenholme => self.binomial_vs_sum(2, &int(&[1]), p, 3),
            NamedTag::Glaisher { k } => self.binomial_vs_sum(k, &int(&[1]), p, 3),
            NamedTag::VanHamme => self.binomial_vs_sum(2, &int(&[1, 2]), p, 5),
            NamedTag::Mestrovic => self.binomial_vs_sum(2, &int(&[1, -2, 4]), p, 7),
            NamedTag::EasyCong { n, k } => {
                let km1 = BigInt::from(k - 1);
                let b: Vec<BigInt> = (0..=2 * n).map(|j| km1.pow(j)).collect();
                self.binomial_vs_sum(k, &b, p, 2 * n + 3)
            }
            NamedTag::Sc1 { k } => self.binomial_vs_sum(k, &int(&[1, k * (k - 1)]), p, 5),
            NamedTag::Sc2 => self.binomial_vs_sum(2, &int(&[1, 14, -12, 8]), p, 9),
            NamedTag::Zhao { j } => {
                let (index, coeff, shift, r) = if j % 2 == 0 {
                    (p - 1 - j as u64, ratio(-1, j as i64 + 1), 1, 2)
                } else {
                    (
                        p - 2 - j as u64,
                        ratio(-(j as i64 + 1), 2 * (j as i64 + 2)),
                        2,
                        3,
                    )
                };
                let target = coeff * bernoulli_exact(index)?.value;
                self.sum_vs_target(j as usize, &target, shift, p, r)?
            }
            NamedTag::PropExtraPenultimate => {
                self.sum_vs_target(p as usize - 2, &ratio(1, 2), 1, p, 2)?
            }
            NamedTag::PropExtraLast => self.sum_vs_target(p as usize - 1, &rat(-1), 0, p, 1)?,
            NamedTag::GlaisherH1 => {
                let target = -bernoulli_exact(p - 3)?.value / rat(3);
                self.sum_vs_target(1, &target, 2, p, 3)?
            }
        };
        Ok(CongruenceReport::new(
            spec,
            p,
            Required::Exponent(required),
            achieved,
        ))
    }

    /// `C(kp-1, p-1)` against `Σ_j b_j p^j H({1}^j; p-1)`.
    fn binomial_vs_sum(&self, k: i64, b: &[BigInt], p: u64, required: u32) -> (u32, Achieved) {
        let e = required + self.slack;
        let (binom, h) = prime_kernel(p, e, b.len() - 1, &[BigInt::from(k)]);
        let b: Vec<PadicResidue> = b.iter().map(|x| PadicResidue::new(p, e, x)).collect();
        let diff = &binom[0] - &weighted_sum(&b, &h, e);
        (required, Achieved::of_residue(&diff))
    }

    /// `H({1}^j; p-1)` against `target · p^shift`.
    fn sum_vs_target(
        &self,
        j: usize,
        target: &BigRational,
        shift: u32,
        p: u64,
        required: u32,
    ) -> Result<(u32, Achieved)> {
        let e = required + self.slack;
        let (_, h) = prime_kernel(p, e, j, &[]);
        let t = &padic_reduce(target, p, e)? * &PadicResidue::from_u64(p, e, p).pow(shift as u64);
        Ok((required, Achieved::of_residue(&(&h[j] - &t))))
    }
}
