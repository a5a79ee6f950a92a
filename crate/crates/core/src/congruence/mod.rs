//! The verification engine for binomial congruences.
//!
//! Every check reduces both sides into `Z/p^E`, where `E` is the exponent
//! the congruence promises plus a configurable slack, and reports the
//! valuation of their difference. A difference that vanishes in `Z/p^E` is
//! reported as saturated (`≥E`) rather than recomputed at a higher exponent.
//! Congruences that are really identities (small primes) are additionally
//! checked with exact rationals.

mod error_term;
mod named;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{
    binomial_signed, is_prime, padic_reduce, padic_valuation, prime_power, primes_in, with_ring,
    ModRing, PadicResidue, Valuation,
};
use crate::bernoulli::residue_from_elem_sum;
use crate::extremal::{coefficients_through, extremal_values, CoefficientVector, WolstenholmeData};
use crate::mhs::{elem_mhs_scaled, elem_sym_kernel};
use crate::{parallel, Error, Result};

pub use error_term::{error_term, ErrorCase, ErrorTermReport};
pub use named::NamedTag;

/// Extra powers of `p` measured beyond the promised exponent.
pub const DEFAULT_SLACK: u32 = 2;

/// Which congruence a report is about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CongruenceSpec {
    /// `C(kp-1, p-1) ≡ Σ_{j ≤ n} b_{j,n}(k) p^j H({1}^j; p-1)`.
    Optimized {
        n: u32,
        k: i64,
    },
    /// The truncation of the expansion built from `[k, (c_i), N]`.
    General(WolstenholmeData),
    Named(NamedTag),
}

impl CongruenceSpec {
    /// Short label used in reports.
    pub fn kind(&self) -> String {
        match self {
            CongruenceSpec::Optimized { .. } => "optimized".to_string(),
            CongruenceSpec::General(_) => "general".to_string(),
            CongruenceSpec::Named(tag) => tag.to_string(),
        }
    }
}

/// The exponent a congruence promises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Required {
    Exponent(u32),
    /// The two sides are equal as rationals.
    Equality,
}

impl fmt::Display for Required {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Required::Exponent(e) => write!(f, "{e}"),
            Required::Equality => f.write_str("equality"),
        }
    }
}

impl FromStr for Required {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "equality" => Ok(Required::Equality),
            _ => s
                .parse()
                .map(Required::Exponent)
                .map_err(|_| format!("expected an exponent or `equality`, got `{s}`")),
        }
    }
}

/// The measured valuation of the difference of the two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Achieved {
    Exact(u32),
    /// The difference vanished at the measurement exponent.
    AtLeast(u32),
    /// The difference is exactly zero.
    Infinite,
}

impl Achieved {
    pub fn is_at_least(self, e: u32) -> bool {
        match self {
            Achieved::Exact(v) | Achieved::AtLeast(v) => v >= e,
            Achieved::Infinite => true,
        }
    }

    /// Valuation of a difference computed in `Z/p^E`.
    pub fn of_residue(diff: &PadicResidue) -> Self {
        match diff.valuation() {
            Some(v) => Achieved::Exact(v),
            None => Achieved::AtLeast(diff.m()),
        }
    }

    fn of_rational(diff: &BigRational, p: u64) -> Self {
        match padic_valuation(diff, p) {
            Valuation::Infinite => Achieved::Infinite,
            Valuation::Finite(v) => Achieved::Exact(v.max(0) as u32),
        }
    }
}

impl fmt::Display for Achieved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Achieved::Exact(v) => write!(f, "{v}"),
            Achieved::AtLeast(v) => write!(f, "≥{v}"),
            Achieved::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Achieved {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("expected a valuation, `≥E` or `inf`, got `{s}`");
        if s == "inf" {
            return Ok(Achieved::Infinite);
        }
        if let Some(rest) = s.strip_prefix('≥').or_else(|| s.strip_prefix(">=")) {
            return rest.parse().map(Achieved::AtLeast).map_err(|_| bad());
        }
        s.parse().map(Achieved::Exact).map_err(|_| bad())
    }
}

/// Why an optimized congruence holds to one extra power of `p`, as predicted
/// from `k mod p` and Bernoulli divisibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExceptionalClass {
    NotExceptional,
    ExceptionalK,
    ExceptionalBernoulli,
    ExceptionalBoth,
}

impl ExceptionalClass {
    fn from_flags(by_k: bool, by_bernoulli: bool) -> Self {
        match (by_k, by_bernoulli) {
            (false, false) => ExceptionalClass::NotExceptional,
            (true, false) => ExceptionalClass::ExceptionalK,
            (false, true) => ExceptionalClass::ExceptionalBernoulli,
            (true, true) => ExceptionalClass::ExceptionalBoth,
        }
    }

    pub fn is_exceptional(self) -> bool {
        self != ExceptionalClass::NotExceptional
    }

    pub fn by_bernoulli(self) -> bool {
        matches!(
            self,
            ExceptionalClass::ExceptionalBernoulli | ExceptionalClass::ExceptionalBoth
        )
    }
}

impl fmt::Display for ExceptionalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExceptionalClass::NotExceptional => "not_exceptional",
            ExceptionalClass::ExceptionalK => "exceptional_k",
            ExceptionalClass::ExceptionalBernoulli => "exceptional_bernoulli",
            ExceptionalClass::ExceptionalBoth => "exceptional_both",
        })
    }
}

impl FromStr for ExceptionalClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "not_exceptional" => ExceptionalClass::NotExceptional,
            "exceptional_k" => ExceptionalClass::ExceptionalK,
            "exceptional_bernoulli" => ExceptionalClass::ExceptionalBernoulli,
            "exceptional_both" => ExceptionalClass::ExceptionalBoth,
            _ => return Err(format!("unknown exceptional class `{s}`")),
        })
    }
}

/// One verification result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub spec: CongruenceSpec,
    pub p: u64,
    pub required: Required,
    pub achieved: Achieved,
    pub holds: bool,
    /// Measured: the congruence holds to at least one extra power.
    pub exceptional: bool,
    /// Predicted class, for optimized congruences with `p ≥ 2n+3`.
    pub class: Option<ExceptionalClass>,
}

impl CongruenceReport {
    fn new(spec: CongruenceSpec, p: u64, required: Required, achieved: Achieved) -> Self {
        let (holds, exceptional) = match required {
            Required::Exponent(r) => (achieved.is_at_least(r), achieved.is_at_least(r + 1)),
            Required::Equality => (achieved == Achieved::Infinite, false),
        };
        CongruenceReport {
            spec,
            p,
            required,
            achieved,
            holds,
            exceptional,
            class: None,
        }
    }

    /// The predicted class disagrees with the measurement.
    pub fn classification_mismatch(&self) -> bool {
        self.class
            .is_some_and(|c| c.is_exceptional() != self.exceptional)
    }
}

/// `C(kp-1, p-1) mod p^m` as `Π_{i<p} (kp-i) / Π_{i<p} i`, in `O(p)` ring
/// operations. Any integer `k` is accepted.
pub fn binom_kp_mod(k: &BigInt, p: u64, m: u32) -> Result<PadicResidue> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let v = with_ring!(p, m, |ring| ring.to_biguint(&binom_kernel(&ring, k, p)));
    Ok(residue(p, m, v))
}

pub(crate) fn binom_kernel<R: ModRing>(ring: &R, k: &BigInt, p: u64) -> R::Elem {
    let kp = ring.lift(&(k * BigInt::from(p)));
    let mut num = ring.one();
    let mut den = ring.one();
    for i in 1..p {
        let x = ring.lift_u64(i);
        num = ring.mul(&num, &ring.sub(&kp, &x));
        den = ring.mul(&den, &x);
    }
    let inv = ring.inv(&den).expect("(p-1)! is a unit mod p^m");
    ring.mul(&num, &inv)
}

fn residue(p: u64, m: u32, v: BigUint) -> PadicResidue {
    PadicResidue::from_canonical(p, m, Arc::new(prime_power(p, m)), v)
}

/// `C(kp-1, p-1)` for every `k` and `H({1}^j; p-1)` for `j ≤ jmax`, all in
/// `Z/p^m` and sharing one pass over `1..p`.
pub(crate) fn prime_kernel(
    p: u64,
    m: u32,
    jmax: usize,
    ks: &[BigInt],
) -> (Vec<PadicResidue>, Vec<PadicResidue>) {
    let (b, h) = with_ring!(p, m, |ring| {
        let h: Vec<BigUint> = if jmax == 0 {
            vec![BigUint::one()]
        } else {
            elem_sym_kernel(&ring, p, jmax)
                .iter()
                .map(|x| ring.to_biguint(x))
                .collect()
        };
        let b: Vec<BigUint> = ks
            .iter()
            .map(|k| ring.to_biguint(&binom_kernel(&ring, k, p)))
            .collect();
        (b, h)
    });
    let modulus = Arc::new(prime_power(p, m));
    let wrap = |v: Vec<BigUint>| -> Vec<PadicResidue> {
        v.into_iter()
            .map(|x| PadicResidue::from_canonical(p, m, modulus.clone(), x))
            .collect()
    };
    (wrap(b), wrap(h))
}

/// `Σ_j b_j p^j h_j` in the ring of `h`, reduced to `Z/p^m`.
fn weighted_sum(b: &[PadicResidue], h: &[PadicResidue], m: u32) -> PadicResidue {
    let p = h[0].p();
    let mut acc = PadicResidue::zero(p, m);
    let pe = PadicResidue::from_u64(p, m, p);
    let mut ppow = PadicResidue::one(p, m);
    for (j, bj) in b.iter().enumerate() {
        let hj = h
            .get(j)
            .map_or_else(|| PadicResidue::zero(p, m), |x| x.reduce_to(m));
        acc = &acc + &(&(&bj.reduce_to(m) * &ppow) * &hj);
        ppow = &ppow * &pe;
    }
    acc
}

fn exact_rhs(b: &[BigRational], p: u64) -> BigRational {
    let c = elem_mhs_scaled(p - 1);
    let pb = BigInt::from(p);
    let mut ppow = BigInt::one();
    let mut acc = BigRational::zero();
    for (bj, cj) in b.iter().zip(&c) {
        acc += bj * BigRational::from_integer(cj * &ppow);
        ppow *= &pb;
    }
    acc / BigRational::from_integer(c[0].clone())
}

fn exact_binom(k: &BigInt, p: u64) -> BigRational {
    BigRational::from_integer(binomial_signed(&(k * BigInt::from(p) - 1), p - 1))
}

/// Combine the exact and modular routes of an identity check.
fn identity_achieved(exact_diff: &BigRational, p: u64, modular_diff: &PadicResidue) -> Achieved {
    match Achieved::of_rational(exact_diff, p) {
        Achieved::Infinite if !modular_diff.is_zero() => Achieved::of_residue(modular_diff),
        a => a,
    }
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

/// Exponent promised by the optimized congruence of order `n` at `p`.
pub fn optimized_required(n: u32, p: u64) -> Required {
    let n = n as u64;
    if p >= 2 * n + 5 {
        Required::Exponent(2 * n as u32 + 3)
    } else if p == 2 * n + 3 {
        Required::Exponent(2 * n as u32 + 2)
    } else {
        Required::Equality
    }
}

/// Exponent promised by the truncation of order `N` at `p`.
pub fn general_required(order: usize, p: u64) -> Required {
    let n = order as u64;
    let e = order as u32;
    if n + 4 <= p {
        Required::Exponent(if n.is_multiple_of(2) { e + 3 } else { e + 2 })
    } else if n + 3 == p {
        Required::Exponent(e + 2)
    } else if n + 2 == p {
        Required::Exponent(e + 1)
    } else {
        Required::Equality
    }
}

/// Result of sweeping every `(n, k)` at one prime.
#[derive(Debug)]
pub struct PrimeSweep {
    /// Reports in `(n, k)` order, `n` outermost.
    pub reports: Vec<Result<CongruenceReport>>,
    /// `(n, B_{p-3-2n} mod p)` computed during the sweep.
    pub bernoulli: Vec<(u64, u64)>,
}

/// Verification settings shared by every check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checker {
    pub slack: u32,
}

impl Default for Checker {
    fn default() -> Self {
        Checker {
            slack: DEFAULT_SLACK,
        }
    }
}

impl Checker {
    pub fn new(slack: u32) -> Self {
        Checker { slack }
    }

    /// The optimized congruence for one `(n, k, p)` with `k ≥ 1`.
    pub fn verify_optimized(&self, n: u32, k: i64, p: u64) -> Result<CongruenceReport> {
        if k < 1 {
            return Err(Error::InvalidArgument(format!(
                "optimized congruence needs k >= 1, got {k}"
            )));
        }
        self.sweep_prime(p, &[n], &[k], &BTreeMap::new())?
            .reports
            .pop()
            .expect("one task")
    }

    /// Every optimized congruence `(n, k)` at one prime, sharing the
    /// harmonic sums and binomials. `known_bernoulli` maps `n` to a cached
    /// `B_{p-3-2n} mod p`; missing entries are derived from the sums.
    pub fn sweep_prime(
        &self,
        p: u64,
        ns: &[u32],
        ks: &[i64],
        known_bernoulli: &BTreeMap<u64, u64>,
    ) -> Result<PrimeSweep> {
        check_odd_prime(p)?;
        let plan: Vec<(u32, Required, u32)> = ns
            .iter()
            .map(|&n| {
                let required = optimized_required(n, p);
                let e = match required {
                    Required::Exponent(r) => r + self.slack,
                    Required::Equality => 2 * n + 6,
                };
                (n, required, e)
            })
            .collect();
        let m = plan.iter().map(|t| t.2).max().unwrap_or(1).max(2);
        let jmax = ns
            .iter()
            .map(|&n| {
                if p >= 2 * n as u64 + 5 {
                    2 * n as usize + 2
                } else {
                    n as usize
                }
            })
            .max()
            .unwrap_or(0);
        let kb: Vec<BigInt> = ks.iter().map(|&k| BigInt::from(k)).collect();
        let (binoms, h) = prime_kernel(p, m, jmax, &kb);

        let mut bernoulli = Vec::new();
        let mut reports = Vec::with_capacity(ns.len() * ks.len());
        for &(n, required, e) in &plan {
            let n64 = n as u64;
            let bern_zero = if p >= 2 * n64 + 5 {
                let r = match known_bernoulli.get(&n64) {
                    Some(&r) => r,
                    None => {
                        let r = residue_from_elem_sum(n64, p, h[2 * n as usize + 2].value());
                        bernoulli.push((n64, r));
                        r
                    }
                };
                Some(r == 0)
            } else {
                None
            };
            for (ki, k) in kb.iter().enumerate() {
                reports.push(self.optimized_one(n, k, p, required, e, &binoms[ki], &h, bern_zero));
            }
        }
        Ok(PrimeSweep { reports, bernoulli })
    }

    #[allow(clippy::too_many_arguments)]
    fn optimized_one(
        &self,
        n: u32,
        k: &BigInt,
        p: u64,
        required: Required,
        e: u32,
        binom: &PadicResidue,
        h: &[PadicResidue],
        bern_zero: Option<bool>,
    ) -> Result<CongruenceReport> {
        let b = extremal_values(n as usize, k)?;
        let b_mod: Vec<PadicResidue> = b.iter().map(|x| PadicResidue::new(p, e, x)).collect();
        let diff = &binom.reduce_to(e) - &weighted_sum(&b_mod, h, e);
        let achieved = match required {
            Required::Exponent(_) => Achieved::of_residue(&diff),
            Required::Equality => {
                let b_rat: Vec<BigRational> =
                    b.into_iter().map(BigRational::from_integer).collect();
                let exact = exact_binom(k, p) - exact_rhs(&b_rat, p);
                identity_achieved(&exact, p, &diff)
            }
        };
        let spec = CongruenceSpec::Optimized {
            n,
            k: i64::try_from(k).expect("k fits in i64"),
        };
        let mut report = CongruenceReport::new(spec, p, required, achieved);
        if p >= 2 * n as u64 + 3 {
            let kr = k.modpow(&BigInt::one(), &BigInt::from(p));
            let by_k = kr.is_zero() || kr.is_one();
            report.class = Some(ExceptionalClass::from_flags(
                by_k,
                bern_zero.unwrap_or(false),
            ));
        }
        Ok(report)
    }

    /// The truncation `C(kp-1, p-1) ≡ Σ_{j ≤ N} b_j p^j H({1}^j; p-1)` for
    /// the given data.
    pub fn verify_general(&self, data: &WolstenholmeData, p: u64) -> Result<CongruenceReport> {
        check_odd_prime(p)?;
        check_data_denominators(data, p)?;
        let order = data.order;
        let b = coefficients_through(data, order);
        let required = general_required(order, p);
        let e = match required {
            Required::Exponent(r) => r + self.slack,
            Required::Equality => order as u32 + 4,
        };
        let b_mod = reduce_all(&b, p, e)?;
        let (binom, h) = prime_kernel(p, e, order, std::slice::from_ref(&data.k));
        let diff = &binom[0] - &weighted_sum(&b_mod, &h, e);
        let achieved = match required {
            Required::Exponent(_) => Achieved::of_residue(&diff),
            Required::Equality => {
                let exact = exact_binom(&data.k, p) - exact_rhs(&b, p);
                identity_achieved(&exact, p, &diff)
            }
        };
        Ok(CongruenceReport::new(
            CongruenceSpec::General(data.clone()),
            p,
            required,
            achieved,
        ))
    }

    /// Predicted exceptional class of the optimized congruence, cross-checked
    /// against the measured valuation. Any integer `k` is accepted.
    pub fn classify_exceptional(&self, n: u32, k: i64, p: u64) -> Result<ExceptionalClass> {
        let report = self.classified_report(n, k, p)?;
        Ok(report.class.expect("p >= 2n+3 is classified"))
    }

    /// The optimized report carrying its predicted class; fails when the
    /// prediction and the measurement disagree.
    pub fn classified_report(&self, n: u32, k: i64, p: u64) -> Result<CongruenceReport> {
        let min = 2 * n as u64 + 3;
        if p < min {
            return Err(Error::PrimeTooSmall { p, min });
        }
        let checker = Checker::new(self.slack.max(1));
        let report = checker
            .sweep_prime(p, &[n], &[k], &BTreeMap::new())?
            .reports
            .pop()
            .expect("one task")?;
        if report.classification_mismatch() {
            return Err(Error::ClassificationMismatch {
                n,
                k,
                p,
                predicted: report.class.expect("classified").to_string(),
                measured: report.exceptional,
            });
        }
        Ok(report)
    }

    /// Dispatch one `(spec, p)` task.
    pub fn verify(&self, spec: &CongruenceSpec, p: u64) -> Result<CongruenceReport> {
        match spec {
            CongruenceSpec::Optimized { n, k } => self.verify_optimized(*n, *k, p),
            CongruenceSpec::General(data) => self.verify_general(data, p),
            CongruenceSpec::Named(tag) => self.verify_named(tag, p),
        }
    }

    /// Run independent tasks; results come back in input order.
    pub fn verify_batch(&self, tasks: &[(CongruenceSpec, u64)]) -> Vec<Result<CongruenceReport>> {
        parallel::map(tasks, |(spec, p)| self.verify(spec, *p))
    }
}

fn check_data_denominators(data: &WolstenholmeData, p: u64) -> Result<()> {
    let pb = BigInt::from(p);
    for i in 0..=data.order {
        if (data.c(i).denom() % &pb).is_zero() {
            return Err(Error::BadPrime { p, index: i });
        }
    }
    Ok(())
}

fn reduce_all(b: &[BigRational], p: u64, m: u32) -> Result<Vec<PadicResidue>> {
    b.iter().map(|x| padic_reduce(x, p, m)).collect()
}

/// [`Checker::verify_optimized`] with the default slack.
pub fn verify_optimized(n: u32, k: i64, p: u64) -> Result<CongruenceReport> {
    Checker::default().verify_optimized(n, k, p)
}

/// [`Checker::verify_general`] with the default slack.
pub fn verify_general(data: &WolstenholmeData, p: u64) -> Result<CongruenceReport> {
    Checker::default().verify_general(data, p)
}

/// [`Checker::verify_named`] with the default slack.
pub fn verify_named(tag: &NamedTag, p: u64) -> Result<CongruenceReport> {
    Checker::default().verify_named(tag, p)
}

/// [`Checker::classify_exceptional`] with the default slack.
pub fn classify_exceptional(n: u32, k: i64, p: u64) -> Result<ExceptionalClass> {
    Checker::default().classify_exceptional(n, k, p)
}

/// Smallest prime in `[p_min, p_max]` at which
/// `C(kp-1, p-1) ≢ Σ_j a_j p^j H({1}^j; p-1) (mod p^{2n+2})`. A prime
/// dividing a denominator of the candidate counts as a failure.
pub fn uniqueness_search(
    n: u32,
    k: i64,
    candidate: &CoefficientVector,
    p_min: u64,
    p_max: u64,
) -> Result<Option<u64>> {
    let min = 2 * n as u64 + 5;
    if p_min < min {
        return Err(Error::PrimeTooSmall { p: p_min, min });
    }
    let m = 2 * n + 2;
    let k = BigInt::from(k);
    let primes = primes_in(p_min, p_max);
    let jmax = candidate.b.len().saturating_sub(1);
    Ok(parallel::find_first(&primes, |&p| {
        let Ok(a) = reduce_all(&candidate.b, p, m) else {
            return Some(p);
        };
        let (binom, h) = prime_kernel(p, m, jmax, std::slice::from_ref(&k));
        (binom[0] != weighted_sum(&a, &h, m)).then_some(p)
    }))
}
