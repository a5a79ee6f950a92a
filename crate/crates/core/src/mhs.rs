//! Multiple harmonic sums.
//!
//! `H(λ; n) = Σ_{n ≥ i_1 > … > i_j ≥ 1} Π_t i_t^{-λ_t}`. The elementary
//! symmetric case `H({1}^j; n)` is the `j`-th elementary symmetric function
//! of `1, 1/2, …, 1/n` and is what the congruence engine consumes, usually
//! reduced into `Z/p^m` with `n = p - 1`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{
    batch_inverse, binomial_signed, int_binomial, is_prime, prime_power, rat, with_ring, ModRing,
    PadicResidue, RatPoly,
};
use crate::{Error, Result};

/// Default bound on the number of index tuples `mhs_exact` will accept.
pub const DEFAULT_TUPLE_LIMIT: u64 = 10_000_000;

/// An ordered list of positive integers. The empty composition is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&x| x == 0) {
            return Err(Error::InvalidArgument(format!(
                "composition part {pos} is zero; parts must be positive"
            )));
        }
        Ok(Composition { parts })
    }

    pub fn empty() -> Self {
        Composition::default()
    }

    /// `{λ_1, …, λ_j}^a`: `a` concatenated copies of `block`.
    pub fn repeated(block: &[u32], a: usize) -> Result<Self> {
        Self::new(block.repeat(a))
    }

    /// `{1}^j`
    pub fn ones(j: usize) -> Self {
        Composition { parts: vec![1; j] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&x| x as u64).sum()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl std::str::FromStr for Composition {
    type Err = Error;

    /// Comma-separated parts, e.g. `1,2,1`; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim().is_empty() {
            return Ok(Composition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidArgument(format!("composition part `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// An exact value `H(λ; n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MhsValue {
    pub composition: Composition,
    pub upper_limit: u64,
    pub value: BigRational,
}

/// `H(λ; n)` exactly, with the default tuple limit.
pub fn mhs_exact(lambda: &Composition, n: u64) -> Result<BigRational> {
    mhs_exact_with_limit(lambda, n, DEFAULT_TUPLE_LIMIT)
}

/// `H(λ; n)` exactly. Fails with `ResourceLimit` when the number of index
/// tuples `C(n, depth)` exceeds `limit`.
pub fn mhs_exact_with_limit(lambda: &Composition, n: u64, limit: u64) -> Result<BigRational> {
    let depth = lambda.depth() as u64;
    if depth == 0 {
        return Ok(BigRational::one());
    }
    if n < depth {
        return Ok(BigRational::zero());
    }
    let tuples = int_binomial(n, depth);
    if tuples > BigUint::from(limit) {
        return Err(Error::ResourceLimit {
            what: "multiple harmonic sum index tuples",
            requested: tuples.to_string(),
            limit: limit.to_string(),
        });
    }
    // suffix[i] = value of the sum over the parts after the current one with
    // every index ≤ i; memoised over the upper limit.
    let n = n as usize;
    let mut suffix = vec![BigRational::one(); n + 1];
    for &part in lambda.parts().iter().rev() {
        let mut next = vec![BigRational::zero(); n + 1];
        for i in 1..=n {
            let term = &suffix[i - 1] / rat(BigInt::from(i).pow(part));
            next[i] = &next[i - 1] + term;
        }
        suffix = next;
    }
    Ok(suffix.swap_remove(n))
}

/// Coefficients of `Π_{i ≤ n} (T + i)`; the coefficient of `T^j` is
/// `n! H({1}^j; n)`.
pub(crate) fn elem_mhs_scaled(n: u64) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for i in 1..=n {
        let i = BigInt::from(i);
        c.push(BigInt::zero());
        for t in (0..c.len()).rev() {
            let lower = if t == 0 {
                BigInt::zero()
            } else {
                c[t - 1].clone()
            };
            c[t] = &c[t] * &i + lower;
        }
    }
    c
}

/// `[H({1}^0; n), …, H({1}^jmax; n)]`.
pub fn elem_mhs_exact_all(n: u64, jmax: usize) -> Vec<BigRational> {
    let c = elem_mhs_scaled(n);
    (0..=jmax)
        .map(|j| match c.get(j) {
            Some(cj) => BigRational::new(cj.clone(), c[0].clone()),
            None => BigRational::zero(),
        })
        .collect()
}

/// `H({1}^j; n) = e_j(1, 1/2, …, 1/n)`.
pub fn elem_mhs_exact(j: usize, n: u64) -> BigRational {
    if j as u64 > n {
        return BigRational::zero();
    }
    elem_mhs_exact_all(n, j).swap_remove(j)
}

/// `H({1}^j; p-1) mod p^m` for `j = 0..=jmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemMhsVectorMod {
    pub p: u64,
    pub m: u32,
    pub entries: Vec<PadicResidue>,
}

impl ElemMhsVectorMod {
    pub fn jmax(&self) -> usize {
        self.entries.len() - 1
    }

    /// Entry `j`, if `j ≤ jmax`.
    pub fn get(&self, j: usize) -> Option<&PadicResidue> {
        self.entries.get(j)
    }
}

/// `H({1}^j; p-1) mod p^m` for `j ≤ jmax`, in `O(p · jmax)` ring operations.
pub fn elem_mhs_mod(p: u64, m: u32, jmax: usize) -> Result<ElemMhsVectorMod> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let values: Vec<BigUint> = with_ring!(p, m, |ring| {
        let e = elem_sym_kernel(&ring, p, jmax);
        e.iter().map(|x| ring.to_biguint(x)).collect()
    });
    let modulus = std::sync::Arc::new(prime_power(p, m));
    let entries = values
        .into_iter()
        .map(|v| PadicResidue::from_canonical(p, m, modulus.clone(), v))
        .collect();
    Ok(ElemMhsVectorMod { p, m, entries })
}

/// The truncated product recurrence `e ← e + (1/i)·T·e` for `i = 1..p-1`.
pub(crate) fn elem_sym_kernel<R: ModRing>(ring: &R, p: u64, jmax: usize) -> Vec<R::Elem> {
    let mut e = vec![ring.zero(); jmax + 1];
    e[0] = ring.one();
    if p < 2 {
        return e;
    }
    let xs: Vec<R::Elem> = (1..p).map(|i| ring.lift_u64(i)).collect();
    let invs = batch_inverse(ring, &xs).expect("1..p-1 are units mod p^m");
    for (idx, inv) in invs.iter().enumerate() {
        let i = idx + 1;
        for j in (1..=jmax.min(i)).rev() {
            let t = ring.mul(inv, &e[j - 1]);
            e[j] = ring.add(&e[j], &t);
        }
    }
    e
}

/// `f_n(T) = C((n+1)(T+1) - 1, n) = Σ_j (n+1)^j H({1}^j; n) T^j`.
pub fn f_poly(n: u64) -> RatPoly {
    let e = elem_mhs_exact_all(n, n as usize);
    let base = BigInt::from(n + 1);
    RatPoly::new(
        e.into_iter()
            .enumerate()
            .map(|(j, h)| h * rat(base.pow(j as u32)))
            .collect(),
    )
}

/// `(n+1)^j H({1}^j; n) + Σ_{i ≥ j} (-1)^{n+i+1} C(i, j) (n+1)^i H({1}^i; n)`,
/// which vanishes identically.
pub fn rep0_residual(n: u64, j: u64) -> BigRational {
    if j > n {
        return BigRational::zero();
    }
    let e = elem_mhs_exact_all(n, n as usize);
    let base = BigInt::from(n + 1);
    let scaled = |i: u64| &e[i as usize] * rat(base.pow(i as u32));
    let mut acc = scaled(j);
    for i in j..=n {
        let term = scaled(i) * rat(BigInt::from(int_binomial(i, j)));
        if (n + i + 1).is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `(-1)^k Σ_{j=0}^{k} (-1)^j m^j H({1}^j; k)`. The product form
/// `Π_{i ≤ k} (m/i - 1)` shows this is `C(m-1, k)`; with `m = p` it is the
/// classical expansion of `C(p-1, k)`.
pub fn lehmer_sum(m: &BigInt, k: u64) -> BigRational {
    let c = elem_mhs_scaled(k);
    let mut acc = BigInt::zero();
    let mut power = BigInt::one();
    for (j, cj) in c.iter().enumerate() {
        if j % 2 == 0 {
            acc += cj * &power;
        } else {
            acc -= cj * &power;
        }
        power *= m;
    }
    if k % 2 == 1 {
        acc = -acc;
    }
    BigRational::new(acc, c[0].clone())
}

/// `C(mm, kk)` for any integer `mm`, evaluated through [`lehmer_sum`] at
/// `mm + 1`.
pub fn binomial_via_lehmer(mm: &BigInt, kk: u64) -> BigRational {
    lehmer_sum(&(mm + 1), kk)
}

/// Left-hand side of the Lehmer identity, for comparisons.
pub fn binomial_exact(mm: &BigInt, kk: u64) -> BigRational {
    rat(binomial_signed(mm, kk))
}
