use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::rational::{padic_valuation, Valuation};
use crate::{Error, Result};

/// `p^m` as a big integer.
pub fn prime_power(p: u64, m: u32) -> BigUint {
    BigUint::from(p).pow(m)
}

/// An element of `Z/p^m`, stored as its canonical representative in
/// `[0, p^m)`. Binary operations require both operands to live in the same
/// ring and panic otherwise.
#[derive(Clone)]
pub struct PadicResidue {
    p: u64,
    m: u32,
    modulus: Arc<BigUint>,
    value: BigUint,
}

impl PadicResidue {
    /// Reduce an arbitrary integer into `Z/p^m`.
    pub fn new(p: u64, m: u32, value: &BigInt) -> Self {
        let modulus = prime_power(p, m);
        let value = reduce_bigint(value, &modulus);
        PadicResidue {
            p,
            m,
            modulus: Arc::new(modulus),
            value,
        }
    }

    pub fn from_u64(p: u64, m: u32, value: u64) -> Self {
        Self::new(p, m, &BigInt::from(value))
    }

    pub fn zero(p: u64, m: u32) -> Self {
        Self::from_u64(p, m, 0)
    }

    pub fn one(p: u64, m: u32) -> Self {
        Self::from_u64(p, m, 1)
    }

    pub(crate) fn from_canonical(p: u64, m: u32, modulus: Arc<BigUint>, value: BigUint) -> Self {
        debug_assert!(value < *modulus);
        PadicResidue {
            p,
            m,
            modulus,
            value,
        }
    }

    /// A residue in the same ring as `self`.
    pub fn sibling(&self, value: &BigInt) -> Self {
        PadicResidue {
            p: self.p,
            m: self.m,
            modulus: self.modulus.clone(),
            value: reduce_bigint(value, &self.modulus),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `v_p` of the representative, or `None` when the residue is zero (the
    /// valuation is then only known to be at least `m`).
    pub fn valuation(&self) -> Option<u32> {
        if self.value.is_zero() {
            return None;
        }
        let p = BigUint::from(self.p);
        let mut v = 0;
        let mut x = self.value.clone();
        loop {
            let (q, r) = x.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            x = q;
            v += 1;
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = inverse_mod(&self.value, &self.modulus).ok_or_else(|| Error::NotInvertible {
            value: self.value.to_string(),
            p: self.p,
            m: self.m,
        })?;
        Ok(Self::from_canonical(
            self.p,
            self.m,
            self.modulus.clone(),
            inv,
        ))
    }

    pub fn pow(&self, e: u64) -> Self {
        let value = self.value.modpow(&BigUint::from(e), &self.modulus);
        Self::from_canonical(self.p, self.m, self.modulus.clone(), value)
    }

    /// Image under the projection `Z/p^m -> Z/p^k` for `k <= m`.
    pub fn reduce_to(&self, k: u32) -> Self {
        assert!(k <= self.m, "cannot lift {} to a finer modulus", self.m);
        let modulus = prime_power(self.p, k);
        let value = &self.value % &modulus;
        Self::from_canonical(self.p, k, Arc::new(modulus), value)
    }

    /// The representative as a signed integer.
    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.value.clone())
    }

    fn check_same_ring(&self, other: &Self) {
        assert!(
            self.p == other.p && self.m == other.m,
            "residue ring mismatch: Z/{}^{} vs Z/{}^{}",
            self.p,
            self.m,
            other.p,
            other.m
        );
    }
}

impl PartialEq for PadicResidue {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.value == other.value
    }
}

impl Eq for PadicResidue {}

impl fmt::Debug for PadicResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.p, self.m)
    }
}

impl fmt::Display for PadicResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for &PadicResidue {
    type Output = PadicResidue;
    fn add(self, rhs: &PadicResidue) -> PadicResidue {
        self.check_same_ring(rhs);
        let mut v = &self.value + &rhs.value;
        if v >= *self.modulus {
            v -= &*self.modulus;
        }
        PadicResidue::from_canonical(self.p, self.m, self.modulus.clone(), v)
    }
}

impl Sub for &PadicResidue {
    type Output = PadicResidue;
    fn sub(self, rhs: &PadicResidue) -> PadicResidue {
        self.check_same_ring(rhs);
        let v = if self.value >= rhs.value {
            &self.value - &rhs.value
        } else {
            &self.value + &*self.modulus - &rhs.value
        };
        PadicResidue::from_canonical(self.p, self.m, self.modulus.clone(), v)
    }
}

impl Mul for &PadicResidue {
    type Output = PadicResidue;
    fn mul(self, rhs: &PadicResidue) -> PadicResidue {
        self.check_same_ring(rhs);
        let v = (&self.value * &rhs.value) % &*self.modulus;
        PadicResidue::from_canonical(self.p, self.m, self.modulus.clone(), v)
    }
}

impl Neg for &PadicResidue {
    type Output = PadicResidue;
    fn neg(self) -> PadicResidue {
        let v = if self.value.is_zero() {
            BigUint::zero()
        } else {
            &*self.modulus - &self.value
        };
        PadicResidue::from_canonical(self.p, self.m, self.modulus.clone(), v)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for PadicResidue {
            type Output = PadicResidue;
            fn $f(self, rhs: PadicResidue) -> PadicResidue { (&self).$f(&rhs) }
        }
        impl $tr<&PadicResidue> for PadicResidue {
            type Output = PadicResidue;
            fn $f(self, rhs: &PadicResidue) -> PadicResidue { (&self).$f(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for PadicResidue {
    type Output = PadicResidue;
    fn neg(self) -> PadicResidue {
        -(&self)
    }
}

fn reduce_bigint(x: &BigInt, modulus: &BigUint) -> BigUint {
    let r = x.magnitude() % modulus;
    if x.sign() == Sign::Minus && !r.is_zero() {
        modulus - r
    } else {
        r
    }
}

fn inverse_mod(a: &BigUint, modulus: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(modulus.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(reduce_bigint(&e.x, modulus))
}

/// The inverse of `a` in `Z/p^m`.
pub fn mod_inverse(a: &BigInt, p: u64, m: u32) -> Result<PadicResidue> {
    PadicResidue::new(p, m, a)
        .inverse()
        .map_err(|_| Error::NotInvertible {
            value: a.to_string(),
            p,
            m,
        })
}

/// The image of a p-integral rational `num/den` in `Z/p^m`.
pub fn padic_reduce(q: &BigRational, p: u64, m: u32) -> Result<PadicResidue> {
    if let Valuation::Finite(v) = padic_valuation(q, p) {
        if v < 0 {
            return Err(Error::NotPIntegral {
                value: q.to_string(),
                p,
            });
        }
    }
    let num = PadicResidue::new(p, m, q.numer());
    let den = PadicResidue::new(p, m, q.denom());
    Ok(&num * &den.inverse()?)
}

/// Arithmetic in a fixed `Z/p^m`, used by the hot loops. Two
/// implementations: machine words when `p^m < 2^63`, big integers otherwise.
pub(crate) trait ModRing: Sync {
    type Elem: Clone + Send + Sync + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn lift_u64(&self, x: u64) -> Self::Elem;
    fn lift(&self, x: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn to_biguint(&self, a: &Self::Elem) -> BigUint;
}

#[derive(Clone, Debug)]
pub(crate) struct SmallRing {
    modulus: u64,
}

impl SmallRing {
    pub(crate) fn new(modulus: u64) -> Self {
        assert!((1..(1 << 63)).contains(&modulus));
        SmallRing { modulus }
    }
}

impl ModRing for SmallRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn lift_u64(&self, x: u64) -> u64 {
        x % self.modulus
    }
    fn lift(&self, x: &BigInt) -> u64 {
        reduce_bigint(x, &BigUint::from(self.modulus))
            .to_u64()
            .expect("reduced below a u64 modulus")
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.modulus as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(t0.rem_euclid(self.modulus as i128) as u64)
    }
    fn to_biguint(&self, a: &u64) -> BigUint {
        BigUint::from(*a)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct BigRing {
    modulus: BigUint,
}

impl BigRing {
    pub(crate) fn new(modulus: BigUint) -> Self {
        BigRing { modulus }
    }
}

impl ModRing for BigRing {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.modulus
    }
    fn lift_u64(&self, x: u64) -> BigUint {
        BigUint::from(x) % &self.modulus
    }
    fn lift(&self, x: &BigInt) -> BigUint {
        reduce_bigint(x, &self.modulus)
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.modulus - b
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        inverse_mod(a, &self.modulus)
    }
    fn to_biguint(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
}

/// Montgomery arithmetic for odd moduli below `2^127`. Elements are kept
/// in Montgomery form `aR mod N` with `R = 2^128`.
#[derive(Clone, Debug)]
pub(crate) struct WideRing {
    modulus: u128,
    /// `-N^{-1} mod 2^128`.
    neg_inv: u128,
    /// `R mod N`.
    r1: u128,
    /// `R² mod N`.
    r2: u128,
}

fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let lo = (p00 as u64 as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

impl WideRing {
    pub(crate) fn new(modulus: u128) -> Self {
        assert!(modulus % 2 == 1 && modulus < (1 << 127));
        let mut inv = modulus;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(modulus.wrapping_mul(inv)));
        }
        let n = BigUint::from(modulus);
        let r = BigUint::one() << 128;
        let to_u128 = |x: BigUint| x.to_u128().expect("below the modulus");
        WideRing {
            modulus,
            neg_inv: inv.wrapping_neg(),
            r1: to_u128(&r % &n),
            r2: to_u128((&r * &r) % &n),
        }
    }

    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mh, ml) = mul_wide(m, self.modulus);
        let carry = u128::from(ml.overflowing_add(lo).1);
        let u = hi + mh + carry;
        if u >= self.modulus {
            u - self.modulus
        } else {
            u
        }
    }

    fn enter(&self, x: u128) -> u128 {
        let (hi, lo) = mul_wide(x % self.modulus, self.r2);
        self.redc(hi, lo)
    }

    fn leave(&self, a: u128) -> u128 {
        self.redc(0, a)
    }
}

impl ModRing for WideRing {
    type Elem = u128;

    fn zero(&self) -> u128 {
        0
    }
    fn one(&self) -> u128 {
        self.r1
    }
    fn lift_u64(&self, x: u64) -> u128 {
        self.enter(x as u128)
    }
    fn lift(&self, x: &BigInt) -> u128 {
        let r = reduce_bigint(x, &BigUint::from(self.modulus));
        self.enter(r.to_u128().expect("reduced below a u128 modulus"))
    }
    fn add(&self, a: &u128, b: &u128) -> u128 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        let (hi, lo) = mul_wide(*a, *b);
        self.redc(hi, lo)
    }
    fn inv(&self, a: &u128) -> Option<u128> {
        let n = BigUint::from(self.modulus);
        let inv = inverse_mod(&BigUint::from(self.leave(*a)), &n)?;
        Some(self.enter(inv.to_u128().expect("below the modulus")))
    }
    fn to_biguint(&self, a: &u128) -> BigUint {
        BigUint::from(self.leave(*a))
    }
}

/// `Z/p^m` with the backend chosen by the size of `p^m`.
pub(crate) enum AnyRing {
    Small(SmallRing),
    Wide(WideRing),
    Big(BigRing),
}

impl AnyRing {
    pub(crate) fn new(p: u64, m: u32) -> Self {
        let modulus = prime_power(p, m);
        match modulus.to_u128() {
            Some(small) if small < (1 << 63) => AnyRing::Small(SmallRing::new(small as u64)),
            Some(wide) if wide < (1 << 127) && p % 2 == 1 => AnyRing::Wide(WideRing::new(wide)),
            _ => AnyRing::Big(BigRing::new(modulus)),
        }
    }
}

/// Run `$body` with `$r` bound to the concrete ring backend for `Z/$p^$m`.
macro_rules! with_ring {
    ($p:expr, $m:expr, |$r:ident| $body:expr) => {
        match $crate::arith::AnyRing::new($p, $m) {
            $crate::arith::AnyRing::Small($r) => $body,
            $crate::arith::AnyRing::Wide($r) => $body,
            $crate::arith::AnyRing::Big($r) => $body,
        }
    };
}
pub(crate) use with_ring;

/// Inverses of all `xs` with a single modular inversion (prefix products).
pub(crate) fn batch_inverse<R: ModRing>(ring: &R, xs: &[R::Elem]) -> Option<Vec<R::Elem>> {
    if xs.is_empty() {
        return Some(Vec::new());
    }
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = ring.one();
    for x in xs {
        acc = ring.mul(&acc, x);
        prefix.push(acc.clone());
    }
    let mut inv = ring.inv(&acc)?;
    let mut out = vec![ring.zero(); xs.len()];
    for i in (0..xs.len()).rev() {
        out[i] = if i == 0 {
            inv.clone()
        } else {
            ring.mul(&inv, &prefix[i - 1])
        };
        inv = ring.mul(&inv, &xs[i]);
    }
    Some(out)
}
