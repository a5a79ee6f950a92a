//! Exact arithmetic: rationals, the residue ring `Z/p^m`, integer and
//! rational polynomials, unimodular integer matrices and prime utilities.

mod matrix;
mod poly;
mod primes;
mod rational;
mod residue;

pub use matrix::{integer_matrix_solve, IntegerMatrix};
pub use poly::{poly_crt, IntPoly, Poly, RatPoly};
pub use primes::{is_prime, primes_in};
pub use rational::{padic_valuation, valuation_int, Valuation};
pub use residue::{mod_inverse, padic_reduce, prime_power, PadicResidue};

pub(crate) use residue::{batch_inverse, with_ring, AnyRing, ModRing};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

pub use num_rational::BigRational;

/// Exact binomial coefficient `C(a, b)`; zero when `b > a`.
pub fn int_binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        // acc * (a - i) is divisible by (i + 1) at every step.
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `C(upper, b)` for any integer `upper`, as the falling factorial
/// `upper (upper-1) ... (upper-b+1) / b!`.
pub fn binomial_signed(upper: &BigInt, b: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= upper - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Rational `C(upper, b)` for rational `upper` (used where the upper index
/// is an indeterminate evaluated at a rational point).
pub fn binomial_rational(upper: &BigRational, b: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..b {
        acc = acc * (upper - BigRational::from_integer(BigInt::from(i)))
            / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Shorthand for `num / den`.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(int_binomial(7, 0), BigUint::one());
        assert_eq!(int_binomial(9, 4), BigUint::from(126u32));
        assert_eq!(int_binomial(3, 5), BigUint::zero());
        assert_eq!(int_binomial(0, 0), BigUint::one());
    }

    #[test]
    fn signed_binomial_matches_unsigned_and_negative_upper() {
        for a in 0..30u64 {
            for b in 0..=a + 2 {
                assert_eq!(
                    binomial_signed(&BigInt::from(a), b),
                    BigInt::from(int_binomial(a, b))
                );
            }
        }
        // C(-1, b) = (-1)^b
        for b in 0..10u64 {
            let expect = if b % 2 == 0 { 1 } else { -1 };
            assert_eq!(binomial_signed(&BigInt::from(-1), b), BigInt::from(expect));
        }
    }
}
