use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use super::binomial_signed;

/// Dense univariate polynomial, coefficients in ascending degree, with no
/// trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

/// Polynomial with integer coefficients.
pub type IntPoly = Poly<BigInt>;
/// Polynomial with rational coefficients.
pub type RatPoly = Poly<BigRational>;

impl<C: Clone + Num + Neg<Output = C>> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `c T^d`
    pub fn monomial(c: C, d: usize) -> Self {
        let mut v = vec![C::zero(); d + 1];
        v[d] = c;
        Self::new(v)
    }

    /// The polynomial `T`.
    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `T^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Residue modulo `T^e`.
    pub fn truncate(&self, e: usize) -> Self {
        Self::new(self.coeffs.iter().take(e).cloned().collect())
    }

    /// `p(T + a)`, by repeated synthetic division.
    pub fn shift(&self, a: &C) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].clone() * a.clone();
                c[j] = c[j].clone() + t;
            }
        }
        Self::new(c)
    }

    /// `p(g(T))`
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * g) + &Self::constant(c.clone())
        })
    }

    /// Division by a monic polynomial: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by zero polynomial");
        assert!(divisor.leading().unwrap().is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let q = rem[i + d].clone();
            if q.is_zero() {
                continue;
            }
            for (k, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + k] = rem[i + k].clone() - q.clone() * dc.clone();
            }
            quot[i] = q;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }
}

impl IntPoly {
    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        )
    }

    pub fn eval_i64(&self, t: i64) -> BigInt {
        self.eval(&BigInt::from(t))
    }

    /// `(T + a)^e` expanded.
    pub fn binomial_power(a: &BigInt, e: u32) -> Self {
        Self::new(
            (0..=e as u64)
                .map(|i| binomial_signed(&BigInt::from(e), i) * a.pow(e - i as u32))
                .collect(),
        )
    }
}

impl RatPoly {
    /// The integer polynomial with the same coefficients, if they are all
    /// integers.
    pub fn to_int(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }

    /// Multiply through by the least common denominator.
    pub fn clear_denominators(&self) -> (BigInt, IntPoly) {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        (lcm, IntPoly::new(ints))
    }
}

impl<C: Clone + Num + Neg<Output = C>> Zero for Poly<C> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: Clone + Num + Neg<Output = C>> One for Poly<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Clone + Num + Neg<Output = C>> From<C> for Poly<C> {
    fn from(c: C) -> Self {
        Self::constant(c)
    }
}

impl<C: Clone + Num + Neg<Output = C>> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<C: Clone + Num + Neg<Output = C>> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: &Poly<C>) -> Poly<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<C: Clone + Num + Neg<Output = C>> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: &Poly<C>) -> Poly<C> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<C: Clone + Num + Neg<Output = C>> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        Poly::new(self.coeffs.iter().cloned().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl<C: Clone + Num + Neg<Output = C>> $tr for Poly<C> {
            type Output = Poly<C>;
            fn $f(self, rhs: Poly<C>) -> Poly<C> { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl<C: Clone + Num + Neg<Output = C>> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        -(&self)
    }
}

impl<C: Clone + Num + Neg<Output = C> + Signed + fmt::Display> fmt::Display for Poly<C> {
    /// Descending-degree form such as `2T^6-6T^5+5T^4-T`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            let unit = mag.is_one();
            match (d, unit) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}")?,
            }
            match d {
                0 => {}
                1 => f.write_str("T")?,
                _ => write!(f, "T^{d}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

/// The unique polynomial `f` of degree `< e1 + e2` with
/// `f ≡ r1 (mod T^e1)` and `f ≡ r2 (mod (T-1)^e2)`.
///
/// `r2` is given in the shifted basis: its coefficient `i` multiplies
/// `(T-1)^i`. Inputs are reduced modulo their respective moduli first.
///
/// Newton form: `f = r1 + T^e1 g`, where `g(1+s)` is solved as a power series
/// in `s = T-1` using `(1+s)^{-e1} = Σ (-1)^i C(e1+i-1, i) s^i`.
pub fn poly_crt(r1: &RatPoly, e1: usize, r2: &RatPoly, e2: usize) -> RatPoly {
    let r1 = r1.truncate(e1);
    let r2 = r2.truncate(e2);
    if e2 == 0 {
        return r1;
    }
    let one = BigRational::one();
    let r1_at_1ps = r1.shift(&one).truncate(e2);
    let inv_pow = RatPoly::new(
        (0..e2 as u64)
            .map(|i| {
                let c = binomial_signed(&BigInt::from(e1 as i64 + i as i64 - 1), i);
                let c = if i % 2 == 1 { -c } else { c };
                BigRational::from_integer(c)
            })
            .collect(),
    );
    let h = (&(&r2 - &r1_at_1ps) * &inv_pow).truncate(e2);
    let g = h.shift(&-one);
    &r1 + &(&RatPoly::monomial(BigRational::one(), e1) * &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn rp(c: &[i64]) -> RatPoly {
        ip(c).to_rat()
    }

    #[test]
    fn normalisation_and_display() {
        assert!(ip(&[0, 0]).is_zero());
        assert_eq!(ip(&[1, 2, 0]).degree(), Some(1));
        assert_eq!(ip(&[0, -1, 0, 0, 5, -6, 2]).to_string(), "2T^6-6T^5+5T^4-T");
        assert_eq!(ip(&[1]).to_string(), "1");
        assert_eq!(ip(&[]).to_string(), "0");
        assert_eq!(ip(&[0, 0, 1]).to_string(), "T^2");
    }

    #[test]
    fn shift_and_compose_agree() {
        let p = ip(&[3, -1, 4, 1, -5]);
        let a = BigInt::from(-2);
        let via_compose = p.compose(&ip(&[-2, 1]));
        assert_eq!(p.shift(&a), via_compose);
        for t in -5..5 {
            assert_eq!(p.shift(&a).eval_i64(t), p.eval_i64(t - 2));
        }
    }

    #[test]
    fn monic_division() {
        // T^3 - 1 = (T - 1)(T^2 + T + 1)
        let (q, r) = ip(&[-1, 0, 0, 1]).div_rem_monic(&ip(&[-1, 1]));
        assert_eq!(q, ip(&[1, 1, 1]));
        assert!(r.is_zero());
        let (_, r) = ip(&[5, 0, 1]).div_rem_monic(&ip(&[0, 0, 1]));
        assert_eq!(r, ip(&[5]));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(poly_crt(&rp(&[1]), 3, &rp(&[1]), 3), rp(&[1]));
        assert_eq!(poly_crt(&rp(&[0, -1]), 2, &rp(&[0, 1]), 2), rp(&[0, -1, 1]));
        let f = poly_crt(&rp(&[0, -1]), 4, &rp(&[0, 1]), 4);
        assert_eq!(f, rp(&[0, -1, 0, 0, 5, -6, 2]));
        assert_eq!(f.eval(&rat(2)), rat(14));
        assert_eq!(f.eval(&rat(3)), rat(402));
    }

    #[test]
    fn binomial_power_expands() {
        assert_eq!(
            IntPoly::binomial_power(&BigInt::from(-1), 3),
            ip(&[-1, 3, -3, 1])
        );
    }
}
