//! Generalized Wolstenholme coefficients and the extremal polynomials
//! `b_{j,n}(T)`.
//!
//! Data `[k, (c_0, c_1, …), N]` produces coefficients
//! `b_j = (k-1)^j + c_j + (-1)^{j+1} Σ_{i ≤ j} C(j, i) c_i`. The extremal
//! polynomials are the unique integer polynomials of degree `≤ 2n` with
//! `b_{j,n} ≡ (T-1)^j mod (T-1)^{n+1}` and `b_{j,n} ≡ (-T)^j mod T^{n+1}`;
//! their values at `k` are the coefficients for which `b_{n+1} = … = b_{2n} = 0`.
//!
//! Two constructions are provided: [`extremal_polys_matrix`] (integer matrix
//! recipe) and [`extremal_poly_crt`] (polynomial CRT). The CRT route backs
//! the cached polynomials used by the congruence engine.

use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{
    int_binomial, integer_matrix_solve, poly_crt, rat, IntPoly, IntegerMatrix, RatPoly,
};
use crate::{Error, Result};

/// Data `[k, (c_0, c_1, …), N]`. Entries of `c` past index `N` are ignored
/// and missing entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WolstenholmeData {
    pub k: BigInt,
    pub c: Vec<BigRational>,
    /// Truncation order `N`.
    pub order: usize,
}

impl WolstenholmeData {
    pub fn new(k: impl Into<BigInt>, c: Vec<BigRational>, order: usize) -> Self {
        WolstenholmeData {
            k: k.into(),
            c,
            order,
        }
    }

    /// `c_i`, zero outside `0..=N`.
    pub fn c(&self, i: usize) -> BigRational {
        if i > self.order {
            return BigRational::zero();
        }
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }
}

/// Coefficients `b_0, …, b_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientVector {
    pub b: Vec<BigRational>,
}

/// `b_{j,n}(T)` for `0 ≤ j ≤ 2n` (zero for `j > n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalPolynomial {
    pub j: usize,
    pub n: usize,
    pub poly: IntPoly,
}

impl ExtremalPolynomial {
    pub fn eval(&self, k: &BigInt) -> BigInt {
        self.poly.eval(k)
    }
}

/// `b_{2n+1}`, `b_{2n+2}` continuing the optimal data, and
/// `C_n(k) = (n+1) b_{2n+1} + b_{2n+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionPair {
    pub n: usize,
    pub k: BigInt,
    pub b_2n1: BigRational,
    pub b_2n2: BigRational,
    pub c_n_value: BigRational,
}

/// The coefficient map over any commutative ring `R` in which `k - 1` and
/// the `c_i` live. `n_odd` selects the sign `(-1)^{n+j+1}` of the identity
/// at upper limit `n`; congruences for `C(kp-1, p-1)` use `n = p - 1`, which
/// is even.
pub fn generalized_coefficients<R>(k_minus_1: &R, c: &[R], len: usize, n_odd: bool) -> Vec<R>
where
    R: Clone + Zero + One + Add<Output = R> + Sub<Output = R> + Mul<Output = R> + From<BigInt>,
{
    let c_at = |i: usize| c.get(i).cloned().unwrap_or_else(R::zero);
    let mut out = Vec::with_capacity(len);
    let mut km1_pow = R::one();
    let mut pascal: Vec<BigInt> = Vec::with_capacity(len);
    for j in 0..len {
        pascal.push(BigInt::one());
        for i in (1..j).rev() {
            let lower = pascal[i - 1].clone();
            pascal[i] += lower;
        }
        let mut sum = R::zero();
        for (i, binom) in pascal.iter().enumerate() {
            let ci = c_at(i);
            if ci.is_zero() {
                continue;
            }
            sum = sum + R::from(binom.clone()) * ci;
        }
        let plus = (j + 1 + usize::from(n_odd)) % 2 == 0;
        let b = if plus {
            km1_pow.clone() + c_at(j) + sum
        } else {
            km1_pow.clone() + c_at(j) - sum
        };
        out.push(b);
        km1_pow = km1_pow * k_minus_1.clone();
    }
    out
}

/// `b_0, …, b_N` for the given data.
pub fn coefficients_from_data(data: &WolstenholmeData) -> CoefficientVector {
    CoefficientVector {
        b: coefficients_through(data, data.order),
    }
}

/// `b_0, …, b_last` for the data (entries of `c` past `N` stay zero).
pub fn coefficients_through(data: &WolstenholmeData, last: usize) -> Vec<BigRational> {
    let c: Vec<BigRational> = (0..=data.order).map(|i| data.c(i)).collect();
    let km1 = rat(&data.k - 1);
    generalized_coefficients(&km1, &c, last + 1, false)
}

/// `M_n = [(-1)^{n+i} C(n+1+i, j)]_{0 ≤ i, j < n}`.
pub fn matrix_m(n: usize) -> IntegerMatrix {
    IntegerMatrix::from_fn(n, n, |i, j| {
        let v = BigInt::from(int_binomial((n + 1 + i) as u64, j as u64));
        if (n + i).is_multiple_of(2) {
            v
        } else {
            -v
        }
    })
}

/// Rows `rows` of `[(-1)^{i+1} C(i, j) + δ_{ij}]` with `0 ≤ j < n`. Rows
/// `0..=n` give `D_n`; rows `2n+1..=2n+2` give `A_n`.
pub fn matrix_d_rows(rows: std::ops::RangeInclusive<usize>, n: usize) -> IntegerMatrix {
    let rows: Vec<usize> = rows.collect();
    IntegerMatrix::from_fn(rows.len(), n, |r, j| {
        let i = rows[r];
        let b = BigInt::from(int_binomial(i as u64, j as u64));
        let mut v = if (i + 1).is_multiple_of(2) { b } else { -b };
        if i == j {
            v += 1;
        }
        v
    })
}

/// `M_{n,b} = [C(b+i, j)]_{0 ≤ i, j < n}`.
pub fn matrix_mnb(n: usize, b: u64) -> IntegerMatrix {
    IntegerMatrix::from_fn(n, n, |i, j| {
        BigInt::from(int_binomial(b + i as u64, j as u64))
    })
}

/// `det M_{n,b}`, which is 1.
#[allow(non_snake_case)]
pub fn matrix_Mnb_det(n: usize, b: u64) -> BigInt {
    matrix_mnb(n, b).determinant()
}

/// Columns of `M_n^{-1}`, each found by an exact integer solve.
fn m_inverse(n: usize) -> Result<IntegerMatrix> {
    let m = matrix_m(n);
    let mut cols = Vec::with_capacity(n);
    for t in 0..n {
        let e: Vec<BigInt> = (0..n).map(|i| BigInt::from(u8::from(i == t))).collect();
        cols.push(integer_matrix_solve(&m, &e)?);
    }
    Ok(IntegerMatrix::from_fn(n, n, |i, j| cols[j][i].clone()))
}

/// Combine `e_j - Σ_t K[row][t] e_{n+1+t}` in the shifted basis `(T-1)^i`
/// and convert to the monomial basis.
fn shifted_to_monomial(head: usize, k_row: &[BigInt], n: usize) -> IntPoly {
    let mut s = vec![BigInt::zero(); 2 * n + 3];
    s[head] += 1;
    for (t, v) in k_row.iter().enumerate() {
        s[n + 1 + t] -= v;
    }
    IntPoly::new(s).shift(&BigInt::from(-1))
}

/// `b_{0,n}, …, b_{n,n}` from `b = (k-1)^{0..n} - D_n M_n^{-1} (k-1)^{n+1..2n}`,
/// with the right-hand column kept symbolic in the basis `(k-1)^i`.
pub fn extremal_polys_matrix(n: usize) -> Result<Vec<ExtremalPolynomial>> {
    let minv = m_inverse(n)?;
    let dk = matrix_d_rows(0..=n, n).mul(&minv);
    Ok((0..=n)
        .map(|j| {
            let row: Vec<BigInt> = (0..n).map(|t| dk.get(j, t).clone()).collect();
            ExtremalPolynomial {
                j,
                n,
                poly: shifted_to_monomial(j, &row, n),
            }
        })
        .collect())
}

/// `b_{j,n}(T)` as the CRT solution of its two residue conditions, with
/// integrality and the degree bound `2n` asserted.
pub fn extremal_poly_crt(j: usize, n: usize) -> Result<ExtremalPolynomial> {
    if j > 2 * n {
        return Err(Error::InvalidArgument(format!(
            "b_{{{j},{n}}} is only defined for j <= 2n"
        )));
    }
    if j > n {
        return Ok(ExtremalPolynomial {
            j,
            n,
            poly: IntPoly::zero(),
        });
    }
    let sign = if j.is_multiple_of(2) { rat(1) } else { rat(-1) };
    let r1 = RatPoly::monomial(sign, j);
    let r2 = RatPoly::monomial(rat(1), j);
    let sol = poly_crt(&r1, n + 1, &r2, n + 1);
    let poly = sol.to_int().ok_or(Error::IntegralityAssertion { j, n })?;
    if let Some(d) = poly.degree() {
        if d > 2 * n {
            return Err(Error::DegreeAssertion {
                j,
                n,
                degree: d,
                bound: 2 * n,
            });
        }
    }
    Ok(ExtremalPolynomial { j, n, poly })
}

/// `[b_{0,n}, …, b_{n,n}]`, built once per `n` and shared.
pub fn extremal_polys(n: usize) -> Result<Arc<Vec<IntPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<IntPoly>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let polys = Arc::new(
        (0..=n)
            .map(|j| extremal_poly_crt(j, n).map(|e| e.poly))
            .collect::<Result<Vec<_>>>()?,
    );
    cache.lock().unwrap().insert(n, polys.clone());
    Ok(polys)
}

/// `b_{0,n}(k), …, b_{n,n}(k)`.
pub fn extremal_values(n: usize, k: &BigInt) -> Result<Vec<BigInt>> {
    Ok(extremal_polys(n)?.iter().map(|p| p.eval(k)).collect())
}

/// Integer data `[k, (c_0, …, c_{n-1}, 0, …), 2n]` whose coefficients vanish
/// in positions `n+1..=2n`. The section `c_i = 0` for `i ≥ n` makes the
/// choice canonical.
pub fn optimal_data(n: usize, k: &BigInt) -> Result<WolstenholmeData> {
    let km1: BigInt = k - 1;
    let target: Vec<BigInt> = (0..n).map(|t| -km1.pow((n + 1 + t) as u32)).collect();
    let c = integer_matrix_solve(&matrix_m(n), &target)?;
    let mut c: Vec<BigRational> = c.into_iter().map(BigRational::from_integer).collect();
    c.resize(2 * n + 1, BigRational::zero());
    Ok(WolstenholmeData::new(k.clone(), c, 2 * n))
}

/// The canonical optimal data with `c_i` as integer polynomials in `k`.
pub fn optimal_data_symbolic(n: usize) -> Result<Vec<IntPoly>> {
    let minv = m_inverse(n)?;
    let km1 = IntPoly::new(vec![BigInt::from(-1), BigInt::one()]);
    Ok((0..n)
        .map(|i| {
            (0..n).fold(IntPoly::zero(), |acc, t| {
                let term = km1.pow((n + 1 + t) as u32).scale(minv.get(i, t));
                &acc - &term
            })
        })
        .collect())
}

/// `b_{2n+1}`, `b_{2n+2}` and `C_n(k)` for the canonical optimal data.
pub fn extension_pair(n: usize, k: &BigInt) -> Result<ExtensionPair> {
    let data = optimal_data(n, k)?;
    let b = coefficients_through(&data, 2 * n + 2);
    let b_2n1 = b[2 * n + 1].clone();
    let b_2n2 = b[2 * n + 2].clone();
    let c_n_value = &b_2n1 * rat(n as u64 + 1) + &b_2n2;
    Ok(ExtensionPair {
        n,
        k: k.clone(),
        b_2n1,
        b_2n2,
        c_n_value,
    })
}

/// `(b_{2n+1}(k), b_{2n+2}(k), C_n(k))` as polynomials in `k`, through the
/// same coefficient map as the numeric path.
pub fn extension_pair_symbolic(n: usize) -> Result<(IntPoly, IntPoly, IntPoly)> {
    let c = optimal_data_symbolic(n)?;
    let km1 = IntPoly::new(vec![BigInt::from(-1), BigInt::one()]);
    let b = generalized_coefficients(&km1, &c, 2 * n + 3, false);
    let b1 = b[2 * n + 1].clone();
    let b2 = b[2 * n + 2].clone();
    let cn = &b1.scale(&BigInt::from(n as u64 + 1)) + &b2;
    Ok((b1, b2, cn))
}

/// Data `[k, (-(k-1)^j)_j, N]`, whose coefficients are `(-k)^j`.
pub fn swap_witness(k: &BigInt, order: usize) -> WolstenholmeData {
    let km1: BigInt = k - 1;
    let c = (0..=order)
        .map(|j| BigRational::from_integer(-km1.pow(j as u32)))
        .collect();
    WolstenholmeData::new(k.clone(), c, order)
}
