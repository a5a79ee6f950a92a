//! Leading truncation errors `E_N = C(kp-1, p-1) - Σ_{j ≤ N} b_j p^j H({1}^j; p-1)`.

use num_rational::BigRational;
use num_traits::Zero;

use super::{
    check_data_denominators, check_odd_prime, exact_binom, exact_rhs, prime_kernel, reduce_all,
    weighted_sum,
};
use crate::arith::{padic_reduce, rat, ratio, PadicResidue};
use crate::bernoulli::bernoulli_mod_p;
use crate::extremal::{coefficients_through, WolstenholmeData};
use crate::Result;

/// Which prediction applies, by the position of `N` relative to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorCase {
    /// `N ≤ p-4`, `N` even: `E_N ≡ -B_{p-3-N}/(N+3) ((N+2)/2 b_{N+1} + b_{N+2}) p^{N+3}`.
    EvenOrder,
    /// `N ≤ p-4`, `N` odd: `E_N ≡ -B_{p-2-N}/(N+2) b_{N+1} p^{N+2}`.
    OddOrder,
    /// `N = p-3`: `E_N ≡ (b_{N+1}/2 - b_{N+2}) p^{N+2}`.
    ThirdLast,
    /// `N = p-2`: `E_N ≡ -b_{N+1} p^{N+1}`.
    SecondLast,
    /// `N ≥ p-1`: `E_N = 0`.
    Vanishing,
}

impl ErrorCase {
    pub fn of(order: usize, p: u64) -> Self {
        let n = order as u64;
        if n + 4 <= p {
            if n.is_multiple_of(2) {
                ErrorCase::EvenOrder
            } else {
                ErrorCase::OddOrder
            }
        } else if n + 3 == p {
            ErrorCase::ThirdLast
        } else if n + 2 == p {
            ErrorCase::SecondLast
        } else {
            ErrorCase::Vanishing
        }
    }

    /// Exponent of the modulus the prediction is stated in.
    pub fn modulus_exponent(self, order: usize) -> u32 {
        let n = order as u32;
        match self {
            ErrorCase::EvenOrder | ErrorCase::Vanishing => n + 4,
            ErrorCase::OddOrder | ErrorCase::ThirdLast => n + 3,
            ErrorCase::SecondLast => n + 2,
        }
    }
}

/// Predicted against actual truncation error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorTermReport {
    pub p: u64,
    pub order: usize,
    pub data: WolstenholmeData,
    pub case: ErrorCase,
    pub predicted: PadicResidue,
    pub actual: PadicResidue,
    /// Equal in the stated modulus; exactly zero in the vanishing case.
    pub matches: bool,
}

/// Compute `E_N` and its predicted leading term.
pub fn error_term(data: &WolstenholmeData, p: u64) -> Result<ErrorTermReport> {
    check_odd_prime(p)?;
    check_data_denominators(data, p)?;
    let order = data.order;
    let case = ErrorCase::of(order, p);
    let m = case.modulus_exponent(order);
    let b = coefficients_through(data, order + 2);
    let truncated = &b[..=order];
    // near p the modulus is large and the exact difference is cheaper
    let exact_diff =
        (order as u64 + 3 >= p).then(|| exact_binom(&data.k, p) - exact_rhs(truncated, p));
    let actual = match &exact_diff {
        Some(diff) => padic_reduce(diff, p, m)?,
        None => {
            let b_mod = reduce_all(truncated, p, m)?;
            let (binom, h) = prime_kernel(p, m, order, std::slice::from_ref(&data.k));
            &binom[0] - &weighted_sum(&b_mod, &h, m)
        }
    };

    let n = order as i64;
    let (coeff, shift) = match case {
        ErrorCase::EvenOrder => {
            let bern = bernoulli_mod_p(p - 3 - order as u64, p)?
                .residue
                .to_bigint();
            let inner = ratio(n + 2, 2) * &b[order + 1] + &b[order + 2];
            (-rat(bern) / rat(n + 3) * inner, order as u64 + 3)
        }
        ErrorCase::OddOrder => {
            let bern = bernoulli_mod_p(p - 2 - order as u64, p)?
                .residue
                .to_bigint();
            (-rat(bern) / rat(n + 2) * &b[order + 1], order as u64 + 2)
        }
        ErrorCase::ThirdLast => (&b[order + 1] / rat(2) - &b[order + 2], order as u64 + 2),
        ErrorCase::SecondLast => (-b[order + 1].clone(), order as u64 + 1),
        ErrorCase::Vanishing => (BigRational::zero(), 0),
    };
    let predicted = &padic_reduce(&coeff, p, m)? * &PadicResidue::from_u64(p, m, p).pow(shift);
    let matches = match (case, exact_diff) {
        (ErrorCase::Vanishing, Some(diff)) => diff.is_zero(),
        _ => predicted == actual,
    };
    Ok(ErrorTermReport {
        p,
        order,
        data: data.clone(),
        case,
        predicted,
        actual,
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use num_bigint::BigInt;

    fn zero_data(k: i64, order: usize) -> WolstenholmeData {
        WolstenholmeData::new(BigInt::from(k), vec![], order)
    }

    #[test]
    fn worked_instance() {
        let r = error_term(&zero_data(2, 1), 7).unwrap();
        assert_eq!(r.case, ErrorCase::OddOrder);
        let six_p3 = PadicResidue::new(7, 4, &BigInt::from(6 * 343));
        assert_eq!(r.actual, six_p3);
        assert_eq!(r.predicted, six_p3);
        assert!(r.matches);
        // E_1 = 7³ · 99/20 exactly
        let exact = exact_binom(&BigInt::from(2), 7) - exact_rhs(&[rat(1), rat(1)], 7);
        assert_eq!(exact, rat(343) * ratio(99, 20));
    }

    #[test]
    fn every_case_at_small_primes() {
        for p in [5u64, 7, 11, 13] {
            for order in 0..=(p as usize + 1) {
                for k in [-3i64, 2, 5] {
                    let r = error_term(&zero_data(k, order), p).unwrap();
                    assert!(r.matches, "p={p} N={order} k={k} case={:?}", r.case);
                }
            }
        }
        assert_eq!(
            error_term(&zero_data(2, 2), 5).unwrap().case,
            ErrorCase::ThirdLast
        );
    }

    #[test]
    fn rational_data() {
        let data = WolstenholmeData::new(3, vec![ratio(1, 2), ratio(-5, 3), ratio(7, 4)], 3);
        for p in [5u64, 11, 13, 17] {
            assert!(error_term(&data, p).unwrap().matches, "p={p}");
        }
    }
}
