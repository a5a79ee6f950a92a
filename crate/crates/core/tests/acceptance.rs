//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Every check compares the library against an oracle computed
//! here by a different route.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wolstenholme::arith::{int_binomial, primes_in, IntPoly, PadicResidue};
use wolstenholme::bernoulli::{
    bernoulli_exact, bernoulli_mod_p, bernoulli_via_mhs, bernoulli_via_mhs_all,
};
use wolstenholme::cli::report;
use wolstenholme::cli::{
    emit_tables, run_scan_to, Command, Format, ScanCheckpoint, ScanConfig, ScanTarget,
};
use wolstenholme::congruence::{
    binom_kp_mod, error_term, uniqueness_search, Achieved, Checker, ErrorCase, ExceptionalClass,
    NamedTag, Required,
};
use wolstenholme::extremal::{
    extension_pair, extension_pair_symbolic, extremal_poly_crt, extremal_polys,
    extremal_polys_matrix, extremal_values, generalized_coefficients, matrix_Mnb_det, matrix_mnb,
    CoefficientVector, WolstenholmeData,
};
use wolstenholme::mhs::{binomial_via_lehmer, f_poly, lehmer_sum, rep0_residual};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pow_u(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// `e_j(1, 1/2, …, 1/n)` for `j ≤ jmax`, by expanding `Π (1 + T/i)` over
/// the rationals.
fn elem_oracle(n: u64, jmax: usize) -> Vec<BigRational> {
    let mut e = vec![BigRational::zero(); jmax + 1];
    e[0] = BigRational::one();
    for i in 1..=n {
        let inv = qq(1, i as i64);
        for j in (1..=jmax).rev() {
            let t = &e[j - 1] * &inv;
            e[j] += t;
        }
    }
    e
}

/// `Σ_{i<p} i^{-s} mod M` through one running fraction and one inversion.
fn power_harmonic_mod(p: u64, s: u32, modulus: &BigUint) -> BigUint {
    let (mut num, mut den) = (BigUint::zero(), BigUint::one());
    for i in 1..p {
        let is = BigUint::from(i).pow(s) % modulus;
        num = (&num * &is + &den) % modulus;
        den = (&den * &is) % modulus;
    }
    num * den.modinv(modulus).expect("unit") % modulus
}

/// `x mod M` for a rational with denominator prime to `M`.
fn reduce_q(x: &BigRational, modulus: &BigUint) -> BigUint {
    let m = BigInt::from(modulus.clone());
    let num = ((x.numer() % &m) + &m) % &m;
    let den = ((x.denom() % &m) + &m) % &m;
    let inv = den.magnitude().modinv(modulus).expect("unit denominator");
    num.magnitude() * inv % modulus
}

/// Exponent of `p` in a non-zero rational.
fn valuation_q(x: &BigRational, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let strip = |mut v: BigInt| {
        let mut e = 0;
        while (&v % &pb).is_zero() {
            v /= &pb;
            e += 1;
        }
        e
    };
    strip(x.numer().clone()) - strip(x.denom().clone())
}

/// `C(m, k)` for any integer `m`, by the falling product.
fn binom_any(m: i64, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k as i64 {
        acc *= qq(m - i, i + 1);
    }
    acc
}

fn exact_binom_kp(k: i64, p: u64) -> BigRational {
    binom_any(k * p as i64 - 1, p - 1)
}

// ---------------------------------------------------------------------------

fn tables() -> Outcome {
    let cells = emit_tables(5, &[2, 3]).map_err(|e| e.to_string())?;
    let row = |section: &str, n: usize, k: Option<i64>| -> Vec<String> {
        cells
            .iter()
            .filter(|c| {
                c.section == section && c.n == n.to_string() && c.k == k.map(|k| k.to_string())
            })
            .map(|c| c.value.clone())
            .collect()
    };
    let k2: [&[i64]; 6] = [
        &[1],
        &[1, 2],
        &[1, -2, 4],
        &[1, 14, -12, 8],
        &[1, -66, 68, -40, 16],
        &[1, 382, -380, 248, -112, 32],
    ];
    let k3: [&[i64]; 6] = [
        &[1],
        &[1, 6],
        &[1, -30, 36],
        &[1, 402, -396, 216],
        &[1, -6078, 6084, -3672, 1296],
        &[1, 102786, -102780, 66312, -29808, 7776],
    ];
    for (k, table) in [(2, k2), (3, k3)] {
        for (n, expected) in table.iter().enumerate() {
            let want: Vec<String> = expected.iter().map(|v| v.to_string()).collect();
            let got = row("values", n, Some(k));
            ensure!(got == want, "k={k} n={n}: got {got:?}, want {want:?}");
        }
    }
    let polys: [&[&str]; 4] = [
        &["1"],
        &["1", "T^2-T"],
        &["1", "-T^4+2T^3-T", "T^4-2T^3+T^2"],
        &[
            "1",
            "2T^6-6T^5+5T^4-T",
            "-2T^6+6T^5-5T^4+T^2",
            "T^6-3T^5+3T^4-T^3",
        ],
    ];
    for (n, expected) in polys.iter().enumerate() {
        let got = row("poly", n, None);
        ensure!(got == *expected, "polynomials n={n}: got {got:?}");
    }
    let b31 = &extremal_polys(3).map_err(|e| e.to_string())?[1];
    ensure!(b31.eval_i64(2) == BigInt::from(14), "b_(3,1)(2) != 14");
    ensure!(b31.eval_i64(3) == BigInt::from(402), "b_(3,1)(3) != 402");
    Ok(())
}

fn wolstenholme() -> Outcome {
    for p in primes_in(5, 10_000) {
        let r = binom_kp_mod(&BigInt::from(2), p, 3).map_err(|e| e.to_string())?;
        ensure!(
            r.value().is_one(),
            "p={p}: C(2p-1,p-1) = {} mod p^3",
            r.value()
        );
        let oracle = int_binomial(2 * p - 1, p - 1) % pow_u(p, 3);
        ensure!(oracle.is_one(), "p={p}: exact binomial disagrees");
    }
    Ok(())
}

fn glaisher() -> Outcome {
    for p in primes_in(5, 500) {
        for k in 2..=20i64 {
            let r = binom_kp_mod(&BigInt::from(k), p, 3).map_err(|e| e.to_string())?;
            ensure!(r.value().is_one(), "p={p} k={k}: {} mod p^3", r.value());
            let oracle = int_binomial(k as u64 * p - 1, p - 1) % pow_u(p, 3);
            ensure!(
                oracle == *r.value(),
                "p={p} k={k}: exact binomial disagrees"
            );
        }
    }
    Ok(())
}

fn van_hamme_mestrovic() -> Outcome {
    let checker = Checker::default();
    for p in primes_in(7, 5000) {
        let r = checker
            .verify_named(&NamedTag::VanHamme, p)
            .map_err(|e| e.to_string())?;
        ensure!(
            r.holds && r.required == Required::Exponent(5),
            "van Hamme p={p}: {:?}",
            r.achieved
        );
        let m = pow_u(p, 5);
        let h1 = power_harmonic_mod(p, 1, &m);
        let rhs = (BigUint::one() + BigUint::from(2 * p) * h1) % &m;
        ensure!(
            int_binomial(2 * p - 1, p - 1) % &m == rhs,
            "van Hamme oracle p={p}"
        );
    }
    for p in primes_in(11, 2000) {
        let r = checker
            .verify_named(&NamedTag::Mestrovic, p)
            .map_err(|e| e.to_string())?;
        ensure!(
            r.holds && r.required == Required::Exponent(7),
            "Mestrovic p={p}: {:?}",
            r.achieved
        );
        let m = pow_u(p, 7);
        let h1 = power_harmonic_mod(p, 1, &m);
        let h2 = power_harmonic_mod(p, 2, &m);
        // H({1,1}) = (H1² - H2)/2
        let half = BigUint::from(2u8).modinv(&m).unwrap();
        let h11 = ((&h1 * &h1 + &m - &h2) % &m) * half % &m;
        let pb = BigUint::from(p);
        let rhs = (BigUint::one() + &m * 4u8 - BigUint::from(2u8) * &pb * &h1 % &m
            + BigUint::from(4u8) * &pb * &pb * h11)
            % &m;
        ensure!(
            int_binomial(2 * p - 1, p - 1) % &m == rhs,
            "Mestrovic oracle p={p}"
        );
    }
    Ok(())
}

fn optimized() -> Outcome {
    let ns: Vec<u32> = (0..=5).collect();
    let ks: Vec<i64> = (1..=10).collect();
    let checker = Checker::default();
    let mut counts = [0usize; 3];
    for p in primes_in(3, 1000) {
        let sweep = checker
            .sweep_prime(p, &ns, &ks, &Default::default())
            .map_err(|e| e.to_string())?;
        let mut reports = sweep.reports.into_iter();
        for &n in &ns {
            let h_exact = (p <= 60).then(|| elem_oracle(p - 1, 2 * n as usize));
            for &k in &ks {
                let r = reports.next().expect("report").map_err(|e| e.to_string())?;
                let pu = p as u32;
                let expected = if pu >= 2 * n + 5 {
                    counts[0] += 1;
                    Required::Exponent(2 * n + 3)
                } else if pu == 2 * n + 3 {
                    counts[1] += 1;
                    Required::Exponent(2 * n + 2)
                } else {
                    counts[2] += 1;
                    Required::Equality
                };
                ensure!(
                    r.required == expected,
                    "n={n} k={k} p={p}: required {}",
                    r.required
                );
                ensure!(
                    r.holds,
                    "n={n} k={k} p={p}: achieved {} < {}",
                    r.achieved,
                    r.required
                );
                if expected == Required::Equality {
                    ensure!(
                        r.achieved == Achieved::Infinite,
                        "n={n} k={k} p={p}: not zero mod p^(2n+6)"
                    );
                }
                if let Some(h) = &h_exact {
                    let b =
                        extremal_values(n as usize, &BigInt::from(k)).map_err(|e| e.to_string())?;
                    let mut rhs = BigRational::zero();
                    for (j, bj) in b.iter().enumerate() {
                        rhs += q(bj.clone()) * q(BigInt::from(p).pow(j as u32)) * &h[j];
                    }
                    let diff = exact_binom_kp(k, p) - rhs;
                    match expected {
                        Required::Equality => {
                            ensure!(diff.is_zero(), "n={n} k={k} p={p}: exact difference {diff}")
                        }
                        Required::Exponent(e) => ensure!(
                            diff.is_zero() || valuation_q(&diff, p) >= e as i64,
                            "n={n} k={k} p={p}: exact valuation {}",
                            valuation_q(&diff, p)
                        ),
                    }
                }
            }
        }
    }
    ensure!(
        counts.iter().all(|&c| c > 0),
        "a prime regime was never exercised: {counts:?}"
    );
    Ok(())
}

fn scan_config(
    target: ScanTarget,
    primes: std::ops::RangeInclusive<u64>,
    threads: usize,
) -> ScanConfig {
    ScanConfig {
        command: Command::Scan,
        target,
        prime_range: primes,
        exponent_slack: 2,
        output_path: None,
        format: Format::Json,
        threads,
        checkpoint_path: None,
    }
}

fn classification() -> Outcome {
    let checker = Checker::default();
    let mut k_hits = 0;
    let mut bernoulli_hits = BTreeSet::new();
    for n in 0..=3u32 {
        for p in primes_in(2 * n as u64 + 3, 300) {
            let bern_zero = p >= 2 * n as u64 + 5
                && bernoulli_mod_p(p - 2 * n as u64 - 3, p)
                    .map_err(|e| e.to_string())?
                    .is_zero();
            for k in 1..=12i64 {
                let r = checker
                    .classified_report(n, k, p)
                    .map_err(|e| e.to_string())?;
                let class = r.class.ok_or(format!("n={n} k={k} p={p}: unclassified"))?;
                let by_k = k.rem_euclid(p as i64) <= 1;
                let want = match (by_k, bern_zero) {
                    (false, false) => ExceptionalClass::NotExceptional,
                    (true, false) => ExceptionalClass::ExceptionalK,
                    (false, true) => ExceptionalClass::ExceptionalBernoulli,
                    (true, true) => ExceptionalClass::ExceptionalBoth,
                };
                ensure!(
                    class == want,
                    "n={n} k={k} p={p}: predicted {class}, oracle {want}"
                );
                ensure!(
                    class.is_exceptional() == r.exceptional,
                    "n={n} k={k} p={p}: predicted {class}, measured exceptional={}",
                    r.exceptional
                );
                k_hits += usize::from(by_k && r.exceptional);
                if bern_zero && r.exceptional {
                    bernoulli_hits.insert((n, p));
                }
            }
        }
    }
    ensure!(k_hits > 0, "the k branch never fired");
    let want: BTreeSet<(u32, u64)> = [(1, 37), (3, 67)].into();
    ensure!(
        bernoulli_hits == want,
        "Bernoulli branch hits {bernoulli_hits:?}"
    );

    let config = scan_config(
        ScanTarget::Optimized {
            n_range: 0..=0,
            k_set: vec![2],
        },
        5..=20_000,
        1,
    );
    let mut out = Vec::new();
    let summary = run_scan_to(&config, &mut out).map_err(|e| e.to_string())?;
    ensure!(
        summary.unexpected_failures == 0,
        "scan had {} unexpected",
        summary.unexpected_failures
    );
    let records = report::parse(&out, Format::Json).map_err(|e| e.to_string())?;
    ensure!(
        records.len() == primes_in(5, 20_000).len(),
        "scan wrote {} records",
        records.len()
    );
    let exceptional: Vec<u64> = records
        .iter()
        .filter(|r| r.exceptional)
        .map(|r| r.p)
        .collect();
    ensure!(exceptional == [16843], "exceptional primes {exceptional:?}");
    let r = records.iter().find(|r| r.p == 16843).unwrap();
    ensure!(
        r.class == Some(ExceptionalClass::ExceptionalBernoulli),
        "16843 class {:?}",
        r.class
    );
    let p = 16843u64;
    let oracle = int_binomial(2 * p - 1, p - 1) % pow_u(p, 4);
    ensure!(oracle.is_one(), "C(2p-1,p-1) mod p^4 = {oracle} at p=16843");
    Ok(())
}

fn identities(rng: &mut ChaCha8Rng) -> Outcome {
    for n in 0..=60u64 {
        for j in 0..=n {
            let r = rep0_residual(n, j);
            ensure!(r.is_zero(), "rep0 n={n} j={j}: {r}");
        }
    }
    for n in 0..=40u64 {
        let h = elem_oracle(n, n as usize);
        let base = q(n + 1);
        for _ in 0..50 {
            let k = random_q(rng, 40, 12);
            let c: Vec<BigRational> = (0..=n).map(|_| random_q(rng, 40, 12)).collect();
            let b = generalized_coefficients(&(&k - q(1)), &c, n as usize + 1, n % 2 == 1);
            let rhs: BigRational = (0..=n as usize)
                .map(|j| &b[j] * num_traits::pow(base.clone(), j) * &h[j])
                .fold(BigRational::zero(), |a, t| a + t);
            let mut lhs = BigRational::one();
            for i in 1..=n {
                lhs *= (&k * &base - q(i)) / q(i);
            }
            ensure!(lhs == rhs, "coefficient identity n={n} k={k}");
        }
    }
    let flip = |f: &IntPoly| {
        let c: Vec<BigInt> = f
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        IntPoly::new(c)
    };
    for n in 0..=100u64 {
        let f = f_poly(n);
        let h = elem_oracle(n, n as usize);
        for (j, c) in f.coeffs().iter().enumerate() {
            ensure!(
                *c == q(n + 1).pow(j as i32) * &h[j],
                "f_{n} coefficient {j}"
            );
        }
        // on n! f, which is integral; f(-1-T) is f(T-1) with T -> -T
        let g = f
            .scale(&q((1..=n).map(BigUint::from).product::<BigUint>()))
            .to_int()
            .ok_or("n! f_n not integral")?;
        let lhs = flip(&g.shift(&BigInt::from(-1)));
        let rhs = if n % 2 == 0 {
            g.clone()
        } else {
            g.scale(&BigInt::from(-1))
        };
        ensure!(lhs == rhs, "functional equation n={n}");
    }
    for m in -20..=200i64 {
        for k in 0..=50u64 {
            let got = binomial_via_lehmer(&BigInt::from(m), k);
            ensure!(
                got == binom_any(m, k),
                "C({m},{k}) via the expansion: {got}"
            );
            ensure!(
                lehmer_sum(&BigInt::from(m), k) == binom_any(m - 1, k),
                "expansion at m={m} k={k}"
            );
        }
    }
    Ok(())
}

fn random_q(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    qq(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Fraction-free elimination.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

fn extremal() -> Outcome {
    let t = IntPoly::x();
    let one = IntPoly::constant(BigInt::one());
    for n in 0..=12usize {
        let via_matrix = extremal_polys_matrix(n).map_err(|e| e.to_string())?;
        for (j, from_matrix) in via_matrix.iter().enumerate() {
            let crt = extremal_poly_crt(j, n).map_err(|e| e.to_string())?;
            ensure!(
                crt.poly == from_matrix.poly,
                "b_({j},{n}) differs between constructions"
            );
            // b ≡ (-T)^j mod T^{n+1} and b ≡ (T-1)^j mod (T-1)^{n+1}, degree ≤ 2n
            let b = &crt.poly;
            ensure!(b.degree().unwrap_or(0) <= 2 * n, "b_({j},{n}) degree");
            let minus_t = t.scale(&BigInt::from(-1)).pow(j as u32);
            ensure!(
                b.truncate(n + 1) == minus_t.truncate(n + 1),
                "b_({j},{n}) at T=0"
            );
            let shifted = b.shift(&BigInt::one());
            ensure!(
                shifted.truncate(n + 1) == t.pow(j as u32).truncate(n + 1),
                "b_({j},{n}) at T=1"
            );
        }
    }
    for n in 0..=25usize {
        for b in 0..=25u64 {
            let det = matrix_Mnb_det(n, b);
            ensure!(det.is_one(), "det M_({n},{b}) = {det}");
            let m = matrix_mnb(n, b);
            let rows = (0..n)
                .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
                .collect();
            ensure!(bareiss(rows).is_one(), "elimination det M_({n},{b})");
        }
    }
    for n in 0..=8usize {
        let (_, _, cn) = extension_pair_symbolic(n).map_err(|e| e.to_string())?;
        let want = &t.pow(n as u32 + 1) * &(&t - &one).pow(n as u32 + 1);
        ensure!(cn == want, "C_{n}(T) = {cn}");
        for k in [-3i64, 2, 3, 7] {
            let e = extension_pair(n, &BigInt::from(k)).map_err(|e| e.to_string())?;
            let v = q(BigInt::from(k).pow(n as u32 + 1) * BigInt::from(k - 1).pow(n as u32 + 1));
            ensure!(e.c_n_value == v, "C_{n}({k}) numeric");
        }
    }
    let t2_t = &t.pow(2) - &t;
    for n in 1..=12usize {
        let b = extremal_polys(n).map_err(|e| e.to_string())?;
        let b2 = b.get(2).cloned().unwrap_or_else(IntPoly::zero);
        ensure!(&b[1] + &b2 == t2_t, "b_(1,{n}) + b_(2,{n})");
    }
    for n in 0..=8usize {
        for (j, b) in extremal_polys(n)
            .map_err(|e| e.to_string())?
            .iter()
            .enumerate()
        {
            for k in -10..=10i64 {
                ensure!(
                    b.eval_i64(k) == b.eval_i64(1 - k),
                    "b_({j},{n}) symmetry at k={k}"
                );
            }
        }
    }
    Ok(())
}

fn bernoulli_cross() -> Outcome {
    let checker = Checker::default();
    for p in primes_in(3, 500) {
        let pb = BigUint::from(p);
        let via_mhs = bernoulli_via_mhs_all(p).map_err(|e| e.to_string())?;
        let mut indices = Vec::new();
        for r in &via_mhs {
            let m = r.index;
            indices.push(m);
            let exact = reduce_q(&bernoulli_exact(m).map_err(|e| e.to_string())?.value, &pb);
            let sums = bernoulli_mod_p(m, p).map_err(|e| e.to_string())?;
            ensure!(
                *r.residue.value() == exact && *sums.residue.value() == exact,
                "B_{m} mod {p}: exact {exact}, power sums {}, harmonic sums {}",
                sums.residue.value(),
                r.residue.value()
            );
        }
        let want: Vec<u64> = (1..=p.saturating_sub(3) / 2).map(|i| 2 * i).collect();
        ensure!(indices == want, "p={p}: indices {indices:?}");
        if p >= 7 {
            let single = bernoulli_via_mhs(1, p).map_err(|e| e.to_string())?;
            ensure!(
                single.residue == via_mhs[via_mhs.len() - 2].residue,
                "single-index route p={p}"
            );
        }
        if p >= 5 {
            let r = checker
                .verify_named(&NamedTag::GlaisherH1, p)
                .map_err(|e| e.to_string())?;
            ensure!(r.holds, "H(1) mod p^3 at p={p}: {}", r.achieved);
            let m3 = pow_u(p, 3);
            let h1 = power_harmonic_mod(p, 1, &m3);
            let b = bernoulli_mod_p(p - 3, p).map_err(|e| e.to_string())?;
            let third = BigUint::from(3u8).modinv(&pb).unwrap();
            let coeff = (&pb - (b.residue.value() * third % &pb)) % &pb;
            ensure!(h1 == coeff * &pb * &pb % &m3, "H(1) vs B_(p-3) at p={p}");
        }
    }
    Ok(())
}

fn random_data(rng: &mut ChaCha8Rng, p: u64, order: usize) -> WolstenholmeData {
    let k = rng.gen_range(-30..=30i64);
    let mut c = vec![BigRational::zero(); order + 1];
    for _ in 0..rng.gen_range(0..=4) {
        let i = rng.gen_range(0..=order);
        let den = loop {
            let d = rng.gen_range(1..=30i64);
            if d % p as i64 != 0 {
                break d;
            }
        };
        c[i] = qq(rng.gen_range(-50..=50), den);
    }
    WolstenholmeData::new(k, c, order)
}

fn error_terms(rng: &mut ChaCha8Rng) -> Outcome {
    let worked = error_term(&WolstenholmeData::new(2, vec![], 1), 7).map_err(|e| e.to_string())?;
    let six_p3 = PadicResidue::from_u64(7, 4, 6 * 343);
    ensure!(
        worked.matches && worked.actual == six_p3 && worked.predicted == six_p3,
        "p=7 N=1 k=2: actual {}, predicted {}",
        worked.actual.value(),
        worked.predicted.value()
    );
    let small = primes_in(5, 300);
    for case in 0..4 {
        let mut done = 0;
        while done < 200 {
            let p = small[rng.gen_range(0..small.len())];
            let order = match case {
                0 => rng.gen_range(0..=(p as usize - 4)),
                1 => p as usize - 3,
                2 => p as usize - 2,
                _ => p as usize - 1 + rng.gen_range(0..=3),
            };
            let data = random_data(rng, p, order);
            let r = error_term(&data, p).map_err(|e| e.to_string())?;
            let want = [
                if order % 2 == 0 {
                    ErrorCase::EvenOrder
                } else {
                    ErrorCase::OddOrder
                },
                ErrorCase::ThirdLast,
                ErrorCase::SecondLast,
                ErrorCase::Vanishing,
            ][case];
            ensure!(r.case == want, "p={p} N={order}: case {:?}", r.case);
            ensure!(
                r.matches,
                "p={p} N={order} k={}: case {:?} mismatch",
                data.k,
                r.case
            );
            if p <= 40 {
                // exact difference against the predicted leading term
                let b = wolstenholme::extremal::coefficients_from_data(&data).b;
                let h = elem_oracle(p - 1, order);
                let rhs: BigRational = b
                    .iter()
                    .enumerate()
                    .map(|(j, bj)| bj * q(BigInt::from(p).pow(j as u32)) * &h[j])
                    .fold(BigRational::zero(), |a, t| a + t);
                let diff = exact_binom_kp(data.k.to_i64().unwrap(), p) - rhs;
                let m = want.modulus_exponent(order);
                ensure!(
                    reduce_q(&diff, &pow_u(p, m)) == *r.actual.value(),
                    "p={p} N={order}: modular error term disagrees with exact"
                );
            }
            done += 1;
        }
    }
    Ok(())
}

fn scan_bytes(config: &ScanConfig) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let summary = run_scan_to(config, &mut out).map_err(|e| e.to_string())?;
    if summary.unexpected_failures != 0 {
        return Err(format!(
            "{} unexpected failures: {:?}",
            summary.unexpected_failures, summary.errors
        ));
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let target = ScanTarget::Optimized {
        n_range: 0..=2,
        k_set: vec![1, 2, 3, 5],
    };
    for format in [Format::Json, Format::Csv] {
        let mut one = scan_config(target.clone(), 5..=1500, 1);
        one.format = format;
        let mut eight = one.clone();
        eight.threads = 8;
        let a = scan_bytes(&one)?;
        let b = scan_bytes(&eight)?;
        ensure!(
            !a.is_empty() && a == b,
            "{} output differs between 1 and 8 threads",
            format.as_str()
        );
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let ckpt = dir.path().join("scan.ckpt");
    let full = scan_config(target.clone(), 5..=1500, 1);
    let single = report::parse(&scan_bytes(&full)?, Format::Json).map_err(|e| e.to_string())?;

    let mut first = scan_config(target.clone(), 5..=700, 8);
    first.checkpoint_path = Some(ckpt.clone());
    let mut resumed =
        report::parse(&scan_bytes(&first)?, Format::Json).map_err(|e| e.to_string())?;
    let mut rest = full.clone();
    rest.threads = 8;
    rest.checkpoint_path = Some(ckpt.clone());
    resumed.extend(report::parse(&scan_bytes(&rest)?, Format::Json).map_err(|e| e.to_string())?);
    ensure!(resumed == single, "resumed scan differs from a single run");
    let cp = ScanCheckpoint::load(&ckpt)
        .map_err(|e| e.to_string())?
        .ok_or("no checkpoint")?;
    ensure!(
        cp.last_completed_prime == 1499,
        "checkpoint at {}",
        cp.last_completed_prime
    );
    ensure!(
        cp.partial_result_count == single.len() as u64,
        "checkpoint count {}",
        cp.partial_result_count
    );
    ensure!(
        scan_bytes(&rest)? == b"[]\n",
        "a completed scan should resume to an empty report"
    );
    Ok(())
}

fn uniqueness() -> Outcome {
    let candidate = CoefficientVector {
        b: vec![q(1), q(1)],
    };
    let hit = uniqueness_search(1, 1, &candidate, 7, 500).map_err(|e| e.to_string())?;
    ensure!(hit == Some(7), "candidate (1,1) first fails at {hit:?}");
    for n in 0..=3u32 {
        for k in [2i64, 3] {
            let b = extremal_values(n as usize, &BigInt::from(k)).map_err(|e| e.to_string())?;
            let cand = CoefficientVector {
                b: b.into_iter().map(q).collect(),
            };
            let hit =
                uniqueness_search(n, k, &cand, 2 * n as u64 + 5, 500).map_err(|e| e.to_string())?;
            ensure!(hit.is_none(), "extremal n={n} k={k} fails at {hit:?}");
        }
    }
    Ok(())
}

struct Runner {
    failures: usize,
}

impl Runner {
    fn run(&mut self, id: &str, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, budget) {
            (Err(e), _) => Err(e.clone()),
            (Ok(()), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
            _ => Ok(()),
        };
        match verdict {
            Ok(()) => println!("PASS [{id:>2}] {name} ({:.2} s)", elapsed.as_secs_f64()),
            Err(e) => {
                self.failures += 1;
                println!(
                    "FAIL [{id:>2}] {name} ({:.2} s): {e}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
}

fn main() {
    let cache = tempfile::tempdir().expect("temp dir");
    std::env::set_var(wolstenholme::bernoulli::CACHE_DIR_ENV, cache.path());
    let secs = |s| Some(Duration::from_secs(s));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut runner = Runner { failures: 0 };
    runner.run("1", "extremal tables and polynomials", secs(1), tables);
    runner.run(
        "2",
        "C(2p-1,p-1) = 1 mod p^3, 5 <= p <= 10^4",
        secs(60),
        wolstenholme,
    );
    runner.run(
        "3",
        "C(kp-1,p-1) = 1 mod p^3, 2 <= k <= 20, p <= 500",
        secs(30),
        glaisher,
    );
    runner.run(
        "4",
        "mod p^5 to 5000 and mod p^7 to 2000",
        secs(120),
        van_hamme_mestrovic,
    );
    runner.run(
        "5",
        "optimized congruence, n <= 5, k <= 10, p <= 1000",
        secs(180),
        optimized,
    );
    runner.run(
        "6",
        "exceptional classification and the 16843 scan",
        secs(300),
        classification,
    );
    let mut rng7 = rng.clone();
    runner.run("7", "harmonic sum identity suites", secs(60), || {
        identities(&mut rng7)
    });
    runner.run("8", "extremal machinery", None, extremal);
    runner.run("9", "Bernoulli cross-validation", None, bernoulli_cross);
    runner.run(
        "10",
        "leading error terms, 200 samples per case",
        secs(60),
        || error_terms(&mut rng),
    );
    runner.run("11", "scan determinism and resume", None, determinism);
    runner.run("U", "uniqueness probe", None, uniqueness);
    if runner.failures > 0 {
        println!("{} criteria failed", runner.failures);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
