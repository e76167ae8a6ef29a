//! Exact binomial coefficients and their base-2 logarithms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::elementary::certified_context;
use super::interval::Interval;
use crate::error::{domain, Result};
use crate::{CertifiedInterval, ExactInt};

fn check_range(n: i64, k: i64) -> Result<()> {
    if n < 0 || k < 0 {
        return domain(format!("binomial arguments must be non-negative, got ({n}, {k})"));
    }
    if k > n {
        return domain(format!("binomial requires k ≤ n, got ({n}, {k})"));
    }
    Ok(())
}

/// `C(n, k)` by the multiplicative formula over the shorter side.
pub fn binomial(n: i64, k: i64) -> Result<ExactInt> {
    check_range(n, k)?;
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// The full row `C(n, 0), …, C(n, n)`.
pub fn binomial_row(n: u64) -> Vec<ExactInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c *= n - k;
        c /= k + 1;
        row.push(c.clone());
    }
    row
}

/// True when `v` is a positive power of two (including 1).
pub fn is_power_of_two(v: &BigInt) -> bool {
    v > &BigInt::zero() && v.trailing_zeros() == Some(v.bits() - 1)
}

/// Enclosure of `log2 C(n, k)` with width at most `2^(−precision)`; an exact
/// point when the coefficient is a power of two.
pub fn log2_binomial(n: i64, k: i64, precision: u32) -> Result<CertifiedInterval> {
    let c = binomial(n, k)?;
    Ok(log2_of_count(&c, precision))
}

/// Enclosure of `log2 v` for a positive integer.
pub fn log2_of_count(v: &BigInt, precision: u32) -> CertifiedInterval {
    assert!(v > &BigInt::zero(), "log2 of a non-positive count");
    if is_power_of_two(v) {
        let e = (v.bits() - 1) as i64;
        return Interval::from_i64(e, precision);
    }
    certified_context(precision).log2_int(v).expect("positive")
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Prime factorisation of `C(n, k)` via Legendre's formula, as
/// `(prime, exponent)` pairs with positive exponents.
pub fn binomial_prime_exponents(n: u64, k: u64) -> Vec<(u64, u64)> {
    assert!(k <= n);
    primes_up_to(n)
        .into_iter()
        .filter_map(|p| {
            let mut e = 0u64;
            let mut pk = p;
            loop {
                e += n / pk - k / pk - (n - k) / pk;
                match pk.checked_mul(p) {
                    Some(next) if next <= n => pk = next,
                    _ => break,
                }
            }
            (e > 0).then_some((p, e))
        })
        .collect()
}

/// Trial-division factorisation.
pub fn factor_u64(mut m: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Endpoint;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn pascal(n: usize) -> Vec<Vec<BigInt>> {
        let mut rows = vec![vec![BigInt::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigInt::one(); i + 1];
            for k in 1..i {
                row[k] = &prev[k - 1] + &prev[k];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn small_values() {
        assert_eq!(binomial(2, 1).unwrap(), BigInt::from(2));
        assert_eq!(binomial(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binomial(8, 6).unwrap(), BigInt::from(28));
        assert_eq!(binomial(0, 0).unwrap(), BigInt::one());
    }

    #[test]
    fn domain_errors() {
        assert!(binomial(3, 4).is_err());
        assert!(binomial(-1, 0).is_err());
        assert!(binomial(3, -1).is_err());
        assert!(log2_binomial(2, 3, 64).is_err());
    }

    #[test]
    fn matches_pascal_triangle_up_to_64() {
        let rows = pascal(64);
        for (n, want) in rows.iter().enumerate() {
            let row = binomial_row(n as u64);
            for (k, w) in want.iter().enumerate() {
                assert_eq!(binomial(n as i64, k as i64).unwrap(), *w);
                assert_eq!(row[k], *w);
            }
            let total: BigInt = row.iter().sum();
            assert_eq!(total, BigInt::one() << n);
        }
    }

    #[test]
    fn large_central_coefficient_is_exact() {
        let c = binomial(4000, 2000).unwrap();
        let row = binomial_row(4000);
        assert_eq!(c, row[2000]);
        assert!(c.bits() > 3990);
    }

    #[test]
    fn log2_points_for_powers_of_two() {
        let z = log2_binomial(2, 2, 64).unwrap();
        assert!(z.is_point() && z.lo().is_zero());
        let one = log2_binomial(2, 1, 64).unwrap();
        assert!(one.is_point());
        assert_eq!(one.lo().approx_f64(), 1.0);
    }

    #[test]
    fn log2_six_enclosure() {
        let i = log2_binomial(4, 2, 53).unwrap();
        assert!(i.lo().approx_f64() <= 2.584962500721156 + 1e-15);
        assert!(i.hi().approx_f64() >= 2.584962500721156 - 1e-15);
        assert!(i.width().exponent().unwrap() < -53);
    }

    #[test]
    fn log2_enclosures_bracket_the_integer() {
        // 2^lo ≤ C ≤ 2^hi checked with the exact integer: compare via
        // lo ≤ log2 C using integer bounds floor/ceil of the endpoints.
        for n in 1..=30i64 {
            for k in 0..=n {
                let c = binomial(n, k).unwrap();
                let i = log2_binomial(n, k, 64).unwrap();
                let bits = c.bits() as i64;
                // C ∈ [2^(bits−1), 2^bits)
                assert!(i.lo().approx_f64() < bits as f64);
                assert!(i.hi().approx_f64() >= (bits - 1) as f64);
                // tighter: exp2 of the endpoints brackets C
                let ctx = certified_context(64);
                let lo = ctx.exp2(&Interval::point(i.lo().clone(), 200));
                let hi = ctx.exp2(&Interval::point(i.hi().clone(), 200));
                let cq = BigRational::from_integer(c.clone());
                assert!(lo.lo().to_rational() <= cq, "({n},{k})");
                assert!(hi.hi().to_rational() >= cq, "({n},{k})");
            }
        }
    }

    #[test]
    fn legendre_factorisation_reconstructs_the_coefficient() {
        for n in 0..=60u64 {
            for k in 0..=n {
                let mut acc = BigInt::one();
                for (p, e) in binomial_prime_exponents(n, k) {
                    acc *= num_traits::pow(BigInt::from(p), e as usize);
                }
                assert_eq!(acc, binomial(n as i64, k as i64).unwrap());
            }
        }
    }

    #[test]
    fn factorisation() {
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(56), vec![(2, 3), (7, 1)]);
        assert_eq!(factor_u64(97), vec![(97, 1)]);
    }

    proptest! {
        #[test]
        fn pascal_identity(n in 1i64..=64, k in 1i64..=64) {
            prop_assume!(k <= n);
            let lhs = binomial(n, k).unwrap();
            let rhs = binomial(n - 1, k - 1).unwrap() + if k < n { binomial(n - 1, k).unwrap() } else { BigInt::zero() };
            prop_assert_eq!(lhs, rhs);
        }
    }
}
