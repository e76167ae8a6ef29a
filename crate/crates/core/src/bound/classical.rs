//! Reference bounds from the literature, in log2 scale:
//!
//! ```text
//! (n/k)^k ≤ C(n,k) ≤ (en/k)^k
//! 2^{nH(k/n)}/√(8k(1−k/n)) ≤ C(n,k) ≤ 2^{nH(k/n)}/√(2πk(1−k/n))
//! ```
//!
//! Everything except the `log2 e` and `log2 π` terms is a rational
//! combination of integer logarithms, so the lower bounds are kept exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exact::{certified_context, Endpoint, Interval, LogLinearNumber, MathContext};
use crate::verdict::{certify, BoundVerdict, Inequality, PrecisionPolicy, Status};
use crate::CertifiedInterval;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundPair {
    pub lower: CertifiedInterval,
    pub upper: CertifiedInterval,
}

/// The four reference expressions at one `(n, k)`. `entropy` is absent at
/// `k = n` where `H` degenerates.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalBounds {
    pub n: i64,
    pub k: i64,
    pub log2_binomial: CertifiedInterval,
    pub ratio: BoundPair,
    pub entropy: Option<BoundPair>,
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn lg(v: i64) -> LogLinearNumber {
    LogLinearNumber::log2_u64(v as u64)
}

fn times(x: &LogLinearNumber, k: i64) -> LogLinearNumber {
    x.scale(&BigRational::from_integer(BigInt::from(k)))
}

/// `k · log2(n/k)`.
pub fn ratio_lower_exact(n: i64, k: i64) -> LogLinearNumber {
    times(&(lg(n) - lg(k)), k)
}

/// `n · H(k/n) = n log2 n − k log2 k − (n − k) log2(n − k)`.
pub fn entropy_term_exact(n: i64, k: i64) -> LogLinearNumber {
    let mut x = times(&lg(n), n) - times(&lg(k), k);
    if n > k {
        x = x - times(&lg(n - k), n - k);
    }
    x
}

/// `½ · log2(k(n − k)/n)`.
fn half_log2_spread(n: i64, k: i64) -> LogLinearNumber {
    (lg(k) + lg(n - k) - lg(n)).scale(&half())
}

/// `nH(k/n) − ½·log2(8k(1 − k/n))`.
pub fn entropy_lower_exact(n: i64, k: i64) -> LogLinearNumber {
    entropy_term_exact(n, k) - half_log2_spread(n, k) - LogLinearNumber::from_ratio(3, 2)
}

/// `nH(k/n) − ½·log2(2k(1 − k/n))`; the upper bound subtracts a further
/// `½·log2 π`.
fn entropy_upper_rational_part(n: i64, k: i64) -> LogLinearNumber {
    entropy_term_exact(n, k) - half_log2_spread(n, k) - LogLinearNumber::from_ratio(1, 2)
}

fn check_args(n: i64, k: i64) -> Result<()> {
    if n < 1 || k < 1 || k > n {
        return domain(format!("reference bounds need 1 ≤ k ≤ n, got n = {n}, k = {k}"));
    }
    Ok(())
}

pub fn ratio_upper<E: Endpoint>(ctx: &MathContext<E>, n: i64, k: i64) -> Interval<E> {
    &ratio_lower_exact(n, k).enclose(ctx) + &ctx.log2e().scale_i64(k)
}

pub fn entropy_upper<E: Endpoint>(ctx: &MathContext<E>, n: i64, k: i64) -> Option<Interval<E>> {
    let lp = ctx.log2(ctx.pi())?.mul_pow2(-1);
    Some(&entropy_upper_rational_part(n, k).enclose(ctx) - &lp)
}

/// Enclosures of the four reference bounds and of `log2 C(n, k)`.
pub fn classical_bounds(n: i64, k: i64, precision: u32) -> Result<ClassicalBounds> {
    check_args(n, k)?;
    let ctx = certified_context(precision);
    let ratio = BoundPair {
        lower: ratio_lower_exact(n, k).enclose(&*ctx),
        upper: ratio_upper(&*ctx, n, k),
    };
    let entropy = (k < n).then(|| BoundPair {
        lower: entropy_lower_exact(n, k).enclose(&*ctx),
        upper: entropy_upper(&*ctx, n, k).expect("π is positive"),
    });
    Ok(ClassicalBounds {
        n,
        k,
        log2_binomial: LogLinearNumber::log2_binomial(n as u64, k as u64).enclose(&*ctx),
        ratio,
        entropy,
    })
}

struct Upper<'a> {
    n: i64,
    k: i64,
    exact: &'a LogLinearNumber,
    entropy: bool,
}

impl Inequality for Upper<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        let rhs = if self.entropy {
            entropy_upper(ctx, self.n, self.k)?
        } else {
            ratio_upper(ctx, self.n, self.k)
        };
        Some((self.exact.enclose(ctx), rhs))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.n, self.k))
    }
}

fn exact_le(lhs: &LogLinearNumber, rhs: &LogLinearNumber, w: (i64, i64)) -> BoundVerdict {
    let status = if lhs.cmp_exact(rhs).is_le() {
        Status::Holds
    } else {
        Status::Fails
    };
    let p = 64;
    BoundVerdict::exact(status, lhs.enclose_certified(p), rhs.enclose_certified(p), p).with_witness(Some(w))
}

/// Certified ordering `lower ≤ log2 C(n,k) ≤ upper` for both pairs (the
/// entropy pair only when `k < n`). Lower bounds are compared exactly,
/// since the entropy lower bound is attained at `(2, 1)`.
pub fn check_classical_ordering(n: i64, k: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    check_args(n, k)?;
    let exact = LogLinearNumber::log2_binomial(n as u64, k as u64);
    let w = (n, k);
    let mut v = exact_le(&ratio_lower_exact(n, k), &exact, w);
    v = v.combine(certify(
        &Upper {
            n,
            k,
            exact: &exact,
            entropy: false,
        },
        policy,
    ));
    if k < n {
        v = v.combine(exact_le(&entropy_lower_exact(n, k), &exact, w));
        v = v.combine(certify(
            &Upper {
                n,
                k,
                exact: &exact,
                entropy: true,
            },
            policy,
        ));
    }
    Ok(v)
}

/// One line of a comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub name: &'static str,
    pub lower: bool,
    pub lo: String,
    pub hi: String,
    pub mid: String,
}

/// Rows for the theorem and the reference bounds at `(n, k)`, each as an
/// enclosure of its log2 value.
pub fn comparison_table(n: i64, k: i64, precision: u32) -> Result<Vec<ComparisonRow>> {
    let cb = classical_bounds(n, k, precision)?;
    let thm = super::theorem_rhs_log2(n, k, precision)?;
    let row = |name, lower, i: &CertifiedInterval| ComparisonRow {
        name,
        lower,
        lo: i.lo_decimal(20),
        hi: i.hi_decimal(20),
        mid: i.mid_decimal(20),
    };
    let mut out = vec![
        row("log2_binomial", false, &cb.log2_binomial),
        row("theorem_upper", false, &thm),
        row("ratio_lower", true, &cb.ratio.lower),
        row("ratio_upper", false, &cb.ratio.upper),
    ];
    if let Some(e) = &cb.entropy {
        out.push(row("entropy_lower", true, &e.lower));
        out.push(row("entropy_upper", false, &e.upper));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn near(i: &CertifiedInterval, x: f64) -> bool {
        (i.approx_mid() - x).abs() < 1e-9 && i.width().approx_f64() < 1e-15
    }

    #[test]
    fn examples_at_four_two() {
        let c = classical_bounds(4, 2, 64).unwrap();
        let e = std::f64::consts::E;
        assert!(near(&c.ratio.upper, 2.0 * (2.0 * e).log2()));
        assert!((c.ratio.upper.approx_mid() - 4.885).abs() < 1e-3);
        let ent = c.entropy.unwrap();
        assert!(ent.lower.is_point());
        assert_eq!(ent.lower.lo().approx_f64(), 2.5);
        assert!(ent.lower.hi() <= c.log2_binomial.lo());
    }

    #[test]
    fn entropy_upper_at_centre() {
        for n in [2i64, 8, 40] {
            let c = classical_bounds(n, n / 2, 64).unwrap();
            let nf = n as f64;
            assert!(near(
                &c.entropy.unwrap().upper,
                nf - 0.5 * (std::f64::consts::PI * nf / 2.0).log2()
            ));
        }
    }

    #[test]
    fn domain() {
        assert!(classical_bounds(4, 0, 64).is_err());
        assert!(classical_bounds(4, 5, 64).is_err());
        let c = classical_bounds(4, 4, 64).unwrap();
        assert!(c.entropy.is_none());
        assert!(c.log2_binomial.is_point());
    }

    #[test]
    fn entropy_lower_is_attained_at_two_one() {
        assert_eq!(entropy_lower_exact(2, 1), LogLinearNumber::from_int(1));
        let v = check_classical_ordering(2, 1, &PrecisionPolicy::default()).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(v.margin.is_point());
    }

    #[test]
    fn comparison_rows() {
        let t = comparison_table(10, 3, 64).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t[0].name, "log2_binomial");
        assert!(t[0].mid.starts_with("6.90689059560851"));
    }
}
