//! Log2-scale right-hand sides of the main bound and of its even-length
//! companion, and their certified comparison against exact binomials.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{domain, Result};
use crate::exact::{binomial, certified_context, Endpoint, Interval, MathContext};
use crate::verdict::{certify, BoundVerdict, Inequality, PrecisionPolicy};
use crate::CertifiedInterval;

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `½·log2(π·x)` for a positive integer `x`.
fn half_log2_pi_times<E: Endpoint>(ctx: &MathContext<E>, x: i64) -> Option<Interval<E>> {
    let l = ctx.log2(&(ctx.pi() * &ctx.int(x)))?;
    Some(l.mul_pow2(-1))
}

/// `n − ½·log2(πn/2) + (23 − 9(2k − n)²)/(18n) · log2 e`.
pub fn theorem_rhs<E: Endpoint>(ctx: &MathContext<E>, n: i64, k: i64) -> Option<Interval<E>> {
    let d = 2 * k - n;
    let q = ratio(23 - 9 * d * d, 18 * n);
    // log2(πn/2) = log2(πn) − 1
    let h = &half_log2_pi_times(ctx, n)? - &ctx.ratio(1, 2);
    Some(&(&ctx.int(n) - &h) + &(&ctx.rational(&q) * ctx.log2e()))
}

/// `2n − ½·log2(πn) + (23 − 36k²)/(36n) · log2 e`.
pub fn lemma_rhs<E: Endpoint>(ctx: &MathContext<E>, n: i64, k: i64) -> Option<Interval<E>> {
    let q = ratio(23 - 36 * k * k, 36 * n);
    let h = half_log2_pi_times(ctx, n)?;
    Some(&(&ctx.int(2 * n) - &h) + &(&ctx.rational(&q) * ctx.log2e()))
}

fn theorem_domain(n: i64, k: i64) -> Result<()> {
    if n < 1 || k < 0 || k > n {
        return domain(format!("theorem needs 1 ≤ n and 0 ≤ k ≤ n, got n = {n}, k = {k}"));
    }
    if n > 1 << 24 {
        return domain(format!("n = {n} exceeds the supported range"));
    }
    Ok(())
}

fn lemma_domain(n: i64, k: i64) -> Result<()> {
    if n < 1 || k.abs() > n {
        return domain(format!("lemma needs 1 ≤ n and |k| ≤ n, got n = {n}, k = {k}"));
    }
    if n > 1 << 23 {
        return domain(format!("n = {n} exceeds the supported range"));
    }
    Ok(())
}

/// Enclosure of the log2 of the bound's right-hand side.
pub fn theorem_rhs_log2(n: i64, k: i64, precision: u32) -> Result<CertifiedInterval> {
    theorem_domain(n, k)?;
    Ok(theorem_rhs(&certified_context(precision), n, k).expect("π·n is positive"))
}

/// Enclosure of the log2 of the companion bound's right-hand side.
pub fn lemma_rhs_log2(n: i64, k: i64, precision: u32) -> Result<CertifiedInterval> {
    lemma_domain(n, k)?;
    Ok(lemma_rhs(&certified_context(precision), n, k).expect("π·n is positive"))
}

/// `log2 C(n, k) ≤ theorem_rhs(n, k)` with the binomial supplied.
pub struct TheoremCell<'a> {
    pub n: i64,
    pub k: i64,
    pub count: &'a BigInt,
}

impl Inequality for TheoremCell<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((ctx.log2_int(self.count)?, theorem_rhs(ctx, self.n, self.k)?))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.n, self.k))
    }
}

/// `log2 C(2n, n + k) ≤ lemma_rhs(n, k)` with the binomial supplied.
pub struct LemmaCell<'a> {
    pub n: i64,
    pub k: i64,
    pub count: &'a BigInt,
}

impl Inequality for LemmaCell<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((ctx.log2_int(self.count)?, lemma_rhs(ctx, self.n, self.k)?))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.n, self.k))
    }
}

pub fn check_theorem(n: i64, k: i64) -> Result<BoundVerdict> {
    check_theorem_with(n, k, &PrecisionPolicy::default())
}

pub fn check_theorem_with(n: i64, k: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    theorem_domain(n, k)?;
    let count = binomial(n, k)?;
    Ok(certify(&TheoremCell { n, k, count: &count }, policy))
}

pub fn check_lemma(n: i64, k: i64) -> Result<BoundVerdict> {
    check_lemma_with(n, k, &PrecisionPolicy::default())
}

pub fn check_lemma_with(n: i64, k: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    lemma_domain(n, k)?;
    let count = binomial(2 * n, n + k)?;
    Ok(certify(&LemmaCell { n, k, count: &count }, policy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Status;

    fn contains(i: &CertifiedInterval, x: f64, tol: f64) -> bool {
        i.lo().approx_f64() - tol <= x && x <= i.hi().approx_f64() + tol
    }

    #[test]
    fn rhs_at_small_points() {
        // (4/√π)·e^(23/36)
        let direct = (4.0 / std::f64::consts::PI.sqrt() * (23.0f64 / 36.0).exp()).log2();
        let r = theorem_rhs_log2(2, 1, 53).unwrap();
        assert!(contains(&r, direct, 1e-12), "{r}");
        assert!((direct - 2.0960).abs() < 1e-3);
        let direct = (2.0 / (std::f64::consts::PI / 2.0).sqrt() * (-0.5f64 + 23.0 / 18.0).exp()).log2();
        assert!(contains(&theorem_rhs_log2(1, 0, 53).unwrap(), direct, 1e-12));
    }

    #[test]
    fn gaussian_term_vanishes_at_centre() {
        for n in [2i64, 10, 64, 500] {
            let r = theorem_rhs_log2(n, n / 2, 80).unwrap();
            let nf = n as f64;
            let direct =
                nf - 0.5 * (std::f64::consts::PI * nf / 2.0).log2() + 23.0 * std::f64::consts::LOG2_E / (18.0 * nf);
            assert!(contains(&r, direct, 1e-9 * nf));
        }
    }

    #[test]
    fn rhs_width_meets_precision() {
        for p in [53u32, 100, 200] {
            let r = theorem_rhs_log2(100, 37, p).unwrap();
            assert!(r.width().exponent().unwrap() < -i64::from(p));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(theorem_rhs_log2(0, 0, 53).is_err());
        assert!(check_theorem(3, 4).is_err());
        assert!(check_theorem(3, -1).is_err());
        assert!(check_lemma(3, 4).is_err());
        assert!(check_lemma(0, 0).is_err());
    }

    #[test]
    fn theorem_examples() {
        let v = check_theorem(2, 1).unwrap();
        assert_eq!(v.status, Status::Holds);
        let direct = (4.2751f64 / 2.0).log2();
        assert!(contains(&v.margin, direct, 1e-4), "{}", v.margin);
        assert_eq!(check_theorem(1, 0).unwrap().status, Status::Holds);
        // Brute force over row 6 against f64 evaluation of both sides.
        let row: Vec<_> = (0..=6).map(|k| check_theorem(6, k).unwrap()).collect();
        assert!(row.iter().all(|v| v.holds()));
        let approx = |k: i64| {
            let (n, kf) = (6.0f64, k as f64);
            let rhs = n - 0.5 * (std::f64::consts::PI * n / 2.0).log2()
                + (-2.0 * (kf - n / 2.0).powi(2) / n + 23.0 / (18.0 * n)) * std::f64::consts::LOG2_E;
            rhs - (binomial(6, k).unwrap().to_string().parse::<f64>().unwrap()).log2()
        };
        for k in 0..=6 {
            assert!(contains(&row[k as usize].margin, approx(k), 1e-12));
        }
        let min_k = (0..=6)
            .min_by(|&a, &b| row[a].margin.lo().cmp(row[b].margin.lo()))
            .unwrap();
        assert_eq!(min_k, 1);
        assert_eq!(row[1].margin, row[5].margin);
        let max_k = (0..=6)
            .max_by(|&a, &b| row[a].margin.lo().cmp(row[b].margin.lo()))
            .unwrap();
        assert_eq!(max_k, 3);
    }

    #[test]
    fn lemma_examples() {
        let v = check_lemma(1, 0).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert!(contains(&v.rhs, 4.2751f64.log2(), 1e-4));
        for n in 1..=20 {
            assert!(check_lemma(n, n).unwrap().holds());
            assert!(check_lemma(n, -n).unwrap().holds());
            assert!(check_lemma(n, n).unwrap().rhs.is_positive());
        }
        let v = check_lemma(3, 1).unwrap();
        assert!(v.holds());
        assert!(contains(&v.lhs, 15f64.log2(), 1e-12));
    }

    #[test]
    fn large_rows_stay_on_the_fast_path() {
        let v = check_theorem(2000, 1000).unwrap();
        assert!(v.holds());
        assert_eq!(v.precision_used, 53);
        let v = check_lemma(1000, 0).unwrap();
        assert!(v.holds());
    }
}
