//! Bounded sum-of-squares counts `r_{s,n}(N)`: the number of
//! `(a_1, …, a_s)` with `|a_i| ≤ n` and `Σ a_i² = N`, and the certified
//! lower bound on their Gaussian-weighted total.
//!
//! Only the bounded counts are implemented. Unbounded `r_s(N)` and
//! lattice-point asymptotics are out of scope.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{capability, domain, Result};
use crate::exact::{binomial, Endpoint, Interval, MathContext};
use crate::verdict::{certify, BoundVerdict, Inequality, PrecisionPolicy};
use crate::ExactInt;

pub const MAX_DIMENSION: u32 = 8;
pub const MAX_MAGNITUDE: u64 = 1000;
/// Upper limit on convolution cell updates, `Σ_j j·n²·(n+1)`.
pub const WORK_BUDGET: u64 = 4_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCountTable {
    pub s: u32,
    pub n: u64,
    pub counts: Vec<ExactInt>,
}

impl RepCountTable {
    /// `r_{s,n}(N)`, zero beyond `s·n²`.
    pub fn get(&self, big_n: u64) -> ExactInt {
        self.counts.get(big_n as usize).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn total(&self) -> ExactInt {
        self.counts.iter().sum()
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{i},{c}"))
            .collect()
    }
}

fn convolution_work(s: u32, n: u64) -> u64 {
    (2..=u64::from(s)).map(|j| j * n * n * (n + 1)).sum()
}

/// `s`-fold convolution of the one-dimensional square counts.
pub fn r_table(s: u32, n: u64) -> Result<RepCountTable> {
    if s == 0 || n == 0 {
        return domain(format!("need s ≥ 1 and n ≥ 1, got s = {s}, n = {n}"));
    }
    if s > MAX_DIMENSION || n > MAX_MAGNITUDE || convolution_work(s, n) > WORK_BUDGET {
        return capability(format!(
            "table for s = {s}, n = {n} exceeds the budget (s ≤ {MAX_DIMENSION}, n ≤ {MAX_MAGNITUDE}, {WORK_BUDGET} updates)"
        ));
    }
    // (2n + 1)^s < 2^127 within the caps, so u128 is exact.
    let sq = n * n;
    let mut cur = vec![0u128; sq as usize + 1];
    cur[0] = 1;
    for a in 1..=n {
        cur[(a * a) as usize] = 2;
    }
    let base = cur.clone();
    for j in 2..=u64::from(s) {
        let len = (j * sq) as usize + 1;
        let prev = &cur;
        let next: Vec<u128> = (0..len)
            .into_par_iter()
            .with_min_len(1024)
            .map(|big_n| {
                let mut acc = 0u128;
                for a in 0..=n {
                    let q = (a * a) as usize;
                    if q > big_n {
                        break;
                    }
                    if let Some(p) = prev.get(big_n - q) {
                        acc += base[q] * p;
                    }
                }
                acc
            })
            .collect();
        cur = next;
    }
    Ok(RepCountTable {
        s,
        n,
        counts: cur.into_iter().map(BigInt::from).collect(),
    })
}

/// `Σ_N r(N)·q^N` by Horner's rule, `q = e^(−1/n)`.
fn weighted_sum<E: Endpoint>(ctx: &MathContext<E>, t: &RepCountTable) -> Interval<E> {
    let q = ctx.exp(&ctx.ratio(-1, t.n as i64));
    let mut acc = ctx.int(0);
    for c in t.counts.iter().rev() {
        acc = &(&acc * &q) + &ctx.big(c);
    }
    acc
}

/// `(πn)^(s/2) · e^(−23s/(36n))`.
fn prop3_rhs<E: Endpoint>(ctx: &MathContext<E>, s: u32, n: u64) -> Option<Interval<E>> {
    let pn = ctx.pi() * &ctx.int(n as i64);
    let root = ctx.sqrt(&pn)?;
    let pow = if s.is_multiple_of(2) {
        pn.powi(u64::from(s / 2))
    } else {
        &pn.powi(u64::from(s / 2)) * &root
    };
    let e = ctx.exp(&ctx.ratio(-23 * i64::from(s), 36 * n as i64));
    Some(&pow * &e)
}

/// `rhs ≤ Σ_N r(N) e^(−N/n)`, so the verdict's `lhs` is the closed form
/// and its `rhs` the weighted sum.
struct Prop3Cell<'a> {
    table: &'a RepCountTable,
}

impl Inequality for Prop3Cell<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((
            prop3_rhs(ctx, self.table.s, self.table.n)?,
            weighted_sum(ctx, self.table),
        ))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((i64::from(self.table.s), self.table.n as i64))
    }
}

pub fn prop3_check_table(t: &RepCountTable, policy: &PrecisionPolicy) -> BoundVerdict {
    certify(&Prop3Cell { table: t }, policy)
}

/// Certified `Σ_N r_{s,n}(N) e^(−N/n) ≥ (πn)^(s/2) e^(−23s/(36n))`.
pub fn prop3_check(s: u32, n: u64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    Ok(prop3_check_table(&r_table(s, n)?, policy))
}

/// `{s, n, lhs_lo, lhs_hi, rhs_lo, rhs_hi, status}` with `lhs` the
/// weighted sum and `rhs` the closed form.
#[derive(Debug, Clone, Serialize)]
pub struct Prop3Report {
    pub s: u32,
    pub n: u64,
    pub lhs_lo: String,
    pub lhs_hi: String,
    pub rhs_lo: String,
    pub rhs_hi: String,
    pub status: crate::Status,
}

impl Prop3Report {
    pub fn new(s: u32, n: u64, v: &BoundVerdict) -> Self {
        Prop3Report {
            s,
            n,
            lhs_lo: v.rhs.lo_decimal(20),
            lhs_hi: v.rhs.hi_decimal(20),
            rhs_lo: v.lhs.lo_decimal(20),
            rhs_hi: v.lhs.hi_decimal(20),
            status: v.status,
        }
    }
}

/// `2^(−2n) C(2n, n + a)`: probability that a sum of `2n` fair ±1 steps
/// equals `2a`.
pub fn axis_probability(n: u64, a: i64) -> Result<BigRational> {
    let c = binomial(2 * n as i64, n as i64 + a)?;
    Ok(BigRational::new(c, BigInt::one() << (2 * n)))
}

/// `Σ_{|a| ≤ n} 2^(−2n) C(2n, n + a)`; equals one.
pub fn axis_mass(n: u64) -> Result<BigRational> {
    (-(n as i64)..=n as i64).map(|a| axis_probability(n, a)).sum()
}

struct PointCell<'a> {
    n: u64,
    point: &'a [i64],
    prob: BigRational,
}

impl Inequality for PointCell<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        let s = self.point.len() as i64;
        let n = self.n as i64;
        let big_n: i64 = self.point.iter().map(|a| a * a).sum();
        let pn = ctx.pi() * &ctx.int(n);
        let root = ctx.sqrt(&pn)?;
        let denom = root.powi(s as u64);
        let e = ctx.exp(&ctx.ratio(-36 * big_n + 23 * s, 36 * n));
        Some((ctx.rational(&self.prob), e.checked_div(&denom)?))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.point.len() as i64, self.n as i64))
    }
}

/// `Π_i 2^(−2n) C(2n, n + a_i) ≤ (πn)^(−s/2) exp(−N/n + 23s/(36n))` with
/// `N = Σ a_i²`.
pub fn pointwise_probability_check(n: u64, point: &[i64], policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    if n == 0 || point.is_empty() {
        return domain("need n ≥ 1 and a non-empty point");
    }
    if let Some(a) = point.iter().find(|a| a.unsigned_abs() > n) {
        return domain(format!("coordinate {a} exceeds n = {n} in magnitude"));
    }
    let mut prob = BigRational::one();
    for &a in point {
        prob *= axis_probability(n, a)?;
    }
    Ok(certify(&PointCell { n, point, prob }, policy))
}
