//! Bent continuations of a fixed restriction: exhaustive counts and the
//! upper bound `log2 |B_n(g)| ≤ 2^n (1 − γ_M)`, `M = 2^(n−k)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::function::BooleanFunction;
use super::spectrum::{is_bent_small, wht};
use crate::error::{capability, domain, Error, Result};
use crate::exact::{binomial, certified_context, Endpoint, Interval, LogLinearNumber, MathContext};
use crate::lp::{gamma_formula_in, tune};
use crate::verdict::{certify, BoundVerdict, Inequality, PrecisionPolicy, Status};
use crate::CertifiedInterval;

/// Largest `n` enumerated exhaustively (`2^(2^n)` tables).
pub const MAX_EXHAUSTIVE_VARS: u32 = 4;
/// Largest `n − k` for which the tuned coefficients are computed.
pub const MAX_TUNED_LOG_M: u32 = 12;
/// Largest `n − k` for the closed-form coefficients.
pub const MAX_FORMULA_LOG_M: u32 = 30;

fn check_exhaustive(n: u32) -> Result<()> {
    if n % 2 == 1 {
        return domain(format!("bent functions need an even number of variables, got {n}"));
    }
    if n == 0 {
        return domain("n must be positive");
    }
    if n > MAX_EXHAUSTIVE_VARS {
        return capability(format!(
            "exhaustive enumeration is limited to n ≤ {MAX_EXHAUSTIVE_VARS}, got {n}"
        ));
    }
    Ok(())
}

/// Number of bent functions on `n ∈ {2, 4}` variables.
pub fn count_bent(n: u32) -> Result<u64> {
    check_exhaustive(n)?;
    let total = 1u64 << (1 << n);
    Ok((0..total).into_par_iter().filter(|&t| is_bent_small(n, t)).count() as u64)
}

/// `|B_n(g)|` by enumerating the `2^(2^n − 2^k)` tables that agree with `g`
/// on the first `2^k` inputs.
pub fn count_continuations(g: &BooleanFunction, n: u32) -> Result<u64> {
    check_exhaustive(n)?;
    let k = g.n();
    if k >= n {
        return domain(format!(
            "restriction has {k} variables, continuation needs more than that, got n = {n}"
        ));
    }
    let shift = 1u32 << k;
    let free = (1u64 << n) - u64::from(shift);
    let low = g.word();
    Ok((0..1u64 << free)
        .into_par_iter()
        .filter(|&h| is_bent_small(n, low | h << shift))
        .count() as u64)
}

/// `|B_n(g)|` for every `k`-variable `g` at once, indexed by `g.word()`.
pub fn count_all_continuations(n: u32, k: u32) -> Result<Vec<u64>> {
    check_exhaustive(n)?;
    if k == 0 || k >= n {
        return domain(format!("need 1 ≤ k < n, got k = {k}, n = {n}"));
    }
    let mask = (1u64 << (1 << k)) - 1;
    let mut counts = vec![0u64; 1 << (1 << k)];
    for t in (0..1u64 << (1 << n)).filter(|&t| is_bent_small(n, t)) {
        counts[(t & mask) as usize] += 1;
    }
    Ok(counts)
}

fn check_bound_args(n: u32, k: u32) -> Result<()> {
    if n == 0 || n % 2 == 1 {
        return domain(format!("n must be even and positive, got {n}"));
    }
    if k == 0 || k > n / 2 {
        return domain(format!("need 1 ≤ k ≤ n/2, got k = {k}, n = {n}"));
    }
    Ok(())
}

/// `s_v = 2^((n−2k)/2) · ĝ(v)`: the first entries of the scaled columns of
/// any bent rectangle continuing `g`.
pub fn scaled_first_row(g: &BooleanFunction, n: u32) -> Result<Vec<i64>> {
    check_bound_args(n, g.n())?;
    let scale = 1i64 << ((n - 2 * g.n()) / 2);
    Ok(wht(g).values.into_iter().map(|v| v * scale).collect())
}

/// `Π_v C(M, (M + s_v)/2)`: each scaled column is the spectrum of an
/// `(n−k)`-variable function of weight `(M − s_v)/2`.
pub fn product_bound(g: &BooleanFunction, n: u32) -> Result<BigInt> {
    let m = 1i64 << (n - g.n());
    let mut p = BigInt::one();
    for s in scaled_first_row(g, n)? {
        p *= binomial(m, (m + s) / 2)?;
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaSource {
    Formula,
    Tuned,
}

impl FromStr for GammaSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(GammaSource::Formula),
            "tuned" => Ok(GammaSource::Tuned),
            _ => Err(Error::Parse(format!(
                "gamma source must be `formula` or `tuned`, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for GammaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaSource::Formula => "formula",
            GammaSource::Tuned => "tuned",
        })
    }
}

/// `2^n (1 − γ_M)`: exact with tuned coefficients, an enclosure otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuationBound {
    Exact(LogLinearNumber),
    Enclosure(CertifiedInterval),
}

impl ContinuationBound {
    pub fn enclose<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<Interval<E>> {
        match self {
            ContinuationBound::Exact(x) => Some(x.enclose(ctx)),
            ContinuationBound::Enclosure(_) => None,
        }
    }

    pub fn enclosure(&self, precision: u32) -> CertifiedInterval {
        match self {
            ContinuationBound::Exact(x) => x.enclose_certified(precision),
            ContinuationBound::Enclosure(i) => i.clone(),
        }
    }
}

impl fmt::Display for ContinuationBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuationBound::Exact(x) => write!(f, "{x}"),
            ContinuationBound::Enclosure(i) => write!(f, "{i}"),
        }
    }
}

fn formula_bound_in<E: Endpoint>(ctx: &MathContext<E>, n: u32, k: u32) -> Option<Interval<E>> {
    let gamma = gamma_formula_in(ctx, 1i64 << (n - k))?;
    Some((&ctx.int(1) - &gamma).mul_pow2(i64::from(n)))
}

pub fn continuation_bound(n: u32, k: u32, source: GammaSource, precision: u32) -> Result<ContinuationBound> {
    check_bound_args(n, k)?;
    match source {
        GammaSource::Tuned => {
            if n - k > MAX_TUNED_LOG_M {
                return capability(format!("tuned coefficients limited to n − k ≤ {MAX_TUNED_LOG_M}"));
            }
            let t = tune(1i64 << (n - k))?;
            let one_minus = &LogLinearNumber::from_int(1) - &t.gamma;
            Ok(ContinuationBound::Exact(
                one_minus.scale(&crate::ExactRational::from_integer(BigInt::one() << n)),
            ))
        }
        GammaSource::Formula => {
            if n - k > MAX_FORMULA_LOG_M {
                return capability(format!(
                    "closed-form coefficients limited to n − k ≤ {MAX_FORMULA_LOG_M}"
                ));
            }
            Ok(ContinuationBound::Enclosure(
                formula_bound_in(&*certified_context(precision), n, k).expect("positive arguments"),
            ))
        }
    }
}

struct FormulaSandwich {
    n: u32,
    k: u32,
    count: u64,
    index: i64,
}

impl Inequality for FormulaSandwich {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((
            ctx.log2_int(&BigInt::from(self.count))?,
            formula_bound_in(ctx, self.n, self.k)?,
        ))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((i64::from(self.n), self.index))
    }
}

/// `log2 count ≤ bound`, exactly for tuned bounds. Witness `(n, g_index)`.
fn check_upper(
    n: u32,
    k: u32,
    index: u64,
    count: u64,
    bound: &ContinuationBound,
    policy: &PrecisionPolicy,
) -> BoundVerdict {
    let witness = Some((i64::from(n), index as i64));
    match bound {
        ContinuationBound::Exact(b) => {
            let lhs = LogLinearNumber::log2_u64(count);
            let margin = b - &lhs;
            let status = if margin.signum().is_lt() {
                Status::Fails
            } else {
                Status::Holds
            };
            let ctx = certified_context(policy.start);
            let mut v = BoundVerdict::exact(status, lhs.enclose(&*ctx), b.enclose(&*ctx), policy.start);
            v.margin = margin.enclose(&*ctx);
            v.with_witness(witness)
        }
        ContinuationBound::Enclosure(_) => certify(
            &FormulaSandwich {
                n,
                k,
                count,
                index: index as i64,
            },
            policy,
        ),
    }
}

#[derive(Debug, Clone)]
pub struct ContinuationRow {
    pub n: u32,
    pub g_index: u64,
    pub g: BooleanFunction,
    pub count: u64,
    pub scaled_first_row: Vec<i64>,
    pub product_bound: BigInt,
    /// `log2 count ≤ bound`.
    pub upper: BoundVerdict,
}

impl ContinuationRow {
    /// `Σ_v s_v² = M·2^k = 2^n`.
    pub fn parseval_ok(&self) -> bool {
        self.scaled_first_row
            .iter()
            .map(|s| i128::from(*s).pow(2))
            .sum::<i128>()
            == 1i128 << self.n
    }

    pub fn status(&self) -> Status {
        let exact_ok = self.count >= 1 && BigInt::from(self.count) <= self.product_bound && self.parseval_ok();
        let s = if exact_ok { Status::Holds } else { Status::Fails };
        s.worst(self.upper.status)
    }
}

pub const STUDY_CSV_HEADER: &str = "g_index,count,bound_log2";

#[derive(Debug, Clone)]
pub struct ContinuationStudy {
    pub n: u32,
    pub k: u32,
    pub source: GammaSource,
    pub bound: ContinuationBound,
    pub rows: Vec<ContinuationRow>,
}

impl ContinuationStudy {
    pub fn status(&self) -> Status {
        self.rows.iter().fold(Status::Holds, |s, r| s.worst(r.status()))
    }

    pub fn total(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let b = self.bound.enclosure(128).mid_decimal(20);
        self.rows
            .iter()
            .map(|r| format!("{},{},{}", r.g_index, r.count, b))
            .collect()
    }
}

/// Every `k`-variable `g` against its exact continuation count, the
/// counting-step product bound and `continuation_bound(n, k, source)`.
pub fn continuation_study(n: u32, k: u32, source: GammaSource, policy: &PrecisionPolicy) -> Result<ContinuationStudy> {
    check_bound_args(n, k)?;
    let counts = count_all_continuations(n, k)?;
    let bound = continuation_bound(n, k, source, policy.start.max(64))?;
    let rows = counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            let g = BooleanFunction::from_word(k, i as u64)?;
            Ok(ContinuationRow {
                n,
                g_index: i as u64,
                scaled_first_row: scaled_first_row(&g, n)?,
                product_bound: product_bound(&g, n)?,
                upper: check_upper(n, k, i as u64, count, &bound, policy),
                g,
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ContinuationStudy {
        n,
        k,
        source,
        bound,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bent::biaffine;

    #[test]
    fn bent_counts() {
        assert_eq!(count_bent(2).unwrap(), 8);
        assert_eq!(count_bent(4).unwrap(), 896);
        assert!(matches!(count_bent(3), Err(Error::Domain(_))));
        assert!(matches!(count_bent(6), Err(Error::Capability(_))));
    }

    #[test]
    fn continuation_counts() {
        let zero1 = BooleanFunction::from_word(1, 0).unwrap();
        assert_eq!(count_continuations(&zero1, 2).unwrap(), 2);
        let all = count_all_continuations(4, 2).unwrap();
        assert_eq!(all.iter().sum::<u64>(), 896);
        for (i, &c) in all.iter().enumerate() {
            let g = BooleanFunction::from_word(2, i as u64).unwrap();
            assert_eq!(count_continuations(&g, 4).unwrap(), c);
            assert!(c >= 1);
        }
        assert_eq!(count_all_continuations(4, 1).unwrap().iter().sum::<u64>(), 896);
        assert_eq!(count_all_continuations(4, 3).unwrap().iter().sum::<u64>(), 896);
        assert!(matches!(count_continuations(&zero1, 6), Err(Error::Capability(_))));
        let g4 = BooleanFunction::zero(4).unwrap();
        assert!(count_continuations(&g4, 4).is_err());
    }

    #[test]
    fn bound_values() {
        let b = continuation_bound(4, 2, GammaSource::Tuned, 64).unwrap();
        assert_eq!(b, ContinuationBound::Exact(LogLinearNumber::from_int(8)));
        let b = continuation_bound(2, 1, GammaSource::Tuned, 64).unwrap();
        assert_eq!(b, ContinuationBound::Exact(LogLinearNumber::from_int(1)));
        let f = continuation_bound(4, 2, GammaSource::Formula, 64)
            .unwrap()
            .enclosure(64);
        assert!(f.lo().approx_f64() > 9.65 && f.hi().approx_f64() < 9.66, "{f}");
        assert!(continuation_bound(4, 3, GammaSource::Tuned, 64).is_err());
        assert!(continuation_bound(5, 2, GammaSource::Formula, 64).is_err());
        assert!(matches!(
            continuation_bound(40, 2, GammaSource::Tuned, 64),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            continuation_bound(40, 2, GammaSource::Formula, 64),
            Err(Error::Capability(_))
        ));
        assert!(continuation_bound(40, 20, GammaSource::Formula, 64).is_ok());
    }

    #[test]
    fn first_row_identity_and_product_bound() {
        for k in 1..=2 {
            for t in 0..1u64 << (1 << k) {
                let g = BooleanFunction::from_word(k, t).unwrap();
                let s = scaled_first_row(&g, 4).unwrap();
                let m = 1i64 << (4 - k);
                assert_eq!(s.iter().map(|v| v * v).sum::<i64>(), m << k);
                // The biaffine continuation (k = 2) realises these columns.
                if k == 2 {
                    let f = biaffine(&g).unwrap();
                    let r = crate::bent::rectangle(&f, 2, 2).unwrap();
                    assert_eq!(r.row(0), s.as_slice());
                }
                let p = product_bound(&g, 4).unwrap();
                assert!(BigInt::from(count_continuations(&g, 4).unwrap()) <= p);
            }
        }
    }

    #[test]
    fn studies_hold() {
        let p = PrecisionPolicy::default();
        for k in 1..=2 {
            for src in [GammaSource::Tuned, GammaSource::Formula] {
                let s = continuation_study(4, k, src, &p).unwrap();
                assert_eq!(s.rows.len(), 1 << (1 << k));
                assert_eq!(s.total(), 896);
                assert_eq!(s.status(), Status::Holds, "k = {k}, {src}");
                assert!(s.rows.iter().all(|r| r.parseval_ok()));
            }
        }
        let s = continuation_study(2, 1, GammaSource::Tuned, &p).unwrap();
        assert_eq!(s.rows.iter().map(|r| r.count).collect::<Vec<_>>(), vec![2, 2, 2, 2]);
        assert_eq!(s.status(), Status::Holds);
        assert_eq!(
            s.csv_rows()[0],
            format!(
                "0,2,{}",
                LogLinearNumber::from_int(1).enclose_certified(128).mid_decimal(20)
            )
        );
    }

    #[test]
    fn gamma_source_parsing() {
        assert_eq!("tuned".parse::<GammaSource>().unwrap(), GammaSource::Tuned);
        assert_eq!("formula".parse::<GammaSource>().unwrap().to_string(), "formula");
        assert!("other".parse::<GammaSource>().is_err());
    }
}
