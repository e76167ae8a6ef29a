//! Optimal coefficients `(α, β)` for the pointwise bound
//!
//! ```text
//! C(M, (M + s)/2) ≤ 2^(M − α·s² − β)      s ≡ M (mod 2), |s| ≤ M
//! ```
//!
//! maximising `γ = α + β/M`. With `q = s²` and `L(q) = log2 C(M, (M+s)/2)`
//! the problem is: minimise `c₀ + c₁·M` subject to `L(q) ≤ c₀ + c₁·q`. Its
//! optimum is the least concave majorant of the points `(q, L)` evaluated at
//! `q = M`, so the binding constraints are the ends of the upper hull edge
//! over `M`. All hull arithmetic is exact in [`LogLinearNumber`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{domain, Result};
use crate::exact::{binomial, certified_context, Endpoint, Interval, LogLinearNumber, MathContext};
use crate::verdict::{certify, BoundVerdict, Inequality, PrecisionPolicy, Status};
use crate::{CertifiedInterval, ExactInt};

/// Precision of the enclosures stored alongside exact values.
const ENCLOSURE_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintPoint {
    pub s: i64,
    pub q: i64,
    pub count: ExactInt,
    pub log2: LogLinearNumber,
    pub enclosure: CertifiedInterval,
}

fn check_m(m: i64) -> Result<()> {
    if m < 2 || m % 2 != 0 {
        return domain(format!("M must be even and at least 2, got {m}"));
    }
    if m > 1 << 20 {
        return domain(format!("M = {m} is too large"));
    }
    Ok(())
}

/// Points `(q = s², L = log2 C(M, (M+s)/2))` for `s = 0, 2, …, M`; `±s`
/// share one point.
pub fn constraint_points(m: i64) -> Result<Vec<ConstraintPoint>> {
    check_m(m)?;
    let ctx = certified_context(ENCLOSURE_BITS);
    (0..=m)
        .step_by(2)
        .map(|s| {
            let j = (m + s) / 2;
            let log2 = LogLinearNumber::log2_binomial(m as u64, j as u64);
            Ok(ConstraintPoint {
                s,
                q: s * s,
                count: binomial(m, j)?,
                enclosure: log2.enclose(&*ctx),
                log2,
            })
        })
        .collect()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Sign of the cross product deciding whether `b` lies above the chord
/// from `a` to `c` (positive: above).
fn above_chord(a: &ConstraintPoint, b: &ConstraintPoint, c: &ConstraintPoint) -> Ordering {
    let lhs = (&b.log2 - &a.log2).scale(&int(c.q - a.q));
    let rhs = (&c.log2 - &a.log2).scale(&int(b.q - a.q));
    lhs.cmp_exact(&rhs)
}

/// Vertices of the upper concave hull in increasing `q`; collinear points
/// are kept.
pub fn upper_hull(points: &[ConstraintPoint]) -> Vec<ConstraintPoint> {
    let mut hull: Vec<ConstraintPoint> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 && above_chord(&hull[hull.len() - 2], &hull[hull.len() - 1], p) == Ordering::Less {
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunedTuple {
    pub m: i64,
    pub alpha: LogLinearNumber,
    pub beta: LogLinearNumber,
    pub gamma: LogLinearNumber,
    pub binding: (i64, i64),
}

/// `(α, β)` of the line through two constraint points.
fn line_through(m: i64, a: &ConstraintPoint, b: &ConstraintPoint) -> (LogLinearNumber, LogLinearNumber) {
    let alpha = (&a.log2 - &b.log2).scale(&BigRational::new(BigInt::one(), BigInt::from(b.q - a.q)));
    let c0 = &a.log2 + &alpha.scale(&int(a.q));
    let beta = &LogLinearNumber::from_int(m) - &c0;
    (alpha, beta)
}

pub fn gamma_of(m: i64, alpha: &LogLinearNumber, beta: &LogLinearNumber) -> LogLinearNumber {
    alpha + &beta.scale(&BigRational::new(BigInt::one(), BigInt::from(m)))
}

/// The optimal tuple: the hull edge over `q = M`, taking the edge to the
/// right when `M` is itself a vertex.
pub fn tune(m: i64) -> Result<TunedTuple> {
    let points = constraint_points(m)?;
    let hull = upper_hull(&points);
    let i = hull
        .windows(2)
        .position(|w| w[0].q <= m && m < w[1].q)
        .expect("0 ≤ M < M² for M ≥ 2");
    let (a, b) = (&hull[i], &hull[i + 1]);
    let (alpha, beta) = line_through(m, a, b);
    let gamma = gamma_of(m, &alpha, &beta);
    Ok(TunedTuple {
        m,
        alpha,
        beta,
        gamma,
        binding: (a.q, b.q),
    })
}

/// Exact check of `L(s²) ≤ M − α·s² − β` for every admissible `s`. Fails
/// carry the witness `(M, s)` for the smallest failing `s ≥ 0` (the check
/// is symmetric in `±s`). Tight points hold with a zero margin.
pub fn verify_tuple(m: i64, alpha: &LogLinearNumber, beta: &LogLinearNumber) -> Result<BoundVerdict> {
    let points = constraint_points(m)?;
    let ctx = certified_context(ENCLOSURE_BITS);
    let mut worst: Option<(LogLinearNumber, &ConstraintPoint)> = None;
    let mut failing = None;
    for p in &points {
        let rhs = &(&LogLinearNumber::from_int(m) - &alpha.scale(&int(p.q))) - beta;
        let margin = &rhs - &p.log2;
        if failing.is_none() && margin.signum() == Ordering::Less {
            failing = Some(p.s);
        }
        if worst
            .as_ref()
            .is_none_or(|(w, _)| margin.cmp_exact(w) == Ordering::Less)
        {
            worst = Some((margin, p));
        }
    }
    let (margin, p) = worst.expect("at least two points");
    let rhs = &margin + &p.log2;
    let status = if failing.is_some() {
        Status::Fails
    } else {
        Status::Holds
    };
    let mut v = BoundVerdict::exact(status, p.enclosure.clone(), rhs.enclose(&*ctx), ENCLOSURE_BITS);
    v.margin = margin.enclose(&*ctx);
    Ok(v.with_witness(Some((m, failing.unwrap_or(p.s)))))
}

/// Every `s ≥ 0` at which `(α, β)` is tight (zero margin).
pub fn tight_points(m: i64, alpha: &LogLinearNumber, beta: &LogLinearNumber) -> Result<Vec<i64>> {
    Ok(constraint_points(m)?
        .into_iter()
        .filter(|p| {
            let rhs = &(&LogLinearNumber::from_int(m) - &alpha.scale(&int(p.q))) - beta;
            (&rhs - &p.log2).signum() == Ordering::Equal
        })
        .map(|p| p.s)
        .collect())
}

/// `α = log2 e/(2M)`.
pub fn theorem_alpha<E: Endpoint>(ctx: &MathContext<E>, m: i64) -> Interval<E> {
    ctx.log2e().checked_div(&ctx.int(2 * m)).expect("M > 0")
}

/// `β = ½(log2 π + log2 M − 1) − 23·log2 e/(18M)`.
pub fn theorem_beta<E: Endpoint>(ctx: &MathContext<E>, m: i64) -> Option<Interval<E>> {
    let lp = ctx.log2(ctx.pi())?;
    let lm = ctx.log2_int(&BigInt::from(m))?;
    let half = (&(&lp + &lm) - &ctx.int(1)).mul_pow2(-1);
    let corr = ctx.log2e().scale_i64(23).checked_div(&ctx.int(18 * m))?;
    Some(&half - &corr)
}

/// `γ = (log2 e + log2 π + log2 M − 1)/(2M) − 23·log2 e/(18M²)`.
pub fn gamma_formula_in<E: Endpoint>(ctx: &MathContext<E>, m: i64) -> Option<Interval<E>> {
    let lp = ctx.log2(ctx.pi())?;
    let lm = ctx.log2_int(&BigInt::from(m))?;
    let num = &(&(ctx.log2e() + &lp) + &lm) - &ctx.int(1);
    let a = num.checked_div(&ctx.int(2 * m))?;
    let b = ctx.log2e().scale_i64(23).checked_div(&ctx.int(18 * m * m))?;
    Some(&a - &b)
}

pub fn gamma_formula(m: i64, precision: u32) -> Result<CertifiedInterval> {
    if m < 1 {
        return domain(format!("M must be positive, got {m}"));
    }
    Ok(gamma_formula_in(&*certified_context(precision), m).expect("positive arguments"))
}

struct InducedPoint<'a> {
    m: i64,
    p: &'a ConstraintPoint,
}

impl Inequality for InducedPoint<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        let rhs = &(&ctx.int(self.m) - &theorem_alpha(ctx, self.m).scale_i64(self.p.q)) - &theorem_beta(ctx, self.m)?;
        Some((self.p.log2.enclose(ctx), rhs))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.m, self.p.s))
    }
}

/// Certified pointwise check of the coefficients induced by the main bound.
pub fn verify_theorem_induced(m: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    let points = constraint_points(m)?;
    let mut g = crate::verdict::GridSummary::default();
    for p in &points {
        g.push(certify(&InducedPoint { m, p }, policy));
    }
    Ok(g.into_verdict())
}

struct Dominance<'a> {
    m: i64,
    tuned: &'a LogLinearNumber,
}

impl Inequality for Dominance<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((gamma_formula_in(ctx, self.m)?, self.tuned.enclose(ctx)))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.m, 0))
    }
}

/// Certified `gamma_formula(M) ≤ tune(M).gamma`.
pub fn check_dominance(m: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    let t = tune(m)?;
    Ok(certify(&Dominance { m, tuned: &t.gamma }, policy))
}

/// A row of the published coefficient table, transcribed as printed.
#[derive(Debug, Clone)]
pub struct PublishedRow {
    pub m: i64,
    pub alpha: LogLinearNumber,
    pub beta: LogLinearNumber,
    pub gamma: LogLinearNumber,
}

pub fn published_table() -> Vec<PublishedRow> {
    let ll = |s: &str| s.parse::<LogLinearNumber>().expect("literal");
    vec![
        PublishedRow {
            m: 2,
            alpha: ll("1/2"),
            beta: ll("1"),
            gamma: ll("3/4"),
        },
        PublishedRow {
            m: 4,
            alpha: ll("1/6"),
            beta: ll("4/3"),
            gamma: ll("1/2"),
        },
        PublishedRow {
            m: 8,
            alpha: ll("1/12"),
            beta: ll("14/3 - log2(7)"),
            gamma: ll("2/3 - 1/8*log2(7)"),
        },
    ]
}

/// Comparison of one published row against the computed optimum.
#[derive(Debug, Clone)]
pub struct RowAudit {
    pub published: PublishedRow,
    pub tuned: TunedTuple,
    pub alpha_matches: bool,
    pub beta_matches: bool,
    pub gamma_matches: bool,
    /// Whether the printed `γ` equals the printed `α + β/M`.
    pub identity_holds: bool,
    /// Pointwise validity of the printed `(α, β)`.
    pub feasibility: BoundVerdict,
}

impl RowAudit {
    pub fn consistent(&self) -> bool {
        self.alpha_matches && self.beta_matches && self.gamma_matches && self.identity_holds && self.feasibility.holds()
    }
}

pub fn audit_published_table() -> Result<Vec<RowAudit>> {
    published_table()
        .into_iter()
        .map(|row| {
            let tuned = tune(row.m)?;
            let feasibility = verify_tuple(row.m, &row.alpha, &row.beta)?;
            Ok(RowAudit {
                alpha_matches: tuned.alpha == row.alpha,
                beta_matches: tuned.beta == row.beta,
                gamma_matches: tuned.gamma == row.gamma,
                identity_holds: gamma_of(row.m, &row.alpha, &row.beta) == row.gamma,
                feasibility,
                tuned,
                published: row,
            })
        })
        .collect()
}

/// An integer that serialises as a JSON number when it fits in 64 bits and
/// as a decimal string otherwise.
struct JsonInt<'a>(&'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

/// `{a_num, a_den, c_num, c_den, m}`, or `m_num`/`m_den` in place of `m`
/// when the value needs a ratio inside the logarithm.
pub struct LogLinearJson<'a>(pub &'a LogLinearNumber);

impl Serialize for LogLinearJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (a, c, num, den) = self.0.log_ratio_form();
        let single = den.is_one();
        let mut st = s.serialize_struct("LogLinear", if single { 5 } else { 6 })?;
        st.serialize_field("a_num", &JsonInt(a.numer()))?;
        st.serialize_field("a_den", &JsonInt(a.denom()))?;
        st.serialize_field("c_num", &JsonInt(c.numer()))?;
        st.serialize_field("c_den", &JsonInt(c.denom()))?;
        let (num, den) = (BigInt::from(num), BigInt::from(den));
        if single {
            st.serialize_field("m", &JsonInt(&num))?;
        } else {
            st.serialize_field("m_num", &JsonInt(&num))?;
            st.serialize_field("m_den", &JsonInt(&den))?;
        }
        st.end()
    }
}

impl Serialize for TunedTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TunedTuple", 6)?;
        st.serialize_field("M", &self.m)?;
        st.serialize_field("alpha", &LogLinearJson(&self.alpha))?;
        st.serialize_field("beta", &LogLinearJson(&self.beta))?;
        st.serialize_field("gamma", &LogLinearJson(&self.gamma))?;
        st.serialize_field("gamma_decimal", &self.gamma_decimal())?;
        st.serialize_field("binding", &[self.binding.0, self.binding.1])?;
        st.end()
    }
}

impl TunedTuple {
    /// 20 significant digits of `γ`.
    pub fn gamma_decimal(&self) -> String {
        self.gamma.enclose_certified(128).mid_decimal(20)
    }
}

impl fmt::Display for TunedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M = {}: alpha = {}, beta = {}, gamma = {} ≈ {}, binding q = ({}, {})",
            self.m,
            self.alpha,
            self.beta,
            self.gamma,
            self.gamma_decimal(),
            self.binding.0,
            self.binding.1
        )
    }
}
