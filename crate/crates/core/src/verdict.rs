//! Certified outcomes of inequality checks and the precision escalation
//! policy that produces them.

use std::fmt;

use serde::Serialize;

use crate::exact::{certified_context, fast_context, Endpoint, Interval, MathContext};
use crate::CertifiedInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    Holds,
    Inconclusive,
    Fails,
}

impl Status {
    /// Process exit code: 0 holds, 1 fails, 2 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Inconclusive => 2,
        }
    }

    /// The more severe of two outcomes: any failure dominates, then any
    /// undecided cell.
    pub fn worst(self, o: Status) -> Status {
        self.max(o)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::Inconclusive => "Inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Precision schedule for certified comparisons.
///
/// An optional hardware-precision pass comes first; undecided comparisons
/// then run with dyadic endpoints at `start` bits, doubling up to `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub cap: u32,
    pub fast_path: bool,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start: 64,
            cap: 4096,
            fast_path: true,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start: u32, cap: u32) -> Self {
        PrecisionPolicy {
            start: start.max(2),
            cap: cap.max(start.max(2)),
            fast_path: true,
        }
    }

    /// Dyadic precisions tried in order.
    pub fn schedule(&self) -> impl Iterator<Item = u32> + '_ {
        let mut next = Some(self.start.max(2));
        std::iter::from_fn(move || {
            let cur = next?;
            next = (cur < self.cap).then(|| cur.saturating_mul(2).min(self.cap));
            Some(cur)
        })
    }
}

/// Certified result of checking `lhs ≤ rhs`.
///
/// `margin` encloses `rhs − lhs`. A strict positive margin gives `Holds`, a
/// strictly negative one `Fails`. Inequalities decided by exact arithmetic
/// may also hold with a point margin of zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundVerdict {
    pub status: Status,
    pub margin: CertifiedInterval,
    pub lhs: CertifiedInterval,
    pub rhs: CertifiedInterval,
    pub precision_used: u32,
    pub witness: Option<(i64, i64)>,
}

impl BoundVerdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    /// Verdict for intervals already computed; `Inconclusive` if the margin
    /// straddles zero.
    pub fn from_sides(lhs: CertifiedInterval, rhs: CertifiedInterval, precision_used: u32) -> Self {
        let margin = &rhs - &lhs;
        let status = decide(&margin).unwrap_or(Status::Inconclusive);
        BoundVerdict {
            status,
            margin,
            lhs,
            rhs,
            precision_used,
            witness: None,
        }
    }

    /// Verdict fixed by exact reasoning; `margin` must enclose `rhs − lhs`.
    pub fn exact(status: Status, lhs: CertifiedInterval, rhs: CertifiedInterval, precision_used: u32) -> Self {
        let margin = &rhs - &lhs;
        BoundVerdict {
            status,
            margin,
            lhs,
            rhs,
            precision_used,
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: Option<(i64, i64)>) -> Self {
        self.witness = w;
        self
    }

    /// Aggregate two verdicts: the worse status wins, ties go to the smaller
    /// margin lower end, then to the smaller witness, so the fold is
    /// independent of evaluation order.
    pub fn combine(self, o: BoundVerdict) -> BoundVerdict {
        let key = |v: &BoundVerdict| (std::cmp::Reverse(v.status), v.margin.lo().clone(), v.witness);
        let (a, b) = (key(&self), key(&o));
        let mut keep = if b < a { o.clone() } else { self.clone() };
        keep.precision_used = self.precision_used.max(o.precision_used);
        keep
    }
}

fn decide<E: Endpoint>(margin: &Interval<E>) -> Option<Status> {
    if margin.is_positive() {
        Some(Status::Holds)
    } else if margin.is_negative() {
        Some(Status::Fails)
    } else {
        None
    }
}

/// An inequality `lhs ≤ rhs` that can be enclosed at any precision.
pub trait Inequality: Sync {
    /// Enclosures of both sides, `None` if this precision cannot separate
    /// the domain conditions (e.g. a logarithm argument straddling zero).
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)>;

    fn witness(&self) -> Option<(i64, i64)> {
        None
    }
}

fn to_verdict<E: Endpoint>(lhs: Interval<E>, rhs: Interval<E>, status: Status, prec: u32) -> Option<BoundVerdict> {
    let lhs = lhs.to_certified()?;
    let rhs = rhs.to_certified()?;
    Some(BoundVerdict::exact(status, lhs, rhs, prec))
}

fn attempt<I: Inequality + ?Sized, E: Endpoint>(ineq: &I, ctx: &MathContext<E>, prec: u32) -> Option<BoundVerdict> {
    let (lhs, rhs) = ineq.sides(ctx)?;
    let status = decide(&(&rhs - &lhs))?;
    to_verdict(lhs, rhs, status, prec)
}

/// Decide `ineq` under `policy`, escalating precision until the margin
/// excludes zero or the cap is reached.
pub fn certify<I: Inequality + ?Sized>(ineq: &I, policy: &PrecisionPolicy) -> BoundVerdict {
    if policy.fast_path {
        if let Some(v) = attempt(ineq, fast_context(), 53) {
            return v.with_witness(ineq.witness());
        }
    }
    let mut last = None;
    for prec in policy.schedule() {
        let ctx = certified_context(prec);
        match ineq.sides(&*ctx) {
            Some((lhs, rhs)) => {
                let margin = &rhs - &lhs;
                if let Some(status) = decide(&margin) {
                    return BoundVerdict::exact(status, lhs, rhs, prec).with_witness(ineq.witness());
                }
                last = Some((lhs, rhs, prec));
            }
            None => last = None,
        }
    }
    let (lhs, rhs, prec) = last.unwrap_or_else(|| {
        let unbounded = Interval::new(crate::Dyadic::from_i64(-1), crate::Dyadic::from_i64(1), policy.cap);
        (unbounded.clone(), unbounded, policy.cap)
    });
    BoundVerdict::exact(Status::Inconclusive, lhs, rhs, prec).with_witness(ineq.witness())
}

/// Summary of many certified checks.
#[derive(Debug, Clone)]
pub struct GridSummary {
    pub checked: u64,
    pub status: Status,
    pub failures: Vec<(i64, i64)>,
    pub undecided: Vec<(i64, i64)>,
    /// The verdict with the smallest margin lower end (or the first failure).
    pub tightest: Option<BoundVerdict>,
}

impl Default for GridSummary {
    fn default() -> Self {
        GridSummary {
            checked: 0,
            status: Status::Holds,
            failures: Vec::new(),
            undecided: Vec::new(),
            tightest: None,
        }
    }
}

impl GridSummary {
    pub fn push(&mut self, v: BoundVerdict) {
        self.checked += 1;
        self.status = self.status.worst(v.status);
        let w = v.witness.unwrap_or((0, 0));
        match v.status {
            Status::Fails => self.failures.push(w),
            Status::Inconclusive => self.undecided.push(w),
            Status::Holds => {}
        }
        self.tightest = Some(match self.tightest.take() {
            None => v,
            Some(t) => t.combine(v),
        });
    }

    /// Merge summaries of disjoint cell sets; failure lists are sorted so
    /// the result does not depend on how cells were partitioned.
    pub fn merge(mut self, o: GridSummary) -> GridSummary {
        self.checked += o.checked;
        self.status = self.status.worst(o.status);
        self.failures.extend(o.failures);
        self.failures.sort_unstable();
        self.undecided.extend(o.undecided);
        self.undecided.sort_unstable();
        self.tightest = match (self.tightest, o.tightest) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => Some(a.combine(b)),
        };
        self
    }

    /// Collapse to one verdict; an empty grid holds vacuously.
    pub fn into_verdict(self) -> BoundVerdict {
        match self.tightest {
            Some(mut v) => {
                v.status = self.status;
                if let Some(w) = self.failures.first().or(self.undecided.first()) {
                    if v.witness != Some(*w) && self.status != Status::Holds {
                        v.witness = Some(*w);
                    }
                }
                v
            }
            None => vacuous(),
        }
    }
}

/// Verdict of a check over an empty grid.
pub fn vacuous() -> BoundVerdict {
    let z = CertifiedInterval::zero(2);
    BoundVerdict::exact(Status::Holds, z.clone(), z, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cmp(i64, i64);

    impl Inequality for Cmp {
        fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
            Some((ctx.int(self.0), ctx.int(self.1)))
        }
    }

    /// `ln 2 ≤ c` where `c` is within `2^-80` of ln 2 from above.
    struct NearLn2;

    impl Inequality for NearLn2 {
        fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
            let ln2 = ctx.ln(&ctx.int(2))?;
            let c = certified_context(200).ln2().hi().to_rational();
            let c = &c + &num_rational::BigRational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(2), 80));
            Some((ln2, ctx.rational(&c)))
        }
    }

    #[test]
    fn exact_comparisons() {
        let p = PrecisionPolicy::default();
        assert_eq!(certify(&Cmp(1, 2), &p).status, Status::Holds);
        assert_eq!(certify(&Cmp(3, 2), &p).status, Status::Fails);
        assert_eq!(certify(&Cmp(1, 2), &p).precision_used, 53);
    }

    #[test]
    fn escalates_past_the_fast_stage() {
        let v = certify(&NearLn2, &PrecisionPolicy::default());
        assert_eq!(v.status, Status::Holds);
        assert!(v.precision_used >= 64);
        assert!(v.margin.is_positive());
    }

    #[test]
    fn tie_is_inconclusive_at_cap() {
        let p = PrecisionPolicy::new(64, 256);
        let v = certify(&Cmp(2, 2), &p);
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.precision_used, 256);
    }

    #[test]
    fn schedule_doubles_to_cap() {
        let p = PrecisionPolicy::new(64, 300);
        assert_eq!(p.schedule().collect::<Vec<_>>(), vec![64, 128, 256, 300]);
    }

    #[test]
    fn grid_summary_is_order_independent() {
        let p = PrecisionPolicy::default();
        let cells = [(1, 5), (2, 3), (4, 4), (0, 9), (7, 1)];
        let run = |order: &[usize]| {
            let mut g = GridSummary::default();
            for &i in order {
                let (a, b) = cells[i];
                g.push(certify(&Cmp(a, b), &p).with_witness(Some((a, b))));
            }
            g
        };
        let a = run(&[0, 1, 2, 3, 4]).into_verdict();
        let b = run(&[4, 3, 2, 1, 0]).into_verdict();
        assert_eq!(a.status, Status::Fails);
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.margin, b.margin);
    }
}
