//! Exhaustive certified sweeps over `(n, k)` ranges.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::theorem::{LemmaCell, TheoremCell};
use crate::error::{domain, Result};
use crate::exact::binomial_row;
use crate::verdict::{certify, BoundVerdict, GridSummary, PrecisionPolicy, Status};
use crate::CertifiedInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepTarget {
    Theorem,
    Lemma,
}

impl SweepTarget {
    /// Cells `(n, k)` in one row: `0..=n` for the theorem, `−n..=n` for the
    /// lemma.
    pub fn k_range(self, n: i64) -> std::ops::RangeInclusive<i64> {
        match self {
            SweepTarget::Theorem => 0..=n,
            SweepTarget::Lemma => -n..=n,
        }
    }

    pub fn cells(self, n_min: i64, n_max: i64) -> u64 {
        (n_min..=n_max)
            .map(|n| {
                let r = self.k_range(n);
                (r.end() - r.start() + 1) as u64
            })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: i64,
    pub k: i64,
    pub verdict: BoundVerdict,
}

pub const CSV_HEADER: &str = "n,k,lhs_log2,rhs_log2,margin_lo,margin_hi,status";

impl SweepRow {
    /// `n,k,lhs_log2,rhs_log2,margin_lo,margin_hi,status`; sides as 20-digit
    /// midpoints, margin endpoints rounded outward.
    pub fn csv(&self) -> String {
        let v = &self.verdict;
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{}",
            self.n,
            self.k,
            v.lhs.mid_decimal(20),
            v.rhs.mid_decimal(20),
            v.margin.lo_decimal(20),
            v.margin.hi_decimal(20),
            v.status
        );
        s
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub target: SweepTarget,
    pub range: (i64, i64),
    pub checked: u64,
    pub failures: Vec<(i64, i64)>,
    pub inconclusive: Vec<(i64, i64)>,
    pub min_margin: CertifiedInterval,
    pub argmin: (i64, i64),
    pub status: Status,
    pub precision_used: u32,
}

fn row_counts(target: SweepTarget, n: i64) -> Vec<BigInt> {
    match target {
        SweepTarget::Theorem => binomial_row(n as u64),
        SweepTarget::Lemma => binomial_row(2 * n as u64),
    }
}

fn check_row(target: SweepTarget, n: i64, policy: &PrecisionPolicy, keep: bool) -> (GridSummary, Vec<SweepRow>) {
    let counts = row_counts(target, n);
    let mut g = GridSummary::default();
    let mut rows = Vec::new();
    for k in target.k_range(n) {
        let v = match target {
            SweepTarget::Theorem => certify(
                &TheoremCell {
                    n,
                    k,
                    count: &counts[k as usize],
                },
                policy,
            ),
            SweepTarget::Lemma => certify(
                &LemmaCell {
                    n,
                    k,
                    count: &counts[(n + k) as usize],
                },
                policy,
            ),
        };
        if keep {
            rows.push(SweepRow {
                n,
                k,
                verdict: v.clone(),
            });
        }
        g.push(v);
    }
    (g, rows)
}

/// Rows handled per parallel batch when rows are streamed out.
const BATCH: i64 = 32;

/// Run the sweep, passing each row to `sink` in `(n, k)` order. The report
/// is independent of scheduling: summaries merge associatively and ties in
/// the minimum margin go to the smallest `(n, k)`.
pub fn sweep_with(
    n_min: i64,
    n_max: i64,
    target: SweepTarget,
    policy: &PrecisionPolicy,
    mut sink: Option<&mut dyn FnMut(&SweepRow)>,
) -> Result<SweepReport> {
    if n_min < 1 || n_min > n_max {
        return domain(format!("sweep needs 1 ≤ n_min ≤ n_max, got [{n_min}, {n_max}]"));
    }
    let keep = sink.is_some();
    let mut total = GridSummary::default();
    let mut start = n_min;
    while start <= n_max {
        let end = if keep { (start + BATCH - 1).min(n_max) } else { n_max };
        let parts: Vec<(GridSummary, Vec<SweepRow>)> = (start..=end)
            .into_par_iter()
            .map(|n| check_row(target, n, policy, keep))
            .collect();
        for (g, rows) in parts {
            if let Some(s) = sink.as_mut() {
                rows.iter().for_each(s);
            }
            total = total.merge(g);
        }
        start = end + 1;
    }
    let checked = total.checked;
    let status = total.status;
    let failures = total.failures.clone();
    let inconclusive = total.undecided.clone();
    let tight = total.tightest.clone().expect("non-empty range");
    let precision_used = tight.precision_used;
    let argmin = tight.witness.unwrap_or((0, 0));
    Ok(SweepReport {
        target,
        range: (n_min, n_max),
        checked,
        failures,
        inconclusive,
        min_margin: tight.margin,
        argmin,
        status,
        precision_used,
    })
}

pub fn sweep(n_min: i64, n_max: i64, target: SweepTarget, policy: &PrecisionPolicy) -> Result<SweepReport> {
    sweep_with(n_min, n_max, target, policy, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{check_lemma, check_theorem};

    #[test]
    fn single_row_count() {
        let r = sweep(1, 1, SweepTarget::Theorem, &PrecisionPolicy::default()).unwrap();
        assert_eq!(r.checked, 2);
        assert!(r.failures.is_empty());
        assert_eq!(r.status, Status::Holds);
    }

    #[test]
    fn hundred_rows_of_theorem() {
        let r = sweep(1, 100, SweepTarget::Theorem, &PrecisionPolicy::default()).unwrap();
        assert_eq!(r.checked, 5150);
        assert!(r.failures.is_empty() && r.inconclusive.is_empty());
        assert!(r.min_margin.is_positive());
        let direct = check_theorem(r.argmin.0, r.argmin.1).unwrap();
        assert_eq!(direct.margin, r.min_margin);
    }

    #[test]
    fn lemma_rows() {
        let r = sweep(1, 50, SweepTarget::Lemma, &PrecisionPolicy::default()).unwrap();
        assert_eq!(r.checked, SweepTarget::Lemma.cells(1, 50));
        assert_eq!(r.checked, (1..=50u64).map(|n| 2 * n + 1).sum::<u64>());
        assert_eq!(r.status, Status::Holds);
        let direct = check_lemma(r.argmin.0, r.argmin.1).unwrap();
        assert_eq!(direct.margin, r.min_margin);
    }

    #[test]
    fn streamed_rows_are_ordered() {
        let mut seen = Vec::new();
        let mut sink = |r: &SweepRow| seen.push((r.n, r.k, r.csv()));
        sweep_with(
            1,
            40,
            SweepTarget::Theorem,
            &PrecisionPolicy::default(),
            Some(&mut sink),
        )
        .unwrap();
        assert_eq!(seen.len() as u64, SweepTarget::Theorem.cells(1, 40));
        assert!(seen.windows(2).all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        assert!(seen[0].2.starts_with("1,0,0,"));
        assert!(seen[0].2.ends_with(",Holds"));
    }

    #[test]
    fn symmetric_margins() {
        let mut rows = std::collections::HashMap::new();
        let mut sink = |r: &SweepRow| {
            rows.insert((r.n, r.k), r.verdict.margin.clone());
        };
        sweep_with(
            1,
            100,
            SweepTarget::Theorem,
            &PrecisionPolicy::default(),
            Some(&mut sink),
        )
        .unwrap();
        for n in 1..=100i64 {
            for k in 0..=n {
                assert_eq!(rows[&(n, k)], rows[&(n, n - k)], "({n}, {k})");
            }
        }
    }

    #[test]
    fn bad_ranges() {
        let p = PrecisionPolicy::default();
        assert!(sweep(0, 3, SweepTarget::Theorem, &p).is_err());
        assert!(sweep(5, 3, SweepTarget::Lemma, &p).is_err());
    }
}
