//! Grid checks of the auxiliary inequalities behind the bound:
//!
//! ```text
//! b(k, n) = (n + k + ½)·ln(1 + k/n) + (n − k + ½)·ln(1 − k/n)
//! b(k, n) − k²/n + 3/(4n) > 0                 3 ≤ n, 0 ≤ k < n
//! f(k) = b(k, n) − k²/n increases on [⌈√(3n/2)⌉, n − 1]
//! t(k) = ln(2 − k/m) − (2m² − m − 2k²)/(2m(2m − 1)) ≥ 0   0 ≤ k ≤ m
//! ```
//!
//! `t` attains its minimum over the reals at `k₀ = m − √(m/2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::exact::{fast_context, Endpoint, Interval, MathContext};
use crate::verdict::{certify, BoundVerdict, GridSummary, Inequality, PrecisionPolicy};

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn ln_ratio<E: Endpoint>(ctx: &MathContext<E>, num: i64, den: i64) -> Option<Interval<E>> {
    if num == den {
        return Some(ctx.int(0));
    }
    ctx.ln_ratio(&BigInt::from(num), &BigInt::from(den))
}

/// `b(k, n)`; requires `|k| < n`.
pub fn b_value<E: Endpoint>(ctx: &MathContext<E>, n: i64, k: i64) -> Option<Interval<E>> {
    let up = &ctx.ratio(2 * (n + k) + 1, 2) * &ln_ratio(ctx, n + k, n)?;
    let down = &ctx.ratio(2 * (n - k) + 1, 2) * &ln_ratio(ctx, n - k, n)?;
    Some(&up + &down)
}

/// `f(k) = b(k, n) − k²/n`.
pub fn f_value<E: Endpoint>(ctx: &MathContext<E>, n: i64, k: i64) -> Option<Interval<E>> {
    Some(&b_value(ctx, n, k)? - &ctx.ratio(k * k, n))
}

/// `(2m² − m − 2k²)/(2m(2m − 1))`.
fn t_rational(m: i64, k: i64) -> BigRational {
    ratio(2 * m * m - m - 2 * k * k, 2 * m * (2 * m - 1))
}

/// `t(k)` at an integer `k`.
pub fn t_value<E: Endpoint>(ctx: &MathContext<E>, m: i64, k: i64) -> Option<Interval<E>> {
    Some(&ln_ratio(ctx, 2 * m - k, m)? - &ctx.rational(&t_rational(m, k)))
}

/// `k₀ = m − √(m/2)`.
pub fn t_minimizer<E: Endpoint>(ctx: &MathContext<E>, m: i64) -> Option<Interval<E>> {
    Some(&ctx.int(m) - &ctx.sqrt(&ctx.ratio(m, 2))?)
}

/// `t` at a real argument given as an interval.
pub fn t_at<E: Endpoint>(ctx: &MathContext<E>, m: i64, k: &Interval<E>) -> Option<Interval<E>> {
    let mi = ctx.int(m);
    let arg = &ctx.int(2) - &k.checked_div(&mi)?;
    let num = &ctx.int(2 * m * m - m) - &k.square().scale_i64(2);
    let rat = num.checked_div(&ctx.int(2 * m * (2 * m - 1)))?;
    Some(&ctx.ln(&arg)? - &rat)
}

/// Closed form of the minimum, `ln(1 + 1/√(2m)) − 1/(1 + √(2m))`.
pub fn t_min_closed_form<E: Endpoint>(ctx: &MathContext<E>, m: i64) -> Option<Interval<E>> {
    let x = ctx.sqrt(&ctx.int(2 * m))?;
    let one = ctx.int(1);
    let l = ctx.ln(&(&one + &one.checked_div(&x)?))?;
    Some(&l - &one.checked_div(&(&one + &x))?)
}

/// Smallest integer `k` with `k ≥ √(3n/2)`.
pub fn f_grid_start(n: i64) -> i64 {
    let mut k = ((1.5 * n as f64).sqrt().floor() as i64).max(0);
    while 2 * k * k < 3 * n {
        k += 1;
    }
    while k > 0 && 2 * (k - 1) * (k - 1) >= 3 * n {
        k -= 1;
    }
    k
}

struct BCell {
    n: i64,
    k: i64,
}

impl Inequality for BCell {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        let (n, k) = (self.n, self.k);
        let v = &b_value(ctx, n, k)? + &ctx.ratio(3 - 4 * k * k, 4 * n);
        Some((ctx.int(0), v))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.n, self.k))
    }
}

struct FCell {
    n: i64,
    k: i64,
}

impl Inequality for FCell {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((f_value(ctx, self.n, self.k)?, f_value(ctx, self.n, self.k + 1)?))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.n, self.k))
    }
}

struct TCell {
    m: i64,
    k: i64,
}

impl Inequality for TCell {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((ctx.int(0), t_value(ctx, self.m, self.k)?))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.m, self.k))
    }
}

struct TMinCell {
    m: i64,
}

impl Inequality for TMinCell {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        let k0 = t_minimizer(ctx, self.m)?;
        Some((ctx.int(0), t_at(ctx, self.m, &k0)?))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((self.m, -1))
    }
}

/// `b(k, n) − k²/n + 3/(4n) > 0`.
pub fn check_b_inequality(n: i64, k: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    if n < 3 || k < 0 || k >= n {
        return domain(format!("b check needs n ≥ 3 and 0 ≤ k < n, got n = {n}, k = {k}"));
    }
    Ok(certify(&BCell { n, k }, policy))
}

/// `f(k + 1) > f(k)` for every `k` in `[⌈√(3n/2)⌉, n − 2]`; holds vacuously
/// on an empty grid. The verdict carries the tightest step.
pub fn check_f_monotone(n: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    Ok(f_monotone_grid(n, policy)?.into_verdict())
}

pub fn f_monotone_grid(n: i64, policy: &PrecisionPolicy) -> Result<GridSummary> {
    if n < 3 {
        return domain(format!("f check needs n ≥ 3, got {n}"));
    }
    let mut g = GridSummary::default();
    for k in f_grid_start(n)..=n - 2 {
        g.push(certify(&FCell { n, k }, policy));
    }
    Ok(g)
}

/// `t(k) ≥ 0` at an integer `k`.
pub fn check_t_nonneg(m: i64, k: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    if m < 1 || k < 0 || k > m {
        return domain(format!("t check needs m ≥ 1 and 0 ≤ k ≤ m, got m = {m}, k = {k}"));
    }
    Ok(certify(&TCell { m, k }, policy))
}

/// `t(k₀) > 0` at the real minimizer `k₀ = m − √(m/2)`.
pub fn check_t_at_minimizer(m: i64, policy: &PrecisionPolicy) -> Result<BoundVerdict> {
    if m < 1 {
        return domain(format!("t check needs m ≥ 1, got {m}"));
    }
    Ok(certify(&TMinCell { m }, policy))
}

/// Hardware-precision enclosures of `ln j` for `j = 0..=max` (index 0 unused).
struct LnTable(Vec<Interval<f64>>);

impl LnTable {
    fn new(max: i64) -> Self {
        let ctx = fast_context();
        let v = (0..=max)
            .into_par_iter()
            .map(|j| {
                if j == 0 {
                    ctx.int(0)
                } else {
                    ctx.ln_int(&BigInt::from(j)).expect("positive")
                }
            })
            .collect();
        LnTable(v)
    }

    fn get(&self, j: i64) -> &Interval<f64> {
        &self.0[j as usize]
    }
}

/// Outcome of the whole integer `t` grid for `1 ≤ m ≤ m_max`.
///
/// Cells decided at hardware precision are only counted; the others and the
/// tightest cell are certified individually, so the summary still carries a
/// full verdict for the smallest margin.
pub fn t_grid(m_max: i64, policy: &PrecisionPolicy) -> GridSummary {
    if m_max < 1 {
        return GridSummary::default();
    }
    let table = policy.fast_path.then(|| LnTable::new(2 * m_max));
    let rows: Vec<(GridSummary, f64, (i64, i64))> = (1..=m_max)
        .into_par_iter()
        .map(|m| t_row(m, table.as_ref(), policy))
        .collect();
    let mut best: Option<(f64, (i64, i64))> = None;
    let mut total = GridSummary::default();
    for (g, lo, at) in rows {
        total = total.merge(g);
        if best.is_none_or(|(b, w)| lo < b || (lo == b && at < w)) {
            best = Some((lo, at));
        }
    }
    // Cell-wise mode already pushed every verdict.
    if let (Some(_), Some((_, (m, k)))) = (&table, best) {
        let v = certify(&TCell { m, k }, policy);
        total.checked -= 1;
        total.push(v);
    }
    total
}

fn t_row(m: i64, table: Option<&LnTable>, policy: &PrecisionPolicy) -> (GridSummary, f64, (i64, i64)) {
    let mut g = GridSummary::default();
    let mut best = (f64::INFINITY, (m, 0));
    let Some(table) = table else {
        for k in 0..=m {
            let v = certify(&TCell { m, k }, policy);
            let lo = v.margin.lo().approx_f64();
            if lo < best.0 {
                best = (lo, (m, k));
            }
            g.push(v);
        }
        return (g, best.0, best.1);
    };
    let lnm = table.get(m);
    let den = Interval::point((2 * m * (2 * m - 1)) as f64, 53);
    let base = (2 * m * m - m) as f64;
    for k in 0..=m {
        let num = Interval::point(base - (2 * k * k) as f64, 53);
        let t = &(table.get(2 * m - k) - lnm) - &(&num / &den);
        if t.is_positive() {
            g.checked += 1;
            if *t.lo() < best.0 {
                best = (*t.lo(), (m, k));
            }
        } else {
            g.push(certify(&TCell { m, k }, policy));
        }
    }
    (g, best.0, best.1)
}

/// Integer `b` grid for `3 ≤ n ≤ n_max`.
pub fn b_grid(n_max: i64, policy: &PrecisionPolicy) -> GridSummary {
    (3..=n_max.max(2))
        .into_par_iter()
        .map(|n| {
            let mut g = GridSummary::default();
            for k in 0..n {
                g.push(certify(&BCell { n, k }, policy));
            }
            g
        })
        .reduce(GridSummary::default, GridSummary::merge)
}

/// Monotonicity of `f` for `3 ≤ n ≤ n_max`.
pub fn f_grid(n_max: i64, policy: &PrecisionPolicy) -> GridSummary {
    (3..=n_max.max(2))
        .into_par_iter()
        .map(|n| f_monotone_grid(n, policy).expect("n ≥ 3"))
        .reduce(GridSummary::default, GridSummary::merge)
}

/// `t(k₀) > 0` for `1 ≤ m ≤ m_max`.
pub fn t_min_grid(m_max: i64, policy: &PrecisionPolicy) -> GridSummary {
    (1..=m_max.max(0))
        .into_par_iter()
        .map(|m| {
            let mut g = GridSummary::default();
            g.push(certify(&TMinCell { m }, policy));
            g
        })
        .reduce(GridSummary::default, GridSummary::merge)
}

/// All proof-support grids.
#[derive(Debug, Clone)]
pub struct ProofSupportReport {
    pub n_max: i64,
    pub m_max: i64,
    pub b: GridSummary,
    pub f: GridSummary,
    pub t: GridSummary,
    pub t_min: GridSummary,
}

impl ProofSupportReport {
    pub fn status(&self) -> crate::Status {
        self.b
            .status
            .worst(self.f.status)
            .worst(self.t.status)
            .worst(self.t_min.status)
    }
}

pub fn proof_support(n_max: i64, m_max: i64, policy: &PrecisionPolicy) -> ProofSupportReport {
    ProofSupportReport {
        n_max,
        m_max,
        b: b_grid(n_max, policy),
        f: f_grid(n_max, policy),
        t: t_grid(m_max, policy),
        t_min: t_min_grid(m_max, policy),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::certified_context;
    use crate::Status;

    fn p() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn b_examples() {
        let v = check_b_inequality(3, 0, &p()).unwrap();
        assert_eq!(v.status, Status::Holds);
        // b(0, n) = 0, so the margin is 3/(4n).
        assert!((v.margin.approx_mid() - 0.25).abs() < 1e-12);
        assert!(check_b_inequality(10, 5, &p()).unwrap().holds());
        assert!(check_b_inequality(100, 99, &p()).unwrap().holds());
        assert!(check_b_inequality(2, 0, &p()).is_err());
        assert!(check_b_inequality(5, 5, &p()).is_err());
    }

    #[test]
    fn b_matches_direct_formula() {
        let ctx = certified_context(64);
        for (n, k) in [(10i64, 5i64), (7, 3), (100, 99)] {
            let (nf, kf) = (n as f64, k as f64);
            let direct =
                nf * ((1.0 + (kf + 0.5) / nf) * (1.0 + kf / nf).ln() + (1.0 - (kf - 0.5) / nf) * (1.0 - kf / nf).ln());
            let b = b_value(&*ctx, n, k).unwrap();
            assert!((b.approx_mid() - direct).abs() < 1e-9 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn f_grid_bounds() {
        assert_eq!(f_grid_start(3), 3);
        assert_eq!(f_grid_start(10), 4);
        assert_eq!(f_grid_start(50), 9);
        let v = check_f_monotone(3, &p()).unwrap();
        assert_eq!(v.status, Status::Holds);
        assert_eq!(v.precision_used, 0);
        assert_eq!(f_monotone_grid(10, &p()).unwrap().checked, 5);
        assert_eq!(f_monotone_grid(50, &p()).unwrap().checked, 40);
        assert!(check_f_monotone(10, &p()).unwrap().holds());
        assert!(check_f_monotone(50, &p()).unwrap().holds());
    }

    #[test]
    fn t_examples() {
        let v = check_t_nonneg(1, 1, &p()).unwrap();
        assert!(v.holds());
        assert!((v.margin.approx_mid() - 0.5).abs() < 1e-12);
        let v = check_t_nonneg(2, 0, &p()).unwrap();
        assert!((v.margin.approx_mid() - (2f64.ln() - 0.5)).abs() < 1e-12);
        let at6 = check_t_nonneg(8, 6, &p()).unwrap();
        let at_min = check_t_at_minimizer(8, &p()).unwrap();
        assert!(at6.holds() && at_min.holds());
        assert!(at_min.margin.hi() <= at6.margin.hi());
        assert!(check_t_nonneg(3, 4, &p()).is_err());
    }

    #[test]
    fn minimizer_routes_agree() {
        let ctx = certified_context(128);
        for m in [1i64, 2, 8, 1000, 12345] {
            let k0 = t_minimizer(&*ctx, m).unwrap();
            let general = t_at(&*ctx, m, &k0).unwrap();
            let closed = t_min_closed_form(&*ctx, m).unwrap();
            assert!(general.overlaps(&closed), "m = {m}");
            assert!(closed.is_positive());
        }
    }

    #[test]
    fn integer_grid_never_beats_real_minimum() {
        let ctx = certified_context(64);
        for m in 1..60i64 {
            let min = t_min_closed_form(&*ctx, m).unwrap();
            for k in 0..=m {
                let t = t_value(&*ctx, m, k).unwrap();
                assert!(t.hi() >= min.lo(), "m = {m}, k = {k}");
            }
        }
    }

    #[test]
    fn bulk_t_grid_matches_cellwise() {
        let fast = t_grid(40, &p());
        let slow = t_grid(
            40,
            &PrecisionPolicy {
                fast_path: false,
                ..p()
            },
        );
        assert_eq!(fast.checked, (1..=40).map(|m| m + 1).sum::<i64>() as u64);
        assert_eq!(fast.checked, slow.checked);
        assert_eq!(fast.status, Status::Holds);
        assert_eq!(slow.status, Status::Holds);
        let (a, b) = (fast.into_verdict(), slow.into_verdict());
        assert_eq!(a.witness, b.witness);
    }
}
