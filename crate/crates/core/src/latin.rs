//! Latin dependence degree `L(p) = Σ_{b∈Ω} Π_i p_i(b_i)` of a distribution
//! on integer tuples, with the exact closed forms for permutations and
//! balanced tuples and the bound for Walsh–Hadamard spectra.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bent::{wht, BooleanFunction};
use crate::error::{capability, domain, Result};
use crate::exact::{certified_context, Endpoint, Interval, MathContext};
use crate::verdict::{certify, BoundVerdict, Inequality, PrecisionPolicy};
use crate::{CertifiedInterval, ExactRational};

/// Largest tuple length for the permutation ensemble.
pub const MAX_PERMUTATION_LEN: usize = 9;
/// Largest tuple length for the balanced ensemble.
pub const MAX_BALANCED_LEN: usize = 24;
/// Largest `n` for the spectra ensemble (`2^(2^n)` tuples).
pub const MAX_SPECTRA_VARS: u32 = 4;

/// A distribution on a finite set of integer tuples.
#[derive(Debug, Clone)]
pub struct TupleEnsemble {
    pub name: String,
    len: usize,
    support: Vec<Vec<i64>>,
    prob: Vec<ExactRational>,
}

impl TupleEnsemble {
    /// Validates tuple lengths, positivity, `Σ prob = 1` and distinctness.
    pub fn new(name: impl Into<String>, len: usize, support: Vec<Vec<i64>>, prob: Vec<ExactRational>) -> Result<Self> {
        if support.is_empty() {
            return domain("ensemble support is empty");
        }
        if support.len() != prob.len() {
            return domain(format!("{} tuples but {} probabilities", support.len(), prob.len()));
        }
        if let Some(t) = support.iter().find(|t| t.len() != len) {
            return domain(format!("tuple {t:?} does not have length {len}"));
        }
        if prob.iter().any(|p| p <= &BigRational::zero()) {
            return domain("probabilities must be positive");
        }
        let total: BigRational = prob.iter().sum();
        if !total.is_one() {
            return domain(format!("probabilities sum to {total}, not 1"));
        }
        let distinct: HashSet<&Vec<i64>> = support.iter().collect();
        if distinct.len() != support.len() {
            return domain("support tuples must be distinct");
        }
        Ok(TupleEnsemble {
            name: name.into(),
            len,
            support,
            prob,
        })
    }

    pub fn uniform(name: impl Into<String>, len: usize, support: Vec<Vec<i64>>) -> Result<Self> {
        let p = BigRational::new(BigInt::one(), BigInt::from(support.len().max(1)));
        let prob = vec![p; support.len()];
        Self::new(name, len, support, prob)
    }

    /// Tuple length `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn support(&self) -> &[Vec<i64>] {
        &self.support
    }

    pub fn prob(&self) -> &[ExactRational] {
        &self.prob
    }

    /// Probabilities as integer weights over one common denominator.
    fn weights(&self) -> (Vec<BigInt>, BigInt) {
        let d = self.prob.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
        let w = self.prob.iter().map(|p| p.numer() * (&d / p.denom())).collect();
        (w, d)
    }
}

/// `p_i(x) = Pr{a_i = x}` for each coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalTable {
    pub coords: Vec<BTreeMap<i64, ExactRational>>,
}

impl MarginalTable {
    pub fn get(&self, i: usize, x: i64) -> ExactRational {
        self.coords[i].get(&x).cloned().unwrap_or_else(BigRational::zero)
    }
}

pub fn marginals(e: &TupleEnsemble) -> MarginalTable {
    let (w, d) = e.weights();
    let mut sums: Vec<BTreeMap<i64, BigInt>> = vec![BTreeMap::new(); e.len];
    for (t, wt) in e.support.iter().zip(&w) {
        for (i, &x) in t.iter().enumerate() {
            *sums[i].entry(x).or_insert_with(BigInt::zero) += wt;
        }
    }
    let coords = sums
        .into_iter()
        .map(|m| {
            m.into_iter()
                .map(|(x, s)| (x, BigRational::new(s, d.clone())))
                .collect()
        })
        .collect();
    MarginalTable { coords }
}

/// Exact `L(p)`: each marginal is put over its own common denominator so
/// the sum over the support runs in integers.
pub fn latin_degree(e: &TupleEnsemble) -> ExactRational {
    let m = marginals(e);
    let dens: Vec<BigInt> = m
        .coords
        .iter()
        .map(|c| c.values().fold(BigInt::one(), |acc, p| acc.lcm(p.denom())))
        .collect();
    let nums: Vec<BTreeMap<i64, BigInt>> = m
        .coords
        .iter()
        .zip(&dens)
        .map(|(c, d)| c.iter().map(|(x, p)| (*x, p.numer() * (d / p.denom()))).collect())
        .collect();
    let total: BigInt = e
        .support
        .par_iter()
        .map(|t| {
            t.iter()
                .enumerate()
                .fold(BigInt::one(), |acc, (i, x)| acc * &nums[i][x])
        })
        .reduce(BigInt::zero, |a, b| a + b);
    let den = dens.iter().fold(BigInt::one(), |acc, d| acc * d);
    BigRational::new(total, den)
}

/// Uniform distribution on the permutations of `1..=N`.
pub fn permutation_ensemble(len: usize) -> Result<TupleEnsemble> {
    if len == 0 || len > MAX_PERMUTATION_LEN {
        return capability(format!(
            "permutation ensemble supports 1 ≤ N ≤ {MAX_PERMUTATION_LEN}, got {len}"
        ));
    }
    let mut support = Vec::new();
    let mut cur: Vec<i64> = (1..=len as i64).collect();
    // Lexicographic successor (Narayana).
    loop {
        support.push(cur.clone());
        let Some(i) = (0..len.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..len).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    TupleEnsemble::uniform(format!("perm(N={len})"), len, support)
}

/// Uniform distribution on 0/1 tuples with exactly `N/2` ones.
pub fn balanced_ensemble(len: usize) -> Result<TupleEnsemble> {
    if len == 0 || len % 2 == 1 {
        return domain(format!("balanced tuples need a positive even length, got {len}"));
    }
    if len > MAX_BALANCED_LEN {
        return capability(format!("balanced ensemble supports N ≤ {MAX_BALANCED_LEN}, got {len}"));
    }
    let support = (0u64..1 << len)
        .filter(|w| w.count_ones() as usize == len / 2)
        .map(|w| (0..len).map(|i| (w >> i & 1) as i64).collect())
        .collect();
    TupleEnsemble::uniform(format!("balanced(N={len})"), len, support)
}

/// Uniform distribution on the spectra of all `n`-variable functions.
pub fn spectra_ensemble(n: u32) -> Result<TupleEnsemble> {
    if n == 0 {
        return domain("spectra ensemble needs n ≥ 1");
    }
    if n > MAX_SPECTRA_VARS {
        return capability(format!(
            "spectra ensemble enumerates 2^(2^n) functions; n ≤ {MAX_SPECTRA_VARS}, got {n}"
        ));
    }
    let support: Vec<Vec<i64>> = (0u64..1 << (1 << n))
        .into_par_iter()
        .map(|t| wht(&BooleanFunction::from_word(n, t).expect("n ≤ 4")).values)
        .collect();
    TupleEnsemble::uniform(format!("spectra(n={n})"), 1 << n, support)
}

/// `exp(23/18) · (8/(πeN))^(N/2)`, `N = 2^n`.
pub fn prop2_bound_in<E: Endpoint>(ctx: &MathContext<E>, n: u32) -> Option<Interval<E>> {
    let big_n = 1i64 << n;
    let base = ctx.int(8).checked_div(&(&(ctx.pi() * ctx.e()) * &ctx.int(big_n)))?;
    Some(&ctx.exp(&ctx.ratio(23, 18)) * &base.powi(1u64 << (n - 1)))
}

pub fn prop2_bound(n: u32, precision: u32) -> Result<CertifiedInterval> {
    if n == 0 || n > 40 {
        return domain(format!("need 1 ≤ n ≤ 40, got {n}"));
    }
    Ok(prop2_bound_in(&*certified_context(precision), n).expect("positive denominator"))
}

struct Prop2Cell<'a> {
    n: u32,
    value: &'a ExactRational,
}

impl Inequality for Prop2Cell<'_> {
    fn sides<E: Endpoint>(&self, ctx: &MathContext<E>) -> Option<(Interval<E>, Interval<E>)> {
        Some((ctx.rational(self.value), prop2_bound_in(ctx, self.n)?))
    }

    fn witness(&self) -> Option<(i64, i64)> {
        Some((i64::from(self.n), 1i64 << self.n))
    }
}

/// Certified `value ≤ prop2_bound(n)`.
pub fn check_prop2(n: u32, value: &ExactRational, policy: &PrecisionPolicy) -> BoundVerdict {
    certify(&Prop2Cell { n, value }, policy)
}

/// `N!/N^N`.
pub fn permutation_closed_form(len: u64) -> ExactRational {
    let fact: BigInt = (1..=len).map(BigInt::from).product();
    BigRational::new(fact, BigInt::from(len).pow(len as u32))
}

/// `C(N, N/2) · 2^(−N)`.
pub fn balanced_closed_form(len: u64) -> Result<ExactRational> {
    let c = crate::exact::binomial(len as i64, len as i64 / 2)?;
    Ok(BigRational::new(c, BigInt::one() << len))
}

/// `2^(−N) · C(N, (N + x)/2)`, the coordinate marginal of the spectra
/// ensemble.
pub fn spectra_marginal(len: u64, x: i64) -> ExactRational {
    let n = len as i64;
    if x.abs() > n || (n + x) % 2 != 0 {
        return BigRational::zero();
    }
    let c = crate::exact::binomial(n, (n + x) / 2).expect("in range");
    BigRational::new(c, BigInt::one() << len)
}

/// Seeded Monte-Carlo estimate of `L(p)`: assemble tuples coordinate-wise
/// from the marginals and count hits in the support.
#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloEstimate {
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub sigma: f64,
}

impl MonteCarloEstimate {
    /// Whether `estimate ± 3σ` contains `exact`.
    pub fn covers(&self, exact: &ExactRational) -> bool {
        let x = exact.to_f64().unwrap_or(f64::NAN);
        // A zero-hit run has σ = 0; widen by one trial's worth.
        let slack = 3.0 * self.sigma + 1.0 / self.trials as f64;
        (self.estimate - x).abs() <= slack
    }
}

pub fn monte_carlo(e: &TupleEnsemble, trials: u64, seed: u64) -> MonteCarloEstimate {
    let m = marginals(e);
    let cdfs: Vec<Vec<(f64, i64)>> = m
        .coords
        .iter()
        .map(|c| {
            let mut acc = 0.0;
            c.iter()
                .map(|(x, p)| {
                    acc += p.to_f64().unwrap_or(0.0);
                    (acc, *x)
                })
                .collect()
        })
        .collect();
    let support: HashSet<&Vec<i64>> = e.support.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    let mut b = vec![0i64; e.len];
    for _ in 0..trials {
        for (slot, cdf) in b.iter_mut().zip(&cdfs) {
            let u: f64 = rng.gen::<f64>() * cdf.last().map_or(1.0, |l| l.0);
            *slot = cdf
                .iter()
                .find(|(c, _)| u < *c)
                .unwrap_or(cdf.last().expect("non-empty"))
                .1;
        }
        if support.contains(&b) {
            hits += 1;
        }
    }
    let est = hits as f64 / trials.max(1) as f64;
    MonteCarloEstimate {
        trials,
        hits,
        estimate: est,
        sigma: (est * (1.0 - est) / trials.max(1) as f64).sqrt(),
    }
}

/// `{ensemble, N, L_num, L_den, L_decimal, bound_lo, bound_hi, ratio}`.
#[derive(Debug, Clone, Serialize)]
pub struct LatinReport {
    pub ensemble: String,
    #[serde(rename = "N")]
    pub len: usize,
    #[serde(rename = "L_num")]
    pub l_num: String,
    #[serde(rename = "L_den")]
    pub l_den: String,
    #[serde(rename = "L_decimal")]
    pub l_decimal: String,
    pub bound_lo: Option<String>,
    pub bound_hi: Option<String>,
    /// `L(p)` divided by the bound, 20 digits.
    pub ratio: Option<String>,
    #[serde(skip)]
    pub value: ExactRational,
    #[serde(skip)]
    pub verdict: Option<BoundVerdict>,
}

/// Report for an ensemble; `spectra_n` attaches the bound check.
pub fn latin_report(e: &TupleEnsemble, spectra_n: Option<u32>, policy: &PrecisionPolicy) -> Result<LatinReport> {
    let value = latin_degree(e);
    let l_decimal = Interval::<crate::Dyadic>::from_rational(&value, 128).mid_decimal(20);
    let (bound_lo, bound_hi, ratio, verdict) = match spectra_n {
        Some(n) => {
            let b = prop2_bound(n, 128)?;
            let q = Interval::from_rational(&value, 128)
                .checked_div(&b)
                .expect("bound is positive");
            let v = check_prop2(n, &value, policy);
            (
                Some(b.lo_decimal(20)),
                Some(b.hi_decimal(20)),
                Some(q.mid_decimal(20)),
                Some(v),
            )
        }
        None => (None, None, None, None),
    };
    Ok(LatinReport {
        ensemble: e.name.clone(),
        len: e.len,
        l_num: value.numer().to_string(),
        l_den: value.denom().to_string(),
        l_decimal,
        bound_lo,
        bound_hi,
        ratio,
        value,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Status;

    fn q(a: i64, b: i64) -> ExactRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn marginal_examples() {
        let m = marginals(&permutation_ensemble(4).unwrap());
        for i in 0..4 {
            assert_eq!(m.coords[i].len(), 4);
            assert!(m.coords[i].values().all(|p| p == &q(1, 4)));
        }
        let m = marginals(&balanced_ensemble(6).unwrap());
        assert!(m.coords.iter().all(|c| c[&0] == q(1, 2) && c[&1] == q(1, 2)));
        let m = marginals(&spectra_ensemble(1).unwrap());
        for c in &m.coords {
            assert_eq!(c.len(), 3);
            assert_eq!(
                (c[&0].clone(), c[&2].clone(), c[&-2].clone()),
                (q(1, 2), q(1, 4), q(1, 4))
            );
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(latin_degree(&permutation_ensemble(3).unwrap()), q(2, 9));
        assert_eq!(latin_degree(&balanced_ensemble(2).unwrap()), q(1, 2));
        assert_eq!(latin_degree(&spectra_ensemble(1).unwrap()), q(1, 2));
    }

    #[test]
    fn closed_forms() {
        for len in 1..=7 {
            assert_eq!(
                latin_degree(&permutation_ensemble(len).unwrap()),
                permutation_closed_form(len as u64)
            );
        }
        for len in (2..=12).step_by(2) {
            assert_eq!(
                latin_degree(&balanced_ensemble(len).unwrap()),
                balanced_closed_form(len as u64).unwrap()
            );
        }
    }

    #[test]
    fn independent_product_has_degree_one() {
        let xs = [[-1i64, 0, 3], [5, 7, 9]];
        let px = [q(1, 6), q(1, 3), q(1, 2)];
        let py = [q(1, 5), q(2, 5), q(2, 5)];
        let mut support = Vec::new();
        let mut prob = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                support.push(vec![xs[0][i], xs[1][j]]);
                prob.push(&px[i] * &py[j]);
            }
        }
        let e = TupleEnsemble::new("grid", 2, support, prob).unwrap();
        assert_eq!(latin_degree(&e), BigRational::one());
        assert_eq!(marginals(&e).get(0, 3), q(1, 2));
        assert_eq!(marginals(&e).get(0, 4), BigRational::zero());
    }

    #[test]
    fn spectra_structure() {
        for n in 1..=3u32 {
            let e = spectra_ensemble(n).unwrap();
            let len = 1u64 << n;
            assert_eq!(e.support().len(), 1 << len);
            assert!(e
                .support()
                .iter()
                .all(|b| b.iter().map(|x| x * x).sum::<i64>() == (len * len) as i64));
            let m = marginals(&e);
            for c in &m.coords {
                for (x, p) in c {
                    assert_eq!(p, &spectra_marginal(len, *x));
                }
                assert_eq!(c.values().sum::<BigRational>(), BigRational::one());
            }
        }
        assert_eq!(spectra_ensemble(3).unwrap().len(), 8);
        assert!(spectra_ensemble(5).is_err());
    }

    #[test]
    fn spectra_below_bound() {
        let p = PrecisionPolicy::default();
        for n in 1..=3u32 {
            let l = latin_degree(&spectra_ensemble(n).unwrap());
            let v = check_prop2(n, &l, &p);
            assert_eq!(v.status, Status::Holds, "n = {n}");
        }
    }

    #[test]
    fn bound_values() {
        let b = prop2_bound(1, 80).unwrap();
        let direct = (23.0f64 / 18.0).exp() * 8.0 / (2.0 * std::f64::consts::PI * std::f64::consts::E);
        assert!(b.lo().approx_f64() <= direct + 1e-12 && direct - 1e-12 <= b.hi().approx_f64());
        assert!((direct - 1.6810).abs() < 1e-4);
        let b = prop2_bound(2, 80).unwrap();
        assert!((b.approx_mid() - 0.1968354).abs() < 1e-7);
        // The base 8/(πeN) is below 1 already at N = 1.
        let ctx = certified_context(64);
        assert!((&ctx.int(8) - &(ctx.pi() * ctx.e())).is_negative());
        assert!(prop2_bound(0, 64).is_err());
    }

    #[test]
    fn invalid_ensembles() {
        assert!(TupleEnsemble::uniform("e", 2, vec![]).is_err());
        assert!(TupleEnsemble::uniform("e", 2, vec![vec![1]]).is_err());
        assert!(TupleEnsemble::uniform("e", 1, vec![vec![1], vec![1]]).is_err());
        assert!(TupleEnsemble::new("e", 1, vec![vec![1], vec![2]], vec![q(1, 2), q(1, 3)]).is_err());
        assert!(TupleEnsemble::new("e", 1, vec![vec![1], vec![2]], vec![q(3, 2), q(-1, 2)]).is_err());
        assert!(balanced_ensemble(3).is_err());
        assert!(permutation_ensemble(0).is_err());
    }

    #[test]
    fn monte_carlo_covers_exact() {
        for (e, seed) in [
            (permutation_ensemble(4).unwrap(), 1),
            (balanced_ensemble(8).unwrap(), 2),
            (spectra_ensemble(2).unwrap(), 3),
        ] {
            let exact = latin_degree(&e);
            let mc = monte_carlo(&e, 20_000, seed);
            assert!(mc.covers(&exact), "{}: {mc:?} vs {exact}", e.name);
            assert_eq!(mc.hits, monte_carlo(&e, 20_000, seed).hits);
        }
    }

    #[test]
    fn report_shape() {
        let e = spectra_ensemble(1).unwrap();
        let r = latin_report(&e, Some(1), &PrecisionPolicy::default()).unwrap();
        assert_eq!((r.l_num.as_str(), r.l_den.as_str(), r.len), ("1", "2", 2));
        assert!(r.verdict.as_ref().unwrap().holds());
        let j = serde_json::to_value(&r).unwrap();
        for key in [
            "ensemble",
            "N",
            "L_num",
            "L_den",
            "L_decimal",
            "bound_lo",
            "bound_hi",
            "ratio",
        ] {
            assert!(j.get(key).is_some(), "{key}");
        }
    }
}
