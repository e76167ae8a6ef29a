//! Exact numbers of the form `a + Σ c_p · log2(p)`.
//!
//! `a` and every `c_p` are rationals and `p` ranges over odd primes; powers
//! of two fold into `a`. Since the logarithms of distinct primes are
//! linearly independent over the rationals, this representation is
//! canonical: equality is structural, and a value with any non-zero log
//! coefficient is irrational, so its sign is always decided by refining an
//! interval enclosure.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::combinatorics::{binomial_prime_exponents, factor_u64};
use super::dyadic::Dyadic;
use super::elementary::{certified_context, fast_context, MathContext};
use super::endpoint::Endpoint;
use super::interval::Interval;
use crate::error::{Error, Result};
use crate::{CertifiedInterval, ExactRational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LogLinearNumber {
    rational: ExactRational,
    logs: BTreeMap<u64, ExactRational>,
}

fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl LogLinearNumber {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(a: ExactRational) -> Self {
        LogLinearNumber {
            rational: a,
            logs: BTreeMap::new(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    /// `a + c · log2(m)` for a positive integer `m`.
    pub fn new(a: ExactRational, c: ExactRational, m: u64) -> Self {
        assert!(m > 0, "log2 argument must be positive");
        let mut x = Self::from_rational(a);
        x.add_factored(&factor_u64(m), &c);
        x
    }

    /// `log2(m)` for a positive integer `m`.
    pub fn log2_u64(m: u64) -> Self {
        Self::new(ExactRational::zero(), ExactRational::one(), m)
    }

    /// `log2 C(n, k)`.
    pub fn log2_binomial(n: u64, k: u64) -> Self {
        let mut x = Self::zero();
        x.add_factored(&binomial_prime_exponents(n, k), &ExactRational::one());
        x
    }

    fn add_factored(&mut self, factors: &[(u64, u64)], c: &ExactRational) {
        for &(p, e) in factors {
            let coeff = c * BigInt::from(e);
            if p == 2 {
                self.rational += coeff;
            } else {
                let entry = self.logs.entry(p).or_insert_with(ExactRational::zero);
                *entry += coeff;
                if entry.is_zero() {
                    self.logs.remove(&p);
                }
            }
        }
    }

    pub fn rational_part(&self) -> &ExactRational {
        &self.rational
    }

    /// Non-zero `(prime, coefficient)` pairs.
    pub fn log_terms(&self) -> impl Iterator<Item = (u64, &ExactRational)> {
        self.logs.iter().map(|(p, c)| (*p, c))
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn as_rational(&self) -> Option<&ExactRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LogLinearNumber {
            rational: &self.rational * k,
            logs: self.logs.iter().map(|(p, c)| (*p, c * k)).collect(),
        }
    }

    /// Canonical `a + c · log2(m_num / m_den)` with coprime `m_num`, `m_den`.
    ///
    /// If every log coefficient is negative the sign is moved into `c` so
    /// that `m_den = 1` (e.g. `14/3 − log2 7` gives `c = −1, m = 7`). A
    /// rational value gives `c = 0, m = 1/1`.
    pub fn log_ratio_form(&self) -> (ExactRational, ExactRational, BigUint, BigUint) {
        if self.logs.is_empty() {
            return (
                self.rational.clone(),
                ExactRational::zero(),
                BigUint::one(),
                BigUint::one(),
            );
        }
        let lcm = self.logs.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<(u64, BigInt)> = self.logs.iter().map(|(p, c)| (*p, (c * &lcm).to_integer())).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, (_, e)| acc.gcd(e));
        let all_negative = ints.iter().all(|(_, e)| e.is_negative());
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, e) in &ints {
            let k = (e / &g).abs().to_usize().expect("exponent size");
            let pk = num_traits::pow(BigUint::from(*p), k);
            if e.is_positive() != all_negative {
                num *= pk;
            } else {
                den *= pk;
            }
        }
        let mut c = BigRational::new(g, lcm);
        if all_negative {
            c = -c;
        }
        (self.rational.clone(), c, num, den)
    }

    /// `(a, c, m)` with `self = a + c · log2(m)` and integer `m`, if such a
    /// form exists.
    pub fn single_log(&self) -> Option<(ExactRational, ExactRational, BigUint)> {
        let (a, c, num, den) = self.log_ratio_form();
        den.is_one().then_some((a, c, num))
    }

    pub fn enclose<E: Endpoint>(&self, ctx: &MathContext<E>) -> Interval<E> {
        let mut acc = ctx.rational(&self.rational);
        for (p, c) in &self.logs {
            let l = ctx.log2_int(&BigInt::from(*p)).expect("positive prime");
            acc = &acc + &(&l * &ctx.rational(c));
        }
        acc
    }

    pub fn enclose_certified(&self, precision: u32) -> CertifiedInterval {
        self.enclose(&certified_context(precision))
    }

    pub fn approx_f64(&self) -> f64 {
        let mut v = self.rational.to_f64().unwrap_or(f64::NAN);
        for (p, c) in &self.logs {
            v += c.to_f64().unwrap_or(f64::NAN) * (*p as f64).log2();
        }
        v
    }

    /// Exact sign, refining the enclosure until it excludes zero.
    pub fn signum(&self) -> Ordering {
        if self.logs.is_empty() {
            return self.rational.cmp(&ExactRational::zero());
        }
        let fast = self.enclose(fast_context());
        if fast.is_positive() {
            return Ordering::Greater;
        }
        if fast.is_negative() {
            return Ordering::Less;
        }
        let mut prec = 64;
        loop {
            let i: Interval<Dyadic> = self.enclose_certified(prec);
            if i.is_positive() {
                return Ordering::Greater;
            }
            if i.is_negative() {
                return Ordering::Less;
            }
            assert!(prec < 1 << 22, "sign of a non-zero log-linear value not resolved");
            prec *= 2;
        }
    }

    pub fn cmp_exact(&self, o: &Self) -> Ordering {
        (self - o).signum()
    }
}

impl<'a> Add<&'a LogLinearNumber> for &'a LogLinearNumber {
    type Output = LogLinearNumber;

    fn add(self, o: &'a LogLinearNumber) -> LogLinearNumber {
        let mut out = self.clone();
        out.rational += &o.rational;
        for (p, c) in &o.logs {
            let e = out.logs.entry(*p).or_insert_with(ExactRational::zero);
            *e += c;
            if e.is_zero() {
                out.logs.remove(p);
            }
        }
        out
    }
}

impl<'a> Sub<&'a LogLinearNumber> for &'a LogLinearNumber {
    type Output = LogLinearNumber;

    fn sub(self, o: &'a LogLinearNumber) -> LogLinearNumber {
        self + &(-o)
    }
}

impl Neg for &LogLinearNumber {
    type Output = LogLinearNumber;

    fn neg(self) -> LogLinearNumber {
        self.scale(&-ExactRational::one())
    }
}

impl Add for LogLinearNumber {
    type Output = LogLinearNumber;

    fn add(self, o: LogLinearNumber) -> LogLinearNumber {
        &self + &o
    }
}

impl Sub for LogLinearNumber {
    type Output = LogLinearNumber;

    fn sub(self, o: LogLinearNumber) -> LogLinearNumber {
        &self - &o
    }
}

fn fmt_rational(q: &ExactRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for LogLinearNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.rational.is_zero() || self.logs.is_empty() {
            write!(f, "{}", fmt_rational(&self.rational))?;
            first = false;
        }
        for (p, c) in &self.logs {
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            if mag.is_one() {
                write!(f, "log2({p})")?;
            } else {
                write!(f, "{}*log2({p})", fmt_rational(&mag))?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LogLinearNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogLinear({self})")
    }
}

fn parse_rational(s: &str) -> Result<ExactRational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

fn parse_term(t: &str) -> Result<LogLinearNumber> {
    let Some(start) = t.find("log2(") else {
        return Ok(LogLinearNumber::from_rational(parse_rational(t)?));
    };
    let close = t[start..]
        .find(')')
        .map(|i| start + i)
        .ok_or_else(|| Error::Parse(format!("unclosed log2 in `{t}`")))?;
    let m: u64 = t[start + 5..close]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid log2 argument in `{t}`")))?;
    if m == 0 {
        return Err(Error::Parse("log2 argument must be positive".into()));
    }
    let mut coeff = ExactRational::one();
    let before = t[..start].trim();
    if !before.is_empty() {
        let before = before
            .strip_suffix('*')
            .ok_or_else(|| Error::Parse(format!("expected `*` before log2 in `{t}`")))?;
        coeff = parse_rational(before)?;
    }
    let after = t[close + 1..].trim();
    if !after.is_empty() {
        let den = after
            .strip_prefix('/')
            .ok_or_else(|| Error::Parse(format!("unexpected `{after}` after log2")))?;
        let den = parse_rational(den)?;
        if den.is_zero() {
            return Err(Error::Parse("division by zero".into()));
        }
        coeff /= den;
    }
    Ok(LogLinearNumber::new(ExactRational::zero(), coeff, m))
}

/// Accepts sums such as `1/6`, `14/3 - log2(7)`, `2/3 - 1/8*log2(7)` or
/// `log2(7)/8`.
impl FromStr for LogLinearNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut acc = LogLinearNumber::zero();
        let mut sign = 1i64;
        let mut cur = String::new();
        let mut depth = 0;
        let flush = |cur: &mut String, sign: i64, acc: &mut LogLinearNumber| -> Result<()> {
            if cur.is_empty() {
                return Err(Error::Parse("dangling operator".into()));
            }
            let t = parse_term(cur)?;
            *acc = &*acc + &t.scale(&BigRational::from_integer(sign.into()));
            cur.clear();
            Ok(())
        };
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch)
                }
                ')' => {
                    depth -= 1;
                    cur.push(ch)
                }
                '+' | '-' if depth == 0 => {
                    if i == 0 {
                        sign = if ch == '-' { -1 } else { 1 };
                        continue;
                    }
                    flush(&mut cur, sign, &mut acc)?;
                    sign = if ch == '-' { -1 } else { 1 };
                }
                _ => cur.push(ch),
            }
        }
        flush(&mut cur, sign, &mut acc)?;
        Ok(acc)
    }
}
