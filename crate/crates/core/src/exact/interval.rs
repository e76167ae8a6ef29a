//! Closed intervals with outward-rounded arithmetic, generic over the
//! endpoint scalar.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::decimal::format_directed;
use super::dyadic::Dyadic;
use super::endpoint::{Endpoint, Round};

/// `[lo, hi]` containing some real value. `prec` is the number of
/// significant bits results of arithmetic on this interval are rounded to.
#[derive(Clone, PartialEq)]
pub struct Interval<E> {
    lo: E,
    hi: E,
    prec: u32,
}

impl<E: Endpoint> Interval<E> {
    /// Panics if `lo > hi`.
    pub fn new(lo: E, hi: E, prec: u32) -> Self {
        assert!(lo <= hi, "inverted interval {lo:?} > {hi:?}");
        Interval { lo, hi, prec }
    }

    pub fn point(x: E, prec: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            prec,
        }
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        Interval {
            lo: E::from_bigint(v, Round::Down, prec),
            hi: E::from_bigint(v, Round::Up, prec),
            prec,
        }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(v), prec)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den < &BigInt::zero() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        Interval {
            lo: E::from_ratio(&num, &den, Round::Down, prec),
            hi: E::from_ratio(&num, &den, Round::Up, prec),
            prec,
        }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(E::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::point(E::one(), prec)
    }

    pub fn lo(&self) -> &E {
        &self.lo
    }

    pub fn hi(&self) -> &E {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Certainly positive.
    pub fn is_positive(&self) -> bool {
        self.lo > E::zero()
    }

    /// Certainly negative.
    pub fn is_negative(&self) -> bool {
        self.hi < E::zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    /// `max(|lo|, |hi|)`.
    pub fn mag(&self) -> E {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        if a > b {
            a
        } else {
            b
        }
    }

    /// Width rounded up.
    pub fn width(&self) -> E {
        self.hi.sub_dir(&self.lo, Round::Up, self.prec)
    }

    pub fn is_subset_of(&self, o: &Self) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    pub fn overlaps(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// Intersection, `None` when disjoint.
    pub fn intersect(&self, o: &Self) -> Option<Self> {
        let lo = if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi < o.hi { self.hi.clone() } else { o.hi.clone() };
        (lo <= hi).then(|| Interval {
            lo,
            hi,
            prec: self.prec.max(o.prec),
        })
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Self) -> Self {
        let lo = if self.lo < o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi > o.hi { self.hi.clone() } else { o.hi.clone() };
        Interval {
            lo,
            hi,
            prec: self.prec.max(o.prec),
        }
    }

    /// Widen symmetrically by `r ≥ 0`.
    pub fn inflate(&self, r: &E) -> Self {
        Interval {
            lo: self.lo.sub_dir(r, Round::Down, self.prec),
            hi: self.hi.add_dir(r, Round::Up, self.prec),
            prec: self.prec,
        }
    }

    /// Round endpoints outward to `prec` bits.
    pub fn round_to(&self, prec: u32) -> Self {
        Interval {
            lo: self.lo.add_dir(&E::zero(), Round::Down, prec),
            hi: self.hi.add_dir(&E::zero(), Round::Up, prec),
            prec,
        }
    }

    pub fn mul_pow2(&self, e: i64) -> Self {
        Interval {
            lo: self.lo.mul_pow2(e, Round::Down),
            hi: self.hi.mul_pow2(e, Round::Up),
            prec: self.prec,
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self * &Interval::from_i64(k, self.prec)
    }

    pub fn add_i64(&self, k: i64) -> Self {
        self + &Interval::from_i64(k, self.prec)
    }

    pub fn square(&self) -> Self {
        let p = self.prec;
        if self.lo >= E::zero() {
            Interval::new(
                self.lo.mul_dir(&self.lo, Round::Down, p),
                self.hi.mul_dir(&self.hi, Round::Up, p),
                p,
            )
        } else if self.hi <= E::zero() {
            Interval::new(
                self.hi.mul_dir(&self.hi, Round::Down, p),
                self.lo.mul_dir(&self.lo, Round::Up, p),
                p,
            )
        } else {
            let m = self.mag();
            Interval::new(E::zero(), m.mul_dir(&m, Round::Up, p), p)
        }
    }

    /// Square root, `None` if the interval reaches below zero.
    pub fn sqrt(&self) -> Option<Self> {
        if self.lo < E::zero() {
            return None;
        }
        Some(Interval {
            lo: self.lo.sqrt_dir(Round::Down, self.prec),
            hi: self.hi.sqrt_dir(Round::Up, self.prec),
            prec: self.prec,
        })
    }

    /// `self^n` by repeated squaring.
    pub fn powi(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Interval::one(self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Division, `None` if the divisor contains zero.
    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let p = self.prec.max(o.prec);
        let cands = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = cands
            .iter()
            .map(|(a, b)| a.div_dir(b, Round::Down, p))
            .reduce(|x, y| if y < x { y } else { x })
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| a.div_dir(b, Round::Up, p))
            .reduce(|x, y| if y > x { y } else { x })
            .unwrap();
        Some(Interval { lo, hi, prec: p })
    }

    /// Exact dyadic copy, `None` if an endpoint is not finite.
    pub fn to_certified(&self) -> Option<Interval<Dyadic>> {
        Some(Interval {
            lo: self.lo.to_dyadic()?,
            hi: self.hi.to_dyadic()?,
            prec: self.prec,
        })
    }

    pub fn approx_mid(&self) -> f64 {
        0.5 * (self.lo.approx_f64() + self.hi.approx_f64())
    }
}

impl Interval<Dyadic> {
    /// Midpoint (exact).
    pub fn mid(&self) -> Dyadic {
        (self.lo.clone() + self.hi.clone()).shifted(-1)
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    /// Lower endpoint rounded down to `digits` significant decimals.
    pub fn lo_decimal(&self, digits: usize) -> String {
        format_directed(&self.lo, digits, Round::Down)
    }

    /// Upper endpoint rounded up to `digits` significant decimals.
    pub fn hi_decimal(&self, digits: usize) -> String {
        format_directed(&self.hi, digits, Round::Up)
    }

    /// Midpoint to `digits` significant decimals.
    pub fn mid_decimal(&self, digits: usize) -> String {
        format_directed(&self.mid(), digits, Round::Down)
    }
}

impl<'a, E: Endpoint> Add<&'a Interval<E>> for &'a Interval<E> {
    type Output = Interval<E>;

    fn add(self, o: &'a Interval<E>) -> Interval<E> {
        let p = self.prec.max(o.prec);
        Interval {
            lo: self.lo.add_dir(&o.lo, Round::Down, p),
            hi: self.hi.add_dir(&o.hi, Round::Up, p),
            prec: p,
        }
    }
}

impl<'a, E: Endpoint> Sub<&'a Interval<E>> for &'a Interval<E> {
    type Output = Interval<E>;

    fn sub(self, o: &'a Interval<E>) -> Interval<E> {
        let p = self.prec.max(o.prec);
        Interval {
            lo: self.lo.sub_dir(&o.hi, Round::Down, p),
            hi: self.hi.sub_dir(&o.lo, Round::Up, p),
            prec: p,
        }
    }
}

impl<'a, E: Endpoint> Mul<&'a Interval<E>> for &'a Interval<E> {
    type Output = Interval<E>;

    fn mul(self, o: &'a Interval<E>) -> Interval<E> {
        let p = self.prec.max(o.prec);
        let z = E::zero();
        if self.lo >= z && o.lo >= z {
            return Interval {
                lo: self.lo.mul_dir(&o.lo, Round::Down, p),
                hi: self.hi.mul_dir(&o.hi, Round::Up, p),
                prec: p,
            };
        }
        let cands = [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ];
        let lo = cands
            .iter()
            .map(|(a, b)| a.mul_dir(b, Round::Down, p))
            .reduce(|x, y| if y < x { y } else { x })
            .unwrap();
        let hi = cands
            .iter()
            .map(|(a, b)| a.mul_dir(b, Round::Up, p))
            .reduce(|x, y| if y > x { y } else { x })
            .unwrap();
        Interval { lo, hi, prec: p }
    }
}

impl<'a, E: Endpoint> Div<&'a Interval<E>> for &'a Interval<E> {
    type Output = Interval<E>;

    /// Panics if the divisor contains zero; see [`Interval::checked_div`].
    fn div(self, o: &'a Interval<E>) -> Interval<E> {
        self.checked_div(o)
            .expect("interval division by a range containing zero")
    }
}

impl<E: Endpoint> Neg for &Interval<E> {
    type Output = Interval<E>;

    fn neg(self) -> Interval<E> {
        Interval {
            lo: self.hi.negate(),
            hi: self.lo.negate(),
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<E: Endpoint> $tr<Interval<E>> for Interval<E> {
            type Output = Interval<E>;

            fn $m(self, o: Interval<E>) -> Interval<E> {
                (&self).$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<E: Endpoint> fmt::Debug for Interval<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]@{}", self.lo, self.hi, self.prec)
    }
}

impl fmt::Display for Interval<Dyadic> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(20), self.hi_decimal(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type I = Interval<Dyadic>;

    #[test]
    fn mixed_sign_multiplication() {
        let a = I::new(Dyadic::from_i64(-2), Dyadic::from_i64(3), 64);
        let b = I::new(Dyadic::from_i64(-5), Dyadic::from_i64(1), 64);
        let c = &a * &b;
        assert_eq!(c.lo(), &Dyadic::from_i64(-15));
        assert_eq!(c.hi(), &Dyadic::from_i64(10));
    }

    #[test]
    fn ratio_enclosure_contains_value() {
        let q = BigRational::new(BigInt::from(14), BigInt::from(3));
        let i = I::from_rational(&q, 80);
        assert!(i.contains_rational(&q));
        assert!(!i.is_point());
        let neg = I::from_ratio(&BigInt::from(1), &BigInt::from(-3), 80);
        assert!(neg.is_negative());
    }

    #[test]
    fn powi_matches_repeated_products() {
        let x = I::from_ratio(&BigInt::from(3), &BigInt::from(2), 64);
        let p = x.powi(5);
        let q = BigRational::new(BigInt::from(243), BigInt::from(32));
        assert!(p.contains_rational(&q));
        assert!(p.is_point());
    }

    #[test]
    fn f64_interval_sum_contains_exact() {
        let a = Interval::<f64>::from_ratio(&BigInt::from(1), &BigInt::from(10), 53);
        let s = &(&a + &a) + &a;
        let c = s.to_certified().unwrap();
        assert!(c.contains_rational(&BigRational::new(3.into(), 10.into())));
    }

    #[test]
    fn division_by_zero_range_is_rejected() {
        let a = I::from_i64(1, 64);
        let z = I::new(Dyadic::from_i64(-1), Dyadic::from_i64(1), 64);
        assert!(a.checked_div(&z).is_none());
    }
}
