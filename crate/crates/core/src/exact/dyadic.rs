//! Exact binary fractions `mantissa · 2^exponent` with directed rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::endpoint::Round;

/// A dyadic rational. Normalised so the mantissa is odd (or the value is
/// zero with exponent 0), which makes equality structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `floor(m / 2^d)` or `ceil(m / 2^d)` for `d ≥ 0`.
fn shr_round(m: &BigInt, d: u64, r: Round) -> BigInt {
    if d == 0 || m.is_zero() {
        return m.clone();
    }
    let mag = m.magnitude();
    let q = BigInt::from(mag >> d);
    let inexact = mag.trailing_zeros().unwrap_or(0) < d;
    match (m.sign(), r, inexact) {
        (_, _, false) => {
            if m.sign() == Sign::Minus {
                -q
            } else {
                q
            }
        }
        (Sign::Minus, Round::Down, true) => -(q + BigInt::one()),
        (Sign::Minus, Round::Up, true) => -q,
        (_, Round::Down, true) => q,
        (_, Round::Up, true) => q + BigInt::one(),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_int(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1i64 << 52), biased - 1075)
        };
        Some(Dyadic::new(BigInt::from(sign * mant), exp))
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent_part(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Round to at most `prec` significant bits in direction `r`.
    pub fn rounded(self, r: Round, prec: u32) -> Self {
        let bits = self.mant.bits();
        let prec = u64::from(prec.max(2));
        if bits <= prec {
            return self;
        }
        let d = bits - prec;
        Dyadic::new(shr_round(&self.mant, d, r), self.exp + d as i64)
    }

    pub fn neg_exact(&self) -> Self {
        Dyadic {
            mant: -self.mant.clone(),
            exp: self.exp,
        }
    }

    pub fn shifted(&self, e: i64) -> Self {
        if self.mant.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + e,
        }
    }

    /// `floor(log2 |self|)`.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.mant.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// Directed division with `prec` significant bits.
    pub fn div_round(&self, o: &Self, r: Round, prec: u32) -> Self {
        assert!(!o.mant.is_zero(), "division by zero");
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        let want = i64::from(prec.max(2)) + 2;
        let shift = (want + o.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as u64;
        let (mut num, mut den) = (num, o.mant.clone());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let q = match r {
            Round::Down => num.div_floor(&den),
            Round::Up => -((-num).div_floor(&den)),
        };
        Dyadic::new(q, self.exp - o.exp - shift).rounded(r, prec)
    }

    /// Directed square root of a non-negative value.
    pub fn sqrt_round(&self, r: Round, prec: u32) -> Self {
        assert!(!self.mant.is_negative(), "square root of a negative value");
        if self.mant.is_zero() {
            return Dyadic::zero();
        }
        let want = 2 * i64::from(prec.max(2)) + 4;
        let mut shift = (want - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as u64;
        let mut s = m.sqrt();
        if r == Round::Up && &s * &s != m {
            s += 1;
        }
        Dyadic::new(s, (self.exp - shift) / 2).rounded(r, prec)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Round a rational to a dyadic with `prec` significant bits.
    pub fn from_rational(q: &BigRational, r: Round, prec: u32) -> Self {
        Dyadic::from_int(q.numer().clone()).div_round(&Dyadic::from_int(q.denom().clone()), r, prec)
    }

    pub fn to_f64_approx(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 60 {
            let d = bits - 60;
            (&self.mant >> d, self.exp + d as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_f64().unwrap_or(f64::NAN);
        let e = e.clamp(-2200, 2200) as i32;
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for Dyadic {
    fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, o: Dyadic) -> Dyadic {
        if self.mant.is_zero() {
            return o;
        }
        if o.mant.is_zero() {
            return self;
        }
        let e = self.exp.min(o.exp);
        let a = self.mant << (self.exp - e) as u64;
        let b = o.mant << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;

    fn mul(self, o: Dyadic) -> Dyadic {
        Dyadic::new(self.mant * o.mant, self.exp + o.exp)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        self.neg_exact()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), o.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes, flipping for negatives.
        let la = self.floor_log2().unwrap();
        let lb = o.floor_log2().unwrap();
        let mag = if la != lb {
            la.cmp(&lb)
        } else {
            let e = self.exp.min(o.exp);
            let a = self.mant.magnitude() << (self.exp - e) as u64;
            let b = o.mant.magnitude() << (o.exp - e) as u64;
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::decimal::format_directed(self, 20, Round::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn normalisation_makes_equality_structural() {
        assert_eq!(d(4, 0), d(1, 2));
        assert_eq!(d(0, 7), Dyadic::zero());
    }

    #[test]
    fn rounding_directions() {
        // 7 = 0b111 rounded to 2 bits
        assert_eq!(d(7, 0).rounded(Round::Down, 2), d(6, 0));
        assert_eq!(d(7, 0).rounded(Round::Up, 2), d(8, 0));
        assert_eq!(d(-7, 0).rounded(Round::Down, 2), d(-8, 0));
        assert_eq!(d(-7, 0).rounded(Round::Up, 2), d(-6, 0));
    }

    #[test]
    fn division_brackets_exact_quotient() {
        let one = d(1, 0);
        let three = d(3, 0);
        let lo = one.div_round(&three, Round::Down, 64);
        let hi = one.div_round(&three, Round::Up, 64);
        assert!(lo.clone() * three.clone() < one);
        assert!(hi.clone() * three < one.clone() + d(1, -60));
        assert!(lo < hi);
        let neg = d(-1, 0).div_round(&d(3, 0), Round::Down, 64);
        assert_eq!(neg, hi.neg_exact());
    }

    #[test]
    fn sqrt_brackets() {
        let two = d(2, 0);
        let lo = two.sqrt_round(Round::Down, 100);
        let hi = two.sqrt_round(Round::Up, 100);
        assert!(lo.clone() * lo < two);
        assert!(hi.clone() * hi > two);
        assert_eq!(d(9, 4).sqrt_round(Round::Down, 10), d(3, 2));
        assert_eq!(d(1, -2).sqrt_round(Round::Up, 10), d(1, -1));
    }

    #[test]
    fn ordering_across_exponents() {
        assert!(d(3, -1) < d(2, 0));
        assert!(d(-3, -1) > d(-2, 0));
        assert!(d(1, 100) > d(5, 90));
        assert_eq!(d(6, -1).cmp(&d(3, 0)), Ordering::Equal);
    }

    #[test]
    fn f64_round_trip() {
        for x in [0.1, -2.5, 1e-300, 5e-324, 1e300] {
            let dd = Dyadic::from_f64(x).unwrap();
            assert_eq!(dd.to_f64_approx(), x);
        }
    }
}
