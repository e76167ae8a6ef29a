//! Interval endpoint types and directed rounding.
//!
//! An [`Endpoint`] knows how to perform each arithmetic primitive rounded
//! toward −∞ or +∞. Two implementations exist: [`Dyadic`] (arbitrary
//! precision, exact mantissa × 2^exponent) and `f64` (hardware precision,
//! results nudged outward by one ulp whenever an error-free transformation
//! shows the rounded result is inexact).

use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_traits::{One, ToPrimitive, Zero};

use super::dyadic::Dyadic;

/// Rounding direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Self {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// Scalar usable as an interval endpoint.
///
/// `prec` is the number of significant mantissa bits kept after rounding.
/// Fixed-precision types ignore it.
pub trait Endpoint: Clone + PartialOrd + Debug + Send + Sync + Zero + One + 'static {
    /// True when raising `prec` actually tightens results.
    const ARBITRARY: bool;
    /// Mantissa bits carried when `prec` is ignored.
    const NATIVE_BITS: Option<u32>;

    fn from_bigint(v: &BigInt, r: Round, prec: u32) -> Self;
    fn from_ratio(num: &BigInt, den: &BigInt, r: Round, prec: u32) -> Self;
    fn add_dir(&self, o: &Self, r: Round, prec: u32) -> Self;
    fn sub_dir(&self, o: &Self, r: Round, prec: u32) -> Self;
    fn mul_dir(&self, o: &Self, r: Round, prec: u32) -> Self;
    /// Division; `o` must be non-zero.
    fn div_dir(&self, o: &Self, r: Round, prec: u32) -> Self;
    /// Square root; `self` must be non-negative.
    fn sqrt_dir(&self, r: Round, prec: u32) -> Self;
    fn negate(&self) -> Self;
    /// `self · 2^e`.
    fn mul_pow2(&self, e: i64, r: Round) -> Self;
    /// `floor(log2 |self|)`, `None` for zero or non-finite values.
    fn exponent(&self) -> Option<i64>;
    fn is_finite(&self) -> bool;
    /// Exact conversion; `None` for non-finite values.
    fn to_dyadic(&self) -> Option<Dyadic>;
    /// Nearest `f64` (approximate, for heuristics and display only).
    fn approx_f64(&self) -> f64;

    fn from_i64(v: i64, r: Round, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(v), r, prec)
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            self.negate()
        } else {
            self.clone()
        }
    }
}

fn nudge(x: f64, r: Round) -> f64 {
    match r {
        Round::Down => x.next_down(),
        Round::Up => x.next_up(),
    }
}

/// Given a rounded result `res` and the sign of `true − res`, pick the
/// correctly directed neighbour.
fn directed(res: f64, err_sign: f64, r: Round) -> f64 {
    if err_sign == 0.0 {
        return res;
    }
    match (r, err_sign > 0.0) {
        (Round::Down, true) | (Round::Up, false) => res,
        (Round::Down, false) | (Round::Up, true) => nudge(res, r),
    }
}

/// Results that overflowed or fell into the subnormal range, where the
/// error-free transformations stop being exact.
fn unreliable(res: f64) -> bool {
    !res.is_finite() || (res != 0.0 && res.abs() < f64::MIN_POSITIVE * 4.0) || res == 0.0
}

fn conservative(res: f64, r: Round) -> f64 {
    if res.is_nan() {
        return match r {
            Round::Down => f64::NEG_INFINITY,
            Round::Up => f64::INFINITY,
        };
    }
    if res.is_infinite() {
        return match (r, res > 0.0) {
            (Round::Down, true) => f64::MAX,
            (Round::Up, false) => f64::MIN,
            _ => res,
        };
    }
    nudge(res, r)
}

impl Endpoint for f64 {
    const ARBITRARY: bool = false;
    const NATIVE_BITS: Option<u32> = Some(53);

    fn from_bigint(v: &BigInt, r: Round, _prec: u32) -> Self {
        let bits = v.bits();
        if bits <= 53 {
            return v.to_i64().expect("fits in 53 bits") as f64;
        }
        let (sign, mag) = (v.sign(), v.magnitude());
        let shift = bits - 53;
        let top = (mag >> shift).to_u64().expect("53 bits") as f64;
        let inexact = mag.trailing_zeros().unwrap_or(0) < shift;
        let scale = |m: f64, rr: Round| m.mul_pow2(shift as i64, rr);
        match (sign, r) {
            (Sign::Minus, _) => {
                let mag_r = r.flip();
                let m = if inexact && mag_r == Round::Up { top + 1.0 } else { top };
                -scale(m, mag_r)
            }
            (_, Round::Down) => scale(top, Round::Down),
            (_, Round::Up) => scale(if inexact { top + 1.0 } else { top }, Round::Up),
        }
    }

    fn from_ratio(num: &BigInt, den: &BigInt, r: Round, prec: u32) -> Self {
        debug_assert!(den.sign() == Sign::Plus);
        // num/den with num rounded in r and den rounded against r keeps the
        // direction for positive num; for negative num the den rounding flips.
        let n = Self::from_bigint(num, r, prec);
        let d_dir = if num.sign() == Sign::Minus { r } else { r.flip() };
        let d = Self::from_bigint(den, d_dir, prec);
        Endpoint::div_dir(&n, &d, r, prec)
    }

    fn add_dir(&self, o: &Self, r: Round, _prec: u32) -> Self {
        let s = self + o;
        if !s.is_finite() {
            return conservative(s, r);
        }
        let bb = s - self;
        let err = (self - (s - bb)) + (o - bb);
        directed(s, err, r)
    }

    fn sub_dir(&self, o: &Self, r: Round, prec: u32) -> Self {
        Endpoint::add_dir(self, &-o, r, prec)
    }

    fn mul_dir(&self, o: &Self, r: Round, _prec: u32) -> Self {
        let p = self * o;
        if *self == 0.0 || *o == 0.0 {
            return 0.0;
        }
        if unreliable(p) {
            return conservative(p, r);
        }
        let err = self.mul_add(*o, -p);
        directed(p, err, r)
    }

    fn div_dir(&self, o: &Self, r: Round, _prec: u32) -> Self {
        if *self == 0.0 {
            return 0.0;
        }
        let q = self / o;
        if unreliable(q) {
            return conservative(q, r);
        }
        // a − q·b, exact by fma; true quotient − q has the sign of rem/b.
        let rem = (-q).mul_add(*o, *self);
        directed(q, rem * o.signum(), r)
    }

    fn sqrt_dir(&self, r: Round, _prec: u32) -> Self {
        if *self == 0.0 {
            return 0.0;
        }
        let s = f64::sqrt(*self);
        if unreliable(s) {
            return conservative(s, r);
        }
        let rem = (-s).mul_add(s, *self);
        directed(s, rem, r)
    }

    fn negate(&self) -> Self {
        -self
    }

    fn mul_pow2(&self, e: i64, r: Round) -> Self {
        if *self == 0.0 || !self.is_finite() {
            return *self;
        }
        let e = e.clamp(-4000, 4000) as i32;
        // Split the scaling so neither factor overflows on its own.
        let half = e / 2;
        let res = self * 2f64.powi(half) * 2f64.powi(e - half);
        if res.is_finite() && res.abs() >= f64::MIN_POSITIVE {
            return res;
        }
        if res.is_infinite() {
            return conservative(res, r);
        }
        // Underflow: the true value is a tiny non-zero number.
        match (r, *self > 0.0) {
            (Round::Down, true) | (Round::Up, false) => 0.0,
            (Round::Up, true) => f64::MIN_POSITIVE,
            (Round::Down, false) => -f64::MIN_POSITIVE,
        }
    }

    fn exponent(&self) -> Option<i64> {
        if *self == 0.0 || !self.is_finite() {
            return None;
        }
        let bits = self.abs().to_bits();
        let biased = (bits >> 52) as i64;
        if biased == 0 {
            let mant = bits & ((1u64 << 52) - 1);
            Some(-1074 + 63 - mant.leading_zeros() as i64)
        } else {
            Some(biased - 1023)
        }
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn to_dyadic(&self) -> Option<Dyadic> {
        Dyadic::from_f64(*self)
    }

    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Endpoint for Dyadic {
    const ARBITRARY: bool = true;
    const NATIVE_BITS: Option<u32> = None;

    fn from_bigint(v: &BigInt, r: Round, prec: u32) -> Self {
        Dyadic::new(v.clone(), 0).rounded(r, prec)
    }

    fn from_ratio(num: &BigInt, den: &BigInt, r: Round, prec: u32) -> Self {
        Dyadic::from_int(num.clone()).div_round(&Dyadic::from_int(den.clone()), r, prec)
    }

    fn add_dir(&self, o: &Self, r: Round, prec: u32) -> Self {
        (self.clone() + o.clone()).rounded(r, prec)
    }

    fn sub_dir(&self, o: &Self, r: Round, prec: u32) -> Self {
        (self.clone() + o.neg_exact()).rounded(r, prec)
    }

    fn mul_dir(&self, o: &Self, r: Round, prec: u32) -> Self {
        (self.clone() * o.clone()).rounded(r, prec)
    }

    fn div_dir(&self, o: &Self, r: Round, prec: u32) -> Self {
        self.div_round(o, r, prec)
    }

    fn sqrt_dir(&self, r: Round, prec: u32) -> Self {
        self.sqrt_round(r, prec)
    }

    fn negate(&self) -> Self {
        self.neg_exact()
    }

    fn mul_pow2(&self, e: i64, _r: Round) -> Self {
        self.shifted(e)
    }

    fn exponent(&self) -> Option<i64> {
        self.floor_log2()
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn to_dyadic(&self) -> Option<Dyadic> {
        Some(self.clone())
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64_approx()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_directed_add_brackets_inexact_sum() {
        let a = 0.1f64;
        let b = 0.2f64;
        let lo = Endpoint::add_dir(&a, &b, Round::Down, 53);
        let hi = Endpoint::add_dir(&a, &b, Round::Up, 53);
        assert!(lo < hi);
        let exact = Dyadic::from_f64(a).unwrap() + Dyadic::from_f64(b).unwrap();
        assert!(Dyadic::from_f64(lo).unwrap() <= exact);
        assert!(exact <= Dyadic::from_f64(hi).unwrap());
    }

    #[test]
    fn f64_exact_operations_stay_points() {
        assert_eq!(Endpoint::add_dir(&1.0f64, &2.0, Round::Down, 53), 3.0);
        assert_eq!(Endpoint::mul_dir(&3.0f64, &5.0, Round::Up, 53), 15.0);
        assert_eq!(Endpoint::div_dir(&1.0f64, &4.0, Round::Up, 53), 0.25);
        assert_eq!(Endpoint::sqrt_dir(&16.0f64, Round::Down, 53), 4.0);
    }

    #[test]
    fn f64_division_brackets_third() {
        let lo = Endpoint::div_dir(&1.0f64, &3.0, Round::Down, 53);
        let hi = Endpoint::div_dir(&1.0f64, &3.0, Round::Up, 53);
        let three = Dyadic::from_int(3.into());
        let one = Dyadic::from_int(1.into());
        assert!(Dyadic::from_f64(lo).unwrap() * three.clone() < one);
        assert!(Dyadic::from_f64(hi).unwrap() * three > one);
    }

    #[test]
    fn f64_from_bigint_brackets_large_values() {
        let v = (BigInt::from(1) << 80u32) + BigInt::from(12345);
        let lo = <f64 as Endpoint>::from_bigint(&v, Round::Down, 53);
        let hi = <f64 as Endpoint>::from_bigint(&v, Round::Up, 53);
        let d = Dyadic::from_int(v);
        assert!(Dyadic::from_f64(lo).unwrap() <= d);
        assert!(d <= Dyadic::from_f64(hi).unwrap());
        let neg_lo = <f64 as Endpoint>::from_bigint(&(-(BigInt::from(1) << 80u32) - 1), Round::Down, 53);
        assert!(neg_lo < -(2f64.powi(80)));
    }

    #[test]
    fn f64_exponent_matches_log2() {
        assert_eq!(Endpoint::exponent(&1.0f64), Some(0));
        assert_eq!(Endpoint::exponent(&0.75f64), Some(-1));
        assert_eq!(Endpoint::exponent(&1024.5f64), Some(10));
        assert_eq!(Endpoint::exponent(&f64::from_bits(1)), Some(-1074));
    }

    #[test]
    fn f64_underflow_is_conservative() {
        let up = Endpoint::mul_pow2(&1.0f64, -2000, Round::Up);
        let down = Endpoint::mul_pow2(&1.0f64, -2000, Round::Down);
        assert!(up > 0.0);
        assert_eq!(down, 0.0);
    }
}
