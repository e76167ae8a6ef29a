//! Certified elementary functions and constants.
//!
//! A [`MathContext`] fixes a target precision and carries enclosures of
//! ln 2, π, e and log2 e. Logarithms use reduction to `[1/√2, √2)` and the
//! `atanh` series; exponentials use reduction by multiples of ln 2,
//! halving, a Taylor series and repeated squaring. Every series is closed
//! with an explicit tail bound.
//!
//! For arbitrary-precision endpoints each function result is widened by a
//! bound that exceeds the width any higher-precision evaluation can have,
//! so enclosures at increasing precision are nested.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dyadic::Dyadic;
use super::endpoint::{Endpoint, Round};
use super::interval::Interval;
use crate::error::{domain, Result};

/// Extra bits carried beyond the requested precision.
pub const GUARD_BITS: u32 = 32;

/// Named constants available through [`const_enclosure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
    Log2E,
    Ln2,
}

impl std::str::FromStr for Constant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pi" => Ok(Constant::Pi),
            "e" => Ok(Constant::E),
            "log2_e" => Ok(Constant::Log2E),
            "ln2" => Ok(Constant::Ln2),
            other => domain(format!("unknown constant `{other}`")),
        }
    }
}

pub struct MathContext<E> {
    prec: u32,
    out: u32,
    compute: u32,
    ln2_raw: Interval<E>,
    ln2: Interval<E>,
    pi: Interval<E>,
    e: Interval<E>,
    log2e: Interval<E>,
}

fn tiny<E: Endpoint>(exp: i64) -> E {
    E::one().mul_pow2(exp, Round::Up)
}

/// `atanh(t)` for `|t| ≤ 1/2`.
fn atanh_series<E: Endpoint>(t: &Interval<E>, cp: u32) -> Interval<E> {
    let Some(t_exp) = t.mag().exponent() else {
        return Interval::zero(cp);
    };
    let t2 = t.square();
    let mut term = t.clone();
    let mut sum = t.clone();
    let stop = t_exp - i64::from(cp) - 2;
    let mut i = 0i64;
    loop {
        i += 1;
        term = &term * &t2;
        sum = &sum + &(&term / &Interval::from_i64(2 * i + 1, cp));
        match term.mag().exponent() {
            Some(e) if e >= stop => {}
            _ => break,
        }
    }
    // Remaining terms are bounded by |t|^(2i+3)/(1 − t²) ≤ 2·|term|·t².
    let tail = term.mag().mul_dir(t2.hi(), Round::Up, cp).mul_pow2(1, Round::Up);
    sum.inflate(&tail)
}

/// `atan(x)` for `0 < x ≤ 1/2`.
fn atan_series<E: Endpoint>(x: &Interval<E>, cp: u32) -> Interval<E> {
    let x2 = x.square();
    let mut term = x.clone();
    let mut sum = x.clone();
    let stop = -i64::from(cp) - 4;
    let mut i = 0i64;
    loop {
        i += 1;
        term = &term * &x2;
        let add = &term / &Interval::from_i64(2 * i + 1, cp);
        sum = if i % 2 == 1 { &sum - &add } else { &sum + &add };
        match term.mag().exponent() {
            Some(e) if e >= stop => {}
            _ => break,
        }
    }
    // Alternating with decreasing terms: the remainder is below the next term.
    let tail = term.mag().mul_dir(x2.hi(), Round::Up, cp);
    sum.inflate(&tail)
}

fn ln2_series<E: Endpoint>(cp: u32) -> Interval<E> {
    let third = Interval::from_ratio(&BigInt::one(), &BigInt::from(3), cp);
    atanh_series(&third, cp).mul_pow2(1)
}

fn pi_series<E: Endpoint>(cp: u32) -> Interval<E> {
    let a = atan_series(&Interval::from_ratio(&BigInt::one(), &BigInt::from(5), cp), cp);
    let b = atan_series(&Interval::from_ratio(&BigInt::one(), &BigInt::from(239), cp), cp);
    &a.scale_i64(16) - &b.scale_i64(4)
}

impl<E: Endpoint> MathContext<E> {
    pub fn new(prec: u32) -> Self {
        let prec = prec.max(2);
        let (out, compute) = match E::NATIVE_BITS {
            Some(bits) => (bits, bits + 7),
            None => (prec + GUARD_BITS + 8, prec + GUARD_BITS + 24),
        };
        let ln2_raw = ln2_series::<E>(compute + 40);
        let mut ctx = MathContext {
            prec,
            out,
            compute,
            ln2: ln2_raw.clone(),
            ln2_raw,
            pi: Interval::zero(out),
            e: Interval::zero(out),
            log2e: Interval::zero(out),
        };
        ctx.ln2 = ctx.finish(ctx.ln2_raw.clone());
        ctx.pi = ctx.finish(pi_series::<E>(compute));
        let e_raw = ctx.exp_point_raw(&E::one(), compute);
        ctx.e = ctx.finish(e_raw);
        ctx.log2e = &Interval::one(out) / &ctx.ln2;
        ctx
    }

    /// Requested precision in bits.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Precision of intervals produced by this context.
    pub fn work_prec(&self) -> u32 {
        self.out
    }

    pub fn int(&self, v: i64) -> Interval<E> {
        Interval::from_i64(v, self.out)
    }

    pub fn big(&self, v: &BigInt) -> Interval<E> {
        Interval::from_int(v, self.out)
    }

    pub fn ratio(&self, num: i64, den: i64) -> Interval<E> {
        Interval::from_ratio(&BigInt::from(num), &BigInt::from(den), self.out)
    }

    pub fn rational(&self, q: &BigRational) -> Interval<E> {
        Interval::from_rational(q, self.out)
    }

    pub fn ln2(&self) -> &Interval<E> {
        &self.ln2
    }

    pub fn pi(&self) -> &Interval<E> {
        &self.pi
    }

    pub fn e(&self) -> &Interval<E> {
        &self.e
    }

    pub fn log2e(&self) -> &Interval<E> {
        &self.log2e
    }

    pub fn constant(&self, c: Constant) -> &Interval<E> {
        match c {
            Constant::Pi => &self.pi,
            Constant::E => &self.e,
            Constant::Log2E => &self.log2e,
            Constant::Ln2 => &self.ln2,
        }
    }

    /// Widen a raw series result so enclosures nest across precisions, then
    /// round to the output precision.
    fn finish(&self, raw: Interval<E>) -> Interval<E> {
        if !E::ARBITRARY {
            return raw.with_prec(self.out);
        }
        let Some(mag_exp) = raw.mag().exponent() else {
            return raw.with_prec(self.out);
        };
        let q = i64::from(self.prec + GUARD_BITS);
        let pad: E = tiny(mag_exp + 1 - q + 4);
        raw.inflate(&pad).round_to(self.out)
    }

    /// Accept a raw result only if its width is at most `2^(e − prec − GUARD)`
    /// where `2^e` bounds its magnitude.
    fn narrow_enough(&self, raw: &Interval<E>) -> bool {
        if !E::ARBITRARY {
            return true;
        }
        let Some(mag_exp) = raw.mag().exponent() else {
            return true;
        };
        match raw.width().exponent() {
            None => true,
            Some(w) => w < mag_exp + 1 - i64::from(self.prec + GUARD_BITS),
        }
    }

    fn refine<F: Fn(u32) -> Interval<E>>(&self, f: F) -> Interval<E> {
        let mut cp = self.compute;
        loop {
            let raw = f(cp);
            if self.narrow_enough(&raw) || cp > self.compute + 512 {
                return self.finish(raw);
            }
            cp += 64;
        }
    }

    fn ln2_at(&self, cp: u32) -> Interval<E> {
        if cp + 40 <= self.ln2_raw.prec() || !E::ARBITRARY {
            self.ln2_raw.clone()
        } else {
            ln2_series(cp + 40)
        }
    }

    fn ln_point_raw(&self, x: &E, cp: u32) -> Interval<E> {
        let mut j = x.exponent().expect("positive argument");
        let mut m = x.mul_pow2(-j, Round::Down);
        let sqrt2ish = E::from_ratio(&BigInt::from(181), &BigInt::from(128), Round::Down, cp);
        if m > sqrt2ish {
            m = m.mul_pow2(-1, Round::Down);
            j += 1;
        }
        let mi = Interval::point(m, cp);
        let one = Interval::one(cp);
        let t = &(&mi - &one) / &(&mi + &one);
        let s = atanh_series(&t, cp).mul_pow2(1);
        if j == 0 {
            s
        } else {
            let bits = 64 - j.unsigned_abs().leading_zeros();
            let ln2 = self.ln2_at(cp + bits);
            &s + &ln2.scale_i64(j)
        }
    }

    fn exp_point_raw(&self, x: &E, cp: u32) -> Interval<E> {
        if x.is_zero() {
            return Interval::one(cp);
        }
        let xf = x.approx_f64();
        assert!(xf.abs() < 1e9, "exp argument out of supported range: {xf}");
        let k = (xf / std::f64::consts::LN_2).round() as i64;
        let kbits = 64 - k.unsigned_abs().leading_zeros();
        let xi = Interval::point(x.clone(), cp + kbits);
        let r = if k == 0 {
            xi
        } else {
            &xi - &self.ln2_at(cp + kbits).scale_i64(k)
        };
        let halvings = if E::ARBITRARY { 8 } else { 4 };
        let r = r.mul_pow2(-halvings).round_to(cp + halvings as u32);
        let cpw = cp + halvings as u32;
        let mut term = Interval::one(cpw);
        let mut sum = Interval::one(cpw);
        let stop = -i64::from(cpw) - 2;
        let mut i = 0i64;
        loop {
            i += 1;
            term = &(&term * &r) / &Interval::from_i64(i, cpw);
            sum = &sum + &term;
            match term.mag().exponent() {
                Some(e) if e >= stop => {}
                _ => break,
            }
        }
        // |r| ≤ 1/2 makes the remainder at most 2·|term|·|r|.
        let tail = term.mag().mul_dir(&r.mag(), Round::Up, cpw).mul_pow2(1, Round::Up);
        let mut y = sum.inflate(&tail);
        for _ in 0..halvings {
            y = y.square();
        }
        y.mul_pow2(k)
    }

    /// Natural logarithm; `None` unless the argument is certainly positive.
    pub fn ln(&self, x: &Interval<E>) -> Option<Interval<E>> {
        if !x.is_positive() || !x.is_finite() {
            return None;
        }
        if x.is_point() {
            return Some(self.refine(|cp| self.ln_point_raw(x.lo(), cp)));
        }
        if !E::ARBITRARY {
            // ln(hi) ≤ ln(lo) + (hi − lo)/lo: one series for narrow inputs.
            let lo = self.ln_point_raw(x.lo(), self.compute);
            let rel = x.width().div_dir(x.lo(), Round::Up, self.out);
            if rel < tiny(-20) {
                return Some(Interval::new(
                    lo.lo().clone(),
                    lo.hi().add_dir(&rel, Round::Up, self.out),
                    self.out,
                ));
            }
        }
        let lo = self.refine(|cp| self.ln_point_raw(x.lo(), cp));
        let hi = self.refine(|cp| self.ln_point_raw(x.hi(), cp));
        Some(Interval::new(lo.lo().clone(), hi.hi().clone(), self.out))
    }

    pub fn log2(&self, x: &Interval<E>) -> Option<Interval<E>> {
        Some(&self.ln(x)? / &self.ln2)
    }

    pub fn exp(&self, x: &Interval<E>) -> Interval<E> {
        if x.is_point() {
            return self.refine(|cp| self.exp_point_raw(x.lo(), cp));
        }
        let lo = self.refine(|cp| self.exp_point_raw(x.lo(), cp));
        let hi = self.refine(|cp| self.exp_point_raw(x.hi(), cp));
        Interval::new(lo.lo().clone(), hi.hi().clone(), self.out)
    }

    /// `2^x` as `exp(x·ln 2)`.
    pub fn exp2(&self, x: &Interval<E>) -> Interval<E> {
        self.exp(&(x * &self.ln2))
    }

    pub fn sqrt(&self, x: &Interval<E>) -> Option<Interval<E>> {
        let p = x.prec().max(self.out);
        x.clone().with_prec(p).sqrt()
    }

    /// `ln v` for a positive integer.
    pub fn ln_int(&self, v: &BigInt) -> Option<Interval<E>> {
        if v <= &BigInt::zero() {
            return None;
        }
        if E::ARBITRARY {
            let d = E::from_bigint(v, Round::Down, u32::MAX);
            return self.ln(&Interval::point(d, self.out));
        }
        let bits = v.bits();
        if bits <= 60 {
            return self.ln(&self.big(v));
        }
        // v ∈ [t, t + 1] · 2^shift keeps the f64 range out of play.
        let shift = bits - 60;
        let t: BigInt = v >> shift;
        let ti = Interval::new(
            E::from_bigint(&t, Round::Down, 60),
            E::from_bigint(&(t + 1), Round::Up, 60),
            self.out,
        );
        Some(&self.ln(&ti)? + &self.ln2.scale_i64(shift as i64))
    }

    pub fn log2_int(&self, v: &BigInt) -> Option<Interval<E>> {
        Some(&self.ln_int(v)? / &self.ln2)
    }

    /// `ln(num/den)` for positive integers.
    pub fn ln_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Interval<E>> {
        if E::ARBITRARY {
            Some(&self.ln_int(num)? - &self.ln_int(den)?)
        } else {
            self.ln(&Interval::from_ratio(num, den, self.out))
        }
    }
}

static FAST: LazyLock<MathContext<f64>> = LazyLock::new(|| MathContext::new(53));
static CERTIFIED: LazyLock<RwLock<HashMap<u32, Arc<MathContext<Dyadic>>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Process-wide hardware-precision context.
pub fn fast_context() -> &'static MathContext<f64> {
    &FAST
}

/// Cached arbitrary-precision context for `prec` bits.
pub fn certified_context(prec: u32) -> Arc<MathContext<Dyadic>> {
    if let Some(ctx) = CERTIFIED.read().expect("context cache").get(&prec) {
        return ctx.clone();
    }
    let ctx = Arc::new(MathContext::new(prec));
    CERTIFIED
        .write()
        .expect("context cache")
        .entry(prec)
        .or_insert(ctx)
        .clone()
}

/// Enclosure of a named constant, width at most `2^(−precision)`.
pub fn const_enclosure(c: Constant, precision: u32) -> Interval<Dyadic> {
    certified_context(precision).constant(c).clone()
}

/// Same as [`const_enclosure`] with the constant given by name
/// (`pi`, `e`, `log2_e`, `ln2`).
pub fn const_enclosure_named(name: &str, precision: u32) -> Result<Interval<Dyadic>> {
    Ok(const_enclosure(name.parse()?, precision))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn within(i: &Interval<Dyadic>, lo: f64, hi: f64) -> bool {
        i.lo().approx_f64() >= lo && i.hi().approx_f64() <= hi
    }

    // Literal brackets, deliberately not the std constants.
    #[allow(clippy::approx_constant)]
    #[test]
    fn constants_at_low_precision() {
        assert!(within(&const_enclosure(Constant::Pi, 10), 3.140, 3.143));
        assert!(within(&const_enclosure(Constant::E, 10), 2.717, 2.719));
        let l = const_enclosure(Constant::Log2E, 20);
        assert!(within(&l, 1.4426950, 1.4426951));
        assert!(l.width().approx_f64() <= 2f64.powi(-20));
        assert!(const_enclosure_named("tau", 10).is_err());
    }

    #[test]
    fn pi_digits_at_high_precision() {
        let pi = const_enclosure(Constant::Pi, 256);
        let digits = "3.14159265358979323846264338327950288419716939937510";
        let q: BigRational = {
            let s = digits.replace('.', "");
            BigRational::new(s.parse().unwrap(), num_traits::pow(BigInt::from(10), s.len() - 1))
        };
        let tol = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 49));
        assert!(pi.lo().to_rational() <= &q + &tol);
        assert!(pi.hi().to_rational() >= &q - &tol);
        assert!(pi.width().exponent().unwrap() < -256);
    }

    #[test]
    fn ln_of_one_is_exact_zero() {
        let ctx = certified_context(64);
        let z = ctx.ln(&ctx.int(1)).unwrap();
        assert!(z.is_point());
        assert!(z.lo().is_zero());
    }

    #[test]
    fn exp_ln_round_trip_contains_argument() {
        let ctx = certified_context(100);
        for v in [2i64, 3, 10, 1000] {
            let l = ctx.ln(&ctx.int(v)).unwrap();
            let back = ctx.exp(&l);
            assert!(
                back.contains_rational(&BigRational::from_integer(v.into())),
                "{v}: {back:?}"
            );
        }
    }

    #[test]
    fn fast_context_agrees_with_certified() {
        let fast = fast_context();
        let cert = certified_context(128);
        for v in [3i64, 7, 1 << 40, 123_456_789] {
            let a = fast.ln_int(&v.into()).unwrap().to_certified().unwrap();
            let b = cert.ln_int(&v.into()).unwrap();
            assert!(a.overlaps(&b));
            assert!(b.is_subset_of(&a) || a.width() > b.width());
        }
        let e1 = fast.exp(&fast.ratio(-7, 3)).to_certified().unwrap();
        let e2 = cert.exp(&cert.ratio(-7, 3));
        assert!(e1.overlaps(&e2));
    }

    #[test]
    fn refinement_is_nested() {
        for name in [Constant::Pi, Constant::E, Constant::Ln2, Constant::Log2E] {
            let mut prev = const_enclosure(name, 16);
            for p in [32, 64, 65, 128, 500] {
                let cur = const_enclosure(name, p);
                assert!(cur.is_subset_of(&prev), "{name:?} at {p}");
                prev = cur;
            }
        }
    }

    #[test]
    fn exp_of_large_negative_argument_in_fast_context() {
        let fast = fast_context();
        let y = fast.exp(&fast.int(-1000));
        assert!(y.lo() >= &0.0);
        assert!(y.hi() > &0.0);
    }
}
