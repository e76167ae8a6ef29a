//! Decimal rendering of dyadic values with directed rounding, so printed
//! interval endpoints remain valid enclosures.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::Dyadic;
use super::endpoint::Round;

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

/// `(num, den)` of `|x| · 10^t`.
fn scaled(x: &Dyadic, t: i64) -> (BigInt, BigInt) {
    let mut num = x.mantissa().abs();
    let mut den = BigInt::one();
    let e = x.exponent_part();
    if e >= 0 {
        num <<= e as u64;
    } else {
        den <<= (-e) as u64;
    }
    if t >= 0 {
        num *= pow10(t as u32);
    } else {
        den *= pow10((-t) as u32);
    }
    (num, den)
}

/// Largest `k` with `10^k ≤ |x|`.
fn decimal_exponent(x: &Dyadic) -> i64 {
    let l2 = x.floor_log2().expect("non-zero");
    let mut k = ((l2 as f64) * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        // |x| · 10^(−k) ≥ 1 ?
        let (n, d) = scaled(x, -k);
        if n < d {
            k -= 1;
            continue;
        }
        let (n2, d2) = scaled(x, -(k + 1));
        if n2 >= d2 {
            k += 1;
            continue;
        }
        return k;
    }
}

/// Render with `digits` significant digits, rounding the value in
/// direction `r` (toward −∞ for `Down`, +∞ for `Up`).
pub fn format_directed(x: &Dyadic, digits: usize, r: Round) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let negative = x.signum() < 0;
    // Rounding a magnitude: toward +∞ for the value means away from zero
    // for positives and toward zero for negatives.
    let mag_up = (r == Round::Up) != negative;
    let mut e10 = decimal_exponent(x);
    let (num, den) = scaled(x, digits as i64 - 1 - e10);
    let (q, rem) = num.div_rem(&den);
    let mut q = if mag_up && !rem.is_zero() { q + 1 } else { q };
    if q == pow10(digits as u32) {
        q = pow10(digits as u32 - 1);
        e10 += 1;
    }
    let ds = q.to_string();
    debug_assert_eq!(ds.len(), digits);
    let body = if (-5..21).contains(&e10) {
        if e10 >= 0 {
            let int_len = (e10 + 1) as usize;
            if int_len >= ds.len() {
                format!("{}{}", ds, "0".repeat(int_len - ds.len()))
            } else {
                format!("{}.{}", &ds[..int_len], &ds[int_len..])
            }
        } else {
            format!("0.{}{}", "0".repeat((-e10 - 1) as usize), ds)
        }
    } else {
        let (head, tail) = ds.split_at(1);
        if tail.is_empty() {
            format!("{head}e{e10}")
        } else {
            format!("{head}.{tail}e{e10}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
