//! Truth tables of Boolean functions on `F_2^n`.
//!
//! Entry `x` holds `f(x)` where `x` is the integer encoding of the input
//! vector with the first variable as the most significant bit. Hence the
//! restriction to inputs whose leading `n − k` coordinates vanish is the
//! first `2^k` entries of the table.

use std::fmt;

use rand::Rng;

use crate::error::{domain, Error, Result};

pub const MAX_VARS: u32 = 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: u32,
    words: Vec<u64>,
}

fn words_for(n: u32) -> usize {
    (1usize << n).div_ceil(64)
}

fn check_n(n: u32) -> Result<()> {
    if !(1..=MAX_VARS).contains(&n) {
        return domain(format!("number of variables must be in 1..={MAX_VARS}, got {n}"));
    }
    Ok(())
}

impl BooleanFunction {
    pub fn zero(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(BooleanFunction {
            n,
            words: vec![0; words_for(n)],
        })
    }

    pub fn from_fn(n: u32, f: impl Fn(usize) -> bool) -> Result<Self> {
        let mut g = Self::zero(n)?;
        for x in 0..g.len() {
            g.set(x, f(x));
        }
        Ok(g)
    }

    pub fn from_bits(n: u32, bits: &[bool]) -> Result<Self> {
        check_n(n)?;
        if bits.len() != 1 << n {
            return domain(format!("table of length {} for n = {n}", bits.len()));
        }
        Self::from_fn(n, |x| bits[x])
    }

    /// Function on at most six variables whose table is the low `2^n` bits
    /// of `table` (bit `x` is `f(x)`).
    pub fn from_word(n: u32, table: u64) -> Result<Self> {
        if n > 6 {
            return domain(format!("a single word holds at most 6 variables, got {n}"));
        }
        check_n(n)?;
        let mask = if n == 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
        Ok(BooleanFunction {
            n,
            words: vec![table & mask],
        })
    }

    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Self> {
        let mut f = Self::zero(n)?;
        for w in f.words.iter_mut() {
            *w = rng.gen();
        }
        f.mask_tail();
        Ok(f)
    }

    fn mask_tail(&mut self) {
        let len = self.len();
        if len < 64 {
            self.words[0] &= (1u64 << len) - 1;
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, x: usize) -> bool {
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn set(&mut self, x: usize, v: bool) {
        let bit = 1u64 << (x % 64);
        if v {
            self.words[x / 64] |= bit;
        } else {
            self.words[x / 64] &= !bit;
        }
    }

    /// Low word of the table; the whole table for `n ≤ 6`.
    pub fn word(&self) -> u64 {
        self.words[0]
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// `(−1)^f(x)` for every `x`.
    pub fn signs(&self) -> Vec<i64> {
        (0..self.len()).map(|x| if self.get(x) { -1 } else { 1 }).collect()
    }

    /// `f_u(y) = f(u, y)` for `u ∈ F_2^(n−k)`, `y ∈ F_2^k`.
    pub fn restriction(&self, u: usize, k: u32) -> Result<Self> {
        if k == 0 || k > self.n || u >= 1 << (self.n - k) {
            return domain(format!("restriction u = {u}, k = {k} invalid for n = {}", self.n));
        }
        let base = u << k;
        Self::from_fn(k, |y| self.get(base | y))
    }

    /// Whether `self` restricted to the first `2^k` inputs equals `g`.
    pub fn continues(&self, g: &BooleanFunction) -> bool {
        g.n <= self.n && (0..g.len()).all(|y| self.get(y) == g.get(y))
    }

    /// Hex string of the table: byte `i` holds entries `8i..8i+8`, entry
    /// `8i + j` in bit `j` (little-endian within each byte). Tables shorter
    /// than a byte are zero-padded.
    pub fn to_hex(&self) -> String {
        let bytes = self.len().div_ceil(8);
        let mut s = String::with_capacity(2 * bytes);
        for i in 0..bytes {
            let b = (self.words[i / 8] >> (8 * (i % 8))) & 0xff;
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    pub fn from_hex(n: u32, hex: &str) -> Result<Self> {
        let mut f = Self::zero(n)?;
        let hex = hex.trim();
        let hex = hex.strip_prefix("0x").unwrap_or(hex);
        let bytes = f.len().div_ceil(8);
        if hex.len() != 2 * bytes {
            return Err(Error::Parse(format!(
                "expected {} hex digits for n = {n}, got {}",
                2 * bytes,
                hex.len()
            )));
        }
        for i in 0..bytes {
            let b = u64::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                .map_err(|e| Error::Parse(format!("bad hex byte `{}`: {e}", &hex[2 * i..2 * i + 2])))?;
            f.words[i / 8] |= b << (8 * (i % 8));
        }
        let before = f.words[0];
        f.mask_tail();
        if before != f.words[0] {
            return Err(Error::Parse("padding bits beyond the table must be zero".into()));
        }
        Ok(f)
    }
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanFunction(n = {}, {})", self.n, self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bit_order_puts_restriction_first() {
        // f(x1, x2, x3) = x1: the first half of the table is zero.
        let f = BooleanFunction::from_fn(3, |x| x >> 2 & 1 == 1).unwrap();
        assert_eq!(f.restriction(0, 2).unwrap(), BooleanFunction::zero(2).unwrap());
        assert_eq!(f.weight(), 4);
        assert_eq!(f.to_hex(), "f0");
    }

    #[test]
    fn hex_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=10 {
            let f = BooleanFunction::random(n, &mut rng).unwrap();
            assert_eq!(BooleanFunction::from_hex(n, &f.to_hex()).unwrap(), f);
        }
        let and = BooleanFunction::from_bits(2, &[false, false, false, true]).unwrap();
        assert_eq!(and.to_hex(), "08");
        assert!(BooleanFunction::from_hex(2, "18").is_err());
        assert!(BooleanFunction::from_hex(3, "0").is_err());
        assert!(BooleanFunction::from_hex(3, "zz").is_err());
    }

    #[test]
    fn bounds() {
        assert!(BooleanFunction::zero(0).is_err());
        assert!(BooleanFunction::zero(25).is_err());
        assert!(BooleanFunction::from_word(7, 0).is_err());
        assert_eq!(BooleanFunction::from_word(2, 0xff).unwrap().word(), 0xf);
    }
}
