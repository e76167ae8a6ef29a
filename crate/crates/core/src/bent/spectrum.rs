//! Walsh–Hadamard spectra, bent detection and rectangles.

use num_traits::Num;

use super::function::BooleanFunction;
use crate::error::{domain, Result};

/// In-place unnormalised Walsh–Hadamard butterfly. Applying it twice
/// multiplies by the length.
pub fn fwht<T: Copy + Num>(a: &mut [T]) {
    assert!(a.len().is_power_of_two(), "length must be a power of two");
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (x, y) = block.split_at_mut(h);
            for (p, q) in x.iter_mut().zip(y.iter_mut()) {
                let (u, v) = (*p, *q);
                *p = u + v;
                *q = u - v;
            }
        }
        h *= 2;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum {
    pub n: u32,
    pub values: Vec<i64>,
}

pub fn wht(f: &BooleanFunction) -> Spectrum {
    let mut values = f.signs();
    fwht(&mut values);
    Spectrum { n: f.n(), values }
}

/// `Σ_x (−1)^(f(x) + x·u)` evaluated term by term.
pub fn wht_by_definition(f: &BooleanFunction) -> Spectrum {
    let values = (0..f.len())
        .map(|u| {
            (0..f.len())
                .map(|x| {
                    if f.get(x) ^ ((x & u).count_ones() % 2 == 1) {
                        -1
                    } else {
                        1
                    }
                })
                .sum()
        })
        .collect();
    Spectrum { n: f.n(), values }
}

/// `Σ_u v_u² = 2^(2n)` for `n`-variable spectra.
fn parseval_ok(n: u32, values: &[i64]) -> bool {
    values.iter().map(|v| i128::from(*v) * i128::from(*v)).sum::<i128>() == 1i128 << (2 * n)
}

/// Truth table whose spectrum is `values`, if any: inverse transform and
/// test that every entry is `±2^n`.
pub fn function_from_spectrum(n: u32, values: &[i64]) -> Option<BooleanFunction> {
    if values.len() != 1 << n {
        return None;
    }
    let mut t = values.to_vec();
    fwht(&mut t);
    let full = 1i64 << n;
    if t.iter().any(|&x| x != full && x != -full) {
        return None;
    }
    BooleanFunction::from_fn(n, |x| t[x] < 0).ok()
}

impl Spectrum {
    pub fn satisfies_parseval(&self) -> bool {
        parseval_ok(self.n, &self.values)
    }

    /// The function with this spectrum.
    pub fn to_function(&self) -> Option<BooleanFunction> {
        function_from_spectrum(self.n, &self.values)
    }
}

/// `|ĝ(u)| = 2^(n/2)` for every `u`.
pub fn is_bent(f: &BooleanFunction) -> Result<bool> {
    if f.n() % 2 == 1 {
        return domain(format!(
            "bent functions need an even number of variables, got {}",
            f.n()
        ));
    }
    let r = 1i64 << (f.n() / 2);
    Ok(wht(f).values.iter().all(|v| v.abs() == r))
}

/// Bentness of a table of at most 16 entries held in a word.
pub(crate) fn is_bent_small(n: u32, table: u64) -> bool {
    debug_assert!(n <= 4 && n.is_multiple_of(2));
    let len = 1usize << n;
    let mut a = [0i32; 16];
    for (x, e) in a.iter_mut().enumerate().take(len) {
        *e = if table >> x & 1 == 1 { -1 } else { 1 };
    }
    fwht(&mut a[..len]);
    let r = 1i32 << (n / 2);
    a[..len].iter().all(|v| v.abs() == r)
}

/// `2^m × 2^k` array with cell `(u, v)` the spectrum at `v` of the
/// restriction `y ↦ f(u, y)`. Row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub m: u32,
    pub k: u32,
    pub cells: Vec<i64>,
}

impl Rectangle {
    /// Build from raw cells; every row must be a `k`-variable spectrum.
    pub fn from_cells(m: u32, k: u32, cells: Vec<i64>) -> Result<Self> {
        if m == 0 || k == 0 || m + k > super::function::MAX_VARS {
            return domain(format!("rectangle shape m = {m}, k = {k} invalid"));
        }
        if cells.len() != 1 << (m + k) {
            return domain(format!("expected {} cells, got {}", 1u64 << (m + k), cells.len()));
        }
        let r = Rectangle { m, k, cells };
        if let Some(u) = (0..r.rows()).find(|&u| function_from_spectrum(k, r.row(u)).is_none()) {
            return domain(format!("row {u} is not the spectrum of a {k}-variable function"));
        }
        Ok(r)
    }

    pub fn rows(&self) -> usize {
        1 << self.m
    }

    pub fn cols(&self) -> usize {
        1 << self.k
    }

    pub fn row(&self, u: usize) -> &[i64] {
        let c = self.cols();
        &self.cells[u * c..(u + 1) * c]
    }

    pub fn get(&self, u: usize, v: usize) -> i64 {
        self.cells[u * self.cols() + v]
    }

    pub fn column(&self, v: usize) -> Vec<i64> {
        (0..self.rows()).map(|u| self.get(u, v)).collect()
    }

    /// Reassemble the function whose restrictions have these rows.
    pub fn to_function(&self) -> Option<BooleanFunction> {
        let mut f = BooleanFunction::zero(self.m + self.k).ok()?;
        for u in 0..self.rows() {
            let fu = function_from_spectrum(self.k, self.row(u))?;
            for y in 0..self.cols() {
                f.set(u << self.k | y, fu.get(y));
            }
        }
        Some(f)
    }
}

pub fn rectangle(f: &BooleanFunction, m: u32, k: u32) -> Result<Rectangle> {
    if m == 0 || k == 0 || m + k != f.n() {
        return domain(format!("split m = {m}, k = {k} does not partition n = {}", f.n()));
    }
    let mut cells = Vec::with_capacity(f.len());
    for u in 0..1usize << m {
        cells.extend(wht(&f.restriction(u, k)?).values);
    }
    Ok(Rectangle { m, k, cells })
}

/// Whether each column scaled by `2^((m−k)/2)` is an `m`-variable spectrum.
///
/// The inverse transform of a scaled column is its plain transform divided
/// by `2^((m+k)/2)`, so the ±1 test becomes `t² = 2^(m+k)` on integers.
/// This also covers odd `m − k`, where no integer column can pass.
pub fn is_bent_rectangle(r: &Rectangle) -> bool {
    let target = 1i128 << (r.m + r.k);
    (0..r.cols()).all(|v| {
        let mut c = r.column(v);
        fwht(&mut c);
        c.iter().all(|&t| i128::from(t) * i128::from(t) == target)
    })
}

/// The bent function on `2k` variables whose rectangle is `ĝ(u ⊕ v)`.
pub fn biaffine(g: &BooleanFunction) -> Result<BooleanFunction> {
    let k = g.n();
    if 2 * k > super::function::MAX_VARS {
        return domain(format!("biaffine continuation of a {k}-variable function is too large"));
    }
    let gh = wht(g).values;
    let cols = 1usize << k;
    let cells: Vec<i64> = (0..cols)
        .flat_map(|u| (0..cols).map(move |v| (u, v)))
        .map(|(u, v)| gh[u ^ v])
        .collect();
    let r = Rectangle { m: k, k, cells };
    Ok(r.to_function().expect("shifted spectra are spectra"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(n: u32, t: &[u8]) -> BooleanFunction {
        BooleanFunction::from_fn(n, |x| t[x] == 1).unwrap()
    }

    fn inner_product(n: u32) -> BooleanFunction {
        // x1x2 + x3x4 + ...
        BooleanFunction::from_fn(n, |x| {
            (0..n / 2)
                .map(|i| (x >> (2 * i) & 1) & (x >> (2 * i + 1) & 1))
                .sum::<usize>()
                % 2
                == 1
        })
        .unwrap()
    }

    #[test]
    fn small_spectra() {
        assert_eq!(wht(&bits(1, &[0, 0])).values, vec![2, 0]);
        assert_eq!(wht(&bits(2, &[0, 0, 0, 1])).values, vec![2, 2, 2, -2]);
        assert_eq!(wht(&bits(1, &[1, 0])).values, vec![0, -2]);
    }

    #[test]
    fn fast_matches_definition_exhaustively() {
        for n in 1..=3u32 {
            for t in 0..1u64 << (1 << n) {
                let f = BooleanFunction::from_word(n, t).unwrap();
                assert_eq!(wht(&f), wht_by_definition(&f), "{f:?}");
            }
        }
    }

    #[test]
    fn fast_matches_definition_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 4..=12u32 {
            let reps = if n <= 9 { 20 } else { 3 };
            for _ in 0..reps {
                let f = BooleanFunction::random(n, &mut rng).unwrap();
                assert_eq!(wht(&f), wht_by_definition(&f));
            }
        }
    }

    #[test]
    fn involution_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=12u32 {
            for _ in 0..1000 {
                let f = BooleanFunction::random(n, &mut rng).unwrap();
                let s = wht(&f);
                assert!(s.satisfies_parseval());
                assert_eq!(s.values[0], (1i64 << n) - 2 * f.weight() as i64);
                assert!(s.values.iter().all(|v| v % 2 == 0));
                assert_eq!(s.to_function().as_ref(), Some(&f));
            }
        }
    }

    #[test]
    fn non_spectra_are_rejected() {
        assert!(function_from_spectrum(1, &[1, 1]).is_none());
        assert!(function_from_spectrum(2, &[4, 0, 0, 2]).is_none());
        assert!(function_from_spectrum(2, &[4, 0, 0]).is_none());
        assert!(Rectangle::from_cells(1, 1, vec![2, 0, 1, 1]).is_err());
        assert!(Rectangle::from_cells(1, 1, vec![2, 0, 0, 2]).is_ok());
    }

    #[test]
    fn bent_examples() {
        assert!(is_bent(&bits(2, &[0, 0, 0, 1])).unwrap());
        assert!(!is_bent(&bits(2, &[0, 0, 0, 0])).unwrap());
        assert!(is_bent(&inner_product(4)).unwrap());
        assert!(is_bent(&inner_product(10)).unwrap());
        assert!(is_bent(&bits(1, &[0, 1])).is_err());
        for t in 0..1u64 << 16 {
            let f = BooleanFunction::from_word(4, t).unwrap();
            assert_eq!(is_bent_small(4, t), is_bent(&f).unwrap());
        }
    }

    #[test]
    fn rectangle_examples() {
        let r = rectangle(&bits(2, &[0, 0, 0, 1]), 1, 1).unwrap();
        assert_eq!(r.row(0), &[2, 0]);
        assert_eq!(r.row(1), &[0, 2]);
        // x1x2 + x3x4 splits as u1u2 + y1y2: every row is ±(2, 2, 2, −2).
        let r = rectangle(&inner_product(4), 2, 2).unwrap();
        for u in 0..4 {
            let sign = if u == 3 { -1 } else { 1 };
            assert_eq!(r.row(u), &[2 * sign, 2 * sign, 2 * sign, -2 * sign]);
        }
        assert!(is_bent_rectangle(&r));
        // x1x3 + x2x4 splits as u·y: row u is 4 at v = u and 0 elsewhere.
        let f = BooleanFunction::from_fn(4, |x| ((x >> 2) & x & 3).count_ones() % 2 == 1).unwrap();
        let r = rectangle(&f, 2, 2).unwrap();
        for u in 0..4 {
            let row = r.row(u);
            assert!(row.iter().all(|v| [0, 4, -4].contains(v)));
            assert_eq!(row.iter().filter(|v| v.abs() == 4).count(), 1);
            assert_eq!(row[u], 4);
        }
        assert!(is_bent_rectangle(&r));
        assert!(!is_bent_rectangle(&rectangle(&bits(2, &[0, 0, 0, 0]), 1, 1).unwrap()));
        assert!(rectangle(&inner_product(4), 1, 2).is_err());
        assert!(rectangle(&inner_product(4), 0, 4).is_err());
    }

    #[test]
    fn rows_are_spectra_and_reassemble() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let f = BooleanFunction::random(6, &mut rng).unwrap();
            for m in 1..6 {
                let r = rectangle(&f, m, 6 - m).unwrap();
                for u in 0..r.rows() {
                    assert!(parseval_ok(r.k, r.row(u)));
                }
                assert_eq!(r.to_function().as_ref(), Some(&f));
            }
        }
    }

    #[test]
    fn rectangle_test_agrees_with_bentness() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut sample: Vec<u64> = (0..1000).map(|_| rand::Rng::gen::<u64>(&mut rng) & 0xffff).collect();
        sample.extend((0..1u64 << 16).filter(|&t| is_bent_small(4, t)));
        assert_eq!(sample.len(), 1000 + 896);
        for t in sample {
            let f = BooleanFunction::from_word(4, t).unwrap();
            let bent = is_bent(&f).unwrap();
            for m in 1..4 {
                assert_eq!(
                    is_bent_rectangle(&rectangle(&f, m, 4 - m).unwrap()),
                    bent,
                    "{f:?} m = {m}"
                );
            }
        }
        // Odd total: never bent, whatever the split.
        let f = BooleanFunction::from_word(3, 0x17).unwrap();
        assert!((1..3).all(|m| !is_bent_rectangle(&rectangle(&f, m, 3 - m).unwrap())));
    }

    #[test]
    fn obstruction_for_large_restrictions() {
        // k = 3 > n/2 = 2 and g has 2^(k−1) + 1 = 5 zeros: no continuation is bent.
        let g = bits(3, &[0, 0, 0, 0, 0, 1, 1, 1]);
        for high in 0..1u64 << 8 {
            let f = BooleanFunction::from_word(4, g.word() | high << 8).unwrap();
            assert!(!is_bent_rectangle(&rectangle(&f, 1, 3).unwrap()));
        }
    }

    #[test]
    fn biaffine_continues_and_is_bent() {
        let g = bits(1, &[0, 0]);
        let f = biaffine(&g).unwrap();
        assert!(is_bent(&f).unwrap() && f.continues(&g));
        let g = bits(1, &[0, 1]);
        let f = biaffine(&g).unwrap();
        assert_eq!(rectangle(&f, 1, 1).unwrap().row(0), &[0, 2]);
        assert!(is_bent(&f).unwrap());
        for t in 0..16 {
            let g = BooleanFunction::from_word(2, t).unwrap();
            let f = biaffine(&g).unwrap();
            assert!(is_bent(&f).unwrap());
            assert!(f.continues(&g));
            assert_eq!(rectangle(&f, 2, 2).unwrap().row(0), wht(&g).values.as_slice());
            // Row u is g(y) + u·y.
            for x in 0..16usize {
                let (u, y) = (x >> 2, x & 3);
                assert_eq!(f.get(x), g.get(y) ^ ((u & y).count_ones() % 2 == 1));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for k in 3..=6 {
            let g = BooleanFunction::random(k, &mut rng).unwrap();
            assert!(is_bent(&biaffine(&g).unwrap()).unwrap());
        }
    }
}
