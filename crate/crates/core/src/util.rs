//! Small shared helpers: compensated summation, dense bitsets over Z/dZ,
//! root-of-unity tables and exact power cutoffs.

use num_complex::Complex64;

/// Kahan–Babuška compensated accumulator for `f64`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Compensated complex accumulator (independent Kahan per component).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Dense bitset over {0, .., len-1}, used for subsets of Z/dZ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self` cyclically rotated by `s` positions modulo `len`.
    pub fn rotated(&self, s: usize) -> BitSet {
        let mut out = BitSet::new(self.len);
        for i in self.iter() {
            out.insert((i + s) % self.len);
        }
        out
    }

    /// Sumset `self + other` in Z/len.
    pub fn sumset(&self, other: &BitSet) -> BitSet {
        debug_assert_eq!(self.len, other.len);
        let mut out = BitSet::new(self.len);
        for s in other.iter() {
            out.union_with(&self.rotated(s));
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|i| self.contains((self.len - i) % self.len))
    }
}

/// Table of the d-th roots of unity e(j/d), j = 0..d-1.
pub fn root_table(d: usize) -> Vec<Complex64> {
    let step = 2.0 * std::f64::consts::PI / d as f64;
    (0..d)
        .map(|j| {
            let t = step * j as f64;
            Complex64::new(t.cos(), t.sin())
        })
        .collect()
}

/// Distance from `t` to the nearest integer.
#[inline]
pub fn norm_dist(t: f64) -> f64 {
    let f = t - t.floor();
    f.min(1.0 - f)
}

/// floor of the real n-th root of x.
pub fn integer_nth_root(x: u128, n: u32) -> u128 {
    if x == 0 || n <= 1 {
        return if n == 1 { x } else { 1 };
    }
    let mut lo: u128 = 0;
    let mut hi: u128 = 1 << (128 / n + 1).min(127);
    while hi.checked_pow(n).map_or(true, |p| p <= x) {
        hi <<= 1;
    }
    // invariant: lo^n <= x < hi^n
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(n) {
            Some(p) if p <= x => lo = mid,
            _ => hi = mid,
        }
    }
    lo.max(1)
}

/// floor(q^delta), exact when `delta` is (within 1e-12 of) a rational with
/// small denominator, which covers every policy value used by the suites.
/// Falls back to a guarded f64 evaluation otherwise.
pub fn pow_cutoff(q: u64, delta: f64) -> u64 {
    assert!(delta > 0.0 && delta <= 1.0, "delta must lie in (0,1]");
    if delta == 1.0 {
        return q;
    }
    // Try delta = a/b with b <= 64.
    for b in 1..=64u32 {
        let a_f = delta * b as f64;
        let a = a_f.round();
        if a >= 1.0 && (a_f - a).abs() < 1e-12 * b as f64 {
            let a = a as u32;
            if a >= b {
                return q;
            }
            // x = floor((q^a)^(1/b)); q^a can overflow u128 for large q, in
            // which case fall through to the float path.
            if let Some(qa) = (q as u128).checked_pow(a) {
                return integer_nth_root(qa, b) as u64;
            }
            break;
        }
    }
    let x = (delta * (q as f64).ln()).exp();
    // Guard against floor() straddling an integer by a rounding error.
    let mut c = x.floor() as u64;
    while c > 1 && ((c as f64).ln() > delta * (q as f64).ln() + 1e-12) {
        c -= 1;
    }
    while ((c + 1) as f64).ln() < delta * (q as f64).ln() - 1e-12 {
        c += 1;
    }
    c.max(1)
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}
