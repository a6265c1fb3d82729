//! Batched, exact-count-based computation of the short sums S_{chi^ell}(x)
//! for all ell at once, maximal sums M(chi^ell), logarithmic sums L_f(N)
//! and level-set counts and maxima.
//!
//! Everything flows through LevelCounts: a single O(x) scan produces exact
//! integer counts per value class, and all d short sums follow by one
//! length-d transform. Floats appear only at summation boundaries.

use crate::characters::{CharacterGroup, DirichletCharacter, ZERO_SENTINEL};
use crate::util::{root_table, KahanComplex};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::Arc;

/// Exact class counts c_j = #{n <= x : chi(n) = e(j/d)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCounts {
    pub d: u64,
    pub x: u64,
    pub counts: Vec<u64>,
    pub noncoprime: u64,
}

impl LevelCounts {
    pub fn coprime_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts of chi^{d/r} (order r | d) obtained by folding classes mod r.
    pub fn fold_to_power(&self, r: u64) -> LevelCounts {
        assert!(r >= 1 && self.d % r == 0, "r must divide d");
        let mut counts = vec![0u64; r as usize];
        for (j, &c) in self.counts.iter().enumerate() {
            counts[j % r as usize] += c;
        }
        LevelCounts { d: r, x: self.x, counts, noncoprime: self.noncoprime }
    }

    /// (max_j c_j, smallest witnessing j).
    pub fn level_set_max(&self) -> (u64, u64) {
        let mut best = 0u64;
        let mut arg = 0u64;
        for (j, &c) in self.counts.iter().enumerate() {
            if c > best {
                best = c;
                arg = j as u64;
            }
        }
        (best, arg)
    }
}

/// Walks n = 1, 2, ... with rolling residues per component, yielding the
/// value exponent of chi(n) in Z/dZ (ZERO_SENTINEL at non-coprime n).
pub struct ExponentWalker<'a> {
    chi: &'a DirichletCharacter,
    residues: Vec<u64>,
    moduli: Vec<u64>,
}

impl<'a> ExponentWalker<'a> {
    pub fn new(chi: &'a DirichletCharacter) -> Self {
        let moduli: Vec<u64> = chi.group.components.iter().map(|c| c.modulus).collect();
        ExponentWalker { chi, residues: vec![0; moduli.len()], moduli }
    }

    /// Exponent of chi at the next n (call exactly once per n = 1, 2, ...).
    #[inline]
    pub fn step(&mut self) -> u32 {
        let d = self.chi.order;
        let mut acc = 0u64;
        let mut dead = false;
        for i in 0..self.moduli.len() {
            self.residues[i] += 1;
            if self.residues[i] == self.moduli[i] {
                self.residues[i] = 0;
            }
            if !dead {
                let v = self.chi.group.components[i].dlog[self.residues[i] as usize];
                if v == ZERO_SENTINEL {
                    dead = true;
                } else {
                    acc += self.chi.phase_lookup(i, v);
                }
            }
        }
        if dead {
            ZERO_SENTINEL
        } else if acc >= d {
            (acc % d) as u32
        } else {
            acc as u32
        }
    }
}

/// Exact level counts of chi up to x. Uses full-period periodicity, so x may
/// exceed q at no extra cost (desk limit 1e8 applies to x mod q scans only).
pub fn level_counts(chi: &DirichletCharacter, x: u64) -> LevelCounts {
    let q = chi.q();
    let d = chi.order;
    let full = x / q;
    let rem = x % q;
    let mut counts = vec![0u64; d as usize];
    let mut counts_rem = vec![0u64; d as usize];
    let mut noncoprime_period = 0u64;
    let mut noncoprime_rem = 0u64;
    let mut walker = ExponentWalker::new(chi);
    for n in 1..=q {
        let a = walker.step();
        if a == ZERO_SENTINEL {
            noncoprime_period += 1;
            if n <= rem {
                noncoprime_rem += 1;
            }
        } else {
            counts[a as usize] += 1;
            if n <= rem {
                counts_rem[a as usize] += 1;
            }
        }
    }
    let mut out = vec![0u64; d as usize];
    for j in 0..d as usize {
        out[j] = full * counts[j] + counts_rem[j];
    }
    let noncoprime = full * noncoprime_period + noncoprime_rem;
    debug_assert_eq!(out.iter().sum::<u64>() + noncoprime, x);
    LevelCounts { d, x, counts: out, noncoprime }
}

/// Level counts at several cutoffs (each <= q) from one scan.
pub fn level_counts_prefixes(chi: &DirichletCharacter, cutoffs: &[u64]) -> Vec<LevelCounts> {
    let q = chi.q();
    let d = chi.order as usize;
    let mut sorted: Vec<u64> = cutoffs.to_vec();
    sorted.sort_unstable();
    assert!(sorted.last().map_or(true, |&m| m <= q), "prefix cutoffs must be <= q");
    let mut out = Vec::with_capacity(sorted.len());
    let mut counts = vec![0u64; d];
    let mut noncoprime = 0u64;
    let mut walker = ExponentWalker::new(chi);
    let mut next = 0usize;
    for n in 1..=q {
        let a = walker.step();
        if a == ZERO_SENTINEL {
            noncoprime += 1;
        } else {
            counts[a as usize] += 1;
        }
        while next < sorted.len() && sorted[next] == n {
            out.push(LevelCounts { d: d as u64, x: n, counts: counts.clone(), noncoprime });
            next += 1;
        }
    }
    while next < sorted.len() {
        // cutoff 0
        out.push(LevelCounts { d: d as u64, x: 0, counts: vec![0; d], noncoprime: 0 });
        next += 1;
    }
    // restore requested order
    let by_x: std::collections::HashMap<u64, LevelCounts> =
        out.into_iter().map(|lc| (lc.x, lc)).collect();
    cutoffs.iter().map(|&x| by_x[&x].clone()).collect()
}

/// S_{chi^ell}(x) for ell = 0..d-1.
#[derive(Debug, Clone)]
pub struct SumsTable {
    pub d: u64,
    pub x: u64,
    pub values: Vec<Complex64>,
}

impl SumsTable {
    pub fn abs(&self, ell: u64) -> f64 {
        self.values[(ell % self.d) as usize].norm()
    }
}

/// All short sums from the counts: S_ell = sum_j c_j e(j ell / d), via a
/// direct transform for d <= 512 and an FFT above that.
pub fn sums_all_powers(counts: &LevelCounts) -> SumsTable {
    let d = counts.d as usize;
    let values = if d <= 512 {
        let roots = root_table(d);
        (0..d)
            .map(|ell| {
                let mut acc = KahanComplex::new();
                for (j, &c) in counts.counts.iter().enumerate() {
                    if c != 0 {
                        acc.add(roots[j * ell % d] * c as f64);
                    }
                }
                acc.value()
            })
            .collect()
    } else {
        // unnormalized inverse FFT: X_ell = sum_j x_j e(+2 pi i j ell / d)
        let mut buf: Vec<Complex64> = counts
            .counts
            .iter()
            .map(|&c| Complex64::new(c as f64, 0.0))
            .collect();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_inverse(d);
        fft.process(&mut buf);
        buf
    };
    SumsTable { d: counts.d, x: counts.x, values }
}

/// Naive single-power short sum (the transform's independent check).
pub fn short_sum_naive(chi: &DirichletCharacter, ell: u64, x: u64) -> Complex64 {
    let d = chi.order;
    let roots = root_table(d as usize);
    let mut acc = KahanComplex::new();
    let mut walker = ExponentWalker::new(chi);
    for _n in 1..=x {
        let a = walker.step();
        if a != ZERO_SENTINEL {
            acc.add(roots[((a as u64 * ell) % d) as usize]);
        }
    }
    acc.value()
}

/// M(chi^ell) for each ell with its smallest argmax t.
#[derive(Debug, Clone)]
pub struct MaxTable {
    pub d: u64,
    pub q: u64,
    pub max_abs: Vec<f64>,
    pub argmax: Vec<u64>,
}

/// M(chi) = max_{t <= q} |sum_{n <= t} chi(n)| with its smallest argmax.
pub fn maximal_sum(chi: &DirichletCharacter) -> (f64, u64) {
    let d = chi.order as usize;
    let roots = root_table(d);
    let q = chi.q();
    let mut prefix = Complex64::new(0.0, 0.0);
    let mut best = 0.0f64;
    let mut arg = 1u64;
    let mut walker = ExponentWalker::new(chi);
    for t in 1..=q {
        let a = walker.step();
        if a != ZERO_SENTINEL {
            prefix += roots[a as usize];
        }
        let norm = prefix.norm_sqr();
        if norm > best {
            best = norm;
            arg = t;
        }
    }
    (best.sqrt(), arg)
}

/// Maximal sums of every power chi^ell, 0 <= ell < d, by incremental
/// exponent-count prefixes (O(q d)). With `threshold` set, per-ell max
/// tracking stops once the threshold is crossed (spectrum queries only
/// need membership); crossed entries report a value >= threshold.
pub fn max_all_powers(chi: &DirichletCharacter, threshold: Option<f64>) -> MaxTable {
    let d = chi.order as usize;
    let q = chi.q();
    let roots = root_table(d);
    let mut prefix = vec![Complex64::new(0.0, 0.0); d];
    let mut best = vec![0.0f64; d];
    let mut arg = vec![1u64; d];
    let mut done = vec![false; d];
    let thr_sq = threshold.map(|t| t * t);
    let mut walker = ExponentWalker::new(chi);
    for t in 1..=q {
        let a = walker.step();
        if a != ZERO_SENTINEL {
            let a = a as usize;
            // indices (a * ell) mod d walk by steps of a
            let mut idx = 0usize;
            for ell in 0..d {
                prefix[ell] += roots[idx];
                idx += a;
                if idx >= d {
                    idx -= d;
                }
                if !done[ell] {
                    let norm = prefix[ell].norm_sqr();
                    if norm > best[ell] {
                        best[ell] = norm;
                        arg[ell] = t;
                        if let Some(ts) = thr_sq {
                            if norm >= ts {
                                done[ell] = true;
                            }
                        }
                    }
                }
            }
        }
    }
    MaxTable {
        d: d as u64,
        q,
        max_abs: best.into_iter().map(f64::sqrt).collect(),
        argmax: arg,
    }
}

/// Logarithmic sums L(N) = sum_{n <= N} f(n)/n at requested cutoffs, plus
/// the maximum of |L(N)| over every N up to the largest cutoff (smallest
/// maximizing N wins ties).
#[derive(Debug, Clone)]
pub struct LogSumSeries {
    pub carrier: u64,
    pub requested: Vec<(u64, Complex64)>,
    pub max_abs: f64,
    pub argmax: u64,
}

/// `table[n]` is the value exponent of f(n) in Z/carrier (ZERO_SENTINEL for
/// zero), n up to the largest cutoff.
pub fn log_sums(table: &[u32], carrier: u64, cutoffs: &[u64]) -> LogSumSeries {
    let n_max = *cutoffs.iter().max().unwrap_or(&0);
    assert!((table.len() as u64) > n_max, "value table too short");
    let roots = root_table(carrier as usize);
    let mut sorted: Vec<u64> = cutoffs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut acc = KahanComplex::new();
    let mut best = -1.0f64;
    let mut arg = 1u64;
    let mut at: std::collections::HashMap<u64, Complex64> = Default::default();
    let mut next = 0usize;
    while next < sorted.len() && sorted[next] == 0 {
        at.insert(0, Complex64::new(0.0, 0.0));
        next += 1;
    }
    for n in 1..=n_max {
        let a = table[n as usize];
        if a != ZERO_SENTINEL {
            acc.add(roots[a as usize] / n as f64);
        }
        let norm = acc.value().norm();
        if norm > best {
            best = norm;
            arg = n;
        }
        while next < sorted.len() && sorted[next] == n {
            at.insert(n, acc.value());
            next += 1;
        }
    }
    LogSumSeries {
        carrier,
        requested: cutoffs.iter().map(|&c| (c, at[&c])).collect(),
        max_abs: best.max(0.0),
        argmax: arg,
    }
}

/// Short Cesaro sum of a tabulated function: sum_{n <= x} f(n).
pub fn cesaro_sum(table: &[u32], carrier: u64, x: u64) -> Complex64 {
    assert!((table.len() as u64) > x);
    let roots = root_table(carrier as usize);
    let mut acc = KahanComplex::new();
    for n in 1..=x {
        let a = table[n as usize];
        if a != ZERO_SENTINEL {
            acc.add(roots[a as usize]);
        }
    }
    acc.value()
}

/// Batched short sums for every character mod q at once: the histogram of
/// dlog vectors over n <= x transformed by a multidimensional DFT of size
/// phi(q). S_psi(x) is then a single lookup per character.
pub struct GroupSumTable {
    pub q: u64,
    pub x: u64,
    orders: Vec<u64>,
    strides: Vec<u64>,
    values: Vec<Complex64>,
}

impl GroupSumTable {
    pub fn build(group: &Arc<CharacterGroup>, x: u64) -> GroupSumTable {
        assert!(x <= group.q, "batched table expects x <= q");
        let orders: Vec<u64> = group.components.iter().map(|c| c.order).collect();
        let phi = group.phi as usize;
        let mut strides = vec![1u64; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        let mut hist = vec![Complex64::new(0.0, 0.0); phi.max(1)];
        let moduli: Vec<u64> = group.components.iter().map(|c| c.modulus).collect();
        let mut residues = vec![0u64; moduli.len()];
        for _n in 1..=x {
            let mut flat = 0u64;
            let mut dead = false;
            for i in 0..moduli.len() {
                residues[i] += 1;
                if residues[i] == moduli[i] {
                    residues[i] = 0;
                }
                if !dead {
                    let v = group.components[i].dlog[residues[i] as usize];
                    if v == ZERO_SENTINEL {
                        dead = true;
                    } else {
                        flat += v as u64 * strides[i];
                    }
                }
            }
            if !dead {
                hist[flat as usize].re += 1.0;
            }
        }
        // in-place multidimensional DFT, positive exponent along every axis
        let mut planner = FftPlanner::new();
        for (axis, &len) in orders.iter().enumerate() {
            if len == 1 {
                continue;
            }
            let fft = planner.plan_fft_inverse(len as usize);
            let stride = strides[axis] as usize;
            let len = len as usize;
            let block = stride * len;
            let mut scratch = vec![Complex64::new(0.0, 0.0); len];
            let mut base = 0usize;
            while base < hist.len() {
                for off in 0..stride {
                    for (k, s) in scratch.iter_mut().enumerate() {
                        *s = hist[base + off + k * stride];
                    }
                    fft.process(&mut scratch);
                    for (k, s) in scratch.iter().enumerate() {
                        hist[base + off + k * stride] = *s;
                    }
                }
                base += block;
            }
        }
        GroupSumTable { q: group.q, x, orders, strides, values: hist }
    }

    /// S_{chi^k}(x) for the character with component exponents `exps`.
    pub fn sum_of_power(&self, exps: &[u64], k: u64) -> Complex64 {
        let mut flat = 0u64;
        for ((&e, &o), &s) in exps.iter().zip(&self.orders).zip(&self.strides) {
            flat += (e as u128 * k as u128 % o as u128) as u64 * s;
        }
        self.values[flat as usize]
    }

    pub fn sum(&self, chi: &DirichletCharacter, k: u64) -> Complex64 {
        self.sum_of_power(&chi.exps, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{enumerate_characters, CharValue, DirichletCharacter};

    fn chi_mod5_i() -> DirichletCharacter {
        let g = CharacterGroup::build(5).unwrap();
        enumerate_characters(&g, Some(4), false)
            .into_iter()
            .find(|c| c.evaluate(2) == CharValue::Exp(1))
            .unwrap()
    }

    #[test]
    fn level_counts_examples() {
        let chi = chi_mod5_i();
        let lc = level_counts(&chi, 5);
        assert_eq!(lc.counts, vec![1, 1, 1, 1]);
        assert_eq!(lc.noncoprime, 1);
        let lc1 = level_counts(&chi, 1);
        assert_eq!(lc1.counts, vec![1, 0, 0, 0]);
        // full period: every class gets phi(q)/d
        let g = CharacterGroup::build(36).unwrap();
        for chi in enumerate_characters(&g, None, false) {
            let lc = level_counts(&chi, 36);
            assert!(lc.counts.iter().all(|&c| c == 12 / chi.order), "idx={}", chi.index);
        }
    }

    #[test]
    fn level_counts_periodic_extension() {
        let chi = chi_mod5_i();
        let lc = level_counts(&chi, 23);
        // 4 full periods (counts 1 each) + remainder 3 (n=21,22,23 -> classes 0,1,3)
        assert_eq!(lc.x, 23);
        assert_eq!(lc.counts.iter().sum::<u64>() + lc.noncoprime, 23);
        let direct = {
            let mut counts = vec![0u64; 4];
            let mut non = 0;
            for n in 1..=23 {
                match chi.evaluate(n) {
                    CharValue::Zero => non += 1,
                    CharValue::Exp(a) => counts[a as usize] += 1,
                }
            }
            (counts, non)
        };
        assert_eq!(lc.counts, direct.0);
        assert_eq!(lc.noncoprime, direct.1);
    }

    #[test]
    fn sums_examples() {
        let chi = chi_mod5_i();
        // x=4: S_1 = 1 + i + (-i) + (-1) = 0
        let s = sums_all_powers(&level_counts(&chi, 4));
        assert!(s.abs(1) < 1e-12);
        // full period, ell != 0 -> 0; ell = 0 -> #coprime
        let s5 = sums_all_powers(&level_counts(&chi, 5));
        assert!(s5.abs(1) < 1e-9 && s5.abs(2) < 1e-9 && s5.abs(3) < 1e-9);
        assert!((s5.values[0].re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn transform_matches_naive_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let q = rng.gen_range(3..1500u64);
            let g = CharacterGroup::build(q).unwrap();
            let chi = DirichletCharacter::by_index(g.clone(), rng.gen_range(0..g.phi));
            let x = rng.gen_range(1..=q);
            let ell = rng.gen_range(0..chi.order);
            let fast = sums_all_powers(&level_counts(&chi, x)).values[ell as usize];
            let naive = short_sum_naive(&chi, ell, x);
            let scale = naive.norm().max(1.0);
            assert!((fast - naive).norm() <= 1e-9 * scale, "q={q} x={x} ell={ell}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let g = CharacterGroup::build(101).unwrap();
        let chi = enumerate_characters(&g, Some(100), false).remove(0);
        let s = sums_all_powers(&level_counts(&chi, 60));
        let d = s.d as usize;
        for ell in 1..d {
            let diff = (s.values[d - ell] - s.values[ell].conj()).norm();
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn maximal_sum_examples() {
        // principal mod prime q: M = q - 1
        let g = CharacterGroup::build(13).unwrap();
        let chi0 = DirichletCharacter::principal(g);
        let (m, t) = maximal_sum(&chi0);
        assert!((m - 12.0).abs() < 1e-12);
        assert_eq!(t, 12);
        // quadratic mod 3: prefixes 1, 0, 0
        let g3 = CharacterGroup::build(3).unwrap();
        let quad = enumerate_characters(&g3, Some(2), false).remove(0);
        let (m, t) = maximal_sum(&quad);
        assert!((m - 1.0).abs() < 1e-12);
        assert_eq!(t, 1);
        // quadratic mod 5: prefixes 1, 0, -1, 0, 0
        let g5 = CharacterGroup::build(5).unwrap();
        let quad5 = enumerate_characters(&g5, Some(2), false).remove(0);
        let (m, _) = maximal_sum(&quad5);
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_all_powers_matches_per_power() {
        let g = CharacterGroup::build(31).unwrap();
        let chi = enumerate_characters(&g, Some(30), false).remove(0);
        let table = max_all_powers(&chi, None);
        for ell in 0..30u64 {
            let (m, t) = maximal_sum(&chi.power(ell));
            assert!((table.max_abs[ell as usize] - m).abs() < 1e-9, "ell={ell}");
            assert_eq!(table.argmax[ell as usize], t, "ell={ell}");
        }
        // conjugate symmetry M_{d-ell} = M_ell
        for ell in 1..30usize {
            assert!((table.max_abs[30 - ell] - table.max_abs[ell]).abs() < 1e-9);
        }
    }

    #[test]
    fn log_sums_examples() {
        // f = 1: harmonic sum 25/12 at N=4
        let table: Vec<u32> = vec![0; 5];
        let ls = log_sums(&table, 1, &[4]);
        assert!((ls.requested[0].1.re - 25.0 / 12.0).abs() < 1e-12);
        // quadratic mod 3 at N=3: 1 - 1/2 + 0 = 1/2
        let g3 = CharacterGroup::build(3).unwrap();
        let quad = enumerate_characters(&g3, Some(2), false).remove(0);
        let t = quad.exponent_table(3);
        let ls = log_sums(&t, 2, &[3]);
        assert!((ls.requested[0].1.re - 0.5).abs() < 1e-12);
        // principal-like: monotone increasing, argmax at the end
        let ones: Vec<u32> = vec![0; 101];
        let ls = log_sums(&ones, 1, &[100]);
        assert_eq!(ls.argmax, 100);
    }

    #[test]
    fn level_set_max_examples() {
        let chi = chi_mod5_i();
        assert_eq!(level_counts(&chi, 1).level_set_max(), (1, 0));
        assert_eq!(level_counts(&chi, 4).level_set_max(), (1, 0));
        // full period: phi(q)/d
        let g = CharacterGroup::build(31).unwrap();
        let chi31 = enumerate_characters(&g, Some(30), false).remove(0);
        assert_eq!(level_counts(&chi31, 31).level_set_max().0, 1);
    }

    #[test]
    fn group_sum_table_matches_per_character() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for q in [13u64, 36, 40, 97, 120] {
            let g = CharacterGroup::build(q).unwrap();
            let x = rng.gen_range(1..=q);
            let table = GroupSumTable::build(&g, x);
            for _ in 0..12 {
                let chi = DirichletCharacter::by_index(g.clone(), rng.gen_range(0..g.phi));
                let k = rng.gen_range(0..3 * chi.order);
                let expect = short_sum_naive(&chi, k % chi.order, x);
                let got = table.sum(&chi, k);
                assert!(
                    (expect - got).norm() <= 1e-9 * expect.norm().max(1.0),
                    "q={q} x={x} idx={} k={k}",
                    chi.index
                );
            }
        }
    }

    #[test]
    fn fold_to_power_matches_direct_counts() {
        let g = CharacterGroup::build(31).unwrap();
        let chi = enumerate_characters(&g, Some(30), false).remove(0);
        let lc = level_counts(&chi, 20);
        for r in [1u64, 2, 3, 5, 6, 10, 15, 30] {
            let folded = lc.fold_to_power(r);
            let direct = level_counts(&chi.power(30 / r), 20);
            assert_eq!(folded.counts, direct.counts, "r={r}");
        }
    }
}
