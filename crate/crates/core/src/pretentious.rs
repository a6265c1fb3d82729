//! Pretentious distances D(f,g;y), prime level-set profiles sigma_j(y) with
//! their total Sigma(y), and the archimedean-twist search maximizing
//! |F(1+iy)| over a window.
//!
//! Distances are computed from per-class prime reciprocal sums: values of a
//! character at primes fall into at most d classes, so D(f,g;y)^2 collapses
//! to a short weighted sum with one cosine per realized class pair.

use crate::characters::{DirichletCharacter, UnimodularMultiplicative, ZERO_SENTINEL};
use crate::util::Kahan;
use std::f64::consts::PI;

/// Value classes of a function at primes p <= limit: for each prime index,
/// the exponent a in Z/DZ (ZERO_SENTINEL when the value is 0).
#[derive(Debug, Clone)]
pub struct PrimeClasses {
    pub carrier: u64,
    pub limit: u64,
    pub primes: Vec<u64>,
    pub classes: Vec<u32>,
}

impl PrimeClasses {
    pub fn of_character(chi: &DirichletCharacter, primes: &[u64], limit: u64) -> PrimeClasses {
        let ps: Vec<u64> = primes.iter().copied().take_while(|&p| p <= limit).collect();
        let classes = ps
            .iter()
            .map(|&p| chi.exponent_at(p).map_or(ZERO_SENTINEL, |a| a as u32))
            .collect();
        PrimeClasses { carrier: chi.order, limit, primes: ps, classes }
    }

    pub fn of_um(um: &UnimodularMultiplicative, limit: u64) -> PrimeClasses {
        assert!(limit <= um.prime_limit);
        let n = um.primes.partition_point(|&p| p <= limit);
        PrimeClasses {
            carrier: um.carrier,
            limit,
            primes: um.primes[..n].to_vec(),
            classes: (0..n)
                .map(|i| match um.value_at_prime_index(i) {
                    crate::characters::CharValue::Zero => ZERO_SENTINEL,
                    crate::characters::CharValue::Exp(a) => a as u32,
                })
                .collect(),
        }
    }

    /// Restriction to primes <= y.
    pub fn truncated(&self, y: u64) -> PrimeClasses {
        assert!(y <= self.limit);
        let n = self.primes.partition_point(|&p| p <= y);
        PrimeClasses {
            carrier: self.carrier,
            limit: y,
            primes: self.primes[..n].to_vec(),
            classes: self.classes[..n].to_vec(),
        }
    }

    /// Classes of f^ell (exponents scaled by ell mod carrier).
    pub fn power(&self, ell: u64) -> PrimeClasses {
        let d = self.carrier;
        PrimeClasses {
            carrier: d,
            limit: self.limit,
            primes: self.primes.clone(),
            classes: self
                .classes
                .iter()
                .map(|&a| {
                    if a == ZERO_SENTINEL {
                        ZERO_SENTINEL
                    } else {
                        ((a as u128 * ell as u128) % d as u128) as u32
                    }
                })
                .collect(),
        }
    }
}

/// sigma_j(y) for j = 0..d-1 plus the zero-class reciprocal sum.
/// sigma_total is the paper's Sigma(y) = sum_{1 <= j <= d-1} sigma_j(y).
#[derive(Debug, Clone)]
pub struct SigmaProfile {
    pub d: u64,
    pub y: u64,
    /// index j holds sum of 1/p over primes p <= y with value e(j/d)
    pub sigma: Vec<f64>,
    /// sum of 1/p over primes where the value is 0
    pub sigma_zero: f64,
    pub sigma_total: f64,
    /// argmax over 1 <= j <= d-1, smallest index on ties (0 when d = 1)
    pub j_max: u64,
}

pub fn sigma_profile(classes: &PrimeClasses, y: u64) -> SigmaProfile {
    let t = classes.truncated(y.min(classes.limit));
    let d = t.carrier;
    let mut acc: Vec<Kahan> = vec![Kahan::new(); d as usize];
    let mut zero = Kahan::new();
    for (i, &p) in t.primes.iter().enumerate() {
        let w = 1.0 / p as f64;
        match t.classes[i] {
            ZERO_SENTINEL => zero.add(w),
            a => acc[a as usize].add(w),
        }
    }
    let sigma: Vec<f64> = acc.iter().map(|k| k.value()).collect();
    let mut total = Kahan::new();
    for &s in sigma.iter().skip(1) {
        total.add(s);
    }
    let mut j_max = 0u64;
    let mut best = f64::NEG_INFINITY;
    for (j, &s) in sigma.iter().enumerate().skip(1) {
        if s > best {
            best = s;
            j_max = j as u64;
        }
    }
    SigmaProfile {
        d,
        y,
        sigma,
        sigma_zero: zero.value(),
        sigma_total: total.value(),
        j_max,
    }
}

/// D(f,g;y)^2 = sum_{p <= y} (1 - Re f(p) conj g(p)) / p, with the zero
/// value of either function contributing the full 1/p.
pub fn distance_sq(f: &PrimeClasses, g: &PrimeClasses, y: u64) -> f64 {
    assert_eq!(f.primes.len(), g.primes.len(), "profiles must share a prime range");
    let mut acc = Kahan::new();
    let df = f.carrier as f64;
    let dg = g.carrier as f64;
    for (i, &p) in f.primes.iter().enumerate() {
        if p > y {
            break;
        }
        let w = 1.0 / p as f64;
        match (f.classes[i], g.classes[i]) {
            (ZERO_SENTINEL, _) | (_, ZERO_SENTINEL) => acc.add(w),
            (a, b) => {
                let theta = 2.0 * PI * (a as f64 / df - b as f64 / dg);
                acc.add(w * (1.0 - theta.cos()));
            }
        }
    }
    acc.value()
}

/// D(f, n^{it}; y)^2, with p^{it} = e(t ln p / 2 pi).
pub fn distance_to_twist_sq(f: &PrimeClasses, t: f64, y: u64) -> f64 {
    let mut acc = Kahan::new();
    let df = f.carrier as f64;
    for (i, &p) in f.primes.iter().enumerate() {
        if p > y {
            break;
        }
        let w = 1.0 / p as f64;
        match f.classes[i] {
            ZERO_SENTINEL => acc.add(w),
            a => {
                let theta = 2.0 * PI * a as f64 / df - t * (p as f64).ln();
                acc.add(w * (1.0 - theta.cos()));
            }
        }
    }
    acc.value()
}

/// D(1, n^{it}; y)^2 (the Mertens-type comparison point for log(1+|t|log y)).
pub fn twist_distance_of_one(primes: &[u64], t: f64, y: u64) -> f64 {
    let mut acc = Kahan::new();
    for &p in primes {
        if p > y {
            break;
        }
        let theta = t * (p as f64).ln();
        acc.add((1.0 - theta.cos()) / p as f64);
    }
    acc.value()
}

/// Exact-rational distance path for real-valued profiles (classes in
/// {0, d/2, zero}), where 1 - Re f(p) conj g(p) is in {0, 1, 2}.
pub fn distance_sq_rational(
    f: &PrimeClasses,
    g: &PrimeClasses,
    y: u64,
) -> Option<num::BigRational> {
    use num::{BigInt, BigRational};
    let real = |c: &PrimeClasses| {
        c.classes
            .iter()
            .all(|&a| a == ZERO_SENTINEL || a == 0 || 2 * a as u64 == c.carrier)
    };
    if !real(f) || !real(g) {
        return None;
    }
    let mut acc = BigRational::from_integer(BigInt::from(0));
    let to_sign = |a: u32, d: u64| -> i64 {
        if a == 0 {
            1
        } else {
            debug_assert_eq!(2 * a as u64, d);
            -1
        }
    };
    for (i, &p) in f.primes.iter().enumerate() {
        if p > y {
            break;
        }
        let num = match (f.classes[i], g.classes[i]) {
            (ZERO_SENTINEL, _) | (_, ZERO_SENTINEL) => 1,
            (a, b) => 1 - to_sign(a, f.carrier) * to_sign(b, g.carrier),
        };
        if num != 0 {
            acc += BigRational::new(BigInt::from(num), BigInt::from(p));
        }
    }
    Some(acc)
}

/// Result of the archimedean twist search for one power.
#[derive(Debug, Clone)]
pub struct TwistResult {
    pub y: f64,
    pub objective: f64,
    pub objective_at_zero: f64,
    pub window: f64,
    pub grid_points: usize,
    /// raw maximizer before the zeroing rule was applied
    pub y_raw: f64,
    pub zeroed: bool,
}

/// log |F(1 + iy)| for F(s) = prod_{p <= x} (1 - f(p) p^{-s})^{-1}.
pub fn log_euler_abs(f: &PrimeClasses, x: u64, y: f64) -> f64 {
    let d = f.carrier as f64;
    let mut acc = Kahan::new();
    for (i, &p) in f.primes.iter().enumerate() {
        if p > x {
            break;
        }
        if f.classes[i] == ZERO_SENTINEL {
            continue;
        }
        let pf = p as f64;
        let theta = 2.0 * PI * f.classes[i] as f64 / d - y * pf.ln();
        // |1 - e(theta)/p|^2 = 1 - 2 cos(theta)/p + 1/p^2
        let m = 1.0 - 2.0 * theta.cos() / pf + 1.0 / (pf * pf);
        acc.add(-0.5 * m.ln());
    }
    acc.value()
}

/// Grid search for the maximizer of |F(1+iy)| over |y| <= window at step
/// pi/(8 log x), followed by three golden-section refinements around the
/// best grid point. Ties break toward smaller |y|, then nonnegative y.
/// The zeroing rule sets y = 0 whenever the raw maximizer exceeds
/// (1/2) log x in absolute value.
pub fn twist_search(f: &PrimeClasses, x: u64, window: f64) -> TwistResult {
    let logx = (x.max(3) as f64).ln();
    assert!(window <= 2.0 * logx + 1e-9, "window T must be <= 2 log x");
    let step = PI / (8.0 * logx);
    let n_steps = (window / step).floor() as i64;
    let mut best_y = 0.0f64;
    let mut best_val = f64::NEG_INFINITY;
    let mut grid_points = 0usize;
    for k in -n_steps..=n_steps {
        let y = k as f64 * step;
        let v = log_euler_abs(f, x, y);
        grid_points += 1;
        let better = v > best_val + 1e-13
            || ((v - best_val).abs() <= 1e-13
                && (y.abs() < best_y.abs() - 1e-15
                    || ((y.abs() - best_y.abs()).abs() <= 1e-15 && y > best_y)));
        if better {
            best_val = v;
            best_y = y;
        }
    }
    // golden-section refinement in [best_y - step, best_y + step]
    let mut lo = best_y - step;
    let mut hi = best_y + step;
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..3 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if log_euler_abs(f, x, m1) >= log_euler_abs(f, x, m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let refined = 0.5 * (lo + hi);
    let (y_raw, val_raw) = {
        let v = log_euler_abs(f, x, refined);
        if v > best_val {
            (refined, v)
        } else {
            (best_y, best_val)
        }
    };
    let zeroed = y_raw.abs() > 0.5 * logx;
    let y_final = if zeroed { 0.0 } else { y_raw };
    TwistResult {
        y: y_final,
        objective: if zeroed { log_euler_abs(f, x, 0.0) } else { val_raw },
        objective_at_zero: log_euler_abs(f, x, 0.0),
        window,
        grid_points,
        y_raw,
        zeroed,
    }
}

/// min over the twist grid of D(f, n^{it}; x)^2 for |t| <= window, the M of
/// the Halasz-Montgomery-Tenenbaum bound.
pub fn min_twist_distance_sq(f: &PrimeClasses, x: u64, window: f64) -> (f64, f64) {
    let logx = (x.max(3) as f64).ln();
    let step = PI / (8.0 * logx);
    let n_steps = (window / step).floor() as i64;
    let mut best = f64::INFINITY;
    let mut best_t = 0.0f64;
    for k in -n_steps..=n_steps {
        let t = k as f64 * step;
        let v = distance_to_twist_sq(f, t, x);
        if v < best - 1e-13 || (v < best + 1e-13 && t.abs() < best_t.abs()) {
            best = v;
            best_t = t;
        }
    }
    (best, best_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use crate::characters::{enumerate_characters, CharacterGroup};

    fn quad_mod3_classes(limit: u64) -> PrimeClasses {
        let primes = sieve_primes(limit).primes;
        let g = CharacterGroup::build(3).unwrap();
        let chi = enumerate_characters(&g, Some(2), false).remove(0);
        PrimeClasses::of_character(&chi, &primes, limit)
    }

    #[test]
    fn distance_self_is_zero() {
        let c = quad_mod3_classes(100);
        assert_eq!(distance_sq(&c, &c, 100), 0.0);
    }

    #[test]
    fn quadratic_mod3_vs_one_example() {
        // p=2 -> (1-(-1))/2, p=3 -> 1/3 (zero value), p=5 -> (1-(-1))/5, p=7 -> 0
        let primes = sieve_primes(10).primes;
        let c = quad_mod3_classes(10);
        let one = crate::characters::UnimodularMultiplicative::one(&primes, 10);
        let ones = PrimeClasses::of_um(&one, 10);
        let d = distance_sq(&c, &ones, 10);
        assert!((d - 26.0 / 15.0).abs() < 1e-14);
        // exact-rational path agrees
        let r = distance_sq_rational(&c, &ones, 10).unwrap();
        assert_eq!(r, num::BigRational::new(26.into(), 15.into()));
    }

    #[test]
    fn triangle_inequality_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let primes = sieve_primes(300).primes;
        let n = primes.len();
        let d = 12u64;
        let mut random_classes = || PrimeClasses {
            carrier: d,
            limit: 300,
            primes: primes.clone(),
            classes: (0..n).map(|_| rng.gen_range(0..d) as u32).collect(),
        };
        for _ in 0..100 {
            let f = random_classes();
            let g = random_classes();
            let h = random_classes();
            let fg = distance_sq(&f, &g, 300).sqrt();
            let gh = distance_sq(&g, &h, 300).sqrt();
            let fh = distance_sq(&f, &h, 300).sqrt();
            assert!(fh <= fg + gh + 1e-12);
        }
    }

    #[test]
    fn sigma_profile_example() {
        // quadratic mod 3, y = 10: primes 2, 5 are = 2 mod 3 -> sigma_1 = 0.7
        let c = quad_mod3_classes(10);
        let s = sigma_profile(&c, 10);
        assert!((s.sigma[1] - 0.7).abs() < 1e-15);
        assert!((s.sigma_total - 0.7).abs() < 1e-15);
        assert_eq!(s.j_max, 1);
        // sigma_zero collects p = 3
        assert!((s.sigma_zero - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_total_is_sum_of_classes() {
        let primes = sieve_primes(2000).primes;
        let g = CharacterGroup::build(31).unwrap();
        for chi in enumerate_characters(&g, Some(30), false).into_iter().take(2) {
            let c = PrimeClasses::of_character(&chi, &primes, 2000);
            let s = sigma_profile(&c, 2000);
            let direct: f64 = s.sigma.iter().skip(1).sum();
            assert!((s.sigma_total - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn twist_distance_reduces_at_zero() {
        let c = quad_mod3_classes(500);
        let primes = sieve_primes(500).primes;
        let one = crate::characters::UnimodularMultiplicative::one(&primes, 500);
        let ones = PrimeClasses::of_um(&one, 500);
        let a = distance_to_twist_sq(&c, 0.0, 500);
        let b = distance_sq(&c, &ones, 500);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn twist_distance_monotone_in_y() {
        let c = quad_mod3_classes(1000);
        let mut prev = 0.0;
        for y in [10u64, 50, 200, 500, 1000] {
            let v = distance_to_twist_sq(&c, 0.7, y);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn mertens_comparison_bounded() {
        // |D(1, n^{it}; y)^2 - log(1+|t| log y)| stays below 2 over t in [0, 10]
        let y = 100_000u64;
        let primes = sieve_primes(y).primes;
        let mut worst = 0.0f64;
        for k in 0..=100 {
            let t = k as f64 * 0.1;
            let d = twist_distance_of_one(&primes, t, y);
            let m = (1.0 + t * (y as f64).ln()).ln();
            worst = worst.max((d - m).abs());
        }
        assert!(worst <= 2.0, "worst deviation {worst}");
    }

    #[test]
    fn twist_search_trivial_for_one() {
        let primes = sieve_primes(1000).primes;
        let one = crate::characters::UnimodularMultiplicative::one(&primes, 1000);
        let ones = PrimeClasses::of_um(&one, 1000);
        let r = twist_search(&ones, 1000, 2.0);
        assert_eq!(r.y, 0.0);
        assert!(r.objective >= r.objective_at_zero - 1e-12);
    }

    #[test]
    fn twist_search_real_valued_symmetric_tiebreak() {
        // real-valued f: objective symmetric in y, returned y >= 0
        let c = quad_mod3_classes(2000);
        let r = twist_search(&c, 2000, 3.0);
        assert!(r.y >= 0.0);
        let plus = log_euler_abs(&c, 2000, 0.37);
        let minus = log_euler_abs(&c, 2000, -0.37);
        assert!((plus - minus).abs() < 1e-12);
    }

    #[test]
    fn twist_search_grid_refinement_consistency() {
        // order-6 character mod 31 at x = 31^2: a 4x finer grid maximizer
        // agrees with the standard grid within one coarse step
        let x = 961u64;
        let primes = sieve_primes(x).primes;
        let g = CharacterGroup::build(31).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let c = PrimeClasses::of_character(&chi, &primes, x);
        let coarse = twist_search(&c, x, 2.0);
        let logx = (x as f64).ln();
        let step = std::f64::consts::PI / (8.0 * logx);
        let fine_step = step / 4.0;
        let n = (2.0 / fine_step).floor() as i64;
        let mut best = (0.0f64, f64::NEG_INFINITY);
        for k in -n..=n {
            let y = k as f64 * fine_step;
            let v = log_euler_abs(&c, x, y);
            if v > best.1 {
                best = (y, v);
            }
        }
        assert!((coarse.y_raw - best.0).abs() <= step + 1e-12);
    }
}
