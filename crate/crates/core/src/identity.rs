//! Exact and near-exact proof-machinery identities: the Fourier expansion
//! of |t|^2, the restricted variance Delta with its GCD-stratified
//! expansion, mean-zero divisor functions f_t and their correlations, the
//! A_{k,z} expansion terms, Theta_{j0,ell}, the completely additive
//! Omega_{j0} with its Turan-Kubilius-type moments, and the logarithmic-sum
//! rotation identity.

use crate::arith::{factorize, spf_table, totient, FactoredInteger};
use crate::characters::{UnimodularMultiplicative, ZERO_SENTINEL};
use crate::error::Error;
use crate::pretentious::{sigma_profile, PrimeClasses};
use crate::sum_engine::log_sums;
use crate::util::{gcd_u64, norm_dist, Kahan, KahanComplex};
use num::rational::Ratio;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Truncated Fourier expansion of |t|^2:
/// 1/12 + (1/2 pi^2) sum_{0 < |v| <= V} (-1)^v e(vt) / v^2.
/// Tail bound: the dropped terms total at most 1/(pi^2 V).
pub fn fourier_normsq(t: f64, v_max: u64) -> f64 {
    assert!(v_max >= 1);
    let mut acc = Kahan::new();
    // sum descending so the tiny terms accumulate first
    for v in (1..=v_max).rev() {
        let sign = if v % 2 == 0 { 1.0 } else { -1.0 };
        let c = (2.0 * PI * v as f64 * t).cos();
        acc.add(sign * 2.0 * c / (v as f64 * v as f64));
    }
    1.0 / 12.0 + acc.value() / (2.0 * PI * PI)
}

/// The restricted variance of the weighted norm-squares:
/// Delta = (1/r) sum_{1<=ell<=r} ( sum_{1<=j<=d-1} (|j ell/r|^2 - 1/12) sigma_j )^2.
/// `sigma[j]` indexes j = 0..d-1 with sigma[0] ignored; r must divide d.
pub fn variance_delta_direct(sigma: &[f64], r: u64) -> f64 {
    let d = sigma.len() as u64;
    assert!(r >= 1 && d >= 1 && d % r == 0, "r must divide d");
    let mut outer = Kahan::new();
    for ell in 1..=r {
        let mut inner = Kahan::new();
        for (j, &s) in sigma.iter().enumerate().skip(1) {
            if s != 0.0 {
                let dist = norm_dist((j as u64 * ell % r) as f64 / r as f64);
                inner.add((dist * dist - 1.0 / 12.0) * s);
            }
        }
        let v = inner.value();
        outer.add(v * v);
    }
    outer.value() / r as f64
}

/// GCD-stratified evaluation of the same Delta, truncating both u-series at
/// |u_i| <= M r / lambda. Returns (value, truncation budget Sigma^2 / M).
pub fn variance_delta_stratified(sigma: &[f64], r: u64, m_trunc: u64) -> (f64, f64) {
    let d = sigma.len() as u64;
    assert!(r >= 1 && d >= 1 && d % r == 0, "r must divide d");
    assert!(m_trunc >= 1);
    let sigma_total: f64 = sigma.iter().skip(1).sum();
    let budget = sigma_total * sigma_total / m_trunc as f64;

    let r_divisors = factorize(r).expect("r >= 1").divisors();
    let mut total = Kahan::new();
    for &lambda in &r_divisors {
        let big_r = r / lambda;
        let u_cap = m_trunc * big_r;
        // one-sided residue tables: h[parity][b] = sum_{u<=U, u=b mod R} s(u)/u^2
        // with s(u) = 1 for even f, (-1)^u for odd f
        let mut h = [vec![0.0f64; big_r as usize], vec![0.0f64; big_r as usize]];
        {
            let mut acc_even = vec![Kahan::new(); big_r as usize];
            let mut acc_odd = vec![Kahan::new(); big_r as usize];
            for u in (1..=u_cap).rev() {
                let w = 1.0 / (u as f64 * u as f64);
                let b = (u % big_r) as usize;
                acc_even[b].add(w);
                acc_odd[b].add(if u % 2 == 0 { w } else { -w });
            }
            for b in 0..big_r as usize {
                h[0][b] = acc_even[b].value();
                h[1][b] = acc_odd[b].value();
            }
        }
        // two-sided: G_f(a) = H_f(a) + H_f(-a)
        let g_val = |f_parity: usize, a: u64| -> f64 {
            let a = a % big_r;
            h[f_parity][a as usize] + h[f_parity][((big_r - a) % big_r) as usize]
        };

        let lam_divisors = factorize(lambda).expect("lambda >= 1").divisors();
        for &e1 in &lam_divisors {
            let f1 = lambda / e1;
            // weighted sums of sigma over j = J e1 with (J, r/e1) = 1
            let js1: Vec<(u64, f64)> = collect_stratum(sigma, d, r, e1);
            if js1.is_empty() {
                continue;
            }
            for &e2 in &lam_divisors {
                let f2 = lambda / e2;
                let js2: Vec<(u64, f64)> = collect_stratum(sigma, d, r, e2);
                if js2.is_empty() {
                    continue;
                }
                // T_c = sum over coprime a of G_{f1}(a) G_{f2}(c a), c in (Z/R)*
                // parity index: 0 = even f (plain), 1 = odd f (alternating)
                let par1 = if f1 % 2 == 0 { 0 } else { 1 };
                let par2 = if f2 % 2 == 0 { 0 } else { 1 };
                let mut t_by_c = vec![0.0f64; big_r as usize];
                for c in 0..big_r {
                    let coprime = (big_r == 1 && c == 0) || gcd_u64(c, big_r) == 1;
                    if !coprime {
                        continue;
                    }
                    let mut acc = Kahan::new();
                    for a in 0..big_r {
                        if big_r == 1 || gcd_u64(a, big_r) == 1 {
                            acc.add(g_val(par1, a) * g_val(par2, c * a));
                        }
                    }
                    t_by_c[c as usize] = acc.value();
                }
                let w = 1.0 / ((f1 * f1 * f2 * f2) as f64);
                let mut acc = Kahan::new();
                for &(j1_over_e, s1) in &js1 {
                    for &(j2_over_e, s2) in &js2 {
                        // c = J2^{-1} J1 mod R
                        let c = if big_r == 1 {
                            0
                        } else {
                            let inv = crate::arith::mod_inverse(j2_over_e % big_r, big_r)
                                .expect("J2 coprime to R");
                            j1_over_e % big_r * inv % big_r
                        };
                        acc.add(s1 * s2 * t_by_c[c as usize]);
                    }
                }
                total.add(w * acc.value());
            }
        }
    }
    (total.value() / (4.0 * PI.powi(4)), budget)
}

/// Pairs (J, sigma_{J e}) over 1 <= J e < d with gcd(J e, r) = e.
fn collect_stratum(sigma: &[f64], d: u64, r: u64, e: u64) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let mut j = e;
    while j < d {
        if gcd_u64(j, r) == e {
            let s = sigma[j as usize];
            if s != 0.0 {
                out.push((j / e, s));
            }
        }
        j += e;
    }
    out
}

/// The multiset T_{k,z}: products of k primes <= z (with repetition), all
/// lying in the level set chi(p) = zeta^{j0}.
#[derive(Debug, Clone)]
pub struct TkzSet {
    pub k: u32,
    pub z: u64,
    pub j0: u64,
    pub members: Vec<FactoredInteger>,
}

impl TkzSet {
    pub fn enumerate(classes: &PrimeClasses, j0: u64, k: u32, z: u64) -> TkzSet {
        let level: Vec<u64> = classes
            .primes
            .iter()
            .zip(&classes.classes)
            .filter(|&(&p, &c)| p <= z && c != ZERO_SENTINEL && c as u64 == j0)
            .map(|(&p, _)| p)
            .collect();
        let mut members = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn rec(
            level: &[u64],
            k: u32,
            start: usize,
            stack: &mut Vec<usize>,
            members: &mut Vec<FactoredInteger>,
        ) {
            if stack.len() == k as usize {
                let mut factors: Vec<(u64, u32)> = Vec::new();
                let mut value = 1u64;
                for &i in stack.iter() {
                    let p = level[i];
                    value *= p;
                    match factors.last_mut() {
                        Some((q, m)) if *q == p => *m += 1,
                        _ => factors.push((p, 1)),
                    }
                }
                members.push(FactoredInteger { value, factors });
                return;
            }
            for i in start..level.len() {
                stack.push(i);
                rec(level, k, i, stack, members);
                stack.pop();
            }
        }
        rec(&level, k, 0, &mut stack, &mut members);
        members.sort_by_key(|f| f.value);
        TkzSet { k, z, j0, members }
    }

    pub fn level_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .members
            .iter()
            .flat_map(|f| f.factors.iter().map(|&(p, _)| p))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

/// The mean-zero divisor function f_t(n) = sum_{ab=t} mu(b)/b 1_{a|n},
/// as an exact rational with denominator t.
pub fn mean_zero_f(t: &FactoredInteger, n: u64) -> Ratio<i64> {
    let mut num = 0i64;
    for a in t.divisors() {
        if n % a == 0 {
            let b = t.value / a;
            let mu = crate::arith::mobius(b);
            num += mu * a as i64;
        }
    }
    Ratio::new(num, t.value as i64)
}

#[derive(Debug, Clone)]
pub struct FtCorrelation {
    pub exact: Ratio<i128>,
    pub main: Ratio<i128>,
    pub bound: u64,
    pub within_bound: bool,
}

/// sum_{n <= x} f_{t1}(n) f_{t2}(n), exactly, via the divisor-pair form
/// sum mu(c1) mu(c2) / (c1 c2) floor(x/[a1,a2]); the main term is
/// x phi(t)/t^2 1_{t1=t2} and the error is bounded by d(t1) d(t2).
pub fn ft_correlation(t1: &FactoredInteger, t2: &FactoredInteger, x: u64) -> FtCorrelation {
    let (v1, v2) = (t1.value, t2.value);
    let mut num = 0i128; // numerator over denominator v1*v2
    for a1 in t1.divisors() {
        let c1 = v1 / a1;
        let mu1 = crate::arith::mobius(c1);
        if mu1 == 0 {
            continue;
        }
        for a2 in t2.divisors() {
            let c2 = v2 / a2;
            let mu2 = crate::arith::mobius(c2);
            if mu2 == 0 {
                continue;
            }
            let l = a1 / gcd_u64(a1, a2) * a2;
            let count = (x / l) as i128;
            num += (mu1 * mu2) as i128 * count * a1 as i128 * a2 as i128;
        }
    }
    let exact = Ratio::new(num, v1 as i128 * v2 as i128);
    let main = if v1 == v2 {
        Ratio::new(x as i128 * totient(t1) as i128, (v1 as i128) * (v1 as i128))
    } else {
        Ratio::new(0, 1)
    };
    let bound = crate::arith::divisor_count(t1) * crate::arith::divisor_count(t2);
    let diff = if exact >= main { exact - main } else { main - exact };
    let within_bound = diff <= Ratio::new(bound as i128, 1);
    FtCorrelation { exact, main, bound, within_bound }
}

/// Literal per-n oracle for f_{t1} f_{t2} (test-side independent route).
pub fn ft_correlation_naive(t1: &FactoredInteger, t2: &FactoredInteger, x: u64) -> Ratio<i128> {
    let mut acc = Ratio::new(0i128, 1i128);
    for n in 1..=x {
        let a = mean_zero_f(t1, n);
        let b = mean_zero_f(t2, n);
        let prod = Ratio::new(
            *a.numer() as i128 * *b.numer() as i128,
            *a.denom() as i128 * *b.denom() as i128,
        );
        acc += prod;
    }
    acc
}

/// Theta_{j0,ell}(z) = (1/sigma_{j0}(z)) sum_{p <= z, class j0} p^{-iy} / p.
pub fn theta_j0(classes: &PrimeClasses, j0: u64, z: u64, y: f64) -> Result<Complex64, Error> {
    let mut acc = KahanComplex::new();
    let mut sig = Kahan::new();
    for (i, &p) in classes.primes.iter().enumerate() {
        if p > z {
            break;
        }
        if classes.classes[i] != ZERO_SENTINEL && classes.classes[i] as u64 == j0 {
            let w = 1.0 / p as f64;
            sig.add(w);
            let theta = -y * (p as f64).ln();
            acc.add(Complex64::new(theta.cos(), theta.sin()) * w);
        }
    }
    if sig.value() == 0.0 {
        return Err(Error::EmptyLevelSet);
    }
    Ok(acc.value() / sig.value())
}

#[derive(Debug, Clone)]
pub struct AkzTerms {
    pub a_kz: Complex64,
    /// (1/x) sum_{n<=x} h_ell(n)
    pub mean_h: Complex64,
    /// sum over t in T_{k,z} of M_{h_ell}(x; t)
    pub m_sum: Complex64,
    /// sum over t of delta_t(x)
    pub delta_sum: f64,
    /// |A * mean_h - m_sum|
    pub residual: f64,
    pub t_count: usize,
}

/// delta_t(x) with the proof's exponent 1 - 2/pi and squared log factor;
/// passing `rho` (must be < 1 - 2/pi) switches to the plain-rho variant
/// used in the proposition statement.
pub fn delta_t(t: &FactoredInteger, x: u64, rho: Option<f64>) -> f64 {
    let logx = (x as f64).ln();
    let mut acc = 0.0f64;
    for a in t.divisors() {
        let c = t.value / a;
        if crate::arith::mobius(c) == 0 {
            continue;
        }
        let la = (3.0 * a as f64).ln();
        match rho {
            None => {
                let expo = 1.0 - 2.0 / PI;
                acc += (la / logx).powf(expo) * (logx / la).ln().powi(2);
            }
            Some(r) => {
                assert!(r < 1.0 - 2.0 / PI, "rho must be below 1 - 2/pi");
                acc += (la / logx).powf(r);
            }
        }
    }
    acc / t.value as f64
}

/// The three quantities of the A_{k,z} expansion for h_ell(n) =
/// chi^{g ell}(n) n^{-iy}: A_{k,z}, sum_t M_{h_ell}(x;t) and sum_t delta_t.
/// Requires z^k <= x^{1/3}.
#[allow(clippy::too_many_arguments)]
pub fn akz_terms(
    chi_gl_classes: &PrimeClasses,
    chi_gl_table: &[u32],
    d: u64,
    j0: u64,
    k: u32,
    z: u64,
    x: u64,
    y: f64,
    rho: Option<f64>,
) -> Result<AkzTerms, Error> {
    // z^k <= x^{1/3} exactly: z^{3k} <= x
    let zk = (z as u128).checked_pow(3 * k);
    if zk.map_or(true, |v| v > x as u128) {
        return Err(Error::ConstraintViolated(format!(
            "z^k > x^(1/3) (z={z}, k={k}, x={x})"
        )));
    }
    assert!((chi_gl_table.len() as u64) > x, "value table must cover x");
    let tkz = TkzSet::enumerate(chi_gl_classes, j0, k, z);

    // prefix sums of h(n) = value(n) * n^{-iy}
    let roots = crate::util::root_table(d as usize);
    let mut prefix = vec![Complex64::new(0.0, 0.0); x as usize + 1];
    let mut acc = KahanComplex::new();
    for n in 1..=x {
        let a = chi_gl_table[n as usize];
        if a != ZERO_SENTINEL {
            let tw = -y * (n as f64).ln();
            let twist = Complex64::new(tw.cos(), tw.sin());
            acc.add(roots[a as usize] * twist);
        }
        prefix[n as usize] = acc.value();
    }
    let mean_h = prefix[x as usize] / x as f64;

    let h_at = |n: u64| -> Complex64 {
        let a = chi_gl_table[n as usize];
        if a == ZERO_SENTINEL {
            Complex64::new(0.0, 0.0)
        } else {
            let tw = -y * (n as f64).ln();
            roots[a as usize] * Complex64::new(tw.cos(), tw.sin())
        }
    };

    let mut a_kz = KahanComplex::new();
    let mut m_sum = KahanComplex::new();
    let mut delta_sum = Kahan::new();
    for t in &tkz.members {
        for a in t.divisors() {
            let c = t.value / a;
            let mu = crate::arith::mobius(c);
            if mu == 0 {
                continue;
            }
            let muf = mu as f64;
            // A term: mu(c)/c * chi^{g ell}(a) / a^{1+iy}
            a_kz.add(h_at(a) * (muf / (c as f64 * a as f64)));
            // M term: mu(c)/c * h(a) * H(floor(x/a)) / x
            m_sum.add(h_at(a) * prefix[(x / a) as usize] * (muf / (c as f64 * x as f64)));
        }
        delta_sum.add(delta_t(t, x, rho));
    }
    let a_val = a_kz.value();
    let m_val = m_sum.value();
    let residual = (a_val * mean_h - m_val).norm();
    Ok(AkzTerms {
        a_kz: a_val,
        mean_h,
        m_sum: m_val,
        delta_sum: delta_sum.value(),
        residual,
        t_count: tkz.members.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Cesaro,
    Logarithmic,
}

#[derive(Debug, Clone)]
pub struct OmegaMoments {
    pub weighting: Weighting,
    pub x: u64,
    /// sigma_{j0}(x): the Turan-Kubilius centering
    pub sigma: f64,
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    /// Cesaro: variance / sigma; logarithmic: variance / (log N / sigma)
    pub variance_ratio: f64,
}

/// Moments of the completely additive Omega_{j0}(n) = #{(p,k): p^k | n,
/// value(p) in class j0}, counted with multiplicity.
pub fn omega_moments(
    classes: &PrimeClasses,
    j0: u64,
    x: u64,
    weighting: Weighting,
) -> OmegaMoments {
    let n = x as usize;
    let spf = spf_table(n);
    let mut is_level = std::collections::HashMap::new();
    for (i, &p) in classes.primes.iter().enumerate() {
        if p > x {
            break;
        }
        is_level.insert(
            p,
            classes.classes[i] != ZERO_SENTINEL && classes.classes[i] as u64 == j0,
        );
    }
    let mut omega = vec![0u32; n + 1];
    for m in 2..=n {
        let p = spf[m] as u64;
        omega[m] = omega[m / p as usize] + u32::from(is_level[&p]);
    }
    let prof = sigma_profile(classes, x);
    let sigma = if j0 == 0 {
        // class 0 is not part of sigma_j but Omega may still target it
        prof.sigma.first().copied().unwrap_or(0.0)
    } else {
        prof.sigma.get(j0 as usize).copied().unwrap_or(0.0)
    };
    match weighting {
        Weighting::Cesaro => {
            let mut mean = Kahan::new();
            let mut second = Kahan::new();
            let mut var = Kahan::new();
            for &o in omega.iter().skip(1) {
                let of = o as f64;
                mean.add(of);
                second.add(of * of);
                let dev = of - sigma;
                var.add(dev * dev);
            }
            let xf = x as f64;
            let variance = var.value() / xf;
            OmegaMoments {
                weighting,
                x,
                sigma,
                mean: mean.value() / xf,
                second_moment: second.value() / xf,
                variance,
                variance_ratio: if sigma > 0.0 { variance / sigma } else { 0.0 },
            }
        }
        Weighting::Logarithmic => {
            let logn = (x as f64).ln();
            let mut mean = Kahan::new();
            let mut second = Kahan::new();
            let mut var = Kahan::new();
            for (m, &o) in omega.iter().enumerate().skip(1) {
                let w = 1.0 / m as f64;
                let of = o as f64;
                mean.add(of * w);
                second.add(of * of * w);
                if sigma > 0.0 {
                    let dev = of / sigma - 1.0;
                    var.add(dev * dev * w);
                }
            }
            let variance = var.value();
            OmegaMoments {
                weighting,
                x,
                sigma,
                mean: mean.value() / logn,
                second_moment: if sigma > 0.0 {
                    second.value() / (sigma * sigma)
                } else {
                    second.value()
                },
                variance,
                variance_ratio: if sigma > 0.0 && logn > 0.0 {
                    variance / (logn / sigma)
                } else {
                    0.0
                },
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RotationResidual {
    /// |1 - omega^{j0 ell}|
    pub rotation_gap: f64,
    /// |L_{psi^ell}(N)|
    pub log_sum_abs: f64,
    /// log N / sqrt(sigma_{j0}(N))
    pub budget: f64,
    /// rotation_gap * log_sum_abs / budget (the empirical implied constant)
    pub ratio: f64,
    pub n_used: u64,
}

/// The rotation identity residual for L_{psi^ell}(N): computes
/// |1 - omega^{j0 ell}| |L_{psi^ell}(N)| against log N / sqrt(sigma_{j0}(N)).
pub fn rotation_residual(
    psi: &UnimodularMultiplicative,
    ell: u64,
    j0: u64,
    n: u64,
) -> Result<RotationResidual, Error> {
    let r = psi.carrier;
    let classes = PrimeClasses::of_um(psi, psi.prime_limit);
    let prof = sigma_profile(&classes, n);
    let sigma = prof.sigma.get(j0 as usize).copied().unwrap_or(0.0);
    if sigma <= 0.0 {
        return Err(Error::EmptyLevelSet);
    }
    let table = psi.power_exponent_table(ell, n);
    let ls = log_sums(&table, r, &[n]);
    let l_abs = ls.requested[0].1.norm();
    let angle = 2.0 * PI * ((j0 * ell) % r) as f64 / r as f64;
    let rotation_gap = (Complex64::new(1.0, 0.0) - Complex64::new(angle.cos(), angle.sin())).norm();
    let budget = (n as f64).ln() / sigma.sqrt();
    Ok(RotationResidual {
        rotation_gap,
        log_sum_abs: l_abs,
        budget,
        ratio: if budget > 0.0 { rotation_gap * l_abs / budget } else { 0.0 },
        n_used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;
    use crate::characters::{enumerate_characters, CharacterGroup};

    #[test]
    fn fourier_point_values() {
        // t = 0: alternating tail, so even modest V is very accurate
        let v0 = fourier_normsq(0.0, 1_000_000);
        assert!(v0.abs() < 1e-12, "got {v0}");
        // t = 1/2: all tail terms share a sign, so the error sits right at
        // the 1/(pi^2 V) bound rather than far below it
        let vhalf = fourier_normsq(0.5, 1_000_000);
        let err = (vhalf - 0.25).abs();
        let bound = 1.0 / (PI * PI * 1e6);
        assert!(err <= bound * 1.0000001, "err {err} vs bound {bound}");
        assert!(err > bound * 0.5, "tail unexpectedly small: {err}");
    }

    #[test]
    fn fourier_tail_bound_respected() {
        for v_max in [10u64, 100, 1000, 10_000] {
            let bound = 1.0 / (PI * PI * v_max as f64);
            let mut worst = 0.0f64;
            for i in 0..500 {
                let t = i as f64 / 500.0;
                let approx = fourier_normsq(t, v_max);
                let exact = norm_dist(t).powi(2);
                worst = worst.max((approx - exact).abs());
            }
            assert!(worst <= bound * 1.0000001, "V={v_max}: {worst} > {bound}");
        }
    }

    #[test]
    fn variance_direct_hand_value() {
        // d = r = 2, sigma_1 = 1: Delta = (1/2)((1/6)^2 + (1/12)^2) = 5/288
        let sigma = vec![0.0, 1.0];
        let got = variance_delta_direct(&sigma, 2);
        assert!((got - 5.0 / 288.0).abs() < 1e-15, "got {got}");
        // all sigma zero
        assert_eq!(variance_delta_direct(&[0.0, 0.0, 0.0], 3), 0.0);
    }

    #[test]
    fn variance_cross_method_hand_instance() {
        let sigma = vec![0.0, 1.0];
        let (strat, budget) = variance_delta_stratified(&sigma, 2, 100_000);
        let direct = variance_delta_direct(&sigma, 2);
        assert!((strat - direct).abs() <= budget + 1e-9, "{strat} vs {direct}");
    }

    #[test]
    fn variance_cross_method_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..60 {
            let d = rng.gen_range(2..=60u64);
            let divisors = factorize(d).unwrap().divisors();
            let r = divisors[rng.gen_range(0..divisors.len())];
            let mut sigma = vec![0.0f64];
            for _ in 1..d {
                sigma.push(if rng.gen_bool(0.7) { rng.gen_range(0.0..1.0) } else { 0.0 });
            }
            let total: f64 = sigma.iter().sum();
            let m = 1000u64;
            let direct = variance_delta_direct(&sigma, r);
            let (strat, budget) = variance_delta_stratified(&sigma, r, m);
            let tol = 1e-6 * (1.0f64).max(total * total) + budget;
            assert!(
                (direct - strat).abs() <= tol,
                "d={d} r={r}: direct={direct} strat={strat} tol={tol}"
            );
        }
    }

    #[test]
    fn mean_zero_f_examples() {
        // f_p(n) = 1_{p|n} - 1/p
        let p = factorize(5).unwrap();
        assert_eq!(mean_zero_f(&p, 10), Ratio::new(4, 5));
        assert_eq!(mean_zero_f(&p, 7), Ratio::new(-1, 5));
        // t = 1: empty product convention, f_1 = 1
        let one = factorize(1).unwrap();
        assert_eq!(mean_zero_f(&one, 12), Ratio::new(1, 1));
        // t = 6, n = 12: 1 - 1/2 - 1/3 + 1/6 = 1/3
        let six = factorize(6).unwrap();
        assert_eq!(mean_zero_f(&six, 12), Ratio::new(1, 3));
    }

    #[test]
    fn ft_correlation_examples() {
        // t1 = t2 = 2, x = 4: sum (1_{2|n} - 1/2)^2 = 1 = main term exactly
        let two = factorize(2).unwrap();
        let c = ft_correlation(&two, &two, 4);
        assert_eq!(c.exact, Ratio::new(1, 1));
        assert_eq!(c.main, Ratio::new(1, 1));
        assert!(c.within_bound);
        // t1 = 2, t2 = 3, x = 6: main 0, |sum| <= 4
        let three = factorize(3).unwrap();
        let c = ft_correlation(&two, &three, 6);
        assert_eq!(c.main, Ratio::new(0, 1));
        assert!(c.within_bound);
        // long-run frequency: sum/x -> phi(6)/36 = 1/18
        let six = factorize(6).unwrap();
        let c = ft_correlation(&six, &six, 2_000_000);
        let freq = *c.exact.numer() as f64 / *c.exact.denom() as f64 / 2e6;
        assert!((freq - 1.0 / 18.0).abs() < 1e-4);
    }

    #[test]
    fn ft_correlation_matches_naive_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for _ in 0..25 {
            let t1 = factorize(rng.gen_range(1..40u64)).unwrap();
            let t2 = factorize(rng.gen_range(1..40u64)).unwrap();
            let x = rng.gen_range(1..300u64);
            let fast = ft_correlation(&t1, &t2, x).exact;
            let slow = ft_correlation_naive(&t1, &t2, x);
            assert_eq!(fast, slow, "t1={} t2={} x={x}", t1.value, t2.value);
        }
    }

    #[test]
    fn tkz_enumeration_counts() {
        // quadratic mod 3: level set j0=1 among p <= 10 is {2, 5}
        let primes = sieve_primes(30).primes;
        let g = CharacterGroup::build(3).unwrap();
        let chi = enumerate_characters(&g, Some(2), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, 30);
        let t1 = TkzSet::enumerate(&classes, 1, 1, 10);
        assert_eq!(
            t1.members.iter().map(|f| f.value).collect::<Vec<_>>(),
            vec![2, 5]
        );
        // k = 2 multisets over {2,5}: 4, 10, 25
        let t2 = TkzSet::enumerate(&classes, 1, 2, 10);
        assert_eq!(
            t2.members.iter().map(|f| f.value).collect::<Vec<_>>(),
            vec![4, 10, 25]
        );
        // every member has exactly k prime factors with multiplicity
        for t in &t2.members {
            let total: u32 = t.factors.iter().map(|&(_, k)| k).sum();
            assert_eq!(total, 2);
        }
    }

    #[test]
    fn theta_examples() {
        let primes = sieve_primes(100).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, 100);
        // y = 0 -> exactly 1
        let th = theta_j0(&classes, 1, 100, 0.0).unwrap();
        assert!((th - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        // |Theta| <= 1 always
        for k in 0..20 {
            let y = k as f64 * 0.3;
            let th = theta_j0(&classes, 1, 100, y).unwrap();
            assert!(th.norm() <= 1.0 + 1e-12);
        }
        // empty level set errors
        assert!(matches!(
            theta_j0(&classes, 999, 100, 0.0),
            Err(Error::EmptyLevelSet)
        ));
    }

    #[test]
    fn theta_small_y_drift_bound() {
        let primes = sieve_primes(10_000).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, 10_000);
        let z = 10_000u64;
        let y = 1.0 / (z as f64).ln();
        let th = theta_j0(&classes, 1, z, y).unwrap();
        // |Theta - 1| <= 2 (sum |y| log p / p) / sigma_{j0}
        let prof = sigma_profile(&classes, z);
        let mut drift = 0.0;
        for &p in &primes {
            if p > z {
                break;
            }
            drift += y.abs() * (p as f64).ln() / p as f64;
        }
        let bound = 2.0 * drift / prof.sigma[1];
        assert!((th - Complex64::new(1.0, 0.0)).norm() <= bound);
    }

    #[test]
    fn akz_k1_matches_two_term_split() {
        let x = 29_791u64; // 31^3, allows z = 31, k = 1
        let primes = sieve_primes(200).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, 200);
        let table = chi.exponent_table(x);
        let j0 = 1u64;
        let z = 31u64;
        let terms = akz_terms(&classes, &table, chi.order, j0, 1, z, x, 0.0, None).unwrap();
        // A_{1,z} = sum_{p level} (chi(p) - 1)/p
        let mut expect = Complex64::new(0.0, 0.0);
        for (i, &p) in classes.primes.iter().enumerate() {
            if p <= z && classes.classes[i] != ZERO_SENTINEL && classes.classes[i] as u64 == j0 {
                let val = crate::characters::CharValue::Exp(classes.classes[i] as u64)
                    .to_complex(chi.order);
                expect += (val - Complex64::new(1.0, 0.0)) / p as f64;
            }
        }
        assert!((terms.a_kz - expect).norm() < 1e-12);
    }

    #[test]
    fn akz_constraint_enforced() {
        let primes = sieve_primes(100).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, 100);
        let table = chi.exponent_table(1000);
        let r = akz_terms(&classes, &table, chi.order, 1, 3, 30, 1000, 0.0, None);
        assert!(matches!(r, Err(Error::ConstraintViolated(_))));
    }

    #[test]
    fn akz_principal_k1_vanishes() {
        // principal power, y = 0: A_{1,z} = sum (1 - 1)/p = 0
        let x = 8000u64;
        let primes = sieve_primes(200).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let principal = chi.power(0);
        let classes_chi = PrimeClasses::of_character(&chi, &primes, 200);
        // T_{k,z} is defined by chi's level set, but h uses the principal power:
        // emulate by passing the principal's classes for values and chi's for T
        let table = principal.exponent_table(x);
        // build a classes struct whose classes mark chi's level set but whose
        // values get read from the principal table: enumerate T via chi classes
        let terms = akz_terms(&classes_chi, &table, 1, 1, 1, 20, x, 0.0, None).unwrap();
        // A_{1,z} over the principal values: (1 - 1)/p = 0 per prime
        assert!(terms.a_kz.norm() < 1e-12, "{}", terms.a_kz.norm());
    }

    #[test]
    fn akz_residual_within_budget_sampled() {
        // |A mean_h - sum M| stays within a small multiple of sum delta_t
        let x = 29_791u64;
        let primes = sieve_primes(100).primes;
        let g = CharacterGroup::build(31).unwrap();
        for (ell, k) in [(1u64, 1u32), (2, 1), (3, 2), (7, 2)] {
            let chi = enumerate_characters(&g, Some(30), false).remove(0);
            let chig = chi.power(ell);
            let classes = PrimeClasses::of_character(&chig, &primes, 100);
            let table = chig.exponent_table(x);
            let prof = sigma_profile(&PrimeClasses::of_character(&chi, &primes, 100), 31);
            let j0 = prof.j_max;
            if let Ok(t) = akz_terms(&classes, &table, chig.order, j0, k, 31, x, 0.0, None) {
                assert!(
                    t.residual <= 3.0 * t.delta_sum + 1e-6,
                    "ell={ell} k={k}: residual {} vs budget {}",
                    t.residual,
                    t.delta_sum
                );
            }
        }
    }

    #[test]
    fn omega_counting_all_primes_mean() {
        // Omega over the full prime set: mean = (1/x) sum floor(x/p^k)
        let x = 10_000u64;
        let primes = sieve_primes(x).primes;
        let one = crate::characters::UnimodularMultiplicative::one(&primes, x);
        let classes = PrimeClasses::of_um(&one, x);
        let m = omega_moments(&classes, 0, x, Weighting::Cesaro);
        let mut expect = 0.0f64;
        for &p in &primes {
            let mut pk = p;
            while pk <= x {
                expect += (x / pk) as f64;
                if pk > x / p {
                    break;
                }
                pk *= p;
            }
        }
        expect /= x as f64;
        assert!((m.mean - expect).abs() < 1e-12, "{} vs {expect}", m.mean);
    }

    #[test]
    fn omega_empty_level_set() {
        let x = 500u64;
        let primes = sieve_primes(x).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, x);
        let m = omega_moments(&classes, 999, x, Weighting::Cesaro);
        assert_eq!(m.mean, 0.0);
        assert_eq!(m.variance_ratio, 0.0);
    }

    #[test]
    fn omega_tk_band_quadratic_mod3() {
        let x = 10_000u64;
        let primes = sieve_primes(x).primes;
        let g = CharacterGroup::build(3).unwrap();
        let chi = enumerate_characters(&g, Some(2), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, x);
        let m = omega_moments(&classes, 1, x, Weighting::Cesaro);
        assert!(m.variance_ratio > 0.5 && m.variance_ratio < 4.0, "{}", m.variance_ratio);
    }

    #[test]
    fn omega_log_second_moment_matches_expansion() {
        // (1/sigma^2) sum Omega^2/n = log N (1 + O(1/sigma))
        let x = 30_000u64;
        let primes = sieve_primes(x).primes;
        let g = CharacterGroup::build(3).unwrap();
        let chi = enumerate_characters(&g, Some(2), false).remove(0);
        let classes = PrimeClasses::of_character(&chi, &primes, x);
        let m = omega_moments(&classes, 1, x, Weighting::Logarithmic);
        let logn = (x as f64).ln();
        let implied = (m.second_moment / logn - 1.0).abs() * m.sigma;
        // recorded constant, sanity band only
        assert!(implied < 20.0, "implied constant {implied}");
    }

    #[test]
    fn rotation_residual_trivial_when_r_divides() {
        let primes = sieve_primes(2000).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let psi = UnimodularMultiplicative::from_character(&chi, &primes, 2000);
        // j0 * ell divisible by r = 6: rotation factor 1, gap 0
        let r = rotation_residual(&psi, 6, 1, 1000).unwrap();
        assert!(r.rotation_gap < 1e-15);
        assert!(r.ratio.abs() < 1e-12);
    }

    #[test]
    fn rotation_residual_quadratic() {
        let primes = sieve_primes(5000).primes;
        let g = CharacterGroup::build(3).unwrap();
        let chi = enumerate_characters(&g, Some(2), false).remove(0);
        let psi = UnimodularMultiplicative::from_character(&chi, &primes, 5000);
        let r = rotation_residual(&psi, 1, 1, 3000).unwrap();
        assert!((r.rotation_gap - 2.0).abs() < 1e-12);
        assert!(r.ratio.is_finite() && r.ratio >= 0.0);
    }
}
