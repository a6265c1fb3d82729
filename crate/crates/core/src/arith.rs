//! Exact integer number theory: sieving, factorization, multiplicative
//! orders, primitive roots, discrete logarithms and divisor-function
//! utilities. Everything here is deterministic; primality uses a
//! Miller–Rabin witness set that is exact for all 64-bit inputs.

use crate::error::Error;
use crate::util::gcd_u64;
use std::collections::HashMap;

/// Ascending list of all primes up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    pub limit: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    /// Slice of primes `<= y` (requires `y <= limit`).
    pub fn below(&self, y: u64) -> &[u64] {
        assert!(y <= self.limit, "prime table only covers {} < {}", self.limit, y);
        let k = self.primes.partition_point(|&p| p <= y);
        &self.primes[..k]
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }
}

/// Sieve of Eratosthenes; `limit` 0 or 1 yields an empty table.
pub fn sieve_primes(limit: u64) -> PrimeTable {
    if limit < 2 {
        return PrimeTable { limit, primes: vec![] };
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    let mut p = 2usize;
    while p * p <= n {
        if !composite[p] {
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
        p += 1;
    }
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
        }
    }
    PrimeTable { limit, primes }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, valid for every u64 input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // This witness set decides primality for all n < 2^64.
    'wit: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'wit;
            }
        }
        return false;
    }
    true
}

/// Canonical factorization `value = prod p^k` with primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger { value: 1, factors: vec![] }
    }

    pub fn prime_power(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, k)| k)
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, k) in &self.factors {
            let prev = divs.clone();
            let mut pe = 1u64;
            for _ in 0..k {
                pe *= p;
                divs.extend(prev.iter().map(|d| d * pe));
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Trial division; inputs are desk-scale so no Pollard rho is needed.
pub fn factorize(n: u64) -> Result<FactoredInteger, Error> {
    if n == 0 {
        return Err(Error::ZeroNotFactorable);
    }
    let mut m = n;
    let mut factors = Vec::new();
    let mut push = |p: u64, k: u32| {
        if k > 0 {
            factors.push((p, k));
        }
    };
    let mut k2 = 0;
    while m % 2 == 0 {
        m /= 2;
        k2 += 1;
    }
    push(2, k2);
    let mut p = 3u64;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            push(p, k);
        }
        p += 2;
    }
    if m > 1 {
        push(m, 1);
    }
    Ok(FactoredInteger { value: n, factors })
}

pub fn totient(f: &FactoredInteger) -> u64 {
    f.factors
        .iter()
        .map(|&(p, k)| p.pow(k - 1) * (p - 1))
        .product()
}

pub fn divisor_count(f: &FactoredInteger) -> u64 {
    f.factors.iter().map(|&(_, k)| (k + 1) as u64).product()
}

/// Möbius function of n.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n).expect("mobius(0)");
    if f.factors.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The z-rough part of d: product of p^k || d with p > z (strict, real z).
pub fn rough_part(d: &FactoredInteger, z: f64) -> u64 {
    d.factors
        .iter()
        .filter(|&&(p, _)| p as f64 > z)
        .map(|&(p, k)| p.pow(k))
        .product()
}

pub fn largest_prime_factor(d: &FactoredInteger) -> Option<u64> {
    d.factors.last().map(|&(p, _)| p)
}

pub fn smallest_prime_factor(d: &FactoredInteger) -> Option<u64> {
    d.factors.first().map(|&(p, _)| p)
}

/// Least e >= 1 with a^e = 1 mod m; errors unless gcd(a, m) = 1.
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64, Error> {
    if m == 0 || gcd_u64(a, m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    if m == 1 {
        return Ok(1);
    }
    let phi = totient(&factorize(m)?);
    let mut e = phi;
    for &(p, _) in &factorize(phi)?.factors {
        while e % p == 0 && pow_mod(a, e / p, m) == 1 {
            e /= p;
        }
    }
    Ok(e)
}

/// Smallest primitive root modulo m, for m in {1, 2, 4, p^k, 2p^k} (p odd).
pub fn primitive_root(m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    if m == 2 {
        return Some(1);
    }
    if m == 4 {
        return Some(3);
    }
    let f = factorize(m).ok()?;
    let odd_part: Vec<_> = f.factors.iter().filter(|&&(p, _)| p != 2).collect();
    let two_exp = f.prime_power(2);
    if odd_part.len() != 1 || two_exp > 1 {
        return None;
    }
    let phi = totient(&f);
    let phi_factors = factorize(phi).ok()?;
    'cand: for g in 2..m {
        if gcd_u64(g, m) != 1 {
            continue;
        }
        for &(p, _) in &phi_factors.factors {
            if pow_mod(g, phi / p, m) == 1 {
                continue 'cand;
            }
        }
        return Some(g);
    }
    None
}

/// Baby-step giant-step: least e >= 0 with g^e = h (mod m), where g has
/// multiplicative order `ord` mod m. Returns None when h is outside <g>.
pub fn bsgs(g: u64, h: u64, m: u64, ord: u64) -> Option<u64> {
    let s = (ord as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::with_capacity(s as usize);
    let mut cur = 1u64;
    for j in 0..s {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, m);
    }
    // giant stride g^{-s} = g^{ord - s mod ord}
    let stride = pow_mod(g, ord - (s % ord), m);
    let mut gamma = h % m;
    for i in 0..=s {
        if let Some(&j) = baby.get(&gamma) {
            let e = (i * s + j) % ord;
            return Some(e);
        }
        gamma = mul_mod(gamma, stride, m);
    }
    None
}

/// Pohlig–Hellman discrete log in the cyclic group (Z/mZ)* for m an odd
/// prime power or 4. `g` must generate the full group.
pub fn discrete_log(g: u64, h: u64, m: u64) -> Result<u64, Error> {
    if gcd_u64(h, m) != 1 || gcd_u64(g, m) != 1 {
        return Err(Error::NotCoprime { a: h, m });
    }
    let phi = totient(&factorize(m)?);
    if multiplicative_order(g, m)? != phi {
        return Err(Error::NotAGenerator { g, m });
    }
    if phi == 1 {
        return Ok(0);
    }
    // Solve e mod p^k for each p^k || phi, then CRT.
    let mut residues: Vec<(u64, u64)> = Vec::new();
    for &(p, k) in &factorize(phi)?.factors {
        let pk = p.pow(k);
        let g_i = pow_mod(g, phi / pk, m); // order p^k
        let h_i = pow_mod(h, phi / pk, m);
        // digit-by-digit lift in the order-p subgroup
        let gamma = pow_mod(g_i, pk / p, m); // order p
        let mut e_i = 0u64;
        let mut pe = 1u64;
        for j in 0..k {
            let exp = pk / p.pow(j + 1);
            // strip the known digits: (h_i * g_i^{-e_i})^{p^{k-1-j}}
            let g_inv_e = pow_mod(g_i, pk - (e_i % pk), m);
            let target = pow_mod(mul_mod(h_i, g_inv_e, m), exp, m);
            let digit = bsgs(gamma, target, m, p).ok_or(Error::NotAGenerator { g, m })?;
            e_i += digit * pe;
            pe *= p;
        }
        residues.push((e_i, pk));
    }
    // CRT combine
    let mut e = 0u64;
    let mut modulus = 1u64;
    for (r, pk) in residues {
        // solve e + modulus*t = r (mod pk)
        let minv = mod_inverse(modulus % pk, pk).expect("coprime CRT moduli");
        let t = mul_mod((r + pk - e % pk) % pk, minv, pk);
        e += modulus * t;
        modulus *= pk;
    }
    Ok(e % phi)
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some((old_s.rem_euclid(m as i128)) as u64)
}

/// Smallest-prime-factor table for 0..=n, for linear-time factorizations.
pub fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut m = i;
            while m <= n {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
                m += i;
            }
        }
    }
    spf
}
