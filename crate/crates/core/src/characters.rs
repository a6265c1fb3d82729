//! Dirichlet characters mod q for general composite q, in the CRT model of
//! (Z/qZ)*: one cyclic component per odd prime power, nothing for 2, one
//! component of order 2 for 4, and two components (orders 2 and 2^{k-2},
//! generated by -1 and 5) for 2^k with k >= 3.
//!
//! A character is an exponent vector over the components; its value at a
//! coprime n is the exact exponent a in Z/dZ with chi(n) = e(a/d), where d
//! is the character's order. No floats enter character arithmetic.

use crate::arith::{factorize, totient, FactoredInteger};
use crate::error::Error;
use crate::util::{gcd_u64, lcm_u64};
use serde::Serialize;
use std::sync::Arc;

const NON_COPRIME: u32 = u32::MAX;

/// One cyclic factor of (Z/qZ)*, with an eager dlog table.
#[derive(Debug, Clone)]
pub struct Component {
    /// prime power p^k this factor lives in
    pub modulus: u64,
    pub prime: u64,
    pub generator: u64,
    pub order: u64,
    /// dlog of each residue r mod `modulus` w.r.t. this generator
    /// (NON_COPRIME where gcd(r, p) > 1)
    pub(crate) dlog: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct CharacterGroup {
    pub q: u64,
    pub q_factors: FactoredInteger,
    pub phi: u64,
    pub components: Vec<Component>,
}

impl CharacterGroup {
    /// Build the component decomposition of (Z/qZ)*, q >= 3.
    pub fn build(q: u64) -> Result<Arc<CharacterGroup>, Error> {
        if q < 3 {
            return Err(Error::ModulusTooSmall(q));
        }
        let q_factors = factorize(q)?;
        let mut components = Vec::new();
        for &(p, k) in &q_factors.factors {
            let pk = p.pow(k);
            if p == 2 {
                if k == 1 {
                    continue; // (Z/2)* is trivial
                } else if k == 2 {
                    components.push(build_cyclic_component(4, 2, 3, 2));
                } else {
                    // <-1> x <5>
                    components.push(build_two_power_sign_component(pk));
                    components.push(build_cyclic_component(pk, 2, 5, pk / 4));
                }
            } else {
                let g = crate::arith::primitive_root(pk).expect("odd prime power has a root");
                let order = pk / p * (p - 1);
                components.push(build_cyclic_component(pk, p, g, order));
            }
        }
        let phi = totient(&q_factors);
        let prod: u64 = components.iter().map(|c| c.order).product();
        debug_assert_eq!(prod, phi);
        Ok(Arc::new(CharacterGroup { q, q_factors, phi, components }))
    }

    /// Number of Dirichlet characters mod q (= phi(q)).
    pub fn char_count(&self) -> u64 {
        self.phi
    }

    /// Exponent of the group: lcm of the component orders.
    pub fn exponent(&self) -> u64 {
        self.components.iter().fold(1, |l, c| lcm_u64(l, c.order))
    }

    /// Dlog vector of n, or None when gcd(n, q) > 1.
    pub fn dlog_vector(&self, n: u64) -> Option<Vec<u32>> {
        if gcd_u64(n % self.q, self.q) != 1 {
            return None;
        }
        Some(
            self.components
                .iter()
                .map(|c| c.dlog[(n % c.modulus) as usize])
                .collect(),
        )
    }
}

fn build_cyclic_component(modulus: u64, prime: u64, generator: u64, order: u64) -> Component {
    let mut dlog = vec![NON_COPRIME; modulus as usize];
    let mut r = 1u64;
    for e in 0..order {
        if dlog[r as usize] == NON_COPRIME {
            dlog[r as usize] = e as u32;
        }
        r = r * generator % modulus;
    }
    Component { modulus, prime, generator, order, dlog }
}

/// The order-2 factor of (Z/2^k)* generated by -1: residue r = (-1)^s 5^e
/// gets dlog s.
fn build_two_power_sign_component(pk: u64) -> Component {
    let mut dlog = vec![NON_COPRIME; pk as usize];
    for s in 0..2u64 {
        let mut r = if s == 0 { 1 } else { pk - 1 };
        for _ in 0..pk / 4 {
            dlog[r as usize] = s as u32;
            r = r * 5 % pk;
        }
    }
    Component { modulus: pk, prime: 2, generator: pk - 1, order: 2, dlog }
}

/// Exact character value: Zero, or the exponent a in Z/DZ meaning e(a/D),
/// where D is the carrier order attached to the evaluation context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Exp(u64),
}

impl CharValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    /// The complex number this value denotes, for a carrier order d.
    pub fn to_complex(&self, d: u64) -> num_complex::Complex64 {
        match *self {
            CharValue::Zero => num_complex::Complex64::new(0.0, 0.0),
            CharValue::Exp(a) => {
                let t = 2.0 * std::f64::consts::PI * a as f64 / d as f64;
                num_complex::Complex64::new(t.cos(), t.sin())
            }
        }
    }
}

/// A Dirichlet character mod q, stored as an exponent vector over the CRT
/// components together with per-component phase tables reduced mod the
/// character's order d (so evaluation is a few table adds and one mod).
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    pub group: Arc<CharacterGroup>,
    pub exps: Vec<u64>,
    /// multiplicative order d of the character
    pub order: u64,
    pub conductor: u64,
    /// lexicographic rank of the exponent vector, the stable identifier
    pub index: u64,
    /// phase[i][v] = v * (e_i * d / o_i) mod d
    phase: Vec<Vec<u32>>,
}

/// Serializable descriptor used in report JSON.
#[derive(Debug, Clone, Serialize)]
pub struct CharDescriptor {
    pub q: u64,
    pub index: u64,
    pub exponent_vector: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
}

impl DirichletCharacter {
    pub fn from_exps(group: Arc<CharacterGroup>, exps: Vec<u64>) -> DirichletCharacter {
        assert_eq!(exps.len(), group.components.len());
        let mut order = 1u64;
        for (c, &e) in group.components.iter().zip(&exps) {
            debug_assert!(e < c.order);
            order = lcm_u64(order, c.order / gcd_u64(c.order, e));
        }
        let index = exps_to_index(&group, &exps);
        let conductor = conductor_of(&group, &exps);
        let phase = exps
            .iter()
            .zip(&group.components)
            .map(|(&e, c)| {
                // e*d/o_i is an integer because o_i/gcd(e,o_i) divides d
                let step = (e as u128 * order as u128 / c.order as u128) as u64 % order;
                (0..c.order)
                    .map(|v| ((v as u128 * step as u128) % order as u128) as u32)
                    .collect()
            })
            .collect();
        DirichletCharacter { group, exps, order, conductor, index, phase }
    }

    pub fn by_index(group: Arc<CharacterGroup>, index: u64) -> DirichletCharacter {
        let exps = index_to_exps(&group, index);
        Self::from_exps(group, exps)
    }

    pub fn principal(group: Arc<CharacterGroup>) -> DirichletCharacter {
        let n = group.components.len();
        Self::from_exps(group, vec![0; n])
    }

    pub fn q(&self) -> u64 {
        self.group.q
    }

    pub fn is_principal(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.q
    }

    /// chi(n) as Zero or the exponent a in Z/dZ with chi(n) = e(a/d).
    pub fn evaluate(&self, n: u64) -> CharValue {
        match self.exponent_at(n) {
            None => CharValue::Zero,
            Some(a) => CharValue::Exp(a),
        }
    }

    /// phase[i][v] as u64, for the scan walkers in sum_engine.
    #[inline]
    pub(crate) fn phase_lookup(&self, comp: usize, v: u32) -> u64 {
        self.phase[comp][v as usize] as u64
    }

    /// Exponent form of chi(n); None encodes the zero value.
    #[inline]
    pub fn exponent_at(&self, n: u64) -> Option<u64> {
        let mut acc = 0u64;
        for (c, ph) in self.group.components.iter().zip(&self.phase) {
            let v = c.dlog[(n % c.modulus) as usize];
            if v == NON_COPRIME {
                return None;
            }
            acc += ph[v as usize] as u64;
        }
        Some(acc % self.order)
    }

    /// Exponent table for n = 0..=n_max: a(n) in Z/d, or u32::MAX at
    /// non-coprime n. This is the workhorse behind every scan.
    pub fn exponent_table(&self, n_max: u64) -> Vec<u32> {
        let mut out = vec![0u32; n_max as usize + 1];
        out[0] = NON_COPRIME;
        let d = self.order;
        for n in 1..=n_max {
            let mut acc = 0u64;
            let mut dead = false;
            for (c, ph) in self.group.components.iter().zip(&self.phase) {
                let v = c.dlog[(n % c.modulus) as usize];
                if v == NON_COPRIME {
                    dead = true;
                    break;
                }
                acc += ph[v as usize] as u64;
            }
            out[n as usize] = if dead {
                NON_COPRIME
            } else if acc >= d {
                (acc % d) as u32
            } else {
                acc as u32
            };
        }
        out
    }

    /// chi^ell (exponents multiplied componentwise; order d/gcd(d, ell)).
    pub fn power(&self, ell: u64) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.components)
            .map(|(&e, c)| (e as u128 * ell as u128 % c.order as u128) as u64)
            .collect();
        Self::from_exps(self.group.clone(), exps)
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self
            .exps
            .iter()
            .zip(&self.group.components)
            .map(|(&e, c)| if e == 0 { 0 } else { c.order - e })
            .collect();
        Self::from_exps(self.group.clone(), exps)
    }

    pub fn descriptor(&self) -> CharDescriptor {
        CharDescriptor {
            q: self.group.q,
            index: self.index,
            exponent_vector: self.exps.clone(),
            order: self.order,
            conductor: self.conductor,
        }
    }
}

/// Mixed-radix rank of the exponent vector, most significant component first.
fn exps_to_index(group: &CharacterGroup, exps: &[u64]) -> u64 {
    let mut idx = 0u64;
    for (c, &e) in group.components.iter().zip(exps) {
        idx = idx * c.order + e;
    }
    idx
}

fn index_to_exps(group: &CharacterGroup, mut index: u64) -> Vec<u64> {
    assert!(index < group.phi, "character index out of range");
    let mut exps = vec![0u64; group.components.len()];
    for (i, c) in group.components.iter().enumerate().rev() {
        exps[i] = index % c.order;
        index /= c.order;
    }
    exps
}

/// Conductor from the component exponents (closed form per prime power).
fn conductor_of(group: &CharacterGroup, exps: &[u64]) -> u64 {
    let mut f = 1u64;
    let mut two_power_parts: Vec<(u64, u64, u64)> = Vec::new(); // (modulus, order_of_part, is_sign)
    for (c, &e) in group.components.iter().zip(exps) {
        if c.prime == 2 {
            let part_order = c.order / gcd_u64(c.order, e);
            two_power_parts.push((c.modulus, part_order, (c.generator == c.modulus - 1) as u64));
            continue;
        }
        if e == 0 {
            continue;
        }
        let d_p = c.order / gcd_u64(c.order, e);
        // d_p = p^a * b with b | p-1; conductor p^{a+1}
        let mut a = 0u32;
        let mut rest = d_p;
        while rest % c.prime == 0 {
            rest /= c.prime;
            a += 1;
        }
        f *= c.prime.pow(a + 1);
    }
    // 2-part: components of modulus 4 (single) or 2^k (sign + cyclic)
    if !two_power_parts.is_empty() {
        let modulus = two_power_parts[0].0;
        if modulus == 4 {
            if two_power_parts[0].1 > 1 {
                f *= 4;
            }
        } else {
            let sign_nontrivial = two_power_parts
                .iter()
                .any(|&(_, ord, is_sign)| is_sign == 1 && ord > 1);
            let five_order = two_power_parts
                .iter()
                .find(|&&(_, _, is_sign)| is_sign == 0)
                .map_or(1, |&(_, ord, _)| ord);
            if five_order > 1 {
                f *= 4 * five_order; // 2^{a+2} where 2^a = order of the 5-part
            } else if sign_nontrivial {
                f *= 4;
            }
        }
    }
    f
}

/// All characters mod q matching the filters, ordered by index.
pub fn enumerate_characters(
    group: &Arc<CharacterGroup>,
    order: Option<u64>,
    primitive_only: bool,
) -> Vec<DirichletCharacter> {
    (0..group.phi)
        .map(|i| DirichletCharacter::by_index(group.clone(), i))
        .filter(|chi| order.map_or(true, |d| chi.order == d))
        .filter(|chi| !primitive_only || chi.is_primitive())
        .collect()
}

/// A unimodular completely multiplicative function given by its values at
/// primes up to a working limit: Zero or an exponent in Z/DZ. Houses
/// pointwise products like psi = chi^g * conj(xi) which have no single
/// modulus-based dlog structure.
#[derive(Debug, Clone)]
pub struct UnimodularMultiplicative {
    /// carrier order D of the root-of-unity values
    pub carrier: u64,
    /// limit P: prime values are stored for all p <= P
    pub prime_limit: u64,
    /// value exponent at each prime index (aligned with `primes`), u32::MAX = zero
    prime_vals: Vec<u32>,
    pub primes: Vec<u64>,
    pub label: String,
}

impl UnimodularMultiplicative {
    /// psi = chi * conj(xi) on primes up to `prime_limit`.
    pub fn product_with_conj(
        chi: &DirichletCharacter,
        xi: &DirichletCharacter,
        primes: &[u64],
        prime_limit: u64,
        label: impl Into<String>,
    ) -> UnimodularMultiplicative {
        let d1 = chi.order;
        let d2 = xi.order;
        let carrier = lcm_u64(d1, d2);
        let m1 = carrier / d1;
        let m2 = carrier / d2;
        let ps: Vec<u64> = primes.iter().copied().take_while(|&p| p <= prime_limit).collect();
        let prime_vals = ps
            .iter()
            .map(|&p| match (chi.exponent_at(p), xi.exponent_at(p)) {
                (Some(a), Some(b)) => {
                    (((a * m1) % carrier + carrier - (b * m2) % carrier) % carrier) as u32
                }
                _ => NON_COPRIME,
            })
            .collect();
        UnimodularMultiplicative {
            carrier,
            prime_limit,
            prime_vals,
            primes: ps,
            label: label.into(),
        }
    }

    /// A character viewed as a UnimodularMultiplicative (for shared code paths).
    pub fn from_character(
        chi: &DirichletCharacter,
        primes: &[u64],
        prime_limit: u64,
    ) -> UnimodularMultiplicative {
        let ps: Vec<u64> = primes.iter().copied().take_while(|&p| p <= prime_limit).collect();
        let prime_vals = ps
            .iter()
            .map(|&p| chi.exponent_at(p).map_or(NON_COPRIME, |a| a as u32))
            .collect();
        UnimodularMultiplicative {
            carrier: chi.order,
            prime_limit,
            prime_vals,
            primes: ps,
            label: format!("chi(q={},idx={})", chi.q(), chi.index),
        }
    }

    /// The all-ones function.
    pub fn one(primes: &[u64], prime_limit: u64) -> UnimodularMultiplicative {
        let ps: Vec<u64> = primes.iter().copied().take_while(|&p| p <= prime_limit).collect();
        UnimodularMultiplicative {
            carrier: 1,
            prime_limit,
            prime_vals: vec![0; ps.len()],
            primes: ps,
            label: "1".into(),
        }
    }

    pub fn value_at_prime_index(&self, i: usize) -> CharValue {
        match self.prime_vals[i] {
            NON_COPRIME => CharValue::Zero,
            a => CharValue::Exp(a as u64),
        }
    }

    /// Exponent table of the completely multiplicative extension over
    /// n = 0..=n_max (u32::MAX = zero value), via a linear sieve. Requires
    /// n_max <= prime_limit.
    pub fn exponent_table(&self, n_max: u64) -> Vec<u32> {
        assert!(n_max <= self.prime_limit, "table exceeds stored prime range");
        let n = n_max as usize;
        let spf = crate::arith::spf_table(n);
        let mut prime_val = std::collections::HashMap::new();
        for (i, &p) in self.primes.iter().enumerate() {
            if p > n_max {
                break;
            }
            prime_val.insert(p, self.prime_vals[i]);
        }
        let d = self.carrier;
        let mut out = vec![0u32; n + 1];
        if n >= 1 {
            out[1] = 0;
        }
        out[0] = NON_COPRIME;
        for m in 2..=n {
            let p = spf[m] as usize;
            let rest = out[m / p];
            let at_p = *prime_val.get(&(p as u64)).expect("prime within limit");
            out[m] = if rest == NON_COPRIME || at_p == NON_COPRIME {
                NON_COPRIME
            } else {
                ((rest as u64 + at_p as u64) % d) as u32
            };
        }
        out
    }

    /// Same table for psi^ell.
    pub fn power_exponent_table(&self, ell: u64, n_max: u64) -> Vec<u32> {
        let base = self.exponent_table(n_max);
        let d = self.carrier;
        base.iter()
            .map(|&a| {
                if a == NON_COPRIME {
                    NON_COPRIME
                } else {
                    ((a as u128 * ell as u128) % d as u128) as u32
                }
            })
            .collect()
    }
}

/// Sentinel used across exponent tables for the zero value.
pub const ZERO_SENTINEL: u32 = NON_COPRIME;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve_primes;

    #[test]
    fn group_shapes() {
        let g5 = CharacterGroup::build(5).unwrap();
        assert_eq!(g5.components.len(), 1);
        assert_eq!(g5.components[0].order, 4);

        let g8 = CharacterGroup::build(8).unwrap();
        let orders: Vec<u64> = g8.components.iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![2, 2]);

        let g12 = CharacterGroup::build(12).unwrap();
        let mut orders: Vec<u64> = g12.components.iter().map(|c| c.order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 2]);

        assert!(CharacterGroup::build(2).is_err());
    }

    #[test]
    fn phi_is_product_of_component_orders() {
        for q in 3..400u64 {
            let g = CharacterGroup::build(q).unwrap();
            let prod: u64 = g.components.iter().map(|c| c.order).product();
            assert_eq!(prod, g.phi, "q={q}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let g = CharacterGroup::build(5).unwrap();
        // character with chi(2) = e(1/4): 2 is a primitive root mod 5
        let chi = enumerate_characters(&g, Some(4), false)
            .into_iter()
            .find(|c| c.evaluate(2) == CharValue::Exp(1))
            .unwrap();
        assert_eq!(chi.evaluate(1), CharValue::Exp(0));
        assert_eq!(chi.evaluate(5), CharValue::Zero);
        // chi(4) = chi(2)^2 = e(2/4) = -1
        assert_eq!(chi.evaluate(4), CharValue::Exp(2));
    }

    #[test]
    fn complete_multiplicativity_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for q in [7u64, 12, 36, 40, 101, 256, 3 * 49, 9973] {
            let g = CharacterGroup::build(q).unwrap();
            let chi = DirichletCharacter::by_index(g.clone(), rng.gen_range(0..g.phi));
            let d = chi.order;
            for _ in 0..2000 {
                let m: u64 = rng.gen_range(1..10 * q);
                let n: u64 = rng.gen_range(1..10 * q);
                let lhs = chi.exponent_at(m * n);
                let rhs = match (chi.exponent_at(m), chi.exponent_at(n)) {
                    (Some(a), Some(b)) => Some((a + b) % d),
                    _ => None,
                };
                assert_eq!(lhs, rhs, "q={q} m={m} n={n}");
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        // #{chi mod prime q of order d} = phi(d) for every d | q-1
        for q in [5u64, 7, 11, 97, 499] {
            let g = CharacterGroup::build(q).unwrap();
            for d in factorize(q - 1).unwrap().divisors() {
                let count = enumerate_characters(&g, Some(d), false).len() as u64;
                assert_eq!(count, totient(&factorize(d).unwrap()), "q={q} d={d}");
            }
        }
        // q=5, order 4, primitive: 2 characters
        let g = CharacterGroup::build(5).unwrap();
        assert_eq!(enumerate_characters(&g, Some(4), true).len(), 2);
        // q=3, order 2: the quadratic character
        let g = CharacterGroup::build(3).unwrap();
        assert_eq!(enumerate_characters(&g, Some(2), false).len(), 1);
        // d not dividing q-1 for prime q: empty
        let g = CharacterGroup::build(7).unwrap();
        assert!(enumerate_characters(&g, Some(4), false).is_empty());
    }

    /// definition-based conductor: least f | q with chi(n) = 1 whenever
    /// n = 1 mod f and gcd(n, q) = 1
    fn conductor_by_definition(chi: &DirichletCharacter) -> u64 {
        let q = chi.q();
        for f in factorize(q).unwrap().divisors() {
            let ok = (1..=q)
                .filter(|&n| n % f == 1 && gcd_u64(n, q) == 1)
                .all(|n| chi.evaluate(n) == CharValue::Exp(0));
            if ok {
                return f;
            }
        }
        q
    }

    #[test]
    fn conductor_examples_and_oracle() {
        // principal mod q -> 1
        let g = CharacterGroup::build(45).unwrap();
        assert_eq!(DirichletCharacter::principal(g).conductor, 1);
        // non-principal chi mod prime p -> p
        let g = CharacterGroup::build(13).unwrap();
        for chi in enumerate_characters(&g, None, false) {
            let expect = if chi.is_principal() { 1 } else { 13 };
            assert_eq!(chi.conductor, expect);
        }
        // mod-9 character induced by the quadratic mod 3 has conductor 3
        let g9 = CharacterGroup::build(9).unwrap();
        let induced = enumerate_characters(&g9, Some(2), false);
        assert_eq!(induced.len(), 1);
        assert_eq!(induced[0].conductor, 3);
        // closed form vs definition for a range of composite moduli
        for q in [8u64, 12, 16, 24, 36, 40, 45, 48, 60, 72, 100, 120] {
            let g = CharacterGroup::build(q).unwrap();
            for chi in enumerate_characters(&g, None, false) {
                assert_eq!(
                    chi.conductor,
                    conductor_by_definition(&chi),
                    "q={q} index={}",
                    chi.index
                );
            }
        }
    }

    #[test]
    fn power_orders_q31() {
        let g = CharacterGroup::build(31).unwrap();
        let chi = enumerate_characters(&g, Some(30), false).remove(0);
        for ell in 0..=30u64 {
            let p = chi.power(ell);
            let expect = if ell == 0 { 1 } else { 30 / gcd_u64(30, ell) };
            assert_eq!(p.order, expect, "ell={ell}");
            // brute-force order of evaluated values
            if ell > 0 {
                let mut ord = 1u64;
                'outer: for e in 1..=30u64 {
                    for n in 1..31u64 {
                        if let Some(a) = p.exponent_at(n) {
                            if (a * e) % p.order != 0 {
                                continue 'outer;
                            }
                        }
                    }
                    ord = e;
                    break;
                }
                assert_eq!(ord, p.order);
            }
        }
        assert!(chi.power(0).is_principal());
    }

    #[test]
    fn self_conjugate_product_is_principal_like() {
        let primes = sieve_primes(200).primes;
        let g = CharacterGroup::build(31).unwrap();
        let chi = enumerate_characters(&g, Some(30), false).remove(0);
        let psi = UnimodularMultiplicative::product_with_conj(&chi, &chi, &primes, 200, "psi");
        for (i, &p) in psi.primes.iter().enumerate() {
            if p % 31 == 0 {
                assert_eq!(psi.value_at_prime_index(i), CharValue::Zero);
            } else {
                assert_eq!(psi.value_at_prime_index(i), CharValue::Exp(0));
            }
        }
    }

    #[test]
    fn um_exponent_table_matches_eval() {
        let primes = sieve_primes(500).primes;
        let g = CharacterGroup::build(7).unwrap();
        let chi = enumerate_characters(&g, Some(6), false).remove(0);
        let um = UnimodularMultiplicative::from_character(&chi, &primes, 500);
        let table = um.exponent_table(500);
        for n in 1..=500u64 {
            let expect = match chi.evaluate(n) {
                CharValue::Zero => ZERO_SENTINEL,
                CharValue::Exp(a) => a as u32,
            };
            assert_eq!(table[n as usize], expect, "n={n}");
        }
    }
}
