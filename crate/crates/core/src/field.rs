//! Small finite fields with precomputed tables.
//!
//! Elements of `GF(p^k)` are stored as `u16` indices whose base-`p` digits
//! are the coefficients of a polynomial modulo a fixed irreducible polynomial
//! (lowest digit = constant term). Index `0` is zero and index `1` is one, and
//! the prime subfield occupies the indices `0..p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest field order this module will tabulate.
pub const MAX_FIELD_ORDER: u32 = 128;

/// Field orders used for sampling when nothing else is requested.
pub const DEFAULT_SAMPLE_ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

pub type FieldElem = u16;

#[derive(Debug)]
pub struct FiniteField {
    order: u32,
    characteristic: u32,
    degree: u32,
    add: Vec<FieldElem>,
    mul: Vec<FieldElem>,
    neg: Vec<FieldElem>,
    inv: Vec<FieldElem>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

pub fn is_prime_power(q: u32) -> bool {
    prime_power(q).is_some()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// All prime powers in `lo..=hi`, ascending.
pub fn prime_powers_in(lo: u32, hi: u32) -> Vec<u32> {
    (lo.max(2)..=hi).filter(|&q| is_prime_power(q)).collect()
}

// Polynomials over F_p as coefficient vectors, lowest degree first.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // modulus is monic
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + (p - (c * m) % p)) % p;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn find_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    // Monic degree-k polynomial whose residue ring has no zero divisors.
    let q = p.pow(k);
    'candidate: for tail in 0..q {
        let mut modulus = decode(tail, p, k);
        if modulus[0] == 0 {
            continue;
        }
        modulus.push(1);
        for a in 1..q {
            let av = decode(a, p, k);
            for b in 1..q {
                let bv = decode(b, p, k);
                if poly_mulmod(&av, &bv, &modulus, p).iter().all(|&c| c == 0) {
                    continue 'candidate;
                }
            }
        }
        return modulus;
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FiniteField {
    pub fn new(order: u32) -> Result<Self> {
        let (p, k) = prime_power(order)
            .ok_or_else(|| Error::UnsupportedField(format!("{order} is not a prime power")))?;
        if order > MAX_FIELD_ORDER {
            return Err(Error::UnsupportedField(format!(
                "order {order} exceeds {MAX_FIELD_ORDER}"
            )));
        }
        let modulus = find_irreducible(p, k);
        let q = order as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..order {
            let av = decode(a, p, k);
            for b in 0..order {
                let bv = decode(b, p, k);
                let sum: Vec<u32> = av.iter().zip(&bv).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * q + b as usize] = encode(&sum, p) as FieldElem;
                mul[a as usize * q + b as usize] =
                    encode(&poly_mulmod(&av, &bv, &modulus, p), p) as FieldElem;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as FieldElem;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as FieldElem;
                }
            }
        }
        Ok(FiniteField { order, characteristic: p, degree: k, add, mul, neg, inv })
    }

    /// Shared instance for `order`; tables are built once per process.
    pub fn get(order: u32) -> Result<Arc<FiniteField>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FiniteField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&order) {
            return Ok(f.clone());
        }
        let field = Arc::new(FiniteField::new(order)?);
        cache.lock().unwrap().insert(order, field.clone());
        Ok(field)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        0..self.order as FieldElem
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        1..self.order as FieldElem
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (a != 0).then(|| self.inv[a as usize])
    }

    /// `a^e` with negative exponents allowed for nonzero `a`.
    pub fn pow(&self, a: FieldElem, e: i64) -> Option<FieldElem> {
        let base = if e < 0 { self.inv(a)? } else { a };
        let mut result = 1;
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            n >>= 1;
        }
        Some(result)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        n.rem_euclid(self.characteristic as i64) as FieldElem
    }

    pub fn multiplicative_order(&self, a: FieldElem) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// Elements of exact multiplicative order `n`.
    pub fn primitive_roots_of_unity(&self, n: u32) -> Vec<FieldElem> {
        self.nonzero().filter(|&a| self.multiplicative_order(a) == Some(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_hold_for_all_supported_small_orders() {
        for q in prime_powers_in(2, 32) {
            let f = FiniteField::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            // nonzero elements form a cyclic group of order q - 1
            assert!(!f.primitive_roots_of_unity(q - 1).is_empty(), "q = {q}");
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(1).is_err());
        assert!(FiniteField::new(256).is_err());
    }

    #[test]
    fn characteristic_and_prime_subfield() {
        let f = FiniteField::get(9).unwrap();
        assert_eq!(f.characteristic(), 3);
        assert_eq!(f.degree(), 2);
        assert_eq!(f.from_int(-1), 2);
        assert_eq!(f.add(f.from_int(2), f.from_int(2)), f.from_int(1));
    }
}
