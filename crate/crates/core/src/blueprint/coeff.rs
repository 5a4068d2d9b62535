//! Finite commutative monoids with zero given by a multiplication table.

use crate::error::{Error, Result};

pub type CoeffIdx = u16;

/// Index of the absorbing element.
pub const ZERO: CoeffIdx = 0;
/// Index of the neutral element.
pub const ONE: CoeffIdx = 1;

/// A finite commutative monoid with zero. Element `0` is absorbing and
/// element `1` is neutral; names are the display symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffTable {
    names: Vec<String>,
    mul: Vec<CoeffIdx>,
    inverse: Vec<Option<CoeffIdx>>,
}

impl CoeffTable {
    /// Builds a table from symbols and a full multiplication table of
    /// indices. Symbols `0` and `1` must come first.
    pub fn new(names: Vec<String>, table: Vec<Vec<CoeffIdx>>) -> Result<Self> {
        let n = names.len();
        if n < 2 || names[0] != "0" || names[1] != "1" {
            return Err(Error::MalformedBackend(
                "carrier must start with the symbols 0 and 1".into(),
            ));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::MalformedBackend(format!("multiplication table must be {n}x{n}")));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::MalformedBackend(format!("duplicate symbol {a}")));
            }
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in &table {
            for &x in row {
                if x as usize >= n {
                    return Err(Error::MalformedBackend(format!("table entry {x} out of range")));
                }
                mul.push(x);
            }
        }
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        for a in 0..n {
            if at(0, a) != 0 || at(a, 0) != 0 {
                return Err(Error::MalformedBackend(format!("0 is not absorbing on {}", names[a])));
            }
            if at(1, a) != a || at(a, 1) != a {
                return Err(Error::MalformedBackend(format!("1 is not neutral on {}", names[a])));
            }
            for b in 0..n {
                if at(a, b) != at(b, a) {
                    return Err(Error::MalformedBackend(format!(
                        "not commutative at ({}, {})",
                        names[a], names[b]
                    )));
                }
                for c in 0..n {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(Error::MalformedBackend(format!(
                            "not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| at(a, b) == 1).map(|b| b as CoeffIdx))
            .collect();
        Ok(CoeffTable { names, mul, inverse })
    }

    /// The field with one element, `{0, 1}`.
    pub fn f1() -> Self {
        Self::cyclic(1)
    }

    /// `{0} ∪ μ_n` with generator `z`. For `n = 2` the nontrivial unit is
    /// written `-1`; otherwise `z^k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mut names = vec!["0".to_string(), "1".to_string()];
        for k in 1..n {
            names.push(if n == 2 { "-1".to_string() } else if k == 1 { "z".into() } else { format!("z^{k}") });
        }
        // index of z^k is k + 1 for 1 <= k < n, index of z^0 = 1
        let idx = |k: usize| if k % n == 0 { 1 } else { (k % n) + 1 } as CoeffIdx;
        let mut table = vec![vec![0 as CoeffIdx; n + 1]; n + 1];
        for a in 0..n {
            for b in 0..n {
                table[idx(a) as usize][idx(b) as usize] = idx(a + b);
            }
        }
        CoeffTable::new(names, table).expect("cyclic tables are valid")
    }

    /// Index of `z^k` inside [`CoeffTable::cyclic`].
    pub fn cyclic_power(n: usize, k: i64) -> CoeffIdx {
        let r = k.rem_euclid(n as i64) as usize;
        if r == 0 {
            ONE
        } else {
            (r + 1) as CoeffIdx
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, a: CoeffIdx) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, symbol: &str) -> Option<CoeffIdx> {
        self.names.iter().position(|s| s == symbol).map(|i| i as CoeffIdx)
    }

    #[inline]
    pub fn mul(&self, a: CoeffIdx, b: CoeffIdx) -> CoeffIdx {
        self.mul[a as usize * self.names.len() + b as usize]
    }

    pub fn inverse(&self, a: CoeffIdx) -> Option<CoeffIdx> {
        self.inverse[a as usize]
    }

    pub fn is_unit(&self, a: CoeffIdx) -> bool {
        self.inverse[a as usize].is_some()
    }

    pub fn units(&self) -> Vec<CoeffIdx> {
        (0..self.len() as CoeffIdx).filter(|&a| self.is_unit(a)).collect()
    }

    /// `a^k` for a unit `a` (negative `k` allowed) or a nonnegative `k`.
    pub fn pow(&self, a: CoeffIdx, k: i64) -> Option<CoeffIdx> {
        let base = if k < 0 { self.inverse(a)? } else { a };
        let mut r = ONE;
        for _ in 0..k.unsigned_abs() {
            r = self.mul(r, base);
        }
        Some(r)
    }

    pub fn all(&self) -> impl Iterator<Item = CoeffIdx> {
        0..self.len() as CoeffIdx
    }

    pub fn nonzero(&self) -> impl Iterator<Item = CoeffIdx> {
        1..self.len() as CoeffIdx
    }

    /// Multiplication table as rows of symbols (for serialization).
    pub fn symbol_table(&self) -> Vec<Vec<String>> {
        let n = self.len();
        (0..n)
            .map(|a| (0..n).map(|b| self.names[self.mul[a * n + b] as usize].clone()).collect())
            .collect()
    }

    pub fn raw_table(&self) -> Vec<Vec<CoeffIdx>> {
        let n = self.len();
        (0..n).map(|a| self.mul[a * n..(a + 1) * n].to_vec()).collect()
    }

    pub fn is_group_with_zero(&self) -> bool {
        self.nonzero().all(|a| self.is_unit(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables() {
        let c = CoeffTable::cyclic(4);
        assert_eq!(c.len(), 5);
        let z = c.index_of("z").unwrap();
        assert_eq!(c.pow(z, 4), Some(ONE));
        assert_eq!(c.pow(z, -1), c.index_of("z^3"));
        assert!(c.is_group_with_zero());
        let f12 = CoeffTable::cyclic(2);
        assert_eq!(f12.names(), &["0", "1", "-1"]);
        let m = f12.index_of("-1").unwrap();
        assert_eq!(f12.mul(m, m), ONE);
    }

    #[test]
    fn rejects_non_associative_table() {
        // a*a = 1, a*b = b, b*b = a  fails associativity: (a*b)*b = b*b = a, a*(b*b) = a*a = 1
        let names = ["0", "1", "a", "b"].map(String::from).to_vec();
        let t = vec![vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 1, 3], vec![0, 3, 3, 2]];
        assert!(matches!(CoeffTable::new(names, t), Err(Error::MalformedBackend(_))));
    }

    #[test]
    fn idempotent_monoid_is_not_a_group() {
        let names = ["0", "1", "e"].map(String::from).to_vec();
        let t = vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]];
        let c = CoeffTable::new(names, t).unwrap();
        assert!(!c.is_group_with_zero());
        assert_eq!(c.units(), vec![ONE]);
    }
}
