//! Formal sums, relations and derivation budgets.

use serde::{Deserialize, Serialize};

use super::monoid::{Elem, Monoid};
use crate::error::{Error, Result};

/// A finite multiset of nonzero monoid elements, kept sorted. The empty sum
/// is the canonical representative of zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FormalSum(Vec<Elem>);

impl FormalSum {
    pub fn new(mut terms: Vec<Elem>) -> Self {
        terms.retain(|t| !t.is_zero());
        terms.sort();
        FormalSum(terms)
    }

    pub fn empty() -> Self {
        FormalSum(vec![])
    }

    pub fn single(e: Elem) -> Self {
        Self::new(vec![e])
    }

    pub fn terms(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_terms(self) -> Vec<Elem> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn plus(&self, other: &FormalSum) -> FormalSum {
        let mut t = self.0.clone();
        t.extend(other.0.iter().cloned());
        FormalSum::new(t)
    }

    pub fn scale(&self, monoid: &Monoid, m: &Elem) -> FormalSum {
        FormalSum::new(self.0.iter().map(|t| monoid.mul(m, t)).collect())
    }

    /// Maximal total degree of a term.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(Elem::degree).max().unwrap_or(0)
    }

    pub fn render(&self, monoid: &Monoid) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0.iter().map(|t| monoid.fmt_elem(t)).collect::<Vec<_>>().join(" + ")
    }

    /// Term strings, used by the JSON format. The empty sum is `[]`.
    pub fn term_strings(&self, monoid: &Monoid) -> Vec<String> {
        self.0.iter().map(|t| monoid.fmt_elem(t)).collect()
    }

    pub fn parse_terms(monoid: &Monoid, terms: &[String]) -> Result<FormalSum> {
        let parsed = terms.iter().map(|t| monoid.parse_elem(t)).collect::<Result<Vec<_>>>()?;
        Ok(FormalSum::new(parsed))
    }

    /// Parses `a + b + c` (or `0` for the empty sum).
    pub fn parse(monoid: &Monoid, s: &str) -> Result<FormalSum> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty formal sum".into()));
        }
        let terms = s.split('+').map(|t| monoid.parse_elem(t)).collect::<Result<Vec<_>>>()?;
        Ok(FormalSum::new(terms))
    }
}

/// `lhs ≡ rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Relation {
    pub lhs: FormalSum,
    pub rhs: FormalSum,
}

impl Relation {
    pub fn new(lhs: FormalSum, rhs: FormalSum) -> Self {
        Relation { lhs, rhs }
    }

    /// Orientation-independent form (smaller side first).
    pub fn canonical(self) -> Self {
        if self.rhs < self.lhs {
            Relation { lhs: self.rhs, rhs: self.lhs }
        } else {
            self
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn scale(&self, monoid: &Monoid, m: &Elem) -> Relation {
        Relation { lhs: self.lhs.scale(monoid, m), rhs: self.rhs.scale(monoid, m) }
    }

    pub fn total_terms(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }

    pub fn render(&self, monoid: &Monoid) -> String {
        format!("{} = {}", self.lhs.render(monoid), self.rhs.render(monoid))
    }

    /// Parses `lhs = rhs`.
    pub fn parse(monoid: &Monoid, s: &str) -> Result<Relation> {
        let (l, r) = s
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("relation {s:?} lacks '='")))?;
        Ok(Relation::new(FormalSum::parse(monoid, l)?, FormalSum::parse(monoid, r)?))
    }
}

/// Bounds for the derivation search. Exhausting any bound yields an
/// `Unknown` verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest total degree of a multiplier monomial.
    pub max_degree: u32,
    /// Longest formal sum visited.
    pub max_terms: usize,
    /// Rewrite applications before giving up.
    pub max_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 6, max_terms: 8, max_steps: 100_000 }
    }
}

impl Budget {
    pub fn scaled(self, k: usize) -> Self {
        Budget {
            max_degree: self.max_degree * k as u32,
            max_terms: self.max_terms * k,
            max_steps: self.max_steps * k,
        }
    }

    /// Parses `deg,terms,steps`.
    pub fn parse(s: &str) -> Result<Budget> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("budget {s:?} must be deg,terms,steps")));
        }
        let num = |p: &str| p.parse::<usize>().map_err(|_| Error::Parse(format!("bad budget entry {p:?}")));
        Ok(Budget {
            max_degree: num(parts[0])? as u32,
            max_terms: num(parts[1])?,
            max_steps: num(parts[2])?,
        })
    }

    /// The default budget, overridden by `BLUEFORGE_BUDGET` when set.
    pub fn from_env() -> Result<Budget> {
        match std::env::var("BLUEFORGE_BUDGET") {
            Ok(s) => Budget::parse(&s),
            Err(_) => Ok(Budget::default()),
        }
    }
}
