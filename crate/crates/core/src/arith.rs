//! The compactified arithmetic curve of the rationals: places, regular
//! functions on opens, stalks, ideals at the archimedean place and the
//! dimension of the self-product.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::blueprint::Blueprint;
use crate::error::{Error, Result};
use crate::field::is_prime;
use crate::poset::FinitePoset;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Place {
    Finite(u64),
    Infinity,
    Generic,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "∞"),
            Place::Generic => write!(f, "η"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "∞" | "inf" | "infinity" => Ok(Place::Infinity),
            "η" | "eta" | "generic" => Ok(Place::Generic),
            t => Place::finite(t.parse().map_err(|_| Error::Parse(format!("unknown place {t:?}")))?),
        }
    }
}

/// `p`-adic valuation of a nonzero integer.
fn valuation(mut n: i64, p: u64) -> u32 {
    let p = p as i64;
    let mut v = 0;
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `‖a‖_p ≤ 1`.
pub fn integral_at(a: &Rational, place: Place) -> bool {
    match place {
        Place::Finite(p) => valuation(*a.denom(), p) == 0,
        Place::Infinity => a.abs() <= Rational::one(),
        Place::Generic => true,
    }
}

/// `‖a‖_p < 1`.
pub fn in_maximal_ideal(a: &Rational, place: Place) -> bool {
    match place {
        Place::Finite(p) => a.is_zero() || valuation(*a.numer(), p) > 0 && valuation(*a.denom(), p) == 0,
        Place::Infinity => a.abs() < Rational::one(),
        Place::Generic => a.is_zero(),
    }
}

/// An open set: the empty set, or the complement of finitely many closed
/// points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CurveOpen {
    Empty,
    Complement(BTreeSet<Place>),
}

impl CurveOpen {
    pub fn whole() -> Self {
        CurveOpen::Complement(BTreeSet::new())
    }

    pub fn complement(removed: impl IntoIterator<Item = Place>) -> Result<Self> {
        let removed: BTreeSet<Place> = removed.into_iter().collect();
        if removed.contains(&Place::Generic) {
            return Err(Error::InvalidInput("the generic point lies in every nonempty open".into()));
        }
        Ok(CurveOpen::Complement(removed))
    }

    pub fn contains(&self, place: Place) -> bool {
        match self {
            CurveOpen::Empty => false,
            CurveOpen::Complement(r) => !r.contains(&place),
        }
    }

    pub fn union(&self, other: &CurveOpen) -> CurveOpen {
        match (self, other) {
            (CurveOpen::Empty, x) | (x, CurveOpen::Empty) => x.clone(),
            (CurveOpen::Complement(a), CurveOpen::Complement(b)) => {
                CurveOpen::Complement(a.intersection(b).copied().collect())
            }
        }
    }

    /// Opens of an irreducible space meet unless one is empty.
    pub fn intersection(&self, other: &CurveOpen) -> CurveOpen {
        match (self, other) {
            (CurveOpen::Empty, _) | (_, CurveOpen::Empty) => CurveOpen::Empty,
            (CurveOpen::Complement(a), CurveOpen::Complement(b)) => {
                CurveOpen::Complement(a.union(b).copied().collect())
            }
        }
    }

    /// Whether `a` is a regular function on this open: `‖a‖_q ≤ 1` at every
    /// closed point `q` of the open.
    pub fn is_regular(&self, a: &Rational) -> bool {
        let removed = match self {
            CurveOpen::Empty => return true,
            CurveOpen::Complement(r) => r,
        };
        if !removed.contains(&Place::Infinity) && !integral_at(a, Place::Infinity) {
            return false;
        }
        // the denominator may only contain removed primes
        let mut d = *a.denom();
        for place in removed {
            if let Place::Finite(p) = *place {
                while d % p as i64 == 0 {
                    d /= p as i64;
                }
            }
        }
        d == 1
    }
}

/// Elements of the stalk at `place`.
pub fn stalk_contains(a: &Rational, place: Place) -> bool {
    integral_at(a, place)
}

/// Global sections `{a : ‖a‖_p ≤ 1 for all p}` with the additive relations
/// holding between them in the integers.
pub fn global_sections() -> Blueprint {
    Blueprint::free(crate::Coefficients::f1_squared(), &[], &[]).expect("valid")
}

/// The carrier of the global sections, found among rationals of height at
/// most `bound`.
pub fn global_carrier(bound: i64) -> Vec<Rational> {
    let whole = CurveOpen::whole();
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    for d in 1..=bound {
        for n in -bound..=bound {
            let a = Rational::new(n, d);
            if whole.is_regular(&a) {
                out.insert(a);
            }
        }
    }
    out.into_iter().collect()
}

/// `{a : ‖a‖ ≤ r}` or `{a : ‖a‖ < r}` in the stalk at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchIdeal {
    pub radius: Rational,
    pub open: bool,
}

impl ArchIdeal {
    pub fn closed(radius: Rational) -> Result<Self> {
        if radius.is_negative() || radius > Rational::one() {
            return Err(Error::InvalidInput(format!("radius {radius} outside [0, 1]")));
        }
        Ok(ArchIdeal { radius, open: false })
    }

    pub fn open(radius: Rational) -> Result<Self> {
        if !radius.is_positive() || radius > Rational::one() {
            return Err(Error::InvalidInput(format!("open radius {radius} outside (0, 1]")));
        }
        Ok(ArchIdeal { radius, open: true })
    }

    pub fn contains(&self, a: &Rational) -> bool {
        if self.open {
            a.abs() < self.radius
        } else {
            a.abs() <= self.radius
        }
    }

    /// Only the zero ideal and the open unit ball are prime: for any other
    /// proper ball some `a ∉ I` has `a² ∈ I`.
    pub fn is_prime(&self) -> bool {
        (!self.open && self.radius.is_zero()) || (self.open && self.radius.is_one())
    }

    /// An element outside the ideal whose square lies inside, witnessing
    /// that the ideal is not prime; `None` for prime or improper ideals.
    pub fn non_prime_witness(&self) -> Option<Rational> {
        if self.is_prime() || (!self.open && self.radius.is_one()) {
            return None;
        }
        // a rational strictly between r and min(√r, 1), found by bisection
        let r = self.radius;
        let (mut lo, mut hi) = (r, Rational::one());
        for _ in 0..30 {
            let mid = (lo + hi) / Rational::from_integer(2);
            let ok = |x: &Rational| !self.contains(x) && self.contains(&(x * x));
            if ok(&mid) {
                return Some(mid);
            }
            if mid * mid > r {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        None
    }
}

impl ArchIdeal {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "radius": self.radius.to_string(), "boundary": if self.open { "open" } else { "closed" } })
    }
}

impl fmt::Display for ArchIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.open { "open" } else { "closed" };
        write!(f, "{kind} ball of radius {}", self.radius)
    }
}

/// The ideal of the archimedean stalk generated by `generators`. Sums only
/// come from `1 + (-1) ≡ 0`, so the ideal is the closed ball of the largest
/// generator norm.
pub fn classify_arch_ideal(generators: &[Rational]) -> Result<ArchIdeal> {
    if let Some(g) = generators.iter().find(|g| !integral_at(g, Place::Infinity)) {
        return Err(Error::GeneratorOutsideStalk(g.to_string()));
    }
    let r = generators.iter().map(Rational::abs).max().unwrap_or_else(Rational::zero);
    ArchIdeal::closed(r)
}

/// Prime ideals of the archimedean stalk.
pub fn arch_stalk_primes() -> Vec<ArchIdeal> {
    vec![ArchIdeal { radius: Rational::zero(), open: false }, ArchIdeal { radius: Rational::one(), open: true }]
}

/// Prime ideals `(0)` and `(p)` of the stalk at a finite prime.
pub fn finite_stalk_primes(p: u64) -> Result<Vec<String>> {
    Place::finite(p)?;
    Ok(vec!["(0)".into(), format!("({p})")])
}

/// The ideal of the stalk at `p` generated by `a`: `(0)` or `(p^i)`.
pub fn finite_stalk_ideal(a: &Rational, p: u64) -> Result<String> {
    let place = Place::finite(p)?;
    if !stalk_contains(a, place) {
        return Err(Error::GeneratorOutsideStalk(a.to_string()));
    }
    Ok(match valuation(*a.numer(), p) {
        _ if a.is_zero() => "(0)".into(),
        0 => "(1)".into(),
        1 => format!("({p})"),
        i => format!("({p}^{i})"),
    })
}

/// A radius for the ball-coincidence question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Rational(Rational),
    /// A named irrational number such as `√2/2`.
    Irrational(String),
}

/// Whether the closed and open balls of radius `r` coincide, which happens
/// exactly when `r` is not a norm. Every rational in `(0, 1]` is its own
/// norm.
pub fn balls_coincide(r: &Radius) -> Result<bool> {
    match r {
        Radius::Rational(x) if !x.is_positive() || *x > Rational::one() => {
            Err(Error::InvalidInput(format!("radius {x} outside (0, 1]")))
        }
        Radius::Rational(_) => Ok(false),
        Radius::Irrational(_) => Ok(true),
    }
}

/// The generic point, the first `k` primes and infinity, ordered by
/// specialization: every closed point lies below the generic point.
pub fn truncated_curve(k: usize) -> (Vec<Place>, FinitePoset) {
    let mut places = vec![Place::Generic];
    places.extend((2u64..).filter(|&p| is_prime(p)).take(k).map(Place::Finite));
    places.push(Place::Infinity);
    let n = places.len();
    let order = FinitePoset::from_fn(n, |i, j| i == j || j == 0);
    (places, order)
}

/// Longest strict chain, as indices from the top down.
fn longest_chain(order: &FinitePoset) -> Vec<usize> {
    let n = order.len();
    let mut best: Vec<Option<Vec<usize>>> = vec![None; n];
    fn down(i: usize, order: &FinitePoset, memo: &mut Vec<Option<Vec<usize>>>) -> Vec<usize> {
        if let Some(c) = &memo[i] {
            return c.clone();
        }
        let mut chain = vec![i];
        for j in 0..order.len() {
            if order.lt(j, i) {
                let mut c = vec![i];
                c.extend(down(j, order, memo));
                if c.len() > chain.len() {
                    chain = c;
                }
            }
        }
        memo[i] = Some(chain.clone());
        chain
    }
    (0..n).map(|i| down(i, order, &mut best)).max_by_key(Vec::len).unwrap_or_default()
}

/// Krull dimension of the truncated curve, with a longest chain.
pub fn curve_dimension(k: usize) -> (usize, Vec<String>) {
    let (places, order) = truncated_curve(k);
    let chain = longest_chain(&order);
    (chain.len() - 1, chain.iter().map(|&i| places[i].to_string()).collect())
}

/// Dimension of the self-product of the truncated curve, every pair of
/// points being admissible, with a longest chain.
pub fn surface_dimension(k: usize) -> (usize, Vec<String>) {
    let (places, order) = truncated_curve(k);
    let n = places.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let product = FinitePoset::from_fn(pairs.len(), |a, b| {
        order.leq(pairs[a].0, pairs[b].0) && order.leq(pairs[a].1, pairs[b].1)
    });
    let chain = longest_chain(&product);
    let labels = chain.iter().map(|&c| format!("({}, {})", places[pairs[c].0], places[pairs[c].1])).collect();
    (chain.len() - 1, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn regular_functions() {
        let away_from_2 = CurveOpen::complement([Place::Finite(2)]).unwrap();
        assert!(away_from_2.is_regular(&q(1, 2)));
        assert!(!CurveOpen::whole().is_regular(&q(1, 2)));
        let away_from_inf = CurveOpen::complement([Place::Infinity]).unwrap();
        assert!(away_from_inf.is_regular(&q(2, 1)));
        assert!(!away_from_inf.is_regular(&q(1, 3)));
        assert!(CurveOpen::whole().is_regular(&q(-1, 1)));
        assert!(!CurveOpen::whole().is_regular(&q(2, 1)));
        assert!(CurveOpen::Empty.is_regular(&q(7, 3)));
    }

    #[test]
    fn global_sections_are_f1_squared() {
        assert_eq!(global_carrier(30), vec![q(-1, 1), q(0, 1), q(1, 1)]);
        let g = global_sections();
        let f = crate::catalog::f1n(2).unwrap();
        assert_eq!(g.coefficients().table, f.coefficients().table);
        assert_eq!(g.coefficients().relations, f.coefficients().relations);
    }

    #[test]
    fn archimedean_ideals() {
        assert_eq!(classify_arch_ideal(&[q(2, 3)]).unwrap(), ArchIdeal::closed(q(2, 3)).unwrap());
        assert_eq!(classify_arch_ideal(&[q(-1, 3), q(1, 2)]).unwrap().radius, q(1, 2));
        assert_eq!(classify_arch_ideal(&[]).unwrap(), ArchIdeal::closed(q(0, 1)).unwrap());
        assert_eq!(classify_arch_ideal(&[q(3, 2)]), Err(Error::GeneratorOutsideStalk("3/2".into())));
        let primes = arch_stalk_primes();
        assert_eq!(primes.len(), 2);
        assert!(primes.iter().all(ArchIdeal::is_prime));
        for r in [q(1, 3), q(2, 3), q(99, 100)] {
            for ideal in [ArchIdeal::closed(r).unwrap(), ArchIdeal::open(r).unwrap()] {
                let w = ideal.non_prime_witness().expect("a witness");
                assert!(!ideal.contains(&w) && ideal.contains(&(w * w)), "{ideal}");
            }
        }
    }

    #[test]
    fn finite_stalks() {
        assert_eq!(finite_stalk_primes(2).unwrap(), vec!["(0)", "(2)"]);
        assert!(finite_stalk_primes(4).is_err());
        assert_eq!(finite_stalk_ideal(&q(9, 5), 3).unwrap(), "(3^2)");
        assert_eq!(finite_stalk_ideal(&q(0, 1), 3).unwrap(), "(0)");
        assert!(in_maximal_ideal(&q(3, 5), Place::Finite(3)));
        assert!(!in_maximal_ideal(&q(5, 3), Place::Finite(3)));
    }

    #[test]
    fn ball_coincidence() {
        assert!(!balls_coincide(&Radius::Rational(q(1, 2))).unwrap());
        assert!(!balls_coincide(&Radius::Rational(q(1, 1))).unwrap());
        assert!(balls_coincide(&Radius::Irrational("√2/2".into())).unwrap());
        assert!(balls_coincide(&Radius::Rational(q(0, 1))).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(curve_dimension(3).0, 1);
        for k in [1, 2, 5] {
            assert_eq!(surface_dimension(k).0, 2, "k = {k}");
        }
        let (_, chain) = surface_dimension(1);
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[0], "(η, η)");
    }

    #[test]
    fn finite_part_is_spec_of_the_integers() {
        let (places, order) = truncated_curve(4);
        let finite: Vec<usize> =
            (0..places.len()).filter(|&i| !matches!(places[i], Place::Infinity)).collect();
        // prime ideals (0), (2), (3), (5), (7) of Z under inclusion
        let gens: Vec<i64> = finite
            .iter()
            .map(|&i| match places[i] {
                Place::Finite(p) => p as i64,
                _ => 0,
            })
            .collect();
        let spec_z = FinitePoset::from_fn(gens.len(), |i, j| gens[i] == gens[j] || gens[i] == 0);
        assert!(order.induced(&finite).dual().is_isomorphic(&spec_z));
    }
}
