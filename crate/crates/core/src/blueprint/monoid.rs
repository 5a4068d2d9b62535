//! Monoid backends: a finite coefficient table, optionally extended by
//! free generators (some of them invertible) modulo an identification
//! lattice on the invertible coordinates.

use std::fmt;
use std::sync::Arc;

use super::coeff::{CoeffIdx, CoeffTable, ONE, ZERO};
use crate::error::{Error, Result};
use crate::lattice::{hermite, Hermite};

/// A monoid element: zero, or a coefficient times a Laurent monomial.
///
/// The zero element always carries coefficient `0` and an all-zero exponent
/// vector, so structural equality is element equality once normalized.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Elem {
    pub coeff: CoeffIdx,
    pub exps: Vec<i32>,
}

impl Elem {
    pub fn is_zero(&self) -> bool {
        self.coeff == ZERO
    }

    /// Total degree `Σ |e_i|`.
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|e| e.unsigned_abs()).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, _)| i)
    }
}

/// Monomial identifications `T^d = χ` with `d` supported on invertible
/// generators and `χ` a coefficient unit, kept in Hermite normal form.
#[derive(Clone, Debug)]
pub struct Identifications {
    /// The identifications as supplied (canonical order), for serialization.
    pub generators: Vec<(Vec<i64>, CoeffIdx)>,
    normal: Hermite<i64>,
    characters: Vec<CoeffIdx>,
}

impl PartialEq for Identifications {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for Identifications {}

impl Identifications {
    fn empty() -> Self {
        Identifications {
            generators: vec![],
            normal: Hermite { hnf: vec![], transform: vec![], pivots: vec![] },
            characters: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.normal.pivots.len()
    }

    /// Nonzero Hermite rows of the identified exponent lattice.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.normal.hnf[..self.normal.pivots.len()]
    }

    /// Character values on [`Identifications::rows`].
    pub fn row_characters(&self) -> &[CoeffIdx] {
        &self.characters[..self.normal.pivots.len()]
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    coeffs: Arc<CoeffTable>,
    gens: Vec<String>,
    invertible: Vec<bool>,
    ident: Identifications,
}

fn unit_pow(c: &CoeffTable, a: CoeffIdx, k: i64) -> CoeffIdx {
    c.pow(a, k).expect("characters take unit values")
}

impl Monoid {
    pub fn new(
        coeffs: Arc<CoeffTable>,
        gens: Vec<String>,
        invertible: Vec<bool>,
        identifications: Vec<(Vec<i64>, CoeffIdx)>,
    ) -> Result<Self> {
        if gens.len() != invertible.len() {
            return Err(Error::MalformedBackend("invertibility flags do not match generators".into()));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.is_empty() || g.contains(['*', '^', '+', ' ']) || g.parse::<i64>().is_ok() {
                return Err(Error::MalformedBackend(format!("bad generator name {g:?}")));
            }
            if gens[..i].contains(g) || coeffs.index_of(g).is_some() {
                return Err(Error::MalformedBackend(format!("generator name {g} clashes")));
            }
        }
        let mut m = Monoid { coeffs, gens, invertible, ident: Identifications::empty() };
        m.set_identifications(identifications)?;
        Ok(m)
    }

    pub fn finite(coeffs: Arc<CoeffTable>) -> Self {
        Monoid { coeffs, gens: vec![], invertible: vec![], ident: Identifications::empty() }
    }

    fn set_identifications(&mut self, mut gens: Vec<(Vec<i64>, CoeffIdx)>) -> Result<()> {
        let n = self.gens.len();
        for (d, chi) in &gens {
            if d.len() != n {
                return Err(Error::MalformedBackend("identification has wrong length".into()));
            }
            if let Some(i) = d.iter().enumerate().find(|(i, &x)| x != 0 && !self.invertible[*i]) {
                return Err(Error::MalformedBackend(format!(
                    "identification involves non-invertible generator {}",
                    self.gens[i.0]
                )));
            }
            if !self.coeffs.is_unit(*chi) {
                return Err(Error::MalformedBackend("identification value is not a unit".into()));
            }
        }
        gens.retain(|(d, chi)| d.iter().any(|&x| x != 0) || *chi != ONE);
        gens.sort();
        gens.dedup();
        let rows: Vec<Vec<i64>> = gens.iter().map(|(d, _)| d.clone()).collect();
        let Hermite { hnf, transform, pivots } = hermite(&rows, n);
        let chars: Vec<CoeffIdx> = transform
            .iter()
            .map(|u| {
                u.iter().zip(&gens).fold(ONE, |acc, (&k, (_, chi))| {
                    self.coeffs.mul(acc, unit_pow(&self.coeffs, *chi, k))
                })
            })
            .collect();
        for i in pivots.len()..chars.len() {
            if chars[i] != ONE {
                return Err(Error::ImproperRelations(format!(
                    "identifications force 1 = {}",
                    self.coeffs.name(chars[i])
                )));
            }
        }
        self.ident = Identifications {
            generators: gens,
            normal: Hermite { hnf, transform: vec![], pivots },
            characters: chars,
        };
        Ok(())
    }

    /// Copy with additional identifications.
    pub fn with_identifications(&self, extra: Vec<(Vec<i64>, CoeffIdx)>) -> Result<Self> {
        let mut all = self.ident.generators.clone();
        all.extend(extra);
        let mut m = self.clone();
        m.set_identifications(all)?;
        Ok(m)
    }

    pub fn coeffs(&self) -> &CoeffTable {
        &self.coeffs
    }

    pub fn coeffs_arc(&self) -> &Arc<CoeffTable> {
        &self.coeffs
    }

    pub fn generators(&self) -> &[String] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn invertible(&self) -> &[bool] {
        &self.invertible
    }

    pub fn identifications(&self) -> &Identifications {
        &self.ident
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g == name)
    }

    /// True when the carrier is exactly the coefficient table.
    pub fn is_finite_table(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn zero(&self) -> Elem {
        Elem { coeff: ZERO, exps: vec![0; self.gens.len()] }
    }

    pub fn one(&self) -> Elem {
        Elem { coeff: ONE, exps: vec![0; self.gens.len()] }
    }

    pub fn constant(&self, c: CoeffIdx) -> Elem {
        Elem { coeff: c, exps: vec![0; self.gens.len()] }
    }

    pub fn gen(&self, i: usize) -> Elem {
        let mut e = self.one();
        e.exps[i] = 1;
        self.normalize(e)
    }

    /// Brings an element into normal form: zero is canonical, exponents are
    /// reduced into the coset representative of the identification lattice.
    pub fn normalize(&self, mut e: Elem) -> Elem {
        if e.coeff == ZERO {
            return self.zero();
        }
        if self.ident.normal.pivots.is_empty() {
            return e;
        }
        let mut v: Vec<i64> = e.exps.iter().map(|&x| x as i64).collect();
        let ks = self.ident.normal.reduce(&mut v);
        let mut c = e.coeff;
        for (k, chi) in ks.iter().zip(&self.ident.characters) {
            if *k != 0 {
                c = self.coeffs.mul(c, unit_pow(&self.coeffs, *chi, *k));
            }
        }
        e.coeff = c;
        e.exps = v.into_iter().map(|x| x as i32).collect();
        if c == ZERO {
            return self.zero();
        }
        e
    }

    /// Checks that `e` is a legal element (negative exponents only on
    /// invertible generators) and normalizes it.
    pub fn check(&self, e: Elem) -> Result<Elem> {
        if e.exps.len() != self.gens.len() || e.coeff as usize >= self.coeffs.len() {
            return Err(Error::ForeignElement(format!("{e:?}")));
        }
        if e.coeff != ZERO {
            for (i, &x) in e.exps.iter().enumerate() {
                if x < 0 && !self.invertible[i] {
                    return Err(Error::ForeignElement(format!(
                        "negative power of non-invertible generator {}",
                        self.gens[i]
                    )));
                }
            }
        }
        Ok(self.normalize(e))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let c = self.coeffs.mul(a.coeff, b.coeff);
        if c == ZERO {
            return self.zero();
        }
        let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
        self.normalize(Elem { coeff: c, exps })
    }

    pub fn pow(&self, a: &Elem, k: u32) -> Elem {
        let mut r = self.one();
        for _ in 0..k {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.coeffs.is_unit(a.coeff)
            && a.exps.iter().zip(&self.invertible).all(|(&x, &inv)| x == 0 || inv)
    }

    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        let c = self.coeffs.inverse(a.coeff)?;
        Some(self.normalize(Elem { coeff: c, exps: a.exps.iter().map(|x| -x).collect() }))
    }

    /// All `x` with `x * f = t`, for `t` and `f` nonzero.
    pub fn divide(&self, t: &Elem, f: &Elem) -> Vec<Elem> {
        if t.is_zero() || f.is_zero() {
            return vec![];
        }
        let mut exps = Vec::with_capacity(t.exps.len());
        for (i, (&a, &b)) in t.exps.iter().zip(&f.exps).enumerate() {
            let d = a - b;
            if d < 0 && !self.invertible[i] {
                return vec![];
            }
            exps.push(d);
        }
        let mut out = Vec::new();
        for e in self.coeffs.nonzero() {
            if self.coeffs.mul(e, f.coeff) == t.coeff {
                let x = self.normalize(Elem { coeff: e, exps: exps.clone() });
                if self.mul(&x, f) == *t {
                    out.push(x);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Whether `f` divides `t`.
    pub fn divides(&self, f: &Elem, t: &Elem) -> bool {
        if t.is_zero() {
            return true;
        }
        !self.divide(t, f).is_empty()
    }

    /// All carrier elements of a finite-table monoid.
    pub fn finite_elements(&self) -> Option<Vec<Elem>> {
        self.is_finite_table().then(|| self.coeffs.all().map(|c| self.constant(c)).collect())
    }

    pub fn fmt_elem(&self, e: &Elem) -> String {
        ElemDisplay { monoid: self, elem: e }.to_string()
    }

    /// Parses `0`, `1`, or `factor(*factor)*` where a factor is a
    /// coefficient symbol, a generator, or `generator^int`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if s == "0" {
            return Ok(self.zero());
        }
        let mut e = self.one();
        if s == "1" {
            return Ok(e);
        }
        if s.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            if let Some(c) = self.coeffs.index_of(factor) {
                e.coeff = self.coeffs.mul(e.coeff, c);
                continue;
            }
            let (name, k) = match factor.split_once('^') {
                Some((n, k)) => (
                    n.trim(),
                    k.trim().parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in {factor}")))?,
                ),
                None => (factor, 1),
            };
            let i = self
                .gen_index(name)
                .ok_or_else(|| Error::ForeignElement(format!("unknown symbol {name}")))?;
            e.exps[i] += k;
        }
        self.check(e)
    }
}

struct ElemDisplay<'a> {
    monoid: &'a Monoid,
    elem: &'a Elem,
}

impl fmt::Display for ElemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.elem;
        if e.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if e.coeff != ONE {
            parts.push(self.monoid.coeffs.name(e.coeff).to_string());
        }
        for (i, &x) in e.exps.iter().enumerate() {
            match x {
                0 => {}
                1 => parts.push(self.monoid.gens[i].clone()),
                _ => parts.push(format!("{}^{}", self.monoid.gens[i], x)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus_pair() -> Monoid {
        Monoid::new(
            Arc::new(CoeffTable::f1()),
            vec!["T1".into(), "T4".into()],
            vec![true, true],
            vec![(vec![1, 1], ONE)],
        )
        .unwrap()
    }

    #[test]
    fn identification_normal_forms() {
        let m = torus_pair();
        let t1 = m.gen(0);
        let t4 = m.gen(1);
        assert_eq!(m.mul(&t1, &t4), m.one());
        assert_eq!(m.inverse(&t1).unwrap(), t4);
        assert_eq!(m.fmt_elem(&m.pow(&t4, 3)), "T4^3");
        assert_eq!(m.parse_elem("T1^2*T4^5").unwrap(), m.pow(&t4, 3));
    }

    #[test]
    fn signed_identification_uses_character() {
        let c = Arc::new(CoeffTable::cyclic(2));
        let minus = c.index_of("-1").unwrap();
        let m = Monoid::new(c, vec!["T".into()], vec![true], vec![(vec![2], minus)]).unwrap();
        let t = m.gen(0);
        let t2 = m.mul(&t, &t);
        assert_eq!(t2, m.constant(minus));
        assert_eq!(m.fmt_elem(&m.pow(&t, 3)), "-1*T");
    }

    #[test]
    fn inconsistent_identifications_are_improper() {
        let c = Arc::new(CoeffTable::cyclic(2));
        let minus = c.index_of("-1").unwrap();
        let r = Monoid::new(
            c,
            vec!["T".into()],
            vec![true],
            vec![(vec![1], ONE), (vec![1], minus)],
        );
        assert!(matches!(r, Err(Error::ImproperRelations(_))));
    }

    #[test]
    fn division_respects_invertibility() {
        let m = Monoid::new(
            Arc::new(CoeffTable::f1()),
            vec!["S".into(), "T".into()],
            vec![false, true],
            vec![],
        )
        .unwrap();
        let s = m.gen(0);
        let t = m.gen(1);
        assert!(m.divide(&t, &s).is_empty());
        assert_eq!(m.divide(&s, &t).len(), 1);
        assert!(m.parse_elem("S^-1").is_err());
        assert_eq!(m.fmt_elem(&m.parse_elem("T^-2*S").unwrap()), "S*T^-2");
    }
}
