//! Ideals: additive closure, certification and primality.

use std::collections::BTreeSet;

use serde::Serialize;

use super::coeff::{CoeffIdx, ONE, ZERO};
use super::monoid::{Elem, Monoid};
use super::points::{for_each_point, Point, PointTarget};
use super::sum::{Budget, FormalSum, Relation};
use super::{Blueprint, Engine};
use crate::error::{Error, Result};
use crate::field::FieldElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Saturation {
    Exact,
    BudgetTruncated,
}

/// An ideal given by generators together with its computed closure.
///
/// For finite tables `members` lists every element; for the monomial backend
/// it lists minimal monomial generators of the closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub generators: Vec<Elem>,
    pub members: Vec<Elem>,
    pub saturation: Saturation,
}

/// Targets tried when looking for a separating point.
const WITNESS_ORDERS: [u32; 6] = [2, 3, 4, 5, 7, 8];
/// Assignments visited per target before moving on.
const WITNESS_SEARCH_CAP: u64 = 200_000;

impl Ideal {
    pub fn zero() -> Self {
        Ideal { generators: vec![], members: vec![], saturation: Saturation::Exact }
    }

    pub fn is_exact(&self) -> bool {
        self.saturation == Saturation::Exact
    }

    pub fn contains(&self, monoid: &Monoid, e: &Elem) -> bool {
        if e.is_zero() {
            return true;
        }
        if monoid.is_finite_table() {
            self.members.binary_search(e).is_ok()
        } else {
            self.members.iter().any(|g| monoid.divides(g, e))
        }
    }

    pub fn is_proper(&self, monoid: &Monoid) -> bool {
        !self.contains(monoid, &monoid.one())
    }

    /// Generators not equal to zero, as displayed strings.
    pub fn render(&self, monoid: &Monoid) -> Vec<String> {
        self.members.iter().map(|e| monoid.fmt_elem(e)).collect()
    }

    /// Indices of generators `T_i` that are minimal members (coefficient a
    /// unit), together with the coefficient elements that are members.
    /// `None` when some minimal member is neither.
    pub fn variable_form(&self, monoid: &Monoid) -> Option<(Vec<usize>, Vec<CoeffIdx>)> {
        if monoid.is_finite_table() {
            return Some((vec![], self.members.iter().map(|e| e.coeff).collect()));
        }
        let mut vars = Vec::new();
        let mut consts = Vec::new();
        for g in &self.members {
            let support: Vec<usize> = g.support().collect();
            match support.as_slice() {
                [] => consts.push(g.coeff),
                [i] if g.exps[*i] == 1 && monoid.coeffs().is_unit(g.coeff) && !monoid.invertible()[*i] => {
                    vars.push(*i)
                }
                _ => return None,
            }
        }
        // the coefficient part must be closed under the coefficient monoid
        let c = monoid.coeffs();
        let mut closed: BTreeSet<CoeffIdx> = consts.iter().copied().collect();
        for &a in &consts {
            for b in c.all() {
                closed.insert(c.mul(a, b));
            }
        }
        closed.remove(&ZERO);
        vars.sort();
        vars.dedup();
        Some((vars, closed.into_iter().collect()))
    }
}

/// Keeps only divisibility-minimal monomials.
fn minimalize(monoid: &Monoid, mut gens: Vec<Elem>) -> Vec<Elem> {
    gens.retain(|g| !g.is_zero());
    gens.sort_by_key(|g| (g.degree(), g.clone()));
    let mut out: Vec<Elem> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| monoid.divides(h, &g)) {
            out.push(g);
        }
    }
    out.sort();
    out
}

impl Blueprint {
    /// Closure of `s` under multiplication and the additive ideal rule.
    pub fn additive_closure(&self, s: &[Elem], budget: Budget) -> Result<Ideal> {
        let m = self.monoid();
        let gens: Vec<Elem> = s.iter().map(|e| m.check(e.clone())).collect::<Result<_>>()?;
        if m.is_finite_table() {
            self.closure_finite(gens, budget)
        } else {
            self.closure_monomial(gens)
        }
    }

    fn closure_finite(&self, gens: Vec<Elem>, budget: Budget) -> Result<Ideal> {
        let m = self.monoid();
        let carrier = self.carrier().expect("finite table");
        let mut members: BTreeSet<Elem> = BTreeSet::new();
        let absorb = |members: &mut BTreeSet<Elem>, e: &Elem| {
            for x in &carrier {
                let p = m.mul(x, e);
                if !p.is_zero() {
                    members.insert(p);
                }
            }
        };
        for g in &gens {
            absorb(&mut members, g);
        }
        let rels = self.all_relations();
        loop {
            let mut kill = rels.clone();
            kill.extend(members.iter().map(|j| Relation::new(FormalSum::single(j.clone()), FormalSum::empty())));
            let engine = Engine::new(m, &kill, budget);
            let mut grew = false;
            for c in &carrier {
                if c.is_zero() || members.contains(c) {
                    continue;
                }
                let s = engine.search(&FormalSum::single(c.clone()), &FormalSum::empty());
                if s.verdict.is_proved() {
                    absorb(&mut members, c);
                    grew = true;
                    break;
                }
            }
            if !grew {
                break;
            }
        }
        let members: Vec<Elem> = members.into_iter().collect();
        let mut ideal = Ideal { generators: gens, members, saturation: Saturation::BudgetTruncated };
        // certify each non-member by a point killing the ideal but not it
        let outside: Vec<Elem> = carrier
            .iter()
            .filter(|c| !c.is_zero() && !ideal.contains(m, c))
            .cloned()
            .collect();
        let mut unrefuted: BTreeSet<Elem> = outside.into_iter().collect();
        if !unrefuted.is_empty() {
            for target in witness_targets() {
                for_each_point(self, &target, None, |p| {
                    if ideal.members.iter().all(|j| p.coeffs[j.coeff as usize] == 0) {
                        unrefuted.retain(|c| p.coeffs[c.coeff as usize] == 0);
                    }
                    !unrefuted.is_empty()
                })?;
                if unrefuted.is_empty() {
                    break;
                }
            }
        }
        if unrefuted.is_empty() {
            ideal.saturation = Saturation::Exact;
        }
        Ok(ideal)
    }

    fn closure_monomial(&self, gens: Vec<Elem>) -> Result<Ideal> {
        let m = self.monoid();
        let rels = self.all_relations();
        let mut members = minimalize(m, gens.clone());
        loop {
            if members.iter().any(|g| m.is_unit(g)) {
                return Ok(Ideal { generators: gens, members: vec![m.one()], saturation: Saturation::Exact });
            }
            let current = Ideal { generators: vec![], members: members.clone(), saturation: Saturation::Exact };
            let mut found = Vec::new();
            for r in &rels {
                found.extend(one_step(m, &current, r));
            }
            found.retain(|c| !current.contains(m, c));
            if found.is_empty() {
                break;
            }
            members.extend(found);
            members = minimalize(m, members);
        }
        let mut ideal = Ideal { generators: gens, members, saturation: Saturation::BudgetTruncated };
        if rels.is_empty() || self.certify_by_point(&ideal)?.is_some() {
            ideal.saturation = Saturation::Exact;
        }
        Ok(ideal)
    }

    /// Finds a point whose zero set is exactly the (variable-type) ideal;
    /// its kernel is an ideal containing the closure, which certifies it.
    pub fn certify_by_point(&self, ideal: &Ideal) -> Result<Option<(PointTarget, Point)>> {
        let m = self.monoid();
        let Some((vars, consts)) = ideal.variable_form(m) else { return Ok(None) };
        for target in witness_targets() {
            let domains: Vec<Vec<FieldElem>> = (0..m.ngens())
                .map(|i| if vars.contains(&i) { vec![0] } else { target.nonzero() })
                .collect();
            let total: u64 = domains.iter().map(|d| d.len() as u64).product();
            if total > WITNESS_SEARCH_CAP {
                continue;
            }
            let mut found = None;
            for_each_point(self, &target, Some(&domains), |p| {
                let kernel_ok = m
                    .coeffs()
                    .nonzero()
                    .all(|c| (p.coeffs[c as usize] == 0) == consts.contains(&c));
                if kernel_ok {
                    found = Some(p.clone());
                }
                found.is_none()
            })?;
            if let Some(p) = found {
                return Ok(Some((target, p)));
            }
        }
        Ok(None)
    }

    /// Whether `ideal` is prime: proper with multiplicatively closed
    /// complement. `None` when the closure was not certified.
    pub fn is_prime_ideal(&self, ideal: &Ideal) -> Result<Option<bool>> {
        let m = self.monoid();
        if !ideal.is_proper(m) {
            return Err(Error::NotProper);
        }
        if !ideal.is_exact() {
            return Ok(None);
        }
        if let Some(carrier) = self.carrier() {
            for a in &carrier {
                for b in &carrier {
                    if !ideal.contains(m, a) && !ideal.contains(m, b) && ideal.contains(m, &m.mul(a, b)) {
                        return Ok(Some(false));
                    }
                }
            }
            return Ok(Some(true));
        }
        let Some((_, consts)) = ideal.variable_form(m) else { return Ok(Some(false)) };
        let c = m.coeffs();
        for a in c.nonzero() {
            for b in c.nonzero() {
                let ab = c.mul(a, b);
                if !consts.contains(&a) && !consts.contains(&b) && (ab == ZERO || consts.contains(&ab)) {
                    return Ok(Some(false));
                }
            }
        }
        Ok(Some(!consts.contains(&ONE)))
    }

    /// The ideal generated by single generators, by name.
    pub fn ideal_of(&self, names: &[&str], budget: Budget) -> Result<Ideal> {
        let gens = names.iter().map(|n| self.elem(n)).collect::<Result<Vec<_>>>()?;
        self.additive_closure(&gens, budget)
    }
}

fn witness_targets() -> Vec<PointTarget> {
    let mut v = vec![PointTarget::Boolean];
    v.extend(WITNESS_ORDERS.iter().map(|&q| PointTarget::field(q).expect("supported order")));
    v
}

/// New members forced by one application of the ideal rule to multiples of
/// `r`: all terms of one side and all but one term of the other side lie in
/// the ideal, so the remaining term does too.
fn one_step(m: &Monoid, ideal: &Ideal, r: &Relation) -> Vec<Elem> {
    let mut out = Vec::new();
    for (all, one) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
        for k in 0..one.len() {
            let mut need: Vec<&Elem> = all.terms().iter().collect();
            need.extend(one.terms().iter().enumerate().filter(|(i, _)| *i != k).map(|(_, t)| t));
            let escape = &one.terms()[k];
            for mult in candidate_multipliers(m, ideal, &need) {
                let c = m.mul(&mult, escape);
                if c.is_zero() || ideal.contains(m, &c) {
                    continue;
                }
                if need.iter().all(|t| ideal.contains(m, &m.mul(&mult, t))) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Minimal multipliers sending each needed term into the ideal, one per
/// choice of ideal generator per term, times every coefficient.
fn candidate_multipliers(m: &Monoid, ideal: &Ideal, need: &[&Elem]) -> Vec<Elem> {
    let n = m.ngens();
    let mut exps_set: BTreeSet<Vec<i32>> = BTreeSet::new();
    let gens = &ideal.members;
    let choices = gens.len() + 1; // last choice: term vanishes through the coefficient
    let total = (choices as u64).saturating_pow(need.len() as u32);
    if total > 50_000 {
        return vec![];
    }
    let mut idx = vec![0usize; need.len()];
    loop {
        let mut exps = vec![0i32; n];
        for (t, &c) in need.iter().zip(&idx) {
            if c < gens.len() {
                let g = &gens[c];
                for i in 0..n {
                    if !m.invertible()[i] {
                        exps[i] = exps[i].max(g.exps[i] - t.exps[i]);
                    }
                }
            }
        }
        exps_set.insert(exps);
        let mut i = 0;
        while i < idx.len() {
            idx[i] += 1;
            if idx[i] < choices {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == idx.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for exps in exps_set {
        for c in m.coeffs().nonzero() {
            out.push(m.normalize(Elem { coeff: c, exps: exps.clone() }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::Coefficients;

    fn sl2() -> Blueprint {
        Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap()
    }

    #[test]
    fn sl2_closure_of_t1_t2_is_improper() {
        let b = sl2();
        let i = b.ideal_of(&["T1", "T2"], Budget::default()).unwrap();
        assert!(!i.is_proper(b.monoid()));
        assert!(matches!(b.is_prime_ideal(&i), Err(Error::NotProper)));
    }

    #[test]
    fn sl2_torus_ideal_is_prime() {
        let b = sl2();
        let i = b.ideal_of(&["T2", "T3"], Budget::default()).unwrap();
        assert!(i.is_exact());
        assert_eq!(b.is_prime_ideal(&i).unwrap(), Some(true));
    }

    #[test]
    fn monomial_ideal_in_free_monoid() {
        let b = Blueprint::free(Coefficients::f1(), &["S", "T"], &[]).unwrap();
        let i = b.ideal_of(&["S"], Budget::default()).unwrap();
        let m = b.monoid();
        assert!(i.contains(m, &b.elem("S^3*T").unwrap()));
        assert!(!i.contains(m, &b.elem("T^2").unwrap()));
        assert_eq!(b.is_prime_ideal(&i).unwrap(), Some(true));
        let empty = b.additive_closure(&[], Budget::default()).unwrap();
        assert!(empty.members.is_empty());
        let prod = b.ideal_of(&["S*T"], Budget::default()).unwrap();
        assert_eq!(b.is_prime_ideal(&prod).unwrap(), Some(false));
    }

    #[test]
    fn finite_ideal_of_an_idempotent() {
        // carrier {0, 1, e} with e idempotent and no relations: (e) is just {e}
        let names = ["0", "1", "e"].map(String::from).to_vec();
        let t = vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]];
        let table = crate::blueprint::CoeffTable::new(names, t).unwrap();
        let c = Coefficients::table(table, vec![]);
        let b = Blueprint::free(c, &[], &[]).unwrap();
        let i = b.ideal_of(&["e"], Budget::default()).unwrap();
        assert_eq!(i.members.len(), 1);
        assert!(i.is_exact());
        assert_eq!(b.is_prime_ideal(&i).unwrap(), Some(true));
    }
}
