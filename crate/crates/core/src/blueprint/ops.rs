//! Quotients by ideals, localizations, unit fields, stalks and residue
//! fields.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::coeff::{CoeffIdx, CoeffTable, ONE, ZERO};
use super::ideal::{Ideal, Saturation};
use super::monoid::{Elem, Monoid};
use super::sum::{FormalSum, Relation};
use super::{Blueprint, CoeffSpec, Coefficients};
use crate::error::{Error, Result};

/// Result of a localization; inverting zero collapses everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Localized {
    Blueprint(Blueprint),
    Zero,
}

impl Localized {
    pub fn blueprint(self) -> Result<Blueprint> {
        match self {
            Localized::Blueprint(b) => Ok(b),
            Localized::Zero => Err(Error::InvalidInput("zero was inverted".into())),
        }
    }
}

/// Sub-table on `keep` (containing 0 and 1, closed under multiplication).
fn sub_table(table: &CoeffTable, keep: &[CoeffIdx]) -> (CoeffTable, Vec<Option<CoeffIdx>>) {
    let mut map = vec![None; table.len()];
    for (new, &old) in keep.iter().enumerate() {
        map[old as usize] = Some(new as CoeffIdx);
    }
    let names = keep.iter().map(|&a| table.name(a).to_string()).collect();
    let mul = keep
        .iter()
        .map(|&a| keep.iter().map(|&b| map[table.mul(a, b) as usize].expect("closed")).collect())
        .collect();
    (CoeffTable::new(names, mul).expect("sub-monoid of a valid table"), map)
}

/// Quotient of a coefficient table by the monoid congruence generated by
/// `pairs`; class representatives keep their smallest index and name.
fn merge_table(table: &CoeffTable, pairs: &[(CoeffIdx, CoeffIdx)]) -> Result<(CoeffTable, Vec<CoeffIdx>)> {
    let n = table.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    fn union(p: &mut [usize], a: usize, b: usize) -> bool {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        p[hi] = lo;
        true
    }
    for &(a, b) in pairs {
        union(&mut parent, a as usize, b as usize);
    }
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if find(&mut parent, a) == find(&mut parent, b) {
                    for c in 0..n {
                        let ac = table.mul(a as CoeffIdx, c as CoeffIdx) as usize;
                        let bc = table.mul(b as CoeffIdx, c as CoeffIdx) as usize;
                        changed |= union(&mut parent, ac, bc);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    if find(&mut parent, 0) == find(&mut parent, 1) {
        return Err(Error::ImproperIdeal("the quotient identifies 0 and 1".into()));
    }
    let reps: Vec<usize> = (0..n).filter(|&a| find(&mut parent, a) == a).collect();
    let mut map = vec![0 as CoeffIdx; n];
    for a in 0..n {
        let r = find(&mut parent, a);
        map[a] = reps.iter().position(|&x| x == r).unwrap() as CoeffIdx;
    }
    let names = reps.iter().map(|&a| table.name(a as CoeffIdx).to_string()).collect();
    let mul = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| map[table.mul(a as CoeffIdx, b as CoeffIdx) as usize]).collect())
        .collect();
    Ok((CoeffTable::new(names, mul)?, map))
}

/// Monoid of fractions of a coefficient table at the multiplicative
/// closure of `s`. `None` when zero becomes invertible.
pub(crate) fn fraction_table(table: &CoeffTable, s: &[CoeffIdx]) -> Option<(CoeffTable, Vec<CoeffIdx>)> {
    let mut closure: BTreeSet<CoeffIdx> = BTreeSet::from([ONE]);
    let mut frontier: Vec<CoeffIdx> = s.to_vec();
    while let Some(x) = frontier.pop() {
        let new: Vec<CoeffIdx> = closure.iter().map(|&c| table.mul(c, x)).collect();
        for y in new {
            if closure.insert(y) {
                frontier.push(y);
            }
        }
    }
    if closure.contains(&ZERO) {
        return None;
    }
    let sbar: Vec<CoeffIdx> = closure.into_iter().collect();
    let n = table.len();
    let pairs: Vec<(CoeffIdx, CoeffIdx)> = (0..n as CoeffIdx)
        .flat_map(|a| sbar.iter().map(move |&t| (a, t)))
        .collect();
    let equiv = |(a, s): (CoeffIdx, CoeffIdx), (b, t): (CoeffIdx, CoeffIdx)| {
        sbar.iter().any(|&u| table.mul(u, table.mul(a, t)) == table.mul(u, table.mul(b, s)))
    };
    // class representatives in order: zero, one, then by first appearance
    let mut reps: Vec<(CoeffIdx, CoeffIdx)> = vec![(ZERO, ONE), (ONE, ONE)];
    for &p in &pairs {
        if !reps.iter().any(|&r| equiv(r, p)) {
            reps.push(p);
        }
    }
    let class = |p: (CoeffIdx, CoeffIdx)| reps.iter().position(|&r| equiv(r, p)).unwrap() as CoeffIdx;
    let names = reps
        .iter()
        .map(|&(a, t)| match (0..n as CoeffIdx).find(|&x| equiv((x, ONE), (a, t))) {
            Some(x) => table.name(x).to_string(),
            None => format!("{}/{}", table.name(a), table.name(t)),
        })
        .collect();
    let mul = reps
        .iter()
        .map(|&(a, s)| reps.iter().map(|&(b, t)| class((table.mul(a, b), table.mul(s, t)))).collect())
        .collect();
    let map = (0..n as CoeffIdx).map(|a| class((a, ONE))).collect();
    Some((CoeffTable::new(names, mul).expect("fractions form a monoid"), map))
}

/// Mutable presentation data used while rebuilding a blueprint.
#[derive(Clone, Debug)]
pub(crate) struct Draft {
    pub table: CoeffTable,
    pub gens: Vec<String>,
    pub invertible: Vec<bool>,
    pub idents: Vec<(Vec<i64>, CoeffIdx)>,
    /// All relations, coefficient relations included.
    pub rels: Vec<(Vec<Elem>, Vec<Elem>)>,
    pub original: Coefficients,
}

impl Draft {
    pub fn from_blueprint(b: &Blueprint) -> Self {
        let m = b.monoid();
        Draft {
            table: m.coeffs().clone(),
            gens: m.generators().to_vec(),
            invertible: m.invertible().to_vec(),
            idents: m.identifications().generators.clone(),
            rels: b
                .all_relations()
                .into_iter()
                .map(|r| (r.lhs.into_terms(), r.rhs.into_terms()))
                .collect(),
            original: b.coefficients().clone(),
        }
    }

    fn map_coeffs(&mut self, map: &[CoeffIdx]) {
        for (_, chi) in &mut self.idents {
            *chi = map[*chi as usize];
        }
        for (l, r) in &mut self.rels {
            for t in l.iter_mut().chain(r.iter_mut()) {
                t.coeff = map[t.coeff as usize];
            }
        }
    }

    /// Collapses the coefficients in `kill` to zero.
    pub fn kill_coefficients(&mut self, kill: &[CoeffIdx]) -> Result<()> {
        if kill.is_empty() {
            return Ok(());
        }
        let pairs: Vec<_> = kill.iter().map(|&c| (c, ZERO)).collect();
        let (t, map) = merge_table(&self.table, &pairs)?;
        self.table = t;
        self.map_coeffs(&map);
        Ok(())
    }

    /// Sends the generators in `kill` to zero and drops them.
    pub fn kill_generators(&mut self, kill: &[usize]) {
        if kill.is_empty() {
            return;
        }
        let keep: Vec<usize> = (0..self.gens.len()).filter(|i| !kill.contains(i)).collect();
        let project = |e: &Elem| -> Elem {
            if kill.iter().any(|&i| e.exps[i] != 0) {
                Elem { coeff: ZERO, exps: vec![0; keep.len()] }
            } else {
                Elem { coeff: e.coeff, exps: keep.iter().map(|&i| e.exps[i]).collect() }
            }
        };
        for (l, r) in &mut self.rels {
            *l = l.iter().map(project).collect();
            *r = r.iter().map(project).collect();
        }
        self.idents = self
            .idents
            .iter()
            .map(|(d, chi)| (keep.iter().map(|&i| d[i]).collect(), *chi))
            .collect();
        self.gens = keep.iter().map(|&i| self.gens[i].clone()).collect();
        self.invertible = keep.iter().map(|&i| self.invertible[i]).collect();
    }

    pub fn localize_coefficients(&mut self, s: &[CoeffIdx]) -> bool {
        let s: Vec<CoeffIdx> = s.iter().copied().filter(|&c| !self.table.is_unit(c)).collect();
        if s.is_empty() {
            return true;
        }
        match fraction_table(&self.table, &s) {
            None => false,
            Some((t, map)) => {
                self.table = t;
                self.map_coeffs(&map);
                true
            }
        }
    }

    fn monoid(&self) -> Result<Monoid> {
        Monoid::new(Arc::new(self.table.clone()), self.gens.clone(), self.invertible.clone(), self.idents.clone())
    }

    /// Absorbs single ≡ single relations into the monoid and builds the
    /// blueprint.
    pub fn finish(mut self, guard: bool) -> Result<Blueprint> {
        loop {
            let monoid = self.monoid()?;
            let mut rels = Vec::new();
            for (l, r) in &self.rels {
                let norm = |v: &Vec<Elem>| FormalSum::new(v.iter().map(|e| monoid.normalize(e.clone())).collect());
                let rel = Relation::new(norm(l), norm(r));
                if !rel.is_trivial() {
                    rels.push(rel);
                }
            }
            let single = rels.iter().position(|r| r.lhs.len() <= 1 && r.rhs.len() <= 1);
            let Some(pos) = single else {
                self.rels = rels.into_iter().map(|r| (r.lhs.into_terms(), r.rhs.into_terms())).collect();
                return self.build(monoid, guard);
            };
            let rel = rels.remove(pos);
            self.rels = rels.into_iter().map(|r| (r.lhs.into_terms(), r.rhs.into_terms())).collect();
            let (a, b) = match (rel.lhs.terms().first(), rel.rhs.terms().first()) {
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                (Some(a), None) | (None, Some(a)) => {
                    return Err(Error::ImproperIdeal(format!("{} = 0 survives", monoid.fmt_elem(a))))
                }
                (None, None) => unreachable!("trivial relations were dropped"),
            };
            self.absorb(&monoid, &a, &b)?;
        }
    }

    fn absorb(&mut self, monoid: &Monoid, a: &Elem, b: &Elem) -> Result<()> {
        if a.exps == b.exps {
            let (t, map) = merge_table(&self.table, &[(a.coeff, b.coeff)])?;
            self.table = t;
            self.map_coeffs(&map);
            return Ok(());
        }
        let c = monoid.coeffs();
        let (Some(ia), true) = (c.inverse(a.coeff), c.is_unit(b.coeff)) else {
            return Err(Error::Unsupported(format!(
                "identification {} = {} with non-unit coefficients",
                monoid.fmt_elem(a),
                monoid.fmt_elem(b)
            )));
        };
        let d: Vec<i64> = a.exps.iter().zip(&b.exps).map(|(x, y)| (x - y) as i64).collect();
        let mixed = d.iter().enumerate().any(|(i, &x)| x != 0 && !self.invertible[i]);
        if mixed {
            let is_unit_monomial =
                |e: &Elem| e.exps.iter().enumerate().all(|(i, &x)| x == 0 || self.invertible[i]);
            let grow = if is_unit_monomial(b) {
                a
            } else if is_unit_monomial(a) {
                b
            } else {
                return Err(Error::Unsupported(format!(
                    "identification {} = {} between non-units",
                    monoid.fmt_elem(a),
                    monoid.fmt_elem(b)
                )));
            };
            for i in grow.support().collect::<Vec<_>>() {
                self.invertible[i] = true;
            }
        }
        self.idents.push((d, c.mul(b.coeff, ia)));
        Ok(())
    }

    fn build(self, monoid: Monoid, guard: bool) -> Result<Blueprint> {
        let mut coeff_rels = Vec::new();
        let mut rels = Vec::new();
        for (l, r) in self.rels {
            if l.iter().chain(&r).all(|e| e.exps.iter().all(|&x| x == 0)) {
                let mut lc: Vec<CoeffIdx> = l.iter().map(|e| e.coeff).collect();
                let mut rc: Vec<CoeffIdx> = r.iter().map(|e| e.coeff).collect();
                lc.sort();
                rc.sort();
                coeff_rels.push(if rc < lc { (rc, lc) } else { (lc, rc) });
            } else {
                rels.push(Relation::new(FormalSum::new(l), FormalSum::new(r)));
            }
        }
        coeff_rels.sort();
        coeff_rels.dedup();
        let mut orig_rels = self.original.relations.clone();
        for (l, r) in &mut orig_rels {
            l.sort();
            r.sort();
            if r < l {
                std::mem::swap(l, r);
            }
        }
        orig_rels.sort();
        let coefficients = if *self.original.table == self.table && orig_rels == coeff_rels {
            self.original.clone()
        } else {
            Coefficients { spec: CoeffSpec::Table, table: monoid.coeffs_arc().clone(), relations: coeff_rels }
        };
        let coefficients = Coefficients { table: monoid.coeffs_arc().clone(), ..coefficients };
        if guard {
            Blueprint::new(coefficients, monoid, rels)
        } else {
            Blueprint::new_unchecked(coefficients, monoid, rels)
        }
    }
}

impl Blueprint {
    /// `B/I`: the ideal collapses to zero; relations that become single ≡
    /// single are absorbed into the monoid.
    pub fn quotient_by_ideal(&self, ideal: &Ideal) -> Result<Blueprint> {
        let m = self.monoid();
        if ideal.saturation != Saturation::Exact {
            return Err(Error::ImproperIdeal("closure not certified".into()));
        }
        if !ideal.is_proper(m) {
            return Err(Error::ImproperIdeal("ideal contains 1".into()));
        }
        if ideal.members.is_empty() {
            return Ok(self.clone());
        }
        let (vars, consts) = ideal
            .variable_form(m)
            .ok_or_else(|| Error::Unsupported("quotients by non-variable monomial ideals".into()))?;
        let mut draft = Draft::from_blueprint(self);
        draft.kill_coefficients(&consts)?;
        draft.kill_generators(&vars);
        draft.finish(true).map(|b| b.with_budget(self.budget()))
    }

    /// `S⁻¹B` for the multiplicative set generated by `s`.
    pub fn localize(&self, s: &[Elem]) -> Result<Localized> {
        let m = self.monoid();
        let s: Vec<Elem> = s.iter().map(|e| m.check(e.clone())).collect::<Result<_>>()?;
        if s.iter().any(Elem::is_zero) {
            return Ok(Localized::Zero);
        }
        let mut draft = Draft::from_blueprint(self);
        let coeffs: Vec<CoeffIdx> = s.iter().map(|e| e.coeff).collect();
        if !draft.localize_coefficients(&coeffs) {
            return Ok(Localized::Zero);
        }
        for e in &s {
            for i in e.support() {
                draft.invertible[i] = true;
            }
        }
        Ok(Localized::Blueprint(draft.finish(true)?.with_budget(self.budget())))
    }

    /// Units together with zero, with the relations among them.
    pub fn unit_field(&self) -> Result<Blueprint> {
        let m = self.monoid();
        let c = m.coeffs();
        let keep: Vec<CoeffIdx> =
            std::iter::once(ZERO).chain(c.nonzero().filter(|&a| c.is_unit(a))).collect();
        let (table, cmap) = sub_table(c, &keep);
        let gens_keep: Vec<usize> = (0..m.ngens()).filter(|&i| m.invertible()[i]).collect();
        let project = |e: &Elem| -> Option<Elem> {
            if e.is_zero() {
                return Some(Elem { coeff: ZERO, exps: vec![0; gens_keep.len()] });
            }
            if !m.is_unit(e) {
                return None;
            }
            Some(Elem { coeff: cmap[e.coeff as usize]?, exps: gens_keep.iter().map(|&i| e.exps[i]).collect() })
        };
        let mut rels = Vec::new();
        for r in self.all_relations() {
            let l: Option<Vec<Elem>> = r.lhs.terms().iter().map(project).collect();
            let rr: Option<Vec<Elem>> = r.rhs.terms().iter().map(project).collect();
            if let (Some(l), Some(rr)) = (l, rr) {
                rels.push((l, rr));
            }
        }
        let idents = m
            .identifications()
            .generators
            .iter()
            .map(|(d, chi)| (gens_keep.iter().map(|&i| d[i]).collect(), cmap[*chi as usize].unwrap()))
            .collect();
        let draft = Draft {
            table,
            gens: gens_keep.iter().map(|&i| m.generators()[i].clone()).collect(),
            invertible: vec![true; gens_keep.len()],
            idents,
            rels,
            original: self.coefficients().clone(),
        };
        Ok(draft.finish(false)?.with_budget(self.budget()))
    }

    /// Whether every nonzero element is a unit.
    pub fn is_blue_field(&self) -> bool {
        let m = self.monoid();
        m.coeffs().is_group_with_zero() && m.invertible().iter().all(|&x| x)
    }

    /// Localization at the complement of a prime ideal.
    pub fn stalk(&self, prime: &Ideal) -> Result<Blueprint> {
        let m = self.monoid();
        let (vars, consts) = prime
            .variable_form(m)
            .ok_or_else(|| Error::NotAnIdeal("prime is not generated by variables".into()))?;
        let mut s: Vec<Elem> = m.coeffs().nonzero().filter(|c| !consts.contains(c)).map(|c| m.constant(c)).collect();
        s.extend((0..m.ngens()).filter(|i| !vars.contains(i) && !m.invertible()[*i]).map(|i| m.gen(i)));
        self.localize(&s)?.blueprint()
    }

    /// `O_p / m_p`.
    pub fn residue_field(&self, prime: &Ideal) -> Result<Blueprint> {
        let m = self.monoid();
        let (vars, _) = prime
            .variable_form(m)
            .ok_or_else(|| Error::NotAnIdeal("prime is not generated by variables".into()))?;
        let local = self.stalk(prime)?;
        let lm = local.monoid();
        let mut draft = Draft::from_blueprint(&local);
        // outside the prime everything is inverted, so the remaining
        // non-units are the image of its coefficient part
        let non_units: Vec<CoeffIdx> = lm.coeffs().nonzero().filter(|&c| !lm.coeffs().is_unit(c)).collect();
        draft.kill_coefficients(&non_units)?;
        let names: Vec<&String> = vars.iter().map(|&i| &m.generators()[i]).collect();
        let kill: Vec<usize> = names.iter().map(|n| lm.gen_index(n).expect("stalk keeps generators")).collect();
        draft.kill_generators(&kill);
        draft.finish(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::{Budget, Coefficients};

    fn sl2() -> Blueprint {
        Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap()
    }

    #[test]
    fn sl2_torus_quotient() {
        let b = sl2();
        let i = b.ideal_of(&["T2", "T3"], Budget::default()).unwrap();
        let q = b.quotient_by_ideal(&i).unwrap();
        let m = q.monoid();
        assert_eq!(m.generators(), &["T1", "T4"]);
        assert!(m.invertible().iter().all(|&x| x));
        assert_eq!(m.identifications().rank(), 1);
        assert!(q.relations().is_empty());
        assert_eq!(m.mul(&q.elem("T1").unwrap(), &q.elem("T4").unwrap()), m.one());
    }

    #[test]
    fn killing_the_variable_of_the_affine_line() {
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let i = a1.ideal_of(&["T"], Budget::default()).unwrap();
        let q = a1.quotient_by_ideal(&i).unwrap();
        assert!(q.is_finite_table());
        assert_eq!(q.carrier().unwrap().len(), 2);
        assert_eq!(a1.quotient_by_ideal(&Ideal::zero()).unwrap(), a1);
    }

    #[test]
    fn localizations() {
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let t = a1.elem("T").unwrap();
        let gm = a1.localize(&[t]).unwrap().blueprint().unwrap();
        assert!(gm.is_blue_field());
        assert_eq!(a1.localize(&[a1.monoid().one()]).unwrap(), Localized::Blueprint(a1.clone()));
        assert_eq!(a1.localize(&[a1.monoid().zero()]).unwrap(), Localized::Zero);
    }

    #[test]
    fn unit_fields() {
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let u = a1.unit_field().unwrap();
        assert!(u.is_finite_table());
        assert_eq!(u.carrier().unwrap().len(), 2);
        let f14 = Blueprint::free(Coefficients::f1n(4), &[], &[]).unwrap();
        assert_eq!(f14.unit_field().unwrap(), f14);
        let gm = Blueprint::free(Coefficients::f1(), &["T"], &["T"]).unwrap();
        assert_eq!(gm.unit_field().unwrap(), gm);
        assert_eq!(gm.unit_field().unwrap().unit_field().unwrap(), gm.unit_field().unwrap());
    }

    #[test]
    fn sl2_residue_field_at_torus_point() {
        let b = sl2();
        let p = b.ideal_of(&["T2", "T3"], Budget::default()).unwrap();
        let k = b.residue_field(&p).unwrap();
        assert!(k.is_blue_field());
        assert_eq!(k.monoid().generators(), &["T1", "T4"]);
        assert_eq!(k.monoid().identifications().rank(), 1);
    }

    #[test]
    fn finite_fractions() {
        // {0, e, 1} with e idempotent: inverting e identifies e with 1
        let names = ["0", "1", "e"].map(String::from).to_vec();
        let t = vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]];
        let (f, map) = fraction_table(&CoeffTable::new(names, t).unwrap(), &[2]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(map, vec![0, 1, 1]);
    }
}
