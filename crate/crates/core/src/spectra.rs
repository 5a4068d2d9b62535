//! Prime spectra of blueprints as finite posets, with stalks, residue
//! fields, ranks of points, rank spaces and globalization.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::blueprint::{
    fraction_table, Blueprint, Budget, CoeffIdx, CoeffSpec, CoeffTable, Coefficients, Elem, Engine, FormalSum,
    Ideal, Monoid, Relation, ONE, ZERO,
};
use crate::counting::counting_polynomial;
use crate::error::{Error, Result};
use crate::lattice::AbelianGroup;
use crate::poset::FinitePoset;

/// Largest number of generators for prime enumeration.
pub const MAX_SPEC_GENERATORS: usize = 20;
/// Largest carrier of a finite table for prime enumeration.
pub const MAX_SPEC_CARRIER: usize = 8;

/// A prime ideal, recorded by the generators and coefficients it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecPoint {
    pub ideal: Ideal,
    /// Generator indices in the prime (monomial backend).
    pub generators: Vec<usize>,
    /// Nonzero coefficients in the prime.
    pub coefficients: Vec<CoeffIdx>,
    /// Sorted generator names, e.g. `(T2, T3)`, or `(0)`.
    pub label: String,
}

impl SpecPoint {
    fn contains(&self, other: &SpecPoint) -> bool {
        other.generators.iter().all(|g| self.generators.contains(g))
            && other.coefficients.iter().all(|c| self.coefficients.contains(c))
    }

    pub fn size(&self) -> usize {
        self.generators.len() + self.coefficients.len()
    }
}

/// The prime spectrum with its specialization order: `p ≤ q` iff `p ⊆ q`.
#[derive(Clone, Debug)]
pub struct SpecSpace {
    pub blueprint: Blueprint,
    pub points: Vec<SpecPoint>,
    pub order: FinitePoset,
    /// False when some candidate could not be certified within budget.
    pub complete: bool,
}

fn label(m: &Monoid, gens: &[usize], coeffs: &[CoeffIdx]) -> String {
    let mut names: Vec<String> = coeffs.iter().map(|&c| m.coeffs().name(c).to_string()).collect();
    names.extend(gens.iter().map(|&i| m.generators()[i].clone()));
    if names.is_empty() {
        "(0)".into()
    } else {
        format!("({})", names.join(", "))
    }
}

/// Subsets of non-unit nonzero coefficients forming a prime of the table.
fn coefficient_primes(c: &CoeffTable) -> Vec<Vec<CoeffIdx>> {
    let non_units: Vec<CoeffIdx> = c.nonzero().filter(|&a| !c.is_unit(a)).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << non_units.len()) {
        let set: Vec<CoeffIdx> =
            non_units.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a).collect();
        let inside = |x: CoeffIdx| x == ZERO || set.contains(&x);
        let absorbing = set.iter().all(|&a| c.all().all(|b| inside(c.mul(a, b))));
        let closed = c.nonzero().all(|a| inside(a) || c.nonzero().all(|b| inside(b) || !inside(c.mul(a, b))));
        if absorbing && closed {
            out.push(set);
        }
    }
    out
}

enum Candidate {
    Prime(SpecPoint),
    Uncertified,
    Rejected,
}

impl SpecSpace {
    pub fn new(b: &Blueprint, budget: Budget) -> Result<SpecSpace> {
        let m = b.monoid();
        let cprimes = coefficient_primes(m.coeffs());
        let free: Vec<usize> = (0..m.ngens()).filter(|&i| !m.invertible()[i]).collect();
        if m.is_finite_table() {
            if m.coeffs().len() > MAX_SPEC_CARRIER {
                return Err(Error::TooLarge(format!("carrier of {} elements", m.coeffs().len())));
            }
        } else if free.len() > MAX_SPEC_GENERATORS {
            return Err(Error::TooLarge(format!("{} generators", free.len())));
        }
        let subsets = 1usize << free.len();
        let total = subsets * cprimes.len();
        let results: Vec<Candidate> = (0..total)
            .into_par_iter()
            .map(|k| {
                let (mask, ci) = (k % subsets, k / subsets);
                let gens: Vec<usize> =
                    free.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &g)| g).collect();
                Self::candidate(b, &gens, &cprimes[ci], budget)
            })
            .collect::<Result<Vec<_>>>()?;
        let complete = !results.iter().any(|r| matches!(r, Candidate::Uncertified));
        let mut points: Vec<SpecPoint> = results
            .into_iter()
            .filter_map(|r| match r {
                Candidate::Prime(p) => Some(p),
                _ => None,
            })
            .collect();
        points.sort_by(|a, b| {
            (a.size(), &a.coefficients, &a.generators).cmp(&(b.size(), &b.coefficients, &b.generators))
        });
        points.dedup_by(|a, b| a.generators == b.generators && a.coefficients == b.coefficients);
        let order = FinitePoset::from_fn(points.len(), |i, j| points[j].contains(&points[i]));
        Ok(SpecSpace { blueprint: b.clone(), points, order, complete })
    }

    fn candidate(b: &Blueprint, gens: &[usize], coeffs: &[CoeffIdx], budget: Budget) -> Result<Candidate> {
        let m = b.monoid();
        let mut seeds: Vec<Elem> = coeffs.iter().map(|&c| m.constant(c)).collect();
        seeds.extend(gens.iter().map(|&i| m.gen(i)));
        let ideal = b.additive_closure(&seeds, budget)?;
        if !ideal.is_proper(m) {
            return Ok(Candidate::Rejected);
        }
        let same = match ideal.variable_form(m) {
            Some((v, c)) => v == gens && c == coeffs,
            None => false,
        };
        if !same {
            return Ok(Candidate::Rejected);
        }
        if !ideal.is_exact() {
            return Ok(Candidate::Uncertified);
        }
        match b.is_prime_ideal(&ideal)? {
            Some(true) => Ok(Candidate::Prime(SpecPoint {
                ideal,
                generators: gens.to_vec(),
                coefficients: coeffs.to_vec(),
                label: label(m, gens, coeffs),
            })),
            Some(false) => Ok(Candidate::Rejected),
            None => Ok(Candidate::Uncertified),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.points.iter().map(|p| p.label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }

    /// Maximal ideals.
    pub fn closed_points(&self) -> Vec<usize> {
        self.order.maximal()
    }

    pub fn generic_points(&self) -> Vec<usize> {
        self.order.minimal()
    }

    /// Closed sets are exactly the up-sets.
    pub fn is_closed(&self, set: &[bool]) -> bool {
        self.order.is_up_set(set)
    }

    pub fn stalk(&self, i: usize) -> Result<Blueprint> {
        self.blueprint.stalk(&self.points[i].ideal)
    }

    pub fn residue_field(&self, i: usize) -> Result<Blueprint> {
        self.blueprint.residue_field(&self.points[i].ideal)
    }

    /// The closed subscheme `V(p)`, as the quotient `B/p`.
    pub fn closure_blueprint(&self, i: usize) -> Result<Blueprint> {
        self.blueprint.quotient_by_ideal(&self.points[i].ideal)
    }

    /// Hasse diagram in DOT; an edge runs from a point to each point
    /// covering it in the specialization order, drawn bottom to top.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph spec {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for (i, p) in self.points.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{}\"];\n", p.label));
        }
        for (i, j) in self.order.covers() {
            s.push_str(&format!("  n{i} -> n{j};\n"));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m = self.blueprint.monoid();
        let points: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|p| {
                let mut gens: Vec<String> = p.coefficients.iter().map(|&c| m.coeffs().name(c).to_string()).collect();
                gens.extend(p.generators.iter().map(|&i| m.generators()[i].clone()));
                json!({ "label": p.label, "generators": gens })
            })
            .collect();
        let covers: Vec<[usize; 2]> = self.order.covers().into_iter().map(|(i, j)| [i, j]).collect();
        json!({
            "points": points,
            "covers": covers,
            "closed": self.closed_points(),
            "complete": self.complete,
        })
    }

    /// Rank of a point from its closure.
    pub fn rank_of_point(&self, i: usize) -> Result<RankCertificate> {
        rank_of_blueprint(&self.closure_blueprint(i)?)
    }

    /// Points of minimal rank in each connected component.
    pub fn weyl_extension(&self) -> Result<RankSpace> {
        let certs = (0..self.len()).map(|i| self.rank_of_point(i)).collect::<Result<Vec<_>>>()?;
        let mut points = Vec::new();
        let mut min_rank = usize::MAX;
        for comp in self.order.components() {
            let r = comp.iter().map(|&i| certs[i].rank).min().unwrap_or(0);
            min_rank = min_rank.min(r);
            points.extend(comp.into_iter().filter(|&i| certs[i].rank == r));
        }
        points.sort();
        let certificates = points.iter().map(|&i| certs[i].clone()).collect();
        Ok(RankSpace { min_rank: if points.is_empty() { 0 } else { min_rank }, points, certificates })
    }
}

impl Blueprint {
    pub fn spec(&self) -> Result<SpecSpace> {
        SpecSpace::new(self, self.budget())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankMethod {
    /// Generators all invertible: rank of the exponent group.
    Torus,
    /// Degree of the counting polynomial.
    CountingPolynomial,
}

/// Evidence that a closure is a split torus `G_m^r` over `F1` or `F1²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusCertificate {
    pub rank: usize,
    pub torsion: Vec<i64>,
    /// `F1` or `F1^2` when the coefficients are one of those.
    pub coefficient_field: Option<String>,
    /// Torsion-free, free of relations beyond the coefficients, and over
    /// `F1` or `F1²`.
    pub split: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub method: RankMethod,
    pub torus: Option<TorusCertificate>,
}

fn torus_certificate(b: &Blueprint) -> Option<TorusCertificate> {
    let m = b.monoid();
    if !m.coeffs().is_group_with_zero() {
        return None;
    }
    let coefficient_field = match b.coefficients().spec {
        CoeffSpec::F1 => Some("F1".to_string()),
        CoeffSpec::F1Squared => Some("F1^2".to_string()),
        _ => None,
    };
    if m.invertible().iter().all(|&x| x) {
        let rows: Vec<Vec<i64>> = m.identifications().rows().to_vec();
        let group = AbelianGroup::cokernel(&rows, m.ngens());
        let split = group.torsion.is_empty() && b.relations().is_empty() && coefficient_field.is_some();
        return Some(TorusCertificate { rank: group.free_rank, torsion: group.torsion, coefficient_field, split });
    }
    signed_torus_certificate(b)
}

/// Recognizes `F1[T_1..T_n]` with relations `m + 1 ≡ 0` that make every
/// generator a unit: each such `m` acts as `-1`, so the closure is a torus
/// over `F1²`.
fn signed_torus_certificate(b: &Blueprint) -> Option<TorusCertificate> {
    let m = b.monoid();
    if !matches!(b.coefficients().spec, CoeffSpec::F1) || !m.identifications().generators.is_empty() {
        return None;
    }
    let mut rows = Vec::new();
    for r in b.relations() {
        let mut terms: Vec<&Elem> = r.lhs.terms().iter().chain(r.rhs.terms()).filter(|t| !t.is_zero()).collect();
        if !(r.lhs.terms().iter().all(Elem::is_zero) || r.rhs.terms().iter().all(Elem::is_zero)) || terms.len() != 2 {
            return None;
        }
        terms.sort_by_key(|t| t.exps.iter().any(|&k| k != 0));
        let (unit, mono) = (terms[0], terms[1]);
        if unit.exps.iter().any(|&k| k != 0) || unit.coeff != ONE || mono.coeff != ONE {
            return None;
        }
        rows.push(mono.exps.iter().map(|&k| k as i64).collect::<Vec<_>>());
    }
    let covered = (0..m.ngens()).all(|g| m.invertible()[g] || rows.iter().any(|row| row[g] > 0));
    if rows.is_empty() || !covered {
        return None;
    }
    let group = AbelianGroup::cokernel(&rows, m.ngens());
    let split = group.torsion.is_empty();
    Some(TorusCertificate {
        rank: group.free_rank,
        torsion: group.torsion,
        coefficient_field: Some("F1^2".to_string()),
        split,
    })
}

/// Rank by torus recognition, falling back to the counting polynomial.
pub fn rank_of_blueprint(b: &Blueprint) -> Result<RankCertificate> {
    if let Some(t) = torus_certificate(b) {
        return Ok(RankCertificate { rank: t.rank, method: RankMethod::Torus, torus: Some(t) });
    }
    if b.is_finite_table() {
        return Ok(RankCertificate { rank: 0, method: RankMethod::CountingPolynomial, torus: None });
    }
    let p = counting_polynomial(b, None).map_err(|e| Error::RankUndetermined(e.to_string()))?;
    let rank = p.degree().ok_or_else(|| Error::RankUndetermined("no points over finite fields".into()))?;
    Ok(RankCertificate { rank, method: RankMethod::CountingPolynomial, torus: None })
}

/// Minimal-rank points of a spectrum with their certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankSpace {
    pub min_rank: usize,
    pub points: Vec<usize>,
    pub certificates: Vec<RankCertificate>,
}

impl RankSpace {
    /// Every member's closure is a split torus.
    pub fn hypothesis_holds(&self) -> bool {
        self.certificates.iter().all(|c| c.torus.as_ref().is_some_and(|t| t.split))
    }
}

/// Relations of at most this many terms are tested for the global
/// pre-addition.
pub const GLOBAL_RELATION_TERMS: usize = 4;
/// Largest number of compatible families accepted by globalization.
const MAX_GLOBAL_CARRIER: usize = 64;

/// A localization of a finite table at the complement of a prime, with
/// the localization map.
struct LocalTable {
    blueprint: Blueprint,
    map: Vec<CoeffIdx>,
    outside: Vec<CoeffIdx>,
}

fn local_table(b: &Blueprint, prime: &[CoeffIdx]) -> Result<LocalTable> {
    let c = b.monoid().coeffs();
    let outside: Vec<CoeffIdx> = c.nonzero().filter(|a| !prime.contains(a)).collect();
    let (table, map) = fraction_table(c, &outside)
        .ok_or_else(|| Error::InvalidInput("complement of a prime contains zero".into()))?;
    let rels = b
        .coefficients()
        .relations
        .iter()
        .map(|(l, r)| {
            let side = |v: &Vec<CoeffIdx>| {
                let mut w: Vec<CoeffIdx> = v.iter().map(|&x| map[x as usize]).filter(|&x| x != ZERO).collect();
                w.sort();
                w
            };
            (side(l), side(r))
        })
        .filter(|(l, r)| l != r)
        .collect();
    let table = Arc::new(table);
    let coefficients = Coefficients { spec: CoeffSpec::Table, table: table.clone(), relations: rels };
    let blueprint = Blueprint::new_unchecked(coefficients, Monoid::finite(table), vec![])?;
    Ok(LocalTable { blueprint, map, outside })
}

fn sum_of(m: &Monoid, terms: &[CoeffIdx]) -> FormalSum {
    FormalSum::new(terms.iter().map(|&c| m.constant(c)).collect())
}

/// Multisets of nonzero indices of size at most `k`, smallest first.
fn multisets(n: usize, k: usize) -> Vec<Vec<CoeffIdx>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<CoeffIdx>> = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().copied().unwrap_or(1);
            for x in start..n as CoeffIdx {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl Blueprint {
    /// Global sections of the structure sheaf on `Spec B`.
    ///
    /// Finite tables only: the carrier is the set of compatible families of
    /// stalk elements and the pre-addition is generated by the relations of
    /// at most [`GLOBAL_RELATION_TERMS`] terms that hold in every stalk.
    pub fn globalize(&self) -> Result<Blueprint> {
        if !self.is_finite_table() {
            if self.is_pure_monoid() {
                return Ok(self.clone());
            }
            return Err(Error::Unsupported("globalization of monomial blueprints with relations".into()));
        }
        let budget = self.budget();
        let space = self.spec()?;
        if !space.complete {
            return Err(Error::BudgetExhausted("spectrum not certified".into()));
        }
        let c = self.monoid().coeffs();
        let locals: Vec<LocalTable> = space
            .points
            .iter()
            .map(|p| local_table(self, &p.coefficients))
            .collect::<Result<_>>()?;
        let k = locals.len();
        // restriction from the stalk at p to the stalk at a generization q
        let restrict = |p: usize, q: usize, x: CoeffIdx| -> CoeffIdx {
            let (lp, lq) = (&locals[p], &locals[q]);
            let tp = lp.blueprint.monoid().coeffs();
            let tq = lq.blueprint.monoid().coeffs();
            for a in c.all() {
                for &s in std::iter::once(&ONE).chain(&lp.outside) {
                    if tp.mul(x, lp.map[s as usize]) == lp.map[a as usize] {
                        let inv = tq.inverse(lq.map[s as usize]).expect("inverted in the generization");
                        return tq.mul(lq.map[a as usize], inv);
                    }
                }
            }
            unreachable!("every fraction has a representative")
        };
        // compatible families, points visited by increasing ideal size
        let mut families: Vec<Vec<CoeffIdx>> = Vec::new();
        let mut current = vec![0 as CoeffIdx; k];
        fn extend(
            i: usize,
            k: usize,
            locals: &[LocalTable],
            space: &SpecSpace,
            restrict: &dyn Fn(usize, usize, CoeffIdx) -> CoeffIdx,
            current: &mut Vec<CoeffIdx>,
            out: &mut Vec<Vec<CoeffIdx>>,
        ) -> Result<()> {
            if i == k {
                if out.len() >= MAX_GLOBAL_CARRIER {
                    return Err(Error::TooLarge("too many global sections".into()));
                }
                out.push(current.clone());
                return Ok(());
            }
            for x in locals[i].blueprint.monoid().coeffs().all() {
                if (0..i).all(|q| !space.order.lt(q, i) || restrict(i, q, x) == current[q]) {
                    current[i] = x;
                    extend(i + 1, k, locals, space, restrict, current, out)?;
                }
            }
            Ok(())
        }
        extend(0, k, &locals, &space, &restrict, &mut current, &mut families)?;
        // canonical order: images of B first, then the remaining families
        let image = |a: CoeffIdx| -> Vec<CoeffIdx> { locals.iter().map(|l| l.map[a as usize]).collect() };
        let mut ordered: Vec<Vec<CoeffIdx>> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        for a in c.all() {
            let f = image(a);
            if !ordered.contains(&f) {
                ordered.push(f);
                names.push(c.name(a).to_string());
            }
        }
        let injective = ordered.len() == c.len();
        for f in &families {
            if !ordered.contains(f) {
                ordered.push(f.clone());
                let parts: Vec<&str> =
                    f.iter().zip(&locals).map(|(&x, l)| l.blueprint.monoid().coeffs().name(x)).collect();
                names.push(format!("({})", parts.join(",")));
            }
        }
        let index: BTreeMap<Vec<CoeffIdx>, CoeffIdx> =
            ordered.iter().enumerate().map(|(i, f)| (f.clone(), i as CoeffIdx)).collect();
        let mul: Vec<Vec<CoeffIdx>> = ordered
            .iter()
            .map(|f| {
                ordered
                    .iter()
                    .map(|g| {
                        let h: Vec<CoeffIdx> = (0..k)
                            .map(|p| locals[p].blueprint.monoid().coeffs().mul(f[p], g[p]))
                            .collect();
                        index[&h]
                    })
                    .collect()
            })
            .collect();
        let table = Arc::new(CoeffTable::new(names, mul)?);
        let gm = Monoid::finite(table.clone());
        // relations holding in every stalk
        let holds = |l: &[CoeffIdx], r: &[CoeffIdx]| -> Result<bool> {
            for (p, loc) in locals.iter().enumerate() {
                let lm = loc.blueprint.monoid();
                let side = |v: &[CoeffIdx]| {
                    FormalSum::new(v.iter().map(|&x| lm.constant(ordered[x as usize][p])).collect())
                };
                if !loc.blueprint.derive(&Relation::new(side(l), side(r)), budget)?.is_proved() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let sums = multisets(ordered.len(), GLOBAL_RELATION_TERMS);
        let mut kept: Vec<Relation> = Vec::new();
        let mut kept_pairs: Vec<(Vec<CoeffIdx>, Vec<CoeffIdx>)> = Vec::new();
        for (i, l) in sums.iter().enumerate() {
            for r in &sums[i + 1..] {
                if l.len() + r.len() > GLOBAL_RELATION_TERMS {
                    continue;
                }
                let rel = Relation::new(sum_of(&gm, l), sum_of(&gm, r));
                let engine = Engine::new(&gm, &kept, budget);
                if engine.search(&rel.lhs, &rel.rhs).verdict.is_proved() {
                    continue;
                }
                if holds(l, r)? {
                    kept.push(rel);
                    kept_pairs.push((l.clone(), r.clone()));
                }
            }
        }
        if injective && families.len() == c.len() {
            let own = self.engine(budget);
            let sm = self.monoid();
            let all_derivable = kept.iter().all(|r| {
                let back = |s: &FormalSum| FormalSum::new(s.terms().iter().map(|t| sm.constant(t.coeff)).collect());
                own.search(&back(&r.lhs), &back(&r.rhs)).verdict.is_proved()
            });
            if all_derivable {
                return Ok(self.clone());
            }
        }
        let coefficients = Coefficients::table((*table).clone(), kept_pairs);
        let coefficients = Coefficients { table: table.clone(), ..coefficients };
        Blueprint::new(coefficients, gm, vec![]).map(|b| b.with_budget(budget))
    }
}

/// Whether two spectra have isomorphic specialization orders.
pub fn order_isomorphic(a: &SpecSpace, b: &SpecSpace) -> bool {
    a.order.is_isomorphic(&b.order)
}

/// Points of `spec(C)` pulled back along a morphism `B → C`, as indices
/// into `spec(B)`; `None` for a preimage that is not a listed point.
pub fn pullback_map(
    f: &crate::blueprint::Morphism,
    source: &SpecSpace,
    target: &SpecSpace,
) -> Result<Vec<Option<usize>>> {
    let sm = f.source.monoid();
    target
        .points
        .iter()
        .map(|q| {
            let pre = f.preimage(&q.ideal)?;
            let key: BTreeSet<Elem> = pre.members.iter().cloned().collect();
            Ok(source.points.iter().position(|p| {
                let (vars, consts) = p.ideal.variable_form(sm).unwrap_or_default();
                let mut mine: BTreeSet<Elem> = consts.iter().map(|&c| sm.constant(c)).collect();
                mine.extend(vars.iter().map(|&i| sm.gen(i)));
                if sm.is_finite_table() {
                    mine = p.ideal.members.iter().cloned().collect();
                }
                mine == key
            }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> Blueprint {
        Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap()
    }

    #[test]
    fn affine_line_and_plane() {
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let s = a1.spec().unwrap();
        assert_eq!(s.labels(), vec!["(0)", "(T)"]);
        assert!(s.order.lt(0, 1));
        let a2 = Blueprint::free(Coefficients::f1(), &["S", "T"], &[]).unwrap();
        assert_eq!(a2.spec().unwrap().len(), 4);
    }

    #[test]
    fn sl2_spectrum() {
        let s = sl2().spec().unwrap();
        assert!(s.complete);
        assert_eq!(s.labels(), vec!["(0)", "(T1)", "(T2)", "(T3)", "(T4)", "(T1, T4)", "(T2, T3)"]);
        let closed: Vec<&str> = s.closed_points().iter().map(|&i| s.points[i].label.as_str()).collect();
        assert_eq!(closed, vec!["(T1, T4)", "(T2, T3)"]);
    }

    #[test]
    fn sl2_ranks_and_weyl_extension() {
        let s = sl2().spec().unwrap();
        let generic = s.rank_of_point(0).unwrap();
        assert_eq!(generic.rank, 3);
        assert_eq!(generic.method, RankMethod::CountingPolynomial);
        let w = s.weyl_extension().unwrap();
        assert_eq!(w.points.len(), 2);
        assert_eq!(w.min_rank, 1);
        assert!(w.hypothesis_holds());
        let fields: Vec<_> = w.certificates.iter().map(|c| c.torus.as_ref().unwrap().coefficient_field.clone().unwrap()).collect();
        assert_eq!(fields, vec!["F1^2", "F1"]);
    }

    #[test]
    fn dot_output_lists_covers() {
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let dot = a1.spec().unwrap().to_dot();
        assert!(dot.contains("n0 -> n1;"));
        assert!(dot.contains("label=\"(T)\""));
    }

    #[test]
    fn residue_fields_of_the_line() {
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let s = a1.spec().unwrap();
        let generic = s.residue_field(0).unwrap();
        assert_eq!(generic.monoid().invertible(), &[true]);
        let closed = s.residue_field(1).unwrap();
        assert_eq!(closed.monoid().ngens(), 0);
        assert!(closed.is_blue_field());
    }

    fn two_fields() -> Blueprint {
        Blueprint::from_json(
            r#"{
  "coefficients": {
    "elements": ["0", "1", "a", "b", "c", "d"],
    "mul": [["0", "0", "0", "0", "0", "0"], ["0", "1", "a", "b", "c", "d"], ["0", "a", "a", "0", "0", "a"],
            ["0", "b", "0", "b", "c", "c"], ["0", "c", "0", "c", "b", "b"], ["0", "d", "a", "c", "b", "1"]],
    "relations": [[["a", "a"], []], [["b", "b"], ["c"]], [["b", "c"], []]]
  }
}"#,
        )
        .unwrap()
    }

    #[test]
    fn two_field_blueprint_is_local() {
        // no relation mixes the components, so their union is a prime
        let b = two_fields();
        let s = b.spec().unwrap();
        assert_eq!(s.labels(), vec!["(a)", "(b, c)", "(a, b, c)"]);
        assert_eq!(s.closed_points(), vec![2]);
        let g = b.globalize().unwrap();
        assert_eq!(g, b);
        assert!(!g.derive(&g.relation("1 + 1 = c").unwrap(), g.budget().scaled(10)).unwrap().is_proved());
    }

    #[test]
    fn idempotent_table_spectrum() {
        let b = Blueprint::from_json(
            r#"{"coefficients": {"elements": ["0", "1", "e"], "mul": [["0", "0", "0"], ["0", "1", "e"], ["0", "e", "e"]]}}"#,
        )
        .unwrap();
        let s = b.spec().unwrap();
        assert_eq!(s.labels(), vec!["(0)", "(e)"]);
        assert_eq!(b.globalize().unwrap(), b);
    }
}
