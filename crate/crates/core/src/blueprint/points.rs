//! Morphisms from a blueprint into finite fields and into the Boolean
//! semifield, enumerated by brute force.

use std::sync::Arc;

use super::coeff::{CoeffIdx, CoeffTable};
use super::monoid::Elem;
use super::sum::{FormalSum, Relation};
use super::Blueprint;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};

/// Largest number of assignments a single enumeration may visit.
pub const MAX_ASSIGNMENTS: u64 = 50_000_000;

/// Target of a point: a finite field, or `B1 = {0, 1}` with `1 + 1 = 1`.
#[derive(Clone, Debug)]
pub enum PointTarget {
    Boolean,
    Field(Arc<FiniteField>),
}

impl PointTarget {
    pub fn field(q: u32) -> Result<Self> {
        Ok(PointTarget::Field(FiniteField::get(q)?))
    }

    pub fn order(&self) -> u32 {
        match self {
            PointTarget::Boolean => 2,
            PointTarget::Field(f) => f.order(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PointTarget::Boolean => "B1".into(),
            PointTarget::Field(f) => format!("F{}", f.order()),
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match self {
            PointTarget::Boolean => a & b,
            PointTarget::Field(f) => f.mul(a, b),
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match self {
            PointTarget::Boolean => a | b,
            PointTarget::Field(f) => f.add(a, b),
        }
    }

    pub fn pow(&self, a: FieldElem, e: i64) -> Option<FieldElem> {
        match self {
            PointTarget::Boolean => {
                if a == 0 && e < 0 {
                    None
                } else if e == 0 {
                    Some(1)
                } else {
                    Some(a)
                }
            }
            PointTarget::Field(f) => f.pow(a, e),
        }
    }

    pub fn nonzero(&self) -> Vec<FieldElem> {
        (1..self.order() as FieldElem).collect()
    }

    pub fn elements(&self) -> Vec<FieldElem> {
        (0..self.order() as FieldElem).collect()
    }

    pub fn sum(&self, vals: impl IntoIterator<Item = FieldElem>) -> FieldElem {
        vals.into_iter().fold(0, |acc, v| self.add(acc, v))
    }
}

/// Multiplicative maps `C → target` with `0 ↦ 0`, `1 ↦ 1` that respect the
/// coefficient relations.
pub fn coefficient_maps(
    table: &CoeffTable,
    relations: &[(Vec<CoeffIdx>, Vec<CoeffIdx>)],
    target: &PointTarget,
) -> Vec<Vec<FieldElem>> {
    let n = table.len();
    let mut out = Vec::new();
    let mut vals = vec![0 as FieldElem; n];
    vals[1] = 1;
    fn rec(
        k: usize,
        table: &CoeffTable,
        target: &PointTarget,
        vals: &mut Vec<FieldElem>,
        out: &mut Vec<Vec<FieldElem>>,
    ) {
        let n = table.len();
        let consistent = |vals: &[FieldElem], upto: usize| {
            (0..=upto).all(|a| {
                (0..=upto).all(|b| {
                    let c = table.mul(a as CoeffIdx, b as CoeffIdx) as usize;
                    c > upto || target.mul(vals[a], vals[b]) == vals[c]
                })
            })
        };
        if k == n {
            out.push(vals.clone());
            return;
        }
        for v in target.elements() {
            vals[k] = v;
            if consistent(vals, k) {
                rec(k + 1, table, target, vals, out);
            }
        }
    }
    if n == 2 {
        out.push(vals.clone());
    } else {
        rec(2, table, target, &mut vals, &mut out);
    }
    out.retain(|m| {
        relations.iter().all(|(l, r)| {
            target.sum(l.iter().map(|&c| m[c as usize])) == target.sum(r.iter().map(|&c| m[c as usize]))
        })
    });
    out
}

/// A morphism into a finite target: images of coefficients and generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub coeffs: Vec<FieldElem>,
    pub values: Vec<FieldElem>,
}

impl Point {
    pub fn eval(&self, target: &PointTarget, e: &Elem) -> Option<FieldElem> {
        let mut v = self.coeffs[e.coeff as usize];
        if v == 0 {
            return Some(0);
        }
        for (i, &x) in e.exps.iter().enumerate() {
            if x != 0 {
                v = target.mul(v, target.pow(self.values[i], x as i64)?);
            }
        }
        Some(v)
    }

    pub fn eval_sum(&self, target: &PointTarget, s: &FormalSum) -> Option<FieldElem> {
        let mut acc = 0;
        for t in s.terms() {
            acc = target.add(acc, self.eval(target, t)?);
        }
        Some(acc)
    }

    pub fn satisfies(&self, target: &PointTarget, r: &Relation) -> bool {
        match (self.eval_sum(target, &r.lhs), self.eval_sum(target, &r.rhs)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Calls `visit` on every morphism `B → target` whose generator values lie
/// in `domains` (default: nonzero for invertible generators, anything
/// otherwise). Stops early when `visit` returns `false`.
pub fn for_each_point(
    bp: &Blueprint,
    target: &PointTarget,
    domains: Option<&[Vec<FieldElem>]>,
    mut visit: impl FnMut(&Point) -> bool,
) -> Result<()> {
    let m = bp.monoid();
    let n = m.ngens();
    let default: Vec<Vec<FieldElem>>;
    let domains = match domains {
        Some(d) => d,
        None => {
            default = m
                .invertible()
                .iter()
                .map(|&inv| if inv { target.nonzero() } else { target.elements() })
                .collect();
            &default
        }
    };
    let total: u64 = domains.iter().map(|d| d.len() as u64).product();
    if total > MAX_ASSIGNMENTS {
        return Err(Error::TooLarge(format!("{total} assignments over {}", target.label())));
    }
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(());
    }
    let coeff_maps = coefficient_maps(m.coeffs(), &bp.coefficients().relations, target);
    let rels = bp.relations();
    let idents = &m.identifications().generators;
    for cm in coeff_maps {
        let mut idx = vec![0usize; n];
        let mut p = Point { coeffs: cm, values: domains.iter().map(|d| d[0]).collect() };
        loop {
            let ok_ident = idents.iter().all(|(d, chi)| {
                let mut v: Option<FieldElem> = Some(1);
                for (i, &k) in d.iter().enumerate() {
                    if k != 0 {
                        v = v.and_then(|v| target.pow(p.values[i], k).map(|w| target.mul(v, w)));
                    }
                }
                v == Some(p.coeffs[*chi as usize])
            });
            if ok_ident && rels.iter().all(|r| p.satisfies(target, r)) && !visit(&p) {
                return Ok(());
            }
            // odometer
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                idx[i] += 1;
                if idx[i] < domains[i].len() {
                    p.values[i] = domains[i][idx[i]];
                    break;
                }
                idx[i] = 0;
                p.values[i] = domains[i][0];
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    Ok(())
}

impl Blueprint {
    /// Number of blueprint morphisms into `F_q`.
    pub fn count_points(&self, q: u32) -> Result<u64> {
        let target = PointTarget::field(q)?;
        self.count_points_in(&target)
    }

    pub fn count_points_in(&self, target: &PointTarget) -> Result<u64> {
        let mut count = 0u64;
        for_each_point(self, target, None, |_| {
            count += 1;
            true
        })?;
        Ok(count)
    }

    /// Counts morphisms with the generators in `zero` sent to 0 and all other
    /// non-invertible generators unconstrained.
    pub fn count_points_vanishing(&self, target: &PointTarget, zero: &[usize]) -> Result<u64> {
        let m = self.monoid();
        let domains: Vec<Vec<FieldElem>> = (0..m.ngens())
            .map(|i| {
                if zero.contains(&i) {
                    vec![0]
                } else if m.invertible()[i] {
                    target.nonzero()
                } else {
                    target.elements()
                }
            })
            .collect();
        let mut count = 0u64;
        for_each_point(self, target, Some(&domains), |_| {
            count += 1;
            true
        })?;
        Ok(count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::Coefficients;

    #[test]
    fn sl2_point_counts() {
        let b = Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap();
        for q in [2u64, 3, 4, 5] {
            assert_eq!(b.count_points(q as u32).unwrap(), q * q * q - q);
        }
    }

    #[test]
    fn cyclotomic_coefficients_map_to_roots_of_unity() {
        // F1^n:3 maps into F_q exactly when q = 1 mod 3, in two ways
        let c = Coefficients::f1n(3);
        let t7 = PointTarget::field(7).unwrap();
        assert_eq!(coefficient_maps(&c.table, &c.relations, &t7).len(), 2);
        let t5 = PointTarget::field(5).unwrap();
        assert_eq!(coefficient_maps(&c.table, &c.relations, &t5).len(), 0);
        // characteristic 3: the relation 1 + z + z^2 = 0 forces z = 1
        let t3 = PointTarget::field(3).unwrap();
        assert_eq!(coefficient_maps(&c.table, &c.relations, &t3).len(), 1);
    }

    #[test]
    fn boolean_target() {
        let b1 = Blueprint::free(Coefficients::b1(), &[], &[]).unwrap();
        assert_eq!(b1.count_points_in(&PointTarget::Boolean).unwrap(), 1);
        let f12 = Blueprint::free(Coefficients::f1_squared(), &[], &[]).unwrap();
        assert_eq!(f12.count_points_in(&PointTarget::Boolean).unwrap(), 0);
    }
}
