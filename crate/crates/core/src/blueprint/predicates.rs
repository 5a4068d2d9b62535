//! Cancellativity and the Frobenius property.

use serde::Serialize;

use super::monoid::Elem;
use super::points::{for_each_point, PointTarget};
use super::sum::{Budget, FormalSum, Relation};
use super::Blueprint;
use crate::error::Result;
use crate::field::DEFAULT_SAMPLE_ORDERS;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Cancellative {
    Yes,
    /// A derivable `Σa + c ≡ Σb + c` with `Σa ≡ Σb` refuted by a point.
    No { derivable: String, cancelled: String, refuted_in: String },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FrobeniusVerdict {
    Proved,
    /// A generator relation whose p-th power fails at a point.
    Counterexample { relation: String, refuted_in: String },
    Unknown,
}

/// Removes one occurrence of `c` from both sides.
fn cancel(r: &Relation, c: &Elem) -> Relation {
    let drop = |s: &FormalSum| {
        let mut t = s.terms().to_vec();
        if let Some(i) = t.iter().position(|x| x == c) {
            t.remove(i);
        }
        FormalSum::new(t)
    };
    Relation::new(drop(&r.lhs), drop(&r.rhs))
}

fn targets() -> Vec<PointTarget> {
    let mut v = vec![PointTarget::Boolean];
    v.extend(DEFAULT_SAMPLE_ORDERS.iter().filter_map(|&q| PointTarget::field(q).ok()));
    v
}

/// Looks for a point of `b` into a small target at which `r` fails.
fn refute(b: &Blueprint, r: &Relation) -> Result<Option<String>> {
    for t in targets() {
        let mut found = false;
        let res = for_each_point(b, &t, None, |p| {
            found = !p.satisfies(&t, r);
            !found
        });
        if res.is_err() {
            continue;
        }
        if found {
            return Ok(Some(t.label()));
        }
    }
    Ok(None)
}

impl Blueprint {
    pub fn is_cancellative(&self, budget: Budget) -> Result<Cancellative> {
        if self.is_pure_monoid() {
            return Ok(Cancellative::Yes);
        }
        let m = self.monoid();
        let gens = self.all_relations();
        let mut candidates: Vec<Relation> = gens.clone();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i..] {
                candidates.push(Relation::new(a.lhs.plus(&b.lhs), a.rhs.plus(&b.rhs)));
            }
        }
        for r in &candidates {
            let mut shared: Vec<&Elem> = r.lhs.terms().iter().filter(|t| r.rhs.terms().contains(t)).collect();
            shared.dedup();
            for c in shared {
                let small = cancel(r, c);
                if self.derive(&small, budget)?.is_proved() {
                    continue;
                }
                if let Some(label) = refute(self, &small)? {
                    return Ok(Cancellative::No {
                        derivable: r.render(m),
                        cancelled: small.render(m),
                        refuted_in: label,
                    });
                }
            }
        }
        if let Some(carrier) = self.carrier() {
            // every pair of distinct elements must be told apart by some point
            let mut pairs: Vec<(usize, usize)> = (0..carrier.len())
                .flat_map(|i| (i + 1..carrier.len()).map(move |j| (i, j)))
                .collect();
            for t in targets().into_iter().skip(1) {
                if pairs.is_empty() {
                    break;
                }
                let _ = for_each_point(self, &t, None, |p| {
                    let vals: Vec<_> = carrier.iter().map(|e| p.eval(&t, e)).collect();
                    pairs.retain(|&(i, j)| vals[i] == vals[j]);
                    !pairs.is_empty()
                });
            }
            if pairs.is_empty() {
                return Ok(Cancellative::Yes);
            }
        }
        Ok(Cancellative::Unknown)
    }

    /// Tests `Σa^p ≡ Σb^p` for every generator relation `Σa ≡ Σb`.
    pub fn is_frobenius(&self, p: u32, budget: Budget) -> Result<FrobeniusVerdict> {
        let m = self.monoid();
        let mut verdict = FrobeniusVerdict::Proved;
        for r in self.all_relations() {
            let pow = |s: &FormalSum| FormalSum::new(s.terms().iter().map(|t| m.pow(t, p)).collect());
            let rp = Relation::new(pow(&r.lhs), pow(&r.rhs));
            if rp.is_trivial() || self.derive(&rp, budget)?.is_proved() {
                continue;
            }
            if let Some(label) = refute(self, &rp)? {
                return Ok(FrobeniusVerdict::Counterexample { relation: rp.render(m), refuted_in: label });
            }
            verdict = FrobeniusVerdict::Unknown;
        }
        Ok(verdict)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::Coefficients;

    #[test]
    fn cancellativity_of_small_blueprints() {
        let b1 = Blueprint::free(Coefficients::b1(), &[], &[]).unwrap();
        assert!(matches!(b1.is_cancellative(Budget::default()).unwrap(), Cancellative::No { .. }));
        let f1 = Blueprint::free(Coefficients::f1(), &[], &[]).unwrap();
        assert_eq!(f1.is_cancellative(Budget::default()).unwrap(), Cancellative::Yes);
        let f12 = Blueprint::free(Coefficients::f1_squared(), &[], &[]).unwrap();
        assert_eq!(f12.is_cancellative(Budget::default()).unwrap(), Cancellative::Yes);
    }

    #[test]
    fn frobenius_examples() {
        let a2 = Blueprint::free(Coefficients::f1(), &["S", "T"], &[]).unwrap();
        assert_eq!(a2.is_frobenius(3, Budget::default()).unwrap(), FrobeniusVerdict::Proved);
        let b1 = Blueprint::free(Coefficients::b1(), &[], &[]).unwrap();
        assert_eq!(b1.is_frobenius(2, Budget::default()).unwrap(), FrobeniusVerdict::Proved);
        // 2T = 1 squares to 2T^2 = 1, which fails at T = 2 in F3
        let b = Blueprint::parse(Coefficients::f1(), &["T"], &[], &["T + T = 1"]).unwrap();
        assert!(matches!(
            b.is_frobenius(2, Budget::default()).unwrap(),
            FrobeniusVerdict::Counterexample { .. }
        ));
    }
}
