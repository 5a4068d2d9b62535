//! Bounded derivation in the congruence generated by a relation set.
//!
//! A step rewrites `x + m·l` into `x + m·r` where `l ≡ r` is a generator in
//! either orientation and `m` a monoid multiplier. The search runs breadth
//! first from both sides and meets in the middle.

use std::collections::{BTreeSet, HashSet};

use super::monoid::{Elem, Monoid};
use super::sum::{Budget, FormalSum, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Proved,
    Unknown,
}

impl Verdict {
    pub fn is_proved(self) -> bool {
        self == Verdict::Proved
    }
}

#[derive(Clone, Debug)]
struct Rule {
    from: Vec<Elem>,
    to: Vec<Elem>,
}

/// Outcome of a search, with the number of rewrites generated and whether
/// the bounded state space was exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Search {
    pub verdict: Verdict,
    pub steps: usize,
    pub exhausted: bool,
}

pub(crate) struct Engine<'a> {
    monoid: &'a Monoid,
    rules: Vec<Rule>,
    budget: Budget,
    inserts: Vec<Elem>,
}

fn sub_multiset(small: &[Elem], big: &[Elem]) -> Option<Vec<Elem>> {
    // both sorted; returns big - small
    let mut out = Vec::with_capacity(big.len());
    let mut i = 0;
    for b in big {
        if i < small.len() && small[i] == *b {
            i += 1;
        } else {
            out.push(b.clone());
        }
    }
    (i == small.len()).then_some(out)
}

fn merge(a: Vec<Elem>, b: &[Elem]) -> Vec<Elem> {
    let mut v = a;
    v.extend(b.iter().cloned());
    v.sort();
    v
}

impl<'a> Engine<'a> {
    pub fn new(monoid: &'a Monoid, relations: &[Relation], budget: Budget) -> Self {
        let mut seen = HashSet::new();
        let mut rules = Vec::new();
        for r in relations {
            for (from, to) in [(&r.lhs, &r.rhs), (&r.rhs, &r.lhs)] {
                if from == to {
                    continue;
                }
                if seen.insert((from.clone(), to.clone())) {
                    rules.push(Rule { from: from.terms().to_vec(), to: to.terms().to_vec() });
                }
            }
        }
        let mut e = Engine { monoid, rules, budget, inserts: vec![] };
        e.inserts = e.base_inserts();
        e
    }

    fn base_inserts(&self) -> Vec<Elem> {
        let m = self.monoid;
        if let Some(all) = m.finite_elements() {
            return all.into_iter().filter(|e| !e.is_zero()).collect();
        }
        m.coeffs().units().into_iter().map(|c| m.constant(c)).collect()
    }

    /// Adds insertion multipliers that make inserted terms line up with the
    /// given target terms.
    pub fn focus(&mut self, targets: &[Elem]) {
        if self.monoid.is_finite_table() {
            return;
        }
        let mut set: BTreeSet<Elem> = self.inserts.iter().cloned().collect();
        for rule in &self.rules {
            for u in &rule.to {
                for t in targets {
                    for x in self.monoid.divide(t, u) {
                        if x.degree() <= self.budget.max_degree {
                            set.insert(x);
                        }
                    }
                }
            }
        }
        self.inserts = set.into_iter().collect();
    }

    pub fn neighbors(&self, state: &[Elem], out: &mut Vec<Vec<Elem>>) {
        let m = self.monoid;
        let max_terms = self.budget.max_terms;
        let mut distinct: Vec<&Elem> = state.iter().collect();
        distinct.dedup();
        for rule in &self.rules {
            let mut mults: BTreeSet<Elem> = BTreeSet::new();
            if rule.from.is_empty() {
                mults.extend(self.inserts.iter().cloned());
            } else {
                for f in &rule.from {
                    for t in &distinct {
                        for x in m.divide(t, f) {
                            if x.degree() <= self.budget.max_degree {
                                mults.insert(x);
                            }
                        }
                    }
                }
                if m.is_finite_table() {
                    // multipliers annihilating the whole source act as insertions
                    for x in &self.inserts {
                        if rule.from.iter().all(|f| m.mul(x, f).is_zero()) {
                            mults.insert(x.clone());
                        }
                    }
                }
            }
            for x in mults {
                let from = FormalSum::new(rule.from.iter().map(|f| m.mul(&x, f)).collect());
                let to = FormalSum::new(rule.to.iter().map(|f| m.mul(&x, f)).collect());
                if from == to {
                    continue;
                }
                let Some(rest) = sub_multiset(from.terms(), state) else { continue };
                if rest.len() + to.len() > max_terms {
                    continue;
                }
                out.push(merge(rest, to.terms()));
            }
        }
    }

    pub fn search(&self, lhs: &FormalSum, rhs: &FormalSum) -> Search {
        if lhs == rhs {
            return Search { verdict: Verdict::Proved, steps: 0, exhausted: false };
        }
        let mut seen = [HashSet::new(), HashSet::new()];
        let mut frontier = [vec![lhs.terms().to_vec()], vec![rhs.terms().to_vec()]];
        seen[0].insert(lhs.terms().to_vec());
        seen[1].insert(rhs.terms().to_vec());
        let mut steps = 0;
        let mut buf = Vec::new();
        loop {
            let side = if frontier[0].is_empty() {
                1
            } else if frontier[1].is_empty() {
                0
            } else if frontier[0].len() <= frontier[1].len() {
                0
            } else {
                1
            };
            if frontier[side].is_empty() {
                return Search { verdict: Verdict::Unknown, steps, exhausted: true };
            }
            let current = std::mem::take(&mut frontier[side]);
            let mut next = Vec::new();
            for state in &current {
                buf.clear();
                self.neighbors(state, &mut buf);
                for n in buf.drain(..) {
                    steps += 1;
                    if seen[1 - side].contains(&n) {
                        return Search { verdict: Verdict::Proved, steps, exhausted: false };
                    }
                    if steps >= self.budget.max_steps {
                        return Search { verdict: Verdict::Unknown, steps, exhausted: false };
                    }
                    if seen[side].insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
            frontier[side] = next;
        }
    }

    /// Explores everything reachable from `start` and reports the first
    /// reachable state accepted by `hit`.
    pub fn reach(&self, start: &FormalSum, mut hit: impl FnMut(&[Elem]) -> bool) -> Option<Vec<Elem>> {
        let mut seen = HashSet::new();
        seen.insert(start.terms().to_vec());
        let mut frontier = vec![start.terms().to_vec()];
        let mut steps = 0;
        let mut buf = Vec::new();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for state in &frontier {
                buf.clear();
                self.neighbors(state, &mut buf);
                for n in buf.drain(..) {
                    steps += 1;
                    if hit(&n) {
                        return Some(n);
                    }
                    if steps >= self.budget.max_steps {
                        return None;
                    }
                    if seen.insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        None
    }
}
