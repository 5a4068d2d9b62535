//! Base extensions to semirings and rings, as finite presentations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::coeff::{ONE, ZERO};
use super::monoid::Elem;
use super::sum::FormalSum;
use super::Blueprint;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PresentationKind {
    /// Over the natural numbers: relations are equalities of polynomials.
    Semiring,
    /// Over the integers: relations are ideal generators.
    Ring,
}

/// A polynomial with integer coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Polynomial {
    pub terms: BTreeMap<Vec<u32>, i64>,
}

impl Polynomial {
    fn add_term(&mut self, exps: Vec<u32>, c: i64) {
        let e = self.terms.entry(exps).or_insert(0);
        *e += c;
        if *e == 0 {
            let key: Vec<Vec<u32>> = self.terms.iter().filter(|(_, &v)| v == 0).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        for (e, &c) in &other.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }

    pub fn eval(&self, field: &FiniteField, values: &[FieldElem]) -> FieldElem {
        let mut acc = 0;
        for (exps, &c) in &self.terms {
            let mut t = field.from_int(c);
            for (i, &k) in exps.iter().enumerate() {
                if k > 0 {
                    t = field.mul(t, field.pow(values[i], k as i64).unwrap());
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    fn render(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest degree first, then lexicographic
        let mut terms: Vec<(&Vec<u32>, &i64)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (i, (exps, &c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { vars[j].clone() } else { format!("{}^{}", vars[j], k) })
                .collect();
            let body = if mono.is_empty() {
                c.abs().to_string()
            } else if c.abs() == 1 {
                mono.join("*")
            } else {
                format!("{}*{}", c.abs(), mono.join("*"))
            };
            match (i, c < 0) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }
}

/// Generators and relations of `B ⊗ N` or `B ⊗ Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub kind: PresentationKind,
    pub variables: Vec<String>,
    /// Pairs `(lhs, rhs)`; ring presentations have `rhs = 0`.
    pub relations: Vec<(Polynomial, Polynomial)>,
}

impl Presentation {
    /// Number of solutions in `F_q` of all relations.
    pub fn count_solutions(&self, q: u32) -> Result<u64> {
        let field = FiniteField::get(q)?;
        let n = self.variables.len();
        let total = (q as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > 20_000_000 {
            return Err(Error::TooLarge(format!("{total} assignments")));
        }
        let diffs: Vec<Polynomial> = self.relations.iter().map(|(l, r)| l.sub(r)).collect();
        let mut vals = vec![0 as FieldElem; n];
        let mut count = 0;
        loop {
            if diffs.iter().all(|p| p.eval(&field, &vals) == 0) {
                count += 1;
            }
            let mut i = 0;
            while i < n {
                vals[i] += 1;
                if (vals[i] as u32) < q {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        Ok(count)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            PresentationKind::Semiring => "N",
            PresentationKind::Ring => "Z",
        };
        write!(f, "{}[{}]", base, self.variables.join(", "))?;
        if self.relations.is_empty() {
            return Ok(());
        }
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(l, r)| match self.kind {
                PresentationKind::Semiring => {
                    format!("{} = {}", l.render(&self.variables), r.render(&self.variables))
                }
                PresentationKind::Ring => l.render(&self.variables),
            })
            .collect();
        write!(f, " / ({})", rels.join(", "))
    }
}

struct VarMap {
    coeff_var: Vec<Option<usize>>,
    gen_var: Vec<usize>,
    inv_var: Vec<Option<usize>>,
    n: usize,
}

impl VarMap {
    fn monomial(&self, e: &Elem) -> Option<Vec<u32>> {
        if e.is_zero() {
            return None;
        }
        let mut exps = vec![0u32; self.n];
        if let Some(v) = self.coeff_var[e.coeff as usize] {
            exps[v] += 1;
        }
        for (i, &k) in e.exps.iter().enumerate() {
            if k > 0 {
                exps[self.gen_var[i]] += k as u32;
            } else if k < 0 {
                exps[self.inv_var[i].expect("negative powers only of invertible generators")] += (-k) as u32;
            }
        }
        Some(exps)
    }

    fn poly(&self, s: &FormalSum) -> Polynomial {
        let mut p = Polynomial::default();
        for t in s.terms() {
            if let Some(m) = self.monomial(t) {
                p.add_term(m, 1);
            }
        }
        p
    }
}

impl Blueprint {
    fn presentation(&self, kind: PresentationKind) -> Presentation {
        let m = self.monoid();
        let c = m.coeffs();
        let mut variables = Vec::new();
        let mut coeff_var = vec![None; c.len()];
        for a in c.all() {
            if a != ZERO && a != ONE {
                coeff_var[a as usize] = Some(variables.len());
                variables.push(format!("[{}]", c.name(a)));
            }
        }
        let mut gen_var = Vec::new();
        for g in m.generators() {
            gen_var.push(variables.len());
            variables.push(g.clone());
        }
        let mut inv_var = vec![None; m.ngens()];
        for (i, g) in m.generators().iter().enumerate() {
            if m.invertible()[i] {
                inv_var[i] = Some(variables.len());
                variables.push(format!("{g}'"));
            }
        }
        let vm = VarMap { coeff_var, gen_var, inv_var, n: variables.len() };
        let mono = |e: &Elem| -> Polynomial {
            let mut p = Polynomial::default();
            if let Some(x) = vm.monomial(e) {
                p.add_term(x, 1);
            }
            p
        };
        let mut rels: Vec<(Polynomial, Polynomial)> = Vec::new();
        for a in c.all() {
            for b in c.all() {
                if a < 2 || b < 2 || b < a {
                    continue;
                }
                let mut t = vec![0u32; vm.n];
                t[vm.coeff_var[a as usize].unwrap()] += 1;
                t[vm.coeff_var[b as usize].unwrap()] += 1;
                let lhs = Polynomial { terms: BTreeMap::from([(t, 1)]) };
                rels.push((lhs, mono(&m.constant(c.mul(a, b)))));
            }
        }
        for (i, inv) in vm.inv_var.iter().enumerate() {
            if let Some(j) = inv {
                let mut t = vec![0u32; vm.n];
                t[vm.gen_var[i]] = 1;
                t[*j] = 1;
                rels.push((Polynomial { terms: BTreeMap::from([(t, 1)]) }, mono(&m.one())));
            }
        }
        for (d, chi) in &m.identifications().generators {
            let pos = Elem { coeff: ONE, exps: d.iter().map(|&x| x.max(0) as i32).collect() };
            let neg = Elem { coeff: *chi, exps: d.iter().map(|&x| (-x).max(0) as i32).collect() };
            rels.push((mono(&pos), mono(&neg)));
        }
        for r in self.all_relations() {
            let (l, r) = (vm.poly(&r.lhs), vm.poly(&r.rhs));
            // nonempty side first, then fewer terms, then larger coefficients
            let key = |p: &Polynomial| (p.terms.is_empty(), p.terms.len(), -p.terms.values().sum::<i64>());
            rels.push(if key(&r) < key(&l) { (r, l) } else { (l, r) });
        }
        if kind == PresentationKind::Ring {
            rels = rels
                .into_iter()
                .map(|(l, r)| (l.sub(&r), Polynomial::default()))
                .filter(|(p, _)| !p.terms.is_empty())
                .collect();
        }
        Presentation { kind, variables, relations: rels }
    }

    /// `B^+ = N[A]/R` as generators and relations.
    pub fn semiring_presentation(&self) -> Presentation {
        self.presentation(PresentationKind::Semiring)
    }

    /// `B^+_Z = Z[A]/I(R)` as generators and ideal generators.
    pub fn ring_presentation(&self) -> Presentation {
        self.presentation(PresentationKind::Ring)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::Coefficients;

    #[test]
    fn sl2_presentations() {
        let b = Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap();
        assert_eq!(b.semiring_presentation().to_string(), "N[T1, T2, T3, T4] / (T1*T4 = T2*T3 + 1)");
        assert_eq!(b.ring_presentation().to_string(), "Z[T1, T2, T3, T4] / (T1*T4 - T2*T3 - 1)");
    }

    #[test]
    fn small_presentations() {
        let f1 = Blueprint::free(Coefficients::f1(), &[], &[]).unwrap();
        assert_eq!(f1.semiring_presentation().to_string(), "N[]");
        let b1 = Blueprint::free(Coefficients::b1(), &[], &[]).unwrap();
        assert_eq!(b1.semiring_presentation().to_string(), "N[] / (2 = 1)");
        let f12 = Blueprint::free(Coefficients::f1_squared(), &[], &[]).unwrap();
        let ring = f12.ring_presentation();
        assert_eq!(ring.to_string(), "Z[[-1]] / ([-1]^2 - 1, [-1] + 1)");
        // a = -1 is the only solution: the presentation is the integers
        for q in [2, 3, 5, 7] {
            assert_eq!(ring.count_solutions(q).unwrap(), 1);
        }
    }
}
