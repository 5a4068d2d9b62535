//! Blueprints: a commutative monoid with zero together with a pre-addition
//! generated by finitely many relations.

mod coeff;
mod derive;
mod ideal;
mod json;
mod monoid;
mod morphism;
mod ops;
mod points;
mod predicates;
mod presentation;
mod sum;

use std::sync::Arc;

pub use coeff::{CoeffIdx, CoeffTable, ONE, ZERO};
pub use derive::{Search, Verdict};
pub(crate) use derive::Engine;
pub use ideal::{Ideal, Saturation};
pub use json::BlueprintJson;
pub use monoid::{Elem, Identifications, Monoid};
pub use morphism::{Morphism, MorphismVerdict};
pub use ops::Localized;
pub(crate) use ops::fraction_table;
pub use points::{coefficient_maps, for_each_point, Point, PointTarget};
pub use predicates::{Cancellative, FrobeniusVerdict};
pub use presentation::{Polynomial, Presentation, PresentationKind};
pub use sum::{Budget, FormalSum, Relation};

use crate::error::{Error, Result};

/// How the coefficient table was specified; kept for serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffSpec {
    F1,
    F1Squared,
    F1n(usize),
    B1,
    Table,
}

/// A finite coefficient blueprint: table plus relation generators among
/// coefficient elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficients {
    pub spec: CoeffSpec,
    pub table: Arc<CoeffTable>,
    pub relations: Vec<(Vec<CoeffIdx>, Vec<CoeffIdx>)>,
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

impl Coefficients {
    pub fn f1() -> Self {
        Coefficients { spec: CoeffSpec::F1, table: Arc::new(CoeffTable::f1()), relations: vec![] }
    }

    /// `{0, 1, -1}` with `1 + (-1) ≡ 0`.
    pub fn f1_squared() -> Self {
        let mut c = Self::f1n(2);
        c.spec = CoeffSpec::F1Squared;
        c
    }

    /// `{0} ∪ μ_n`; for each proper divisor `d` of `n` the sum over the
    /// subgroup generated by `z^d` is related to zero.
    pub fn f1n(n: usize) -> Self {
        assert!(n >= 1);
        let table = CoeffTable::cyclic(n);
        let mut relations = Vec::new();
        for d in divisors(n) {
            if d == n {
                continue;
            }
            let mut sum: Vec<CoeffIdx> =
                (0..n / d).map(|i| CoeffTable::cyclic_power(n, (d * i) as i64)).collect();
            sum.sort();
            relations.push((sum, vec![]));
        }
        Coefficients { spec: CoeffSpec::F1n(n), table: Arc::new(table), relations }
    }

    /// The Boolean blueprint `{0, 1}` with `1 + 1 ≡ 1`.
    pub fn b1() -> Self {
        Coefficients {
            spec: CoeffSpec::B1,
            table: Arc::new(CoeffTable::f1()),
            relations: vec![(vec![ONE, ONE], vec![ONE])],
        }
    }

    pub fn table(table: CoeffTable, relations: Vec<(Vec<CoeffIdx>, Vec<CoeffIdx>)>) -> Self {
        Coefficients { spec: CoeffSpec::Table, table: Arc::new(table), relations }
    }

    pub fn spec_string(&self) -> Option<String> {
        match self.spec {
            CoeffSpec::F1 => Some("F1".into()),
            CoeffSpec::F1Squared => Some("F1^2".into()),
            CoeffSpec::F1n(n) => Some(format!("F1^n:{n}")),
            CoeffSpec::B1 => Some("B1".into()),
            CoeffSpec::Table => None,
        }
    }

    pub fn parse_spec(s: &str) -> Result<Self> {
        match s {
            "F1" => Ok(Self::f1()),
            "F1^2" => Ok(Self::f1_squared()),
            "B1" => Ok(Self::b1()),
            _ => {
                let n = s
                    .strip_prefix("F1^n:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| (1..=64).contains(&n))
                    .ok_or_else(|| Error::Parse(format!("unknown coefficient blueprint {s:?}")))?;
                Ok(Self::f1n(n))
            }
        }
    }
}

/// A finitely presented blueprint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blueprint {
    coefficients: Coefficients,
    monoid: Arc<Monoid>,
    relations: Vec<Relation>,
    budget: Budget,
}

/// Canonical, deduplicated relation list without trivial entries.
pub(crate) fn canonical_relations(rels: impl IntoIterator<Item = Relation>) -> Vec<Relation> {
    let mut v: Vec<Relation> =
        rels.into_iter().filter(|r| !r.is_trivial()).map(Relation::canonical).collect();
    v.sort();
    v.dedup();
    v
}

/// Steps granted to the properness search from each seed element.
const GUARD_STEPS_PER_SEED: usize = 20_000;

impl Blueprint {
    /// Validates the data and runs the properness guard.
    pub fn new(coefficients: Coefficients, monoid: Monoid, relations: Vec<Relation>) -> Result<Self> {
        let b = Self::new_unchecked(coefficients, monoid, relations)?;
        b.properness_guard()?;
        Ok(b)
    }

    /// Validates the data without the properness guard; used for
    /// constructions that preserve properness by design.
    pub(crate) fn new_unchecked(
        coefficients: Coefficients,
        monoid: Monoid,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(&coefficients.table, monoid.coeffs_arc()) && *coefficients.table != *monoid.coeffs() {
            return Err(Error::MalformedBackend("monoid and coefficient tables differ".into()));
        }
        let monoid = Arc::new(monoid);
        let mut rels = Vec::new();
        for r in relations {
            let norm = |s: &FormalSum| -> Result<FormalSum> {
                Ok(FormalSum::new(
                    s.terms().iter().map(|t| monoid.check(t.clone())).collect::<Result<Vec<_>>>()?,
                ))
            };
            rels.push(Relation::new(norm(&r.lhs)?, norm(&r.rhs)?));
        }
        Ok(Blueprint { coefficients, monoid, relations: canonical_relations(rels), budget: Budget::default() })
    }

    /// Convenience constructor from strings, e.g. generators `["T1","T2"]`
    /// and relations `["T1*T2 = 1 + T1"]`.
    pub fn parse(
        coefficients: Coefficients,
        generators: &[&str],
        inverted: &[&str],
        relations: &[&str],
    ) -> Result<Self> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        for g in inverted {
            if !generators.contains(g) {
                return Err(Error::MalformedBackend(format!("inverted generator {g} is unknown")));
            }
        }
        let inv = generators.iter().map(|g| inverted.contains(g)).collect();
        let monoid = Monoid::new(coefficients.table.clone(), gens, inv, vec![])?;
        let rels = relations.iter().map(|r| Relation::parse(&monoid, r)).collect::<Result<Vec<_>>>()?;
        Self::new(coefficients, monoid, rels)
    }

    /// The free monoid blueprint `C[T_1..T_n]` with no relations.
    pub fn free(coefficients: Coefficients, generators: &[&str], inverted: &[&str]) -> Result<Self> {
        Self::parse(coefficients, generators, inverted, &[])
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn monoid(&self) -> &Monoid {
        &self.monoid
    }

    /// Relation generators beyond those of the coefficients.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn coefficient_relations(&self) -> Vec<Relation> {
        let m = &self.monoid;
        let lift = |v: &Vec<CoeffIdx>| FormalSum::new(v.iter().map(|&c| m.constant(c)).collect());
        self.coefficients.relations.iter().map(|(l, r)| Relation::new(lift(l), lift(r))).collect()
    }

    /// All relation generators of the pre-addition.
    pub fn all_relations(&self) -> Vec<Relation> {
        canonical_relations(self.coefficient_relations().into_iter().chain(self.relations.iter().cloned()))
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn is_finite_table(&self) -> bool {
        self.monoid.is_finite_table()
    }

    /// No relation generators at all (coefficients included).
    pub fn is_pure_monoid(&self) -> bool {
        self.relations.is_empty() && self.coefficients.relations.is_empty()
    }

    /// Carrier of a finite-table blueprint, sorted.
    pub fn carrier(&self) -> Option<Vec<Elem>> {
        self.monoid.finite_elements()
    }

    pub fn elem(&self, s: &str) -> Result<Elem> {
        self.monoid.parse_elem(s)
    }

    pub fn sum(&self, s: &str) -> Result<FormalSum> {
        FormalSum::parse(&self.monoid, s)
    }

    pub fn relation(&self, s: &str) -> Result<Relation> {
        Relation::parse(&self.monoid, s)
    }

    pub fn fmt_elem(&self, e: &Elem) -> String {
        self.monoid.fmt_elem(e)
    }

    pub fn gen(&self, name: &str) -> Result<Elem> {
        let i = self
            .monoid
            .gen_index(name)
            .ok_or_else(|| Error::ForeignElement(format!("unknown generator {name}")))?;
        Ok(self.monoid.gen(i))
    }

    pub(crate) fn engine(&self, budget: Budget) -> Engine<'_> {
        Engine::new(&self.monoid, &self.all_relations(), budget)
    }

    fn check_sum(&self, s: &FormalSum) -> Result<FormalSum> {
        Ok(FormalSum::new(
            s.terms().iter().map(|t| self.monoid.check(t.clone())).collect::<Result<Vec<_>>>()?,
        ))
    }

    /// Semi-decides membership of `r` in the generated pre-addition.
    pub fn derive(&self, r: &Relation, budget: Budget) -> Result<Verdict> {
        Ok(self.derive_search(r, budget)?.verdict)
    }

    pub fn derive_search(&self, r: &Relation, budget: Budget) -> Result<Search> {
        let lhs = self.check_sum(&r.lhs)?;
        let rhs = self.check_sum(&r.rhs)?;
        let mut engine = self.engine(budget);
        let targets: Vec<Elem> = lhs.terms().iter().chain(rhs.terms()).cloned().collect();
        engine.focus(&targets);
        Ok(engine.search(&lhs, &rhs))
    }

    fn guard_seeds(&self) -> Vec<Elem> {
        let mut seeds: Vec<Elem> = self.monoid.coeffs().nonzero().map(|c| self.monoid.constant(c)).collect();
        for r in self.all_relations() {
            seeds.extend(r.lhs.terms().iter().cloned());
            seeds.extend(r.rhs.terms().iter().cloned());
        }
        seeds.sort();
        seeds.dedup();
        seeds
    }

    /// Searches for a derivable `a ≡ b` between distinct single elements
    /// (or `a ≡ 0` for nonzero `a`).
    pub fn properness_guard(&self) -> Result<()> {
        if self.all_relations().is_empty() {
            return Ok(());
        }
        let budget = Budget {
            max_steps: self.budget.max_steps.min(GUARD_STEPS_PER_SEED),
            ..self.budget
        };
        for s in self.guard_seeds() {
            let mut engine = self.engine(budget);
            engine.focus(std::slice::from_ref(&s));
            let start = FormalSum::single(s.clone());
            if let Some(bad) = engine.reach(&start, |st| st.len() <= 1 && st.first() != Some(&s)) {
                let other = bad.first().map(|e| self.fmt_elem(e)).unwrap_or_else(|| "0".into());
                return Err(Error::ImproperRelations(format!(
                    "{} = {} is derivable",
                    self.fmt_elem(&s),
                    other
                )));
            }
        }
        Ok(())
    }

    pub fn render_relations(&self) -> Vec<String> {
        self.all_relations().iter().map(|r| r.render(&self.monoid)).collect()
    }
}
