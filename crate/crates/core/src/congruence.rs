//! Congruences on finite blueprints and the congruence spectrum.
//!
//! A congruence is a partition of the carrier that is multiplicative and
//! closed under chains `a ≡ Σc ∼ Σd ≡ … ≡ b` mixing the pre-addition with
//! termwise replacement. The second condition is checked by saturating an
//! equivalence on formal sums whose multiplicities are capped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::blueprint::{CoeffIdx, CoeffSpec, CoeffTable, Ideal, Monoid, Morphism, MorphismVerdict, Saturation};
use crate::error::{Error, Result};
use crate::spectra::SpecSpace;
use crate::{Blueprint, Budget, Coefficients, Elem, FormalSum, Relation};

pub const MAX_CARRIER: usize = 7;
/// Largest multiplicity of a single element in a saturated formal sum.
pub const MULTIPLICITY_CAP: usize = 6;

/// A partition of `{0, …, n-1}` as a restricted growth string: element `i`
/// lies in block `blocks[i]`, and blocks are numbered by first appearance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn from_blocks(blocks: &[usize]) -> Self {
        let mut relabel = BTreeMap::new();
        Partition(
            blocks
                .iter()
                .map(|b| {
                    let next = relabel.len();
                    *relabel.entry(*b).or_insert(next)
                })
                .collect(),
        )
    }

    /// Builds a partition from explicit classes; unlisted elements stay
    /// singletons.
    pub fn from_classes(n: usize, classes: &[Vec<usize>]) -> Result<Self> {
        let mut blocks: Vec<usize> = (0..n).map(|i| n + i).collect();
        for (k, class) in classes.iter().enumerate() {
            for &i in class {
                if i >= n {
                    return Err(Error::InvalidInput(format!("element {i} outside a carrier of size {n}")));
                }
                if blocks[i] < n {
                    return Err(Error::InvalidInput(format!("element {i} listed twice")));
                }
                blocks[i] = k;
            }
        }
        Ok(Self::from_blocks(&blocks))
    }

    pub fn identity(n: usize) -> Self {
        Partition((0..n).collect())
    }

    pub fn total(n: usize) -> Self {
        Partition(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn block(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.0
    }

    pub fn num_blocks(&self) -> usize {
        self.0.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.0[a] == self.0[b]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.0.iter().enumerate() {
            out[b].push(i);
        }
        out
    }

    /// Every set partition of an `n`-element set, in lexicographic order of
    /// restricted growth strings.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Partition>) {
            if prefix.len() == n {
                out.push(Partition(prefix.clone()));
                return;
            }
            for b in 0..=max + 1 {
                prefix.push(b);
                go(prefix, n, max.max(b), out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push(Partition(vec![]));
            return out;
        }
        go(&mut vec![0], n, 0, &mut out);
        out
    }

    /// Block notation such as `{0}{1,-1}` using the given element names.
    pub fn render(&self, names: &[String]) -> String {
        self.classes()
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(",")))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CongruenceVerdict {
    Proved,
    /// A pair of elements in different classes forced together.
    Refuted(String),
    Unknown,
}

impl CongruenceVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, CongruenceVerdict::Proved)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    pub partition: Partition,
    pub verdict: CongruenceVerdict,
    pub prime: Option<bool>,
}

/// The carrier of a finite-table blueprint, indexed by coefficient index.
struct Carrier<'a> {
    table: &'a CoeffTable,
    monoid: &'a Monoid,
    n: usize,
}

impl<'a> Carrier<'a> {
    fn of(b: &'a Blueprint) -> Result<Self> {
        if !b.is_finite_table() {
            return Err(Error::Unsupported("congruences need a finite-table blueprint".into()));
        }
        let m = b.monoid();
        let n = m.coeffs().len();
        if n > MAX_CARRIER {
            return Err(Error::TooLarge(format!("carrier of size {n} exceeds {MAX_CARRIER}")));
        }
        Ok(Carrier { table: m.coeffs(), monoid: m, n })
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table.mul(a as CoeffIdx, b as CoeffIdx) as usize
    }
}

fn check_len(c: &Carrier, p: &Partition) -> Result<()> {
    if p.len() != c.n {
        return Err(Error::InvalidInput(format!("partition of {} elements for a carrier of {}", p.len(), c.n)));
    }
    Ok(())
}

/// First violation of `a∼b ⇒ ac∼bc`, if any.
fn multiplicative_violation(c: &Carrier, p: &Partition) -> Option<String> {
    let names = c.table.names();
    for a in 0..c.n {
        for b in a + 1..c.n {
            if !p.related(a, b) {
                continue;
            }
            for x in 0..c.n {
                let (ax, bx) = (c.mul(a, x), c.mul(b, x));
                if !p.related(ax, bx) {
                    return Some(format!(
                        "{}∼{} but {}·{}={} ≁ {}",
                        names[a], names[b], names[a], names[x], names[ax], names[bx]
                    ));
                }
            }
        }
    }
    None
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] as usize != x {
            let up = self.0[self.0[x] as usize];
            self.0[x] = up;
            x = up as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb) as u32;
        }
    }
}

/// Relation generators scaled by every nonzero carrier element, as
/// multiplicity vectors over the nonzero elements `1..n`.
fn scaled_rules(b: &Blueprint, c: &Carrier) -> Vec<(Vec<usize>, Vec<usize>)> {
    let counts = |s: &FormalSum, x: usize| {
        let mut v = vec![0usize; c.n - 1];
        for t in s.terms() {
            let y = c.mul(t.coeff as usize, x);
            if y != 0 {
                v[y - 1] += 1;
            }
        }
        v
    };
    let mut rules = BTreeSet::new();
    for r in b.all_relations() {
        for x in 1..c.n {
            let (l, rr) = (counts(&r.lhs, x), counts(&r.rhs, x));
            if l != rr {
                rules.insert((l, rr));
            }
        }
    }
    rules.into_iter().collect()
}

/// Checks both congruence axioms. Refutations are always sound; `Proved`
/// means no chain through sums with multiplicities up to the cap joins two
/// classes, and `Unknown` that the budget forced a smaller cap.
pub fn is_congruence(b: &Blueprint, p: &Partition, budget: Budget) -> Result<CongruenceVerdict> {
    let c = Carrier::of(b)?;
    check_len(&c, p)?;
    if let Some(w) = multiplicative_violation(&c, p) {
        return Ok(CongruenceVerdict::Refuted(w));
    }
    let m = c.n - 1;
    let mut cap = MULTIPLICITY_CAP;
    while cap > 1 && (cap + 1).pow(m as u32) > budget.max_steps.max(1) {
        cap -= 1;
    }
    let truncated = cap < MULTIPLICITY_CAP;
    let base = cap + 1;
    let states = base.pow(m as u32);
    let rules = scaled_rules(b, &c);
    let index = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * base + d);
    let mut uf = UnionFind((0..states as u32).collect());
    let mut digits = vec![0usize; m];
    for s in 0..states {
        let mut rest = s;
        for d in digits.iter_mut() {
            *d = rest % base;
            rest /= base;
        }
        for (l, r) in &rules {
            if l.iter().zip(&digits).all(|(x, y)| x <= y) {
                let t: Vec<usize> = (0..m).map(|i| digits[i] - l[i] + r[i]).collect();
                if t.iter().all(|&x| x <= cap) {
                    uf.union(s, index(&t));
                }
            }
        }
        // termwise replacement of one term by a related element
        for a in 1..c.n {
            if digits[a - 1] == 0 {
                continue;
            }
            for x in 0..c.n {
                if x == a || !p.related(a, x) {
                    continue;
                }
                let mut t = digits.clone();
                t[a - 1] -= 1;
                if x != 0 {
                    t[x - 1] += 1;
                    if t[x - 1] > cap {
                        continue;
                    }
                }
                uf.union(s, index(&t));
            }
        }
    }
    let single = |a: usize| if a == 0 { 0 } else { base.pow((a - 1) as u32) };
    let names = c.table.names();
    for a in 0..c.n {
        for x in a + 1..c.n {
            if !p.related(a, x) && uf.find(single(a)) == uf.find(single(x)) {
                return Ok(CongruenceVerdict::Refuted(format!(
                    "a chain of relations joins {} and {}",
                    names[a], names[x]
                )));
            }
        }
    }
    Ok(if truncated { CongruenceVerdict::Unknown } else { CongruenceVerdict::Proved })
}

/// Proper, and `ab∼ac` implies `b∼c` or `a∼0`.
pub fn is_prime_congruence(b: &Blueprint, p: &Partition, budget: Budget) -> Result<bool> {
    let c = Carrier::of(b)?;
    check_len(&c, p)?;
    match is_congruence(b, p, budget)? {
        CongruenceVerdict::Proved => {}
        CongruenceVerdict::Refuted(w) => return Err(Error::NotACongruence(w)),
        CongruenceVerdict::Unknown => {
            return Err(Error::BudgetExhausted("congruence axioms not certified".into()))
        }
    }
    Ok(integral(&c, p))
}

fn integral(c: &Carrier, p: &Partition) -> bool {
    if p.num_blocks() < 2 {
        return false;
    }
    for a in 1..c.n {
        if p.related(a, 0) {
            continue;
        }
        for x in 0..c.n {
            for y in x + 1..c.n {
                if p.related(c.mul(a, x), c.mul(a, y)) && !p.related(x, y) {
                    return false;
                }
            }
        }
    }
    true
}

/// Prime congruences with the basis opens `U_{f,g} = {∼ : f ≁ g}`.
#[derive(Clone, Debug)]
pub struct CongruenceSpectrum {
    pub blueprint: Blueprint,
    pub points: Vec<Partition>,
    /// False when some candidate could only be classified `Unknown`.
    pub complete: bool,
    pub undecided: Vec<Partition>,
}

pub fn cspec(b: &Blueprint, budget: Budget) -> Result<CongruenceSpectrum> {
    let c = Carrier::of(b)?;
    let verdicts: Vec<(Partition, CongruenceVerdict, bool)> = Partition::all(c.n)
        .into_par_iter()
        .filter(|p| p.num_blocks() > 1)
        .map(|p| {
            let v = is_congruence(b, &p, budget)?;
            let prime = integral(&Carrier::of(b)?, &p);
            Ok((p, v, prime))
        })
        .collect::<Result<_>>()?;
    let mut points = Vec::new();
    let mut undecided = Vec::new();
    for (p, v, prime) in verdicts {
        if !prime {
            continue;
        }
        match v {
            CongruenceVerdict::Proved => points.push(p),
            CongruenceVerdict::Unknown => undecided.push(p),
            CongruenceVerdict::Refuted(_) => {}
        }
    }
    Ok(CongruenceSpectrum { blueprint: b.clone(), complete: undecided.is_empty(), points, undecided })
}

impl CongruenceSpectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.blueprint.monoid().coeffs().names().to_vec()
    }

    pub fn labels(&self) -> Vec<String> {
        let names = self.names();
        self.points.iter().map(|p| p.render(&names)).collect()
    }

    /// Indices of the points where `f ≁ g`.
    pub fn basic_open(&self, f: usize, g: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| !self.points[i].related(f, g)).collect()
    }

    /// All distinct nonempty basic opens, keyed by the first pair producing
    /// each.
    pub fn basis(&self) -> BTreeMap<Vec<usize>, (usize, usize)> {
        let n = self.names().len();
        let mut out = BTreeMap::new();
        for f in 0..n {
            for g in f + 1..n {
                let u = self.basic_open(f, g);
                if !u.is_empty() {
                    out.entry(u).or_insert((f, g));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = self.names();
        let basis: Vec<serde_json::Value> = self
            .basis()
            .into_iter()
            .map(|(u, (f, g))| {
                serde_json::json!({"pair": [names[f], names[g]], "points": u})
            })
            .collect();
        serde_json::json!({
            "points": self.labels(),
            "complete": self.complete,
            "undecided": self.undecided.iter().map(|p| p.render(&names)).collect::<Vec<_>>(),
            "basis": basis,
        })
    }
}

impl fmt::Display for CongruenceSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        for (i, label) in self.labels().iter().enumerate() {
            writeln!(f, "{i}: {label}")?;
        }
        for (u, (a, b)) in self.basis() {
            let pts: Vec<String> = u.iter().map(|i| i.to_string()).collect();
            writeln!(f, "U({},{}) = {{{}}}", names[a], names[b], pts.join(","))?;
        }
        if !self.complete {
            writeln!(f, "incomplete: {} candidates undecided", self.undecided.len())?;
        }
        Ok(())
    }
}

/// `I_∼ = {a : a ∼ 0}`.
pub fn absorbing_ideal(b: &Blueprint, p: &Partition) -> Result<Ideal> {
    let c = Carrier::of(b)?;
    check_len(&c, p)?;
    let members: Vec<Elem> = (1..c.n).filter(|&a| p.related(a, 0)).map(|a| c.monoid.constant(a as CoeffIdx)).collect();
    Ok(Ideal { generators: members.clone(), members, saturation: Saturation::Exact })
}

/// For each point of the congruence spectrum, the index of its absorbing
/// ideal in the prime spectrum.
pub fn cspec_to_spec(cs: &CongruenceSpectrum, spec: &SpecSpace) -> Result<Vec<usize>> {
    cs.points
        .iter()
        .map(|p| {
            let ideal = absorbing_ideal(&cs.blueprint, p)?;
            spec.points
                .iter()
                .position(|q| q.ideal.members == ideal.members)
                .ok_or_else(|| Error::NotAnIdeal(format!("absorbing ideal {:?} is not a prime", ideal.members)))
        })
        .collect()
}

/// `B/∼`: classes multiply through representatives and relations are
/// pushed forward. The class of an element is named after its least
/// member.
pub fn quotient(b: &Blueprint, p: &Partition) -> Result<Blueprint> {
    let c = Carrier::of(b)?;
    check_len(&c, p)?;
    if p.related(0, 1) {
        return Err(Error::InvalidInput("the total congruence has the zero blueprint as quotient".into()));
    }
    let classes = p.classes();
    let names: Vec<String> = classes.iter().map(|cl| c.table.names()[cl[0]].clone()).collect();
    let table: Vec<Vec<CoeffIdx>> = classes
        .iter()
        .map(|x| classes.iter().map(|y| p.block(c.mul(x[0], y[0])) as CoeffIdx).collect())
        .collect();
    let table = CoeffTable::new(names, table)?;
    let push = |s: &FormalSum| -> Vec<CoeffIdx> {
        let mut v: Vec<CoeffIdx> =
            s.terms().iter().map(|t| p.block(t.coeff as usize) as CoeffIdx).filter(|&x| x != 0).collect();
        v.sort();
        v
    };
    let mut rels = BTreeSet::new();
    for r in b.all_relations() {
        let (l, rr) = (push(&r.lhs), push(&r.rhs));
        if l != rr {
            rels.insert(if l <= rr { (l, rr) } else { (rr, l) });
        }
    }
    let table = Arc::new(table);
    let coefficients = Coefficients { spec: CoeffSpec::Table, table: table.clone(), relations: rels.into_iter().collect() };
    Blueprint::new(coefficients, Monoid::finite(table), vec![])
}

/// The residue field of a prime congruence. The quotient by a prime
/// congruence is a finite integral blueprint, so its nonzero classes
/// already form a group and localizing at the complement of the absorbing
/// ideal changes nothing.
pub fn residue_field(b: &Blueprint, p: &Partition, budget: Budget) -> Result<Blueprint> {
    if !is_prime_congruence(b, p, budget)? {
        return Err(Error::HypothesisViolated("congruence is not prime".into()));
    }
    quotient(b, p)
}

/// The canonical projection `B → B/∼`.
pub fn projection(b: &Blueprint, p: &Partition) -> Result<Morphism> {
    let target = quotient(b, p)?;
    let tm = target.monoid();
    let coeff_images = (0..p.len()).map(|a| tm.constant(p.block(a) as CoeffIdx)).collect();
    Ok(Morphism { source: b.clone(), target, coeff_images, gen_images: vec![] })
}

/// All morphisms between finite-table blueprints, as coefficient maps.
pub fn finite_morphisms(source: &Blueprint, target: &Blueprint, budget: Budget) -> Result<Vec<Vec<CoeffIdx>>> {
    let s = Carrier::of(source)?;
    let t = Carrier::of(target)?;
    let mut out = Vec::new();
    let mut map = vec![0usize; s.n];
    let total = t.n.pow(s.n.saturating_sub(2) as u32);
    for code in 0..total {
        let mut rest = code;
        map[0] = 0;
        map[1] = 1;
        for slot in map.iter_mut().skip(2) {
            *slot = rest % t.n;
            rest /= t.n;
        }
        let multiplicative =
            (0..s.n).all(|a| (0..s.n).all(|x| map[s.mul(a, x)] == t.mul(map[a], map[x])));
        if !multiplicative {
            continue;
        }
        let f = Morphism {
            source: source.clone(),
            target: target.clone(),
            coeff_images: map.iter().map(|&y| t.monoid.constant(y as CoeffIdx)).collect(),
            gen_images: vec![],
        };
        if f.is_morphism(budget)? == MorphismVerdict::Proved {
            out.push(map.iter().map(|&y| y as CoeffIdx).collect());
        }
    }
    Ok(out)
}

/// `a ∼ b` iff `f(a) = f(b)`.
pub fn kernel(map: &[CoeffIdx]) -> Partition {
    Partition::from_blocks(&map.iter().map(|&y| y as usize).collect::<Vec<_>>())
}

/// Whether `r` holds in `B/∼` within the budget; used to read off the
/// quotient's pre-addition.
pub fn holds_in_quotient(b: &Blueprint, p: &Partition, r: &Relation, budget: Budget) -> Result<bool> {
    let f = projection(b, p)?;
    let (Some(l), Some(rr)) = (f.image_sum(&r.lhs), f.image_sum(&r.rhs)) else {
        return Ok(false);
    };
    Ok(f.target.derive(&Relation::new(l, rr), budget)?.is_proved())
}
