//! Blue modules over finite blueprints: pointed sets with an action and a
//! pre-addition, their kernels and cokernels, projectivity relative to a
//! bounded universe, and the Grothendieck group of projectives.
//!
//! Points are numbered with the base point at 0. The pre-addition is
//! generated by the relations induced from the blueprint (`Σa_i.m ≡ Σb_j.m`
//! for every relation `Σa_i ≡ Σb_j` and point `m`) together with extra
//! generators closed under the action.

mod json;
mod universe;

use std::collections::{BTreeSet, HashMap};

use crate::blueprint::CoeffIdx;
use crate::error::{Error, Result};
use crate::Blueprint;

pub use json::ModuleJson;
pub use universe::{is_projective, k0, projectives, universe, K0Presentation, Universe};

/// Largest number of points (base point included) of a module.
pub const MAX_POINTS: usize = 9;
/// Longest formal sum visited when saturating a pre-addition.
const MAX_SUM_TERMS: usize = 7;

/// A relation between two multisets of nonzero points, both sorted.
pub type ModuleRelation = (Vec<usize>, Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlueModule {
    blueprint: Blueprint,
    names: Vec<String>,
    /// `action[a][m] = a.m` for carrier index `a`.
    action: Vec<Vec<usize>>,
    /// Generators beyond the induced ones; never contains an induced rule.
    extra: Vec<ModuleRelation>,
}

fn carrier_size(b: &Blueprint) -> Result<usize> {
    if !b.is_finite_table() {
        return Err(Error::Unsupported("blue modules need a finite-table blueprint".into()));
    }
    Ok(b.monoid().coeffs().len())
}

fn bmul(b: &Blueprint, x: usize, y: usize) -> usize {
    b.monoid().coeffs().mul(x as CoeffIdx, y as CoeffIdx) as usize
}

fn canonical_relation(mut l: Vec<usize>, mut r: Vec<usize>) -> ModuleRelation {
    l.retain(|&x| x != 0);
    r.retain(|&x| x != 0);
    l.sort_unstable();
    r.sort_unstable();
    if l <= r {
        (l, r)
    } else {
        (r, l)
    }
}

/// `big - small` for sorted multisets, if `small ⊆ big`.
fn sub_multiset(small: &[usize], big: &[usize]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(big.len());
    let mut i = 0;
    for &b in big {
        if i < small.len() && small[i] == b {
            i += 1;
        } else {
            out.push(b);
        }
    }
    (i == small.len()).then_some(out)
}

/// The equivalence generated by a rule set on formal sums of bounded
/// length.
pub(crate) struct Saturation {
    states: HashMap<Vec<usize>, usize>,
    parent: Vec<usize>,
}

impl Saturation {
    pub(crate) fn new(points: usize, rules: &[ModuleRelation], min_terms: usize) -> Self {
        let longest = rules.iter().map(|(l, r)| l.len().max(r.len())).max().unwrap_or(0);
        let bound = (longest + 1).max(min_terms).max(2).min(MAX_SUM_TERMS);
        let mut list: Vec<Vec<usize>> = Vec::new();
        fn go(from: usize, points: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            if left == 0 {
                return;
            }
            for p in from..points {
                cur.push(p);
                go(p, points, left - 1, cur, out);
                cur.pop();
            }
        }
        go(1, points, bound, &mut Vec::new(), &mut list);
        let states: HashMap<Vec<usize>, usize> = list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut sat = Saturation { parent: (0..list.len()).collect(), states };
        for (i, s) in list.iter().enumerate() {
            for (l, r) in rules {
                for (from, to) in [(l, r), (r, l)] {
                    let Some(rest) = sub_multiset(from, s) else { continue };
                    if rest.len() + to.len() > bound {
                        continue;
                    }
                    let mut t = rest;
                    t.extend_from_slice(to);
                    t.sort_unstable();
                    let j = sat.states[&t];
                    sat.union(i, j);
                }
            }
        }
        sat
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Whether both sums lie in the saturated range and are related.
    pub(crate) fn related(&mut self, l: &[usize], r: &[usize]) -> bool {
        match (self.states.get(l).copied(), self.states.get(r).copied()) {
            (Some(a), Some(b)) => self.find(a) == self.find(b),
            _ => l == r,
        }
    }
}

impl BlueModule {
    /// Validates the action axioms and properness of the pre-addition.
    pub fn new(
        blueprint: &Blueprint,
        names: Vec<String>,
        action: Vec<Vec<usize>>,
        extra: Vec<ModuleRelation>,
    ) -> Result<Self> {
        let nb = carrier_size(blueprint)?;
        let n = names.len();
        if n == 0 || n > MAX_POINTS {
            return Err(Error::TooLarge(format!("modules have between 1 and {MAX_POINTS} points, got {n}")));
        }
        if action.len() != nb || action.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidInput(format!("action must be a {nb}x{n} table of points")));
        }
        for (a, row) in action.iter().enumerate() {
            if row[0] != 0 {
                return Err(Error::InvalidInput(format!("element {a} moves the base point")));
            }
        }
        if action[0].iter().any(|&v| v != 0) || (0..n).any(|m| action[1][m] != m) {
            return Err(Error::InvalidInput("0 must act as the base point and 1 as the identity".into()));
        }
        for x in 0..nb {
            for y in 0..nb {
                let c = bmul(blueprint, x, y);
                for m in 0..n {
                    if action[c][m] != action[x][action[y][m]] {
                        return Err(Error::InvalidInput(format!("action is not associative at point {}", names[m])));
                    }
                }
            }
        }
        if extra.iter().any(|(l, r)| l.iter().chain(r).any(|&p| p >= n)) {
            return Err(Error::InvalidInput("relation mentions an unknown point".into()));
        }
        let mut m = BlueModule { blueprint: blueprint.clone(), names, action, extra: vec![] };
        m.extra = m.reduce_extra(extra);
        if let Some((x, y)) = m.improper_pair() {
            let show = |p: Option<usize>| p.map_or("the empty sum".to_string(), |p| m.names[p].clone());
            return Err(Error::HypothesisViolated(format!(
                "pre-addition identifies {} with {}",
                show(Some(x)),
                show(y)
            )));
        }
        Ok(m)
    }

    /// The regular module `B`.
    pub fn regular(b: &Blueprint) -> Result<Self> {
        let nb = carrier_size(b)?;
        let names = std::iter::once("*".to_string())
            .chain(b.monoid().coeffs().names()[1..].iter().cloned())
            .collect();
        let action = (0..nb).map(|a| (0..nb).map(|m| bmul(b, a, m)).collect()).collect();
        BlueModule::new(b, names, action, vec![])
    }

    pub fn zero(b: &Blueprint) -> Result<Self> {
        let nb = carrier_size(b)?;
        BlueModule::new(b, vec!["*".into()], vec![vec![0]; nb], vec![])
    }

    /// `∨_k B`.
    pub fn free(b: &Blueprint, k: usize) -> Result<Self> {
        let r = Self::regular(b)?;
        Self::wedge(b, &vec![r; k])
    }

    /// The coproduct: disjoint union with base points identified.
    pub fn wedge(b: &Blueprint, parts: &[BlueModule]) -> Result<Self> {
        let nb = carrier_size(b)?;
        let mut names = vec!["*".to_string()];
        let mut action = vec![vec![0usize]; nb];
        let mut extra = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            if p.blueprint != *b {
                return Err(Error::InvalidInput("wedge summands over different blueprints".into()));
            }
            let offset = names.len() - 1;
            let shift = |x: usize| if x == 0 { 0 } else { x + offset };
            for name in &p.names[1..] {
                names.push(if parts.len() > 1 { format!("{name}_{}", i + 1) } else { name.clone() });
            }
            for (a, row) in p.action.iter().enumerate() {
                action[a].extend(row[1..].iter().map(|&x| shift(x)));
            }
            for (l, r) in &p.extra {
                extra.push((l.iter().map(|&x| shift(x)).collect(), r.iter().map(|&x| shift(x)).collect()));
            }
        }
        BlueModule::new(b, names, action, extra)
    }

    pub fn blueprint(&self) -> &Blueprint {
        &self.blueprint
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_zero(&self) -> bool {
        self.names.len() == 1
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn act(&self, a: usize, m: usize) -> usize {
        self.action[a][m]
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn extra_relations(&self) -> &[ModuleRelation] {
        &self.extra
    }

    /// `[* a b | e: * b b]`: points, then the rows of non-trivial elements.
    pub fn describe(&self) -> String {
        let coeffs = self.blueprint.monoid().coeffs().names();
        let mut s = format!("[{}", self.names.join(" "));
        for (a, row) in self.action.iter().enumerate().skip(2) {
            let imgs: Vec<&str> = row.iter().map(|&x| self.names[x].as_str()).collect();
            s.push_str(&format!(" | {}: {}", coeffs[a], imgs.join(" ")));
        }
        s.push(']');
        s
    }

    pub fn has_induced_preaddition(&self) -> bool {
        self.extra.is_empty()
    }

    fn induced_rules(&self) -> BTreeSet<ModuleRelation> {
        let mut out = BTreeSet::new();
        for r in self.blueprint.all_relations() {
            for m in 1..self.len() {
                let side = |s: &crate::FormalSum| s.terms().iter().map(|t| self.act(t.coeff as usize, m)).collect();
                let rel = canonical_relation(side(&r.lhs), side(&r.rhs));
                if rel.0 != rel.1 {
                    out.insert(rel);
                }
            }
        }
        out
    }

    fn scaled(&self, rels: &[ModuleRelation]) -> BTreeSet<ModuleRelation> {
        let mut out = BTreeSet::new();
        for (l, r) in rels {
            for a in 1..self.action.len() {
                let rel = canonical_relation(
                    l.iter().map(|&x| self.act(a, x)).collect(),
                    r.iter().map(|&x| self.act(a, x)).collect(),
                );
                if rel.0 != rel.1 {
                    out.insert(rel);
                }
            }
        }
        out
    }

    fn reduce_extra(&self, extra: Vec<ModuleRelation>) -> Vec<ModuleRelation> {
        let induced = self.induced_rules();
        let extra: Vec<ModuleRelation> = extra.into_iter().map(|(l, r)| canonical_relation(l, r)).collect();
        self.scaled(&extra).into_iter().filter(|r| !induced.contains(r)).collect()
    }

    /// Every generating rule of the pre-addition.
    pub fn rules(&self) -> Vec<ModuleRelation> {
        let mut all = self.induced_rules();
        all.extend(self.extra.iter().cloned());
        all.into_iter().collect()
    }

    pub(crate) fn saturation(&self, min_terms: usize) -> Saturation {
        Saturation::new(self.len(), &self.rules(), min_terms)
    }

    /// Whether `l ≡ r` holds, searching sums of bounded length.
    pub fn derives(&self, l: &[usize], r: &[usize]) -> bool {
        let (l, r) = canonical_relation(l.to_vec(), r.to_vec());
        self.saturation(l.len().max(r.len())).related(&l, &r)
    }

    /// A point related to another point (`Some`) or to the empty sum
    /// (`None`).
    fn improper_pair(&self) -> Option<(usize, Option<usize>)> {
        let mut sat = self.saturation(1);
        for x in 1..self.len() {
            if sat.related(&[x], &[]) {
                return Some((x, None));
            }
            for y in x + 1..self.len() {
                if sat.related(&[x], &[y]) {
                    return Some((x, Some(y)));
                }
            }
        }
        None
    }

    /// Closed subsets whose wedge is the module: connected components of
    /// the action graph, merged when an extra relation links them.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp: Vec<usize> = (0..n).collect();
        fn root(comp: &mut [usize], mut x: usize) -> usize {
            while comp[x] != x {
                comp[x] = comp[comp[x]];
                x = comp[x];
            }
            x
        }
        let join = |comp: &mut Vec<usize>, a: usize, b: usize| {
            if a != 0 && b != 0 {
                let (ra, rb) = (root(comp, a), root(comp, b));
                comp[ra.max(rb)] = ra.min(rb);
            }
        };
        for row in &self.action {
            for m in 1..n {
                join(&mut comp, m, row[m]);
            }
        }
        for (l, r) in &self.extra {
            let all: Vec<usize> = l.iter().chain(r).copied().collect();
            for w in all.windows(2) {
                join(&mut comp, w[0], w[1]);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for m in 1..n {
            let r = root(&mut comp, m);
            groups.entry(r).or_insert_with(|| vec![0]).push(m);
        }
        groups.into_values().collect()
    }

    /// The smallest subset containing `seed` and closed under the action.
    pub fn generated(&self, seed: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = std::iter::once(0).collect();
        for &m in seed {
            for row in &self.action {
                set.insert(row[m]);
            }
        }
        set.into_iter().collect()
    }

    pub fn is_closed(&self, subset: &[usize]) -> bool {
        subset.contains(&0) && subset.iter().all(|&m| self.action.iter().all(|row| subset.contains(&row[m])))
    }

    /// Every subset closed under the action, as sorted point lists.
    pub fn submodule_sets(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        for mask in 0..1u32 << (n - 1) {
            let set: Vec<usize> = std::iter::once(0).chain((1..n).filter(|&i| mask >> (i - 1) & 1 == 1)).collect();
            if self.is_closed(&set) {
                out.push(set);
            }
        }
        out
    }

    /// The submodule on a closed subset, with the generators of the
    /// pre-addition that live on it.
    pub fn restrict(&self, keep: &[usize]) -> Result<ModuleMorphism> {
        if !self.is_closed(keep) {
            return Err(Error::InvalidInput("subset is not closed under the action".into()));
        }
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let names = keep.iter().map(|&m| self.names[m].clone()).collect();
        let action = self.action.iter().map(|row| keep.iter().map(|&m| pos[&row[m]]).collect()).collect();
        let extra = self
            .rules()
            .into_iter()
            .filter(|(l, r)| l.iter().chain(r).all(|x| pos.contains_key(x)))
            .map(|(l, r)| (l.iter().map(|x| pos[x]).collect(), r.iter().map(|x| pos[x]).collect()))
            .collect();
        let sub = BlueModule::new(&self.blueprint, names, action, extra)?;
        Ok(ModuleMorphism { source: sub, target: self.clone(), map: keep.to_vec() })
    }

    /// `M/K`: the closed subset collapses to the base point, the
    /// pre-addition is pushed forward, and points it forces together are
    /// identified.
    pub fn quotient(&self, collapse: &[usize]) -> Result<ModuleMorphism> {
        if !self.is_closed(collapse) {
            return Err(Error::InvalidInput("subset is not closed under the action".into()));
        }
        let n = self.len();
        let mut class: Vec<usize> = (0..n).map(|m| if collapse.contains(&m) { 0 } else { m }).collect();
        let rules = self.rules();
        loop {
            let reps: Vec<usize> = (0..n).filter(|&m| class[m] == m).collect();
            let index: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let pushed: Vec<ModuleRelation> = rules
                .iter()
                .map(|(l, r)| {
                    canonical_relation(
                        l.iter().map(|&x| index[&class[x]]).collect(),
                        r.iter().map(|&x| index[&class[x]]).collect(),
                    )
                })
                .filter(|(l, r)| l != r)
                .collect();
            let mut sat = Saturation::new(reps.len(), &pushed, 1);
            let mut merge = None;
            'search: for i in 1..reps.len() {
                if sat.related(&[i], &[]) {
                    merge = Some((reps[i], 0));
                    break;
                }
                for j in i + 1..reps.len() {
                    if sat.related(&[i], &[j]) {
                        merge = Some((reps[j], reps[i]));
                        break 'search;
                    }
                }
            }
            let Some((from, into)) = merge else {
                let names = reps.iter().map(|&m| self.names[m].clone()).collect();
                let action = self
                    .action
                    .iter()
                    .map(|row| reps.iter().map(|&m| index[&class[row[m]]]).collect())
                    .collect();
                let target = BlueModule::new(&self.blueprint, names, action, pushed)?;
                let map = (0..n).map(|m| index[&class[m]]).collect();
                return Ok(ModuleMorphism { source: self.clone(), target, map });
            };
            for c in class.iter_mut() {
                if *c == from {
                    *c = into;
                }
            }
            // identifications propagate along the action
            loop {
                let mut changed = false;
                for row in &self.action {
                    for x in 0..n {
                        for y in x + 1..n {
                            if class[x] == class[y] && class[row[x]] != class[row[y]] {
                                let (a, b) = (class[row[x]], class[row[y]]);
                                let (keep, drop) = (a.min(b), a.max(b));
                                for c in class.iter_mut() {
                                    if *c == drop {
                                        *c = keep;
                                    }
                                }
                                changed = true;
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }

    /// Every action-preserving pointed map `self → target` that also
    /// preserves the pre-addition.
    pub fn homs(&self, target: &BlueModule) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut sat = (!self.extra.is_empty()).then(|| target.saturation(1));
        self.extend_hom(target, 1, &mut map, &mut out, &mut sat);
        out
    }

    fn extend_hom(
        &self,
        target: &BlueModule,
        m: usize,
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        sat: &mut Option<Saturation>,
    ) {
        if m == self.len() {
            if let Some(sat) = sat {
                let ok = self.extra.iter().all(|(l, r)| {
                    let (l, r) = canonical_relation(l.iter().map(|&x| map[x]).collect(), r.iter().map(|&x| map[x]).collect());
                    sat.related(&l, &r)
                });
                if !ok {
                    return;
                }
            }
            out.push(map.clone());
            return;
        }
        if map[m] != usize::MAX {
            return self.extend_hom(target, m + 1, map, out, sat);
        }
        for v in 0..target.len() {
            // assign m ↦ v and everything it forces
            let mut assigned = Vec::new();
            let mut ok = true;
            for (a, row) in self.action.iter().enumerate() {
                let (src, img) = (row[m], target.action[a][v]);
                if map[src] == usize::MAX {
                    map[src] = img;
                    assigned.push(src);
                } else if map[src] != img {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.extend_hom(target, m + 1, map, out, sat);
            }
            for s in assigned {
                map[s] = usize::MAX;
            }
        }
    }

    /// A bijection onto `other` preserving action and pre-addition.
    pub fn isomorphism(&self, other: &BlueModule) -> Option<Vec<usize>> {
        if self.len() != other.len() || self.blueprint != other.blueprint {
            return None;
        }
        let back = |f: &[usize]| {
            let mut g = vec![0; f.len()];
            for (i, &v) in f.iter().enumerate() {
                g[v] = i;
            }
            g
        };
        self.homs(other).into_iter().find(|f| {
            let distinct: BTreeSet<&usize> = f.iter().collect();
            distinct.len() == f.len() && {
                let g = back(f);
                ModuleMorphism::new(other, self, g).is_ok()
            }
        })
    }

    pub fn is_isomorphic(&self, other: &BlueModule) -> bool {
        self.isomorphism(other).is_some()
    }

    /// Isomorphic to a wedge of copies of `B`.
    pub fn is_free(&self) -> Result<bool> {
        let nb = carrier_size(&self.blueprint)?;
        let rest = self.len() - 1;
        if rest % (nb - 1) != 0 {
            return Ok(false);
        }
        Ok(self.is_isomorphic(&BlueModule::free(&self.blueprint, rest / (nb - 1))?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub source: BlueModule,
    pub target: BlueModule,
    pub map: Vec<usize>,
}

impl ModuleMorphism {
    pub fn new(source: &BlueModule, target: &BlueModule, map: Vec<usize>) -> Result<Self> {
        if source.blueprint != target.blueprint {
            return Err(Error::InvalidInput("modules over different blueprints".into()));
        }
        if map.len() != source.len() || map.iter().any(|&v| v >= target.len()) {
            return Err(Error::InvalidInput("map must send every point to a target point".into()));
        }
        for (a, row) in source.action.iter().enumerate() {
            for m in 0..source.len() {
                if map[row[m]] != target.action[a][map[m]] {
                    return Err(Error::InvalidInput(format!("map does not commute with the action on {}", source.names[m])));
                }
            }
        }
        let mut sat = target.saturation(1);
        for (l, r) in &source.extra {
            let (l, r) = canonical_relation(l.iter().map(|&x| map[x]).collect(), r.iter().map(|&x| map[x]).collect());
            if !sat.related(&l, &r) {
                return Err(Error::InvalidInput("map does not preserve the pre-addition".into()));
            }
        }
        Ok(ModuleMorphism { source: source.clone(), target: target.clone(), map })
    }

    pub fn identity(m: &BlueModule) -> Self {
        ModuleMorphism { source: m.clone(), target: m.clone(), map: (0..m.len()).collect() }
    }

    pub fn zero(source: &BlueModule, target: &BlueModule) -> Self {
        ModuleMorphism { source: source.clone(), target: target.clone(), map: vec![0; source.len()] }
    }

    pub fn compose(&self, after: &ModuleMorphism) -> ModuleMorphism {
        ModuleMorphism {
            source: self.source.clone(),
            target: after.target.clone(),
            map: self.map.iter().map(|&x| after.map[x]).collect(),
        }
    }

    pub fn image(&self) -> Vec<usize> {
        self.map.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.len()
    }

    /// The preimage of the base point with its inclusion.
    pub fn kernel(&self) -> Result<ModuleMorphism> {
        let keep: Vec<usize> = (0..self.source.len()).filter(|&m| self.map[m] == 0).collect();
        self.source.restrict(&keep)
    }

    /// The target with the image collapsed, with its projection.
    pub fn cokernel(&self) -> Result<ModuleMorphism> {
        self.target.quotient(&self.image())
    }

    /// Whether the morphism is the kernel of its cokernel.
    pub fn is_normal_mono(&self) -> Result<bool> {
        if !self.is_injective() {
            return Err(Error::NotMono);
        }
        let k = self.cokernel()?.kernel()?;
        Ok(self.factors_isomorphically(&k))
    }

    /// Whether the morphism is the cokernel of its kernel.
    pub fn is_normal_epi(&self) -> Result<bool> {
        if !self.is_surjective() {
            return Err(Error::NotEpi);
        }
        let c = self.kernel()?.cokernel()?;
        Ok(c.factors_isomorphically_from(self))
    }

    /// `self = φ ∘ other`-style comparison for two morphisms into the same
    /// target: an isomorphism of sources commuting with both maps.
    fn factors_isomorphically(&self, other: &ModuleMorphism) -> bool {
        if self.source.len() != other.source.len() || self.image() != other.image() {
            return false;
        }
        let pos: HashMap<usize, usize> = other.map.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let phi: Vec<usize> = self.map.iter().map(|v| pos[v]).collect();
        let inverse: Vec<usize> = other.map.iter().map(|v| self.map.iter().position(|w| w == v).unwrap()).collect();
        ModuleMorphism::new(&self.source, &other.source, phi).is_ok()
            && ModuleMorphism::new(&other.source, &self.source, inverse).is_ok()
    }

    /// For two morphisms out of the same source: an isomorphism of targets
    /// commuting with both.
    fn factors_isomorphically_from(&self, other: &ModuleMorphism) -> bool {
        if self.target.len() != other.target.len() {
            return false;
        }
        let mut phi = vec![usize::MAX; self.target.len()];
        for (m, &c) in self.map.iter().enumerate() {
            let v = other.map[m];
            if phi[c] != usize::MAX && phi[c] != v {
                return false;
            }
            phi[c] = v;
        }
        let mut inverse = vec![0; phi.len()];
        for (c, &v) in phi.iter().enumerate() {
            inverse[v] = c;
        }
        let distinct: BTreeSet<&usize> = phi.iter().collect();
        distinct.len() == phi.len()
            && ModuleMorphism::new(&self.target, &other.target, phi).is_ok()
            && ModuleMorphism::new(&other.target, &self.target, inverse).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn free_modules() {
        assert!(BlueModule::free(&catalog::f1(), 0).unwrap().is_zero());
        assert_eq!(BlueModule::free(&catalog::f1(), 1).unwrap().names(), ["*", "1"]);
        let f = BlueModule::free(&catalog::f1_squared(), 2).unwrap();
        assert_eq!(f.len(), 5);
        assert!(f.is_free().unwrap());
        assert!(f.derives(&[1, 2], &[]));
        assert!(!f.derives(&[1, 3], &[]));
    }

    #[test]
    fn kernels_and_cokernels() {
        let e = catalog::idempotent();
        let b = BlueModule::regular(&e).unwrap();
        let id = ModuleMorphism::identity(&b);
        assert!(id.kernel().unwrap().source.is_zero());
        let zero = ModuleMorphism::zero(&BlueModule::zero(&e).unwrap(), &b);
        assert!(zero.cokernel().unwrap().target.is_isomorphic(&b));
        // {0,e,1} → {0,1} sending e to the base point
        let collapse = b.quotient(&[0, 2]).unwrap();
        assert_eq!(collapse.target.len(), 2);
        let k = collapse.kernel().unwrap();
        assert_eq!(k.source.names(), ["*", "e"]);
        assert!(id.is_normal_mono().unwrap() && id.is_normal_epi().unwrap());
        assert!(k.is_normal_mono().unwrap());
        assert_eq!(k.compose(&collapse).map, vec![0, 0]);
        assert!(matches!(k.is_normal_epi(), Err(Error::NotEpi)));
    }

    #[test]
    fn ideal_of_the_idempotent_is_not_free() {
        let e = catalog::idempotent();
        let b = BlueModule::regular(&e).unwrap();
        let ideal = b.restrict(&[0, 2]).unwrap().source;
        assert!(!ideal.is_free().unwrap());
    }

    #[test]
    fn collapsing_orbit_is_not_normal() {
        let f1 = catalog::f1();
        let two = BlueModule::free(&f1, 2).unwrap();
        let one = BlueModule::free(&f1, 1).unwrap();
        let fold = ModuleMorphism::new(&two, &one, vec![0, 1, 1]).unwrap();
        assert!(!fold.is_normal_epi().unwrap());
        let proj = ModuleMorphism::new(&two, &one, vec![0, 1, 0]).unwrap();
        assert!(proj.is_normal_epi().unwrap());
    }

    #[test]
    fn cokernels_identify_bridged_points() {
        // B ∨ B over F1³ with 1 + 1' ≡ z + z'; collapsing the second copy
        // forces 1 = z = z²
        let b = catalog::f1n(3).unwrap();
        let w = BlueModule::free(&b, 2).unwrap();
        let bridged = BlueModule::new(&b, w.names().to_vec(), w.action().to_vec(), vec![(vec![1, 4], vec![2, 5])]).unwrap();
        let q = bridged.quotient(&[0, 4, 5, 6]).unwrap();
        assert_eq!(q.target.len(), 2);
        assert!(q.target.derives(&[1, 1, 1], &[]));
        // with a shared summand the bridge cancels and is improper
        let u = BlueModule::new(&b, vec!["*".into(), "u".into()], vec![vec![0, 0], vec![0, 1], vec![0, 1], vec![0, 1]], vec![])
            .unwrap();
        let w = BlueModule::wedge(&b, &[BlueModule::regular(&b).unwrap(), u]).unwrap();
        assert!(BlueModule::new(&b, w.names().to_vec(), w.action().to_vec(), vec![(vec![1, 4], vec![2, 4])]).is_err());
    }

    #[test]
    fn improper_preaddition_is_rejected() {
        let f1 = catalog::f1();
        let two = BlueModule::free(&f1, 2).unwrap();
        let bad = BlueModule::new(&f1, two.names().to_vec(), two.action().to_vec(), vec![(vec![1], vec![2])]);
        assert!(matches!(bad, Err(Error::HypothesisViolated(_))));
    }
}
