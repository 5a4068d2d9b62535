//! Bounded universes of modules, projectivity and `K_0`.
//!
//! The universe holds every module with induced pre-addition and at most
//! `bound` points, up to isomorphism, together with bridged modules
//! `M ∨ B` carrying one extra relation `x + 1' ≡ y + v'` with `1', v'` in
//! the free summand. Collapsing the summand identifies `x` with `y`, so the
//! cokernels of the universe reach quotients that merge points as well as
//! those that kill them.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{bmul, carrier_size, BlueModule, ModuleMorphism, MAX_POINTS};
use crate::error::{Error, Result};
use crate::lattice::AbelianGroup;
use crate::Blueprint;

pub const MAX_BOUND: usize = 8;

/// Labeled action tables on `points` points, as rows `a.m` for carrier
/// elements `a ≥ 2`.
fn labeled_actions(b: &Blueprint, points: usize) -> Vec<Vec<Vec<usize>>> {
    let nb = carrier_size(b).expect("checked by caller");
    let mut act: Vec<Vec<Option<usize>>> = (0..nb)
        .map(|a| {
            (0..points)
                .map(|m| match (a, m) {
                    (0, _) | (_, 0) => Some(0),
                    (1, m) => Some(m),
                    _ => None,
                })
                .collect()
        })
        .collect();
    let cells: Vec<(usize, usize)> = (1..points).flat_map(|m| (2..nb).map(move |a| (a, m))).collect();
    let mul: Vec<Vec<usize>> = (0..nb).map(|x| (0..nb).map(|y| bmul(b, x, y)).collect()).collect();
    let consistent = |act: &Vec<Vec<Option<usize>>>| {
        for x in 2..nb {
            for (y, row) in act.iter().enumerate().skip(2) {
                let c = mul[x][y];
                for p in 1..points {
                    if let (Some(q), Some(r)) = (row[p], act[c][p]) {
                        if let Some(s) = act[x][q] {
                            if s != r {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    };
    fn go(
        i: usize,
        cells: &[(usize, usize)],
        points: usize,
        act: &mut Vec<Vec<Option<usize>>>,
        consistent: &dyn Fn(&Vec<Vec<Option<usize>>>) -> bool,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if i == cells.len() {
            out.push(act.iter().map(|row| row.iter().map(|v| v.unwrap()).collect()).collect());
            return;
        }
        let (a, m) = cells[i];
        for v in 0..points {
            act[a][m] = Some(v);
            if consistent(act) {
                go(i + 1, cells, points, act, consistent, out);
            }
        }
        act[a][m] = None;
    }
    let mut out = Vec::new();
    go(0, &cells, points, &mut act, &consistent, &mut out);
    out
}

/// Minimal relabeling of an action table over permutations that respect
/// a coarse point invariant.
fn canonical_action(action: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = action[0].len();
    let color = |m: usize| -> Vec<usize> {
        let mut orbit: Vec<usize> = action.iter().map(|row| row[m]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        let mut c: Vec<usize> = action.iter().map(|row| usize::from(row[m] == 0) * 2 + usize::from(row[m] == m)).collect();
        c.push(orbit.len());
        c.push((0..n).filter(|&x| action.iter().any(|row| row[x] == m)).count());
        c
    };
    let mut by_color: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for m in 1..n {
        by_color.entry(color(m)).or_default().push(m);
    }
    let groups: Vec<Vec<usize>> = by_color.into_values().collect();
    let relabel = |order: &[usize]| -> Vec<Vec<usize>> {
        let mut pos = vec![0; n];
        for (i, &m) in order.iter().enumerate() {
            pos[m] = i + 1;
        }
        action
            .iter()
            .map(|row| {
                let mut out = vec![0; n];
                for m in 1..n {
                    out[pos[m]] = pos[row[m]];
                }
                out
            })
            .collect()
    };
    let mut best: Option<Vec<Vec<usize>>> = None;
    fn permute(groups: &[Vec<usize>], k: usize, prefix: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if k == groups.len() {
            visit(prefix);
            return;
        }
        let g = &groups[k];
        let mut used = vec![false; g.len()];
        fn inner(
            g: &[usize],
            used: &mut Vec<bool>,
            groups: &[Vec<usize>],
            k: usize,
            prefix: &mut Vec<usize>,
            left: usize,
            visit: &mut dyn FnMut(&[usize]),
        ) {
            if left == 0 {
                permute(groups, k + 1, prefix, visit);
                return;
            }
            for i in 0..g.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(g[i]);
                    inner(g, used, groups, k, prefix, left - 1, visit);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        inner(g, &mut used, groups, k, prefix, g.len(), visit);
    }
    permute(&groups, 0, &mut Vec::new(), &mut |order| {
        let t = relabel(order);
        if best.as_ref().is_none_or(|b| t < *b) {
            best = Some(t);
        }
    });
    best.unwrap_or_else(|| action.to_vec())
}

fn module_from_action(b: &Blueprint, action: Vec<Vec<usize>>) -> Result<BlueModule> {
    let n = action[0].len();
    let names = std::iter::once("*".to_string()).chain((1..n).map(|i| format!("m{i}"))).collect();
    BlueModule::new(b, names, action, vec![])
}

pub struct Universe {
    pub blueprint: Blueprint,
    pub bound: usize,
    /// Isomorphism classes with induced pre-addition, by size.
    pub modules: Vec<BlueModule>,
    keys: HashMap<Vec<Vec<usize>>, usize>,
    /// Cokernel projections `N → N/K` for proper nonzero closed `K`.
    pub epis: Vec<ModuleMorphism>,
}

pub fn universe(b: &Blueprint, bound: usize) -> Result<Universe> {
    carrier_size(b)?;
    if bound == 0 || bound > MAX_BOUND.min(MAX_POINTS) {
        return Err(Error::TooLarge(format!("universe bound {bound} outside 1..={MAX_BOUND}")));
    }
    let mut modules = Vec::new();
    let mut keys = HashMap::new();
    for points in 1..=bound {
        let mut found: Vec<Vec<Vec<usize>>> =
            labeled_actions(b, points).into_par_iter().map(|a| canonical_action(&a)).collect();
        found.sort();
        found.dedup();
        for action in found {
            // pre-additions induced by some blueprints are improper
            if let Ok(m) = module_from_action(b, action.clone()) {
                keys.insert(action, modules.len());
                modules.push(m);
            }
        }
    }
    let mut sources: Vec<BlueModule> = modules.clone();
    let regular = BlueModule::regular(b)?;
    let nb = regular.len();
    for m in modules.iter().filter(|m| m.len() + nb - 1 <= bound && m.len() > 1) {
        let w = BlueModule::wedge(b, &[m.clone(), regular.clone()])?;
        let one = m.len();
        for x in 1..m.len() {
            for y in 1..m.len() {
                for v in one..w.len() {
                    if x == y && v == one {
                        continue;
                    }
                    let extra = vec![(vec![x, one], vec![y, v])];
                    if let Ok(n) = BlueModule::new(b, w.names().to_vec(), w.action().to_vec(), extra) {
                        sources.push(n);
                    }
                }
            }
        }
    }
    let epis: Vec<ModuleMorphism> = sources
        .par_iter()
        .map(|n| {
            n.submodule_sets()
                .into_iter()
                .filter(|k| k.len() > 1 && k.len() < n.len())
                .map(|k| n.quotient(&k))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Universe { blueprint: b.clone(), bound, modules, keys, epis })
}

impl Universe {
    /// The universe index of a module with induced pre-addition.
    pub fn lookup(&self, m: &BlueModule) -> Option<usize> {
        if !m.has_induced_preaddition() || m.len() > self.bound {
            return None;
        }
        self.keys.get(&canonical_action(m.action())).copied()
    }
}

fn lifts_along_universe(p: &BlueModule, u: &Universe) -> bool {
    u.epis.par_iter().all(|g| {
        let lifts: HashSet<Vec<usize>> =
            p.homs(&g.source).into_iter().map(|l| l.iter().map(|&x| g.map[x]).collect()).collect();
        p.homs(&g.target).into_iter().all(|h| lifts.contains(&h))
    })
}

/// Lifting along every cokernel projection of the universe. A wedge lifts
/// exactly when each summand does, so summands are tested separately.
pub fn is_projective(p: &BlueModule, u: &Universe) -> Result<bool> {
    if p.blueprint() != &u.blueprint {
        return Err(Error::InvalidInput("module and universe over different blueprints".into()));
    }
    for c in p.components() {
        if !lifts_along_universe(&p.restrict(&c)?.source, u) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of the projective modules of the universe.
pub fn projectives(u: &Universe) -> Result<Vec<usize>> {
    let mut summand: HashMap<Vec<Vec<usize>>, bool> = HashMap::new();
    let mut out = Vec::new();
    for (i, m) in u.modules.iter().enumerate() {
        let mut all = true;
        for c in m.components() {
            let part = m.restrict(&c)?.source;
            let key = canonical_action(part.action());
            let ok = match summand.get(&key) {
                Some(&ok) => ok,
                None => {
                    let ok = lifts_along_universe(&part, u);
                    summand.insert(key, ok);
                    ok
                }
            };
            if !ok {
                all = false;
                break;
            }
        }
        if all {
            out.push(i);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct K0Presentation {
    /// One generator per projective class, described by its action table.
    pub generators: Vec<String>,
    pub free: Vec<bool>,
    /// Index of the free module of rank one among the generators.
    pub rank_one: Option<usize>,
    pub relations: Vec<Vec<i64>>,
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl K0Presentation {
    pub fn group(&self) -> AbelianGroup<i64> {
        AbelianGroup { free_rank: self.rank, torsion: self.torsion.clone() }
    }

    /// Whether the class of generator `i` alone generates the group.
    pub fn generated_by(&self, i: usize) -> bool {
        let mut rows = self.relations.clone();
        let mut unit = vec![0i64; self.generators.len()];
        unit[i] = 1;
        rows.push(unit);
        let rest = AbelianGroup::cokernel(&rows, self.generators.len());
        rest.free_rank == 0 && rest.torsion.is_empty()
    }
}

/// Generators are the projective classes of the universe; every short
/// exact sequence `M' → M → M/M'` of projectives gives `[M] = [M'] + [M/M']`.
pub fn k0(b: &Blueprint, bound: usize) -> Result<K0Presentation> {
    let u = universe(b, bound)?;
    let proj = projectives(&u)?;
    let column: HashMap<usize, usize> = proj.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut relations = Vec::new();
    for &i in &proj {
        let m = &u.modules[i];
        for k in m.submodule_sets() {
            let sub = m.restrict(&k)?.source;
            let quo = m.quotient(&k)?.target;
            let (Some(&s), Some(&q)) = (
                u.lookup(&sub).and_then(|x| column.get(&x)),
                u.lookup(&quo).and_then(|x| column.get(&x)),
            ) else {
                continue;
            };
            let mut row = vec![0i64; proj.len()];
            row[column[&i]] += 1;
            row[s] -= 1;
            row[q] -= 1;
            if row.iter().any(|&x| x != 0) && !relations.contains(&row) {
                relations.push(row);
            }
        }
    }
    let group = AbelianGroup::cokernel(&relations, proj.len());
    let generators = proj.iter().map(|&i| u.modules[i].describe()).collect();
    let free = proj.iter().map(|&i| u.modules[i].is_free()).collect::<Result<Vec<_>>>()?;
    let rank_one = u.lookup(&BlueModule::free(b, 1)?).and_then(|x| column.get(&x).copied());
    Ok(K0Presentation { generators, free, rank_one, relations, rank: group.free_rank, torsion: group.torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn pointed_sets_over_f1() {
        let u = universe(&catalog::f1(), 5).unwrap();
        assert_eq!(u.modules.len(), 5);
        assert_eq!(projectives(&u).unwrap().len(), 5);
    }

    #[test]
    fn sign_sets_over_f1_squared() {
        // involutions on 4 points: identity, one swap, two swaps
        let u = universe(&catalog::f1_squared(), 5).unwrap();
        assert_eq!(u.modules.iter().filter(|m| m.len() == 5).count(), 3);
        let proj = projectives(&u).unwrap();
        for i in proj {
            assert!(u.modules[i].is_free().unwrap());
        }
    }

    #[test]
    fn trivial_action_over_a_blue_field_is_not_projective() {
        let b = catalog::f1n(3).unwrap();
        let u = universe(&b, 7).unwrap();
        let t = BlueModule::new(&b, vec!["*".into(), "m".into()], vec![vec![0, 0], vec![0, 1], vec![0, 1], vec![0, 1]], vec![])
            .unwrap();
        assert!(!is_projective(&t, &u).unwrap());
        assert!(is_projective(&BlueModule::free(&b, 1).unwrap(), &u).unwrap());
    }

    #[test]
    fn idempotent_ideal_is_projective() {
        let e = catalog::idempotent();
        let u = universe(&e, 4).unwrap();
        let ideal = BlueModule::regular(&e).unwrap().restrict(&[0, 2]).unwrap().source;
        assert!(is_projective(&ideal, &u).unwrap());
        assert!(!ideal.is_free().unwrap());
        let cokernel = BlueModule::regular(&e).unwrap().quotient(&[0, 2]).unwrap().target;
        assert!(!is_projective(&cokernel, &u).unwrap());
    }

    #[test]
    fn k0_of_blue_fields_is_cyclic() {
        for (b, bound) in [(catalog::f1(), 5), (catalog::f1_squared(), 5), (catalog::f1n(3).unwrap(), 7)] {
            let k = k0(&b, bound).unwrap();
            assert!(k.group().is_infinite_cyclic(), "{:?}", k);
            assert!(k.free.iter().all(|&f| f));
            assert!(k.generated_by(k.rank_one.unwrap()));
        }
    }

    #[test]
    fn k0_of_the_idempotent_example() {
        let k = k0(&catalog::idempotent(), 6).unwrap();
        assert_eq!((k.rank, k.torsion.len(), k.generators.len()), (2, 0, 12));
    }

    #[test]
    fn bound_is_capped() {
        assert!(matches!(universe(&catalog::f1(), 9), Err(Error::TooLarge(_))));
    }
}
