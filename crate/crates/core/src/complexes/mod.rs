//! Typed simplicial complexes: order complexes of finite spaces, complexes
//! of monotone maps out of simplices, Coxeter complexes, Weyl orbits and
//! type-A buildings.

mod building;
mod coxeter;
mod full;
mod iso;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::spectra::SpecSpace;

pub use building::{building_type_a, q_factorial, Building};
pub use coxeter::{
    coxeter_complex, standard_seed, weyl_orbit_complex, CoxeterComplex, CoxeterType, OrbitComplex, SignedPerm,
    WeylGroup, MAX_GROUP_ORDER,
};
pub use full::{full_complex, sup_map, FullComplex, SimplexPoset, MAX_FULL_DIM};
pub use iso::{isomorphism, IsoOutcome, MAX_ISO_VERTICES};

/// A simplicial complex given by its facets, with a type on every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypedComplex {
    pub labels: Vec<String>,
    pub types: Vec<usize>,
    /// Maximal simplices, each sorted by vertex type; the list is sorted.
    pub facets: Vec<Vec<usize>>,
}

impl TypedComplex {
    /// Keeps the maximal members of `simplices`. Vertices of a simplex must
    /// carry distinct types.
    pub fn new(labels: Vec<String>, types: Vec<usize>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        if labels.len() != types.len() {
            return Err(Error::InvalidInput("one type per vertex label".into()));
        }
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for mut s in simplices {
            if s.iter().any(|&v| v >= labels.len()) {
                return Err(Error::InvalidInput(format!("simplex {s:?} names an unknown vertex")));
            }
            s.sort_by_key(|&v| (types[v], v));
            if s.windows(2).any(|w| types[w[0]] == types[w[1]]) {
                return Err(Error::HypothesisViolated(format!("simplex {s:?} repeats a vertex type")));
            }
            set.insert(s);
        }
        let all: Vec<Vec<usize>> = set.into_iter().collect();
        let mut facets: Vec<Vec<usize>> = all
            .iter()
            .filter(|s| !all.iter().any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v))))
            .cloned()
            .collect();
        // isolated vertices are facets too
        let covered: BTreeSet<usize> = facets.iter().flatten().copied().collect();
        facets.extend((0..labels.len()).filter(|v| !covered.contains(v)).map(|v| vec![v]));
        facets.sort();
        Ok(TypedComplex { labels, types, facets })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    /// `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len()).max().map(|k| k - 1)
    }

    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// All faces with `k + 1` vertices.
    pub fn faces(&self, k: usize) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            if f.len() < k + 1 {
                continue;
            }
            for_each_subset(f, k + 1, &mut |s| {
                out.insert(s.to_vec());
            });
        }
        out
    }

    /// Number of faces in each dimension, starting with the vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        match self.dimension() {
            None => vec![],
            Some(d) => (0..=d).map(|k| self.faces(k).len()).collect(),
        }
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.facets.iter().any(|f| simplex.iter().all(|v| f.contains(v)))
    }

    /// Facets of maximal dimension.
    pub fn chambers(&self) -> Vec<&Vec<usize>> {
        let top = self.dimension().map_or(0, |d| d + 1);
        self.facets.iter().filter(|f| f.len() == top).collect()
    }

    /// Codimension-one faces of chambers, with the number of chambers
    /// containing each.
    pub fn panels(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for c in self.chambers() {
            for i in 0..c.len() {
                let mut p = c.clone();
                p.remove(i);
                *out.entry(p).or_insert(0) += 1;
            }
        }
        out
    }

    /// Pure, and every panel lies in exactly two chambers.
    pub fn is_thin(&self) -> bool {
        self.is_pure() && self.panels().values().all(|&c| c == 2)
    }

    /// Pure, and every panel lies in at least three chambers.
    pub fn is_thick(&self) -> bool {
        self.is_pure() && self.panels().values().all(|&c| c >= 3)
    }

    /// Vertex count of each type.
    pub fn type_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for &t in &self.types {
            *h.entry(t).or_insert(0) += 1;
        }
        h
    }

    /// Vertices sharing a facet with `v`, `v` excluded.
    pub fn neighbours(&self, v: usize) -> BTreeSet<usize> {
        self.facets.iter().filter(|f| f.contains(&v)).flatten().copied().filter(|&w| w != v).collect()
    }

    /// Number of facets containing each vertex.
    pub fn star_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_vertices()];
        for f in &self.facets {
            for &v in f {
                out[v] += 1;
            }
        }
        out
    }

    /// The full subcomplex on `keep`, with vertices renumbered in order.
    pub fn induced(&self, keep: &[usize]) -> Result<TypedComplex> {
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let simplices = self
            .facets
            .iter()
            .map(|f| f.iter().filter_map(|v| index.get(v).copied()).collect::<Vec<_>>())
            .filter(|s| !s.is_empty())
            .collect();
        TypedComplex::new(
            keep.iter().map(|&v| self.labels[v].clone()).collect(),
            keep.iter().map(|&v| self.types[v]).collect(),
            simplices,
        )
    }

    fn token(&self, v: usize) -> String {
        let label: String = self.labels[v].split_whitespace().collect();
        format!("{}:{label}", self.types[v])
    }

    /// One facet per line as sorted `type:label` tokens, whitespace removed
    /// from labels; lines sorted.
    pub fn facet_list(&self) -> String {
        let mut lines: Vec<String> = self
            .facets
            .iter()
            .map(|f| {
                let mut toks: Vec<String> = f.iter().map(|&v| self.token(v)).collect();
                toks.sort();
                toks.join(" ")
            })
            .collect();
        lines.sort();
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }

    /// Reads the facet-list format back.
    pub fn parse_facet_list(text: &str) -> Result<TypedComplex> {
        let mut index: BTreeMap<(usize, String), usize> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut types = Vec::new();
        let mut simplices = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut s = Vec::new();
            for tok in line.split_whitespace() {
                let (t, label) =
                    tok.split_once(':').ok_or_else(|| Error::Parse(format!("token {tok:?} lacks a type")))?;
                let t: usize = t.parse().map_err(|_| Error::Parse(format!("bad vertex type in {tok:?}")))?;
                let id = *index.entry((t, label.to_string())).or_insert_with(|| {
                    labels.push(label.to_string());
                    types.push(t);
                    labels.len() - 1
                });
                s.push(id);
            }
            simplices.push(s);
        }
        TypedComplex::new(labels, types, simplices)
    }

    /// The 1-skeleton in DOT.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph complex {\n  node [shape=plaintext];\n");
        for v in 0..self.num_vertices() {
            s.push_str(&format!("  v{v} [label=\"{}\"];\n", self.token(v)));
        }
        for e in self.faces(1) {
            s.push_str(&format!("  v{} -- v{};\n", e[0], e[1]));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": (0..self.num_vertices())
                .map(|v| serde_json::json!({ "label": self.labels[v], "type": self.types[v] }))
                .collect::<Vec<_>>(),
            "facets": self.facets,
            "f_vector": self.f_vector(),
        })
    }
}

/// Calls `f` on every `k`-element subset of `items`, preserving order.
pub(crate) fn for_each_subset<T: Copy>(items: &[T], k: usize, f: &mut impl FnMut(&[T])) {
    fn rec<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

/// `x < y` iff `x` lies in the closure of `y`; closed points are minimal.
pub fn specialization_poset(space: &SpecSpace) -> FinitePoset {
    space.order.dual()
}

/// Chains of `order` as simplices, each vertex typed by `types`.
pub fn order_complex(order: &FinitePoset, labels: Vec<String>, types: Vec<usize>) -> Result<TypedComplex> {
    let n = order.len();
    let mut up: Vec<Vec<usize>> = vec![vec![]; n];
    for (i, j) in order.covers() {
        up[i].push(j);
    }
    let mut chains = Vec::new();
    let mut stack: Vec<Vec<usize>> = order.minimal().into_iter().map(|i| vec![i]).collect();
    while let Some(c) = stack.pop() {
        let top = *c.last().unwrap();
        if up[top].is_empty() {
            chains.push(c);
            continue;
        }
        for &j in &up[top] {
            let mut d = c.clone();
            d.push(j);
            stack.push(d);
        }
    }
    for c in &chains {
        if c.windows(2).any(|w| types[w[0]] >= types[w[1]]) {
            return Err(Error::HypothesisViolated(format!(
                "types do not increase along the chain {:?}",
                c.iter().map(|&i| &labels[i]).collect::<Vec<_>>()
            )));
        }
    }
    TypedComplex::new(labels, types, chains)
}

/// Ranks of the points of `space`; for a projective spectrum the cone
/// dimension is subtracted.
pub fn point_ranks(space: &SpecSpace, projective: bool) -> Result<Vec<usize>> {
    use rayon::prelude::*;
    (0..space.len())
        .into_par_iter()
        .map(|i| {
            let r = space.rank_of_point(i)?.rank;
            if projective {
                r.checked_sub(1).ok_or_else(|| Error::RankUndetermined("projective point of rank zero".into()))
            } else {
                Ok(r)
            }
        })
        .collect()
}

/// The order complex of the specialization order, typed by rank, with the
/// points in `drop` removed.
pub fn tilde_complex(space: &SpecSpace, ranks: &[usize], drop: &[usize]) -> Result<TypedComplex> {
    let keep: Vec<usize> = (0..space.len()).filter(|i| !drop.contains(i)).collect();
    let order = specialization_poset(space).induced(&keep);
    order_complex(
        &order,
        keep.iter().map(|&i| space.points[i].label.clone()).collect(),
        keep.iter().map(|&i| ranks[i]).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn proj_tilde(n: usize) -> TypedComplex {
        let obj = catalog::lookup(&format!("proj:{n}")).unwrap();
        let space = obj.0.space().unwrap();
        let ranks = point_ranks(&space, true).unwrap();
        tilde_complex(&space, &ranks, &space.generic_points()).unwrap()
    }

    #[test]
    fn p2_without_generic_point_is_a_hexagon() {
        let c = proj_tilde(2);
        assert_eq!(c.f_vector(), vec![6, 6]);
        assert!(c.is_thin());
        assert_eq!(c.type_histogram().into_iter().collect::<Vec<_>>(), vec![(0, 3), (1, 3)]);
    }

    #[test]
    fn projective_chambers_count_permutations() {
        for (n, chambers) in [(1, 2), (2, 6), (3, 24), (4, 120)] {
            assert_eq!(proj_tilde(n).chambers().len(), chambers, "P^{n}");
        }
    }

    #[test]
    fn antichain_gives_vertices_only() {
        let order = FinitePoset::from_fn(3, |i, j| i == j);
        let c = order_complex(&order, vec!["a".into(), "b".into(), "c".into()], vec![0, 0, 0]).unwrap();
        assert_eq!(c.f_vector(), vec![3]);
    }

    #[test]
    fn affine_line_is_an_edge() {
        let space = catalog::lookup("affine:1").unwrap().0.space().unwrap();
        let ranks = point_ranks(&space, false).unwrap();
        let c = tilde_complex(&space, &ranks, &[]).unwrap();
        assert_eq!(c.f_vector(), vec![2, 1]);
        assert_eq!(c.facet_list(), "0:(T1) 1:(0)\n");
    }

    #[test]
    fn facet_list_round_trips() {
        let c = proj_tilde(2);
        let back = TypedComplex::parse_facet_list(&c.facet_list()).unwrap();
        assert_eq!(back.facet_list(), c.facet_list());
        assert!(matches!(isomorphism(&c, &back, true), Ok(IsoOutcome::Witness(_))));
    }

    #[test]
    fn repeated_types_are_rejected() {
        let r = TypedComplex::new(vec!["a".into(), "b".into()], vec![0, 0], vec![vec![0, 1]]);
        assert!(matches!(r, Err(Error::HypothesisViolated(_))));
    }
}
