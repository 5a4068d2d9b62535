//! Isomorphism search between typed complexes.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

use super::TypedComplex;

pub const MAX_ISO_VERTICES: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// `witness[v]` is the image of vertex `v`.
    Witness(Vec<usize>),
    NotIsomorphic(String),
}

impl IsoOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, IsoOutcome::Witness(_))
    }
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

/// Searches for a simplicial bijection `a → b`. With `typed`, vertex types
/// must correspond under a single bijection of type labels.
pub fn isomorphism(a: &TypedComplex, b: &TypedComplex, typed: bool) -> Result<IsoOutcome> {
    let n = a.num_vertices();
    if n > MAX_ISO_VERTICES || b.num_vertices() > MAX_ISO_VERTICES {
        return Err(Error::TooLarge(format!("isomorphism search is capped at {MAX_ISO_VERTICES} vertices")));
    }
    let no = |why: &str| Ok(IsoOutcome::NotIsomorphic(why.to_string()));
    if n != b.num_vertices() || a.f_vector() != b.f_vector() {
        return no("f-vectors differ");
    }
    let facet_shape = |c: &TypedComplex| sorted(c.facets.iter().map(Vec::len).collect());
    if facet_shape(a) != facet_shape(b) {
        return no("facet dimensions differ");
    }
    if typed && sorted(a.type_histogram().into_values().collect()) != sorted(b.type_histogram().into_values().collect()) {
        return no("type histograms differ");
    }
    let inv = |c: &TypedComplex| -> Vec<(usize, usize)> {
        let stars = c.star_sizes();
        (0..c.num_vertices()).map(|v| (stars[v], c.neighbours(v).len())).collect()
    };
    let (ia, ib) = (inv(a), inv(b));
    if sorted(ia.clone()) != sorted(ib.clone()) {
        return no("link sizes differ");
    }

    let adj = |c: &TypedComplex| -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; c.num_vertices()]; c.num_vertices()];
        for f in &c.facets {
            for &x in f {
                for &y in f {
                    m[x][y] = x != y;
                }
            }
        }
        m
    };
    let (adj_a, adj_b) = (adj(a), adj(b));
    let facets_b: BTreeSet<Vec<usize>> = b.facets.iter().map(|f| sorted(f.clone())).collect();

    // visit vertices of `a` so that each one after the first in its
    // component is adjacent to an earlier one
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in 0..n {
                if adj_a[v][w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    struct Search<'a> {
        a: &'a TypedComplex,
        b: &'a TypedComplex,
        typed: bool,
        order: Vec<usize>,
        ia: Vec<(usize, usize)>,
        ib: Vec<(usize, usize)>,
        adj_a: Vec<Vec<bool>>,
        adj_b: Vec<Vec<bool>>,
        facets_b: BTreeSet<Vec<usize>>,
        map: Vec<usize>,
        used: Vec<bool>,
        types: BTreeMap<usize, usize>,
        types_used: BTreeMap<usize, usize>,
    }

    impl Search<'_> {
        fn run(&mut self, k: usize) -> bool {
            if k == self.order.len() {
                return self
                    .a
                    .facets
                    .iter()
                    .all(|f| self.facets_b.contains(&sorted(f.iter().map(|&v| self.map[v]).collect())));
            }
            let v = self.order[k];
            for w in 0..self.b.num_vertices() {
                if self.used[w] || self.ia[v] != self.ib[w] {
                    continue;
                }
                let (ta, tb) = (self.a.types[v], self.b.types[w]);
                let fresh_type = self.typed && !self.types.contains_key(&ta);
                if self.typed {
                    match self.types.get(&ta) {
                        Some(&t) if t != tb => continue,
                        None if self.types_used.contains_key(&tb) => continue,
                        _ => {}
                    }
                }
                let consistent = self.order[..k].iter().all(|&u| self.adj_a[u][v] == self.adj_b[self.map[u]][w]);
                if !consistent {
                    continue;
                }
                self.map[v] = w;
                self.used[w] = true;
                if fresh_type {
                    self.types.insert(ta, tb);
                    self.types_used.insert(tb, ta);
                }
                if self.run(k + 1) {
                    return true;
                }
                self.used[w] = false;
                if fresh_type {
                    self.types.remove(&ta);
                    self.types_used.remove(&tb);
                }
            }
            false
        }
    }

    let mut s = Search {
        a,
        b,
        typed,
        order,
        ia,
        ib,
        adj_a,
        adj_b,
        facets_b,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        types: BTreeMap::new(),
        types_used: BTreeMap::new(),
    };
    if s.run(0) {
        Ok(IsoOutcome::Witness(s.map))
    } else {
        no("no bijection survives the search")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> TypedComplex {
        TypedComplex::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            (0..n).map(|i| i % 2).collect(),
            (0..n).map(|i| vec![i, (i + 1) % n]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn hexagon_is_not_a_square() {
        assert_eq!(
            isomorphism(&cycle(6), &cycle(4), true).unwrap(),
            IsoOutcome::NotIsomorphic("f-vectors differ".into())
        );
    }

    #[test]
    fn witness_is_simplicial() {
        let a = cycle(6);
        let mut b = cycle(6);
        b.types = b.types.iter().map(|t| 7 - t).collect();
        let IsoOutcome::Witness(w) = isomorphism(&a, &b, true).unwrap() else { panic!() };
        for f in &a.facets {
            let mut img: Vec<usize> = f.iter().map(|&v| w[v]).collect();
            img.sort();
            assert!(b.facets.iter().any(|g| sorted(g.clone()) == img));
        }
    }

    #[test]
    fn types_must_correspond() {
        let a = cycle(6);
        // the same hexagon with three vertex types
        let b = TypedComplex::new(
            (0..6).map(|i| format!("w{i}")).collect(),
            vec![0, 1, 2, 0, 1, 2],
            (0..6).map(|i| vec![i, (i + 1) % 6]).collect(),
        )
        .unwrap();
        assert!(!isomorphism(&a, &b, true).unwrap().is_witness());
        assert!(isomorphism(&a, &b, false).unwrap().is_witness());
    }
}
