//! Order-preserving maps from the poset of nonempty subsets of `{0..n}`
//! into a finite poset.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Enumeration stops above this dimension.
pub const MAX_FULL_DIM: usize = 5;
const MAX_FULL_SIMPLICES: usize = 2_000_000;

/// Nonempty subsets of `{0..n}` under inclusion, indexed by bitmask minus one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimplexPoset {
    pub n: usize,
}

impl SimplexPoset {
    pub fn len(&self) -> usize {
        (1 << (self.n + 1)) - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn poset(&self) -> FinitePoset {
        FinitePoset::from_fn(self.len(), |i, j| (i + 1) & (j + 1) == i + 1)
    }
}

/// All order-preserving maps `Δ^k → X` for `k ≤ max_dim`. A map is stored
/// as its values on the masks `1..2^{k+1}`, at position `mask - 1`.
#[derive(Clone, Debug, Serialize)]
pub struct FullComplex {
    pub max_dim: usize,
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl FullComplex {
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn contains(&self, map: &[usize]) -> bool {
        let k = (map.len() + 1).trailing_zeros() as usize;
        k >= 1 && k - 1 <= self.max_dim && self.simplices[k - 1].iter().any(|m| m == map)
    }

    /// Restriction of a `k`-simplex to the face spanned by the vertices in
    /// `face`, reindexed.
    pub fn face(map: &[usize], face: &[usize]) -> Vec<usize> {
        let len = (1 << face.len()) - 1;
        (1..=len)
            .map(|sub: usize| {
                let mask: usize = face.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).map(|(_, &v)| 1 << v).sum();
                map[mask - 1]
            })
            .collect()
    }

    /// Whether every face of every stored simplex is stored.
    pub fn is_closed_under_faces(&self) -> bool {
        let sets: Vec<HashSet<&Vec<usize>>> = self.simplices.iter().map(|s| s.iter().collect()).collect();
        self.simplices.iter().enumerate().skip(1).all(|(k, list)| {
            list.iter().all(|m| {
                (0..=k).all(|drop| {
                    let face: Vec<usize> = (0..=k).filter(|&v| v != drop).collect();
                    sets[k - 1].contains(&FullComplex::face(m, &face))
                })
            })
        })
    }
}

pub fn full_complex(order: &FinitePoset, max_dim: usize) -> Result<FullComplex> {
    if max_dim > MAX_FULL_DIM {
        return Err(Error::DimensionTooLarge(max_dim));
    }
    let mut simplices = Vec::new();
    let mut total = 0;
    for k in 0..=max_dim {
        let len = SimplexPoset { n: k }.len();
        let mut out = Vec::new();
        let mut values = vec![0usize; len];
        // subsets of a mask are numerically smaller, so filling masks in
        // increasing order only needs the maximal proper subsets
        fn rec(
            mask: usize,
            len: usize,
            order: &FinitePoset,
            values: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
            budget: &mut usize,
        ) -> Result<()> {
            if mask > len {
                if *budget == 0 {
                    return Err(Error::TooLarge(format!("more than {MAX_FULL_SIMPLICES} simplices")));
                }
                *budget -= 1;
                out.push(values.clone());
                return Ok(());
            }
            for v in 0..order.len() {
                let ok = (0..usize::BITS)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| mask & !(1 << b))
                    .all(|sub| sub == 0 || order.leq(values[sub - 1], v));
                if ok {
                    values[mask - 1] = v;
                    rec(mask + 1, len, order, values, out, budget)?;
                }
            }
            Ok(())
        }
        let mut budget = MAX_FULL_SIMPLICES - total;
        rec(1, len, order, &mut values, &mut out, &mut budget)?;
        total += out.len();
        simplices.push(out);
    }
    Ok(FullComplex { max_dim, simplices })
}

/// The least upper bound of `items`, if it exists.
pub fn join(order: &FinitePoset, items: &[usize]) -> Option<usize> {
    let upper: Vec<usize> = (0..order.len()).filter(|&u| items.iter().all(|&i| order.leq(i, u))).collect();
    upper.iter().copied().find(|&u| upper.iter().all(|&w| order.leq(u, w)))
}

/// The simplex sending a nonempty subset of the vertices to their join.
pub fn sup_map(order: &FinitePoset, vertices: &[usize]) -> Result<Vec<usize>> {
    if vertices.is_empty() {
        return Err(Error::SeedNotSimplex("no vertices".into()));
    }
    if vertices.iter().any(|&v| v >= order.len()) {
        return Err(Error::SeedNotSimplex("vertex outside the poset".into()));
    }
    let len = (1usize << vertices.len()) - 1;
    (1..=len)
        .map(|mask| {
            let items: Vec<usize> =
                vertices.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            join(order, &items).ok_or_else(|| Error::SeedNotSimplex(format!("{items:?} has no supremum")))
        })
        .collect()
}
