//! Subspaces of `F_q^n` enumerated by reduced row echelon form.

use crate::field::{FieldElem, FiniteField};

/// A subspace in reduced row echelon form, with its vectors encoded as
/// base-`q` integers (first coordinate lowest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub rows: Vec<Vec<FieldElem>>,
    pub vectors: Vec<u32>,
}

pub fn encode(v: &[FieldElem], q: u32) -> u32 {
    v.iter().rev().fold(0u32, |acc, &x| acc * q + x as u32)
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.vectors.iter().all(|v| self.contains_code(*v))
    }

    pub fn contains_code(&self, code: u32) -> bool {
        self.vectors.binary_search(&code).is_ok()
    }

    /// Spanned by standard basis vectors.
    pub fn is_coordinate(&self) -> bool {
        self.rows.iter().all(|r| r.iter().filter(|&&x| x != 0).count() == 1)
    }

    pub fn label(&self) -> String {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")).collect();
        format!("<{}>", rows.join(","))
    }
}

/// Encoded vectors of the span of `rows`, sorted.
pub fn span(rows: &[Vec<FieldElem>], len: usize, field: &FiniteField) -> Vec<u32> {
    let q = field.order();
    let total = q.pow(rows.len() as u32);
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut v = vec![0 as FieldElem; len];
        let mut c = code;
        for r in rows {
            let a = (c % q) as FieldElem;
            c /= q;
            for (x, &y) in v.iter_mut().zip(r) {
                *x = field.add(*x, field.mul(a, y));
            }
        }
        out.push(encode(&v, q));
    }
    out.sort_unstable();
    out
}

/// Number of `k`-dimensional subspaces of `F_q^len`.
pub fn count_subspaces(k: usize, len: usize, q: u64) -> u64 {
    if k > len {
        return 0;
    }
    let num: u128 = (0..k).map(|i| (q as u128).pow((len - i) as u32) - 1).product();
    let den: u128 = (0..k).map(|i| (q as u128).pow((k - i) as u32) - 1).product();
    (num / den) as u64
}

/// All `k`-dimensional subspaces of `F_q^len`, one per reduced echelon form.
pub fn subspaces(k: usize, len: usize, field: &FiniteField) -> Vec<Subspace> {
    let q = field.order() as u64;
    let mut out = Vec::new();
    crate::complexes::for_each_subset(&(0..len).collect::<Vec<_>>(), k, &mut |pivots| {
        // free positions: right of the row's pivot and not another pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| (pivots[r] + 1..len).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for code in 0..q.pow(free.len() as u32) {
            let mut rows = vec![vec![0 as FieldElem; len]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = (c % q) as FieldElem;
                c /= q;
            }
            let vectors = span(&rows, len, field);
            out.push(Subspace { rows, vectors });
        }
    });
    out
}

/// `matrix · v` over `field`, for an integer matrix reduced into the prime
/// subfield.
pub fn apply(matrix: &[Vec<FieldElem>], v: &[FieldElem], field: &FiniteField) -> Vec<FieldElem> {
    matrix
        .iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &x)| field.add(acc, field.mul(a, x))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_gaussian_binomials() {
        for q in [2u32, 3, 4] {
            let f = FiniteField::get(q).unwrap();
            for len in 0..=4 {
                for k in 0..=len {
                    let s = subspaces(k, len, &f);
                    assert_eq!(s.len() as u64, count_subspaces(k, len, q as u64), "q={q} k={k} len={len}");
                    assert!(s.iter().all(|x| x.vectors.len() == (q as usize).pow(k as u32)));
                }
            }
        }
        assert_eq!(count_subspaces(2, 4, 2), 35);
    }
}
