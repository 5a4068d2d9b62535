//! Finite partial orders given by their order relation.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitePoset {
    /// `leq[i][j]` iff `i ≤ j`.
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Builds a poset from a reflexive, antisymmetric, transitive relation.
    pub fn new(leq: Vec<Vec<bool>>) -> Self {
        let p = FinitePoset { leq };
        debug_assert!(p.is_partial_order());
        p
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        Self::new((0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq[i][j]
    }

    pub fn is_partial_order(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| self.leq[i][i])
            && (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq[i][j] && self.leq[j][i])))
            && (0..n).all(|i| (0..n).all(|j| !self.leq[i][j] || (0..n).all(|k| !self.leq[j][k] || self.leq[i][k])))
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.lt(i, j) && !(0..n).any(|k| self.lt(i, k) && self.lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !(0..self.len()).any(|j| self.lt(i, j))).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !(0..self.len()).any(|j| self.lt(j, i))).collect()
    }

    /// Elements above `i`, `i` included.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq[i][j]).collect()
    }

    pub fn down_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq[j][i]).collect()
    }

    pub fn is_up_set(&self, set: &[bool]) -> bool {
        let n = self.len();
        (0..n).all(|i| !set[i] || (0..n).all(|j| !self.leq[i][j] || set[j]))
    }

    /// Components of the comparability graph, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = vec![];
            while let Some(x) = stack.pop() {
                members.push(x);
                for y in 0..n {
                    if comp[y] == usize::MAX && (self.leq[x][y] || self.leq[y][x]) {
                        comp[y] = id;
                        stack.push(y);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    /// The opposite order.
    pub fn dual(&self) -> FinitePoset {
        FinitePoset::from_fn(self.len(), |i, j| self.leq[j][i])
    }

    /// Restriction to `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> FinitePoset {
        FinitePoset::from_fn(keep.len(), |i, j| self.leq[keep[i]][keep[j]])
    }

    fn signature(&self, i: usize) -> (usize, usize) {
        (self.up_set(i).len(), self.down_set(i).len())
    }

    /// An order isomorphism `self → other`, if one exists.
    pub fn isomorphism(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let sa: Vec<_> = (0..n).map(|i| self.signature(i)).collect();
        let sb: Vec<_> = (0..n).map(|i| other.signature(i)).collect();
        let mut a_sorted = sa.clone();
        let mut b_sorted = sb.clone();
        a_sorted.sort();
        b_sorted.sort();
        if a_sorted != b_sorted {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(
            k: usize,
            a: &FinitePoset,
            b: &FinitePoset,
            sa: &[(usize, usize)],
            sb: &[(usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == a.len() {
                return true;
            }
            for y in 0..b.len() {
                if used[y] || sa[k] != sb[y] {
                    continue;
                }
                if (0..k).all(|x| a.leq[x][k] == b.leq[map[x]][y] && a.leq[k][x] == b.leq[y][map[x]]) {
                    map[k] = y;
                    used[y] = true;
                    if rec(k + 1, a, b, sa, sb, map, used) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            false
        }
        rec(0, self, other, &sa, &sb, &mut map, &mut used).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &FinitePoset) -> bool {
        self.isomorphism(other).is_some()
    }

    /// The Boolean lattice of subsets of an `n`-set, indexed by bitmask.
    pub fn boolean_lattice(n: usize) -> FinitePoset {
        FinitePoset::from_fn(1 << n, |i, j| i & j == i)
    }

    /// Chains of length at least one, as sorted index lists.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        while let Some(c) = stack.pop() {
            let top = *c.last().unwrap();
            for j in 0..n {
                if self.lt(top, j) {
                    let mut d = c.clone();
                    d.push(j);
                    stack.push(d);
                }
            }
            out.push(c);
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_lattice_shape() {
        let b = FinitePoset::boolean_lattice(3);
        assert_eq!(b.len(), 8);
        assert_eq!(b.covers().len(), 12);
        assert_eq!(b.minimal(), vec![0]);
        assert_eq!(b.maximal(), vec![7]);
        assert!(b.is_isomorphic(&b.dual()));
    }

    #[test]
    fn chain_is_not_antichain() {
        let chain = FinitePoset::from_fn(2, |i, j| i <= j);
        let anti = FinitePoset::from_fn(2, |i, j| i == j);
        assert!(!chain.is_isomorphic(&anti));
        assert_eq!(anti.components().len(), 2);
        assert_eq!(chain.chains().len(), 3);
    }
}
