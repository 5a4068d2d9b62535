//! Integer lattice normal forms, generic over the integer scalar.

use std::fmt::Debug;

use num_integer::Integer;
use num_traits::Signed;

/// Integer scalar usable by the normal-form routines.
pub trait IntScalar: Integer + Signed + Clone + Debug {}
impl<T: Integer + Signed + Clone + Debug> IntScalar for T {}

/// Row-style Hermite normal form of `rows` together with the unimodular
/// transform: `hnf[i] = Σ_j transform[i][j] * rows[j]`.
///
/// Nonzero rows come first, pivots are positive and strictly move right, and
/// entries above a pivot lie in `[0, pivot)`. Zero rows are kept at the end so
/// callers can inspect which combinations of the input vanish.
#[derive(Debug, Clone)]
pub struct Hermite<T> {
    pub hnf: Vec<Vec<T>>,
    pub transform: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

impl<T: IntScalar> Hermite<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` modulo the row lattice into the canonical coset
    /// representative; returns the multiples `k_i` of the nonzero HNF rows that
    /// were subtracted.
    pub fn reduce(&self, v: &mut [T]) -> Vec<T> {
        let mut subtracted = Vec::with_capacity(self.pivots.len());
        for (row, &col) in self.hnf.iter().zip(&self.pivots) {
            let (k, _) = v[col].div_mod_floor(&row[col]);
            if !k.is_zero() {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = x.clone() - k.clone() * r.clone();
                }
            }
            subtracted.push(k);
        }
        subtracted
    }
}

fn swap_rows<T>(m: &mut [Vec<T>], a: usize, b: usize) {
    if a != b {
        m.swap(a, b);
    }
}

fn add_multiple<T: IntScalar>(m: &mut [Vec<T>], target: usize, source: usize, k: &T) {
    if k.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(src) {
        *x = x.clone() + k.clone() * s;
    }
}

pub fn hermite<T: IntScalar>(rows: &[Vec<T>], ncols: usize) -> Hermite<T> {
    let n = rows.len();
    let mut a: Vec<Vec<T>> = rows.to_vec();
    let mut u: Vec<Vec<T>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r >= n {
            break;
        }
        // Euclid on the column until one nonzero entry remains at or below r.
        loop {
            let mut best: Option<usize> = None;
            for i in r..n {
                if !a[i][col].is_zero()
                    && best.map_or(true, |b| a[i][col].abs() < a[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            swap_rows(&mut a, r, b);
            swap_rows(&mut u, r, b);
            let mut done = true;
            for i in r + 1..n {
                if !a[i][col].is_zero() {
                    let q = a[i][col].div_floor(&a[r][col]);
                    let neg = -q;
                    add_multiple(&mut a, i, r, &neg);
                    add_multiple(&mut u, i, r, &neg);
                    if !a[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
            for x in u[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = a[i][col].div_floor(&a[r][col]);
            let neg = -q;
            add_multiple(&mut a, i, r, &neg);
            add_multiple(&mut u, i, r, &neg);
        }
        pivots.push(col);
        r += 1;
    }
    Hermite { hnf: a, transform: u, pivots }
}

/// Nonzero invariant factors of an integer matrix (Smith normal form
/// diagonal), ascending under divisibility.
pub fn smith_invariants<T: IntScalar>(matrix: &[Vec<T>], ncols: usize) -> Vec<T> {
    let mut a: Vec<Vec<T>> = matrix.to_vec();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pick the smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                let neg = -q;
                add_multiple(&mut a, i, t, &neg);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..ncols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let v = row[j].clone() - q.clone() * row[t].clone();
                    row[j] = v;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let mut fixed = true;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(a[i][j].clone() % a[t][t].clone()).is_zero() {
                    let src = a[i].clone();
                    for (x, s) in a[t].iter_mut().zip(src) {
                        *x = x.clone() + s;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Finitely generated abelian group `Z^rank ⊕ ⊕ Z/d_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup<T> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
}

impl<T: IntScalar> AbelianGroup<T> {
    /// Cokernel of the relation matrix whose rows are relations among
    /// `ngens` generators.
    pub fn cokernel(relations: &[Vec<T>], ngens: usize) -> Self {
        let inv = smith_invariants(relations, ngens);
        let free_rank = ngens - inv.len();
        let torsion = inv.into_iter().filter(|d| !d.is_one()).collect();
        AbelianGroup { free_rank, torsion }
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }
}

impl<T: IntScalar + std::fmt::Display> std::fmt::Display for AbelianGroup<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
