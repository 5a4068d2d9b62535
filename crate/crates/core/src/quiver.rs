//! Quiver representations with a chosen basis, their F1-points and the
//! number of subrepresentations of a given dimension vector over `F_q`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{fq_samples, CountingPolynomial, PointCount};
use crate::error::{Error, Result};
use crate::field::{is_prime_power, FieldElem, FiniteField, MAX_FIELD_ORDER};
use crate::linear::{apply, encode, subspaces, Subspace};

/// Largest vertex dimension accepted by the `F_q` count.
pub const MAX_QUIVER_DIM: usize = 6;
const MAX_TUPLES: u128 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    /// `(source, target)` per arrow.
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= vertices.len() || t >= vertices.len()) {
            return Err(Error::InvalidInput(format!("arrow {s} -> {t} leaves the vertex set")));
        }
        Ok(Quiver { vertices, arrows })
    }

    /// `1 → 2 → … → n`.
    pub fn linear(n: usize) -> Self {
        Quiver {
            vertices: (1..=n).map(|i| i.to_string()).collect(),
            arrows: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The underlying undirected graph has no cycle, loops and parallel
    /// arrows included.
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(s, t) in &self.arrows {
            let (a, b) = (root(&mut parent, s), root(&mut parent, t));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

/// A representation with integer matrices in a fixed basis. The matrix of
/// an arrow `s → t` has `dims[t]` rows and `dims[s]` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralRep {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
    pub matrices: Vec<Vec<Vec<i64>>>,
    pub basis: Vec<Vec<String>>,
}

impl IntegralRep {
    pub fn new(quiver: Quiver, dims: Vec<usize>, matrices: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        if dims.len() != quiver.len() {
            return Err(Error::InvalidInput(format!("{} dimensions for {} vertices", dims.len(), quiver.len())));
        }
        if matrices.len() != quiver.arrows.len() {
            return Err(Error::InvalidInput(format!(
                "{} matrices for {} arrows",
                matrices.len(),
                quiver.arrows.len()
            )));
        }
        for (a, (&(s, t), m)) in quiver.arrows.iter().zip(&matrices).enumerate() {
            if m.len() != dims[t] || m.iter().any(|row| row.len() != dims[s]) {
                return Err(Error::InvalidInput(format!("matrix of arrow {a} is not {} x {}", dims[t], dims[s])));
            }
        }
        let basis = (0..quiver.len())
            .map(|i| (1..=dims[i]).map(|k| format!("{}.{k}", quiver.vertices[i])).collect())
            .collect();
        Ok(IntegralRep { quiver, dims, matrices, basis })
    }

    /// Identity matrices along every arrow.
    pub fn identity(quiver: Quiver, d: usize) -> Result<Self> {
        let id: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
        let n = quiver.arrows.len();
        let dims = vec![d; quiver.len()];
        IntegralRep::new(quiver, dims, vec![id; n])
    }

    pub fn from_json(text: &str) -> Result<(Self, Option<Vec<usize>>)> {
        let j: RepJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let quiver = Quiver::new(j.vertices, j.arrows.into_iter().map(|[s, t]| (s, t)).collect())?;
        let mut rep = IntegralRep::new(quiver, j.dims, j.matrices)?;
        if let Some(basis) = j.basis {
            if basis.len() != rep.dims.len() || basis.iter().zip(&rep.dims).any(|(b, &d)| b.len() != d) {
                return Err(Error::InvalidInput("basis labels do not match the dimensions".into()));
            }
            rep.basis = basis;
        }
        if let Some(e) = &j.e {
            rep.check_dim_vector(e)?;
        }
        Ok((rep, j.e))
    }

    pub fn to_json(&self, e: Option<&[usize]>) -> serde_json::Value {
        serde_json::to_value(RepJson {
            vertices: self.quiver.vertices.clone(),
            arrows: self.quiver.arrows.iter().map(|&(s, t)| [s, t]).collect(),
            dims: self.dims.clone(),
            matrices: self.matrices.clone(),
            basis: Some(self.basis.clone()),
            e: e.map(<[usize]>::to_vec),
        })
        .expect("representation serializes")
    }

    pub fn check_dim_vector(&self, e: &[usize]) -> Result<()> {
        if e.len() != self.dims.len() || e.iter().zip(&self.dims).any(|(a, b)| a > b) {
            return Err(Error::InvalidInput(format!("dimension vector {e:?} does not fit {:?}", self.dims)));
        }
        Ok(())
    }

    /// Column `k` of the matrix of arrow `a`: `Some(None)` if zero,
    /// `Some(Some(j))` if it is the `j`-th basis vector, `None` otherwise.
    fn column_shape(&self, a: usize, k: usize) -> Option<Option<usize>> {
        let col: Vec<i64> = self.matrices[a].iter().map(|row| row[k]).collect();
        match col.iter().filter(|&&x| x != 0).count() {
            0 => Some(None),
            1 => col.iter().position(|&x| x == 1).map(Some),
            _ => None,
        }
    }

    /// Rows where column `k` of arrow `a` is nonzero.
    fn column_support(&self, a: usize, k: usize) -> Vec<usize> {
        self.matrices[a].iter().enumerate().filter(|(_, row)| row[k] != 0).map(|(j, _)| j).collect()
    }

    /// Families of basis subsets, `|S_i| = e_i`, such that every chosen
    /// basis vector maps to zero or to a chosen basis vector.
    pub fn naive_f1_points(&self, e: &[usize]) -> Result<Vec<Vec<Vec<usize>>>> {
        self.check_dim_vector(e)?;
        let shapes: Vec<Vec<Option<Option<usize>>>> = (0..self.matrices.len())
            .map(|a| {
                let s = self.quiver.arrows[a].0;
                (0..self.dims[s]).map(|k| self.column_shape(a, k)).collect()
            })
            .collect();
        self.subset_families(e, &|a, k, target: &[usize]| match shapes[a][k] {
            None => false,
            Some(None) => true,
            Some(Some(j)) => target.contains(&j),
        })
    }

    /// Coordinate families closed under the supports of all columns.
    fn support_closed_families(&self, e: &[usize]) -> Result<Vec<Vec<Vec<usize>>>> {
        let supports: Vec<Vec<Vec<usize>>> = (0..self.matrices.len())
            .map(|a| (0..self.dims[self.quiver.arrows[a].0]).map(|k| self.column_support(a, k)).collect())
            .collect();
        self.subset_families(e, &|a, k, target: &[usize]| supports[a][k].iter().all(|j| target.contains(j)))
    }

    fn subset_families(
        &self,
        e: &[usize],
        admissible: &dyn Fn(usize, usize, &[usize]) -> bool,
    ) -> Result<Vec<Vec<Vec<usize>>>> {
        let choices: Vec<Vec<Vec<usize>>> = (0..self.quiver.len())
            .map(|i| {
                let mut out = Vec::new();
                crate::complexes::for_each_subset(&(0..self.dims[i]).collect::<Vec<_>>(), e[i], &mut |s| {
                    out.push(s.to_vec())
                });
                out
            })
            .collect();
        let total: u128 = choices.iter().map(|c| c.len() as u128).product();
        if total > MAX_TUPLES {
            return Err(Error::TooLarge(format!("{total} coordinate families")));
        }
        let mut out = Vec::new();
        let mut cur: Vec<Vec<usize>> = Vec::new();
        fn rec(
            rep: &IntegralRep,
            choices: &[Vec<Vec<usize>>],
            admissible: &dyn Fn(usize, usize, &[usize]) -> bool,
            cur: &mut Vec<Vec<usize>>,
            out: &mut Vec<Vec<Vec<usize>>>,
        ) {
            let v = cur.len();
            if v == choices.len() {
                out.push(cur.clone());
                return;
            }
            for c in &choices[v] {
                cur.push(c.clone());
                let ok = rep.quiver.arrows.iter().enumerate().all(|(a, &(s, t))| {
                    s.max(t) != v || cur[s].iter().all(|&k| admissible(a, k, &cur[t]))
                });
                if ok {
                    rec(rep, choices, admissible, cur, out);
                }
                cur.pop();
            }
        }
        rec(self, &choices, admissible, &mut cur, &mut out);
        Ok(out)
    }

    /// Subrepresentations of dimension vector `e` over `F_q`.
    pub fn subrep_count(&self, e: &[usize], q: u32) -> Result<u64> {
        self.check_dim_vector(e)?;
        if let Some(&d) = self.dims.iter().find(|&&d| d > MAX_QUIVER_DIM) {
            return Err(Error::TooLarge(format!("vertex dimension {d} exceeds {MAX_QUIVER_DIM}")));
        }
        let field = FiniteField::get(q)?;
        let total: u128 = (0..self.dims.len())
            .map(|i| crate::linear::count_subspaces(e[i], self.dims[i], q as u64) as u128)
            .product();
        if total > MAX_TUPLES {
            return Err(Error::TooLarge(format!("{total} tuples of subspaces over F_{q}")));
        }
        let p = field.characteristic() as i64;
        let mats: Vec<Vec<Vec<FieldElem>>> = self
            .matrices
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(|&x| x.rem_euclid(p) as FieldElem).collect()).collect())
            .collect();
        let spaces: Vec<Vec<Subspace>> = (0..self.dims.len()).map(|i| subspaces(e[i], self.dims[i], &field)).collect();
        // images of the echelon rows, per arrow and source subspace
        let images: Vec<Vec<Vec<u32>>> = self
            .quiver
            .arrows
            .iter()
            .enumerate()
            .map(|(a, &(s, _))| {
                spaces[s]
                    .iter()
                    .map(|sp| sp.rows.iter().map(|r| encode(&apply(&mats[a], r, &field), q)).collect())
                    .collect()
            })
            .collect();
        let arrows = &self.quiver.arrows;
        let ok = |a: usize, choice: &[usize]| {
            let (s, t) = arrows[a];
            images[a][choice[s]].iter().all(|&c| spaces[t][choice[t]].contains_code(c))
        };
        fn rec(v: usize, choice: &mut Vec<usize>, spaces: &[Vec<Subspace>], check: &dyn Fn(usize, &[usize]) -> bool) -> u64 {
            if v == spaces.len() {
                return 1;
            }
            let mut n = 0;
            for i in 0..spaces[v].len() {
                choice.push(i);
                if check(v, choice) {
                    n += rec(v + 1, choice, spaces, check);
                }
                choice.pop();
            }
            n
        }
        let check = |v: usize, choice: &[usize]| {
            arrows.iter().enumerate().all(|(a, &(s, t))| s.max(t) != v || ok(a, choice))
        };
        if spaces.is_empty() {
            return Ok(1);
        }
        Ok((0..spaces[0].len())
            .into_par_iter()
            .map(|i| {
                let mut choice = vec![i];
                if check(0, &choice) {
                    rec(1, &mut choice, &spaces, &check)
                } else {
                    0
                }
            })
            .sum())
    }

    /// `Σ e_i (d_i - e_i)`, the dimension of the ambient product of
    /// Grassmannians.
    pub fn degree_bound(&self, e: &[usize]) -> usize {
        e.iter().zip(&self.dims).map(|(&a, &d)| a * (d - a)).sum()
    }

    /// Field orders whose characteristic divides no nonzero matrix entry.
    pub fn good_orders(&self, count: usize) -> Result<Vec<u32>> {
        let entries: Vec<i64> = self.matrices.iter().flatten().flatten().copied().filter(|&x| x != 0).collect();
        let orders: Vec<u32> = (2..=MAX_FIELD_ORDER)
            .filter(|&q| is_prime_power(q))
            .filter(|&q| {
                let p = FiniteField::get(q).map(|f| f.characteristic() as i64).unwrap_or(1);
                entries.iter().all(|x| x % p != 0)
            })
            .take(count)
            .collect();
        if orders.len() < count {
            return Err(Error::TooLarge(format!("{count} sample fields of good characteristic")));
        }
        Ok(orders)
    }

    /// The counting polynomial of the subrepresentations of dimension
    /// vector `e`, sampled in good characteristic.
    pub fn counting_polynomial(&self, e: &[usize]) -> Result<CountingPolynomial> {
        self.check_dim_vector(e)?;
        let g = SubrepGrassmannian { rep: self, e: e.to_vec() };
        let d = g.default_degree_bound();
        let samples = fq_samples(&g, &self.good_orders(d + 2)?)?;
        CountingPolynomial::fit(&samples, d)
    }

    /// Euler characteristic as the value at `q = 1` of the interpolated
    /// point count.
    pub fn euler_characteristic(&self, e: &[usize]) -> Result<i128> {
        Ok(self.counting_polynomial(e)?.euler_characteristic())
    }

    /// Coordinate families closed under the arrows, for a forest quiver
    /// with invertible diagonal matrices.
    pub fn weyl_count(&self, e: &[usize]) -> Result<u64> {
        if !self.quiver.is_forest() {
            return Err(Error::HypothesisViolated("the underlying graph is not a tree".into()));
        }
        for (a, m) in self.matrices.iter().enumerate() {
            let (s, t) = self.quiver.arrows[a];
            let diagonal = (0..m.len()).all(|i| (0..m[i].len()).all(|j| (m[i][j] != 0) == (i == j)));
            if self.dims[s] != self.dims[t] || !diagonal {
                return Err(Error::HypothesisViolated(format!("matrix of arrow {a} is not invertible diagonal")));
            }
        }
        Ok(self.support_closed_families(e)?.len() as u64)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepJson {
    vertices: Vec<String>,
    arrows: Vec<[usize; 2]>,
    dims: Vec<usize>,
    matrices: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    e: Option<Vec<usize>>,
}

/// The quiver Grassmannian of subrepresentations with dimension vector `e`.
pub struct SubrepGrassmannian<'a> {
    pub rep: &'a IntegralRep,
    pub e: Vec<usize>,
}

impl PointCount for SubrepGrassmannian<'_> {
    fn fq_points(&self, q: u32) -> Result<u64> {
        self.rep.subrep_count(&self.e, q)
    }

    fn default_degree_bound(&self) -> usize {
        self.rep.degree_bound(&self.e)
    }
}

/// A representation over F1: pointed sets `{0, 1, …, n_i}` with base point
/// `0`, and base-point preserving maps injective away from the base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F1Rep {
    pub quiver: Quiver,
    pub sizes: Vec<usize>,
    /// `maps[a][x]` is the image of `x`; `maps[a][0] = 0`.
    pub maps: Vec<Vec<usize>>,
}

impl F1Rep {
    pub fn new(quiver: Quiver, sizes: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self> {
        if sizes.len() != quiver.len() || maps.len() != quiver.arrows.len() {
            return Err(Error::InvalidInput("sizes or maps do not match the quiver".into()));
        }
        for (a, (&(s, t), m)) in quiver.arrows.iter().zip(&maps).enumerate() {
            if m.len() != sizes[s] + 1 || m[0] != 0 || m.iter().any(|&y| y > sizes[t]) {
                return Err(Error::InvalidInput(format!("map of arrow {a} is not a pointed map")));
            }
            let mut hit = vec![false; sizes[t] + 1];
            for &y in &m[1..] {
                if y != 0 && std::mem::replace(&mut hit[y], true) {
                    return Err(Error::HypothesisViolated(format!(
                        "arrow {a} sends two elements to {y}"
                    )));
                }
            }
        }
        Ok(F1Rep { quiver, sizes, maps })
    }

    /// The 0/1 monomial matrices on the non-base elements.
    pub fn to_integral(&self) -> IntegralRep {
        let matrices = self
            .quiver
            .arrows
            .iter()
            .zip(&self.maps)
            .map(|(&(s, t), m)| {
                let mut mat = vec![vec![0i64; self.sizes[s]]; self.sizes[t]];
                for (x, &y) in m.iter().enumerate().skip(1) {
                    if y != 0 {
                        mat[y - 1][x - 1] = 1;
                    }
                }
                mat
            })
            .collect();
        IntegralRep::new(self.quiver.clone(), self.sizes.clone(), matrices).expect("shapes follow the sizes")
    }
}
