//! Weyl groups of classical type as (signed) permutation groups, their
//! Coxeter complexes, and orbits of coordinate flags in `P^{m-1}` over F1.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

use super::TypedComplex;

/// Groups larger than this are not enumerated.
pub const MAX_GROUP_ORDER: u64 = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CoxeterType {
    A,
    B,
    C,
    D,
}

impl FromStr for CoxeterType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(CoxeterType::A),
            "B" | "b" => Ok(CoxeterType::B),
            "C" | "c" => Ok(CoxeterType::C),
            "D" | "d" => Ok(CoxeterType::D),
            _ => Err(Error::InvalidInput(format!("unknown Coxeter type {s:?}"))),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl CoxeterType {
    /// Number of coordinates of the projective space the group acts on.
    pub fn ambient_coordinates(self, n: usize) -> usize {
        match self {
            CoxeterType::A => n + 1,
            CoxeterType::B => 2 * n + 1,
            CoxeterType::C | CoxeterType::D => 2 * n,
        }
    }

    pub fn group_order(self, n: usize) -> u64 {
        let fact: u64 = (1..=n as u64).product();
        match self {
            CoxeterType::A => fact * (n as u64 + 1),
            CoxeterType::B | CoxeterType::C => fact << n,
            CoxeterType::D => fact << (n - 1),
        }
    }
}

/// `images[i]` is the signed image of `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignedPerm(pub Vec<i8>);

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm((1..=n as i8).collect())
    }

    pub fn apply(&self, x: i8) -> i8 {
        x.signum() * self.0[x.unsigned_abs() as usize - 1]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm(other.0.iter().map(|&x| self.apply(x)).collect())
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i8::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub ty: CoxeterType,
    pub rank: usize,
    pub generators: Vec<SignedPerm>,
    pub elements: Vec<SignedPerm>,
}

fn closure(generators: &[SignedPerm], degree: usize) -> Vec<SignedPerm> {
    let mut seen: HashMap<SignedPerm, ()> = HashMap::new();
    let id = SignedPerm::identity(degree);
    seen.insert(id.clone(), ());
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in generators {
            let h = out[i].compose(g);
            if seen.insert(h.clone(), ()).is_none() {
                out.push(h);
            }
        }
        i += 1;
    }
    out
}

impl WeylGroup {
    pub fn new(ty: CoxeterType, n: usize) -> Result<Self> {
        let min_rank = if ty == CoxeterType::D { 2 } else { 1 };
        if n < min_rank {
            return Err(Error::InvalidInput(format!("type {ty} needs rank at least {min_rank}")));
        }
        if n > 12 || ty.group_order(n) > MAX_GROUP_ORDER {
            return Err(Error::RankTooLarge(n));
        }
        let degree = if ty == CoxeterType::A { n + 1 } else { n };
        let swap = |i: usize| {
            let mut p = SignedPerm::identity(degree);
            p.0.swap(i, i + 1);
            p
        };
        let mut generators: Vec<SignedPerm> = (0..degree - 1).map(swap).collect();
        match ty {
            CoxeterType::A => {}
            CoxeterType::B | CoxeterType::C => {
                let mut p = SignedPerm::identity(n);
                p.0[n - 1] = -(n as i8);
                generators.push(p);
            }
            CoxeterType::D => {
                let mut p = SignedPerm::identity(n);
                p.0[n - 2] = -(n as i8);
                p.0[n - 1] = -(n as i8 - 1);
                generators.push(p);
            }
        }
        let elements = closure(&generators, degree);
        debug_assert_eq!(elements.len() as u64, ty.group_order(n));
        Ok(WeylGroup { ty, rank: n, generators, elements })
    }

    pub fn degree(&self) -> usize {
        self.generators[0].0.len()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The subgroup generated by the simple reflections in `subset`.
    pub fn parabolic(&self, subset: &[usize]) -> Vec<SignedPerm> {
        let gens: Vec<SignedPerm> = subset.iter().map(|&i| self.generators[i].clone()).collect();
        closure(&gens, self.degree())
    }

    /// The signed set whose stabilizer is the maximal parabolic subgroup
    /// omitting simple reflection `s`.
    fn type_set(&self, s: usize) -> Vec<i8> {
        let n = self.rank as i8;
        if self.ty == CoxeterType::D && s == self.rank - 2 {
            let mut v: Vec<i8> = (1..n).collect();
            v.push(-n);
            v
        } else {
            (1..=s as i8 + 1).collect()
        }
    }

    /// The permutation of `0..m` induced on projective coordinates, using
    /// the pairing `i ↔ m - 1 - i` in types B, C and D.
    pub fn coordinate_action(&self, w: &SignedPerm) -> Vec<usize> {
        let n = self.rank;
        let m = self.ty.ambient_coordinates(n);
        if self.ty == CoxeterType::A {
            return w.0.iter().map(|&x| x as usize - 1).collect();
        }
        let mirror = |c: usize| m - 1 - c;
        let mut out: Vec<usize> = (0..m).collect();
        for c in 0..n {
            let x = w.0[c];
            let img = x.unsigned_abs() as usize - 1;
            out[c] = if x > 0 { img } else { mirror(img) };
            out[mirror(c)] = mirror(out[c]);
        }
        out
    }
}

/// The Coxeter complex: vertices are cosets of maximal standard parabolic
/// subgroups, chambers are group elements.
#[derive(Clone, Debug)]
pub struct CoxeterComplex {
    pub group: WeylGroup,
    pub complex: TypedComplex,
}

fn set_label(mut v: Vec<i8>) -> String {
    v.sort_by_key(|x| (x.unsigned_abs(), *x));
    let parts: Vec<String> = v.iter().map(i8::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn coxeter_complex(ty: CoxeterType, n: usize) -> Result<CoxeterComplex> {
    let group = WeylGroup::new(ty, n)?;
    let index: HashMap<&SignedPerm, usize> = group.elements.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let order = group.order();
    let mut labels = Vec::new();
    let mut types = Vec::new();
    let mut coset_vertex = vec![vec![usize::MAX; order]; n];
    for s in 0..n {
        let others: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        let sub = group.parabolic(&others);
        let set = group.type_set(s);
        for (i, w) in group.elements.iter().enumerate() {
            if coset_vertex[s][i] != usize::MAX {
                continue;
            }
            let v = labels.len();
            labels.push(set_label(set.iter().map(|&x| w.apply(x)).collect()));
            types.push(s);
            for u in &sub {
                coset_vertex[s][index[&w.compose(u)]] = v;
            }
        }
    }
    let facets = (0..order).map(|i| (0..n).map(|s| coset_vertex[s][i]).collect()).collect();
    let complex = TypedComplex::new(labels, types, facets)?;
    Ok(CoxeterComplex { group, complex })
}

/// Subsets of coordinates, as bitmasks, forming the standard seed flag.
/// For type D with `oriflamme`, the flag stops two steps short of the top
/// and carries both maximal isotropic subspaces through it.
pub fn standard_seed(ty: CoxeterType, n: usize, oriflamme: bool) -> Vec<u64> {
    let prefix = |k: usize| (1u64 << k) - 1;
    if ty == CoxeterType::D && oriflamme && n >= 2 {
        let mut seed: Vec<u64> = (1..=n - 2).map(prefix).collect();
        seed.push(prefix(n));
        seed.push(prefix(n - 1) | 1 << n);
        seed
    } else {
        (1..=n).map(prefix).collect()
    }
}

/// The orbit of a seed simplex of `P^{m-1}` over F1 under a Weyl group,
/// with vertices typed by their position in the seed.
#[derive(Clone, Debug)]
pub struct OrbitComplex {
    pub group: WeylGroup,
    pub seed: Vec<u64>,
    /// Coordinate subset of every vertex.
    pub points: Vec<u64>,
    pub complex: TypedComplex,
}

fn point_label(mask: u64) -> String {
    let coords: Vec<String> = (0..64).filter(|b| mask >> b & 1 == 1).map(|b| (b + 1).to_string()).collect();
    format!("{{{}}}", coords.join(","))
}

fn act(perm: &[usize], mask: u64) -> u64 {
    perm.iter().enumerate().filter(|(c, _)| mask >> c & 1 == 1).map(|(_, &d)| 1u64 << d).sum()
}

fn check_seed(seed: &[u64], m: usize) -> Result<()> {
    let bad = |why: String| Err(Error::SeedNotSimplex(why));
    if seed.is_empty() {
        return bad("empty seed".into());
    }
    for &p in seed {
        if p == 0 || p >> m != 0 {
            return bad(format!("{} is not a point of P^{}", point_label(p), m - 1));
        }
    }
    let below = |a: u64, b: u64| a != b && a & b == a;
    let k = seed.len();
    for i in 0..k {
        for j in i + 1..k {
            // the two tops of an oriflamme are incomparable of equal size
            let twin_tops = j == k - 1
                && i == k - 2
                && !below(seed[j], seed[i])
                && seed[i] != seed[j]
                && seed[i].count_ones() == seed[j].count_ones();
            if !below(seed[i], seed[j]) && !twin_tops {
                return bad(format!("{} does not lie below {}", point_label(seed[i]), point_label(seed[j])));
            }
        }
    }
    Ok(())
}

pub fn weyl_orbit_complex(ty: CoxeterType, n: usize, seed: &[u64]) -> Result<OrbitComplex> {
    let group = WeylGroup::new(ty, n)?;
    check_seed(seed, ty.ambient_coordinates(n))?;
    let images: Vec<Vec<u64>> = group
        .elements
        .par_iter()
        .map(|w| {
            let perm = group.coordinate_action(w);
            seed.iter().map(|&p| act(&perm, p)).collect()
        })
        .collect();
    let mut ids: BTreeMap<u64, usize> = BTreeMap::new();
    let mut points = Vec::new();
    let mut types = Vec::new();
    let mut facets = Vec::with_capacity(images.len());
    for img in &images {
        let mut f = Vec::with_capacity(img.len());
        for (t, &p) in img.iter().enumerate() {
            let id = *ids.entry(p).or_insert_with(|| {
                points.push(p);
                types.push(t);
                points.len() - 1
            });
            if types[id] != t {
                return Err(Error::HypothesisViolated(format!(
                    "{} occurs in two positions of the seed orbit",
                    point_label(p)
                )));
            }
            f.push(id);
        }
        facets.push(f);
    }
    let labels = points.iter().map(|&p| point_label(p)).collect();
    let complex = TypedComplex::new(labels, types, facets)?;
    Ok(OrbitComplex { group, seed: seed.to_vec(), points, complex })
}

impl OrbitComplex {
    /// Every group element maps facets to facets preserving types, and the
    /// facets form a single orbit.
    pub fn action_is_simplicial_and_transitive(&self) -> bool {
        let ids: HashMap<u64, usize> = self.points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let facets: std::collections::HashSet<&Vec<usize>> = self.complex.facets.iter().collect();
        let seed_ids: Option<Vec<usize>> = self.seed.iter().map(|p| ids.get(p).copied()).collect();
        let Some(mut seed_facet) = seed_ids else { return false };
        seed_facet.sort_by_key(|&v| self.complex.types[v]);
        let mut orbit = std::collections::HashSet::new();
        for w in &self.group.elements {
            let perm = self.group.coordinate_action(w);
            let map = |v: usize| ids.get(&act(&perm, self.points[v])).copied();
            for f in &self.complex.facets {
                let Some(img) = f.iter().map(|&v| map(v)).collect::<Option<Vec<usize>>>() else { return false };
                if img.iter().zip(f).any(|(&a, &b)| self.complex.types[a] != self.complex.types[b]) {
                    return false;
                }
                if !facets.contains(&img) {
                    return false;
                }
            }
            if let Some(img) = seed_facet.iter().map(|&v| map(v)).collect::<Option<Vec<usize>>>() {
                orbit.insert(img);
            }
        }
        orbit.len() == facets.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{isomorphism, IsoOutcome};
    use CoxeterType::*;

    #[test]
    fn group_orders() {
        for (ty, n, order) in [(A, 2, 6), (A, 3, 24), (B, 2, 8), (C, 3, 48), (D, 3, 24), (D, 4, 192), (B, 4, 384)] {
            assert_eq!(WeylGroup::new(ty, n).unwrap().order(), order, "{ty}{n}");
        }
        assert_eq!(WeylGroup::new(A, 8).unwrap_err(), Error::RankTooLarge(8));
    }

    #[test]
    fn small_coxeter_complexes() {
        let a2 = coxeter_complex(A, 2).unwrap().complex;
        assert_eq!(a2.f_vector(), vec![6, 6]);
        assert_eq!(coxeter_complex(B, 2).unwrap().complex.chambers().len(), 8);
        assert_eq!(coxeter_complex(D, 3).unwrap().complex.chambers().len(), 24);
    }

    #[test]
    fn coxeter_complexes_are_thin_with_expected_chambers() {
        for ty in [A, B, C, D] {
            for n in 1..=4 {
                if ty == D && n < 2 {
                    continue;
                }
                let c = coxeter_complex(ty, n).unwrap();
                assert_eq!(c.complex.chambers().len() as u64, ty.group_order(n), "{ty}{n}");
                assert!(c.complex.is_thin(), "{ty}{n}");
                let labels: std::collections::HashSet<_> =
                    (0..c.complex.num_vertices()).map(|v| (c.complex.types[v], &c.complex.labels[v])).collect();
                assert_eq!(labels.len(), c.complex.num_vertices(), "vertex labels of {ty}{n} are distinct");
            }
        }
    }

    #[test]
    fn type_a_chamber_counts() {
        for n in 1..=5 {
            let fact: usize = (1..=n + 1).product();
            assert_eq!(coxeter_complex(A, n).unwrap().complex.chambers().len(), fact);
        }
    }

    #[test]
    fn b_and_c_complexes_coincide() {
        let b = coxeter_complex(B, 2).unwrap().complex;
        let c = coxeter_complex(C, 2).unwrap().complex;
        assert!(isomorphism(&b, &c, true).unwrap().is_witness());
    }

    #[test]
    fn orbits_match_coxeter_complexes() {
        for (ty, n) in [(A, 2), (A, 3), (B, 2), (B, 3), (C, 2), (C, 3), (D, 3)] {
            let orbit = weyl_orbit_complex(ty, n, &standard_seed(ty, n, true)).unwrap();
            assert!(orbit.action_is_simplicial_and_transitive(), "{ty}{n}");
            let abstract_complex = coxeter_complex(ty, n).unwrap().complex;
            assert!(isomorphism(&orbit.complex, &abstract_complex, true).unwrap().is_witness(), "{ty}{n}");
        }
    }

    #[test]
    fn d3_without_oriflamme_is_not_thin() {
        let orbit = weyl_orbit_complex(D, 3, &standard_seed(D, 3, false)).unwrap();
        assert!(orbit.action_is_simplicial_and_transitive());
        assert_eq!(orbit.complex.chambers().len(), 24);
        let counts: std::collections::BTreeSet<usize> = orbit.complex.panels().into_values().collect();
        assert_eq!(counts, [1, 2].into());
        assert!(!orbit.complex.is_thin() && !orbit.complex.is_thick());
        let d3 = coxeter_complex(D, 3).unwrap().complex;
        assert!(matches!(isomorphism(&orbit.complex, &d3, false).unwrap(), IsoOutcome::NotIsomorphic(_)));
    }

    #[test]
    fn b2_orbit_lives_in_p4() {
        let orbit = weyl_orbit_complex(B, 2, &standard_seed(B, 2, false)).unwrap();
        assert_eq!(orbit.complex.f_vector(), vec![8, 8]);
        // the middle coordinate is never used
        assert!(orbit.points.iter().all(|&p| p & 0b00100 == 0));
        assert!(orbit.complex.labels.contains(&"{1,2}".to_string()));
        assert!(orbit.complex.labels.contains(&"{4,5}".to_string()));
    }

    #[test]
    fn malformed_seeds() {
        assert!(matches!(weyl_orbit_complex(A, 2, &[]), Err(Error::SeedNotSimplex(_))));
        assert!(matches!(weyl_orbit_complex(A, 2, &[0b011, 0b001]), Err(Error::SeedNotSimplex(_))));
        assert!(matches!(weyl_orbit_complex(A, 2, &[0b1000]), Err(Error::SeedNotSimplex(_))));
        assert!(matches!(weyl_orbit_complex(A, 2, &[0b001, 0b010, 0b011]), Err(Error::SeedNotSimplex(_))));
    }
}
