//! Named constructors for standard blueprints and graded blueprints, with
//! the facts each one is expected to satisfy.
//!
//! References have the form `catalog:<name>[:params]`, e.g. `catalog:sl2`,
//! `catalog:affine:3` (also `catalog:A3`), `catalog:gr:2,4`.

use crate::blueprint::{Blueprint, CoeffTable, Coefficients, FormalSum, Monoid, Relation};
use crate::counting::{counting_polynomial, CountingPolynomial};
use crate::error::{Error, Result};
use crate::schemes::{proj, projective_coordinate_ring, BlueScheme, GradedBlueprint};
use crate::spectra::SpecSpace;

/// Largest `d` accepted for `Gr(e, d)`.
pub const MAX_GRASSMANNIAN_DIM: usize = 6;

/// An affine or a projective catalog object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogObject {
    Affine(Blueprint),
    Projective(GradedBlueprint),
}

impl CatalogObject {
    pub fn blueprint(&self) -> &Blueprint {
        match self {
            CatalogObject::Affine(b) => b,
            CatalogObject::Projective(g) => &g.blueprint,
        }
    }

    /// `Spec B`, or `Proj` for graded objects.
    pub fn space(&self) -> Result<SpecSpace> {
        match self {
            CatalogObject::Affine(b) => b.spec(),
            CatalogObject::Projective(g) => proj(g),
        }
    }

    pub fn scheme(&self) -> Result<BlueScheme> {
        match self {
            CatalogObject::Affine(b) => Ok(BlueScheme::affine(b)),
            CatalogObject::Projective(g) => BlueScheme::proj(g),
        }
    }

    pub fn count_points(&self, q: u32) -> Result<u64> {
        match self {
            CatalogObject::Affine(b) => b.count_points(q),
            CatalogObject::Projective(_) => self.scheme()?.count_fq_points(q),
        }
    }

    pub fn counting_polynomial(&self, degree_bound: Option<usize>) -> Result<CountingPolynomial> {
        match self {
            CatalogObject::Affine(b) => counting_polynomial(b, degree_bound),
            CatalogObject::Projective(_) => counting_polynomial(&self.scheme()?, degree_bound),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            CatalogObject::Affine(b) => b.to_json(),
            CatalogObject::Projective(g) => g.to_json(),
        }
    }
}

/// Checkable facts about a catalog object; `None` means not recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpectedFacts {
    pub points: Option<usize>,
    pub closed_points: Option<usize>,
    /// Constant term first.
    pub counting_polynomial: Option<Vec<i64>>,
    pub weyl_extension: Option<usize>,
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
    pub build: fn(&[usize]) -> Result<CatalogObject>,
    pub facts: fn(&[usize]) -> ExpectedFacts,
    /// Parameters used when none are given.
    pub default_params: &'static [usize],
}

pub fn f1() -> Blueprint {
    Blueprint::free(Coefficients::f1(), &[], &[]).expect("valid")
}

pub fn f1_squared() -> Blueprint {
    Blueprint::free(Coefficients::f1_squared(), &[], &[]).expect("valid")
}

/// `{0} ∪ μ_n`, with the sum over every nontrivial subgroup related to 0.
pub fn f1n(n: usize) -> Result<Blueprint> {
    if n == 0 || n > 64 {
        return Err(Error::InvalidInput(format!("F1^n needs 1 <= n <= 64, got {n}")));
    }
    Blueprint::free(Coefficients::f1n(n), &[], &[])
}

pub fn b1() -> Blueprint {
    Blueprint::free(Coefficients::b1(), &[], &[]).expect("valid")
}

fn names(prefix: &str, n: usize, from: usize) -> Vec<String> {
    (from..from + n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn affine_space(n: usize) -> Result<Blueprint> {
    let g = names("T", n, 1);
    let refs: Vec<&str> = g.iter().map(String::as_str).collect();
    Blueprint::free(Coefficients::f1(), &refs, &[])
}

pub fn torus(n: usize) -> Result<Blueprint> {
    let g = names("T", n, 1);
    let refs: Vec<&str> = g.iter().map(String::as_str).collect();
    Blueprint::free(Coefficients::f1(), &refs, &refs)
}

pub fn projective_space(n: usize) -> Result<GradedBlueprint> {
    projective_coordinate_ring(Coefficients::f1(), n)
}

pub fn sl2() -> Blueprint {
    Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).expect("valid")
}

/// `SL2` generated by its matrix minors `a, b, c, d`.
pub fn sl2_minors() -> Blueprint {
    Blueprint::parse(Coefficients::f1(), &["a", "b", "c", "d"], &[], &["a*d = b*c + 1"]).expect("valid")
}

/// Subsets of `{1..d}` of size `e`, lexicographic.
fn subsets(d: usize, e: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, d: usize, e: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == e {
            out.push(cur.clone());
            return;
        }
        for i in start..=d {
            cur.push(i);
            rec(i + 1, d, e, cur, out);
            cur.pop();
        }
    }
    rec(1, d, e, &mut cur, &mut out);
    out
}

fn coordinate_name(set: &[usize]) -> String {
    let digits: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    format!("x{}", digits.join(""))
}

/// Sign of the permutation sorting `v`, and the sorted vector; `None` if
/// `v` has a repeated entry.
fn sort_sign(v: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut w = v.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some((sign, w))
}

/// Quadratic Plücker relations `Σ_k (-1)^k x_{I+j_k} x_{J-j_k} = 0` for
/// `|I| = e-1`, `|J| = e+1`, split by sign into two-sided relations.
pub fn grassmannian(e: usize, d: usize) -> Result<GradedBlueprint> {
    if e > d || d > MAX_GRASSMANNIAN_DIM {
        return Err(Error::TooLarge(format!("Gr({e},{d}) outside 0 <= e <= d <= {MAX_GRASSMANNIAN_DIM}")));
    }
    let coords = subsets(d, e);
    let gens: Vec<String> = coords.iter().map(|s| coordinate_name(s)).collect();
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    let ambient = Blueprint::free(Coefficients::f1(), &refs, &[])?;
    let m = ambient.monoid();
    let mut rels: Vec<Relation> = Vec::new();
    if e >= 1 && e < d {
        for small in subsets(d, e - 1) {
            for big in subsets(d, e + 1) {
                let mut terms: std::collections::BTreeMap<(usize, usize), i64> = Default::default();
                for (k, &j) in big.iter().enumerate() {
                    let mut left = small.clone();
                    left.push(j);
                    let Some((s, left)) = sort_sign(&left) else { continue };
                    let right: Vec<usize> = big.iter().copied().filter(|&x| x != j).collect();
                    let sign = if k % 2 == 0 { s } else { -s };
                    let a = coords.iter().position(|c| *c == left).expect("coordinate");
                    let b = coords.iter().position(|c| *c == right).expect("coordinate");
                    *terms.entry((a.min(b), a.max(b))).or_insert(0) += sign;
                }
                let mut pos = Vec::new();
                let mut neg = Vec::new();
                for (&(a, b), &c) in &terms {
                    let mono = m.mul(&m.gen(a), &m.gen(b));
                    for _ in 0..c.unsigned_abs() {
                        if c > 0 {
                            pos.push(mono.clone());
                        } else {
                            neg.push(mono.clone());
                        }
                    }
                }
                // two-term relations are the symmetry x_I x_J = x_J x_I
                if pos.len() + neg.len() > 2 {
                    let r = Relation::new(
                        FormalSum::new(pos),
                        FormalSum::new(neg),
                    );
                    rels.push(orient(r));
                }
            }
        }
    }
    let b = Blueprint::new(ambient.coefficients().clone(), m.clone(), rels)?;
    GradedBlueprint::standard(b)
}

/// Puts the side with more terms on the left, so `x12*x34 + x14*x23 =
/// x13*x24` reads in the usual way.
fn orient(r: Relation) -> Relation {
    if r.lhs.len() < r.rhs.len() {
        Relation::new(r.rhs, r.lhs)
    } else {
        r
    }
}

/// `{0, e, 1}` with `e² = e`.
pub fn idempotent() -> Blueprint {
    let table = CoeffTable::new(
        vec!["0".into(), "1".into(), "e".into()],
        vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]],
    )
    .expect("valid table");
    Blueprint::new(Coefficients::table(table.clone(), vec![]), Monoid::finite(table.into()), vec![])
        .expect("valid")
}

/// `F2^• × F3^•` with the additive relations of each factor, written
/// `0, 1 = (1,1), a = (1,0), b = (0,1), c = (0,2), d = (1,2)`.
pub fn two_fields() -> Blueprint {
    let names: Vec<String> = ["0", "1", "a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let mul = vec![
        vec![0, 0, 0, 0, 0, 0],
        vec![0, 1, 2, 3, 4, 5],
        vec![0, 2, 2, 0, 0, 2],
        vec![0, 3, 0, 3, 4, 4],
        vec![0, 4, 0, 4, 3, 3],
        vec![0, 5, 2, 4, 3, 1],
    ];
    let table = CoeffTable::new(names, mul).expect("valid table");
    let rels = vec![(vec![2, 2], vec![]), (vec![3, 3], vec![4]), (vec![3, 4], vec![])];
    Blueprint::new(Coefficients::table(table.clone(), rels), Monoid::finite(table.into()), vec![])
        .expect("valid")
}

fn arg(p: &[usize], i: usize) -> usize {
    p.get(i).copied().unwrap_or(0)
}

fn affine(b: Result<Blueprint>) -> Result<CatalogObject> {
    b.map(CatalogObject::Affine)
}

fn poly_geometric(n: usize) -> Vec<i64> {
    vec![1; n + 1]
}

fn binomial_powers(n: usize) -> Vec<i64> {
    // (q - 1)^n
    let mut c = vec![1i64];
    for _ in 0..n {
        let mut next = vec![0i64; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= x;
        }
        c = next;
    }
    c
}

/// Gaussian binomial `[d choose e]_q`, constant term first.
pub fn gaussian_binomial(d: usize, e: usize) -> Vec<i64> {
    if e > d {
        return vec![];
    }
    // rows of the q-Pascal triangle: [n, k] = [n-1, k-1] + q^k [n-1, k]
    let mut row: Vec<Vec<i64>> = vec![vec![1]];
    for n in 1..=d {
        let mut next = vec![vec![1i64]];
        for k in 1..=n {
            let a = if k - 1 < row.len() { row[k - 1].clone() } else { vec![] };
            let b = if k < row.len() { row[k].clone() } else { vec![] };
            let mut s = vec![0i64; a.len().max(b.len() + k)];
            for (i, &x) in a.iter().enumerate() {
                s[i] += x;
            }
            for (i, &x) in b.iter().enumerate() {
                s[i + k] += x;
            }
            while s.last() == Some(&0) {
                s.pop();
            }
            next.push(s);
        }
        row = next;
    }
    row[e].clone()
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "f1",
            params: "",
            summary: "the field with one element {0, 1}",
            build: |_| affine(Ok(f1())),
            facts: |_| ExpectedFacts {
                points: Some(1),
                closed_points: Some(1),
                counting_polynomial: Some(vec![1]),
                weyl_extension: Some(1),
            },
            default_params: &[],
        },
        CatalogEntry {
            name: "f1sq",
            params: "",
            summary: "{0, 1, -1} with 1 + (-1) = 0",
            build: |_| affine(Ok(f1_squared())),
            facts: |_| ExpectedFacts {
                points: Some(1),
                closed_points: Some(1),
                counting_polynomial: Some(vec![1]),
                weyl_extension: Some(1),
            },
            default_params: &[],
        },
        CatalogEntry {
            name: "f1n",
            params: "n",
            summary: "{0} and the n-th roots of unity with subgroup sums related to 0",
            build: |p| affine(f1n(arg(p, 0))),
            facts: |_| ExpectedFacts { points: Some(1), closed_points: Some(1), ..Default::default() },
            default_params: &[3],
        },
        CatalogEntry {
            name: "b1",
            params: "",
            summary: "the Boolean semifield {0, 1} with 1 + 1 = 1",
            build: |_| affine(Ok(b1())),
            facts: |_| ExpectedFacts {
                points: Some(1),
                closed_points: Some(1),
                counting_polynomial: Some(vec![]),
                weyl_extension: None,
            },
            default_params: &[],
        },
        CatalogEntry {
            name: "affine",
            params: "n",
            summary: "affine n-space F1[T1..Tn]",
            build: |p| affine(affine_space(arg(p, 0))),
            facts: |p| {
                let n = arg(p, 0);
                let mut c = vec![0; n + 1];
                c[n] = 1;
                ExpectedFacts {
                    points: Some(1 << n),
                    closed_points: Some(1),
                    counting_polynomial: Some(c),
                    weyl_extension: Some(1),
                }
            },
            default_params: &[1],
        },
        CatalogEntry {
            name: "torus",
            params: "n",
            summary: "the split torus F1[T1^±1..Tn^±1]",
            build: |p| affine(torus(arg(p, 0))),
            facts: |p| ExpectedFacts {
                points: Some(1),
                closed_points: Some(1),
                counting_polynomial: Some(binomial_powers(arg(p, 0))),
                weyl_extension: Some(1),
            },
            default_params: &[1],
        },
        CatalogEntry {
            name: "proj",
            params: "n",
            summary: "projective n-space Proj F1[x0..xn]",
            build: |p| projective_space(arg(p, 0)).map(CatalogObject::Projective),
            facts: |p| {
                let n = arg(p, 0);
                ExpectedFacts {
                    points: Some((1 << (n + 1)) - 1),
                    closed_points: Some(n + 1),
                    counting_polynomial: Some(poly_geometric(n)),
                    weyl_extension: None,
                }
            },
            default_params: &[1],
        },
        CatalogEntry {
            name: "sl2",
            params: "",
            summary: "SL2 over F1: T1*T4 = T2*T3 + 1",
            build: |_| affine(Ok(sl2())),
            facts: |_| ExpectedFacts {
                points: Some(7),
                closed_points: Some(2),
                counting_polynomial: Some(vec![0, -1, 0, 1]),
                weyl_extension: Some(2),
            },
            default_params: &[],
        },
        CatalogEntry {
            name: "sl2minors",
            params: "",
            summary: "SL2 generated by its minors: a*d = b*c + 1",
            build: |_| affine(Ok(sl2_minors())),
            facts: |_| ExpectedFacts {
                points: Some(7),
                closed_points: Some(2),
                counting_polynomial: Some(vec![0, -1, 0, 1]),
                weyl_extension: Some(2),
            },
            default_params: &[],
        },
        CatalogEntry {
            name: "gr",
            params: "e,d",
            summary: "Grassmannian Gr(e,d) with sign-split Plücker relations",
            build: |p| grassmannian(arg(p, 0), arg(p, 1)).map(CatalogObject::Projective),
            facts: |p| {
                let (e, d) = (arg(p, 0), arg(p, 1));
                let binom = gaussian_binomial(d, e).iter().sum::<i64>() as usize;
                ExpectedFacts {
                    points: ((e, d) == (2, 4)).then_some(36),
                    closed_points: Some(binom),
                    counting_polynomial: Some(gaussian_binomial(d, e)),
                    weyl_extension: None,
                }
            },
            default_params: &[2, 4],
        },
        CatalogEntry {
            name: "idempotent",
            params: "",
            summary: "{0, e, 1} with e^2 = e",
            build: |_| affine(Ok(idempotent())),
            facts: |_| ExpectedFacts { points: Some(2), closed_points: Some(1), ..Default::default() },
            default_params: &[],
        },
        CatalogEntry {
            name: "twofields",
            params: "",
            summary: "F2 x F3 as a monoid with the additive relations of each factor",
            build: |_| affine(Ok(two_fields())),
            facts: |_| ExpectedFacts { points: Some(3), closed_points: Some(1), ..Default::default() },
            default_params: &[],
        },
    ]
}

/// Splits `A3`, `P2` and `Gr2,4` shorthands into a name and parameters.
fn shorthand(s: &str) -> Option<(&'static str, &str)> {
    let pick = |prefix: &str, name: &'static str| {
        s.strip_prefix(prefix).filter(|r| r.chars().next().is_some_and(|c| c.is_ascii_digit())).map(|r| (name, r))
    };
    pick("A", "affine").or_else(|| pick("P", "proj")).or_else(|| pick("Gr", "gr")).or_else(|| pick("G", "torus"))
}

fn parse_params(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad catalog parameter {x:?}"))))
        .collect()
}

/// Resolves `catalog:<name>[:params]` (the prefix is optional).
pub fn lookup(reference: &str) -> Result<(CatalogObject, ExpectedFacts)> {
    let body = reference.strip_prefix("catalog:").unwrap_or(reference);
    let (name, params) = match body.split_once(':') {
        Some((n, p)) => (n, p),
        None => match shorthand(body) {
            Some((n, p)) => (n, p),
            None => (body, ""),
        },
    };
    let entry = entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown catalog entry {name:?}")))?;
    let mut p = parse_params(params)?;
    if p.is_empty() {
        p = entry.default_params.to_vec();
    }
    let needed = if entry.params.is_empty() { 0 } else { entry.params.split(',').count() };
    if p.len() != needed {
        return Err(Error::InvalidInput(format!("{name} takes parameters [{}]", entry.params)));
    }
    Ok(((entry.build)(&p)?, (entry.facts)(&p)))
}
