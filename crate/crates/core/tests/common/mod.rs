#![allow(dead_code)]

use blueforge::blueprint::{for_each_point, Point, PointTarget};
use blueforge::catalog;
use blueforge::quiver::{IntegralRep, Quiver};
use blueforge::{Blueprint, Elem, FormalSum, Relation};
use rand::seq::SliceRandom;
use rand::Rng;

/// Affine catalog blueprints and the underlying blueprints of graded ones.
pub fn catalog_blueprints() -> Vec<(String, Blueprint)> {
    let mut refs: Vec<String> = catalog::entries().iter().map(|e| format!("catalog:{}", e.name)).collect();
    refs.extend(["catalog:affine:2", "catalog:torus:2", "catalog:f1n:4", "catalog:proj:2"].map(String::from));
    refs.into_iter().map(|r| (r.clone(), catalog::lookup(&r).unwrap().0.blueprint().clone())).collect()
}

/// Every morphism into `F_q` for each listed `q`.
pub fn fq_points(b: &Blueprint, orders: &[u32]) -> Vec<(PointTarget, Vec<Point>)> {
    orders
        .iter()
        .map(|&q| {
            let target = PointTarget::field(q).unwrap();
            let mut points = Vec::new();
            for_each_point(b, &target, None, |p| {
                points.push(p.clone());
                true
            })
            .unwrap();
            (target, points)
        })
        .collect()
}

pub fn random_monomial(b: &Blueprint, rng: &mut impl Rng) -> Elem {
    let m = b.monoid();
    let nonzero: Vec<_> = m.coeffs().nonzero().collect();
    let mut e = m.constant(*nonzero.choose(rng).unwrap());
    for i in 0..m.ngens() {
        let lo = if m.invertible()[i] { -1 } else { 0 };
        let k: i32 = rng.gen_range(lo..=1);
        let g = if k < 0 { m.inverse(&m.gen(i)).unwrap() } else { m.pow(&m.gen(i), k as u32) };
        e = m.mul(&e, &g);
    }
    e
}

fn random_sum(b: &Blueprint, rng: &mut impl Rng, max: usize) -> FormalSum {
    let n = rng.gen_range(0..=max);
    FormalSum::new((0..n).map(|_| random_monomial(b, rng)).collect())
}

/// A relation built from the generators by scaling, adding a common sum
/// and summing two instances; or, one time in four, two unrelated sums.
pub fn random_relation(b: &Blueprint, rng: &mut impl Rng) -> Relation {
    let m = b.monoid();
    let rels = b.all_relations();
    if rels.is_empty() || rng.gen_ratio(1, 4) {
        return Relation::new(random_sum(b, rng, 2), random_sum(b, rng, 2));
    }
    let mut lhs = random_sum(b, rng, 1);
    let mut rhs = lhs.clone();
    for _ in 0..rng.gen_range(1..=2) {
        let r = rels.choose(rng).unwrap();
        let k = random_monomial(b, rng);
        let (l, r) = if rng.gen_bool(0.5) { (&r.lhs, &r.rhs) } else { (&r.rhs, &r.lhs) };
        lhs = lhs.plus(&l.scale(m, &k));
        rhs = rhs.plus(&r.scale(m, &k));
    }
    Relation::new(lhs, rhs)
}

/// A random tree quiver on 1 to 4 vertices with one common dimension
/// `d ≤ 4` and a dimension vector whose Grassmannian product has dimension
/// between 1 and `max_degree`.
pub fn random_tree(rng: &mut impl Rng, max_degree: usize) -> (Quiver, Vec<usize>, Vec<usize>) {
    loop {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=4);
        let arrows: Vec<(usize, usize)> = (1..n)
            .map(|v| {
                let u = rng.gen_range(0..v);
                if rng.gen_bool(0.5) {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect();
        let e: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=d)).collect();
        if !(1..=max_degree).contains(&e.iter().map(|&a| a * (d - a)).sum::<usize>()) {
            continue;
        }
        let quiver = Quiver::new((1..=n).map(|i| i.to_string()).collect(), arrows).unwrap();
        return (quiver, vec![d; n], e);
    }
}

/// Identity matrices on every arrow.
pub fn random_identity_tree(rng: &mut impl Rng) -> (IntegralRep, Vec<usize>) {
    let (quiver, dims, e) = random_tree(rng, 6);
    let d = dims[0];
    (IntegralRep::identity(quiver, d).unwrap(), e)
}

/// Invertible diagonal matrices with entries in {±1, ±2}.
pub fn random_diagonal_tree(rng: &mut impl Rng) -> (IntegralRep, Vec<usize>) {
    let (quiver, dims, e) = random_tree(rng, 4);
    let d = dims[0];
    let matrices = (0..quiver.arrows.len())
        .map(|_| {
            (0..d)
                .map(|i| (0..d).map(|j| if i == j { *[1, -1, 2, -2].choose(rng).unwrap() } else { 0 }).collect())
                .collect()
        })
        .collect();
    (IntegralRep::new(quiver, dims, matrices).unwrap(), e)
}
