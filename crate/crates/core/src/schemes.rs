//! Graded blueprints and Proj, blue schemes glued from affine charts,
//! closed subschemes and products of finite spectra.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::blueprint::{
    for_each_point, Blueprint, BlueprintJson, Budget, CoeffIdx, Coefficients, Elem, FormalSum, Monoid, Morphism,
    MorphismVerdict, PointTarget, Relation,
};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poset::FinitePoset;
use crate::spectra::{SpecPoint, SpecSpace};

/// A monomial blueprint with a nonnegative degree per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBlueprint {
    pub blueprint: Blueprint,
    pub degrees: Vec<u32>,
}

fn term_degree(e: &Elem, degrees: &[u32]) -> i64 {
    e.exps.iter().zip(degrees).map(|(&k, &d)| k as i64 * d as i64).sum()
}

impl GradedBlueprint {
    /// Checks that every relation generator is homogeneous.
    pub fn new(blueprint: Blueprint, degrees: Vec<u32>) -> Result<Self> {
        let m = blueprint.monoid();
        if m.is_finite_table() || degrees.len() != m.ngens() {
            return Err(Error::InvalidInput(format!("{} degrees for {} generators", degrees.len(), m.ngens())));
        }
        for r in blueprint.relations() {
            let degs: BTreeSet<i64> = r
                .lhs
                .terms()
                .iter()
                .chain(r.rhs.terms())
                .filter(|t| !t.is_zero())
                .map(|t| term_degree(t, &degrees))
                .collect();
            if degs.len() > 1 {
                return Err(Error::InvalidInput(format!("relation {} is not homogeneous", r.render(m))));
            }
        }
        Ok(GradedBlueprint { blueprint, degrees })
    }

    /// Every generator in degree one.
    pub fn standard(blueprint: Blueprint) -> Result<Self> {
        let n = blueprint.monoid().ngens();
        Self::new(blueprint, vec![1; n])
    }

    pub fn positive_generators(&self) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&i| self.degrees[i] > 0).collect()
    }

    pub fn is_homogeneous(&self, s: &FormalSum) -> bool {
        let degs: BTreeSet<i64> =
            s.terms().iter().filter(|t| !t.is_zero()).map(|t| term_degree(t, &self.degrees)).collect();
        degs.len() <= 1
    }

    pub fn to_json(&self) -> String {
        GradedJson { blueprint: BlueprintJson::from_blueprint(&self.blueprint), degrees: self.degrees.clone() }.emit()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GradedJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(g.blueprint.to_blueprint()?, g.degrees)
    }
}

/// JSON form of a graded blueprint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedJson {
    pub blueprint: BlueprintJson,
    pub degrees: Vec<u32>,
}

impl GradedJson {
    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Homogeneous primes not containing every positive-degree generator,
/// ordered by inclusion.
pub fn proj(g: &GradedBlueprint) -> Result<SpecSpace> {
    let positive = g.positive_generators();
    if positive.is_empty() {
        return Err(Error::EmptyIrrelevantComplement);
    }
    // monomial primes are generated by homogeneous elements already
    let spec = g.blueprint.spec()?;
    let keep: Vec<usize> = (0..spec.len())
        .filter(|&i| !positive.iter().all(|p| spec.points[i].generators.contains(p)))
        .collect();
    Ok(restrict(&spec, &keep))
}

fn restrict(spec: &SpecSpace, keep: &[usize]) -> SpecSpace {
    SpecSpace {
        blueprint: spec.blueprint.clone(),
        points: keep.iter().map(|&i| spec.points[i].clone()).collect(),
        order: spec.order.induced(keep),
        complete: spec.complete,
    }
}

/// Exponents of the image of `e`, with negative powers taken formally.
fn laurent_image(f: &Morphism, e: &Elem) -> Vec<i32> {
    let mut out = vec![0i32; f.target.monoid().ngens()];
    for (k, &x) in e.exps.iter().enumerate() {
        for (o, &y) in out.iter_mut().zip(&f.gen_images[k].exps) {
            *o += x * y;
        }
    }
    out
}

/// The ambient blueprint with further relations, e.g. ones holding in an
/// integral model.
pub fn closed_subscheme(ambient: &Blueprint, relations: &[Relation]) -> Result<Blueprint> {
    let m = ambient.monoid().clone();
    let rels = ambient.relations().iter().chain(relations).cloned().collect();
    Blueprint::new(ambient.coefficients().clone(), m, rels).map(|b| b.with_budget(ambient.budget()))
}

/// Graded version of [`closed_subscheme`]; relations must be homogeneous.
pub fn closed_subscheme_graded(ambient: &GradedBlueprint, relations: &[Relation]) -> Result<GradedBlueprint> {
    GradedBlueprint::new(closed_subscheme(&ambient.blueprint, relations)?, ambient.degrees.clone())
}

/// Indices into `ambient` of the points of a closed subscheme, matched by
/// generating set; `None` if some point has no counterpart.
pub fn embed_points(sub: &SpecSpace, ambient: &SpecSpace) -> Option<Vec<usize>> {
    sub.points
        .iter()
        .map(|p| {
            ambient
                .points
                .iter()
                .position(|q| q.generators == p.generators && q.coefficients == p.coefficients)
        })
        .collect()
}

/// An affine chart: a blueprint together with the ambient generator each
/// chart generator stands for.
#[derive(Clone, Debug)]
pub struct Chart {
    pub blueprint: Blueprint,
    pub ambient: Vec<usize>,
    /// The ambient generator set to one on this chart.
    pub denominator: Option<usize>,
}

/// An identification of two charts along a common principal open.
#[derive(Clone, Debug)]
pub struct Gluing {
    pub from: usize,
    pub to: usize,
    pub morphism: Morphism,
}

/// A blue scheme given by charts and gluing isomorphisms.
#[derive(Clone, Debug)]
pub struct BlueScheme {
    pub charts: Vec<Chart>,
    pub gluings: Vec<Gluing>,
    /// The ambient graded blueprint, for projective schemes.
    pub graded: Option<GradedBlueprint>,
}

fn ratio_name(m: &Monoid, j: usize, i: usize) -> String {
    format!("{}/{}", m.generators()[j], m.generators()[i])
}

/// Chart generator names and ambient indices for `D+(x_i)`.
fn chart_layout(g: &GradedBlueprint, i: usize) -> Vec<(String, usize)> {
    let m = g.blueprint.monoid();
    (0..m.ngens())
        .filter(|&j| j != i)
        .map(|j| if g.degrees[j] > 0 { (ratio_name(m, j, i), j) } else { (m.generators()[j].clone(), j) })
        .collect()
}

fn dehomogenize(e: &Elem, layout: &[(String, usize)]) -> Elem {
    Elem { coeff: e.coeff, exps: layout.iter().map(|&(_, j)| e.exps[j]).collect() }
}

fn chart_blueprint(g: &GradedBlueprint, i: usize, invert: Option<usize>) -> Result<Blueprint> {
    let b = &g.blueprint;
    let layout = chart_layout(g, i);
    let names: Vec<String> = layout.iter().map(|(n, _)| n.clone()).collect();
    let inv = layout.iter().map(|&(_, j)| Some(j) == invert || b.monoid().invertible()[j]).collect();
    let monoid = Monoid::new(b.monoid().coeffs_arc().clone(), names, inv, vec![])?;
    let rels = b
        .relations()
        .iter()
        .map(|r| {
            let side = |s: &FormalSum| FormalSum::new(s.terms().iter().map(|t| dehomogenize(t, &layout)).collect());
            Relation::new(side(&r.lhs), side(&r.rhs))
        })
        .collect();
    Blueprint::new(b.coefficients().clone(), monoid, rels).map(|c| c.with_budget(b.budget()))
}

impl BlueScheme {
    pub fn affine(b: &Blueprint) -> BlueScheme {
        let n = b.monoid().ngens();
        BlueScheme {
            charts: vec![Chart { blueprint: b.clone(), ambient: (0..n).collect(), denominator: None }],
            gluings: vec![],
            graded: None,
        }
    }

    /// Standard charts `D+(x_i)` of a graded blueprint whose positive
    /// degrees are all one.
    pub fn proj(g: &GradedBlueprint) -> Result<BlueScheme> {
        let positive = g.positive_generators();
        if positive.is_empty() {
            return Err(Error::EmptyIrrelevantComplement);
        }
        if positive.iter().any(|&i| g.degrees[i] != 1) {
            return Err(Error::Unsupported("charts of generators of degree above one".into()));
        }
        let m = g.blueprint.monoid();
        if !m.identifications().is_empty() {
            return Err(Error::Unsupported("charts of monoids with identifications".into()));
        }
        let mut charts = Vec::new();
        for &i in &positive {
            let layout = chart_layout(g, i);
            charts.push(Chart {
                blueprint: chart_blueprint(g, i, None)?,
                ambient: layout.iter().map(|&(_, j)| j).collect(),
                denominator: Some(i),
            });
        }
        let mut gluings = Vec::new();
        for (a, &i) in positive.iter().enumerate() {
            for (b, &j) in positive.iter().enumerate() {
                if a == b {
                    continue;
                }
                // D+(x_i x_j) seen from chart i, then from chart j
                let source = chart_blueprint(g, i, Some(j))?;
                let target = chart_blueprint(g, j, Some(i))?;
                let images: Vec<String> = chart_layout(g, i)
                    .iter()
                    .map(|&(_, k)| {
                        if g.degrees[k] == 0 {
                            m.generators()[k].clone()
                        } else if k == j {
                            format!("{}^-1", ratio_name(m, i, j))
                        } else {
                            format!("{}*{}^-1", ratio_name(m, k, j), ratio_name(m, i, j))
                        }
                    })
                    .collect();
                let refs: Vec<&str> = images.iter().map(String::as_str).collect();
                gluings.push(Gluing { from: a, to: b, morphism: Morphism::by_names(&source, &target, &refs)? });
            }
        }
        Ok(BlueScheme { charts, gluings, graded: Some(g.clone()) })
    }

    /// `P^n` over the given coefficients, with coordinates `x0..xn`.
    pub fn projective_space(coefficients: Coefficients, n: usize) -> Result<BlueScheme> {
        BlueScheme::proj(&projective_coordinate_ring(coefficients, n)?)
    }

    fn ambient_laurent(&self, chart: usize, e: &Elem) -> Vec<i64> {
        let c = &self.charts[chart];
        let n = self.ambient_generators();
        let mut v = vec![0i64; n];
        for (k, &x) in e.exps.iter().enumerate() {
            let j = c.ambient[k];
            v[j] += x as i64;
            if let (Some(d), Some(g)) = (c.denominator, &self.graded) {
                if g.degrees[j] > 0 {
                    v[d] -= x as i64;
                }
            }
        }
        v
    }

    fn ambient_generators(&self) -> usize {
        match &self.graded {
            Some(g) => g.degrees.len(),
            None => self.charts[0].ambient.len(),
        }
    }

    /// Every gluing is a morphism, inverse to the reverse gluing, and the
    /// gluings agree on triple overlaps.
    pub fn check_gluings(&self, budget: Budget) -> Result<bool> {
        let find = |a: usize, b: usize| self.gluings.iter().find(|g| g.from == a && g.to == b);
        for g in &self.gluings {
            if g.morphism.is_morphism(budget)? != MorphismVerdict::Proved {
                return Ok(false);
            }
            let Some(back) = find(g.to, g.from) else { return Ok(false) };
            for (k, img) in g.morphism.gen_images.iter().enumerate() {
                let Some(round) = back.morphism.image(img) else { return Ok(false) };
                if round != g.morphism.source.monoid().gen(k) {
                    return Ok(false);
                }
            }
            // a chart generator and its image name the same ambient ratio
            for (k, img) in g.morphism.gen_images.iter().enumerate() {
                let src = g.morphism.source.monoid().gen(k);
                if self.ambient_laurent(g.from, &src) != self.ambient_laurent(g.to, img) {
                    return Ok(false);
                }
            }
        }
        for a in 0..self.charts.len() {
            for b in 0..self.charts.len() {
                for c in 0..self.charts.len() {
                    if a == b || b == c || a == c {
                        continue;
                    }
                    let (Some(ab), Some(bc), Some(ac)) = (find(a, b), find(b, c), find(a, c)) else {
                        return Ok(false);
                    };
                    for (k, img) in ab.morphism.gen_images.iter().enumerate() {
                        if laurent_image(&bc.morphism, img) != ac.morphism.gen_images[k].exps {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// The point set as the union of chart spectra, identified through the
    /// ambient generators; the order is inclusion of generating sets.
    pub fn points(&self) -> Result<SpecSpace> {
        let mut keys: BTreeSet<(usize, Vec<CoeffIdx>, Vec<usize>)> = BTreeSet::new();
        let mut complete = true;
        for c in &self.charts {
            let s = c.blueprint.spec()?;
            complete &= s.complete;
            for p in &s.points {
                let mut gens: Vec<usize> = p.generators.iter().map(|&k| c.ambient[k]).collect();
                gens.sort();
                keys.insert((gens.len() + p.coefficients.len(), p.coefficients.clone(), gens));
            }
        }
        let ambient = match &self.graded {
            Some(g) => g.blueprint.clone(),
            None => self.charts[0].blueprint.clone(),
        };
        let m = ambient.monoid();
        let budget = ambient.budget();
        let points = keys
            .into_iter()
            .map(|(_, coeffs, gens)| {
                let mut seeds: Vec<Elem> = coeffs.iter().map(|&x| m.constant(x)).collect();
                seeds.extend(gens.iter().map(|&i| m.gen(i)));
                let ideal = ambient.additive_closure(&seeds, budget)?;
                let mut names: Vec<String> = coeffs.iter().map(|&x| m.coeffs().name(x).to_string()).collect();
                names.extend(gens.iter().map(|&i| m.generators()[i].clone()));
                let label = if names.is_empty() { "(0)".to_string() } else { format!("({})", names.join(", ")) };
                Ok(SpecPoint { ideal, generators: gens, coefficients: coeffs, label })
            })
            .collect::<Result<Vec<_>>>()?;
        let order = FinitePoset::from_fn(points.len(), |i, j| {
            points[i].generators.iter().all(|g| points[j].generators.contains(g))
                && points[i].coefficients.iter().all(|c| points[j].coefficients.contains(c))
        });
        Ok(SpecSpace { blueprint: ambient, points, order, complete })
    }

    /// `F_q`-points as the union of chart points modulo the gluing, listed
    /// by canonical ambient coordinates (first nonzero projective
    /// coordinate scaled to one).
    pub fn fq_points(&self, q: u32) -> Result<Vec<FqPoint>> {
        let target = PointTarget::field(q)?;
        let PointTarget::Field(field) = &target else { unreachable!("field target") };
        let n = self.ambient_generators();
        let mut seen: BTreeSet<FqPoint> = BTreeSet::new();
        for c in &self.charts {
            let mut err = None;
            for_each_point(&c.blueprint, &target, None, |p| {
                let mut coords = vec![0 as FieldElem; n];
                for (k, &j) in c.ambient.iter().enumerate() {
                    coords[j] = p.values[k];
                }
                if let (Some(d), Some(g)) = (c.denominator, &self.graded) {
                    coords[d] = 1;
                    let lead = g.positive_generators().into_iter().find(|&j| coords[j] != 0);
                    let Some(lead) = lead else {
                        err = Some(Error::InvalidInput("chart point with vanishing coordinates".into()));
                        return false;
                    };
                    let inv = field.inv(coords[lead]).expect("nonzero");
                    for j in g.positive_generators() {
                        coords[j] = field.mul(coords[j], inv);
                    }
                }
                seen.insert((p.coeffs.clone(), coords));
                true
            })?;
            if let Some(e) = err {
                return Err(e);
            }
        }
        Ok(seen.into_iter().collect())
    }

    pub fn count_fq_points(&self, q: u32) -> Result<u64> {
        Ok(self.fq_points(q)?.len() as u64)
    }
}

impl crate::counting::PointCount for BlueScheme {
    fn fq_points(&self, q: u32) -> Result<u64> {
        self.count_fq_points(q)
    }

    fn default_degree_bound(&self) -> usize {
        self.ambient_generators()
    }
}

/// `C[x0..xn]` with the standard grading.
pub fn projective_coordinate_ring(coefficients: Coefficients, n: usize) -> Result<GradedBlueprint> {
    let names: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    GradedBlueprint::standard(Blueprint::free(coefficients, &refs, &[])?)
}

/// Whether a pair of residue fields admits a common field, or `None` when
/// undecided.
pub type Compatibility<'a> = &'a dyn Fn(&Blueprint, &Blueprint) -> Option<bool>;

/// Admissible pairs of points with the componentwise order.
#[derive(Clone, Debug)]
pub struct ProductSpace {
    pub points: Vec<(usize, usize)>,
    pub order: FinitePoset,
    /// Pairs left out because admissibility could not be decided.
    pub unresolved: Vec<(usize, usize)>,
}

/// Relation-free residue fields always embed into a common field; other
/// pairs are decided by `hook` or reported as unresolved.
pub fn product(x: &SpecSpace, y: &SpecSpace, hook: Option<Compatibility<'_>>) -> Result<ProductSpace> {
    let rx = (0..x.len()).map(|i| x.residue_field(i)).collect::<Result<Vec<_>>>()?;
    let ry = (0..y.len()).map(|j| y.residue_field(j)).collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    let mut unresolved = Vec::new();
    for i in 0..x.len() {
        for j in 0..y.len() {
            let verdict = if rx[i].is_pure_monoid() && ry[j].is_pure_monoid() {
                Some(true)
            } else {
                hook.and_then(|h| h(&rx[i], &ry[j]))
            };
            match verdict {
                Some(true) => points.push((i, j)),
                Some(false) => {}
                None => unresolved.push((i, j)),
            }
        }
    }
    let order = FinitePoset::from_fn(points.len(), |a, b| {
        x.order.leq(points[a].0, points[b].0) && y.order.leq(points[a].1, points[b].1)
    });
    Ok(ProductSpace { points, order, unresolved })
}

impl ProductSpace {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Both projections are order preserving, hence continuous.
    pub fn projections_continuous(&self, x: &SpecSpace, y: &SpecSpace) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                !self.order.leq(a, b)
                    || (x.order.leq(self.points[a].0, self.points[b].0)
                        && y.order.leq(self.points[a].1, self.points[b].1))
            })
        })
    }
}

/// An `F_q`-point: coefficient images and ambient coordinates.
pub type FqPoint = (Vec<FieldElem>, Vec<FieldElem>);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line_and_plane() {
        let p1 = proj(&projective_coordinate_ring(Coefficients::f1(), 1).unwrap()).unwrap();
        assert_eq!(p1.len(), 3);
        assert_eq!(p1.closed_points().len(), 2);
        let p2 = proj(&projective_coordinate_ring(Coefficients::f1(), 2).unwrap()).unwrap();
        assert_eq!(p2.len(), 7);
    }

    #[test]
    fn charts_glue_to_proj() {
        let g = projective_coordinate_ring(Coefficients::f1(), 2).unwrap();
        let x = BlueScheme::proj(&g).unwrap();
        assert_eq!(x.charts.len(), 3);
        assert!(x.check_gluings(Budget::default()).unwrap());
        let glued = x.points().unwrap();
        let direct = proj(&g).unwrap();
        assert_eq!(glued.labels(), direct.labels());
        assert!(glued.order.is_isomorphic(&direct.order));
    }

    #[test]
    fn point_counts_of_schemes() {
        let p1 = BlueScheme::projective_space(Coefficients::f1(), 1).unwrap();
        assert_eq!(p1.count_fq_points(3).unwrap(), 4);
        let p2 = BlueScheme::projective_space(Coefficients::f1(), 2).unwrap();
        assert_eq!(p2.count_fq_points(2).unwrap(), 7);
        let sl2 = Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap();
        assert_eq!(BlueScheme::affine(&sl2).count_fq_points(2).unwrap(), 6);
    }

    #[test]
    fn irrelevant_complement_must_be_nonempty() {
        let b = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let g = GradedBlueprint::new(b, vec![0]).unwrap();
        assert_eq!(proj(&g).unwrap_err(), Error::EmptyIrrelevantComplement);
    }

    #[test]
    fn inhomogeneous_relations_are_rejected() {
        let b = Blueprint::parse(Coefficients::f1(), &["S", "T"], &[], &["S*T = S + 1"]).unwrap();
        assert!(GradedBlueprint::standard(b).is_err());
    }

    #[test]
    fn closed_subscheme_of_affine_space() {
        let a4 = Blueprint::free(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[]).unwrap();
        let rel = a4.relation("T1*T4 = T2*T3 + 1").unwrap();
        let sl2 = closed_subscheme(&a4, &[rel]).unwrap();
        let (s, amb) = (sl2.spec().unwrap(), a4.spec().unwrap());
        assert_eq!((s.len(), amb.len()), (7, 16));
        let emb = embed_points(&s, &amb).unwrap();
        for i in 0..s.len() {
            for j in 0..s.len() {
                assert_eq!(s.order.leq(i, j), amb.order.leq(emb[i], emb[j]));
            }
        }
        assert_eq!(closed_subscheme(&a4, &[]).unwrap(), a4);
    }

    #[test]
    fn products_of_affine_spaces() {
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap().spec().unwrap();
        let a2 = Blueprint::free(Coefficients::f1(), &["S", "T"], &[]).unwrap().spec().unwrap();
        let p = product(&a1, &a1, None).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.order.is_isomorphic(&a2.order));
        let p = product(&a1, &a2, None).unwrap();
        assert!(p.order.is_isomorphic(&FinitePoset::boolean_lattice(3)));
        assert!(p.projections_continuous(&a1, &a2));
        let pt = Blueprint::free(Coefficients::f1(), &[], &[]).unwrap().spec().unwrap();
        assert!(product(&pt, &a2, None).unwrap().order.is_isomorphic(&a2.order));
    }

    #[test]
    fn graded_json_round_trip() {
        let g = projective_coordinate_ring(Coefficients::f1(), 1).unwrap();
        let s = g.to_json();
        assert_eq!(GradedBlueprint::from_json(&s).unwrap(), g);
    }
}
