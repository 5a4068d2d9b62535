//! Blueprint morphisms given on generators.

use serde::Serialize;

use super::coeff::{ONE, ZERO};
use super::ideal::Ideal;
use super::monoid::Elem;
use super::points::{Point, PointTarget};
use super::sum::{Budget, FormalSum, Relation};
use super::Blueprint;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MorphismVerdict {
    Proved,
    Unknown,
    /// A generator relation whose image fails; carries its rendering.
    RefutedOnGenerator(String),
}

/// A morphism determined by the images of the coefficients and of the
/// generators.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: Blueprint,
    pub target: Blueprint,
    pub coeff_images: Vec<Elem>,
    pub gen_images: Vec<Elem>,
}

impl Morphism {
    /// Builds a morphism from term strings in the target; coefficients are
    /// sent to the coefficient of the same name.
    pub fn by_names(source: &Blueprint, target: &Blueprint, gen_images: &[&str]) -> Result<Self> {
        let sm = source.monoid();
        if gen_images.len() != sm.ngens() {
            return Err(Error::InvalidInput("one image per generator required".into()));
        }
        let coeff_images = sm
            .coeffs()
            .names()
            .iter()
            .map(|n| target.elem(n))
            .collect::<Result<Vec<_>>>()?;
        let gen_images = gen_images.iter().map(|s| target.elem(s)).collect::<Result<Vec<_>>>()?;
        Ok(Morphism { source: source.clone(), target: target.clone(), coeff_images, gen_images })
    }

    /// Image of a source element; `None` if a negative power hits a non-unit.
    pub fn image(&self, e: &Elem) -> Option<Elem> {
        let tm = self.target.monoid();
        let mut acc = self.coeff_images[e.coeff as usize].clone();
        for (i, &k) in e.exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let base = if k < 0 { tm.inverse(&self.gen_images[i])? } else { self.gen_images[i].clone() };
            acc = tm.mul(&acc, &tm.pow(&base, k.unsigned_abs()));
        }
        Some(acc)
    }

    pub fn image_sum(&self, s: &FormalSum) -> Option<FormalSum> {
        let terms = s.terms().iter().map(|t| self.image(t)).collect::<Option<Vec<_>>>()?;
        Some(FormalSum::new(terms))
    }

    pub fn is_morphism(&self, budget: Budget) -> Result<MorphismVerdict> {
        let sm = self.source.monoid();
        let tm = self.target.monoid();
        let c = sm.coeffs();
        let f = &self.coeff_images;
        if f.len() != c.len() || self.gen_images.len() != sm.ngens() {
            return Err(Error::InvalidInput("images do not cover the generating set".into()));
        }
        if !f[ZERO as usize].is_zero() || f[ONE as usize] != tm.one() {
            return Ok(MorphismVerdict::RefutedOnGenerator("0 -> 0 and 1 -> 1".into()));
        }
        for a in c.all() {
            for b in c.all() {
                if tm.mul(&f[a as usize], &f[b as usize]) != f[c.mul(a, b) as usize] {
                    return Ok(MorphismVerdict::RefutedOnGenerator(format!(
                        "multiplicativity on {}*{}",
                        c.name(a),
                        c.name(b)
                    )));
                }
            }
        }
        for (i, g) in self.gen_images.iter().enumerate() {
            if sm.invertible()[i] && !tm.is_unit(g) {
                return Ok(MorphismVerdict::RefutedOnGenerator(format!(
                    "{} is invertible but its image is not",
                    sm.generators()[i]
                )));
            }
        }
        for (d, chi) in &sm.identifications().generators {
            let e = Elem { coeff: ONE, exps: d.iter().map(|&x| x as i32).collect() };
            if self.image(&e) != Some(f[*chi as usize].clone()) {
                return Ok(MorphismVerdict::RefutedOnGenerator("monoid identification".into()));
            }
        }
        let mut verdict = MorphismVerdict::Proved;
        for r in self.source.all_relations() {
            let (Some(l), Some(rr)) = (self.image_sum(&r.lhs), self.image_sum(&r.rhs)) else {
                return Err(Error::InvalidInput("image of a relation term undefined".into()));
            };
            let img = Relation::new(l, rr);
            if !self.target.derive(&img, budget)?.is_proved() {
                verdict = MorphismVerdict::Unknown;
            }
        }
        Ok(verdict)
    }

    /// Preimage of an ideal of the target (an ideal of the source).
    pub fn preimage(&self, q: &Ideal) -> Result<Ideal> {
        let sm = self.source.monoid();
        let tm = self.target.monoid();
        if let Some(carrier) = self.source.carrier() {
            let members: Vec<Elem> = carrier
                .into_iter()
                .filter(|e| !e.is_zero() && q.contains(tm, &self.image(e).expect("finite carrier")))
                .collect();
            return Ok(Ideal { generators: members.clone(), members, saturation: q.saturation });
        }
        let mut members: Vec<Elem> = sm
            .coeffs()
            .nonzero()
            .map(|c| sm.constant(c))
            .filter(|e| q.contains(tm, &self.image(e).expect("constants have images")))
            .collect();
        for i in 0..sm.ngens() {
            let g = sm.gen(i);
            if self.image(&g).is_some_and(|x| q.contains(tm, &x)) {
                members.push(g);
            }
        }
        members.sort();
        Ok(Ideal { generators: members.clone(), members, saturation: q.saturation })
    }
}

impl Blueprint {
    /// Checks that a point into a finite target is a morphism, naming the
    /// first generator relation that fails.
    pub fn check_point(&self, target: &PointTarget, p: &Point) -> MorphismVerdict {
        let m = self.monoid();
        let c = m.coeffs();
        if p.coeffs.len() != c.len() || p.values.len() != m.ngens() {
            return MorphismVerdict::RefutedOnGenerator("wrong number of images".into());
        }
        if p.coeffs[0] != 0 || p.coeffs[1] != 1 {
            return MorphismVerdict::RefutedOnGenerator("0 -> 0 and 1 -> 1".into());
        }
        for a in c.all() {
            for b in c.all() {
                if target.mul(p.coeffs[a as usize], p.coeffs[b as usize]) != p.coeffs[c.mul(a, b) as usize] {
                    return MorphismVerdict::RefutedOnGenerator("coefficient multiplicativity".into());
                }
            }
        }
        for (i, &v) in p.values.iter().enumerate() {
            if m.invertible()[i] && v == 0 {
                return MorphismVerdict::RefutedOnGenerator(format!("{} must be nonzero", m.generators()[i]));
            }
        }
        for (d, chi) in &m.identifications().generators {
            let e = Elem { coeff: ONE, exps: d.iter().map(|&x| x as i32).collect() };
            if p.eval(target, &e) != Some(p.coeffs[*chi as usize]) {
                return MorphismVerdict::RefutedOnGenerator("monoid identification".into());
            }
        }
        for r in self.all_relations() {
            if !p.satisfies(target, &r) {
                return MorphismVerdict::RefutedOnGenerator(r.render(m));
            }
        }
        MorphismVerdict::Proved
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blueprint::Coefficients;

    fn sl2() -> Blueprint {
        Blueprint::parse(Coefficients::f1(), &["T1", "T2", "T3", "T4"], &[], &["T1*T4 = T2*T3 + 1"]).unwrap()
    }

    #[test]
    fn identity_and_collapse() {
        let b = sl2();
        let id = Morphism::by_names(&b, &b, &["T1", "T2", "T3", "T4"]).unwrap();
        assert_eq!(id.is_morphism(Budget::default()).unwrap(), MorphismVerdict::Proved);
        let a1 = Blueprint::free(Coefficients::f1(), &["T"], &[]).unwrap();
        let f1 = Blueprint::free(Coefficients::f1(), &[], &[]).unwrap();
        let kill = Morphism::by_names(&a1, &f1, &["0"]).unwrap();
        assert_eq!(kill.is_morphism(Budget::default()).unwrap(), MorphismVerdict::Proved);
    }

    #[test]
    fn points_into_f5() {
        let b = sl2();
        let t = PointTarget::field(5).unwrap();
        let good = Point { coeffs: vec![0, 1], values: vec![1, 1, 1, 2] };
        assert_eq!(b.check_point(&t, &good), MorphismVerdict::Proved);
        let bad = Point { coeffs: vec![0, 1], values: vec![1, 1, 1, 1] };
        assert!(matches!(b.check_point(&t, &bad), MorphismVerdict::RefutedOnGenerator(_)));
    }
}
