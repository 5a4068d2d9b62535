//! Point counts over finite fields, counting polynomials, Euler
//! characteristics and the zeta function attached to a counting polynomial.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::blueprint::{Blueprint, CoeffSpec};
use crate::error::{Error, Result};
use crate::field::{is_prime_power, MAX_FIELD_ORDER};

/// Anything with a finite number of `F_q`-points.
pub trait PointCount {
    fn fq_points(&self, q: u32) -> Result<u64>;

    /// Degree bound used when none is given.
    fn default_degree_bound(&self) -> usize;
}

impl PointCount for Blueprint {
    fn fq_points(&self, q: u32) -> Result<u64> {
        self.count_points(q)
    }

    fn default_degree_bound(&self) -> usize {
        self.monoid().ngens()
    }
}

/// `N(q) = Σ a_i q^i` together with the samples that determined it and
/// the extra samples it was checked against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingPolynomial {
    pub coefficients: Vec<i64>,
    pub samples: Vec<(u32, u64)>,
    pub held_out: Vec<(u32, u64)>,
}

/// Coefficients (constant term first) of the interpolating polynomial
/// through `points`, in exact rational arithmetic.
pub fn interpolate<T>(points: &[(T, T)]) -> Vec<Ratio<T>>
where
    T: Integer + Signed + Clone,
{
    let n = points.len();
    let mut result = vec![Ratio::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial Π_{j≠i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![Ratio::from_integer(T::one())];
        let mut denom = T::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Ratio::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + c.clone();
                next[k] = next[k].clone() - c.clone() * Ratio::from_integer(xj.clone());
            }
            basis = next;
            denom = denom * (xi.clone() - xj.clone());
        }
        let scale = Ratio::new(yi.clone(), denom);
        for (k, c) in basis.into_iter().enumerate() {
            result[k] = result[k].clone() + c * scale.clone();
        }
    }
    result
}

/// Field orders usable as samples, smallest first.
pub fn sample_orders(count: usize) -> Result<Vec<u32>> {
    let orders: Vec<u32> = (2..=MAX_FIELD_ORDER).filter(|&q| is_prime_power(q)).take(count).collect();
    if orders.len() < count {
        return Err(Error::TooLarge(format!("{count} sample fields requested")));
    }
    Ok(orders)
}

impl CountingPolynomial {
    /// Fits a polynomial of degree at most `degree_bound` to the first
    /// `degree_bound + 1` samples and checks it on the rest.
    pub fn fit(samples: &[(u32, u64)], degree_bound: usize) -> Result<Self> {
        if samples.len() < degree_bound + 2 {
            return Err(Error::InvalidInput(format!(
                "{} samples cannot certify degree {degree_bound}",
                samples.len()
            )));
        }
        let (fit, rest) = samples.split_at(degree_bound + 1);
        let pts: Vec<(i128, i128)> = fit.iter().map(|&(q, n)| (q as i128, n as i128)).collect();
        let coeffs = interpolate(&pts);
        let mut coefficients = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if !c.is_integer() {
                return Err(Error::NotPolynomial(format!("non-integral coefficient {c}")));
            }
            coefficients.push(
                i64::try_from(c.to_integer()).map_err(|_| Error::NotPolynomial("coefficient overflow".into()))?,
            );
        }
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        let poly = CountingPolynomial { coefficients, samples: fit.to_vec(), held_out: rest.to_vec() };
        for &(q, n) in rest {
            if poly.eval(q as i64) != n as i128 {
                return Err(Error::NotPolynomial(format!(
                    "degree {degree_bound} fit predicts {} at q = {q}, counted {n}",
                    poly.eval(q as i64)
                )));
            }
        }
        Ok(poly)
    }

    pub fn eval(&self, q: i64) -> i128 {
        self.coefficients.iter().rev().fold(0i128, |acc, &c| acc * q as i128 + c as i128)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// `χ = N(1)`.
    pub fn euler_characteristic(&self) -> i128 {
        self.eval(1)
    }

    pub fn zeta(&self) -> ZetaFactored {
        ZetaFactored {
            factors: self
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| (i as i64, a))
                .collect(),
        }
    }
}

impl fmt::Display for CountingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            let mono = match i {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{i}"),
            };
            let body = match (mag, i) {
                (_, 0) => mag.to_string(),
                (1, _) => mono,
                _ => format!("{mag}{mono}"),
            };
            if first {
                write!(f, "{}{}", if c < 0 { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if c < 0 { "-" } else { "+" }, body)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Counts at the first `degree_bound + 2` sample orders and fits.
pub fn counting_polynomial(x: &(impl PointCount + Sync + ?Sized), degree_bound: Option<usize>) -> Result<CountingPolynomial> {
    let d = degree_bound.unwrap_or_else(|| x.default_degree_bound());
    let orders = sample_orders(d + 2)?;
    let samples = fq_samples(x, &orders)?;
    CountingPolynomial::fit(&samples, d)
}

/// Point counts at several orders, evaluated in parallel.
pub fn fq_samples(x: &(impl PointCount + Sync + ?Sized), orders: &[u32]) -> Result<Vec<(u32, u64)>> {
    use rayon::prelude::*;
    orders
        .par_iter()
        .map(|&q| Ok((q, x.fq_points(q)?)))
        .collect::<Result<Vec<_>>>()
}

/// `ζ(s) = Π (s - i)^{a_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaFactored {
    /// `(root, multiplicity)`, sorted by root.
    pub factors: Vec<(i64, i64)>,
}

impl fmt::Display for ZetaFactored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        if let [(root, 1)] = self.factors.as_slice() {
            return match root {
                0 => write!(f, "s"),
                r if *r > 0 => write!(f, "s - {r}"),
                r => write!(f, "s + {}", -r),
            };
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(root, a)| {
                let base = match root {
                    0 => "s".to_string(),
                    r if r > 0 => format!("(s - {r})"),
                    r => format!("(s + {})", -r),
                };
                if a == 1 {
                    base
                } else {
                    format!("{base}^{a}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Whether non-negative rational values for the generators define a
/// morphism into the semifield of non-negative rationals.
pub fn verify_point_over_nonnegative_rationals(b: &Blueprint, values: &[Ratio<i64>]) -> bool {
    let m = b.monoid();
    if values.len() != m.ngens() || values.iter().any(|v| v.is_negative()) {
        return false;
    }
    // only 0 and 1 have images in the non-negative rationals
    if !matches!(b.coefficients().spec, CoeffSpec::F1) {
        return false;
    }
    let eval_elem = |e: &crate::blueprint::Elem| -> Option<Ratio<i64>> {
        if e.is_zero() {
            return Some(Ratio::zero());
        }
        let mut v = Ratio::from_integer(1);
        for (i, &k) in e.exps.iter().enumerate() {
            if k < 0 && values[i].is_zero() {
                return None;
            }
            v *= num_traits::pow::Pow::pow(values[i], k);
        }
        Some(v)
    };
    if m.invertible().iter().zip(values).any(|(&inv, v)| inv && v.is_zero()) {
        return false;
    }
    for (d, _) in &m.identifications().generators {
        let e = crate::blueprint::Elem { coeff: 1, exps: d.iter().map(|&x| x as i32).collect() };
        if eval_elem(&e) != Some(Ratio::from_integer(1)) {
            return false;
        }
    }
    b.relations().iter().all(|r| {
        let side = |s: &crate::blueprint::FormalSum| -> Option<Ratio<i64>> {
            s.terms().iter().try_fold(Ratio::zero(), |acc, t| Some(acc + eval_elem(t)?))
        };
        matches!((side(&r.lhs), side(&r.rhs)), (Some(a), Some(b)) if a == b)
    })
}
