//! The spherical building of type `A_n` over `F_q`: flags of proper nonzero
//! subspaces of `F_q^{n+1}`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::linear::{subspaces, Subspace};

use super::TypedComplex;

const MAX_CHAMBERS: u64 = 200_000;

#[derive(Clone, Debug)]
pub struct Building {
    pub q: u32,
    pub rank: usize,
    pub subspaces: Vec<Subspace>,
    pub complex: TypedComplex,
}

/// `[n+1]_q! = Π_{k=1}^{n+1} (1 + q + … + q^{k-1})`.
pub fn q_factorial(k: usize, q: u64) -> u64 {
    (1..=k as u32).map(|i| (0..i).map(|j| q.pow(j)).sum::<u64>()).product()
}

pub fn building_type_a(n: usize, q: u32) -> Result<Building> {
    if n == 0 {
        return Err(Error::InvalidInput("rank must be positive".into()));
    }
    let field: Arc<FiniteField> = FiniteField::get(q)?;
    if n > 6 || q_factorial(n + 1, q as u64) > MAX_CHAMBERS {
        return Err(Error::TooLarge(format!("building of rank {n} over F_{q}")));
    }
    let len = n + 1;
    let by_dim: Vec<Vec<Subspace>> = (1..=n).map(|k| subspaces(k, len, &field)).collect();
    let mut ids: Vec<Vec<usize>> = Vec::new();
    let mut all = Vec::new();
    for level in &by_dim {
        ids.push((all.len()..all.len() + level.len()).collect());
        all.extend(level.iter().cloned());
    }
    // containment between consecutive dimensions
    let mut above: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..n - 1 {
        for &i in &ids[k] {
            above.insert(i, ids[k + 1].iter().copied().filter(|&j| all[j].contains(&all[i])).collect());
        }
    }
    let mut flags = Vec::new();
    let mut stack: Vec<Vec<usize>> = ids[0].iter().map(|&i| vec![i]).collect();
    while let Some(f) = stack.pop() {
        if f.len() == n {
            flags.push(f);
            continue;
        }
        for &j in &above[f.last().unwrap()] {
            let mut g = f.clone();
            g.push(j);
            stack.push(g);
        }
    }
    let complex = TypedComplex::new(
        all.iter().map(Subspace::label).collect(),
        all.iter().map(|s| s.dim()).collect(),
        flags,
    )?;
    Ok(Building { q, rank: n, subspaces: all, complex })
}

impl Building {
    /// The full subcomplex on coordinate subspaces.
    pub fn standard_apartment(&self) -> Result<TypedComplex> {
        let keep: Vec<usize> = (0..self.subspaces.len()).filter(|&i| self.subspaces[i].is_coordinate()).collect();
        self.complex.induced(&keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{coxeter_complex, isomorphism, CoxeterType};

    #[test]
    fn chamber_counts_are_q_factorials() {
        assert_eq!(building_type_a(1, 2).unwrap().complex.chambers().len(), 3);
        assert_eq!(building_type_a(2, 2).unwrap().complex.chambers().len(), 21);
        for (n, q) in [(2, 3), (3, 2), (3, 3)] {
            let b = building_type_a(n, q).unwrap();
            assert_eq!(b.complex.chambers().len() as u64, q_factorial(n + 1, q as u64), "n={n} q={q}");
        }
    }

    #[test]
    fn panels_lie_in_q_plus_one_chambers() {
        for n in 1..=2 {
            for q in [2, 3] {
                let b = building_type_a(n, q).unwrap();
                assert!(b.complex.panels().values().all(|&c| c == q as usize + 1), "n={n} q={q}");
                assert!(b.complex.is_thick());
            }
        }
    }

    #[test]
    fn subspace_counts() {
        let b = building_type_a(2, 2).unwrap();
        assert_eq!(b.complex.type_histogram().into_iter().collect::<Vec<_>>(), vec![(1, 7), (2, 7)]);
        let b = building_type_a(3, 3).unwrap();
        assert_eq!(b.complex.type_histogram().into_values().collect::<Vec<_>>(), vec![40, 130, 40]);
    }

    #[test]
    fn apartment_is_the_coxeter_complex() {
        for (n, q) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
            let apt = building_type_a(n, q).unwrap().standard_apartment().unwrap();
            let cox = coxeter_complex(CoxeterType::A, n).unwrap().complex;
            assert!(isomorphism(&apt, &cox, true).unwrap().is_witness(), "n={n} q={q}");
        }
    }

    #[test]
    fn non_prime_fields_work() {
        let b = building_type_a(1, 4).unwrap();
        assert_eq!(b.complex.chambers().len(), 5);
        assert!(matches!(building_type_a(1, 6), Err(Error::UnsupportedField(_))));
        assert!(matches!(building_type_a(5, 5), Err(Error::TooLarge(_))));
    }
}
