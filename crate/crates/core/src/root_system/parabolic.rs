use std::fmt;

use crate::error::{Error, Result};

use super::datum::RootDatum;
use super::weyl::{WeylElement, WeylGroup};

/// A subset of the simple roots (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParabolicSubset {
    indices: Vec<usize>,
}

impl ParabolicSubset {
    pub fn new(indices: impl IntoIterator<Item = usize>, rank: usize) -> Result<ParabolicSubset> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        if let Some(&i) = indices.iter().find(|&&i| i >= rank) {
            return Err(Error::usage(format!(
                "simple root index {} out of range 1..={rank}",
                i + 1
            )));
        }
        Ok(ParabolicSubset { indices })
    }

    pub fn empty() -> ParabolicSubset {
        ParabolicSubset::default()
    }

    pub fn full(rank: usize) -> ParabolicSubset {
        ParabolicSubset { indices: (0..rank).collect() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &ParabolicSubset) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// Roots in the span of the subset, `Sigma_Xi`.
    pub fn roots(&self, rd: &RootDatum) -> Vec<usize> {
        (0..rd.roots().len())
            .filter(|&b| {
                rd.root(b)
                    .coords
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || self.contains(i))
            })
            .collect()
    }

    pub fn positive_roots(&self, rd: &RootDatum) -> Vec<usize> {
        self.roots(rd).into_iter().filter(|&b| rd.root(b).positive).collect()
    }

    pub fn negative_roots(&self, rd: &RootDatum) -> Vec<usize> {
        self.roots(rd).into_iter().filter(|&b| !rd.root(b).positive).collect()
    }

    /// `Sigma^+_{Xi/Xi'} = Sigma^+_Xi \ Sigma^+_{Xi'}` for `sub` = `Xi'`.
    pub fn relative_positive_roots(&self, sub: &ParabolicSubset, rd: &RootDatum) -> Vec<usize> {
        let small = sub.positive_roots(rd);
        self.positive_roots(rd)
            .into_iter()
            .filter(|b| !small.contains(b))
            .collect()
    }

    pub fn relative_negative_roots(&self, sub: &ParabolicSubset, rd: &RootDatum) -> Vec<usize> {
        self.relative_positive_roots(sub, rd)
            .into_iter()
            .map(|b| rd.negate(b))
            .collect()
    }

    /// Whether `w` lies in the parabolic subgroup `W_Xi`.
    pub fn contains_element(&self, group: &WeylGroup, w: WeylElement) -> bool {
        group.word(w).iter().all(|&i| self.contains(i))
    }

    /// 1-based indices, for display and serialization.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// Coset combinatorics for `W / W_Xi` and `W_Xi / W_Xi'`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    xi: ParabolicSubset,
    xi_prime: ParabolicSubset,
    min_rep: Vec<WeylElement>,
    reps: Vec<WeylElement>,
    relative: Vec<WeylElement>,
    subgroup: Vec<WeylElement>,
}

impl CosetTable {
    pub fn new(group: &WeylGroup, xi: &ParabolicSubset, xi_prime: &ParabolicSubset) -> Result<CosetTable> {
        if !xi_prime.is_subset_of(xi) {
            return Err(Error::usage(format!("{xi_prime} is not contained in {xi}")));
        }
        let rd = group.datum();
        let is_min = |w: WeylElement, set: &ParabolicSubset| {
            set.indices()
                .iter()
                .all(|&i| rd.root(group.act_root(w, i)).positive)
        };
        let min_rep: Vec<WeylElement> = group
            .elements()
            .map(|w| {
                let mut u = w;
                while let Some(&i) = xi.indices().iter().find(|&&i| !rd.root(group.act_root(u, i)).positive) {
                    u = group.mul_simple_right(u, i);
                }
                u
            })
            .collect();
        let reps: Vec<WeylElement> = group.elements().filter(|&w| is_min(w, xi)).collect();
        let subgroup: Vec<WeylElement> = group
            .elements()
            .filter(|&w| xi.contains_element(group, w))
            .collect();
        let relative: Vec<WeylElement> = subgroup
            .iter()
            .copied()
            .filter(|&w| is_min(w, xi_prime))
            .collect();
        Ok(CosetTable {
            xi: xi.clone(),
            xi_prime: xi_prime.clone(),
            min_rep,
            reps,
            relative,
            subgroup,
        })
    }

    pub fn xi(&self) -> &ParabolicSubset {
        &self.xi
    }

    pub fn xi_prime(&self) -> &ParabolicSubset {
        &self.xi_prime
    }

    /// Minimal representative of `w W_Xi`.
    pub fn min_rep(&self, w: WeylElement) -> WeylElement {
        self.min_rep[w.index()]
    }

    /// `W^Xi`, in element order.
    pub fn representatives(&self) -> &[WeylElement] {
        &self.reps
    }

    /// Minimal representatives of `W_Xi / W_Xi'`.
    pub fn relative_representatives(&self) -> &[WeylElement] {
        &self.relative
    }

    /// The parabolic subgroup `W_Xi`.
    pub fn subgroup(&self) -> &[WeylElement] {
        &self.subgroup
    }

    /// Elements of the coset `w W_Xi`.
    pub fn coset(&self, w: WeylElement) -> Vec<WeylElement> {
        let r = self.min_rep(w);
        (0..self.min_rep.len())
            .filter(|&k| self.min_rep[k] == r)
            .map(|k| WeylElement(k as u32))
            .collect()
    }
}
