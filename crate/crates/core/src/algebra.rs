//! The formal group algebra `S = R[[Lambda]]_F` in a fixed basis of the
//! lattice: elements `x_lambda`, exact division by `x_lambda`, and changes of
//! lattice.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::lattice::{self, IntMatrix};
use crate::ring::{Ring, RingElem};
use crate::series::{Monomial, Series};

#[derive(Debug)]
pub struct FormalGroupAlgebra {
    fgl: FormalGroupLaw,
    rank: usize,
    weights: RwLock<HashMap<Vec<i64>, Arc<Series>>>,
    multiples: RwLock<HashMap<i64, Arc<Series>>>,
    plans: RwLock<HashMap<Vec<i64>, Arc<DivisionPlan>>>,
}

impl FormalGroupAlgebra {
    pub fn new(fgl: FormalGroupLaw, rank: usize) -> Result<FormalGroupAlgebra> {
        if rank > crate::series::MAX_VARS {
            return Err(Error::usage(format!(
                "lattice rank {rank} exceeds the supported maximum {}",
                crate::series::MAX_VARS
            )));
        }
        Ok(FormalGroupAlgebra {
            fgl,
            rank,
            weights: RwLock::default(),
            multiples: RwLock::default(),
            plans: RwLock::default(),
        })
    }

    pub fn fgl(&self) -> &FormalGroupLaw {
        &self.fgl
    }

    pub fn ring(&self) -> &Ring {
        self.fgl.ring()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Truncation degree: every series built by the algebra has this
    /// precision.
    pub fn trunc(&self) -> u32 {
        self.fgl.trunc()
    }

    pub fn zero(&self) -> Series {
        Series::zero(self.ring(), self.rank, self.trunc())
    }

    pub fn one(&self) -> Series {
        Series::one(self.ring(), self.rank, self.trunc())
    }

    pub fn constant(&self, c: RingElem) -> Series {
        Series::constant(self.ring(), self.rank, self.trunc(), c)
    }

    pub fn from_int(&self, k: i64) -> Series {
        Series::from_int(self.ring(), self.rank, self.trunc(), k)
    }

    pub fn variable(&self, i: usize) -> Series {
        Series::variable(self.ring(), self.rank, self.trunc(), i)
    }

    fn multiple(&self, k: i64) -> Arc<Series> {
        if let Some(s) = self.multiples.read().unwrap().get(&k) {
            return s.clone();
        }
        let s = Arc::new(self.fgl.multiple(k));
        self.multiples.write().unwrap().entry(k).or_insert(s).clone()
    }

    /// `x_lambda` for a lattice vector in the fixed basis.
    pub fn x(&self, lambda: &[i64]) -> Arc<Series> {
        assert_eq!(lambda.len(), self.rank, "weight of the wrong rank");
        if let Some(s) = self.weights.read().unwrap().get(lambda) {
            return s.clone();
        }
        let s = Arc::new(self.compute_x(lambda));
        self.weights
            .write()
            .unwrap()
            .entry(lambda.to_vec())
            .or_insert(s)
            .clone()
    }

    fn compute_x(&self, lambda: &[i64]) -> Series {
        if self.fgl.is_additive() {
            return Series::from_terms(
                self.ring(),
                self.rank,
                self.trunc(),
                lambda
                    .iter()
                    .enumerate()
                    .map(|(i, &k)| (Monomial::variable(i), self.ring().from_i64(k))),
            );
        }
        let mut acc = self.zero();
        for (i, &k) in lambda.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let term = self.multiple(k).substitute(&[self.variable(i)]);
            let term = lift_vars(&term, self.rank);
            acc = self.fgl.apply(&acc, &term);
        }
        acc
    }

    /// Substitution `x_i -> x_{images[i]}` induced by a lattice endomorphism
    /// whose columns are `images`.
    pub fn lattice_substitution(&self, images: &[Vec<i64>]) -> Vec<Series> {
        images.iter().map(|v| (*self.x(v)).clone()).collect()
    }

    /// Division plan for `x_lambda`, `lambda` nonzero.
    pub fn plan(&self, lambda: &[i64]) -> Result<Arc<DivisionPlan>> {
        if let Some(p) = self.plans.read().unwrap().get(lambda) {
            return Ok(p.clone());
        }
        let p = Arc::new(DivisionPlan::new(self, lambda)?);
        Ok(self
            .plans
            .write()
            .unwrap()
            .entry(lambda.to_vec())
            .or_insert(p)
            .clone())
    }

    /// `h` with `x_lambda * h = f` up to the precision of `f` (which drops by
    /// one), or `None` when no such `h` exists.
    pub fn divide_by_weight(&self, f: &Series, lambda: &[i64]) -> Result<Option<Series>> {
        self.plan(lambda)?.divide(f)
    }

    /// The augmentation `S -> R`.
    pub fn augmentation(&self, f: &Series) -> RingElem {
        f.constant_term()
    }

    /// The ring map `S -> S'` induced by a surjective lattice map
    /// `q: Z^n -> Z^{n'}` (given as an `n' x n` matrix), `x_lambda -> x_{q(lambda)}`.
    /// For `n' = 0` this is the augmentation.
    pub fn base_change(&self, q: &IntMatrix, target: &FormalGroupAlgebra) -> Result<LatticeMap> {
        let n2 = target.rank;
        if q.len() != n2 || q.iter().any(|r| r.len() != self.rank) {
            return Err(Error::usage(format!(
                "lattice map must be a {n2} x {} matrix",
                self.rank
            )));
        }
        if n2 > 0 {
            // surjective iff the maximal minors have gcd 1
            let divs = lattice::elementary_divisors(
                q.iter()
                    .map(|r| r.iter().map(|&x| x.into()).collect())
                    .collect(),
            );
            if divs.len() != n2 || divs.iter().any(|d| *d != 1.into()) {
                return Err(Error::usage("lattice map is not surjective"));
            }
        }
        let images: Vec<Series> = (0..self.rank)
            .map(|i| {
                let col: Vec<i64> = q.iter().map(|r| r[i]).collect();
                (*target.x(&col)).clone()
            })
            .collect();
        Ok(LatticeMap { images, target_rank: n2, ring: self.ring().clone(), trunc: target.trunc() })
    }
}

/// A ring map between formal group algebras given by images of the
/// variables.
#[derive(Clone, Debug)]
pub struct LatticeMap {
    images: Vec<Series>,
    target_rank: usize,
    ring: Ring,
    trunc: u32,
}

impl LatticeMap {
    pub fn apply(&self, f: &Series) -> Series {
        if self.target_rank == 0 {
            return Series::constant(&self.ring, 0, f.precision().min(self.trunc), f.constant_term());
        }
        f.substitute(&self.images)
    }
}

fn lift_vars(s: &Series, nvars: usize) -> Series {
    if s.nvars() == nvars {
        return s.clone();
    }
    Series::from_terms(s.ring(), nvars, s.precision(), s.terms().map(|(m, c)| (*m, c.clone())))
}

/// Precomputed data for dividing by one `x_lambda`: the linear part of
/// `x_lambda` is `d * l` with `l` primitive; after a unimodular change of
/// variables `l` becomes a coordinate and division proceeds degree by degree.
#[derive(Debug)]
pub struct DivisionPlan {
    ring: Ring,
    content: i64,
    /// leading coefficient `d` (with the sign of the coordinate) in `R`
    lead: RingElem,
    var: usize,
    /// `x_lambda` in the new variables
    divisor: Series,
    /// substitution into new variables and back; `None` when `l = +-x_j`
    forward: Option<IntMatrix>,
    backward: Option<IntMatrix>,
}

impl DivisionPlan {
    fn new(alg: &FormalGroupAlgebra, lambda: &[i64]) -> Result<DivisionPlan> {
        let ring = alg.ring().clone();
        let d = lattice::gcd_slice(lambda);
        if d == 0 {
            return Err(Error::usage("cannot divide by x_0 = 0"));
        }
        if ring.is_zero(&ring.from_i64(d)) {
            return Err(Error::arithmetic(format!(
                "x_lambda for lambda = {lambda:?} has vanishing linear term in {}; \
                 the regularity assumption on roots fails",
                ring.label()
            )));
        }
        if !ring.integer_is_regular(d) {
            return Err(Error::arithmetic(format!(
                "content {d} of lambda = {lambda:?} is a zero divisor in {}; \
                 x_lambda is not regular",
                ring.label()
            )));
        }
        let c: Vec<i64> = lambda.iter().map(|x| x / d).collect();
        let x_lambda = alg.x(lambda);
        let nonzero: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0).collect();
        if nonzero.len() == 1 {
            let j = nonzero[0];
            return Ok(DivisionPlan {
                lead: ring.from_i64(d * c[j]),
                ring,
                content: d,
                var: j,
                divisor: (*x_lambda).clone(),
                forward: None,
                backward: None,
            });
        }
        let (u, u_inv) = lattice::unimodular_completion(&c)
            .expect("primitive vector has a unimodular completion");
        // x = U^T y and y = (U^-1)^T x; images of x_i are rows of U^T
        let forward = lattice::transpose(&u);
        let backward = lattice::transpose(&u_inv);
        let divisor = x_lambda.linear_substitute(&forward);
        Ok(DivisionPlan {
            lead: ring.from_i64(d),
            ring,
            content: d,
            var: 0,
            divisor,
            forward: Some(forward),
            backward: Some(backward),
        })
    }

    pub fn content(&self) -> i64 {
        self.content
    }

    pub fn divide(&self, f: &Series) -> Result<Option<Series>> {
        if f.precision() == 0 {
            return Err(Error::usage("cannot divide a series known only to degree 0"));
        }
        let g = match &self.forward {
            Some(m) => f.linear_substitute(m),
            None => f.clone(),
        };
        let Some(h) = self.divide_transformed(&g) else {
            return Ok(None);
        };
        Ok(Some(match &self.backward {
            Some(m) => h.linear_substitute(m),
            None => h,
        }))
    }

    fn divide_transformed(&self, f: &Series) -> Option<Series> {
        let p = f.precision().min(self.divisor.precision());
        let mut rem = f.truncate(p);
        if !self.ring.is_zero(&rem.constant_term()) {
            return None;
        }
        let mut quotient = Series::zero(&self.ring, f.nvars(), p - 1);
        for deg in 1..=p {
            let part = rem.homogeneous_part(deg);
            if part.is_zero() {
                continue;
            }
            let mut h = Series::zero(&self.ring, f.nvars(), p);
            for (m, c) in part.terms() {
                let q = m.div_var(self.var)?;
                let c = self.ring.exact_div_unchecked(c, &self.lead)?;
                h.add_term(q, c);
            }
            let correction = self.divisor.mul(&h).truncate(p);
            rem = rem.sub(&correction);
            for (m, c) in h.terms() {
                quotient.add_term(*m, c.clone());
            }
        }
        debug_assert!(rem.is_zero());
        Some(quotient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    fn additive(rank: usize, n: u32) -> FormalGroupAlgebra {
        FormalGroupAlgebra::new(FormalGroupLaw::additive(&Ring::Integers, n).unwrap(), rank).unwrap()
    }

    fn multiplicative(rank: usize, n: u32) -> FormalGroupAlgebra {
        let z = Ring::Integers;
        FormalGroupAlgebra::new(FormalGroupLaw::multiplicative(&z, z.one(), n).unwrap(), rank).unwrap()
    }

    #[test]
    fn weights() {
        let a = additive(1, 6);
        assert!(a.x(&[0]).is_zero());
        assert!(a.x(&[-1]).eq_up_to_precision(&a.variable(0).neg()));
        let m = multiplicative(1, 6);
        let two = m.x(&[2]);
        assert_eq!(two.coeff(&mono(&[1])), Ring::Integers.from_i64(2));
        assert_eq!(two.coeff(&mono(&[2])), Ring::Integers.from_i64(-1));
        assert_eq!(two.num_terms(), 2);
        assert_eq!(two.precision(), 6);
    }

    #[test]
    fn weights_form_a_formal_group_homomorphism() {
        let m = multiplicative(2, 7);
        let f = m.fgl().clone();
        for (l, mu) in [([1, 2], [-1, 0]), ([2, -1], [0, 3]), ([-2, -1], [1, 1])] {
            let sum = [l[0] + mu[0], l[1] + mu[1]];
            assert!(m.x(&sum).eq_up_to_precision(&f.apply(&m.x(&l), &m.x(&mu))));
        }
    }

    #[test]
    fn monomial_division() {
        let a = additive(1, 6);
        let x = a.variable(0);
        let f = x.pow(2).add(&x.pow(3));
        let h = a.divide_by_weight(&f, &[1]).unwrap().unwrap();
        assert_eq!(h.precision(), 5);
        assert!(h.eq_up_to_precision(&x.add(&x.pow(2))));
        assert!(a.divide_by_weight(&a.one(), &[1]).unwrap().is_none());
    }

    #[test]
    fn division_by_a_linear_form() {
        let a = additive(2, 6);
        let f = a.variable(0).add(&a.variable(1));
        let h = a.divide_by_weight(&f, &[1, 1]).unwrap().unwrap();
        assert!(h.eq_up_to_precision(&a.one()));
    }

    #[test]
    fn division_round_trip_multiplicative() {
        let m = multiplicative(2, 8);
        let h = m.one().add(&m.variable(0).pow(2)).sub(&m.variable(1).scale_int(3));
        for lambda in [[1, 0], [0, -1], [1, 1], [2, -1], [-1, 2]] {
            let f = m.x(&lambda).mul(&h);
            let q = m.divide_by_weight(&f, &lambda).unwrap().unwrap();
            assert_eq!(q.precision(), 7);
            assert!(q.eq_up_to_precision(&h), "lambda = {lambda:?}");
        }
    }

    #[test]
    fn content_two_division_over_integers() {
        let m = multiplicative(1, 6);
        // x_{2w} = 2x - x^2 divides itself but not x
        let x2 = m.x(&[2]);
        let q = m.divide_by_weight(&x2, &[2]).unwrap().unwrap();
        assert!(q.eq_up_to_precision(&m.one()));
        assert!(m.divide_by_weight(&m.variable(0), &[2]).unwrap().is_none());
    }

    #[test]
    fn base_change_maps() {
        let a2 = multiplicative(2, 6);
        let a1 = multiplicative(1, 6);
        let q = a2.base_change(&vec![vec![1, 1]], &a1).unwrap();
        assert!(q.apply(&a2.variable(0)).eq_up_to_precision(&a1.variable(0)));
        assert!(q.apply(&a2.variable(1)).eq_up_to_precision(&a1.variable(0)));
        let id = a2.base_change(&lattice::identity(2), &a2).unwrap();
        let f = a2.x(&[1, -2]);
        assert!(id.apply(&f).eq_up_to_precision(&f));
        let a0 = multiplicative(0, 6);
        let eps = a2.base_change(&vec![], &a0).unwrap();
        assert_eq!(eps.apply(&a2.one().add(&f)).constant_term(), Ring::Integers.one());
        assert!(a2.base_change(&vec![vec![2, 0]], &a1).is_err());
    }

    #[test]
    fn zero_precision_division_is_an_error() {
        let a = additive(1, 6);
        let f = a.variable(0).truncate(0);
        assert!(a.divide_by_weight(&f, &[1]).is_err());
    }
}
