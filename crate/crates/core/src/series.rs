//! Sparse truncated multivariate power series over a [`Ring`].
//!
//! A series carries a precision `p`: it is known modulo terms of total degree
//! greater than `p`, and never stores such terms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

/// Largest supported number of variables (the rank of the lattice).
pub const MAX_VARS: usize = 8;

/// Exponent vector with cached total degree.
///
/// Ordered by total degree first; within a degree, `x1` sorts before `x2`
/// (lexicographically descending exponents).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    degree: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_VARS], degree: 0 };

    pub fn from_exponents(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::usage(format!("at most {MAX_VARS} variables are supported")));
        }
        let mut m = Monomial::ONE;
        for (i, &e) in exps.iter().enumerate() {
            let e: u8 = e
                .try_into()
                .map_err(|_| Error::usage(format!("exponent {e} too large")))?;
            m.exps[i] = e;
            m.degree += u16::from(e);
        }
        Ok(m)
    }

    pub fn variable(i: usize) -> Monomial {
        let mut m = Monomial::ONE;
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        u32::from(self.degree)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        u32::from(self.exps[i])
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| u32::from(e)).collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] += other.exps[i];
        }
        m.degree += other.degree;
        m
    }

    /// Removes one factor of variable `i`, if present.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = *self;
        m.exps[i] -= 1;
        m.degree -= 1;
        Some(m)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct Series {
    ring: Ring,
    nvars: usize,
    terms: BTreeMap<Monomial, RingElem>,
    precision: u32,
}

impl Series {
    pub fn zero(ring: &Ring, nvars: usize, precision: u32) -> Series {
        assert!(nvars <= MAX_VARS, "too many variables");
        Series { ring: ring.clone(), nvars, terms: BTreeMap::new(), precision }
    }

    pub fn constant(ring: &Ring, nvars: usize, precision: u32, c: RingElem) -> Series {
        let mut s = Series::zero(ring, nvars, precision);
        s.add_term(Monomial::ONE, c);
        s
    }

    pub fn one(ring: &Ring, nvars: usize, precision: u32) -> Series {
        Series::constant(ring, nvars, precision, ring.one())
    }

    pub fn from_int(ring: &Ring, nvars: usize, precision: u32, k: i64) -> Series {
        Series::constant(ring, nvars, precision, ring.from_i64(k))
    }

    pub fn variable(ring: &Ring, nvars: usize, precision: u32, i: usize) -> Series {
        let mut s = Series::zero(ring, nvars, precision);
        s.add_term(Monomial::variable(i), ring.one());
        s
    }

    /// Builds a series from `(monomial, coefficient)` pairs, combining repeats
    /// and dropping terms above the precision.
    pub fn from_terms(
        ring: &Ring,
        nvars: usize,
        precision: u32,
        terms: impl IntoIterator<Item = (Monomial, RingElem)>,
    ) -> Series {
        let mut s = Series::zero(ring, nvars, precision);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RingElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> RingElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Adds `c * m` in place; ignored above the precision.
    pub fn add_term(&mut self, m: Monomial, c: RingElem) {
        if m.degree() > self.precision || self.ring.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                self.ring.add_assign(e.get_mut(), &c);
                if self.ring.is_zero(e.get()) {
                    e.remove();
                }
            }
        }
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest degree of a nonzero term; `precision + 1` for a (known) zero.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .next()
            .map_or(self.precision + 1, Monomial::degree)
    }

    /// Highest degree of a stored term.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The constant coefficient (augmentation).
    pub fn constant_term(&self) -> RingElem {
        self.coeff(&Monomial::ONE)
    }

    pub fn homogeneous_part(&self, d: u32) -> Series {
        let mut s = Series::zero(&self.ring, self.nvars, self.precision);
        for (m, c) in &self.terms {
            if m.degree() == d {
                s.terms.insert(*m, c.clone());
            }
        }
        s
    }

    /// Lowers the precision to `p` (no-op if already at most `p`).
    pub fn truncate(&self, p: u32) -> Series {
        let mut s = self.clone();
        s.truncate_in_place(p);
        s
    }

    pub fn truncate_in_place(&mut self, p: u32) {
        if p < self.precision {
            self.precision = p;
            self.terms.retain(|m, _| m.degree() <= p);
        }
    }

    /// Raises the claimed precision without adding terms. Only sound when the
    /// caller knows the series is exact (e.g. a polynomial built from exact
    /// data).
    pub fn with_precision(mut self, p: u32) -> Series {
        if p < self.precision {
            self.truncate_in_place(p);
        } else {
            self.precision = p;
        }
        self
    }

    fn check_compatible(&self, other: &Series) {
        assert_eq!(self.nvars, other.nvars, "series in different numbers of variables");
        debug_assert_eq!(self.ring, other.ring, "series over different rings");
    }

    pub fn add(&self, other: &Series) -> Series {
        self.check_compatible(other);
        let p = self.precision.min(other.precision);
        let mut s = self.truncate(p);
        for (m, c) in &other.terms {
            s.add_term(*m, c.clone());
        }
        s
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = self.ring.neg(c);
        }
        s
    }

    pub fn scale(&self, k: &RingElem) -> Series {
        let mut s = Series::zero(&self.ring, self.nvars, self.precision);
        for (m, c) in &self.terms {
            let v = self.ring.mul(c, k);
            if !self.ring.is_zero(&v) {
                s.terms.insert(*m, v);
            }
        }
        s
    }

    pub fn scale_int(&self, k: i64) -> Series {
        self.scale(&self.ring.from_i64(k))
    }

    /// Precision of a product: a factor known to degree `p` with lowest
    /// degree `o` contributes unknown terms from degree `p + 1 + o'` of the
    /// other factor on. Capped at the larger input precision.
    pub fn product_precision(&self, other: &Series) -> u32 {
        let a = self.precision.saturating_add(other.order());
        let b = other.precision.saturating_add(self.order());
        a.min(b).min(self.precision.max(other.precision))
    }

    pub fn mul(&self, other: &Series) -> Series {
        self.check_compatible(other);
        let p = self.product_precision(other);
        let mut acc: BTreeMap<Monomial, RingElem> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            if ma.degree() > p {
                break;
            }
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > p {
                    break;
                }
                let prod = self.ring.mul(ca, cb);
                match acc.entry(ma.mul(mb)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        self.ring.add_assign(e.get_mut(), &prod);
                    }
                }
            }
        }
        acc.retain(|_, c| !self.ring.is_zero(c));
        Series { ring: self.ring.clone(), nvars: self.nvars, terms: acc, precision: p }
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(&self.ring, self.nvars, self.precision);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a series whose constant term is a unit, at the same
    /// precision.
    pub fn inverse(&self) -> Option<Series> {
        let c0 = self.constant_term();
        if !self.ring.is_unit(&c0) {
            return None;
        }
        let inv0 = self.ring.exact_div_unchecked(&self.ring.one(), &c0)?;
        let mut g = Series::constant(&self.ring, self.nvars, self.precision, inv0.clone());
        for d in 1..=self.precision {
            let r = self.mul(&g).homogeneous_part(d);
            if !r.is_zero() {
                g = g.sub(&r.scale(&inv0));
            }
        }
        Some(g)
    }

    /// Equality of the known parts up to the common precision.
    pub fn eq_up_to_precision(&self, other: &Series) -> bool {
        self.check_compatible(other);
        let p = self.precision.min(other.precision);
        let a = self.terms.range(..).take_while(|(m, _)| m.degree() <= p);
        let b = other.terms.range(..).take_while(|(m, _)| m.degree() <= p);
        a.eq(b)
    }

    /// Substitutes `x_i -> images[i]`. Every image must have zero constant
    /// term (unless `self` is a polynomial of degree 0).
    pub fn substitute(&self, images: &[Series]) -> Series {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target_nvars = images.first().map_or(0, Series::nvars);
        let mut p = self.precision;
        for g in images {
            debug_assert!(g.ring.is_zero(&g.constant_term()), "image with constant term");
            p = p.min(g.precision);
        }
        // powers[i][k] = images[i]^k truncated to p
        let max_deg = self.terms.keys().map(Monomial::degree).max().unwrap_or(0).min(p);
        let mut powers: Vec<Vec<Series>> = Vec::with_capacity(self.nvars);
        for (i, g) in images.iter().enumerate() {
            let needed = self
                .terms
                .keys()
                .map(|m| m.exponent(i))
                .max()
                .unwrap_or(0)
                .min(max_deg);
            let g = g.truncate(p);
            let mut pw = vec![Series::one(&self.ring, target_nvars, p)];
            for k in 1..=needed as usize {
                let next = pw[k - 1].mul(&g).with_precision(p);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = Series::zero(&self.ring, target_nvars, p);
        for (m, c) in &self.terms {
            if m.degree() > p {
                break;
            }
            let mut term = Series::constant(&self.ring, target_nvars, p, c.clone());
            for (i, pw) in powers.iter().enumerate() {
                let e = m.exponent(i) as usize;
                if e > 0 {
                    term = term.mul(&pw[e]).with_precision(p);
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        out
    }

    /// Linear change of variables `x_i -> sum_j matrix[j][i] y_j`
    /// (i.e. the substitution given by the transpose of `matrix`).
    pub fn linear_substitute(&self, images: &[Vec<i64>]) -> Series {
        let lin: Vec<Series> = images
            .iter()
            .map(|row| {
                Series::from_terms(
                    &self.ring,
                    row.len(),
                    self.precision,
                    row.iter()
                        .enumerate()
                        .map(|(j, &a)| (Monomial::variable(j), self.ring.from_i64(a))),
                )
            })
            .collect();
        self.substitute(&lin)
    }

    /// Exact division by the variable `x_i` times the ring element `d`:
    /// `None` if some known term is not a multiple. Precision drops by one.
    pub fn div_monomial_var(&self, i: usize, d: &RingElem) -> Option<Series> {
        let p = self.precision.checked_sub(1)?;
        let mut out = Series::zero(&self.ring, self.nvars, p);
        for (m, c) in &self.terms {
            let q = m.div_var(i)?;
            let c = self.ring.exact_div_unchecked(c, d)?;
            out.terms.insert(q, c);
        }
        Some(out)
    }

    /// Coefficients in a different ring via a ring map.
    pub fn map_coefficients(&self, ring: &Ring, f: impl Fn(&RingElem) -> RingElem) -> Series {
        Series::from_terms(ring, self.nvars, self.precision, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Renders with variables `x1, x2, ...`.
    pub fn display(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mut s = self.ring.format(c);
            let needs_parens = s[1..].contains(['+', '-']) || s.contains('/') && m.degree() > 0;
            let neg = s.starts_with('-') && !needs_parens;
            if neg {
                s.remove(0);
            }
            if k > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let vars: Vec<String> = (0..self.nvars)
                .filter(|&i| m.exponent(i) > 0)
                .map(|i| match m.exponent(i) {
                    1 => format!("x{}", i + 1),
                    e => format!("x{}^{e}", i + 1),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{s}")?;
            } else {
                if needs_parens {
                    write!(f, "({s})*")?;
                } else if s != "1" {
                    write!(f, "{s}*")?;
                }
                write!(f, "{}", vars.join("*"))?;
            }
        }
        write!(f, " + O({})", self.precision + 1)
    }
}
