//! Exact coefficient rings: integers, rationals, integers modulo `m`, and
//! multivariate polynomials with integer coefficients.
//!
//! A [`Ring`] is a descriptor; [`RingElem`] values carry no reference to it,
//! so every operation goes through the descriptor. Values are always kept in
//! canonical form: reduced fractions, residues in `[0, m)`, polynomials with
//! sorted monomials and no zero coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    IntegersMod(u64),
    PolynomialsOverIntegers(Arc<[String]>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElem {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
    Poly(IntPoly),
}

/// Polynomial over the integers. Keys are exponent vectors, one entry per
/// ring variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        IntPoly { terms }
    }

    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        IntPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant coefficient, if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> IntPoly {
        IntPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms
            .iter()
            .max_by(|a, b| graded_cmp(a.0, b.0))
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (lead_e, lead_c) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = IntPoly::default();
        while let Some((e, c)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) || !(&c % lead_c).is_zero() {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = &c / lead_c;
            let mut mono = IntPoly::default();
            mono.add_term(qe, qc);
            rem = rem.add(&mono.mul(divisor).neg());
            quot = quot.add(&mono);
        }
        Some(quot)
    }

    /// Content-wise division by an integer.
    fn div_integer(&self, d: &BigInt) -> Option<IntPoly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(IntPoly { terms })
    }
}

fn graded_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&k| k as u64).sum();
    let db: u64 = b.iter().map(|&k| k as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Operations exposed by [`Ring::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
    Neg,
    Eq,
    IsZero,
    IsUnit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithValue {
    Elem(RingElem),
    Bool(bool),
}

impl Ring {
    pub fn zmod(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(Error::validation(format!("modulus must be at least 2, got {m}")));
        }
        Ok(Ring::IntegersMod(m))
    }

    pub fn polynomials<S: AsRef<str>>(names: &[S]) -> Result<Ring> {
        let mut seen = std::collections::BTreeSet::new();
        for n in names {
            let n = n.as_ref();
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || n.chars().next().unwrap().is_ascii_digit()
            {
                return Err(Error::validation(format!("invalid variable name {n:?}")));
            }
            if !seen.insert(n.to_string()) {
                return Err(Error::validation(format!("duplicate variable name {n:?}")));
            }
        }
        Ok(Ring::PolynomialsOverIntegers(
            names.iter().map(|n| n.as_ref().to_string()).collect(),
        ))
    }

    /// Short label used in serialized output.
    pub fn label(&self) -> String {
        match self {
            Ring::Integers => "Z".into(),
            Ring::Rationals => "Q".into(),
            Ring::IntegersMod(m) => format!("Z/{m}"),
            Ring::PolynomialsOverIntegers(v) => format!("Z[{}]", v.join(",")),
        }
    }

    pub fn zero(&self) -> RingElem {
        self.from_bigint(BigInt::zero())
    }

    pub fn one(&self) -> RingElem {
        self.from_bigint(BigInt::one())
    }

    pub fn from_i64(&self, k: i64) -> RingElem {
        self.from_bigint(BigInt::from(k))
    }

    /// Image of an integer under the structure map `Z -> R`.
    pub fn from_bigint(&self, k: BigInt) -> RingElem {
        match self {
            Ring::Integers => RingElem::Int(k),
            Ring::Rationals => RingElem::Rat(BigRational::from_integer(k)),
            Ring::IntegersMod(m) => {
                let r = k.mod_floor(&BigInt::from(*m));
                RingElem::Mod(r.to_u64().unwrap())
            }
            Ring::PolynomialsOverIntegers(v) => RingElem::Poly(IntPoly::constant(v.len(), k)),
        }
    }

    /// The `index`-th parameter of a polynomial ring.
    pub fn variable(&self, index: usize) -> Result<RingElem> {
        match self {
            Ring::PolynomialsOverIntegers(v) if index < v.len() => {
                Ok(RingElem::Poly(IntPoly::variable(v.len(), index)))
            }
            _ => Err(Error::usage(format!("ring {} has no variable {index}", self.label()))),
        }
    }

    /// Whether `a` is a well-formed element of this ring.
    pub fn contains(&self, a: &RingElem) -> bool {
        match (self, a) {
            (Ring::Integers, RingElem::Int(_)) => true,
            (Ring::Rationals, RingElem::Rat(_)) => true,
            (Ring::IntegersMod(m), RingElem::Mod(r)) => r < m,
            (Ring::PolynomialsOverIntegers(v), RingElem::Poly(p)) => {
                p.terms.keys().all(|e| e.len() == v.len())
            }
            _ => false,
        }
    }

    fn check(&self, a: &RingElem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "element {a:?} does not belong to ring {}",
                self.label()
            )))
        }
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x + y),
            (RingElem::Rat(x), RingElem::Rat(y)) => RingElem::Rat(x + y),
            (RingElem::Mod(x), RingElem::Mod(y)) => {
                let m = self.modulus();
                RingElem::Mod(((*x as u128 + *y as u128) % m as u128) as u64)
            }
            (RingElem::Poly(x), RingElem::Poly(y)) => RingElem::Poly(x.add(y)),
            _ => panic!("ring element kinds do not match: {a:?} vs {b:?}"),
        }
    }

    pub fn add_assign(&self, a: &mut RingElem, b: &RingElem) {
        match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => *x += y,
            (RingElem::Rat(x), RingElem::Rat(y)) => *x += y,
            (a, b) => *a = self.add(a, b),
        }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        match a {
            RingElem::Int(x) => RingElem::Int(-x),
            RingElem::Rat(x) => RingElem::Rat(-x),
            RingElem::Mod(x) => {
                let m = self.modulus();
                RingElem::Mod(if *x == 0 { 0 } else { m - x })
            }
            RingElem::Poly(p) => RingElem::Poly(p.neg()),
        }
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => RingElem::Int(x * y),
            (RingElem::Rat(x), RingElem::Rat(y)) => RingElem::Rat(x * y),
            (RingElem::Mod(x), RingElem::Mod(y)) => {
                let m = self.modulus();
                RingElem::Mod(((*x as u128 * *y as u128) % m as u128) as u64)
            }
            (RingElem::Poly(x), RingElem::Poly(y)) => RingElem::Poly(x.mul(y)),
            _ => panic!("ring element kinds do not match: {a:?} vs {b:?}"),
        }
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        match a {
            RingElem::Int(x) => x.is_zero(),
            RingElem::Rat(x) => x.is_zero(),
            RingElem::Mod(x) => *x == 0,
            RingElem::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self, a: &RingElem) -> bool {
        *a == self.one()
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        match a {
            RingElem::Int(x) => x.abs().is_one(),
            RingElem::Rat(x) => !x.is_zero(),
            RingElem::Mod(x) => (*x).gcd(&self.modulus()) == 1,
            RingElem::Poly(p) => p.as_constant().is_some_and(|c| c.abs().is_one()),
        }
    }

    /// Checked entry point mirroring the ring operation table: operands must
    /// belong to this ring.
    pub fn arith(&self, op: RingOp, a: &RingElem, b: Option<&RingElem>) -> Result<ArithValue> {
        self.check(a)?;
        let need_b = || -> Result<&RingElem> {
            let b = b.ok_or_else(|| Error::usage(format!("{op:?} needs two operands")))?;
            self.check(b)?;
            Ok(b)
        };
        Ok(match op {
            RingOp::Add => ArithValue::Elem(self.add(a, need_b()?)),
            RingOp::Mul => ArithValue::Elem(self.mul(a, need_b()?)),
            RingOp::Neg => ArithValue::Elem(self.neg(a)),
            RingOp::Eq => ArithValue::Bool(a == need_b()?),
            RingOp::IsZero => ArithValue::Bool(self.is_zero(a)),
            RingOp::IsUnit => ArithValue::Bool(self.is_unit(a)),
        })
    }

    /// Exact division: some `q` with `b * q = a`, or `None` if there is none.
    ///
    /// Modulo `m` the quotient need not be unique; the smallest nonnegative
    /// residue is returned.
    pub fn exact_div(&self, a: &RingElem, b: &RingElem) -> Result<Option<RingElem>> {
        self.check(a)?;
        self.check(b)?;
        if self.is_zero(b) {
            return Err(Error::usage("division by zero"));
        }
        Ok(self.exact_div_unchecked(a, b))
    }

    pub(crate) fn exact_div_unchecked(&self, a: &RingElem, b: &RingElem) -> Option<RingElem> {
        match (a, b) {
            (RingElem::Int(x), RingElem::Int(y)) => {
                let (q, r) = x.div_rem(y);
                r.is_zero().then_some(RingElem::Int(q))
            }
            (RingElem::Rat(x), RingElem::Rat(y)) => Some(RingElem::Rat(x / y)),
            (RingElem::Mod(x), RingElem::Mod(y)) => {
                let m = self.modulus();
                let g = y.gcd(&m);
                if x % g != 0 {
                    return None;
                }
                let m_red = m / g;
                let y_red = (y / g) % m_red;
                let x_red = (x / g) % m_red;
                if m_red == 1 {
                    return Some(RingElem::Mod(0));
                }
                let inv = mod_inverse(y_red, m_red)?;
                Some(RingElem::Mod(((x_red as u128 * inv as u128) % m_red as u128) as u64))
            }
            (RingElem::Poly(x), RingElem::Poly(y)) => match y.as_constant() {
                Some(c) => x.div_integer(&c).map(RingElem::Poly),
                None => x.exact_div(y).map(RingElem::Poly),
            },
            _ => None,
        }
    }

    fn modulus(&self) -> u64 {
        match self {
            Ring::IntegersMod(m) => *m,
            _ => unreachable!("modulus of a ring that is not Z/m"),
        }
    }

    /// Whether the integer `k` is a non-zero-divisor in this ring.
    pub fn integer_is_regular(&self, k: i64) -> bool {
        match self {
            Ring::IntegersMod(m) => (k.unsigned_abs()).gcd(m) == 1,
            _ => k != 0,
        }
    }

    /// Whether the integer `k` is invertible in this ring.
    pub fn integer_is_unit(&self, k: i64) -> bool {
        self.is_unit(&self.from_i64(k))
    }

    /// Parses a decimal integer, a fraction `p/q` (rationals only) or a
    /// polynomial such as `2*b^2-b+1` (polynomial rings only).
    pub fn parse(&self, s: &str) -> Result<RingElem> {
        let t = s.trim();
        let bad = || Error::validation(format!("cannot parse {s:?} as an element of {}", self.label()));
        match self {
            Ring::Integers | Ring::IntegersMod(_) => {
                let k: BigInt = t.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(k))
            }
            Ring::Rationals => {
                if let Some((n, d)) = t.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    Ok(RingElem::Rat(BigRational::new(n, d)))
                } else {
                    let k: BigInt = t.parse().map_err(|_| bad())?;
                    Ok(self.from_bigint(k))
                }
            }
            Ring::PolynomialsOverIntegers(names) => {
                parse_poly(t, names).map(RingElem::Poly).ok_or_else(bad)
            }
        }
    }

    /// Canonical decimal rendering; [`Ring::parse`] inverts it.
    pub fn format(&self, a: &RingElem) -> String {
        match a {
            RingElem::Int(x) => x.to_string(),
            RingElem::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            RingElem::Mod(x) => x.to_string(),
            RingElem::Poly(p) => match self {
                Ring::PolynomialsOverIntegers(names) => format_poly(p, names),
                _ => format!("{p:?}"),
            },
        }
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

fn parse_poly(s: &str, names: &[String]) -> Option<IntPoly> {
    let n = names.len();
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    // split into signed terms
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut out = IntPoly::default();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        if body.is_empty() {
            return None;
        }
        let mut coeff = BigInt::from(sign);
        let mut exps = vec![0u32; n];
        for factor in body.split('*') {
            if factor.is_empty() {
                return None;
            }
            if factor.chars().next().unwrap().is_ascii_digit() {
                let k: BigInt = factor.parse().ok()?;
                coeff *= k;
            } else {
                let (name, pow) = match factor.split_once('^') {
                    Some((a, b)) => (a, b.parse::<u32>().ok()?),
                    None => (factor, 1),
                };
                let idx = names.iter().position(|v| v == name)?;
                exps[idx] += pow;
            }
        }
        out.add_term(exps, coeff);
    }
    Some(out)
}

fn format_poly(p: &IntPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut entries: Vec<_> = p.terms.iter().collect();
    entries.sort_by(|a, b| graded_cmp(b.0, a.0));
    let mut out = String::new();
    for (i, (e, c)) in entries.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mut factors = Vec::new();
        let is_const = e.iter().all(|&k| k == 0);
        if !abs.is_one() || is_const {
            factors.push(abs.to_string());
        }
        for (name, &k) in names.iter().zip(e) {
            match k {
                0 => {}
                1 => factors.push(name.clone()),
                _ => factors.push(format!("{name}^{k}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
