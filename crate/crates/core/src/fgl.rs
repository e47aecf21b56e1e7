//! Truncated one-dimensional commutative formal group laws
//! `F(x, y) = x + y + sum a_ij x^i y^j`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};
use crate::series::{Monomial, Series};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FglKind {
    Additive,
    /// `x + y - beta x y`.
    Multiplicative(RingElem),
    Custom,
}

#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    ring: Ring,
    trunc: u32,
    kind: FglKind,
    /// `a_ij` for `i, j >= 1`, `i + j <= trunc`; zeros omitted.
    table: BTreeMap<(u32, u32), RingElem>,
}

impl FormalGroupLaw {
    pub fn additive(ring: &Ring, trunc: u32) -> Result<FormalGroupLaw> {
        check_trunc(trunc)?;
        Ok(FormalGroupLaw { ring: ring.clone(), trunc, kind: FglKind::Additive, table: BTreeMap::new() })
    }

    pub fn multiplicative(ring: &Ring, beta: RingElem, trunc: u32) -> Result<FormalGroupLaw> {
        check_trunc(trunc)?;
        if !ring.contains(&beta) {
            return Err(Error::usage("beta does not belong to the coefficient ring"));
        }
        let mut table = BTreeMap::new();
        let a11 = ring.neg(&beta);
        if !ring.is_zero(&a11) {
            table.insert((1, 1), a11);
        }
        Ok(FormalGroupLaw { ring: ring.clone(), trunc, kind: FglKind::Multiplicative(beta), table })
    }

    /// Law given by an explicit coefficient table; validated for
    /// commutativity and associativity up to the truncation degree.
    pub fn custom(ring: &Ring, trunc: u32, entries: &[(u32, u32, RingElem)]) -> Result<FormalGroupLaw> {
        check_trunc(trunc)?;
        let mut table = BTreeMap::new();
        for (i, j, c) in entries {
            if *i == 0 || *j == 0 {
                return Err(Error::validation(format!(
                    "coefficient a_{i}{j}: F(x, 0) = x forbids pure terms"
                )));
            }
            if i + j > trunc {
                return Err(Error::validation(format!(
                    "coefficient a_({i},{j}) lies above the truncation degree {trunc}"
                )));
            }
            if !ring.contains(c) {
                return Err(Error::usage("table entry does not belong to the coefficient ring"));
            }
            if table.insert((*i, *j), c.clone()).is_some() {
                return Err(Error::validation(format!("coefficient a_({i},{j}) given twice")));
            }
        }
        table.retain(|_, c| !ring.is_zero(c));
        for ((i, j), c) in &table {
            if table.get(&(*j, *i)) != Some(c) {
                return Err(Error::validation(format!(
                    "table is not commutative: a_({i},{j}) != a_({j},{i})"
                )));
            }
        }
        let fgl = FormalGroupLaw { ring: ring.clone(), trunc, kind: FglKind::Custom, table };
        fgl.check_associative()?;
        Ok(fgl)
    }

    /// The law `(x + y) / (1 + x y)` (hyperbolic tangent addition).
    pub fn lorentz(ring: &Ring, trunc: u32) -> Result<FormalGroupLaw> {
        let mut entries = Vec::new();
        let mut k = 1;
        while 2 * k < trunc {
            let c = ring.from_i64(if k % 2 == 0 { 1 } else { -1 });
            entries.push((k + 1, k, c.clone()));
            entries.push((k, k + 1, c));
            k += 1;
        }
        FormalGroupLaw::custom(ring, trunc, &entries)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn kind(&self) -> &FglKind {
        &self.kind
    }

    pub fn is_additive(&self) -> bool {
        self.table.is_empty()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> RingElem {
        self.table.get(&(i, j)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn table(&self) -> impl Iterator<Item = (u32, u32, &RingElem)> {
        self.table.iter().map(|((i, j), c)| (*i, *j, c))
    }

    /// The same law with a smaller truncation degree.
    pub fn with_trunc(&self, trunc: u32) -> Result<FormalGroupLaw> {
        check_trunc(trunc)?;
        let mut f = self.clone();
        f.trunc = trunc;
        f.table.retain(|(i, j), _| i + j <= trunc);
        Ok(f)
    }

    /// `F(f, g)` for series without constant term; known to degree
    /// `min(p_f, p_g, trunc)`.
    pub fn apply(&self, f: &Series, g: &Series) -> Series {
        let p = f.precision().min(g.precision()).min(self.trunc);
        let f = f.truncate(p);
        let g = g.truncate(p);
        let mut out = f.add(&g);
        if self.table.is_empty() {
            return out;
        }
        let max_i = self.table.keys().map(|k| k.0).max().unwrap_or(0) as usize;
        let max_j = self.table.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let powers = |s: &Series, n: usize| {
            let mut v = vec![Series::one(s.ring(), s.nvars(), p)];
            for k in 1..=n {
                let next = v[k - 1].mul(s).with_precision(p);
                v.push(next);
            }
            v
        };
        let fp = powers(&f, max_i);
        let gp = powers(&g, max_j);
        for ((i, j), c) in &self.table {
            let term = fp[*i as usize].mul(&gp[*j as usize]).with_precision(p).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// Formal inverse `iota(x) = -x + ...` with `F(x, iota(x)) = 0`, as a
    /// series in one variable known to the truncation degree.
    pub fn formal_inverse(&self) -> Series {
        let n = self.trunc;
        let x = Series::variable(&self.ring, 1, n, 0);
        let mut iota = x.neg();
        if self.table.is_empty() {
            return iota;
        }
        for k in 2..=n {
            let residual = self.apply(&x, &iota);
            let m = Monomial::from_exponents(&[k]).unwrap();
            let c = residual.coeff(&m);
            iota.add_term(m, self.ring.neg(&c));
        }
        iota
    }

    /// The `k`-fold formal sum `[k]_F(x)` in one variable (negative `k` via
    /// the formal inverse).
    pub fn multiple(&self, k: i64) -> Series {
        let n = self.trunc;
        let x = Series::variable(&self.ring, 1, n, 0);
        if self.table.is_empty() {
            return x.scale_int(k);
        }
        let base = if k < 0 { self.formal_inverse() } else { x };
        let mut acc = Series::zero(&self.ring, 1, n);
        for _ in 0..k.unsigned_abs() {
            acc = self.apply(&acc, &base);
        }
        acc
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.trunc;
        let v = |i| Series::variable(&self.ring, 3, n, i);
        let (x, y, z) = (v(0), v(1), v(2));
        let lhs = self.apply(&self.apply(&x, &y), &z);
        let rhs = self.apply(&x, &self.apply(&y, &z));
        let diff = lhs.sub(&rhs);
        match diff.order() {
            d if d > n => Ok(()),
            d => Err(Error::validation(format!(
                "formal group law is not associative: first failure in degree {d}"
            ))),
        }
    }
}

fn check_trunc(trunc: u32) -> Result<()> {
    if trunc < 2 {
        return Err(Error::usage(format!("truncation degree must be at least 2, got {trunc}")));
    }
    if trunc > 60 {
        return Err(Error::usage(format!("truncation degree {trunc} is unreasonably large")));
    }
    Ok(())
}

impl fmt::Display for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FglKind::Additive => write!(f, "additive"),
            FglKind::Multiplicative(b) => write!(f, "multiplicative(beta = {})", self.ring.format(b)),
            FglKind::Custom => write!(f, "custom ({} coefficients)", self.table.len()),
        }
    }
}
