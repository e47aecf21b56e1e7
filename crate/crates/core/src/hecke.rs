//! The localization `Q` of the formal group algebra at all `x_alpha`, the
//! twisted group algebra `Q_W` with basis `delta_w`, formal Demazure and
//! push-pull elements, and the `X`-basis of the formal affine Demazure
//! algebra `D_F`.

use std::collections::BTreeMap;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::root_system::{ParabolicSubset, WeylElement};
use crate::series::Series;

/// `num / prod x_beta^m` with `beta` ranging over positive root indices.
///
/// Factors `1/x_-beta` are rewritten as `(x_beta/x_-beta) / x_beta`, so
/// denominators only involve positive roots. Kept normalized: no root in the
/// denominator divides the numerator.
#[derive(Clone, Debug)]
pub struct QElem {
    num: Series,
    den: BTreeMap<usize, u32>,
}

impl QElem {
    pub fn from_series(num: Series) -> QElem {
        QElem { num, den: BTreeMap::new() }
    }

    pub fn zero(ctx: &Context) -> QElem {
        QElem::from_series(ctx.zero())
    }

    pub fn one(ctx: &Context) -> QElem {
        QElem::from_series(ctx.one())
    }

    /// `1 / x_beta` for any root index.
    pub fn inv_root(ctx: &Context, beta: usize) -> QElem {
        QElem::fraction(ctx, ctx.one(), [beta])
    }

    /// `num / prod_{beta in roots} x_beta`, normalized.
    pub fn fraction(ctx: &Context, num: Series, roots: impl IntoIterator<Item = usize>) -> QElem {
        let rd = ctx.datum();
        let mut num = num;
        let mut den = BTreeMap::new();
        for b in roots {
            let b = if rd.root(b).positive {
                b
            } else {
                let p = rd.negate(b);
                num = num.mul(ctx.nu(p));
                p
            };
            *den.entry(b).or_insert(0) += 1;
        }
        let mut q = QElem { num, den };
        q.normalize(ctx);
        q
    }

    pub fn numerator(&self) -> &Series {
        &self.num
    }

    /// Denominator as root index with multiplicity.
    pub fn denominator(&self) -> &BTreeMap<usize, u32> {
        &self.den
    }

    /// Denominator roots listed with repetition.
    pub fn denominator_roots(&self) -> Vec<usize> {
        self.den
            .iter()
            .flat_map(|(&b, &m)| std::iter::repeat_n(b, m as usize))
            .collect()
    }

    pub fn precision(&self) -> u32 {
        self.num.precision()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The element as a series, if its denominator is trivial.
    pub fn as_series(&self) -> Option<&Series> {
        self.den.is_empty().then_some(&self.num)
    }

    /// Greedy reduction: divide out denominator roots one at a time while the
    /// numerator stays divisible.
    pub fn normalize(&mut self, ctx: &Context) {
        let roots: Vec<usize> = self.den.keys().copied().collect();
        for b in roots {
            let m = self.den.get_mut(&b).unwrap();
            while *m > 0 {
                match ctx.try_divide(&self.num, b) {
                    Some(q) => {
                        self.num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
            if *m == 0 {
                self.den.remove(&b);
            }
        }
    }

    fn scaled_to(&self, ctx: &Context, den: &BTreeMap<usize, u32>) -> Series {
        let mut num = self.num.clone();
        for (&b, &m) in den {
            let have = self.den.get(&b).copied().unwrap_or(0);
            for _ in have..m {
                num = num.mul(ctx.x_root(b));
            }
        }
        num
    }

    fn common_den(&self, other: &QElem) -> BTreeMap<usize, u32> {
        let mut den = self.den.clone();
        for (&b, &m) in &other.den {
            let e = den.entry(b).or_insert(0);
            *e = (*e).max(m);
        }
        den
    }

    pub fn add(&self, other: &QElem, ctx: &Context) -> QElem {
        if self.den == other.den {
            let mut q = QElem { num: self.num.add(&other.num), den: self.den.clone() };
            q.normalize(ctx);
            return q;
        }
        let den = self.common_den(other);
        let num = self.scaled_to(ctx, &den).add(&other.scaled_to(ctx, &den));
        let mut q = QElem { num, den };
        q.normalize(ctx);
        q
    }

    pub fn neg(&self) -> QElem {
        QElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &QElem, ctx: &Context) -> QElem {
        self.add(&other.neg(), ctx)
    }

    pub fn mul(&self, other: &QElem, ctx: &Context) -> QElem {
        let mut den = self.den.clone();
        for (&b, &m) in &other.den {
            *den.entry(b).or_insert(0) += m;
        }
        let mut q = QElem { num: self.num.mul(&other.num), den };
        q.normalize(ctx);
        q
    }

    pub fn mul_series(&self, s: &Series, ctx: &Context) -> QElem {
        let mut q = QElem { num: self.num.mul(s), den: self.den.clone() };
        q.normalize(ctx);
        q
    }

    /// `q / x_beta`.
    pub fn div_root(&self, beta: usize, ctx: &Context) -> QElem {
        let mut q = self.clone();
        *q.den.entry(beta).or_insert(0) += 1;
        q.normalize(ctx);
        q
    }

    /// Weyl action: on the numerator by substitution, on the denominator by
    /// permuting roots.
    pub fn act(&self, w: WeylElement, ctx: &Context) -> QElem {
        if w == WeylElement::IDENTITY {
            return self.clone();
        }
        let g = ctx.group();
        let roots = self
            .den
            .iter()
            .flat_map(|(&b, &m)| std::iter::repeat_n(g.act_root(w, b), m as usize));
        let num = ctx.act(w, &self.num);
        let rd = ctx.datum();
        let mut out = num;
        let mut den = BTreeMap::new();
        for b in roots {
            let b = if rd.root(b).positive {
                b
            } else {
                let p = rd.negate(b);
                out = out.mul(ctx.nu(p));
                p
            };
            *den.entry(b).or_insert(0) += 1;
        }
        // the image of a normalized element stays normalized
        QElem { num: out, den }
    }

    /// Equality by cross-multiplication up to the common precision.
    pub fn equals(&self, other: &QElem, ctx: &Context) -> bool {
        if self.den == other.den {
            return self.num.eq_up_to_precision(&other.num);
        }
        let den = self.common_den(other);
        self.scaled_to(ctx, &den)
            .eq_up_to_precision(&other.scaled_to(ctx, &den))
    }

    /// Inverse of an element whose numerator is a unit series.
    pub fn invert(&self, ctx: &Context) -> Option<QElem> {
        let inv = self.num.inverse()?;
        let num = self.den.iter().fold(inv, |acc, (&b, &m)| {
            (0..m).fold(acc, |a, _| a.mul(ctx.x_root(b)))
        });
        Some(QElem::from_series(num))
    }
}

/// An element `sum_w q_w delta_w` of the twisted group algebra `Q_W`.
///
/// Zero coefficients are not stored; `floor` remembers the precision up to
/// which dropped coefficients were known to vanish.
#[derive(Clone, Debug)]
pub struct QWElem {
    coeffs: BTreeMap<WeylElement, QElem>,
    floor: u32,
}

impl QWElem {
    pub fn zero() -> QWElem {
        QWElem { coeffs: BTreeMap::new(), floor: u32::MAX }
    }

    pub fn delta(w: WeylElement, ctx: &Context) -> QWElem {
        QWElem::from_coeffs([(w, QElem::one(ctx))])
    }

    /// `q delta_e`.
    pub fn scalar(q: QElem) -> QWElem {
        QWElem::from_coeffs([(WeylElement::IDENTITY, q)])
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (WeylElement, QElem)>) -> QWElem {
        let mut z = QWElem::zero();
        for (w, q) in coeffs {
            z.set(w, q);
        }
        z
    }

    fn set(&mut self, w: WeylElement, q: QElem) {
        if q.is_zero() {
            self.floor = self.floor.min(q.precision());
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, q);
        }
    }

    /// Adds `q delta_w` in place.
    pub fn add_term(&mut self, w: WeylElement, q: QElem, ctx: &Context) {
        let v = match self.coeffs.get(&w) {
            Some(c) => c.add(&q, ctx),
            None => q,
        };
        self.set(w, v);
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (WeylElement, &QElem)> {
        self.coeffs.iter().map(|(w, q)| (*w, q))
    }

    pub fn coeff(&self, w: WeylElement) -> Option<&QElem> {
        self.coeffs.get(&w)
    }

    pub fn support(&self) -> impl Iterator<Item = WeylElement> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest precision over the stored and dropped coefficients.
    pub fn precision(&self) -> u32 {
        self.coeffs
            .values()
            .map(QElem::precision)
            .fold(self.floor, u32::min)
    }

    pub fn add(&self, other: &QWElem, ctx: &Context) -> QWElem {
        let mut z = self.clone();
        z.floor = z.floor.min(other.floor);
        for (w, q) in &other.coeffs {
            z.add_term(*w, q.clone(), ctx);
        }
        z
    }

    pub fn neg(&self) -> QWElem {
        QWElem {
            coeffs: self.coeffs.iter().map(|(w, q)| (*w, q.neg())).collect(),
            floor: self.floor,
        }
    }

    pub fn sub(&self, other: &QWElem, ctx: &Context) -> QWElem {
        self.add(&other.neg(), ctx)
    }

    /// Twisted product `(q delta_v)(q' delta_w) = q v(q') delta_{vw}`.
    pub fn mul(&self, other: &QWElem, ctx: &Context) -> QWElem {
        let g = ctx.group();
        let mut z = QWElem::zero();
        z.floor = self.floor.min(other.floor);
        for (&v, a) in &self.coeffs {
            for (&w, b) in &other.coeffs {
                let c = a.mul(&b.act(v, ctx), ctx);
                z.add_term(g.mul(v, w), c, ctx);
            }
        }
        z
    }

    /// Left multiplication by `q delta_e`.
    pub fn scale_left(&self, q: &QElem, ctx: &Context) -> QWElem {
        let mut z = QWElem::zero();
        z.floor = self.floor;
        for (&w, c) in &self.coeffs {
            z.set(w, q.mul(c, ctx));
        }
        z
    }

    /// Coefficientwise equality up to the common precision.
    pub fn equals(&self, other: &QWElem, ctx: &Context) -> bool {
        let zero = QElem::zero(ctx);
        let keys: std::collections::BTreeSet<WeylElement> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter().all(|w| {
            let a = self.coeffs.get(&w).cloned().unwrap_or_else(|| {
                QElem::from_series(zero.numerator().truncate(self.floor))
            });
            let b = other.coeffs.get(&w).cloned().unwrap_or_else(|| {
                QElem::from_series(zero.numerator().truncate(other.floor))
            });
            a.equals(&b, ctx)
        })
    }
}

/// Which family of generators a word element is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordKind {
    /// Formal Demazure elements `X_alpha`.
    X,
    /// Formal push-pull elements `Y_alpha`.
    Y,
}

/// `X_alpha = 1/x_alpha - 1/x_alpha delta_{s_alpha}` for the simple root `i`.
pub fn demazure_x(i: usize, ctx: &Context) -> QWElem {
    let s = ctx.group().simple(i);
    let inv = QElem::inv_root(ctx, i);
    QWElem::from_coeffs([(WeylElement::IDENTITY, inv.clone()), (s, inv.neg())])
}

/// `kappa_alpha = 1/x_alpha + 1/x_{-alpha}`, which lies in `S`.
pub fn kappa(i: usize, ctx: &Context) -> Result<Series> {
    let minus = ctx.datum().negate(i);
    let k = QElem::inv_root(ctx, i).add(&QElem::inv_root(ctx, minus), ctx);
    k.as_series().cloned().ok_or_else(|| {
        Error::arithmetic(format!(
            "1/x_alpha + 1/x_-alpha does not lie in S for the simple root {}; \
             the formal group algebra is not regular for this root",
            i + 1
        ))
    })
}

/// `Y_alpha = kappa_alpha - X_alpha = 1/x_{-alpha} + 1/x_alpha delta_{s_alpha}`.
pub fn pushpull_y(i: usize, ctx: &Context) -> QWElem {
    let s = ctx.group().simple(i);
    let minus = ctx.datum().negate(i);
    QWElem::from_coeffs([
        (WeylElement::IDENTITY, QElem::inv_root(ctx, minus)),
        (s, QElem::inv_root(ctx, i)),
    ])
}

/// Left-to-right product of generators along a word; `delta_e` for the empty
/// word.
pub fn word_element(kind: WordKind, word: &[usize], ctx: &Context) -> QWElem {
    let mut z = QWElem::delta(WeylElement::IDENTITY, ctx);
    for &i in word {
        let g = match kind {
            WordKind::X => demazure_x(i, ctx),
            WordKind::Y => pushpull_y(i, ctx),
        };
        z = z.mul(&g, ctx);
    }
    z
}

/// `Y_{Xi/Xi'} = sum_{w in W_{Xi/Xi'}} delta_w (1/x_{Xi/Xi'})`.
pub fn pushpull_parabolic(xi: &ParabolicSubset, sub: &ParabolicSubset, ctx: &Context) -> Result<QWElem> {
    let table = ctx.cosets(xi, sub)?;
    let neg = xi.relative_negative_roots(sub, ctx.datum());
    let base = QElem::fraction(ctx, ctx.one(), neg);
    Ok(QWElem::from_coeffs(
        table
            .relative_representatives()
            .iter()
            .map(|&w| (w, base.act(w, ctx))),
    ))
}

/// `X_{I_w}` for every `w`, indexed by element, using canonical words.
pub fn x_basis(ctx: &Context) -> Vec<QWElem> {
    let g = ctx.group();
    let mut out: Vec<QWElem> = Vec::with_capacity(g.order());
    for w in g.elements() {
        let word = g.word(w);
        let z = match word.split_last() {
            None => QWElem::delta(w, ctx),
            Some((&last, prefix)) => {
                let p = g.from_word(prefix).expect("prefix of a canonical word");
                out[p.index()].mul(&demazure_x(last, ctx), ctx)
            }
        };
        out.push(z);
    }
    out
}

/// Outcome of a triangular basis solve.
#[derive(Clone, Debug)]
pub enum BasisSolve {
    /// Coefficients in `S`, indexed by element.
    Coeffs(BTreeMap<WeylElement, Series>),
    /// The element is not in the span; elimination failed at this index.
    NotInSpan(WeylElement),
}

/// Coefficients `c_w` in `S` with `z = sum_w c_w X_{I_w}`, eliminating by
/// decreasing length (ties by canonical word).
pub fn to_x_basis(z: &QWElem, ctx: &Context) -> Result<BasisSolve> {
    let g = ctx.group();
    let basis = ctx.x_basis();
    let mut order: Vec<WeylElement> = g.elements().collect();
    order.sort_by_key(|&w| (std::cmp::Reverse(g.length(w)), w));
    let mut rem = z.clone();
    let mut coeffs = BTreeMap::new();
    for w in order {
        let Some(zw) = rem.coeff(w).cloned() else {
            continue;
        };
        let lead = basis[w.index()]
            .coeff(w)
            .expect("X_{I_w} has a leading term at w");
        let inv = lead.invert(ctx).expect("leading coefficient of X_{I_w} is invertible in Q");
        let c = zw.mul(&inv, ctx);
        let Some(cs) = c.as_series() else {
            if c.precision() == 0 {
                return Err(ctx.precision_error("X-basis elimination ran out of precision", 1));
            }
            return Ok(BasisSolve::NotInSpan(w));
        };
        let term = basis[w.index()].scale_left(&QElem::from_series(cs.clone()), ctx);
        rem = rem.sub(&term, ctx);
        coeffs.insert(w, cs.clone());
    }
    if let Some(w) = rem.support().next() {
        return Ok(BasisSolve::NotInSpan(w));
    }
    Ok(BasisSolve::Coeffs(coeffs))
}

/// Rebuilds `sum_w c_w X_{I_w}` from basis coefficients.
pub fn from_x_basis(coeffs: &BTreeMap<WeylElement, Series>, ctx: &Context) -> QWElem {
    let basis = ctx.x_basis();
    coeffs.iter().fold(QWElem::zero(), |acc, (w, c)| {
        acc.add(&basis[w.index()].scale_left(&QElem::from_series(c.clone()), ctx), ctx)
    })
}
