use std::collections::BTreeMap;
use std::fmt;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::hecke::{QElem, QWElem};
use crate::root_system::{ParabolicSubset, WeylElement};
use crate::series::Series;

/// Which fixed-point set indexes the coefficients: all of `W`, or the
/// minimal coset representatives `W^Xi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Borel,
    Parabolic(ParabolicSubset),
}

impl Model {
    /// `Parabolic` of the empty set collapses to `Borel`.
    pub fn parabolic(xi: ParabolicSubset) -> Model {
        if xi.is_empty() {
            Model::Borel
        } else {
            Model::Parabolic(xi)
        }
    }

    pub fn subset(&self) -> ParabolicSubset {
        match self {
            Model::Borel => ParabolicSubset::empty(),
            Model::Parabolic(xi) => xi.clone(),
        }
    }

    /// The indexing elements, in element order.
    pub fn index_set(&self, ctx: &Context) -> Vec<WeylElement> {
        match self {
            Model::Borel => ctx.group().elements().collect(),
            Model::Parabolic(xi) => ctx
                .cosets(xi, &ParabolicSubset::empty())
                .expect("the empty set is contained in every subset")
                .representatives()
                .to_vec(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Borel => write!(f, "borel"),
            Model::Parabolic(xi) => write!(f, "parabolic {xi}"),
        }
    }
}

/// `sum_w q_w f_w` with `q_w` in `Q`; in the parabolic model `w` ranges over
/// minimal coset representatives.
///
/// Zero coefficients are dropped; `floor` is the precision up to which the
/// dropped ones are known to vanish.
#[derive(Clone, Debug)]
pub struct DualElem {
    model: Model,
    coeffs: BTreeMap<WeylElement, QElem>,
    floor: u32,
}

impl DualElem {
    pub fn zero(model: Model) -> DualElem {
        DualElem { model, coeffs: BTreeMap::new(), floor: u32::MAX }
    }

    /// `f_w`; in a parabolic model `w` is replaced by its minimal
    /// representative.
    pub fn basis(ctx: &Context, model: Model, w: WeylElement) -> DualElem {
        let w = canonical_index(ctx, &model, w);
        let mut f = DualElem::zero(model);
        f.coeffs.insert(w, QElem::one(ctx));
        f
    }

    /// The unit `sum_w f_w`.
    pub fn unit(ctx: &Context, model: Model) -> DualElem {
        let coeffs = model
            .index_set(ctx)
            .into_iter()
            .map(|w| (w, QElem::one(ctx)))
            .collect();
        DualElem { model, coeffs, floor: u32::MAX }
    }

    /// Builds an element from coefficients; in a parabolic model the keys
    /// must be minimal representatives.
    pub fn from_coeffs(
        ctx: &Context,
        model: Model,
        coeffs: impl IntoIterator<Item = (WeylElement, QElem)>,
    ) -> Result<DualElem> {
        let allowed = model.index_set(ctx);
        let mut f = DualElem::zero(model);
        for (w, q) in coeffs {
            if allowed.binary_search(&w).is_err() {
                return Err(Error::usage(format!(
                    "{} is not a minimal coset representative for the {} model",
                    ctx.group().name(w),
                    f.model
                )));
            }
            if f.coeffs.contains_key(&w) {
                return Err(Error::usage(format!("coefficient at {} given twice", ctx.group().name(w))));
            }
            f.insert(w, q);
        }
        Ok(f)
    }

    /// Coefficients in `S`, one series per listed element.
    pub fn from_series(
        ctx: &Context,
        model: Model,
        coeffs: impl IntoIterator<Item = (WeylElement, Series)>,
    ) -> Result<DualElem> {
        DualElem::from_coeffs(ctx, model, coeffs.into_iter().map(|(w, s)| (w, QElem::from_series(s))))
    }

    pub(crate) fn from_parts(model: Model, coeffs: BTreeMap<WeylElement, QElem>, floor: u32) -> DualElem {
        let mut f = DualElem { model, coeffs: BTreeMap::new(), floor };
        for (w, q) in coeffs {
            f.insert(w, q);
        }
        f
    }

    pub(crate) fn insert(&mut self, w: WeylElement, q: QElem) {
        if q.is_zero() {
            self.floor = self.floor.min(q.precision());
        } else {
            self.coeffs.insert(w, q);
        }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (WeylElement, &QElem)> {
        self.coeffs.iter().map(|(w, q)| (*w, q))
    }

    pub fn support(&self) -> impl Iterator<Item = WeylElement> + '_ {
        self.coeffs.keys().copied()
    }

    /// Coefficient at `w` (zero when not stored).
    pub fn coeff(&self, w: WeylElement, ctx: &Context) -> QElem {
        self.coeffs.get(&w).cloned().unwrap_or_else(|| self.zero_coeff(ctx))
    }

    pub(crate) fn coeff_ref(&self, w: WeylElement) -> Option<&QElem> {
        self.coeffs.get(&w)
    }

    fn zero_coeff(&self, ctx: &Context) -> QElem {
        QElem::from_series(Series::zero(ctx.ring(), ctx.rank(), self.floor.min(ctx.trunc())))
    }

    /// Coefficient at `w` as a series, if it lies in `S`.
    pub fn series_coeff(&self, w: WeylElement, ctx: &Context) -> Option<Series> {
        match self.coeffs.get(&w) {
            Some(q) => q.as_series().cloned(),
            None => Some(self.zero_coeff(ctx).numerator().clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether every coefficient lies in `S`.
    pub fn in_s(&self) -> bool {
        self.coeffs.values().all(|q| q.as_series().is_some())
    }

    /// Precision of the least precise coefficient.
    pub fn precision(&self, ctx: &Context) -> u32 {
        self.coeffs
            .values()
            .map(QElem::precision)
            .fold(self.floor.min(ctx.trunc()), u32::min)
    }

    pub(crate) fn floor(&self) -> u32 {
        self.floor
    }

    fn check_model(&self, other: &DualElem) -> Result<()> {
        if self.model != other.model {
            return Err(Error::usage(format!(
                "cannot combine elements of the {} and {} models",
                self.model, other.model
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &DualElem, ctx: &Context, op: impl Fn(&QElem, &QElem) -> QElem) -> Result<DualElem> {
        self.check_model(other)?;
        let mut out = DualElem::zero(self.model.clone());
        out.floor = self.floor.min(other.floor);
        let keys: std::collections::BTreeSet<WeylElement> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        for w in keys {
            out.insert(w, op(&self.coeff(w, ctx), &other.coeff(w, ctx)));
        }
        Ok(out)
    }

    pub fn add(&self, other: &DualElem, ctx: &Context) -> Result<DualElem> {
        self.zip_with(other, ctx, |a, b| a.add(b, ctx))
    }

    pub fn sub(&self, other: &DualElem, ctx: &Context) -> Result<DualElem> {
        self.zip_with(other, ctx, |a, b| a.sub(b, ctx))
    }

    pub fn neg(&self) -> DualElem {
        DualElem {
            model: self.model.clone(),
            coeffs: self.coeffs.iter().map(|(w, q)| (*w, q.neg())).collect(),
            floor: self.floor,
        }
    }

    /// Pointwise product `f_v f_w = delta_{v,w} f_v`.
    pub fn mul(&self, other: &DualElem, ctx: &Context) -> Result<DualElem> {
        self.check_model(other)?;
        let mut out = DualElem::zero(self.model.clone());
        out.floor = self.floor.min(other.floor);
        for (w, a) in &self.coeffs {
            match other.coeffs.get(w) {
                Some(b) => out.insert(*w, a.mul(b, ctx)),
                None => out.floor = out.floor.min(other.floor),
            }
        }
        Ok(out)
    }

    /// Coefficientwise multiplication by `q` (the `Q`-module structure, not
    /// the bullet action).
    pub fn scale(&self, q: &QElem, ctx: &Context) -> DualElem {
        let mut out = DualElem::zero(self.model.clone());
        out.floor = self.floor;
        for (w, c) in &self.coeffs {
            out.insert(*w, c.mul(q, ctx));
        }
        out
    }

    pub fn scale_series(&self, s: &Series, ctx: &Context) -> DualElem {
        self.scale(&QElem::from_series(s.clone()), ctx)
    }

    /// Equality coefficient by coefficient up to the common precision.
    pub fn equals(&self, other: &DualElem, ctx: &Context) -> bool {
        if self.model != other.model {
            return false;
        }
        let keys: std::collections::BTreeSet<WeylElement> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter()
            .all(|w| self.coeff(w, ctx).equals(&other.coeff(w, ctx), ctx))
    }

    /// Coefficients as series, or the first element whose coefficient has a
    /// denominator.
    pub fn to_series_map(&self) -> std::result::Result<BTreeMap<WeylElement, Series>, WeylElement> {
        self.coeffs
            .iter()
            .map(|(w, q)| q.as_series().cloned().map(|s| (*w, s)).ok_or(*w))
            .collect()
    }

    pub fn display(&self, ctx: &Context) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let g = ctx.group();
        self.coeffs
            .iter()
            .map(|(w, q)| {
                let den = q.denominator_roots();
                let num = q.numerator().display();
                if den.is_empty() {
                    format!("({num}) f_{}", g.name(*w))
                } else {
                    let d: Vec<String> = den.iter().map(|b| format!("x[{b}]")).collect();
                    format!("({num})/({}) f_{}", d.join("*"), g.name(*w))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub(crate) fn canonical_index(ctx: &Context, model: &Model, w: WeylElement) -> WeylElement {
    match model {
        Model::Borel => w,
        Model::Parabolic(xi) => ctx
            .cosets(xi, &ParabolicSubset::empty())
            .expect("the empty set is contained in every subset")
            .min_rep(w),
    }
}

/// The left action `(z . f)_u = sum_v u(q_v) f_{uv}` of `Q_W` on the Borel
/// model, for `z = sum_v q_v delta_v`.
pub fn bullet_act(z: &QWElem, f: &DualElem, ctx: &Context) -> Result<DualElem> {
    if f.model != Model::Borel {
        return Err(Error::usage("the bullet action is defined on the Borel model; lift the element first"));
    }
    let g = ctx.group();
    let mut out = DualElem::zero(Model::Borel);
    out.floor = f.floor.min(z.precision());
    for u in g.elements() {
        let mut acc: Option<QElem> = None;
        for (v, q) in z.coeffs() {
            let Some(fv) = f.coeffs.get(&g.mul(u, v)) else {
                continue;
            };
            let term = q.act(u, ctx).mul(fv, ctx);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term, ctx),
            });
        }
        if let Some(a) = acc {
            out.insert(u, a);
        }
    }
    Ok(out)
}
