//! A [`Context`] bundles a root datum, its Weyl group and a formal group
//! algebra, together with the caches shared by all higher-level operations.

use std::sync::{Arc, OnceLock};

use log::warn;

use crate::algebra::{DivisionPlan, FormalGroupAlgebra};
use crate::error::{Error, Result};
use crate::fgl::{FglKind, FormalGroupLaw};
use crate::dual::DualElem;
use crate::hecke::QWElem;
use crate::ring::{Ring, RingElem};
use crate::root_system::{CosetTable, ParabolicSubset, RootDatum, WeylElement, WeylGroup, DEFAULT_MAX_WEYL};
use crate::series::Series;

/// How to build the formal group law once the truncation degree is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FglSpec {
    Additive,
    Multiplicative(RingElem),
    /// `(x + y) / (1 + x y)`
    Lorentz,
    /// Entries `(i, j, a_ij)`.
    Custom(Vec<(u32, u32, RingElem)>),
}

impl FglSpec {
    pub fn build(&self, ring: &Ring, trunc: u32) -> Result<FormalGroupLaw> {
        match self {
            FglSpec::Additive => FormalGroupLaw::additive(ring, trunc),
            FglSpec::Multiplicative(b) => FormalGroupLaw::multiplicative(ring, b.clone(), trunc),
            FglSpec::Lorentz => FormalGroupLaw::lorentz(ring, trunc),
            FglSpec::Custom(t) => FormalGroupLaw::custom(ring, trunc, t),
        }
    }
}

/// Default truncation degree `#negative roots + length(w0) + 2`.
pub fn default_trunc(rd: &RootDatum) -> u32 {
    2 * rd.num_positive() as u32 + 2
}

pub struct ContextBuilder {
    datum: RootDatum,
    ring: Ring,
    fgl: FglSpec,
    trunc: Option<u32>,
    max_weyl: usize,
}

impl ContextBuilder {
    pub fn new(datum: RootDatum, ring: Ring, fgl: FglSpec) -> ContextBuilder {
        ContextBuilder { datum, ring, fgl, trunc: None, max_weyl: DEFAULT_MAX_WEYL }
    }

    pub fn trunc(mut self, trunc: Option<u32>) -> Self {
        self.trunc = trunc;
        self
    }

    pub fn max_weyl(mut self, bound: usize) -> Self {
        self.max_weyl = bound;
        self
    }

    pub fn build(self) -> Result<Context> {
        let datum = Arc::new(self.datum);
        let group = Arc::new(WeylGroup::new(datum.clone(), self.max_weyl)?);
        let trunc = self.trunc.unwrap_or_else(|| default_trunc(&datum));
        let fgl = self.fgl.build(&self.ring, trunc)?;
        let algebra = Arc::new(FormalGroupAlgebra::new(fgl, datum.rank())?);
        let mut warnings = Vec::new();
        for b in datum.positive_roots() {
            let d = datum.content(b);
            if d > 1 && !self.ring.integer_is_unit(d) {
                warnings.push(format!(
                    "root {:?} is divisible by {d} in the lattice and {d} is not invertible in {}: \
                     S is not regular for this root (a component of type C^sc); \
                     divisions by it use a per-degree content check",
                    datum.root(b).vector,
                    self.ring.label()
                ));
            }
        }
        if !self.ring.integer_is_regular(2) {
            warnings.push(format!(
                "2 is a zero divisor in {}; the image criterion assumes it is regular",
                self.ring.label()
            ));
        }
        let plans = (0..datum.roots().len())
            .map(|b| algebra.plan(&datum.root(b).vector))
            .collect::<Result<Vec<_>>>()?;
        let root_x: Vec<Series> = (0..datum.roots().len())
            .map(|b| (*algebra.x(&datum.root(b).vector)).clone())
            .collect();
        let mut nu = Vec::with_capacity(datum.num_positive());
        for b in datum.positive_roots() {
            let v = match algebra.fgl().kind() {
                FglKind::Additive => algebra.from_int(-1),
                FglKind::Multiplicative(beta) => algebra.from_int(-1).add(&root_x[b].scale(beta)),
                FglKind::Custom => plans[datum.negate(b)].divide(&root_x[b])?.ok_or_else(|| {
                    Error::arithmetic("x_-beta does not divide x_beta; the formal group law is degenerate")
                })?,
            };
            nu.push(v);
        }
        for w in &warnings {
            warn!("{w}");
        }
        let order = group.order();
        Ok(Context {
            datum,
            group,
            algebra,
            plans,
            root_x,
            nu,
            x_basis: OnceLock::new(),
            bs_basis: OnceLock::new(),
            images: (0..order).map(|_| OnceLock::new()).collect(),
            warnings,
        })
    }
}

pub struct Context {
    datum: Arc<RootDatum>,
    group: Arc<WeylGroup>,
    algebra: Arc<FormalGroupAlgebra>,
    plans: Vec<Arc<DivisionPlan>>,
    root_x: Vec<Series>,
    nu: Vec<Series>,
    x_basis: OnceLock<Vec<QWElem>>,
    bs_basis: OnceLock<Result<Vec<DualElem>>>,
    images: Vec<OnceLock<Vec<Series>>>,
    warnings: Vec<String>,
}

impl Context {
    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn algebra(&self) -> &FormalGroupAlgebra {
        &self.algebra
    }

    pub fn ring(&self) -> &Ring {
        self.algebra.ring()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn trunc(&self) -> u32 {
        self.algebra.trunc()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn zero(&self) -> Series {
        self.algebra.zero()
    }

    pub fn one(&self) -> Series {
        self.algebra.one()
    }

    /// `x_beta` for a root index.
    pub fn x_root(&self, beta: usize) -> &Series {
        &self.root_x[beta]
    }

    /// The unit `x_beta / x_-beta` for a positive root index.
    pub fn nu(&self, beta: usize) -> &Series {
        &self.nu[beta]
    }

    /// `X_{I_w}` for all `w`, indexed by element.
    pub fn x_basis(&self) -> &[QWElem] {
        self.x_basis.get_or_init(|| crate::hecke::x_basis(self))
    }

    /// Bott-Samelson classes `psi_{I_w}` for canonical words, indexed by
    /// element.
    pub fn bs_basis(&self) -> Result<&[DualElem]> {
        self.bs_basis
            .get_or_init(|| crate::dual::canonical_bs_basis(self))
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Product of `x_beta` over the given root indices.
    pub fn x_product(&self, roots: impl IntoIterator<Item = usize>) -> Series {
        roots
            .into_iter()
            .fold(self.one(), |acc, b| acc.mul(&self.root_x[b]))
    }

    /// `x_Pi`, the product of `x_alpha` over all negative roots.
    pub fn x_pi(&self) -> Series {
        self.x_product(self.datum.negative_roots())
    }

    /// `x_{Xi/Xi'}`: product over `Sigma^-_{Xi/Xi'}`.
    pub fn x_relative(&self, xi: &ParabolicSubset, sub: &ParabolicSubset) -> Series {
        self.x_product(xi.relative_negative_roots(sub, &self.datum))
    }

    /// Exact division by `x_beta`; `None` if not divisible. Precision drops by
    /// one.
    pub fn divide_by_root(&self, f: &Series, beta: usize) -> Result<Option<Series>> {
        self.plans[beta].divide(f)
    }

    /// Division that treats precision exhaustion as "not divisible".
    pub(crate) fn try_divide(&self, f: &Series, beta: usize) -> Option<Series> {
        if f.precision() == 0 {
            return None;
        }
        self.plans[beta].divide(f).ok().flatten()
    }

    /// `w(f)`: the substitution `x_i -> x_{w(e_i)}`.
    pub fn act(&self, w: WeylElement, f: &Series) -> Series {
        if w == WeylElement::IDENTITY {
            return f.clone();
        }
        let images = self.images[w.index()].get_or_init(|| {
            let m = self.group.matrix(w);
            (0..self.rank())
                .map(|i| {
                    let col: Vec<i64> = m.iter().map(|r| r[i]).collect();
                    (*self.algebra.x(&col)).clone()
                })
                .collect()
        });
        f.substitute(images)
    }

    pub fn cosets(&self, xi: &ParabolicSubset, sub: &ParabolicSubset) -> Result<CosetTable> {
        CosetTable::new(&self.group, xi, sub)
    }

    pub fn parabolic(&self, indices: &[usize]) -> Result<ParabolicSubset> {
        ParabolicSubset::new(indices.iter().copied(), self.rank())
    }

    /// Element of a 0-based word, validating the letters.
    pub fn element_of_word(&self, word: &[usize]) -> Result<WeylElement> {
        self.group.from_word(word)
    }

    pub(crate) fn precision_error(&self, what: &str, needed_extra: u32) -> Error {
        Error::Precision {
            message: what.to_string(),
            required_trunc: self.trunc() + needed_extra.max(1),
        }
    }
}

impl std::fmt::Debug for Context {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Context")
            .field("datum", &self.datum.label())
            .field("fgl", &self.algebra.fgl().to_string())
            .field("ring", &self.ring().label())
            .field("trunc", &self.trunc())
            .finish()
    }
}
