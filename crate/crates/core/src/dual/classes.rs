use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::hecke::{pushpull_y, QElem};
use crate::root_system::WeylElement;
use crate::series::Series;

use super::elem::{bullet_act, DualElem, Model};
use super::parabolic::parabolic_project;

/// `A_alpha(f) = Y_alpha . f` for the simple root `i`.
pub fn operator_a(i: usize, f: &DualElem, ctx: &Context) -> Result<DualElem> {
    if i >= ctx.rank() {
        return Err(Error::usage(format!("simple root index {} out of range", i + 1)));
    }
    bullet_act(&pushpull_y(i, ctx), f, ctx)
}

/// `A_J = A_{j1} o ... o A_{jm}`: the last letter acts first.
pub fn operator_a_word(word: &[usize], f: &DualElem, ctx: &Context) -> Result<DualElem> {
    word.iter().rev().try_fold(f.clone(), |acc, &i| operator_a(i, &acc, ctx))
}

/// The Bott-Samelson class `psi_I = A_{I^rev}(x_Pi f_e)`, certified to have
/// all coefficients in `S`.
pub fn bott_samelson(word: &[usize], ctx: &Context) -> Result<DualElem> {
    ctx.element_of_word(word)?;
    let start = DualElem::basis(ctx, Model::Borel, WeylElement::IDENTITY).scale_series(&ctx.x_pi(), ctx);
    let psi = word.iter().try_fold(start, |acc, &i| operator_a(i, &acc, ctx))?;
    certify_in_s(&psi, ctx, "Bott-Samelson class")?;
    Ok(psi)
}

pub(crate) fn certify_in_s(f: &DualElem, ctx: &Context, what: &str) -> Result<()> {
    if !f.is_zero() && f.precision(ctx) == 0 {
        return Err(ctx.precision_error(&format!("{what}: no precision left"), 1));
    }
    for (w, q) in f.coeffs() {
        if q.as_series().is_some() {
            continue;
        }
        let name = ctx.group().name(w);
        if q.precision() == 0 {
            return Err(ctx.precision_error(&format!("{what}: coefficient at {name} lost all precision"), 1));
        }
        return Err(Error::arithmetic(format!(
            "{what}: coefficient at {name} does not normalize into S (denominator roots {:?})",
            q.denominator_roots()
        )));
    }
    Ok(())
}

/// `psi_{I_w}` for every `w` with canonical words, built by prefix recursion.
pub(crate) fn canonical_bs_basis(ctx: &Context) -> Result<Vec<DualElem>> {
    let g = ctx.group();
    let mut out: Vec<DualElem> = Vec::with_capacity(g.order());
    for w in g.elements() {
        let psi = match g.word(w).split_last() {
            None => bott_samelson(&[], ctx)?,
            Some((&last, prefix)) => {
                let p = g.from_word(prefix)?;
                let psi = operator_a(last, &out[p.index()], ctx)?;
                certify_in_s(&psi, ctx, "Bott-Samelson class")?;
                psi
            }
        };
        out.push(psi);
    }
    Ok(out)
}

/// The characteristic map `s -> s . 1 = sum_w w(s) f_w`.
pub fn char_map(s: &Series, ctx: &Context) -> DualElem {
    let coeffs = ctx
        .group()
        .elements()
        .map(|w| (w, QElem::from_series(ctx.act(w, s))))
        .collect();
    DualElem::from_parts(Model::Borel, coeffs, u32::MAX)
}

/// Outcome of the image criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// All divisibility conditions hold up to this degree.
    Accept { certified_degree: u32 },
    /// `x_root` does not divide `q_w - q_{s_root w}`.
    Reject { root: usize, element: WeylElement },
}

/// Checks `x_alpha | (q_w - q_{s_alpha w})` for every positive root and
/// every `w`. Parabolic elements are lifted to the Borel model first.
pub fn membership_image(f: &DualElem, ctx: &Context) -> Result<Membership> {
    let f = match f.model() {
        Model::Borel => f.clone(),
        Model::Parabolic(_) => parabolic_project(f, &crate::root_system::ParabolicSubset::empty(), ctx)?,
    };
    let q = f
        .to_series_map()
        .map_err(|w| Error::usage(format!("coefficient at {} is not in S", ctx.group().name(w))))?;
    let g = ctx.group();
    let coeff = |w: WeylElement| -> Series {
        q.get(&w)
            .cloned()
            .unwrap_or_else(|| f.series_coeff(w, ctx).expect("zero coefficients lie in S"))
    };
    let mut certified = u32::MAX;
    for alpha in ctx.datum().positive_roots() {
        let s = g.reflection(alpha);
        for w in g.elements() {
            let sw = g.mul(s, w);
            if sw < w {
                continue;
            }
            let diff = coeff(w).sub(&coeff(sw));
            if diff.precision() == 0 {
                return Err(ctx.precision_error("membership cannot be certified: no precision left", 1));
            }
            match ctx.divide_by_root(&diff, alpha)? {
                Some(quot) => certified = certified.min(quot.precision()),
                None => return Ok(Membership::Reject { root: alpha, element: w }),
            }
        }
    }
    Ok(Membership::Accept { certified_degree: certified.min(ctx.trunc()) })
}

/// Negative roots whose product is the leading value `psi_{I_w}(w)`: all of
/// `Sigma^-` except the negatives of the inversions of `w^{-1}`.
pub fn leading_roots(w: WeylElement, ctx: &Context) -> Vec<usize> {
    let g = ctx.group();
    let rd = ctx.datum();
    let inv = g.inversions(g.inverse(w));
    rd.negative_roots()
        .filter(|&b| !inv.contains(&rd.negate(b)))
        .collect()
}

/// Outcome of expressing an element in the Bott-Samelson basis.
#[derive(Clone, Debug)]
pub enum BsSolve {
    Coeffs {
        coeffs: BTreeMap<WeylElement, Series>,
        certified_degree: u32,
    },
    /// Elimination failed at this element: not in the image.
    NotInImage(WeylElement),
}

/// Coefficients `c_w` in `S` with `f = sum_w c_w psi_{I_w}` for canonical
/// words. Eliminates from the longest elements down, dividing by the leading
/// value `psi_{I_w}(w)` one root at a time.
pub fn to_bs_basis(f: &DualElem, ctx: &Context) -> Result<BsSolve> {
    if *f.model() != Model::Borel {
        return Err(Error::usage("Bott-Samelson expansion needs a Borel-model element"));
    }
    let mut rem = f
        .to_series_map()
        .map_err(|w| Error::usage(format!("coefficient at {} is not in S", ctx.group().name(w))))?;
    let floor = f.precision(ctx);
    let basis = ctx.bs_basis()?;
    let g = ctx.group();
    let mut order: Vec<WeylElement> = g.elements().collect();
    order.sort_by_key(|&w| (Reverse(g.length(w)), w));
    let mut coeffs = BTreeMap::new();
    let mut certified = floor;
    for w in order {
        let Some(mut c) = rem.remove(&w) else {
            let lost = leading_roots(w, ctx).len() as u32;
            certified = certified.min(floor.saturating_sub(lost));
            continue;
        };
        for gamma in leading_roots(w, ctx) {
            if c.precision() == 0 {
                return Err(ctx.precision_error("Bott-Samelson expansion ran out of precision", 1));
            }
            match ctx.divide_by_root(&c, gamma)? {
                Some(q) => c = q,
                None => return Ok(BsSolve::NotInImage(w)),
            }
        }
        certified = certified.min(c.precision());
        if c.is_zero() {
            continue;
        }
        for (v, q) in basis[w.index()].coeffs().filter(|&(v, _)| v != w) {
            let term = q.as_series().expect("basis classes lie in S").mul(&c);
            let entry = rem.entry(v).or_insert_with(|| Series::zero(ctx.ring(), ctx.rank(), floor));
            *entry = entry.sub(&term);
            if entry.is_zero() {
                let p = entry.precision();
                rem.remove(&v);
                certified = certified.min(p);
            }
        }
        coeffs.insert(w, c);
    }
    if let Some((&w, _)) = rem.iter().find(|(_, s)| !s.is_zero()) {
        return Ok(BsSolve::NotInImage(w));
    }
    Ok(BsSolve::Coeffs { coeffs, certified_degree: certified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ContextBuilder, FglSpec};
    use crate::ring::Ring;
    use crate::root_system::{LatticeKind, RootDatum};
    use crate::series::Monomial;

    fn ctx(label: &str, kind: LatticeKind, fgl: FglSpec) -> Context {
        let rd = RootDatum::from_dynkin(label, kind).unwrap();
        ContextBuilder::new(rd, Ring::Integers, fgl).build().unwrap()
    }

    fn laws() -> Vec<FglSpec> {
        vec![FglSpec::Additive, FglSpec::Multiplicative(Ring::Integers.one()), FglSpec::Lorentz]
    }

    fn var(c: &Context, i: usize) -> Series {
        c.algebra().variable(i)
    }

    #[test]
    fn rank_one_classes() {
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Additive);
        let psi0 = bott_samelson(&[], &c).unwrap();
        let want = DualElem::from_series(&c, Model::Borel, [(WeylElement::IDENTITY, var(&c, 0).neg())]).unwrap();
        assert!(psi0.equals(&want, &c));
        for fgl in laws() {
            let c = ctx("A1", LatticeKind::Adjoint, fgl);
            let psi1 = bott_samelson(&[0], &c).unwrap();
            assert!(psi1.equals(&DualElem::unit(&c, Model::Borel), &c));
        }
    }

    #[test]
    fn a2_simple_class_matches_normal_weights() {
        let c = ctx("A2", LatticeKind::Adjoint, FglSpec::Additive);
        let g = c.group();
        let rd = c.datum();
        let psi = bott_samelson(&[0], &c).unwrap();
        // x_{-alpha2} x_{-alpha1-alpha2}
        let want = c.x_root(rd.negate(1)).mul(c.x_root(rd.negate(2)));
        for w in [WeylElement::IDENTITY, g.simple(0)] {
            assert!(psi.series_coeff(w, &c).unwrap().eq_up_to_precision(&want));
        }
        assert_eq!(psi.support().count(), 2);
    }

    #[test]
    fn leading_values_are_products_of_roots() {
        for label in ["A2", "B2"] {
            for fgl in laws() {
                let c = ctx(label, LatticeKind::Adjoint, fgl);
                let basis = c.bs_basis().unwrap();
                for w in c.group().elements() {
                    let lead = basis[w.index()].series_coeff(w, &c).unwrap();
                    let want = c.x_product(leading_roots(w, &c));
                    assert!(lead.eq_up_to_precision(&want), "{label} {}", c.group().name(w));
                    for v in basis[w.index()].support() {
                        assert!(c.group().bruhat_leq(v, w));
                    }
                }
            }
        }
    }

    #[test]
    fn char_map_values() {
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Additive);
        let x = var(&c, 0);
        let f = char_map(&x, &c);
        let s = c.group().simple(0);
        let want = DualElem::from_series(&c, Model::Borel, [(WeylElement::IDENTITY, x.clone()), (s, x.neg())]).unwrap();
        assert!(f.equals(&want, &c));
        assert!(char_map(&c.one(), &c).equals(&DualElem::unit(&c, Model::Borel), &c));
        let c2 = ctx("A2", LatticeKind::SimplyConnected, FglSpec::Multiplicative(Ring::Integers.one()));
        let (a, b) = (var(&c2, 0), var(&c2, 1).add(&var(&c2, 0).mul(&var(&c2, 1))));
        let lhs = char_map(&a, &c2).mul(&char_map(&b, &c2), &c2).unwrap();
        assert!(lhs.equals(&char_map(&a.mul(&b), &c2), &c2));
    }

    #[test]
    fn membership_examples() {
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Additive);
        let fe = DualElem::basis(&c, Model::Borel, WeylElement::IDENTITY);
        assert_eq!(
            membership_image(&fe, &c).unwrap(),
            Membership::Reject { root: 0, element: WeylElement::IDENTITY }
        );
        let one = DualElem::unit(&c, Model::Borel);
        assert!(matches!(membership_image(&one, &c).unwrap(), Membership::Accept { .. }));
        let c = ctx("A2", LatticeKind::Adjoint, FglSpec::Multiplicative(Ring::Integers.one()));
        for f in c.bs_basis().unwrap() {
            assert!(matches!(membership_image(f, &c).unwrap(), Membership::Accept { .. }));
        }
        for w in c.group().elements() {
            let fw = DualElem::basis(&c, Model::Borel, w);
            assert!(matches!(membership_image(&fw, &c).unwrap(), Membership::Reject { .. }));
        }
    }

    #[test]
    fn expansion_in_rank_one() {
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Additive);
        let s = c.group().simple(0);
        let BsSolve::Coeffs { coeffs, .. } = to_bs_basis(&DualElem::unit(&c, Model::Borel), &c).unwrap() else {
            panic!("unit is in the image");
        };
        assert_eq!(coeffs.len(), 1);
        assert!(coeffs[&s].eq_up_to_precision(&c.one()));
        let x = var(&c, 0);
        let BsSolve::Coeffs { coeffs, .. } = to_bs_basis(&char_map(&x, &c), &c).unwrap() else {
            panic!("char_map lands in the image");
        };
        assert!(coeffs[&WeylElement::IDENTITY].eq_up_to_precision(&c.algebra().from_int(-2)));
        assert!(coeffs[&s].eq_up_to_precision(&x.neg()));
        let fe = DualElem::basis(&c, Model::Borel, WeylElement::IDENTITY);
        assert!(matches!(to_bs_basis(&fe, &c).unwrap(), BsSolve::NotInImage(_)));
    }

    #[test]
    fn expansion_recovers_basis_and_products() {
        for fgl in laws() {
            let c = ctx("A2", LatticeKind::SimplyConnected, fgl);
            let basis = c.bs_basis().unwrap().to_vec();
            for w in c.group().elements() {
                let BsSolve::Coeffs { coeffs, .. } = to_bs_basis(&basis[w.index()], &c).unwrap() else {
                    panic!("basis element rejected");
                };
                assert_eq!(coeffs.len(), 1);
                assert!(coeffs[&w].eq_up_to_precision(&c.one()));
            }
            let m = Monomial::from_exponents(&[1, 1]).unwrap();
            let s = Series::from_terms(c.ring(), 2, c.trunc(), [(m, c.ring().one())]);
            let f = char_map(&s, &c).mul(&basis[1], &c).unwrap();
            let BsSolve::Coeffs { coeffs, .. } = to_bs_basis(&f, &c).unwrap() else {
                panic!("product rejected");
            };
            let rebuilt = coeffs.iter().fold(DualElem::zero(Model::Borel), |acc, (w, k)| {
                acc.add(&basis[w.index()].scale_series(k, &c), &c).unwrap()
            });
            assert!(rebuilt.equals(&f, &c));
        }
    }

    #[test]
    fn pushpull_squares_to_kappa() {
        for fgl in laws() {
            let c = ctx("B2", LatticeKind::Adjoint, fgl);
            let f = c.bs_basis().unwrap()[2].clone();
            for i in 0..2 {
                let k = crate::hecke::kappa(i, &c).unwrap();
                let once = operator_a(i, &f, &c).unwrap();
                let twice = operator_a(i, &once, &c).unwrap();
                let want = bullet_act(&crate::hecke::QWElem::scalar(QElem::from_series(k)), &once, &c).unwrap();
                assert!(twice.equals(&want, &c));
            }
        }
    }
}
