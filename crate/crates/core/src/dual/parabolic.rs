use std::collections::BTreeMap;

use rand::Rng;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::hecke::{pushpull_parabolic, QElem, QWElem};
use crate::root_system::{ParabolicSubset, WeylElement};

use super::classes::{bott_samelson, certify_in_s};
use super::elem::{bullet_act, DualElem, Model};

/// `p*`: from the model of `Xi` to the finer model of `sub`, copying each
/// coefficient along its coset.
pub fn parabolic_project(f: &DualElem, sub: &ParabolicSubset, ctx: &Context) -> Result<DualElem> {
    let xi = f.model().subset();
    if !sub.is_subset_of(&xi) {
        return Err(Error::usage(format!("{sub} is not contained in {xi}")));
    }
    let coarse = ctx.cosets(&xi, &ParabolicSubset::empty())?;
    let mut out = DualElem::zero(Model::parabolic(sub.clone()));
    for w in Model::parabolic(sub.clone()).index_set(ctx) {
        if let Some(q) = f.coeff_ref(coarse.min_rep(w)) {
            out.insert(w, q.clone());
        }
    }
    Ok(with_floor(out, f.floor()))
}

/// `d*`: from the model of `Xi'` to the coarser model of `sup`, summing
/// coefficients over each coset.
pub fn parabolic_sum(f: &DualElem, sup: &ParabolicSubset, ctx: &Context) -> Result<DualElem> {
    let sub = f.model().subset();
    if !sub.is_subset_of(sup) {
        return Err(Error::usage(format!("{sub} is not contained in {sup}")));
    }
    let coarse = ctx.cosets(sup, &ParabolicSubset::empty())?;
    let mut acc: BTreeMap<WeylElement, QElem> = BTreeMap::new();
    for (w, q) in f.coeffs() {
        let r = coarse.min_rep(w);
        let next = match acc.remove(&r) {
            None => q.clone(),
            Some(a) => a.add(q, ctx),
        };
        acc.insert(r, next);
    }
    Ok(DualElem::from_parts(Model::parabolic(sup.clone()), acc, f.floor()))
}

fn with_floor(f: DualElem, floor: u32) -> DualElem {
    let model = f.model().clone();
    let coeffs = f.coeffs().map(|(w, q)| (w, q.clone())).collect();
    DualElem::from_parts(model, coeffs, floor.min(f.floor()))
}

fn lift(f: &DualElem, ctx: &Context) -> Result<DualElem> {
    match f.model() {
        Model::Borel => Ok(f.clone()),
        Model::Parabolic(_) => parabolic_project(f, &ParabolicSubset::empty(), ctx),
    }
}

/// First `(i, u)` with `(delta_{s_i} . f)_u != f_u`, for `i` in `Xi`; `None`
/// when `f` is `W_Xi`-invariant.
pub fn invariance_witness(f: &DualElem, xi: &ParabolicSubset, ctx: &Context) -> Result<Option<(usize, WeylElement)>> {
    let f = lift(f, ctx)?;
    let g = ctx.group();
    for &i in xi.indices() {
        for u in g.elements() {
            let us = g.mul_simple_right(u, i);
            if us < u {
                continue;
            }
            if !f.coeff(u, ctx).equals(&f.coeff(us, ctx), ctx) {
                return Ok(Some((i, u)));
            }
        }
    }
    Ok(None)
}

pub fn is_invariant(f: &DualElem, xi: &ParabolicSubset, ctx: &Context) -> Result<bool> {
    Ok(invariance_witness(f, xi, ctx)?.is_none())
}

/// The unique `g` in the model of `Xi` with `p*(g) = f`, for a
/// `W_Xi`-invariant Borel-model `f`.
pub fn section(f: &DualElem, xi: &ParabolicSubset, ctx: &Context) -> Result<DualElem> {
    if *f.model() != Model::Borel {
        return Err(Error::usage("section expects a Borel-model element"));
    }
    if let Some((i, u)) = invariance_witness(f, xi, ctx)? {
        return Err(Error::usage(format!(
            "element is not invariant under W_{xi}: delta_s{} changes the coefficient at {}",
            i + 1,
            ctx.group().name(u)
        )));
    }
    let model = Model::parabolic(xi.clone());
    let mut out = DualElem::zero(model.clone());
    for w in model.index_set(ctx) {
        if let Some(q) = f.coeff_ref(w) {
            out.insert(w, q.clone());
        }
    }
    Ok(with_floor(out, f.floor()))
}

/// `A_{Xi/Xi'}(f) = Y_{Xi/Xi'} . f` on `W_{Xi'}`-invariant Borel-model
/// elements.
pub fn operator_a_parabolic(
    xi: &ParabolicSubset,
    sub: &ParabolicSubset,
    f: &DualElem,
    ctx: &Context,
) -> Result<DualElem> {
    if *f.model() != Model::Borel {
        return Err(Error::usage("the push-pull operator acts on Borel-model elements"));
    }
    if let Some((i, u)) = invariance_witness(f, sub, ctx)? {
        return Err(Error::usage(format!(
            "push-pull operator for {xi}/{sub} needs a W_{sub}-invariant input; \
             delta_s{} changes the coefficient at {}",
            i + 1,
            ctx.group().name(u)
        )));
    }
    bullet_act(&pushpull_parabolic(xi, sub, ctx)?, f, ctx)
}

/// The push-forward `A_{Xi/Xi'}` from the model of `Xi'` to that of `Xi`:
/// lift, apply `Y_{Xi/Xi'}`, take the section.
pub fn parabolic_push(f: &DualElem, xi: &ParabolicSubset, ctx: &Context) -> Result<DualElem> {
    let sub = f.model().subset();
    let y = pushpull_parabolic(xi, &sub, ctx)?;
    push_with(f, xi, &y, ctx)
}

fn push_with(f: &DualElem, xi: &ParabolicSubset, y: &QWElem, ctx: &Context) -> Result<DualElem> {
    let lifted = lift(f, ctx)?;
    let pushed = bullet_act(y, &lifted, ctx)?;
    section(&pushed, xi, ctx).map_err(|e| match e {
        Error::Usage(m) => Error::arithmetic(format!("push-forward lost invariance: {m}")),
        other => other,
    })
}

/// The push-forward computed as `d*(1/x_{Xi/Xi'} . f)` directly in the
/// parabolic models, evaluating `w(1/x_{Xi/Xi'})` at the given coset
/// representatives (minimal ones when absent from `reps`).
pub fn parabolic_push_direct(
    f: &DualElem,
    xi: &ParabolicSubset,
    reps: &BTreeMap<WeylElement, WeylElement>,
    ctx: &Context,
) -> Result<DualElem> {
    let sub = f.model().subset();
    if !sub.is_subset_of(xi) {
        return Err(Error::usage(format!("{sub} is not contained in {xi}")));
    }
    let fine = ctx.cosets(&sub, &ParabolicSubset::empty())?;
    let inv = QElem::fraction(ctx, ctx.one(), xi.relative_negative_roots(&sub, ctx.datum()));
    let mut scaled = DualElem::zero(f.model().clone());
    for (w, q) in f.coeffs() {
        let rep = reps.get(&w).copied().unwrap_or(w);
        if fine.min_rep(rep) != w {
            return Err(Error::usage(format!(
                "{} does not represent the coset of {}",
                ctx.group().name(rep),
                ctx.group().name(w)
            )));
        }
        scaled.insert(w, q.mul(&inv.act(rep, ctx), ctx));
    }
    parabolic_sum(&with_floor(scaled, f.floor()), xi, ctx)
}

/// `Y_{Xi/Xi'} = sum_w delta_w (1/x_{Xi/Xi'})` over the given
/// representatives of `W_Xi / W_Xi'`.
pub fn pushpull_parabolic_with(
    xi: &ParabolicSubset,
    sub: &ParabolicSubset,
    reps: &[WeylElement],
    ctx: &Context,
) -> Result<QWElem> {
    let table = ctx.cosets(xi, sub)?;
    let fine = ctx.cosets(sub, &ParabolicSubset::empty())?;
    let mut seen: Vec<WeylElement> = reps.iter().map(|&w| fine.min_rep(w)).collect();
    seen.sort();
    seen.dedup();
    if seen.len() != reps.len() || seen != table.relative_representatives() {
        return Err(Error::usage(format!(
            "representatives do not form a transversal of W_{xi}/W_{sub}"
        )));
    }
    let base = QElem::fraction(ctx, ctx.one(), xi.relative_negative_roots(sub, ctx.datum()));
    Ok(QWElem::from_coeffs(reps.iter().map(|&w| (w, base.act(w, ctx)))))
}

/// A uniformly random representative of every coset in `W_Xi / W_Xi'`.
pub fn random_representatives<R: Rng>(
    xi: &ParabolicSubset,
    sub: &ParabolicSubset,
    rng: &mut R,
    ctx: &Context,
) -> Result<Vec<WeylElement>> {
    let table = ctx.cosets(xi, sub)?;
    let small = ctx.cosets(sub, &ParabolicSubset::empty())?;
    let g = ctx.group();
    Ok(table
        .relative_representatives()
        .iter()
        .map(|&r| {
            let u = small.subgroup()[rng.gen_range(0..small.subgroup().len())];
            g.mul(r, u)
        })
        .collect())
}

/// Compares the push-forward built from minimal representatives with the
/// ones built from `trials` random choices of representatives.
pub fn representative_cross_check<R: Rng>(
    f: &DualElem,
    xi: &ParabolicSubset,
    trials: usize,
    rng: &mut R,
    ctx: &Context,
) -> Result<bool> {
    let sub = f.model().subset();
    let canonical = parabolic_push(f, xi, ctx)?;
    for _ in 0..trials {
        let reps = random_representatives(xi, &sub, rng, ctx)?;
        let y = pushpull_parabolic_with(xi, &sub, &reps, ctx)?;
        if !push_with(f, xi, &y, ctx)?.equals(&canonical, ctx) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The class `A_Xi(psi_I)` in the model of `Xi`, certified in `S`.
pub fn parabolic_class(xi: &ParabolicSubset, word: &[usize], ctx: &Context) -> Result<DualElem> {
    let psi = bott_samelson(word, ctx)?;
    if xi.is_empty() {
        return Ok(psi);
    }
    let class = parabolic_push(&psi, xi, ctx)?;
    certify_in_s(&class, ctx, "parabolic Bott-Samelson class")?;
    Ok(class)
}

/// Both sides of `x_{Pi/Xi} . f_w = w(x_{Pi/Xi}) f_w`.
#[derive(Clone, Debug)]
pub struct EulerCheck {
    pub lhs: DualElem,
    pub rhs: DualElem,
    pub holds: bool,
}

/// Computes `x_{Pi/Xi} . f_w` through the Borel model and compares it with
/// `w(x_{Pi/Xi}) f_w`, for `w` in `W^Xi`.
pub fn euler_class(xi: &ParabolicSubset, w: WeylElement, ctx: &Context) -> Result<EulerCheck> {
    let model = Model::parabolic(xi.clone());
    let table = ctx.cosets(xi, &ParabolicSubset::empty())?;
    if table.min_rep(w) != w {
        return Err(Error::usage(format!(
            "{} is not a minimal representative for {xi}",
            ctx.group().name(w)
        )));
    }
    let euler = ctx.x_relative(&ParabolicSubset::full(ctx.rank()), xi);
    let fw = DualElem::basis(ctx, model.clone(), w);
    let lifted = lift(&fw, ctx)?;
    let acted = bullet_act(&QWElem::scalar(QElem::from_series(euler.clone())), &lifted, ctx)?;
    let lhs = section(&acted, xi, ctx)?;
    let rhs = fw.scale_series(&ctx.act(w, &euler), ctx);
    let holds = lhs.equals(&rhs, ctx);
    Ok(EulerCheck { lhs, rhs, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ContextBuilder, FglSpec};
    use crate::ring::Ring;
    use crate::root_system::{LatticeKind, RootDatum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(label: &str, kind: LatticeKind, fgl: FglSpec) -> Context {
        let rd = RootDatum::from_dynkin(label, kind).unwrap();
        ContextBuilder::new(rd, Ring::Integers, fgl).build().unwrap()
    }

    #[test]
    fn project_and_sum_in_a2() {
        let c = ctx("A2", LatticeKind::Adjoint, FglSpec::Additive);
        let xi = c.parabolic(&[0]).unwrap();
        let fe = DualElem::basis(&c, Model::parabolic(xi.clone()), WeylElement::IDENTITY);
        let up = parabolic_project(&fe, &ParabolicSubset::empty(), &c).unwrap();
        let s1 = c.group().simple(0);
        let want = DualElem::from_coeffs(&c, Model::Borel, [(WeylElement::IDENTITY, QElem::one(&c)), (s1, QElem::one(&c))]).unwrap();
        assert!(up.equals(&want, &c));
        let down = parabolic_sum(&up, &xi, &c).unwrap();
        assert!(down.equals(&fe.scale_series(&c.algebra().from_int(2), &c), &c));
        assert!(parabolic_project(&fe, &xi, &c).unwrap().equals(&fe, &c));
    }

    #[test]
    fn projection_is_multiplicative() {
        let c = ctx("B2", LatticeKind::Adjoint, FglSpec::Lorentz);
        let xi = c.parabolic(&[1]).unwrap();
        let a = parabolic_class(&xi, &[0], &c).unwrap();
        let b = parabolic_class(&xi, &[], &c).unwrap();
        let e = ParabolicSubset::empty();
        let lhs = parabolic_project(&a.mul(&b, &c).unwrap(), &e, &c).unwrap();
        let rhs = parabolic_project(&a, &e, &c)
            .unwrap()
            .mul(&parabolic_project(&b, &e, &c).unwrap(), &c)
            .unwrap();
        assert!(lhs.equals(&rhs, &c));
    }

    #[test]
    fn invariance_and_sections() {
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Additive);
        let full = ParabolicSubset::full(1);
        assert!(is_invariant(&DualElem::unit(&c, Model::Borel), &full, &c).unwrap());
        let fe = DualElem::basis(&c, Model::Borel, WeylElement::IDENTITY);
        assert!(!is_invariant(&fe, &full, &c).unwrap());
        assert!(matches!(section(&fe, &full, &c), Err(Error::Usage(_))));
        let c = ctx("A2", LatticeKind::Adjoint, FglSpec::Multiplicative(Ring::Integers.one()));
        let xi = c.parabolic(&[0]).unwrap();
        for f in c.bs_basis().unwrap() {
            let g = operator_a_parabolic(&xi, &ParabolicSubset::empty(), f, &c).unwrap();
            assert!(is_invariant(&g, &xi, &c).unwrap());
        }
        let sub = c.parabolic(&[1]).unwrap();
        assert!(matches!(
            operator_a_parabolic(&ParabolicSubset::full(2), &sub, &c.bs_basis().unwrap()[0], &c),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn parabolic_class_examples() {
        let c = ctx("A2", LatticeKind::Adjoint, FglSpec::Additive);
        let rd = c.datum();
        let xi = c.parabolic(&[1]).unwrap();
        let class = parabolic_class(&xi, &[], &c).unwrap();
        let want = c.x_root(rd.negate(0)).mul(c.x_root(rd.negate(2)));
        assert!(class.series_coeff(WeylElement::IDENTITY, &c).unwrap().eq_up_to_precision(&want));
        let empty = parabolic_class(&ParabolicSubset::empty(), &[0, 1], &c).unwrap();
        assert!(empty.equals(&bott_samelson(&[0, 1], &c).unwrap(), &c));
    }

    #[test]
    fn push_forward_to_a_point_of_the_top_class() {
        let full = ParabolicSubset::full(2);
        for fgl in [FglSpec::Additive, FglSpec::Multiplicative(Ring::Integers.one()), FglSpec::Lorentz] {
            let c = ctx("A2", LatticeKind::Adjoint, fgl.clone());
            let w0 = c.group().longest();
            let word = c.group().word(w0).to_vec();
            let top = parabolic_class(&full, &word, &c).unwrap();
            let value = top.series_coeff(WeylElement::IDENTITY, &c).unwrap();
            // the point class pushes forward to 1; the top class is the
            // fundamental class, whose push-forward depends on the law
            let point = parabolic_class(&full, &[], &c).unwrap();
            assert!(point.series_coeff(WeylElement::IDENTITY, &c).unwrap().eq_up_to_precision(&c.one()));
            if fgl == FglSpec::Additive {
                assert!(value.is_zero());
            } else if let FglSpec::Multiplicative(_) = fgl {
                assert!(value.eq_up_to_precision(&c.one()));
            }
        }
    }

    #[test]
    fn push_forward_paths_agree() {
        let c = ctx("A2", LatticeKind::SimplyConnected, FglSpec::Lorentz);
        let xi1 = c.parabolic(&[0]).unwrap();
        let full = ParabolicSubset::full(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for f in c.bs_basis().unwrap().iter().take(4) {
            let direct = parabolic_push(f, &full, &c).unwrap();
            let mid = parabolic_push(f, &xi1, &c).unwrap();
            assert!(parabolic_push(&mid, &full, &c).unwrap().equals(&direct, &c));
            let other = parabolic_push_direct(&mid, &full, &BTreeMap::new(), &c).unwrap();
            assert!(other.equals(&direct, &c));
            assert!(representative_cross_check(&mid, &full, 3, &mut rng, &c).unwrap());
        }
    }

    #[test]
    fn euler_classes() {
        for label in ["A2", "B2"] {
            let c = ctx(label, LatticeKind::Adjoint, FglSpec::Multiplicative(Ring::Integers.one()));
            for idx in [vec![], vec![0], vec![1], vec![0, 1]] {
                let xi = c.parabolic(&idx).unwrap();
                for &w in c.cosets(&xi, &ParabolicSubset::empty()).unwrap().representatives() {
                    assert!(euler_class(&xi, w, &c).unwrap().holds);
                }
            }
        }
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Additive);
        let s = c.group().simple(0);
        let check = euler_class(&ParabolicSubset::empty(), s, &c).unwrap();
        let x = c.algebra().variable(0);
        assert!(check.lhs.equals(&DualElem::from_series(&c, Model::Borel, [(s, x)]).unwrap(), &c));
    }
}
