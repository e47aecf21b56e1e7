//! The invariant suite: structural identities of the twisted group algebra
//! and its dual, checked exhaustively over small index sets and on seeded
//! random samples.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::Context;
use crate::dual::{
    bott_samelson, bullet_act, char_map, euler_class, is_invariant, membership_image, operator_a,
    operator_a_parabolic, pairing, pairing_matrix, parabolic_project, parabolic_push,
    parabolic_push_direct, representative_cross_check, section, to_bs_basis, BsSolve, DualElem,
    Membership, Model,
};
use crate::error::Result;
use crate::fgl::FglKind;
use crate::hecke::{demazure_x, kappa, pushpull_y, word_element, QElem, QWElem, WordKind};
use crate::root_system::{ParabolicSubset, WeylElement};
use crate::series::{Monomial, Series};

/// Outcome of one property.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name, passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random samples per sampled property.
    pub samples: usize,
    /// Also rebuild push-forwards from random coset representatives.
    pub verify_representatives: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0x5eed, samples: 20, verify_representatives: false }
    }
}

type Property = fn(&Context, &SuiteOptions, &mut ChaCha8Rng) -> Result<Check>;

const PROPERTIES: &[(&str, Property)] = &[
    ("kappa-in-S", kappa_in_s),
    ("demazure-relation", demazure_relation),
    ("pushpull-relation", pushpull_relation),
    ("twisted-associativity", twisted_associativity),
    ("braid-word-independence", braid_word_independence),
    ("bullet-module-law", bullet_module_law),
    ("pushpull-square", pushpull_square),
    ("localization-formula", localization_formula),
    ("bott-samelson-recursion", bott_samelson_recursion),
    ("bott-samelson-landing", bott_samelson_landing),
    ("image-criterion", image_criterion),
    ("word-choice-change", word_choice_change),
    ("euler-classes", euler_classes),
    ("pullback-multiplicative", pullback_multiplicative),
    ("invariants", invariants),
    ("parabolic-coherence", parabolic_coherence),
    ("representative-independence", representative_independence),
    ("projection-formula", projection_formula),
    ("pairing-nondegenerate", pairing_nondegenerate),
];

/// Names of all properties, in suite order.
pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|(n, _)| *n).collect()
}

/// Runs every property; failures and errors are reported, not raised.
pub fn run_suite(ctx: &Context, opts: &SuiteOptions) -> Vec<Check> {
    PROPERTIES
        .iter()
        .enumerate()
        .map(|(k, (name, prop))| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
            prop(ctx, opts, &mut rng).unwrap_or_else(|e| Check::new(name, false, format!("error: {e}")))
        })
        .collect()
}

/// Runs one property by name.
pub fn run_property(name: &str, ctx: &Context, opts: &SuiteOptions) -> Option<Check> {
    let k = PROPERTIES.iter().position(|(n, _)| *n == name)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k as u64));
    Some(PROPERTIES[k].1(ctx, opts, &mut rng).unwrap_or_else(|e| Check::new(PROPERTIES[k].0, false, format!("error: {e}"))))
}

/// A random element of `S`: small integer combination of monomials of
/// degree at most 2.
pub fn random_series<R: Rng>(rng: &mut R, ctx: &Context) -> Series {
    let n = ctx.rank();
    let ring = ctx.ring();
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=2) {
            e[rng.gen_range(0..n)] += 1;
        }
        let c = rng.gen_range(-3i64..=3);
        terms.push((Monomial::from_exponents(&e).expect("within bounds"), ring.from_i64(c)));
    }
    Series::from_terms(ring, n, ctx.trunc(), terms)
}

/// A random element of `Q`: a random series over at most one root.
pub fn random_qelem<R: Rng>(rng: &mut R, ctx: &Context) -> QElem {
    let num = random_series(rng, ctx);
    let roots = ctx.datum().roots().len();
    if rng.gen_bool(0.5) {
        QElem::fraction(ctx, num, [rng.gen_range(0..roots)])
    } else {
        QElem::from_series(num)
    }
}

/// A random element of `Q_W` with up to three terms.
pub fn random_qw<R: Rng>(rng: &mut R, ctx: &Context) -> QWElem {
    let g = ctx.group();
    let terms: Vec<(WeylElement, QElem)> = (0..rng.gen_range(1..=3))
        .map(|_| (g.element(rng.gen_range(0..g.order())), random_qelem(rng, ctx)))
        .collect();
    terms.into_iter().fold(QWElem::zero(), |mut acc, (w, q)| {
        acc.add_term(w, q, ctx);
        acc
    })
}

/// A random class: an `S`-combination of a few Bott-Samelson classes.
pub fn random_class<R: Rng>(rng: &mut R, ctx: &Context) -> Result<DualElem> {
    let basis = ctx.bs_basis()?;
    let mut f = DualElem::zero(Model::Borel);
    for _ in 0..rng.gen_range(1..=3) {
        let psi = basis.choose(rng).expect("nonempty basis");
        f = f.add(&psi.scale_series(&random_series(rng, ctx), ctx), ctx)?;
    }
    Ok(f)
}

/// Parabolic subsets used by exhaustive checks: all of them up to rank 3,
/// otherwise the singletons, the empty set and `Pi`.
pub fn test_subsets(rank: usize) -> Vec<ParabolicSubset> {
    let sets: Vec<Vec<usize>> = if rank <= 3 {
        (0u32..1 << rank)
            .map(|m| (0..rank).filter(|i| m & (1 << i) != 0).collect())
            .collect()
    } else {
        let mut v = vec![vec![]];
        v.extend((0..rank).map(|i| vec![i]));
        v.push((0..rank).collect());
        v
    };
    sets.into_iter()
        .map(|s| ParabolicSubset::new(s, rank).expect("indices in range"))
        .collect()
}

fn kappa_in_s(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let rd = ctx.datum();
    let fgl = ctx.algebra().fgl();
    let expected = match fgl.kind() {
        FglKind::Additive => Some(ctx.zero()),
        FglKind::Multiplicative(b) => Some(ctx.algebra().constant(b.clone())),
        FglKind::Custom => None,
    };
    for b in rd.positive_roots() {
        let k = QElem::inv_root(ctx, b).add(&QElem::inv_root(ctx, rd.negate(b)), ctx);
        let Some(s) = k.as_series() else {
            return Ok(Check::new("kappa-in-S", false, format!("root {:?} leaves a denominator", rd.root(b).coords)));
        };
        if let Some(e) = &expected {
            if !s.eq_up_to_precision(e) {
                return Ok(Check::new("kappa-in-S", false, format!("root {:?}: kappa = {s}", rd.root(b).coords)));
            }
        }
    }
    Ok(Check::new("kappa-in-S", true, format!("{} positive roots", rd.num_positive())))
}

fn demazure_relation(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    for i in 0..ctx.rank() {
        let lhs = QWElem::delta(ctx.group().simple(i), ctx);
        let x = QWElem::scalar(QElem::from_series(ctx.x_root(i).clone()));
        let rhs = QWElem::delta(WeylElement::IDENTITY, ctx).sub(&x.mul(&demazure_x(i, ctx), ctx), ctx);
        if !lhs.equals(&rhs, ctx) {
            return Ok(Check::new("demazure-relation", false, format!("fails for s{}", i + 1)));
        }
    }
    Ok(Check::new("demazure-relation", true, "delta_s = 1 - x X for every simple root"))
}

fn pushpull_relation(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    for i in 0..ctx.rank() {
        let k = QWElem::scalar(QElem::from_series(kappa(i, ctx)?));
        if !pushpull_y(i, ctx).equals(&k.sub(&demazure_x(i, ctx), ctx), ctx) {
            return Ok(Check::new("pushpull-relation", false, format!("fails for s{}", i + 1)));
        }
    }
    Ok(Check::new("pushpull-relation", true, "Y = kappa - X for every simple root"))
}

fn twisted_associativity(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    for k in 0..opts.samples {
        let (a, b, c) = (random_qw(rng, ctx), random_qw(rng, ctx), random_qw(rng, ctx));
        let lhs = a.mul(&b, ctx).mul(&c, ctx);
        let rhs = a.mul(&b.mul(&c, ctx), ctx);
        if !lhs.equals(&rhs, ctx) {
            return Ok(Check::new("twisted-associativity", false, format!("sample {k}")));
        }
    }
    Ok(Check::new("twisted-associativity", true, format!("{} random triples", opts.samples)))
}

/// Braid words `(i, j, i, ...)` and `(j, i, j, ...)` of length `m_ij`.
pub fn braid_pairs(ctx: &Context) -> Vec<(Vec<usize>, Vec<usize>)> {
    let g = ctx.group();
    let mut out = Vec::new();
    for i in 0..ctx.rank() {
        for j in i + 1..ctx.rank() {
            let (si, sj) = (g.simple(i), g.simple(j));
            let mut m = 1;
            let mut p = g.mul(si, sj);
            while p != WeylElement::IDENTITY {
                p = g.mul(p, g.mul(si, sj));
                m += 1;
            }
            let a: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
            let b: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
            out.push((a, b));
        }
    }
    out
}

fn braid_word_independence(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    // only laws of the form x + y + a x y are word-independent
    let expect = ctx.algebra().fgl().table().all(|(i, j, _)| i == 1 && j == 1);
    let pairs = braid_pairs(ctx);
    if pairs.is_empty() {
        return Ok(Check::new("braid-word-independence", true, "no braid relations in rank one"));
    }
    let mut independent = true;
    for (a, b) in pairs {
        let xa = word_element(WordKind::X, &a, ctx);
        let xb = word_element(WordKind::X, &b, ctx);
        independent &= xa.equals(&xb, ctx);
    }
    let detail = if independent { "X braid words agree" } else { "X braid words differ" };
    Ok(Check::new("braid-word-independence", independent == expect, detail))
}

fn bullet_module_law(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    for k in 0..opts.samples {
        let (a, b) = (random_qw(rng, ctx), random_qw(rng, ctx));
        let f = random_class(rng, ctx)?;
        let lhs = bullet_act(&a.mul(&b, ctx), &f, ctx)?;
        let rhs = bullet_act(&a, &bullet_act(&b, &f, ctx)?, ctx)?;
        if !lhs.equals(&rhs, ctx) {
            return Ok(Check::new("bullet-module-law", false, format!("sample {k}")));
        }
    }
    Ok(Check::new("bullet-module-law", true, format!("{} random triples", opts.samples)))
}

fn pushpull_square(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    for k in 0..opts.samples {
        let f = random_class(rng, ctx)?;
        let i = rng.gen_range(0..ctx.rank());
        let once = operator_a(i, &f, ctx)?;
        let twice = operator_a(i, &once, ctx)?;
        let scaled = bullet_act(&QWElem::scalar(QElem::from_series(kappa(i, ctx)?)), &once, ctx)?;
        if !twice.equals(&scaled, ctx) {
            return Ok(Check::new("pushpull-square", false, format!("sample {k}, s{}", i + 1)));
        }
    }
    Ok(Check::new("pushpull-square", true, format!("{} random classes", opts.samples)))
}

fn localization_formula(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let g = ctx.group();
    for w in g.elements() {
        let fw = DualElem::basis(ctx, Model::Borel, w);
        for i in 0..ctx.rank() {
            let got = operator_a(i, &fw, ctx)?;
            let ws = g.mul_simple_right(w, i);
            let q = QElem::inv_root(ctx, ctx.datum().negate(g.act_root(w, i)));
            let want = fw.add(&DualElem::basis(ctx, Model::Borel, ws), ctx)?.scale(&q, ctx);
            if !got.equals(&want, ctx) {
                return Ok(Check::new("localization-formula", false, format!("w = {}, s{}", g.name(w), i + 1)));
            }
        }
    }
    Ok(Check::new("localization-formula", true, "A_alpha(f_w) = (f_w + f_{w s}) / x_{-w(alpha)} for all w, alpha"))
}

fn bott_samelson_recursion(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let g = ctx.group();
    let basis = ctx.bs_basis()?;
    for w in g.elements() {
        for i in 0..ctx.rank() {
            let ws = g.mul_simple_right(w, i);
            if g.length(ws) < g.length(w) {
                continue;
            }
            let mut word = g.word(w).to_vec();
            word.push(i);
            let direct = bott_samelson(&word, ctx)?;
            if !direct.equals(&operator_a(i, &basis[w.index()], ctx)?, ctx) {
                return Ok(Check::new("bott-samelson-recursion", false, format!("w = {}, s{}", g.name(w), i + 1)));
            }
        }
    }
    Ok(Check::new("bott-samelson-recursion", true, "psi_{I s} = A_s(psi_I) for all length-increasing steps"))
}

fn bott_samelson_landing(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let g = ctx.group();
    let mut min_degree = u32::MAX;
    let mut count = 0;
    for w in g.elements() {
        for word in g.reduced_words(w) {
            let psi = bott_samelson(&word, ctx)?;
            min_degree = min_degree.min(psi.precision(ctx));
            count += 1;
        }
    }
    Ok(Check::new(
        "bott-samelson-landing",
        true,
        format!("{count} reduced words land in S, certified to degree {min_degree}"),
    ))
}

fn image_criterion(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let g = ctx.group();
    let mut certified = u32::MAX;
    let mut accept = |f: &DualElem, what: String| -> Result<Option<Check>> {
        match membership_image(f, ctx)? {
            Membership::Accept { certified_degree } => {
                certified = certified.min(certified_degree);
                Ok(None)
            }
            Membership::Reject { root, element } => Ok(Some(Check::new(
                "image-criterion",
                false,
                format!("{what} rejected at root {:?}, w = {}", ctx.datum().root(root).coords, g.name(element)),
            ))),
        }
    };
    for (k, psi) in ctx.bs_basis()?.iter().enumerate() {
        if let Some(c) = accept(psi, format!("psi for {}", g.name(g.element(k))))? {
            return Ok(c);
        }
    }
    for i in 0..ctx.rank() {
        if let Some(c) = accept(&char_map(&ctx.algebra().variable(i), ctx), format!("c(x{})", i + 1))? {
            return Ok(c);
        }
    }
    for w in g.elements() {
        if let Membership::Accept { .. } = membership_image(&DualElem::basis(ctx, Model::Borel, w), ctx)? {
            return Ok(Check::new("image-criterion", false, format!("f_{} accepted", g.name(w))));
        }
    }
    Ok(Check::new("image-criterion", true, format!("classes accepted to degree {certified}; every f_w rejected")))
}

fn word_choice_change(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let g = ctx.group();
    for w in g.elements() {
        for word in g.reduced_words(w) {
            let psi = bott_samelson(&word, ctx)?;
            if let BsSolve::NotInImage(v) = to_bs_basis(&psi, ctx)? {
                return Ok(Check::new("word-choice-change", false, format!("word {word:?} fails at {}", g.name(v))));
            }
        }
    }
    Ok(Check::new("word-choice-change", true, "every reduced-word class has S coefficients in the canonical basis"))
}

fn euler_classes(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let mut n = 0;
    for xi in test_subsets(ctx.rank()) {
        for &w in ctx.cosets(&xi, &ParabolicSubset::empty())?.representatives() {
            if !euler_class(&xi, w, ctx)?.holds {
                return Ok(Check::new("euler-classes", false, format!("{xi}, w = {}", ctx.group().name(w))));
            }
            n += 1;
        }
    }
    Ok(Check::new("euler-classes", true, format!("{n} fixed points")))
}

fn pullback_multiplicative(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    let empty = ParabolicSubset::empty();
    for xi in test_subsets(ctx.rank()) {
        for _ in 0..opts.samples.div_ceil(4) {
            let a = parabolic_push(&random_class(rng, ctx)?, &xi, ctx)?;
            let b = parabolic_push(&random_class(rng, ctx)?, &xi, ctx)?;
            let lhs = parabolic_project(&a.mul(&b, ctx)?, &empty, ctx)?;
            let rhs = parabolic_project(&a, &empty, ctx)?.mul(&parabolic_project(&b, &empty, ctx)?, ctx)?;
            if !lhs.equals(&rhs, ctx) {
                return Ok(Check::new("pullback-multiplicative", false, format!("{xi}")));
            }
        }
    }
    Ok(Check::new("pullback-multiplicative", true, "p*(a b) = p*(a) p*(b)"))
}

fn invariants(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    let empty = ParabolicSubset::empty();
    for xi in test_subsets(ctx.rank()) {
        for _ in 0..opts.samples.div_ceil(4) {
            let f = random_class(rng, ctx)?;
            let g = operator_a_parabolic(&xi, &empty, &f, ctx)?;
            if !is_invariant(&g, &xi, ctx)? {
                return Ok(Check::new("invariants", false, format!("A_{xi} output not invariant")));
            }
            let back = parabolic_project(&section(&g, &xi, ctx)?, &empty, ctx)?;
            if !back.equals(&g, ctx) {
                return Ok(Check::new("invariants", false, format!("p* o section differs for {xi}")));
            }
        }
    }
    Ok(Check::new("invariants", true, "push-pull outputs are invariant and sections invert p*"))
}

fn parabolic_coherence(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    let subsets = test_subsets(ctx.rank());
    let none = Default::default();
    for xi in &subsets {
        for mid in subsets.iter().filter(|s| s.is_subset_of(xi)) {
            for _ in 0..opts.samples.div_ceil(8) {
                let f = random_class(rng, ctx)?;
                let direct = parabolic_push(&f, xi, ctx)?;
                let staged = parabolic_push(&parabolic_push(&f, mid, ctx)?, xi, ctx)?;
                if !staged.equals(&direct, ctx) {
                    return Ok(Check::new("parabolic-coherence", false, format!("{mid} in {xi}")));
                }
                let formula = parabolic_push_direct(&parabolic_push(&f, mid, ctx)?, xi, &none, ctx)?;
                if !formula.equals(&direct, ctx) {
                    return Ok(Check::new("parabolic-coherence", false, format!("direct formula, {mid} in {xi}")));
                }
            }
        }
    }
    Ok(Check::new("parabolic-coherence", true, "push-forwards compose along every chain"))
}

fn representative_independence(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    if !opts.verify_representatives {
        return Ok(Check::new("representative-independence", true, "skipped (not requested)"));
    }
    let subsets = test_subsets(ctx.rank());
    for xi in &subsets {
        for mid in subsets.iter().filter(|s| s.is_subset_of(xi)) {
            let f = parabolic_push(&random_class(rng, ctx)?, mid, ctx)?;
            if !representative_cross_check(&f, xi, 5, rng, ctx)? {
                return Ok(Check::new("representative-independence", false, format!("{mid} in {xi}")));
            }
        }
    }
    Ok(Check::new("representative-independence", true, "5 random representative choices per pair"))
}

fn projection_formula(ctx: &Context, opts: &SuiteOptions, rng: &mut ChaCha8Rng) -> Result<Check> {
    for xi in test_subsets(ctx.rank()) {
        for _ in 0..opts.samples.div_ceil(8) {
            let a = parabolic_push(&random_class(rng, ctx)?, &xi, ctx)?;
            let b = parabolic_push(&random_class(rng, ctx)?, &xi, ctx)?;
            let s = random_series(rng, ctx);
            let lhs = pairing(&a.scale_series(&s, ctx), &b, ctx)?;
            let rhs = pairing(&a, &b, ctx)?.mul(&s);
            if !lhs.eq_up_to_precision(&rhs) {
                return Ok(Check::new("projection-formula", false, format!("{xi}")));
            }
        }
    }
    Ok(Check::new("projection-formula", true, "<s a, b> = s <a, b>"))
}

fn pairing_nondegenerate(ctx: &Context, _: &SuiteOptions, _: &mut ChaCha8Rng) -> Result<Check> {
    let r = pairing_matrix(&ParabolicSubset::empty(), ctx)?;
    let aug = ctx.ring().format(&r.augmentation);
    Ok(Check::new("pairing-nondegenerate", r.nondegenerate, format!("augmentation of the determinant = {aug}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ContextBuilder, FglSpec};
    use crate::ring::Ring;
    use crate::root_system::{LatticeKind, RootDatum};

    #[test]
    fn suite_passes_in_rank_two() {
        let opts = SuiteOptions { samples: 4, verify_representatives: true, ..Default::default() };
        for fgl in [FglSpec::Additive, FglSpec::Multiplicative(Ring::Integers.one()), FglSpec::Lorentz] {
            let rd = RootDatum::from_dynkin("A2", LatticeKind::Adjoint).unwrap();
            let ctx = ContextBuilder::new(rd, Ring::Integers, fgl).build().unwrap();
            for c in run_suite(&ctx, &opts) {
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(test_subsets(2).len(), 4);
        assert_eq!(test_subsets(4).len(), 6);
        assert_eq!(property_names().len(), PROPERTIES.len());
    }
}
