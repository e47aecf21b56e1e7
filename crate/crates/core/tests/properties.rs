use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use formal_schubert::dual::{bott_samelson, pairing, to_bs_basis, BsSolve};
use formal_schubert::io::{class_from_json, class_to_json};
use formal_schubert::ring::Ring;
use formal_schubert::root_system::{LatticeKind, RootDatum, WeylElement};
use formal_schubert::series::Series;
use formal_schubert::verify::{property_names, random_class, random_series, run_property, SuiteOptions};
use formal_schubert::{Context, ContextBuilder, DualElem, FglSpec, Model};

fn build(label: &str, kind: LatticeKind, fgl: FglSpec) -> Context {
    ContextBuilder::new(RootDatum::from_dynkin(label, kind).unwrap(), Ring::Integers, fgl).build().unwrap()
}

fn contexts() -> &'static [Context] {
    static CELL: OnceLock<Vec<Context>> = OnceLock::new();
    CELL.get_or_init(|| {
        vec![
            build("A2", LatticeKind::Adjoint, FglSpec::Lorentz),
            build("B2", LatticeKind::Adjoint, FglSpec::Multiplicative(Ring::Integers.one())),
            build("A2", LatticeKind::SimplyConnected, FglSpec::Additive),
        ]
    })
}

fn rank_three() -> &'static Context {
    static CELL: OnceLock<Context> = OnceLock::new();
    CELL.get_or_init(|| build("B3", LatticeKind::Adjoint, FglSpec::Additive))
}

fn nonconstant(rng: &mut ChaCha8Rng, c: &Context) -> Series {
    let s = random_series(rng, c);
    s.sub(&Series::constant(c.ring(), c.rank(), c.trunc(), s.constant_term()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn formal_group_law_axioms(seed in any::<u64>(), k in 0usize..3) {
        let c = &contexts()[k];
        let f = c.algebra().fgl();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (nonconstant(&mut rng, c), nonconstant(&mut rng, c), nonconstant(&mut rng, c));
        prop_assert!(f.apply(&x, &y).eq_up_to_precision(&f.apply(&y, &x)));
        prop_assert!(f.apply(&f.apply(&x, &y), &z).eq_up_to_precision(&f.apply(&x, &f.apply(&y, &z))));
        prop_assert!(f.apply(&x, &c.zero()).eq_up_to_precision(&x));
    }

    #[test]
    fn words_multiply_in_the_group(word in proptest::collection::vec(0usize..3, 0..12)) {
        let c = rank_three();
        let g = c.group();
        let w = g.from_word(&word).unwrap();
        prop_assert!(g.length(w) <= word.len());
        prop_assert_eq!(g.length(w) % 2, word.len() % 2);
        let rev: Vec<usize> = word.iter().rev().copied().collect();
        prop_assert_eq!(g.from_word(&rev).unwrap(), g.inverse(w));
        prop_assert_eq!(g.is_reduced(&word).unwrap(), g.length(w) == word.len());
        prop_assert!(g.bruhat_leq(WeylElement::IDENTITY, w) && g.bruhat_leq(w, g.longest()));
    }

    #[test]
    fn bott_samelson_expansion_is_unique(seed in any::<u64>(), k in 0usize..3) {
        let c = &contexts()[k];
        let g = c.group();
        let basis = c.bs_basis().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = BTreeMap::new();
        let mut f = DualElem::zero(Model::Borel);
        for w in g.elements() {
            if rng.gen_bool(0.5) {
                let s = random_series(&mut rng, c);
                f = f.add(&basis[w.index()].scale_series(&s, c), c).unwrap();
                chosen.insert(w, s);
            }
        }
        let BsSolve::Coeffs { coeffs, .. } = to_bs_basis(&f, c).unwrap() else {
            return Err(TestCaseError::fail("combination of basis classes left the span"));
        };
        for w in g.elements() {
            let got = coeffs.get(&w).cloned().unwrap_or_else(|| c.zero());
            let want = chosen.get(&w).cloned().unwrap_or_else(|| c.zero());
            prop_assert!(got.eq_up_to_precision(&want), "coefficient at {}", g.name(w));
        }
    }

    #[test]
    fn classes_survive_serialization(seed in any::<u64>(), k in 0usize..3) {
        let c = &contexts()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_class(&mut rng, c).unwrap();
        let v = class_to_json(&f, c);
        let back = class_from_json(&v, c).unwrap();
        prop_assert!(back.equals(&f, c));
        prop_assert_eq!(serde_json::to_string(&class_to_json(&back, c)).unwrap(), serde_json::to_string(&v).unwrap());
    }

    #[test]
    fn pairing_is_symmetric_and_bilinear(seed in any::<u64>(), k in 0usize..3) {
        let c = &contexts()[k];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_class(&mut rng, c).unwrap();
        let b = random_class(&mut rng, c).unwrap();
        let d = random_class(&mut rng, c).unwrap();
        let s = random_series(&mut rng, c);
        let ab = pairing(&a, &b, c).unwrap();
        prop_assert!(ab.eq_up_to_precision(&pairing(&b, &a, c).unwrap()));
        let lhs = pairing(&a.scale_series(&s, c).add(&d, c).unwrap(), &b, c).unwrap();
        let rhs = ab.mul(&s).add(&pairing(&d, &b, c).unwrap());
        prop_assert!(lhs.eq_up_to_precision(&rhs));
    }

    #[test]
    fn bott_samelson_classes_are_independent_of_the_start(word in proptest::collection::vec(0usize..2, 0..5)) {
        // psi_I = A_{i_m}(psi_{I without its last letter})
        let c = &contexts()[0];
        if let Some((&last, prefix)) = word.split_last() {
            let full = bott_samelson(&word, c).unwrap();
            let step = formal_schubert::dual::operator_a(last, &bott_samelson(prefix, c).unwrap(), c).unwrap();
            prop_assert!(full.equals(&step, c));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn invariant_suite_holds_for_any_seed(seed in any::<u64>(), k in 0usize..3) {
        let c = &contexts()[k];
        let opts = SuiteOptions { seed, samples: 3, verify_representatives: true };
        for name in property_names() {
            let check = run_property(name, c, &opts).unwrap();
            prop_assert!(check.passed, "{}: {}", name, check.detail);
        }
    }
}
