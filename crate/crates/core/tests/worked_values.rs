//! Small worked values, each checked against an independent hand derivation
//! or a brute-force computation in the test itself.

use formal_schubert::algebra::FormalGroupAlgebra;
use formal_schubert::dual::{
    borel_surjectivity_check, bott_samelson, bullet_act, char_map, is_invariant, membership_image,
    operator_a, pairing, pairing_matrix, parabolic_class, parabolic_project, parabolic_push, parabolic_sum,
    to_bs_basis, BsSolve, Membership,
};
use formal_schubert::hecke::{demazure_x, pushpull_parabolic, pushpull_y, to_x_basis, BasisSolve};
use formal_schubert::ring::{Ring, RingElem};
use formal_schubert::root_system::{LatticeKind, ParabolicSubset, RootDatum, WeylElement};
use formal_schubert::series::{Monomial, Series};
use formal_schubert::{Context, ContextBuilder, DualElem, FglSpec, FormalGroupLaw, Model, QElem, QWElem};

use LatticeKind::{Adjoint as Ad, SimplyConnected as Sc};

fn ctx(label: &str, kind: LatticeKind, fgl: FglSpec) -> Context {
    ctx_over(label, kind, fgl, Ring::Integers)
}

fn ctx_over(label: &str, kind: LatticeKind, fgl: FglSpec, ring: Ring) -> Context {
    ContextBuilder::new(RootDatum::from_dynkin(label, kind).unwrap(), ring, fgl).build().unwrap()
}

fn mult() -> FglSpec {
    FglSpec::Multiplicative(Ring::Integers.one())
}

fn q(s: Series) -> QElem {
    QElem::from_series(s)
}

fn elem(c: &Context, word: &[usize]) -> WeylElement {
    c.group().from_word(word).unwrap()
}

#[test]
fn residues_divide_by_smallest_quotient() {
    let r = Ring::zmod(4).unwrap();
    let brute = (0..4).find(|k| (2 * k) % 4 == 2).unwrap();
    assert_eq!(r.exact_div(&r.from_i64(2), &r.from_i64(2)).unwrap(), Some(r.from_i64(brute)));
}

#[test]
fn root_data() {
    let rd = RootDatum::from_dynkin("A1", Sc).unwrap();
    assert_eq!(rd.simple_root(0), &[2]);
    let rd = RootDatum::from_dynkin("A2", Sc).unwrap();
    assert_eq!(rd.cartan(), &vec![vec![2, -1], vec![-1, 2]]);
    for (label, order, longest) in [("A2", 6, 3), ("B2", 8, 4)] {
        let c = ctx(label, Ad, FglSpec::Additive);
        let g = c.group();
        assert_eq!(g.order(), order);
        assert_eq!(g.length(g.longest()), longest);
    }
}

#[test]
fn weyl_group_combinatorics() {
    let c = ctx("A2", Ad, FglSpec::Additive);
    let g = c.group();
    let rd = c.datum();
    assert_eq!(g.act_root(g.simple(0), 1), rd.root_index(&[1, 1]).unwrap());
    let xi = c.parabolic(&[0]).unwrap();
    let table = c.cosets(&xi, &ParabolicSubset::empty()).unwrap();
    let names: Vec<String> = table.representatives().iter().map(|&w| g.name(w)).collect();
    assert_eq!(names, ["e", "s2", "s1s2"]);
    assert!(g.bruhat_leq(elem(&c, &[0]), elem(&c, &[0, 1])));
    assert!(!g.bruhat_leq(elem(&c, &[0]), elem(&c, &[1])));
}

#[test]
fn formal_group_law_tables() {
    let z = Ring::Integers;
    let add = FormalGroupLaw::additive(&z, 6).unwrap();
    assert_eq!(add.table().count(), 0);
    let m = FormalGroupLaw::multiplicative(&z, z.one(), 6).unwrap();
    let entries: Vec<(u32, u32, RingElem)> = m.table().map(|(i, j, a)| (i, j, a.clone())).collect();
    assert_eq!(entries, vec![(1, 1, z.from_i64(-1))]);

    // expand (x + y)(1 + x y)^{-1} and feed the coefficients back as a table
    let n = 7;
    let x = Series::variable(&z, 2, n, 0);
    let y = Series::variable(&z, 2, n, 1);
    let f = x.add(&y).mul(&Series::one(&z, 2, n).add(&x.mul(&y)).inverse().unwrap());
    let table: Vec<(u32, u32, RingElem)> = f
        .terms()
        .filter(|(mono, _)| mono.degree() > 1)
        .map(|(mono, c)| (mono.exponent(0), mono.exponent(1), c.clone()))
        .collect();
    assert!(table.iter().all(|(i, j, _)| i + j != 2));
    assert!(table.contains(&(2, 1, z.from_i64(-1))) && table.contains(&(1, 2, z.from_i64(-1))));
    let custom = FormalGroupLaw::custom(&z, n, &table).unwrap();
    let lorentz = FormalGroupLaw::lorentz(&z, n).unwrap();
    for i in 0..=n {
        for j in 0..=n - i {
            assert_eq!(custom.coefficient(i, j), lorentz.coefficient(i, j), "a_{i}{j}");
        }
    }

    // x + y - x y = 0 solved degree by degree: y = -x - x^2 - ...
    let iota = m.formal_inverse();
    for k in 1..=6 {
        assert_eq!(iota.coeff(&Monomial::from_exponents(&[k]).unwrap()), z.from_i64(-1));
    }
}

#[test]
fn formal_group_algebra_values() {
    let c = ctx("A1", Sc, mult());
    let x = c.algebra().variable(0);
    assert!(c.x_root(0).eq_up_to_precision(&x.scale_int(2).sub(&x.mul(&x))));

    let c = ctx("A2", Ad, FglSpec::Additive);
    let (x1, x2) = (c.algebra().variable(0), c.algebra().variable(1));
    assert!(c.act(c.group().simple(0), &x2).eq_up_to_precision(&x1.add(&x2)));
    let top = c.datum().root_index(&[1, 1]).unwrap();
    assert!(c.divide_by_root(&x1.add(&x2), top).unwrap().unwrap().eq_up_to_precision(&c.one()));

    let fgl = FormalGroupLaw::additive(&Ring::Integers, c.trunc()).unwrap();
    let target = FormalGroupAlgebra::new(fgl, 1).unwrap();
    let map = c.algebra().base_change(&vec![vec![1, 1]], &target).unwrap();
    let y = target.variable(0);
    assert!(map.apply(&x1).eq_up_to_precision(&y));
    assert!(map.apply(&x2).eq_up_to_precision(&y));
}

#[test]
fn twisted_group_algebra_values() {
    let c = ctx("A1", Ad, FglSpec::Additive);
    let s = c.group().simple(0);
    let x = c.algebra().variable(0);
    let lhs = QWElem::delta(s, &c).mul(&QWElem::scalar(q(x.clone())), &c);
    assert!(lhs.equals(&QWElem::from_coeffs([(s, q(x.neg()))]), &c));
    assert!(pushpull_y(0, &c).equals(&demazure_x(0, &c).neg(), &c));

    let c = ctx("A2", Ad, mult());
    for i in 0..2 {
        let xi = c.parabolic(&[i]).unwrap();
        assert!(pushpull_parabolic(&xi, &ParabolicSubset::empty(), &c).unwrap().equals(&pushpull_y(i, &c), &c));
    }
    let full = ParabolicSubset::full(2);
    let y = pushpull_parabolic(&full, &ParabolicSubset::empty(), &c).unwrap();
    assert_eq!(y.support().count(), 6);
    for (w, coeff) in y.coeffs() {
        let back = coeff.mul_series(&c.act(w, &c.x_pi()), &c);
        assert!(back.equals(&QElem::one(&c), &c), "coefficient at {}", c.group().name(w));
    }

    let c = ctx("B2", Ad, FglSpec::Lorentz);
    for i in 0..2 {
        match to_x_basis(&QWElem::delta(c.group().simple(i), &c), &c).unwrap() {
            BasisSolve::Coeffs(m) => {
                assert_eq!(m.len(), 2);
                assert!(m[&WeylElement::IDENTITY].eq_up_to_precision(&c.one()));
                assert!(m[&c.group().simple(i)].eq_up_to_precision(&c.x_root(i).neg()));
            }
            BasisSolve::NotInSpan(_) => panic!("delta lies in the span"),
        }
    }
    let stray = QWElem::scalar(QElem::inv_root(&c, 0));
    assert!(matches!(to_x_basis(&stray, &c).unwrap(), BasisSolve::NotInSpan(_)));
}

#[test]
fn action_on_the_dual() {
    let c = ctx("B2", Ad, FglSpec::Lorentz);
    let g = c.group();
    let rd = c.datum();
    let fb = |w| DualElem::basis(&c, Model::Borel, w);
    for v in g.elements() {
        for w in g.elements() {
            let moved = bullet_act(&QWElem::delta(w, &c), &fb(v), &c).unwrap();
            assert!(moved.equals(&fb(g.mul(v, g.inverse(w))), &c));
        }
        let s = c.x_root(3).add(&c.algebra().variable(0));
        let scaled = bullet_act(&QWElem::scalar(q(s.clone())), &fb(v), &c).unwrap();
        assert!(scaled.equals(&fb(v).scale_series(&c.act(v, &s), &c), &c));
    }
    // A_alpha(f_e) = (f_e + f_s) / x_{-alpha}
    for i in 0..2 {
        let s = g.simple(i);
        let inv = QElem::inv_root(&c, rd.negate(i));
        let want = DualElem::from_coeffs(&c, Model::Borel, [(WeylElement::IDENTITY, inv.clone()), (s, inv)]).unwrap();
        assert!(operator_a(i, &fb(WeylElement::IDENTITY), &c).unwrap().equals(&want, &c));
    }
    let c = ctx("A1", Ad, FglSpec::Additive);
    let start = DualElem::basis(&c, Model::Borel, WeylElement::IDENTITY).scale_series(c.x_root(1), &c);
    assert!(operator_a(0, &start, &c).unwrap().equals(&DualElem::unit(&c, Model::Borel), &c));
}

#[test]
fn bott_samelson_values() {
    let c = ctx("A1", Ad, FglSpec::Additive);
    let x = c.algebra().variable(0);
    let e = WeylElement::IDENTITY;
    let psi0 = bott_samelson(&[], &c).unwrap();
    assert!(psi0.equals(&DualElem::from_series(&c, Model::Borel, [(e, x.neg())]).unwrap(), &c));
    for fgl in [FglSpec::Additive, mult(), FglSpec::Lorentz] {
        let c = ctx("A1", Ad, fgl);
        let psi1 = bott_samelson(&[0], &c).unwrap();
        assert!(psi1.equals(&DualElem::unit(&c, Model::Borel), &c));
        assert!(psi1.mul(&psi1, &c).unwrap().equals(&psi1, &c));
    }

    // the normal weights of the Schubert curve at e and at s1 are the same two
    // negative roots
    let c = ctx("A2", Ad, FglSpec::Additive);
    let rd = c.datum();
    let weights = c.x_product([rd.negate(1), rd.negate(rd.root_index(&[1, 1]).unwrap())]);
    let psi = bott_samelson(&[0], &c).unwrap();
    assert_eq!(psi.support().count(), 2);
    for w in [WeylElement::IDENTITY, c.group().simple(0)] {
        assert!(psi.series_coeff(w, &c).unwrap().eq_up_to_precision(&weights));
    }
}

#[test]
fn characteristic_map_and_membership() {
    let c = ctx("A1", Ad, FglSpec::Additive);
    let x = c.algebra().variable(0);
    let s = c.group().simple(0);
    let want = DualElem::from_series(&c, Model::Borel, [(WeylElement::IDENTITY, x.clone()), (s, x.neg())]).unwrap();
    let cx = char_map(c.x_root(0), &c);
    assert!(cx.equals(&want, &c));

    let fe = DualElem::basis(&c, Model::Borel, WeylElement::IDENTITY);
    match membership_image(&fe, &c).unwrap() {
        Membership::Reject { root, element } => {
            assert_eq!(c.datum().root(root).coords, vec![1]);
            assert_eq!(element, WeylElement::IDENTITY);
        }
        other => panic!("expected a rejection, got {other:?}"),
    }
    for word in [vec![], vec![0], vec![0, 0]] {
        let psi = bott_samelson(&word, &c).unwrap();
        assert!(matches!(membership_image(&psi, &c).unwrap(), Membership::Accept { .. }));
    }

    // 1 = psi_(1); c(x) = -2 psi_() - x psi_(1)
    let expand = |f: &DualElem| match to_bs_basis(f, &c).unwrap() {
        BsSolve::Coeffs { coeffs, .. } => coeffs,
        BsSolve::NotInImage(w) => panic!("not in image at {}", c.group().name(w)),
    };
    let unit = expand(&DualElem::unit(&c, Model::Borel));
    assert!(unit.get(&WeylElement::IDENTITY).is_none_or(Series::is_zero));
    assert!(unit[&s].eq_up_to_precision(&c.one()));
    let coeffs = expand(&cx);
    assert!(coeffs[&WeylElement::IDENTITY].eq_up_to_precision(&c.algebra().from_int(-2)));
    assert!(coeffs[&s].eq_up_to_precision(&x.neg()));
}

#[test]
fn parabolic_values() {
    let c = ctx("A2", Ad, FglSpec::Additive);
    let g = c.group();
    let xi = c.parabolic(&[0]).unwrap();
    let e = WeylElement::IDENTITY;
    let fbar = DualElem::basis(&c, Model::parabolic(xi.clone()), e);
    let up = parabolic_project(&fbar, &ParabolicSubset::empty(), &c).unwrap();
    let want = DualElem::from_coeffs(&c, Model::Borel, [(e, QElem::one(&c)), (g.simple(0), QElem::one(&c))]).unwrap();
    assert!(up.equals(&want, &c));
    let down = parabolic_sum(&up, &xi, &c).unwrap();
    assert!(down.equals(&fbar.scale_series(&c.algebra().from_int(2), &c), &c));

    // A_{alpha1} of anything is W_{1}-invariant
    for psi in c.bs_basis().unwrap() {
        assert!(is_invariant(&operator_a(0, psi, &c).unwrap(), &xi, &c).unwrap());
    }

    let xi2 = c.parabolic(&[1]).unwrap();
    let reps: Vec<String> = c.cosets(&xi2, &ParabolicSubset::empty()).unwrap().representatives().iter().map(|&w| g.name(w)).collect();
    assert_eq!(reps, ["e", "s1", "s2s1"]);
    let class = parabolic_class(&xi2, &[], &c).unwrap();
    let rd = c.datum();
    let want = c.x_product([rd.negate(0), rd.negate(rd.root_index(&[1, 1]).unwrap())]);
    assert!(class.series_coeff(e, &c).unwrap().eq_up_to_precision(&want));

    // the point class x_Pi f_e pushes forward to 1
    let full = ParabolicSubset::full(2);
    let pushed = parabolic_push(&bott_samelson(&[], &c).unwrap(), &full, &c).unwrap();
    assert!(pushed.series_coeff(e, &c).unwrap().eq_up_to_precision(&c.one()));
}

#[test]
fn pairing_values() {
    let c = ctx("A1", Ad, FglSpec::Additive);
    let r = pairing_matrix(&ParabolicSubset::empty(), &c).unwrap();
    let x = c.algebra().variable(0);
    let want = [[x.neg(), c.one()], [c.one(), c.zero()]];
    for i in 0..2 {
        for j in 0..2 {
            assert!(r.matrix[i][j].eq_up_to_precision(&want[i][j]));
        }
    }
    assert!(r.determinant.eq_up_to_precision(&c.algebra().from_int(-1)));
    assert!(r.nondegenerate);

    let c = ctx("A1", Ad, mult());
    let p1 = bott_samelson(&[0], &c).unwrap();
    assert!(pairing(&p1, &p1, &c).unwrap().eq_up_to_precision(&c.one()));
    for fgl in [FglSpec::Additive, mult(), FglSpec::Lorentz] {
        let c = ctx("A1", Ad, fgl);
        let p0 = bott_samelson(&[], &c).unwrap();
        let p1 = bott_samelson(&[0], &c).unwrap();
        assert!(pairing(&p0, &p1, &c).unwrap().eq_up_to_precision(&c.one()));
    }
}

#[test]
fn euler_class_values() {
    let c = ctx("A1", Ad, FglSpec::Additive);
    let s = c.group().simple(0);
    let x = c.algebra().variable(0);
    let fs = DualElem::basis(&c, Model::Borel, s);
    let acted = bullet_act(&QWElem::scalar(q(c.x_pi())), &fs, &c).unwrap();
    assert!(acted.equals(&fs.scale_series(&x, &c), &c));

    // x_{Pi/Xi} . 1_Xi = sum over cosets of w(x_{Pi/Xi}) f_wbar, read on the lift
    let c = ctx("B2", Ad, mult());
    let xi = c.parabolic(&[1]).unwrap();
    let x_rel = c.x_relative(&ParabolicSubset::full(2), &xi);
    let unit = DualElem::unit(&c, Model::parabolic(xi.clone()));
    let up = parabolic_project(&unit, &ParabolicSubset::empty(), &c).unwrap();
    let acted = bullet_act(&QWElem::scalar(q(x_rel.clone())), &up, &c).unwrap();
    let table = c.cosets(&xi, &ParabolicSubset::empty()).unwrap();
    let want = table.representatives().iter().fold(DualElem::zero(Model::parabolic(xi.clone())), |acc, &w| {
        acc.add(&DualElem::basis(&c, Model::parabolic(xi.clone()), w).scale_series(&c.act(w, &x_rel), &c), &c)
            .unwrap()
    });
    assert!(acted.equals(&parabolic_project(&want, &ParabolicSubset::empty(), &c).unwrap(), &c));
}

#[test]
fn borel_values() {
    let c = ctx("A2", Sc, mult());
    assert!(borel_surjectivity_check(4, &c).unwrap().surjective);
    let c = ctx_over("A2", Sc, FglSpec::Additive, Ring::Rationals);
    assert!(borel_surjectivity_check(4, &c).unwrap().surjective);
    // Spin(5) = Sp(4) has torsion index 1: the simply connected B2 map is onto
    let c = ctx("B2", Sc, FglSpec::Additive);
    let r = borel_surjectivity_check(4, &c).unwrap();
    assert!(r.surjective);
    assert!(r.expected_primes.is_empty());
    assert!(r.torsion_primes.is_empty());
}
