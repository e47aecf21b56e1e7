use rayon::prelude::*;

use crate::context::Context;
use crate::error::Result;
use crate::ring::RingElem;
use crate::root_system::{ParabolicSubset, WeylElement};
use crate::series::Series;

use super::classes::certify_in_s;
use super::elem::{DualElem, Model};
use super::parabolic::{parabolic_class, parabolic_push};

/// `<a, b> = A_{Pi/Xi}(a b)`, the push-forward to a point of the product.
pub fn pairing(a: &DualElem, b: &DualElem, ctx: &Context) -> Result<Series> {
    let prod = a.mul(b, ctx)?;
    let pushed = parabolic_push(&prod, &ParabolicSubset::full(ctx.rank()), ctx)?;
    certify_in_s(&pushed, ctx, "push-forward pairing").map_err(|e| match e {
        crate::error::Error::Arithmetic(m) => ctx.precision_error(&m, 1),
        other => other,
    })?;
    Ok(pushed
        .series_coeff(WeylElement::IDENTITY, ctx)
        .expect("certified in S"))
}

/// The pairing on the parabolic Bott-Samelson basis of `G/P_Xi`.
#[derive(Clone, Debug)]
pub struct PairingReport {
    pub xi: ParabolicSubset,
    /// Minimal representatives labelling the basis.
    pub labels: Vec<WeylElement>,
    /// Canonical reduced words of the labels.
    pub words: Vec<Vec<usize>>,
    pub matrix: Vec<Vec<Series>>,
    pub determinant: Series,
    /// Constant term of the determinant.
    pub augmentation: RingElem,
    pub nondegenerate: bool,
}

/// Builds the pairing matrix on `A_Xi(psi_{I_w})`, `w` in `W^Xi`.
pub fn pairing_matrix(xi: &ParabolicSubset, ctx: &Context) -> Result<PairingReport> {
    let g = ctx.group();
    let table = ctx.cosets(xi, &ParabolicSubset::empty())?;
    let labels = table.representatives().to_vec();
    let words: Vec<Vec<usize>> = labels.iter().map(|&w| g.word(w).to_vec()).collect();
    let classes = words
        .iter()
        .map(|w| parabolic_class(xi, w, ctx))
        .collect::<Result<Vec<DualElem>>>()?;
    debug_assert!(classes.iter().all(|c| *c.model() == Model::parabolic(xi.clone())));
    let n = classes.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| pairing(&classes[i], &classes[j], ctx))
        .collect::<Result<Vec<Series>>>()?;
    let mut matrix = vec![vec![ctx.zero(); n]; n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        matrix[j][i] = v.clone();
        matrix[i][j] = v;
    }
    let det = determinant(&matrix, ctx);
    let augmentation = det.constant_term();
    let nondegenerate = ctx.ring().is_unit(&augmentation);
    Ok(PairingReport {
        xi: xi.clone(),
        labels,
        words,
        matrix,
        determinant: det,
        augmentation,
        nondegenerate,
    })
}

/// Division-free determinant (Berkowitz).
pub fn determinant(m: &[Vec<Series>], ctx: &Context) -> Series {
    let n = m.len();
    // characteristic polynomial coefficients of the leading r x r block
    let mut poly = vec![ctx.one()];
    for r in 0..n {
        let c = &m[r][r];
        let mut t = Vec::with_capacity(r + 2);
        t.push(ctx.one());
        t.push(c.neg());
        // v = A_r^k S for k = 0, 1, ...
        let mut v: Vec<Series> = (0..r).map(|i| m[i][r].clone()).collect();
        for k in 0..r {
            let rs = (0..r).fold(ctx.zero(), |acc, i| acc.add(&m[r][i].mul(&v[i])));
            t.push(rs.neg());
            if k + 1 < r {
                v = (0..r)
                    .map(|i| (0..r).fold(ctx.zero(), |acc, j| acc.add(&m[i][j].mul(&v[j]))))
                    .collect();
            }
        }
        let next: Vec<Series> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .fold(ctx.zero(), |acc, j| acc.add(&t[i - j].mul(&poly[j])))
            })
            .collect();
        poly = next;
    }
    let last = poly.pop().expect("nonempty");
    if n % 2 == 1 {
        last.neg()
    } else {
        last
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ContextBuilder, FglSpec};
    use crate::dual::bott_samelson;
    use crate::ring::Ring;
    use crate::root_system::{LatticeKind, RootDatum};

    fn ctx(label: &str, kind: LatticeKind, fgl: FglSpec, ring: Ring) -> Context {
        let rd = RootDatum::from_dynkin(label, kind).unwrap();
        ContextBuilder::new(rd, ring, fgl).build().unwrap()
    }

    fn leibniz(m: &[Vec<Series>], c: &Context) -> Series {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for k in 0..n {
                    let mut q = p.clone();
                    q.insert(k, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n).into_iter().fold(c.zero(), |acc, p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let term = (0..n).fold(c.one(), |t, i| t.mul(&m[i][p[i]]));
            if inversions % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            }
        })
    }

    #[test]
    fn rank_one_additive_matrix() {
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Additive, Ring::Integers);
        let r = pairing_matrix(&ParabolicSubset::empty(), &c).unwrap();
        let x = c.algebra().variable(0);
        let one = c.one();
        let want = [[x.neg(), one.clone()], [one, c.zero()]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(r.matrix[i][j].eq_up_to_precision(&want[i][j]));
            }
        }
        assert!(r.determinant.eq_up_to_precision(&c.algebra().from_int(-1)));
        assert!(r.nondegenerate);
    }

    #[test]
    fn rank_one_values_for_other_laws() {
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Multiplicative(Ring::Integers.one()), Ring::Integers);
        let p1 = bott_samelson(&[0], &c).unwrap();
        let p0 = bott_samelson(&[], &c).unwrap();
        assert!(pairing(&p1, &p1, &c).unwrap().eq_up_to_precision(&c.one()));
        assert!(pairing(&p0, &p1, &c).unwrap().eq_up_to_precision(&c.one()));
        let c = ctx("A1", LatticeKind::Adjoint, FglSpec::Lorentz, Ring::Integers);
        let p1 = bott_samelson(&[0], &c).unwrap();
        let p0 = bott_samelson(&[], &c).unwrap();
        assert!(pairing(&p0, &p1, &c).unwrap().eq_up_to_precision(&c.one()));
        let kappa = crate::hecke::kappa(0, &c).unwrap();
        assert!(pairing(&p1, &p1, &c).unwrap().eq_up_to_precision(&kappa));
    }

    #[test]
    fn determinant_matches_leibniz() {
        let c = ctx("A2", LatticeKind::SimplyConnected, FglSpec::Lorentz, Ring::Integers);
        let r = pairing_matrix(&ParabolicSubset::empty(), &c).unwrap();
        assert!(r.determinant.eq_up_to_precision(&leibniz(&r.matrix, &c)));
        assert!(r.nondegenerate);
        for i in 0..r.matrix.len() {
            for j in 0..r.matrix.len() {
                assert!(r.matrix[i][j].eq_up_to_precision(&r.matrix[j][i]));
            }
        }
    }

    #[test]
    fn parabolic_pairing_nondegenerate() {
        for fgl in [FglSpec::Additive, FglSpec::Multiplicative(Ring::Integers.one())] {
            let c = ctx("A2", LatticeKind::Adjoint, fgl, Ring::Integers);
            for idx in [vec![0], vec![1], vec![0, 1]] {
                let xi = c.parabolic(&idx).unwrap();
                let r = pairing_matrix(&xi, &c).unwrap();
                assert_eq!(r.labels.len(), 6 / if idx.len() == 1 { 2 } else { 6 });
                assert!(r.nondegenerate, "{xi}");
            }
        }
    }

    #[test]
    fn pairing_is_linear_over_s() {
        let c = ctx("B2", LatticeKind::Adjoint, FglSpec::Multiplicative(Ring::Integers.one()), Ring::Integers);
        let xi = c.parabolic(&[0]).unwrap();
        let a = parabolic_class(&xi, &[1], &c).unwrap();
        let b = parabolic_class(&xi, &[1, 0, 1], &c).unwrap();
        let s = c.x_root(2).add(&c.x_root(1).mul(c.x_root(0)));
        let sa = a.scale_series(&s, &c);
        let lhs = pairing(&sa, &b, &c).unwrap();
        let rhs = pairing(&a, &b, &c).unwrap().mul(&s);
        assert!(lhs.eq_up_to_precision(&rhs));
    }
}
