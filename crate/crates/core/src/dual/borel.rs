use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::lattice::elementary_divisors;
use crate::ring::{Ring, RingElem};
use crate::root_system::WeylElement;
use crate::series::{Monomial, Series};

use super::classes::{char_map, to_bs_basis, BsSolve};

/// Result of checking whether the non-equivariant characteristic map is
/// onto the non-equivariant ring, in the Bott-Samelson basis.
#[derive(Clone, Debug)]
pub struct BorelReport {
    pub degree_bound: u32,
    /// Number of monomials whose images span the candidate sublattice.
    pub generators: usize,
    /// `|W|`, the rank of the target.
    pub target_rank: usize,
    /// Rank of the span.
    pub span_rank: usize,
    pub surjective: bool,
    /// Orders of the nontrivial cyclic factors of the cokernel (`0` for a
    /// free factor).
    pub cokernel: Vec<BigInt>,
    /// Torsion primes of the simply connected Dynkin type.
    pub torsion_primes: Vec<u64>,
    /// Torsion primes together with the primes dividing the index of the
    /// lattice in the weight lattice: where a cokernel can be expected.
    pub expected_primes: Vec<u64>,
    /// Smallest precision certified while expanding the images.
    pub certified_degree: u32,
}

/// Exponent vectors of all monomials in `n` variables of degree at most `d`.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; n]];
    for deg in 1..=d {
        let mut level = Vec::new();
        fill(n, deg, &mut Vec::new(), &mut level);
        out.extend(level);
    }
    out
}

fn fill(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == n {
        let mut e = prefix.clone();
        e.push(left);
        out.push(e);
        return;
    }
    for k in (0..=left).rev() {
        prefix.push(k);
        fill(n, left - k, prefix, out);
        prefix.pop();
    }
}

/// Specializes `c(x^a)` for monomials of degree `<= degree_bound` along the
/// augmentation, expands them in the Bott-Samelson basis and decides
/// whether their span is the whole free module on `W`.
pub fn borel_surjectivity_check(degree_bound: u32, ctx: &Context) -> Result<BorelReport> {
    if degree_bound > ctx.trunc() {
        return Err(Error::usage(format!(
            "degree bound {degree_bound} exceeds the truncation degree {}",
            ctx.trunc()
        )));
    }
    let ring = ctx.ring();
    let modulus = match ring {
        Ring::Integers | Ring::Rationals => None,
        Ring::IntegersMod(m) => Some(BigInt::from(*m)),
        Ring::PolynomialsOverIntegers(_) => {
            return Err(Error::usage("the Borel check needs integers, rationals or integers modulo m"));
        }
    };
    let g = ctx.group();
    let n = ctx.rank();
    let exps = monomials(n, degree_bound);
    let expanded = exps
        .par_iter()
        .map(|e| {
            let m = Monomial::from_exponents(e)?;
            let s = Series::from_terms(ring, n, ctx.trunc(), [(m, ring.one())]);
            match to_bs_basis(&char_map(&s, ctx), ctx)? {
                BsSolve::Coeffs { coeffs, certified_degree } => Ok((coeffs, certified_degree)),
                BsSolve::NotInImage(w) => Err(Error::arithmetic(format!(
                    "characteristic map image fell outside the Bott-Samelson span at {}",
                    g.name(w)
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let certified = expanded.iter().map(|(_, d)| *d).fold(ctx.trunc(), u32::min);
    if certified == 0 {
        return Err(ctx.precision_error("Borel check: no precision left for constant terms", degree_bound));
    }
    let mut rows: Vec<Vec<BigInt>> = expanded
        .iter()
        .map(|(coeffs, _)| {
            let row: Vec<RingElem> = g
                .elements()
                .map(|w: WeylElement| coeffs.get(&w).map_or_else(|| ring.zero(), Series::constant_term))
                .collect();
            integral_row(&row)
        })
        .collect();
    let size = g.order();
    if let Some(m) = &modulus {
        for i in 0..size {
            let mut r = vec![BigInt::zero(); size];
            r[i] = m.clone();
            rows.push(r);
        }
    }
    let divisors = elementary_divisors(rows);
    let span_rank = divisors.len();
    let mut cokernel: Vec<BigInt> = match ring {
        Ring::Rationals => Vec::new(),
        _ => divisors.iter().filter(|d| !d.is_one()).cloned().collect(),
    };
    cokernel.extend(std::iter::repeat_n(BigInt::zero(), size - span_rank));
    let surjective = cokernel.is_empty();
    let torsion = ctx.datum().dynkin().map(|d| d.torsion_primes()).unwrap_or_default();
    Ok(BorelReport {
        degree_bound,
        generators: exps.len(),
        target_rank: size,
        span_rank,
        surjective,
        cokernel,
        torsion_primes: torsion.clone(),
        expected_primes: expected_primes(torsion, ctx),
        certified_degree: certified,
    })
}

fn expected_primes(mut primes: Vec<u64>, ctx: &Context) -> Vec<u64> {
    let rd = ctx.datum();
    let mut index = (rd.fundamental_group_order() / rd.root_lattice_index().max(1)).unsigned_abs();
    let mut p = 2;
    while index > 1 {
        if index.is_multiple_of(p) {
            primes.push(p);
            while index.is_multiple_of(p) {
                index /= p;
            }
        }
        p += 1;
    }
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// Clears denominators of a row of rationals (a scalar multiple does not
/// change the rational span); integers and residues are lifted as is.
fn integral_row(row: &[RingElem]) -> Vec<BigInt> {
    let den = row.iter().fold(BigInt::one(), |acc, x| match x {
        RingElem::Rat(q) => acc.lcm(q.denom()),
        _ => acc,
    });
    row.iter()
        .map(|x| match x {
            RingElem::Int(k) => k.clone(),
            RingElem::Rat(q) => q.numer() * (&den / q.denom()),
            RingElem::Mod(k) => BigInt::from(*k),
            RingElem::Poly(_) => unreachable!("polynomial rings are rejected"),
        })
        .collect()
}
