//! JSON encodings of series, classes and reports.
//!
//! Coefficients are decimal strings, monomials are exponent vectors in the
//! series' own term order, words are 1-based. Objects are emitted with
//! sorted keys, so equal values serialize to identical bytes.

use serde_json::{json, Value};

use crate::context::{Context, FglSpec};
use crate::dual::{BorelReport, DualElem, Model, PairingReport};
use crate::error::{Error, Result};
use crate::hecke::QElem;
use crate::ring::{Ring, RingElem};
use crate::root_system::{ParabolicSubset, WeylElement};
use crate::series::{Monomial, Series};

/// `"Z" | "Q" | {"Zmod": m} | {"ZPoly": [names]}`
pub fn ring_from_json(v: &Value) -> Result<Ring> {
    match v {
        Value::String(s) if s == "Z" => Ok(Ring::Integers),
        Value::String(s) if s == "Q" => Ok(Ring::Rationals),
        Value::Object(o) if o.len() == 1 => match o.iter().next().expect("one entry") {
            (k, m) if k == "Zmod" => Ring::zmod(
                m.as_u64().ok_or_else(|| Error::validation("Zmod needs a positive integer modulus"))?,
            ),
            (k, names) if k == "ZPoly" => {
                let names = names
                    .as_array()
                    .and_then(|a| a.iter().map(|n| n.as_str().map(String::from)).collect::<Option<Vec<_>>>())
                    .ok_or_else(|| Error::validation("ZPoly needs a list of variable names"))?;
                Ring::polynomials(&names)
            }
            (k, _) => Err(Error::validation(format!("unknown ring {k:?}"))),
        },
        _ => Err(Error::validation("ring must be \"Z\", \"Q\", {\"Zmod\": m} or {\"ZPoly\": [...]}")),
    }
}

pub fn ring_to_json(r: &Ring) -> Value {
    match r {
        Ring::Integers => json!("Z"),
        Ring::Rationals => json!("Q"),
        Ring::IntegersMod(m) => json!({ "Zmod": m }),
        Ring::PolynomialsOverIntegers(names) => json!({ "ZPoly": names.to_vec() }),
    }
}

fn ring_elem_from_json(v: &Value, ring: &Ring) -> Result<RingElem> {
    match v {
        Value::String(s) => ring.parse(s),
        Value::Number(n) => ring.parse(&n.to_string()),
        _ => Err(Error::validation("coefficients are strings or integers")),
    }
}

/// `"additive" | "lorentz" | {"multiplicative": beta} | {"custom": [[i, j, a_ij], ...]}`
pub fn fgl_from_json(v: &Value, ring: &Ring) -> Result<FglSpec> {
    match v {
        Value::String(s) if s == "additive" => Ok(FglSpec::Additive),
        Value::String(s) if s == "lorentz" => Ok(FglSpec::Lorentz),
        Value::Object(o) if o.len() == 1 => match o.iter().next().expect("one entry") {
            (k, b) if k == "multiplicative" => Ok(FglSpec::Multiplicative(ring_elem_from_json(b, ring)?)),
            (k, t) if k == "custom" => {
                let bad = || Error::validation("custom entries are [i, j, coefficient]");
                let entries = t.as_array().ok_or_else(bad)?;
                let mut out = Vec::with_capacity(entries.len());
                for e in entries {
                    let e = e.as_array().filter(|e| e.len() == 3).ok_or_else(bad)?;
                    let idx = |x: &Value| x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(bad);
                    out.push((idx(&e[0])?, idx(&e[1])?, ring_elem_from_json(&e[2], ring)?));
                }
                Ok(FglSpec::Custom(out))
            }
            (k, _) => Err(Error::validation(format!("unknown formal group law {k:?}"))),
        },
        _ => Err(Error::validation(
            "fgl must be \"additive\", \"lorentz\", {\"multiplicative\": b} or {\"custom\": [...]}",
        )),
    }
}

pub fn fgl_to_json(f: &FglSpec, ring: &Ring) -> Value {
    match f {
        FglSpec::Additive => json!("additive"),
        FglSpec::Lorentz => json!("lorentz"),
        FglSpec::Multiplicative(b) => json!({ "multiplicative": ring.format(b) }),
        FglSpec::Custom(t) => json!({
            "custom": t.iter().map(|(i, j, a)| json!([i, j, ring.format(a)])).collect::<Vec<_>>()
        }),
    }
}

pub fn series_to_json(s: &Series) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .map(|(m, c)| json!([m.exponents(s.nvars()), s.ring().format(c)]))
        .collect();
    json!({ "terms": terms, "precision": s.precision() })
}

pub fn series_from_json(v: &Value, ctx: &Context) -> Result<Series> {
    let bad = |what: &str| Error::validation(format!("malformed series: {what}"));
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    if let Some(k) = obj.keys().find(|k| *k != "terms" && *k != "precision") {
        return Err(bad(&format!("unknown key {k:?}")));
    }
    let precision = match obj.get("precision") {
        None => ctx.trunc(),
        Some(p) => p
            .as_u64()
            .and_then(|p| u32::try_from(p).ok())
            .ok_or_else(|| bad("precision must be a nonnegative integer"))?
            .min(ctx.trunc()),
    };
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing terms array"))?;
    let ring = ctx.ring();
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term must be [exponents, coefficient]"))?;
        let exps = pair[0]
            .as_array()
            .ok_or_else(|| bad("exponents must be an array"))?
            .iter()
            .map(|e| e.as_u64().and_then(|e| u32::try_from(e).ok()))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| bad("exponents must be nonnegative integers"))?;
        if exps.len() != ctx.rank() {
            return Err(bad(&format!("expected {} exponents, got {}", ctx.rank(), exps.len())));
        }
        let coeff = ring_elem_from_json(&pair[1], ring)?;
        out.push((Monomial::from_exponents(&exps)?, coeff));
    }
    Ok(Series::from_terms(ring, ctx.rank(), precision, out))
}

pub fn word_to_json(word: &[usize]) -> Value {
    json!(word.iter().map(|i| i + 1).collect::<Vec<_>>())
}

/// A 1-based word, validated against the rank.
pub fn word_from_json(v: &Value, rank: usize) -> Result<Vec<usize>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::validation("a word must be an array of simple root indices"))?;
    arr.iter()
        .map(|x| {
            let i = x
                .as_u64()
                .ok_or_else(|| Error::validation("word letters must be positive integers"))?;
            if i == 0 || i as usize > rank {
                return Err(Error::usage(format!("word letter {i} is outside 1..={rank}")));
            }
            Ok(i as usize - 1)
        })
        .collect()
}

pub fn subset_from_json(v: &Value, rank: usize) -> Result<ParabolicSubset> {
    ParabolicSubset::new(word_from_json(v, rank)?, rank)
}

pub fn model_to_json(m: &Model) -> Value {
    match m {
        Model::Borel => json!("borel"),
        Model::Parabolic(xi) => json!({ "parabolic": xi.one_based() }),
    }
}

pub fn model_from_json(v: &Value, rank: usize) -> Result<Model> {
    match v {
        Value::String(s) if s == "borel" => Ok(Model::Borel),
        Value::Object(o) if o.len() == 1 && o.contains_key("parabolic") => {
            Ok(Model::parabolic(subset_from_json(&o["parabolic"], rank)?))
        }
        _ => Err(Error::validation("model must be \"borel\" or {\"parabolic\": [...]}")),
    }
}

fn qelem_to_json(q: &QElem, word: &[usize], ctx: &Context) -> Value {
    let num = series_to_json(q.numerator());
    if q.denominator().is_empty() {
        return json!([word_to_json(word), num]);
    }
    let rd = ctx.datum();
    let den: Vec<Value> = q
        .denominator_roots()
        .into_iter()
        .map(|b| json!(rd.root(b).coords))
        .collect();
    json!([word_to_json(word), num, den])
}

/// `{"coeffs": [[word, series(, denominator roots)]...], "model": ..., "precision": p}`;
/// denominator roots are given in simple-root coordinates, and `p` is the
/// precision of the whole class, below which omitted coefficients vanish.
pub fn class_to_json(f: &DualElem, ctx: &Context) -> Value {
    let g = ctx.group();
    let coeffs: Vec<Value> = f
        .coeffs()
        .map(|(w, q)| qelem_to_json(q, g.word(w), ctx))
        .collect();
    json!({
        "coeffs": coeffs,
        "model": model_to_json(f.model()),
        "precision": f.precision(ctx),
    })
}

pub fn class_from_json(v: &Value, ctx: &Context) -> Result<DualElem> {
    let bad = |what: &str| Error::validation(format!("malformed class: {what}"));
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !["coeffs", "model", "precision"].contains(&k.as_str())) {
        return Err(bad(&format!("unknown key {k:?}")));
    }
    let model = match obj.get("model") {
        None => Model::Borel,
        Some(m) => model_from_json(m, ctx.rank())?,
    };
    let precision = obj.get("precision").and_then(Value::as_u64).map(|p| p.min(u64::from(ctx.trunc())) as u32);
    let rd = ctx.datum();
    let g = ctx.group();
    let entries = obj
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing coeffs array"))?;
    let mut coeffs: Vec<(WeylElement, QElem)> = Vec::with_capacity(entries.len());
    for e in entries {
        let arr = e
            .as_array()
            .filter(|a| a.len() == 2 || a.len() == 3)
            .ok_or_else(|| bad("entry must be [word, series] or [word, series, roots]"))?;
        let w = g.from_word(&word_from_json(&arr[0], ctx.rank())?)?;
        let num = series_from_json(&arr[1], ctx)?;
        let mut roots = Vec::new();
        if let Some(den) = arr.get(2) {
            for r in den.as_array().ok_or_else(|| bad("denominator must be a list of roots"))? {
                let coords: Vec<i64> = r
                    .as_array()
                    .and_then(|c| c.iter().map(Value::as_i64).collect())
                    .ok_or_else(|| bad("roots are integer coordinate vectors"))?;
                let b = (0..rd.roots().len())
                    .find(|&b| rd.root(b).coords == coords)
                    .ok_or_else(|| bad(&format!("{coords:?} is not a root")))?;
                roots.push(b);
            }
        }
        coeffs.push((w, QElem::fraction(ctx, num, roots)));
    }
    let f = DualElem::from_coeffs(ctx, model, coeffs)?;
    // omitted coefficients vanish only up to the stated precision
    Ok(match precision {
        Some(p) => DualElem::from_parts(f.model().clone(), f.coeffs().map(|(w, q)| (w, q.clone())).collect(), p),
        None => f,
    })
}

pub fn pairing_to_json(r: &PairingReport, ctx: &Context) -> Value {
    let matrix: Vec<Vec<Value>> = r
        .matrix
        .iter()
        .map(|row| row.iter().map(series_to_json).collect())
        .collect();
    json!({
        "xi": r.xi.one_based(),
        "basis": r.words.iter().map(|w| word_to_json(w)).collect::<Vec<_>>(),
        "matrix": matrix,
        "determinant": series_to_json(&r.determinant),
        "augmentation": ctx.ring().format(&r.augmentation),
        "verdict": if r.nondegenerate { "non-degenerate" } else { "degenerate" },
    })
}

pub fn borel_to_json(r: &BorelReport) -> Value {
    json!({
        "degree_bound": r.degree_bound,
        "generators": r.generators,
        "target_rank": r.target_rank,
        "span_rank": r.span_rank,
        "surjective": r.surjective,
        "cokernel": r.cokernel.iter().map(|d| if d == &0.into() { "Z".to_string() } else { format!("Z/{d}") }).collect::<Vec<_>>(),
        "torsion_primes": r.torsion_primes,
        "expected_primes": r.expected_primes,
        "certified_degree": r.certified_degree,
    })
}
