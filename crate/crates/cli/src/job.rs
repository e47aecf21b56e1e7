use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use formal_schubert::context::default_trunc;
use formal_schubert::dual::{
    bott_samelson, char_map, invariance_witness, membership_image, pairing_matrix, parabolic_class,
    section, to_bs_basis, BsSolve, Membership,
};
use formal_schubert::io::{
    borel_to_json, class_from_json, class_to_json, fgl_from_json, fgl_to_json, pairing_to_json,
    ring_from_json, ring_to_json, series_from_json, series_to_json, word_from_json, word_to_json,
};
use formal_schubert::root_system::{LatticeKind, ParabolicSubset, RootDatum, DEFAULT_MAX_WEYL};
use formal_schubert::verify::{run_suite, SuiteOptions};
use formal_schubert::{Context, ContextBuilder, DualElem, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    WeylTable,
    BsClass,
    ParabolicClass,
    Multiply,
    StructureConstants,
    PairingMatrix,
    Membership,
    Invariants,
    CharMap,
    BorelCheck,
    Verify,
}

/// One job, read from a single JSON document. Words and subsets are 1-based;
/// a class argument is either an inline class or a path to a JSON file,
/// relative to the job file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub dynkin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_roots: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_coroots: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fgl: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// Settings that come from the command line rather than the job file.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub trunc: Option<u32>,
    pub verify_representatives: bool,
    pub max_weyl: usize,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { trunc: None, verify_representatives: false, max_weyl: DEFAULT_MAX_WEYL, timing: false }
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec> {
        serde_json::from_str(text).map_err(|e| Error::validation(format!("job file: {e}")))
    }

    /// Reads a job file and inlines class arguments given as file paths.
    pub fn load(path: &Path) -> Result<JobSpec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))?;
        let mut spec = JobSpec::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for slot in [&mut spec.class, &mut spec.left, &mut spec.right] {
            if let Some(Value::String(file)) = slot {
                let p = base.join(&*file);
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| Error::usage(format!("cannot read class file {}: {e}", p.display())))?;
                *slot = Some(
                    serde_json::from_str(&text)
                        .map_err(|e| Error::validation(format!("class file {}: {e}", p.display())))?,
                );
            }
        }
        Ok(spec)
    }

    fn datum(&self) -> Result<RootDatum> {
        match (&self.dynkin, &self.simple_roots, &self.simple_coroots) {
            (Some(label), None, None) => {
                let kind = match self.lattice.as_deref().unwrap_or("ad") {
                    "sc" => LatticeKind::SimplyConnected,
                    "ad" => LatticeKind::Adjoint,
                    other => return Err(Error::validation(format!("lattice must be \"sc\" or \"ad\", got {other:?}"))),
                };
                RootDatum::from_dynkin(label, kind)
            }
            (None, Some(r), Some(c)) if self.lattice.is_none() => RootDatum::from_matrices(r.clone(), c.clone()),
            _ => Err(Error::validation(
                "give either \"type\" (with optional \"lattice\") or both \"simple_roots\" and \"simple_coroots\"",
            )),
        }
    }

    /// Builds the context and the echoed job with every default filled in.
    pub fn resolve(&self, opts: &RunOptions) -> Result<(Context, JobSpec)> {
        let datum = self.datum()?;
        let ring = ring_from_json(self.ring.as_ref().unwrap_or(&json!("Z")))?;
        let fgl = fgl_from_json(self.fgl.as_ref().unwrap_or(&json!("additive")), &ring)?;
        let trunc = opts.trunc.or(self.trunc).unwrap_or_else(|| default_trunc(&datum));
        let mut echo = self.clone();
        if echo.dynkin.is_some() && echo.lattice.is_none() {
            echo.lattice = Some("ad".into());
        }
        echo.ring = Some(ring_to_json(&ring));
        echo.fgl = Some(fgl_to_json(&fgl, &ring));
        echo.trunc = Some(trunc);
        let ctx = ContextBuilder::new(datum, ring, fgl)
            .trunc(Some(trunc))
            .max_weyl(opts.max_weyl)
            .build()?;
        Ok((ctx, echo))
    }
}

/// Runs one job. The output is a single JSON value with sorted keys; it is
/// byte-identical across runs unless timing is requested.
pub fn run_job(spec: &JobSpec, opts: &RunOptions) -> Result<Value> {
    let start = Instant::now();
    let (ctx, echo) = spec.resolve(opts)?;
    let result = dispatch(spec, opts, &ctx)?;
    let mut out = Map::new();
    out.insert("spec".into(), serde_json::to_value(&echo).expect("spec serializes"));
    out.insert("default_trunc".into(), json!(default_trunc(ctx.datum())));
    out.insert("warnings".into(), json!(ctx.warnings()));
    out.insert("result".into(), result);
    if opts.timing {
        out.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    }
    Ok(Value::Object(out))
}

fn required<'a>(v: &'a Option<Value>, name: &str, command: Command) -> Result<&'a Value> {
    v.as_ref().ok_or_else(|| {
        Error::validation(format!("{} needs \"{name}\"", serde_json::to_value(command).expect("unit variant")))
    })
}

fn subset(v: &Option<Value>, ctx: &Context) -> Result<ParabolicSubset> {
    match v {
        None => Ok(ParabolicSubset::empty()),
        Some(v) => formal_schubert::io::subset_from_json(v, ctx.rank()),
    }
}

fn element_json(w: formal_schubert::root_system::WeylElement, ctx: &Context) -> Value {
    word_to_json(ctx.group().word(w))
}

fn expansion_json(f: &DualElem, ctx: &Context) -> Result<Value> {
    Ok(match to_bs_basis(f, ctx)? {
        BsSolve::Coeffs { coeffs, certified_degree } => json!({
            "terms": coeffs.iter().map(|(w, c)| json!([element_json(*w, ctx), series_to_json(c)])).collect::<Vec<_>>(),
            "certified_degree": certified_degree,
        }),
        BsSolve::NotInImage(w) => json!({ "not_in_image_at": element_json(w, ctx) }),
    })
}

fn dispatch(spec: &JobSpec, opts: &RunOptions, ctx: &Context) -> Result<Value> {
    let g = ctx.group();
    let n = ctx.rank();
    let cmd = spec.command;
    match cmd {
        Command::WeylTable => {
            let rows: Vec<Value> = g
                .elements()
                .map(|w| json!({ "word": element_json(w, ctx), "length": g.length(w), "matrix": g.matrix(w) }))
                .collect();
            Ok(json!({ "order": g.order(), "rows": rows }))
        }
        Command::BsClass => {
            let word = word_from_json(required(&spec.word, "word", cmd)?, n)?;
            let psi = bott_samelson(&word, ctx)?;
            Ok(json!({
                "word": word_to_json(&word),
                "reduced": g.is_reduced(&word)?,
                "class": class_to_json(&psi, ctx),
                "certified_degree": psi.precision(ctx),
            }))
        }
        Command::ParabolicClass => {
            let xi = subset(&spec.xi, ctx)?;
            let word = word_from_json(required(&spec.word, "word", cmd)?, n)?;
            let c = parabolic_class(&xi, &word, ctx)?;
            Ok(json!({
                "xi": xi.one_based(),
                "word": word_to_json(&word),
                "class": class_to_json(&c, ctx),
                "certified_degree": c.precision(ctx),
            }))
        }
        Command::Multiply => {
            let a = class_from_json(required(&spec.left, "left", cmd)?, ctx)?;
            let b = class_from_json(required(&spec.right, "right", cmd)?, ctx)?;
            let p = a.mul(&b, ctx)?;
            Ok(json!({ "product": class_to_json(&p, ctx), "certified_degree": p.precision(ctx) }))
        }
        Command::StructureConstants => {
            let pick = |v: &Option<Value>| -> Result<Vec<_>> {
                match v {
                    None => Ok(g.elements().collect()),
                    Some(v) => Ok(vec![g.from_word(&word_from_json(v, n)?)?]),
                }
            };
            let us = pick(&spec.u)?;
            let vs = pick(&spec.v)?;
            let basis = ctx.bs_basis()?;
            let pairs: Vec<_> = us.iter().flat_map(|&u| vs.iter().map(move |&v| (u, v))).collect();
            let rows = pairs
                .par_iter()
                .map(|&(u, v)| {
                    let prod = basis[u.index()].mul(&basis[v.index()], ctx)?;
                    let mut row = json!({ "u": element_json(u, ctx), "v": element_json(v, ctx) });
                    let expansion = expansion_json(&prod, ctx)?;
                    if expansion.get("not_in_image_at").is_some() {
                        return Err(Error::arithmetic(format!(
                            "product of the classes of {} and {} left the Bott-Samelson span",
                            g.name(u),
                            g.name(v)
                        )));
                    }
                    row["product"] = expansion;
                    Ok(row)
                })
                .collect::<Result<Vec<Value>>>()?;
            Ok(json!({ "constants": rows }))
        }
        Command::PairingMatrix => Ok(pairing_to_json(&pairing_matrix(&subset(&spec.xi, ctx)?, ctx)?, ctx)),
        Command::Membership => {
            let f = class_from_json(required(&spec.class, "class", cmd)?, ctx)?;
            Ok(match membership_image(&f, ctx)? {
                Membership::Accept { certified_degree } => {
                    json!({ "verdict": "accept", "certified_degree": certified_degree })
                }
                Membership::Reject { root, element } => json!({
                    "verdict": "reject",
                    "root": ctx.datum().root(root).coords,
                    "element": element_json(element, ctx),
                }),
            })
        }
        Command::Invariants => {
            let xi = subset(&spec.xi, ctx)?;
            let f = class_from_json(required(&spec.class, "class", cmd)?, ctx)?;
            Ok(match invariance_witness(&f, &xi, ctx)? {
                None => json!({
                    "xi": xi.one_based(),
                    "invariant": true,
                    "section": class_to_json(&section(&f, &xi, ctx)?, ctx),
                }),
                Some((i, u)) => json!({
                    "xi": xi.one_based(),
                    "invariant": false,
                    "witness": { "simple": i + 1, "element": element_json(u, ctx) },
                }),
            })
        }
        Command::CharMap => {
            let s = series_from_json(required(&spec.series, "series", cmd)?, ctx)?;
            let c = char_map(&s, ctx);
            Ok(json!({ "class": class_to_json(&c, ctx), "expansion": expansion_json(&c, ctx)? }))
        }
        Command::BorelCheck => {
            let d = spec.degree_bound.unwrap_or(4);
            Ok(borel_to_json(&formal_schubert::dual::borel_surjectivity_check(d, ctx)?))
        }
        Command::Verify => {
            let suite = SuiteOptions {
                seed: spec.seed.unwrap_or(SuiteOptions::default().seed),
                samples: spec.samples.unwrap_or(SuiteOptions::default().samples),
                verify_representatives: opts.verify_representatives,
            };
            let checks = run_suite(ctx, &suite);
            let all = checks.iter().all(|c| c.passed);
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "property": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            Ok(json!({ "checks": rows, "passed": all, "seed": suite.seed, "samples": suite.samples }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let e = JobSpec::parse(r#"{"command":"weyl-table","type":"A1","colour":1}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(JobSpec::parse(r#"{"command":"plot","type":"A1"}"#).is_err());
    }

    #[test]
    fn defaults_are_echoed() {
        let spec = JobSpec::parse(r#"{"command":"weyl-table","type":"B2"}"#).unwrap();
        let out = run_job(&spec, &RunOptions::default()).unwrap();
        assert_eq!(out["spec"]["lattice"], "ad");
        assert_eq!(out["spec"]["ring"], "Z");
        assert_eq!(out["spec"]["fgl"], "additive");
        assert_eq!(out["spec"]["trunc"], 10);
        assert_eq!(out["default_trunc"], 10);
        assert_eq!(out["result"]["order"], 8);
    }

    #[test]
    fn datum_must_be_given_once() {
        let spec = JobSpec::parse(
            r#"{"command":"weyl-table","type":"A1","simple_roots":[[2]],"simple_coroots":[[1]]}"#,
        )
        .unwrap();
        assert_eq!(run_job(&spec, &RunOptions::default()).unwrap_err().exit_code(), 2);
        let spec = JobSpec::parse(r#"{"command":"weyl-table","simple_roots":[[2]],"simple_coroots":[[1]]}"#).unwrap();
        assert_eq!(run_job(&spec, &RunOptions::default()).unwrap()["result"]["order"], 2);
    }
}
