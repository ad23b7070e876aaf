use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use lagtor::ambient::{group_ga, is_special, shift_equiv, ManifoldDescriptor, ShiftVerdict};
use lagtor::invariants::{
    classify, clifford_lift, displacement_energy, equiv, obstruct_ball, perturbed_energy, torus_invariants, InvariantSet,
    Setting, TorusSpec,
};
use lagtor::numlab::suite;
use lagtor::oracle::{bfs_low_path, int_path};
use lagtor::pathengine::{certificate, check_certificate, check_path, low_path, CheckFailure};
use lagtor::{Error, SymBasis, SymReal};

use crate::json::{
    basis_from_doc, basis_to_doc, certificate_from_doc, certificate_to_doc, manifold_from_doc, parse_rat, path_from_doc,
    path_to_doc, real_from_doc, real_to_doc, vec_from_doc, vec_to_doc, CertificateDoc, InputDoc, PathDoc, SchemaError,
    FORMAT,
};
use crate::presets::preset;
use crate::{Cli, Command, SettingArg};

/// What the process prints and how it exits.
pub struct Outcome {
    pub value: Value,
    pub code: u8,
    /// `value` is an error report rather than the command's result.
    pub is_error: bool,
    pub message: Option<String>,
}

pub enum Failure {
    Schema(SchemaError),
    Usage(String),
    Lib(Error),
    Rejected(CheckFailure),
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Failure {
        Failure::Schema(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn error_class(e: &Error) -> (&'static str, u8) {
    use Error::*;
    match e {
        RefineNeeded { .. } => ("refine-needed", 2),
        BasisMismatch => ("basis-mismatch", 1),
        InvalidBasis(_) => ("invalid-basis", 1),
        DimensionMismatch { .. } => ("dimension-mismatch", 1),
        GroupMismatch => ("group-mismatch", 1),
        NotMember => ("not-member", 1),
        ZeroElement => ("zero-element", 1),
        NotPrimitive => ("not-primitive", 1),
        NotSubmodule => ("not-submodule", 1),
        NotUnimodular(_) => ("not-unimodular", 1),
        RankMismatch { .. } => ("rank-mismatch", 1),
        InvalidTorus(_) => ("invalid-torus", 1),
        CapacityTooSmall { .. } => ("capacity-too-small", 1),
        MissingCapacity => ("missing-capacity", 1),
        NonPositiveResult { .. } => ("non-positive-result", 1),
        InvalidMove(_) => ("invalid-move", 1),
        HypothesisViolated(_) => ("hypothesis-violated", 1),
        NotEquivalent => ("not-equivalent", 1),
        MissingS0 => ("missing-s0", 1),
        DomainViolation(_) => ("domain-violation", 1),
        InvalidInput(_) => ("invalid-input", 1),
        InternalLownessFailure => ("internal-lowness-failure", 3),
        IterationLimit { .. } => ("iteration-limit", 3),
        Cancelled => ("cancelled", 3),
        StateSpaceCap { .. } => ("state-space-cap", 3),
        Internal(_) => ("internal", 3),
    }
}

fn report_failure(f: Failure) -> Outcome {
    let (value, code, message) = match f {
        Failure::Schema(e) => {
            let msg = format!("{}: {}", e.path, e.message);
            (json!({"format": FORMAT, "kind": "error", "error": "schema", "pointer": e.path, "message": e.message}), 1, msg)
        }
        Failure::Usage(m) => (json!({"format": FORMAT, "kind": "error", "error": "usage", "message": m}), 1, m),
        Failure::Lib(e) => {
            let (class, code) = error_class(&e);
            let mut v = json!({"format": FORMAT, "kind": "error", "error": class, "message": e.to_string()});
            if let Error::RefineNeeded { lhs, rhs } = &e {
                v["lhs"] = json!(lhs);
                v["rhs"] = json!(rhs);
            }
            (v, code, e.to_string())
        }
        Failure::Rejected(c) => {
            let msg = format!("rejected: {}", c);
            (json!({"format": FORMAT, "kind": "check", "valid": false, "failure": c}), 3, msg)
        }
    };
    Outcome { value, code, is_error: true, message: Some(message) }
}

pub fn run(cli: &Cli) -> Outcome {
    match dispatch(cli) {
        Ok((value, code)) => {
            let message = (code != 0).then(|| "one or more checks failed".to_string());
            Outcome { value, code, is_error: false, message }
        }
        Err(f) => report_failure(f),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// Turns a serde_path_to_error path into a JSON pointer.
fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

fn parse_doc<T: serde::de::DeserializeOwned>(value: Value) -> Run<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let p = pointer(e.path());
        Failure::Schema(SchemaError::new(if p.is_empty() { "/".into() } else { p }, e.into_inner().to_string()))
    })
}

fn read_value(path: &std::path::Path) -> Run<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Schema(SchemaError::new("/", format!("{}: not valid JSON: {}", path.display(), e))))?;
    match value.get("format").and_then(Value::as_str) {
        Some(FORMAT) => Ok(value),
        Some(f) => Err(SchemaError::new("/format", format!("unsupported format {:?}, expected {:?}", f, FORMAT)).into()),
        None => Err(SchemaError::new("/format", format!("missing \"format\": {:?} header", FORMAT)).into()),
    }
}

/// Input values gathered from `--json` and the inline flags.
struct Input<'a> {
    cli: &'a Cli,
    doc: Option<InputDoc>,
    basis: Arc<SymBasis>,
}

impl<'a> Input<'a> {
    fn load(cli: &'a Cli) -> Run<Input<'a>> {
        let doc: Option<InputDoc> = match &cli.input.json {
            Some(p) => Some(parse_doc(read_value(p)?)?),
            None => None,
        };
        let basis = basis_from_doc(doc.as_ref().and_then(|d| d.basis.as_ref()))?;
        Ok(Input { cli, doc, basis })
    }

    fn inline_vec(&self, flag: &str, text: &str) -> Run<Vec<SymReal>> {
        text.split(',')
            .enumerate()
            .map(|(i, t)| {
                parse_rat(t)
                    .map(|r| SymReal::constant(&self.basis, r))
                    .ok_or_else(|| SchemaError::new(format!("--{}/{}", flag, i), format!("{:?} is not a rational number", t)).into())
            })
            .collect()
    }

    fn inline_real(&self, flag: &str, text: &str) -> Run<SymReal> {
        parse_rat(text)
            .map(|r| SymReal::constant(&self.basis, r))
            .ok_or_else(|| SchemaError::new(format!("--{}", flag), format!("{:?} is not a rational number", text)).into())
    }

    fn vector(&self, name: &str) -> Run<Option<Vec<SymReal>>> {
        let i = &self.cli.input;
        let flag = match name {
            "a" => &i.a,
            "e" => &i.e,
            "d" => &i.d,
            "s" => &i.s,
            _ => unreachable!(),
        };
        if let Some(t) = flag {
            return self.inline_vec(name, t).map(Some);
        }
        let Some(doc) = &self.doc else { return Ok(None) };
        let field = match name {
            "a" => &doc.a,
            "e" => &doc.e,
            "d" => &doc.d,
            _ => &doc.s,
        };
        Ok(field.as_ref().map(|v| vec_from_doc(v, &self.basis, &format!("/{}", name))).transpose()?)
    }

    fn real(&self, name: &str) -> Run<Option<SymReal>> {
        let i = &self.cli.input;
        let flag = match name {
            "b" => &i.b,
            "be" => &i.be,
            _ => &i.c,
        };
        if let Some(t) = flag {
            return self.inline_real(name, t).map(Some);
        }
        let Some(doc) = &self.doc else { return Ok(None) };
        let field = match name {
            "b" => &doc.b,
            "be" => &doc.be,
            _ => &doc.c,
        };
        Ok(field.as_ref().map(|v| real_from_doc(v, &self.basis, &format!("/{}", name))).transpose()?)
    }

    fn need_vector(&self, name: &str) -> Run<Vec<SymReal>> {
        self.vector(name)?.ok_or_else(|| Failure::Usage(format!("missing vector {0:?} (--{0} or the JSON field)", name)))
    }

    fn need_real(&self, name: &str) -> Run<SymReal> {
        self.real(name)?.ok_or_else(|| Failure::Usage(format!("missing value {0:?} (--{0} or the JSON field)", name)))
    }

    /// The torus `a` (capacity `b`) or `e` (capacity `be`).
    fn torus(&self, name: &str) -> Run<TorusSpec> {
        let cap = self.real(if name == "a" { "b" } else { "be" })?;
        Ok(TorusSpec::new(self.need_vector(name)?, cap)?)
    }

    fn manifold(&self) -> Run<ManifoldDescriptor> {
        if let Some(p) = &self.cli.input.preset {
            return Ok(preset(p, &self.basis)?);
        }
        match self.doc.as_ref().and_then(|d| d.manifold.as_ref()) {
            Some(m) => Ok(manifold_from_doc(m, &self.basis, "/manifold")?),
            None => Err(Failure::Usage("missing ambient manifold (--preset or the JSON field \"manifold\")".into())),
        }
    }
}

fn invariants_value(inv: &InvariantSet) -> Value {
    json!({
        "ua": real_to_doc(&inv.ua),
        "m": inv.m,
        "total": real_to_doc(&inv.total),
        "norm": real_to_doc(&inv.norm),
        "gamma": {
            "rank": inv.gamma.rank(),
            "generators": vec_to_doc(&inv.gamma.generators()),
        },
        "stripped": vec_to_doc(&inv.stripped),
    })
}

fn header(kind: &str, basis: &SymBasis) -> Value {
    json!({"format": FORMAT, "kind": kind, "basis": basis_to_doc(basis)})
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn dispatch(cli: &Cli) -> Run<(Value, u8)> {
    if let Command::Check { file } = &cli.command {
        let path = file
            .as_ref()
            .or(cli.input.json.as_ref())
            .ok_or_else(|| Failure::Usage("check needs a document (positional FILE or --json)".into()))?;
        return run_check(read_value(path)?).map(|v| (v, 0));
    }
    if let Command::Verify = &cli.command {
        return run_verify(cli.input.seed);
    }
    let input = Input::load(cli)?;
    let basis = input.basis.clone();
    let v = match &cli.command {
        Command::Invariants => {
            let t = input.torus("a")?;
            merge(
                header("invariants", &basis),
                merge(json!({"a": vec_to_doc(t.components())}), invariants_value(&torus_invariants(&t)?)),
            )
        }
        Command::Equiv => {
            let (t, u) = (input.torus("a")?, input.torus("e")?);
            let eq = equiv(&t, &u)?;
            merge(
                header("equiv", &basis),
                json!({
                    "equivalent": eq,
                    "a": invariants_value(&torus_invariants(&t)?),
                    "e": invariants_value(&torus_invariants(&u)?),
                }),
            )
        }
        Command::Energy => {
            let t = input.torus("a")?;
            let energy = match input.vector("s")? {
                Some(s) => perturbed_energy(&t, &s)?,
                None => displacement_energy(&t)?,
            };
            merge(header("energy", &basis), json!({"energy": real_to_doc(&energy)}))
        }
        Command::Clifford => {
            let t = input.torus("a")?;
            let b = input.need_real("b")?;
            let lifted = clifford_lift(&TorusSpec::new(t.components().to_vec(), None)?, &b)?;
            merge(
                header("clifford", &basis),
                json!({
                    "capacity": real_to_doc(&b),
                    "lifted": vec_to_doc(lifted.components()),
                    "invariants": invariants_value(&torus_invariants(&lifted)?),
                }),
            )
        }
        Command::Obstruct => {
            let b = input.need_real("b")?;
            let t = TorusSpec::new(input.need_vector("a")?, None)?;
            let u = TorusSpec::new(input.need_vector("e")?, None)?;
            merge(header("obstruct", &basis), json!({"ball": real_to_doc(&b), "verdict": obstruct_ball(&t, &u, &b)?}))
        }
        Command::Classify => {
            let (t, u) = (input.torus("a")?, input.torus("e")?);
            let (setting, name) = match cli.input.setting {
                SettingArg::LiouvilleTame => (Setting::LiouvilleTame, "liouville-tame"),
                SettingArg::AsphericalTameWithCapacity => (Setting::AsphericalTameWithCapacity, "aspherical-tame-with-capacity"),
            };
            merge(header("classify", &basis), merge(json!({"setting": name}), to_value(&classify(&t, &u, setting)?)))
        }
        Command::Path => {
            let (d, e) = (input.need_vector("d")?, input.need_vector("e")?);
            to_value(&path_to_doc(&low_path(&d, &e)?))
        }
        Command::Certificate => {
            let (t, u) = (input.torus("a")?, input.torus("e")?);
            to_value(&certificate_to_doc(&certificate(&t, &u)?))
        }
        Command::Shift => {
            let m = input.manifold()?;
            let c = input.need_real("c")?;
            let (d, e) = (input.need_vector("d")?, input.need_vector("e")?);
            let special = is_special(&m)?;
            let mut v = merge(header("shift", &basis), json!({"special": special}));
            match shift_equiv(&m, &c, &d, &e)? {
                ShiftVerdict::EquivalentForSmallA => v["verdict"] = json!("EquivalentForSmallA"),
                ShiftVerdict::NotImplied { reason } => {
                    v["verdict"] = json!("NotImplied");
                    v["reason"] = json!(reason);
                }
            }
            if special {
                // reported at a = c; with c1(S0) = 0 it is the same for every a
                if let Ok(g) = group_ga(&m, &c, true) {
                    v["g_s0"] = json!({"rank": g.rank(), "generators": vec_to_doc(&g.generators())});
                }
            }
            v
        }
        Command::Oracle => {
            let (d, e) = (integers(&input.need_vector("d")?, "d")?, integers(&input.need_vector("e")?, "e")?);
            let found = bfs_low_path(&d, &e, cli.input.node_cap)?;
            let path = match &found {
                Some(moves) => to_value(&path_to_doc(&int_path(&d, moves)?)),
                None => Value::Null,
            };
            merge(header("oracle", &basis), json!({"found": found.is_some(), "node_cap": cli.input.node_cap, "path": path}))
        }
        Command::Check { .. } | Command::Verify => unreachable!(),
    };
    Ok((v, 0))
}

fn integers(v: &[SymReal], name: &str) -> Run<Vec<i64>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            let c = x.coeffs();
            let ok = c[1..].iter().all(|q| *q.numer() == num_bigint::BigInt::from(0)) && c[0].is_integer();
            let n = ok.then(|| i64::try_from(c[0].numer()).ok()).flatten();
            n.ok_or_else(|| SchemaError::new(format!("/{}/{}", name, i), "the oracle takes machine integers").into())
        })
        .collect()
}

fn run_check(value: Value) -> Run<Value> {
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or_default().to_string();
    let failure = match kind.as_str() {
        "path" => {
            let doc: PathDoc = parse_doc(value)?;
            let (start, moves, end) = path_from_doc(&doc)?;
            check_path(&start, &moves, end.as_deref())?
        }
        "certificate" => {
            let doc: CertificateDoc = parse_doc(value)?;
            check_certificate(&certificate_from_doc(&doc)?)?
        }
        other => {
            return Err(SchemaError::new("/kind", format!("expected \"path\" or \"certificate\", found {:?}", other)).into())
        }
    };
    match failure {
        Some(f) => Err(Failure::Rejected(f)),
        None => Ok(json!({"format": FORMAT, "kind": "check", "checked": kind, "valid": true})),
    }
}

fn run_verify(seed: u64) -> Run<(Value, u8)> {
    let reports = suite::all(seed)?;
    let pass = reports.iter().all(|r| r.pass);
    let v = json!({"format": FORMAT, "kind": "verify", "seed": seed, "pass": pass, "reports": reports});
    Ok((v, if pass { 0 } else { 3 }))
}
