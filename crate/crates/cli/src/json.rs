//! The `lagtor/1` JSON schemas and their conversion to library values.
//!
//! Reals are coefficient arrays over the document's basis, constant first, each entry an
//! integer, a fraction `"p/q"` or a decimal `"6.5"`. A bare scalar stands for a constant.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use lagtor::ambient::{Generator, ManifoldDescriptor};
use lagtor::pathengine::{CertStep, Direction, IsotopyCertificate, Move, MoveKind, MovePath, StepKind};
use lagtor::{Rat, SymBasis, SymReal, Symbol};

pub const FORMAT: &str = "lagtor/1";

/// A conversion failure with the JSON pointer of the offending value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> SchemaError {
        SchemaError { path: path.into(), message: message.into() }
    }
}

pub type Schema<T> = std::result::Result<T, SchemaError>;

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let digits = int.trim_start_matches(['-', '+']);
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole = BigInt::from_str(&format!("{}{}", if digits.is_empty() { "0" } else { digits }, frac)).ok()?;
        let r = BigRational::new(whole, BigInt::from(10).pow(frac.len() as u32));
        return Some(if neg { -r } else { r });
    }
    let r = BigRational::from_str(s).ok()?;
    Some(r)
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Str(String),
}

impl Num {
    fn to_rat(&self, path: &str) -> Schema<Rat> {
        match self {
            Num::Int(n) => Ok(Rat::from_integer((*n).into())),
            Num::Str(s) => parse_rat(s).ok_or_else(|| SchemaError::new(path, format!("{:?} is not a rational number", s))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealDoc {
    Coeffs(Vec<Num>),
    Scalar(Num),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolDoc {
    pub name: String,
    pub enclosure: [Num; 2],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    /// Symbols after the implicit constant `1`.
    pub symbols: Vec<SymbolDoc>,
}

pub fn basis_from_doc(doc: Option<&BasisDoc>) -> Schema<Arc<SymBasis>> {
    let Some(doc) = doc else {
        return Ok(SymBasis::trivial());
    };
    let mut symbols = Vec::new();
    for (i, s) in doc.symbols.iter().enumerate() {
        let path = format!("/basis/symbols/{}/enclosure", i);
        let lo = s.enclosure[0].to_rat(&format!("{}/0", path))?;
        let hi = s.enclosure[1].to_rat(&format!("{}/1", path))?;
        symbols.push(Symbol::new(s.name.clone(), lo, hi));
    }
    SymBasis::with_symbols(symbols).map_err(|e| SchemaError::new("/basis", e.to_string()))
}

pub fn basis_to_doc(b: &SymBasis) -> BasisDoc {
    BasisDoc {
        symbols: b.symbols()[1..]
            .iter()
            .map(|s| SymbolDoc { name: s.name.clone(), enclosure: [Num::Str(fmt_rat(&s.lo)), Num::Str(fmt_rat(&s.hi))] })
            .collect(),
    }
}

pub fn real_from_doc(doc: &RealDoc, basis: &Arc<SymBasis>, path: &str) -> Schema<SymReal> {
    match doc {
        RealDoc::Scalar(n) => Ok(SymReal::constant(basis, n.to_rat(path)?)),
        RealDoc::Coeffs(c) => {
            if c.len() != basis.len() {
                return Err(SchemaError::new(
                    path,
                    format!("{} coefficients given, the basis has {} symbols", c.len(), basis.len()),
                ));
            }
            let coeffs = c.iter().enumerate().map(|(i, n)| n.to_rat(&format!("{}/{}", path, i))).collect::<Schema<Vec<_>>>()?;
            SymReal::new(basis.clone(), coeffs).map_err(|e| SchemaError::new(path, e.to_string()))
        }
    }
}

pub fn real_to_doc(x: &SymReal) -> RealDoc {
    RealDoc::Coeffs(x.coeffs().iter().map(|c| Num::Str(fmt_rat(c))).collect())
}

pub fn vec_from_doc(doc: &[RealDoc], basis: &Arc<SymBasis>, path: &str) -> Schema<Vec<SymReal>> {
    doc.iter().enumerate().map(|(i, x)| real_from_doc(x, basis, &format!("{}/{}", path, i))).collect()
}

pub fn vec_to_doc(v: &[SymReal]) -> Vec<RealDoc> {
    v.iter().map(real_to_doc).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub sigma: RealDoc,
    pub c1: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDoc {
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub s0: Option<usize>,
}

pub fn manifold_from_doc(doc: &ManifoldDoc, basis: &Arc<SymBasis>, path: &str) -> Schema<ManifoldDescriptor> {
    let mut gens = Vec::new();
    for (i, g) in doc.generators.iter().enumerate() {
        let sigma = real_from_doc(&g.sigma, basis, &format!("{}/generators/{}/sigma", path, i))?;
        gens.push(Generator { sigma, c1: g.c1 });
    }
    ManifoldDescriptor::new(gens, doc.s0).map_err(|e| SchemaError::new(format!("{}/s0", path), e.to_string()))
}

/// The flat input document shared by all commands; each command reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub format: String,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub basis: Option<BasisDoc>,
    #[serde(default)]
    pub a: Option<Vec<RealDoc>>,
    #[serde(default)]
    pub e: Option<Vec<RealDoc>>,
    #[serde(default)]
    pub b: Option<RealDoc>,
    #[serde(default)]
    pub be: Option<RealDoc>,
    #[serde(default)]
    pub c: Option<RealDoc>,
    #[serde(default)]
    pub d: Option<Vec<RealDoc>>,
    #[serde(default)]
    pub s: Option<Vec<RealDoc>>,
    #[serde(default)]
    pub manifold: Option<ManifoldDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub kind: MoveKind,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDoc {
    pub format: String,
    pub kind: String,
    #[serde(default)]
    pub basis: Option<BasisDoc>,
    pub start: Vec<RealDoc>,
    pub moves: Vec<MoveDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<Vec<RealDoc>>,
}

pub fn path_to_doc(p: &MovePath) -> PathDoc {
    PathDoc {
        format: FORMAT.into(),
        kind: "path".into(),
        basis: Some(basis_to_doc(p.start()[0].basis())),
        start: vec_to_doc(p.start()),
        moves: p.moves().iter().map(|m| MoveDoc { kind: m.kind, i: m.i + 1, j: m.j + 1 }).collect(),
        end: Some(vec_to_doc(p.end())),
    }
}

/// Start, moves (0-based) and optional end; no admissibility is assumed.
pub fn path_from_doc(doc: &PathDoc) -> Schema<(Vec<SymReal>, Vec<Move>, Option<Vec<SymReal>>)> {
    let basis = basis_from_doc(doc.basis.as_ref())?;
    let start = vec_from_doc(&doc.start, &basis, "/start")?;
    let mut moves = Vec::new();
    for (s, m) in doc.moves.iter().enumerate() {
        if m.i == 0 || m.j == 0 {
            return Err(SchemaError::new(format!("/moves/{}", s), "move indices are 1-based"));
        }
        moves.push(Move { kind: m.kind, i: m.i - 1, j: m.j - 1 });
    }
    let end = doc.end.as_ref().map(|e| vec_from_doc(e, &basis, "/end")).transpose()?;
    Ok((start, moves, end))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    pub from: Vec<RealDoc>,
    pub to: Vec<RealDoc>,
    pub ball: RealDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub format: String,
    pub kind: String,
    #[serde(default)]
    pub basis: Option<BasisDoc>,
    pub a: Vec<RealDoc>,
    pub a_prime: Vec<RealDoc>,
    pub steps: Vec<StepDoc>,
    pub overall_ball: RealDoc,
}

pub fn certificate_to_doc(c: &IsotopyCertificate) -> CertificateDoc {
    let steps = c
        .steps
        .iter()
        .map(|s| {
            let mut doc = StepDoc {
                kind: String::new(),
                perm: None,
                i: None,
                j: None,
                direction: None,
                from: vec_to_doc(&s.from),
                to: vec_to_doc(&s.to),
                ball: real_to_doc(&s.ball),
            };
            match &s.kind {
                StepKind::UnitaryPermutation { perm } => {
                    doc.kind = "unitary-permutation".into();
                    doc.perm = Some(perm.iter().map(|q| q + 1).collect());
                }
                StepKind::Step2Apply { i, j, direction } => {
                    doc.kind = "step2-apply".into();
                    doc.i = Some(i + 1);
                    doc.j = Some(j + 1);
                    doc.direction = Some(*direction);
                }
            }
            doc
        })
        .collect();
    CertificateDoc {
        format: FORMAT.into(),
        kind: "certificate".into(),
        basis: Some(basis_to_doc(c.a[0].basis())),
        a: vec_to_doc(&c.a),
        a_prime: vec_to_doc(&c.a_prime),
        steps,
        overall_ball: real_to_doc(&c.overall_ball),
    }
}

fn one_based(x: Option<usize>, path: String) -> Schema<usize> {
    match x {
        Some(v) if v >= 1 => Ok(v - 1),
        Some(_) => Err(SchemaError::new(path, "indices are 1-based")),
        None => Err(SchemaError::new(path, "missing field")),
    }
}

pub fn certificate_from_doc(doc: &CertificateDoc) -> Schema<IsotopyCertificate> {
    let basis = basis_from_doc(doc.basis.as_ref())?;
    let mut steps = Vec::new();
    for (s, st) in doc.steps.iter().enumerate() {
        let at = format!("/steps/{}", s);
        let kind = match st.kind.as_str() {
            "unitary-permutation" => {
                let perm = st.perm.as_ref().ok_or_else(|| SchemaError::new(format!("{}/perm", at), "missing field"))?;
                let perm = perm
                    .iter()
                    .enumerate()
                    .map(|(p, &q)| one_based(Some(q), format!("{}/perm/{}", at, p)))
                    .collect::<Schema<Vec<_>>>()?;
                StepKind::UnitaryPermutation { perm }
            }
            "step2-apply" => StepKind::Step2Apply {
                i: one_based(st.i, format!("{}/i", at))?,
                j: one_based(st.j, format!("{}/j", at))?,
                direction: st.direction.ok_or_else(|| SchemaError::new(format!("{}/direction", at), "missing field"))?,
            },
            other => return Err(SchemaError::new(format!("{}/kind", at), format!("unknown step kind {:?}", other))),
        };
        steps.push(CertStep {
            kind,
            from: vec_from_doc(&st.from, &basis, &format!("{}/from", at))?,
            to: vec_from_doc(&st.to, &basis, &format!("{}/to", at))?,
            ball: real_from_doc(&st.ball, &basis, &format!("{}/ball", at))?,
        });
    }
    Ok(IsotopyCertificate {
        a: vec_from_doc(&doc.a, &basis, "/a")?,
        a_prime: vec_from_doc(&doc.a_prime, &basis, "/a_prime")?,
        steps,
        overall_ball: real_from_doc(&doc.overall_ball, &basis, "/overall_ball")?,
    })
}
