//! Named ambient manifolds. `--preset s2xs2:3,4` binds the preset's parameters in order.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use lagtor::ambient::{Generator, ManifoldDescriptor};
use lagtor::{Rat, SymBasis, SymReal};

use crate::json::{parse_rat, Schema, SchemaError, FORMAT};

const LIBRARY: &[(&str, &str)] = &[
    ("aspherical", include_str!("../presets/aspherical.json")),
    ("s2xs2", include_str!("../presets/s2xs2.json")),
    ("cp2", include_str!("../presets/cp2.json")),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetDoc {
    format: String,
    kind: String,
    name: String,
    params: Vec<String>,
    generators: Vec<PresetGenerator>,
    s0: Option<usize>,
}

/// `sigma` is an integer combination of the parameters.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PresetGenerator {
    sigma: BTreeMap<String, i64>,
    c1: i64,
}

pub fn names() -> Vec<&'static str> {
    LIBRARY.iter().map(|(n, _)| *n).collect()
}

/// Instantiates `name[:p1,p2,..]` with the parameters as constants over `basis`.
pub fn preset(spec: &str, basis: &Arc<SymBasis>) -> Schema<ManifoldDescriptor> {
    let err = |msg: String| SchemaError::new("--preset", msg);
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (n, a.split(',').map(str::trim).collect::<Vec<_>>()),
        None => (spec, Vec::new()),
    };
    let text = LIBRARY
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| err(format!("unknown preset {:?}; known: {}", name, names().join(", "))))?;
    let doc: PresetDoc = serde_json::from_str(text).map_err(|e| err(format!("preset {} is malformed: {}", name, e)))?;
    debug_assert!(doc.format == FORMAT && doc.kind == "preset" && doc.name == name);
    if args.len() != doc.params.len() {
        return Err(err(format!("preset {} takes {} parameters ({}), got {}", name, doc.params.len(), doc.params.join(","), args.len())));
    }
    let mut values = BTreeMap::new();
    for (p, a) in doc.params.iter().zip(&args) {
        let v = parse_rat(a).ok_or_else(|| err(format!("parameter {} = {:?} is not a rational number", p, a)))?;
        values.insert(p.as_str(), v);
    }
    let mut gens = Vec::new();
    for g in &doc.generators {
        let mut sigma = Rat::from_integer(0.into());
        for (p, c) in &g.sigma {
            let v = values.get(p.as_str()).ok_or_else(|| err(format!("preset {} uses undeclared parameter {}", name, p)))?;
            sigma += v * Rat::from_integer((*c).into());
        }
        gens.push(Generator { sigma: SymReal::constant(basis, sigma), c1: g.c1 });
    }
    ManifoldDescriptor::new(gens, doc.s0).map_err(|e| err(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s2xs2_matches_the_library_constructor() {
        let b = SymBasis::trivial();
        let m = preset("s2xs2:3,4", &b).unwrap();
        let want = ManifoldDescriptor::sphere_product(&SymReal::from_int(&b, 3), &SymReal::from_int(&b, 4)).unwrap();
        assert_eq!(m, want);
        assert_eq!(preset("aspherical", &b).unwrap(), ManifoldDescriptor::aspherical());
    }

    #[test]
    fn every_library_entry_parses() {
        let b = SymBasis::trivial();
        for (name, text) in LIBRARY {
            let doc: PresetDoc = serde_json::from_str(text).unwrap();
            assert_eq!(doc.name, *name);
            let args = vec!["2"; doc.params.len()].join(",");
            let spec = if args.is_empty() { name.to_string() } else { format!("{}:{}", name, args) };
            preset(&spec, &b).unwrap();
        }
    }

    #[test]
    fn bad_arguments() {
        let b = SymBasis::trivial();
        assert!(preset("s2xs2:3", &b).is_err());
        assert!(preset("s2xs2:3,x", &b).is_err());
        assert!(preset("torus", &b).is_err());
    }
}
