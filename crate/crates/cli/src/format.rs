//! The instance file format: strict JSON, rationals as strings.
//!
//! ```json
//! {
//!   "format": 1,
//!   "dim": 2,
//!   "cone": { "generators": [["4", "1"], ["8", "1"]] },
//!   "seminorms": [{ "name": "sup", "rows": [["1", "0"], ["0", "1"]] }],
//!   "functionals": { "f": ["1", "1"] },
//!   "subspaces": { "X": [["1", "-2"]] },
//!   "subspace_functionals": { "fX": { "subspace": "X", "values": ["2"] } },
//!   "order_units": { "e": ["6", "1"] }
//! }
//! ```
//!
//! Number literals are rejected wherever a rational is expected, so no
//! float can enter an instance.

use std::collections::BTreeMap;

use ordrep::cone::PolyCone;
use ordrep::exactla::fmt_rat;
use ordrep::{parse_rat, CalibratedSpace, PolyhedralSeminorm, RMat, RVec, Subspace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {field}: {message}")]
    Invalid {
        line: usize,
        field: String,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCone {
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSeminorm {
    pub name: String,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSubspaceFunctional {
    pub subspace: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub cone: RawCone,
    pub seminorms: Vec<RawSeminorm>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functionals: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subspaces: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subspace_functionals: BTreeMap<String, RawSubspaceFunctional>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub order_units: BTreeMap<String, Vec<String>>,
}

/// A functional known only on the basis of a named subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFunctional {
    pub subspace: String,
    pub values: RVec,
}

/// A validated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: Option<String>,
    pub space: CalibratedSpace,
    pub functionals: BTreeMap<String, RVec>,
    pub subspaces: BTreeMap<String, Subspace>,
    pub subspace_functionals: BTreeMap<String, SubspaceFunctional>,
    pub order_units: BTreeMap<String, RVec>,
}

/// 1-based line of the first occurrence of `"key"`, for diagnostics.
fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map_or(1, |i| i + 1)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn invalid(&self, key: &str, field: impl Into<String>, message: impl ToString) -> FormatError {
        FormatError::Invalid {
            line: line_of(self.text, key),
            field: field.into(),
            message: message.to_string(),
        }
    }

    fn vector(
        &self,
        key: &str,
        field: &str,
        dim: usize,
        raw: &[String],
    ) -> Result<RVec, FormatError> {
        if raw.len() != dim {
            return Err(self.invalid(
                key,
                field,
                format!("expected {dim} entries, found {}", raw.len()),
            ));
        }
        raw.iter()
            .map(|s| parse_rat(s).map_err(|e| self.invalid(key, field, e)))
            .collect()
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_raw(&raw, text)
}

pub fn from_raw(raw: &RawInstance, text: &str) -> Result<Instance, FormatError> {
    let cx = Ctx { text };
    if raw.format != FORMAT_VERSION {
        return Err(cx.invalid(
            "format",
            "format",
            format!(
                "unsupported version {}, expected {FORMAT_VERSION}",
                raw.format
            ),
        ));
    }
    let dim = raw.dim;
    if dim == 0 {
        return Err(cx.invalid("dim", "dim", "dimension must be positive"));
    }
    let gens = raw
        .cone
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| cx.vector("generators", &format!("cone.generators[{i}]"), dim, g))
        .collect::<Result<Vec<_>, _>>()?;
    let cone = PolyCone::from_generators(dim, gens).map_err(|e| cx.invalid("cone", "cone", e))?;

    let mut seminorms = Vec::with_capacity(raw.seminorms.len());
    for (a, s) in raw.seminorms.iter().enumerate() {
        let rows = s
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| cx.vector("rows", &format!("seminorms[{a}].rows[{i}]"), dim, r))
            .collect::<Result<Vec<_>, _>>()?;
        let p = PolyhedralSeminorm::new(s.name.clone(), dim, rows)
            .map_err(|e| cx.invalid("seminorms", format!("seminorms[{a}]"), e))?;
        seminorms.push(p);
    }
    let space = CalibratedSpace::new(cone, seminorms).map_err(|e| {
        let key = match e {
            ordrep::Error::NotPointed { .. } => "cone",
            _ => "seminorms",
        };
        cx.invalid(key, key, e)
    })?;

    let mut functionals = BTreeMap::new();
    for (label, f) in &raw.functionals {
        functionals.insert(
            label.clone(),
            cx.vector(label, &format!("functionals.{label}"), dim, f)?,
        );
    }
    let mut subspaces = BTreeMap::new();
    for (label, basis) in &raw.subspaces {
        let field = format!("subspaces.{label}");
        let rows = basis
            .iter()
            .map(|b| cx.vector(label, &field, dim, b))
            .collect::<Result<Vec<_>, _>>()?;
        let m = RMat::new(rows, dim).map_err(|e| cx.invalid(label, &field, e))?;
        subspaces.insert(
            label.clone(),
            Subspace::new(m).map_err(|e| cx.invalid(label, &field, e))?,
        );
    }
    let mut subspace_functionals = BTreeMap::new();
    for (label, sf) in &raw.subspace_functionals {
        let field = format!("subspace_functionals.{label}");
        let sub = subspaces.get(&sf.subspace).ok_or_else(|| {
            cx.invalid(label, &field, format!("unknown subspace {:?}", sf.subspace))
        })?;
        let values = cx.vector(label, &field, sub.dim(), &sf.values)?;
        subspace_functionals.insert(
            label.clone(),
            SubspaceFunctional {
                subspace: sf.subspace.clone(),
                values,
            },
        );
    }
    let mut order_units = BTreeMap::new();
    for (label, e) in &raw.order_units {
        order_units.insert(
            label.clone(),
            cx.vector(label, &format!("order_units.{label}"), dim, e)?,
        );
    }
    Ok(Instance {
        name: raw.name.clone(),
        space,
        functionals,
        subspaces,
        subspace_functionals,
        order_units,
    })
}

pub fn strings(v: &RVec) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

impl Instance {
    pub fn bare(space: CalibratedSpace) -> Self {
        Instance {
            name: None,
            space,
            functionals: BTreeMap::new(),
            subspaces: BTreeMap::new(),
            subspace_functionals: BTreeMap::new(),
            order_units: BTreeMap::new(),
        }
    }

    pub fn to_raw(&self) -> RawInstance {
        let s = &self.space;
        RawInstance {
            format: FORMAT_VERSION,
            name: self.name.clone(),
            dim: s.dim(),
            cone: RawCone {
                generators: s.cone().generators().iter().map(strings).collect(),
            },
            seminorms: s
                .seminorms()
                .iter()
                .map(|p| RawSeminorm {
                    name: p.name().to_string(),
                    rows: p.rows().iter().map(strings).collect(),
                })
                .collect(),
            functionals: self
                .functionals
                .iter()
                .map(|(k, v)| (k.clone(), strings(v)))
                .collect(),
            subspaces: self
                .subspaces
                .iter()
                .map(|(k, sub)| (k.clone(), sub.basis().rows().iter().map(strings).collect()))
                .collect(),
            subspace_functionals: self
                .subspace_functionals
                .iter()
                .map(|(k, sf)| {
                    (
                        k.clone(),
                        RawSubspaceFunctional {
                            subspace: sf.subspace.clone(),
                            values: strings(&sf.values),
                        },
                    )
                })
                .collect(),
            order_units: self
                .order_units
                .iter()
                .map(|(k, v)| (k.clone(), strings(v)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("instance serializes")
    }
}

/// Parses `"1,-2/3,0"` (brackets and quotes tolerated) into a vector.
pub fn parse_vector_arg(text: &str) -> Result<RVec, ordrep::Error> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    if inner.trim().is_empty() {
        return Ok(RVec::new(Vec::new()));
    }
    inner
        .split(',')
        .map(|t| parse_rat(t.trim().trim_matches('"')))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const WEDGE: &str = r#"{
  "format": 1,
  "dim": 2,
  "cone": { "generators": [["4", "1"], ["8", "1"]] },
  "seminorms": [{ "name": "sup", "rows": [["1", "0"], ["0", "1"]] }]
}"#;

    #[test]
    fn parses_and_round_trips() {
        let inst = parse_instance(WEDGE).unwrap();
        assert_eq!(inst.space.dim(), 2);
        let again = parse_instance(&inst.to_json()).unwrap();
        assert_eq!(again, inst);
        assert_eq!(again.to_json(), inst.to_json());
    }

    #[test]
    fn rejects_floats_and_integers_as_rationals() {
        let bad = WEDGE.replace(r#"["4", "1"]"#, r#"[4.0, "1"]"#);
        assert!(matches!(
            parse_instance(&bad),
            Err(FormatError::Syntax { line: 4, .. })
        ));
        let bad = WEDGE.replace(r#"["4", "1"]"#, r#"[4, "1"]"#);
        assert!(parse_instance(&bad).is_err());
        let bad = WEDGE.replace(r#""4""#, r#""0.5""#);
        let err = parse_instance(&bad).unwrap_err();
        assert!(matches!(err, FormatError::Invalid { line: 4, .. }), "{err}");
    }

    #[test]
    fn rejects_non_pointed_cone_with_witness() {
        let bad = WEDGE.replace(
            r#"[["4", "1"], ["8", "1"]]"#,
            r#"[["1", "0"], ["-1", "0"]]"#,
        );
        let err = parse_instance(&bad).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("(1, 0)"), "{err}");
    }

    #[test]
    fn rejects_non_spanning_rows() {
        let bad = WEDGE.replace(r#"[["1", "0"], ["0", "1"]]"#, r#"[["1", "0"], ["2", "0"]]"#);
        let err = parse_instance(&bad).unwrap_err().to_string();
        assert!(err.contains("rank 1"), "{err}");
    }

    #[test]
    fn vector_arguments() {
        assert_eq!(
            parse_vector_arg("1,-2/3").unwrap(),
            RVec::new(vec![ordrep::rat(1), ordrep::ratio(-2, 3)])
        );
        assert_eq!(
            parse_vector_arg("[\"1\", \"0\"]").unwrap(),
            RVec::from_i64s(&[1, 0])
        );
        assert!(parse_vector_arg("1.5").is_err());
    }
}
