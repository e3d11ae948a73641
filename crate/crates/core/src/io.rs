//! JSON interchange documents for fans and morphisms.
//!
//! A fan document has the fields `rank`, `rays` and `max_cones` (0-based
//! ray indices); a morphism document has `source`, `target` (fan documents)
//! and `matrix` (one row per target coordinate). Serialisation is canonical,
//! so `parse(serialize(f)) == f` and `serialize(parse(s)) == s` for
//! canonical `s`.

use std::fmt;

use serde::Deserialize;

use crate::exactla::IntMatrix;
use crate::fan::Fan;
use crate::morphism::ToricMorphism;

/// Parse failure with the place it happened: `line:column` for syntax
/// errors, a field path such as `rays[2]` for content errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for DocumentError {}

fn at(location: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError {
        location: location.into(),
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanDocument {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDocument {
    source: FanDocument,
    target: FanDocument,
    matrix: Vec<Vec<i64>>,
}

fn syntax(e: serde_json::Error) -> DocumentError {
    at(format!("{}:{}", e.line(), e.column()), e.to_string())
}

fn build_fan(doc: FanDocument, prefix: &str) -> Result<Fan, DocumentError> {
    for (i, r) in doc.rays.iter().enumerate() {
        if r.len() != doc.rank {
            return Err(at(
                format!("{prefix}rays[{i}]"),
                format!("has {} coordinates, rank is {}", r.len(), doc.rank),
            ));
        }
    }
    for (c, cone) in doc.max_cones.iter().enumerate() {
        for (k, &i) in cone.iter().enumerate() {
            if i >= doc.rays.len() {
                return Err(at(
                    format!("{prefix}max_cones[{c}][{k}]"),
                    format!("ray index {i} out of range (there are {} rays)", doc.rays.len()),
                ));
            }
        }
    }
    Fan::new(doc.rank, doc.rays, doc.max_cones).map_err(|e| at(prefix.trim_end_matches('.'), e.to_string()))
}

pub fn parse_fan(text: &str) -> Result<Fan, DocumentError> {
    let doc: FanDocument = serde_json::from_str(text).map_err(syntax)?;
    build_fan(doc, "")
}

pub fn parse_morphism(text: &str) -> Result<ToricMorphism, DocumentError> {
    let doc: MorphismDocument = serde_json::from_str(text).map_err(syntax)?;
    let source = build_fan(doc.source, "source.")?;
    let target = build_fan(doc.target, "target.")?;
    if doc.matrix.len() != target.dim() {
        return Err(at(
            "matrix",
            format!("has {} rows, target rank is {}", doc.matrix.len(), target.dim()),
        ));
    }
    for (i, row) in doc.matrix.iter().enumerate() {
        if row.len() != source.dim() {
            return Err(at(
                format!("matrix[{i}]"),
                format!("has {} entries, source rank is {}", row.len(), source.dim()),
            ));
        }
    }
    let map = IntMatrix::from_rows(source.dim(), &doc.matrix);
    ToricMorphism::new(source, target, map).map_err(|e| at("matrix", e.to_string()))
}

fn int_rows<T: ToString>(rows: &[Vec<T>]) -> String {
    let inner: Vec<String> = rows
        .iter()
        .map(|r| {
            let xs: Vec<String> = r.iter().map(ToString::to_string).collect();
            format!("[{}]", xs.join(", "))
        })
        .collect();
    format!("[{}]", inner.join(", "))
}

fn fan_body(f: &Fan, indent: &str) -> String {
    format!(
        "{{\n{indent}  \"rank\": {},\n{indent}  \"rays\": {},\n{indent}  \"max_cones\": {}\n{indent}}}",
        f.dim(),
        int_rows(f.rays()),
        int_rows(f.max_cones()),
    )
}

/// Canonical text of a fan document, with a trailing newline.
pub fn serialize_fan(f: &Fan) -> String {
    format!("{}\n", fan_body(f, ""))
}

pub fn serialize_morphism(m: &ToricMorphism) -> String {
    let rows: Vec<Vec<String>> = m
        .map()
        .row_vectors()
        .into_iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect();
    format!(
        "{{\n  \"source\": {},\n  \"target\": {},\n  \"matrix\": {}\n}}\n",
        fan_body(m.source(), "  "),
        fan_body(m.target(), "  "),
        int_rows(&rows),
    )
}

/// The fan as a JSON value (same fields as the document).
pub fn fan_to_value(f: &Fan) -> serde_json::Value {
    serde_json::json!({
        "rank": f.dim(),
        "rays": f.rays(),
        "max_cones": f.max_cones(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{hirzebruch_fan, projective_space_fan, star_subdivision};

    #[test]
    fn fan_round_trip() {
        let f = star_subdivision(&projective_space_fan(3).unwrap(), &[1, 1, 0]).unwrap();
        let text = serialize_fan(&f);
        let g = parse_fan(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(serialize_fan(&g), text);
    }

    #[test]
    fn canonical_text() {
        let f = projective_space_fan(2).unwrap();
        assert_eq!(
            serialize_fan(&f),
            "{\n  \"rank\": 2,\n  \"rays\": [[1, 0], [0, 1], [-1, -1]],\n  \"max_cones\": [[0, 1], [0, 2], [1, 2]]\n}\n"
        );
    }

    #[test]
    fn morphism_round_trip() {
        let p1 = projective_space_fan(1).unwrap();
        let m = ToricMorphism::new(
            hirzebruch_fan(2).unwrap(),
            p1,
            IntMatrix::from_rows(2, &[[1i64, 0]]),
        )
        .unwrap();
        let text = serialize_morphism(&m);
        assert_eq!(parse_morphism(&text).unwrap(), m);
    }

    #[test]
    fn diagnostics_carry_locations() {
        let e = parse_fan("{\"rank\": 2, \"rays\": [[1, 0], [0]], \"max_cones\": []}").unwrap_err();
        assert_eq!(e.location, "rays[1]");
        let e = parse_fan("{\"rank\": 1, \"rays\": [[1]], \"max_cones\": [[0, 3]]}").unwrap_err();
        assert_eq!(e.location, "max_cones[0][1]");
        let e = parse_fan("{\"rank\": 1,\n \"rays\": [[1]]\n").unwrap_err();
        assert!(e.location.contains(':'));
        let e = parse_fan("{\"rank\": 1, \"rays\": [[1]], \"max_cones\": [], \"extra\": 0}")
            .unwrap_err();
        assert!(e.message.contains("extra"));
    }

    #[test]
    fn morphism_shape_errors() {
        let p1 = serialize_fan(&projective_space_fan(1).unwrap());
        let text = format!("{{\"source\": {p1}, \"target\": {p1}, \"matrix\": [[1, 0]]}}");
        assert_eq!(parse_morphism(&text).unwrap_err().location, "matrix[0]");
    }
}
