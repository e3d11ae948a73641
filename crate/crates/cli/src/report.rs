//! Machine-readable reports and JSON renderings of library values.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use toricfan::classes::{ClassElement, Exactness, SequenceReport};
use toricfan::exactla::{IntMatrix, Rational};
use toricfan::fan::Fan;
use toricfan::io::fan_to_value;
use toricfan::morphism::ToricMorphism;
use toricfan::recognize::ConvexSupportCertificate;

/// Output of one invocation. Object keys serialise in sorted order (the
/// fields below are declared alphabetically for that reason).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub diagnostics: Vec<String>,
    pub input_digest: String,
    pub results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, input_digest: String) -> Self {
        Report {
            command: command.to_string(),
            diagnostics: Vec::new(),
            input_digest,
            results: Map::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

/// SHA-256 over the inputs, each prefixed by its length so that
/// concatenation is unambiguous.
pub fn digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for input in inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    hex::encode(h.finalize())
}

/// Integers render as JSON numbers when they fit in 64 bits and as decimal
/// strings otherwise.
pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

/// A rational as a `[numerator, denominator]` pair.
pub fn rational(q: &Rational) -> Value {
    json!([int(q.numer()), int(q.denom())])
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(m.row_vectors().iter().map(|r| ints(r)).collect())
}

pub fn fan(f: &Fan) -> Value {
    fan_to_value(f)
}

pub fn morphism(m: &ToricMorphism) -> Value {
    json!({
        "source": fan(m.source()),
        "target": fan(m.target()),
        "matrix": matrix(m.map()),
    })
}

fn exactness(e: &Exactness) -> Value {
    match e {
        Exactness::Exact => json!({"exact": true}),
        Exactness::Inexact { stage } => json!({"exact": false, "stage": stage}),
    }
}

pub fn sequences(r: &SequenceReport) -> Value {
    json!({
        "n": r.n,
        "ray_count": r.ray_count,
        "class_free_rank": r.class_free_rank,
        "class_torsion": ints(&r.class_torsion),
        "curve_space_rank": r.curve_space_rank,
        "exact_divisor_seq": exactness(&r.exact_divisor_seq),
        "exact_dual_seq": exactness(&r.exact_dual_seq),
    })
}

pub fn class_element(c: &ClassElement) -> Value {
    json!({"free": ints(&c.free), "torsion": ints(&c.torsion)})
}

pub fn certificate(c: &ConvexSupportCertificate) -> Value {
    json!({
        "values": rationals(&c.values),
        "functionals": Value::Array(c.functionals.iter().map(|m| rationals(m)).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_round_trip() {
        let mut r = Report::new("analyze", digest([b"x".as_slice()]));
        r.set("zeta", 1);
        r.set("alpha", json!({"b": 2, "a": 1}));
        r.note("hello");
        let text = r.to_json();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"command\"").unwrap() < text.find("\"diagnostics\"").unwrap());
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn large_integers_become_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int(&big), json!("123456789012345678901234567890"));
        assert_eq!(int(&BigInt::from(-3)), json!(-3));
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(digest([b"ab".as_slice(), b"c"]), digest([b"a".as_slice(), b"bc"]));
    }
}
