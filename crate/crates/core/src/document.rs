//! JSON matrix documents: `{"name": .., "dim": n, "entries": [[re, im], ..]}`
//! with entries in row-major order.
//!
//! Numbers are parsed with correct rounding and written in the shortest form
//! that reads back to the same bits, so `parse_matrix(to_json(m)) == m`
//! exactly. An entry component may also be a string (`"NaN"`, `"inf"`,
//! `"1e-3"`); non-finite values are rejected with their position.

use num_complex::Complex64;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("dim must be at least 1")]
    ZeroDim,

    #[error("entries length ≠ dim²: dim {dim} needs {expected} entries, got {got}")]
    Length { dim: usize, expected: usize, got: usize },

    #[error("non-finite entry at index {index} (row {row}, col {col})")]
    NonFinite { index: usize, row: usize, col: usize },
}

/// On-disk form of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    #[serde(default)]
    pub name: String,
    pub dim: usize,
    pub entries: Vec<[Component; 2]>,
}

/// One real component; accepts a JSON number or a numeric string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Component(pub f64);

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Component;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or a numeric string")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Component, E> {
                Ok(Component(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Component, E> {
                Ok(Component(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Component, E> {
                Ok(Component(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Component, E> {
                v.trim()
                    .parse()
                    .map(Component)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }
        d.deserialize_any(V)
    }
}

impl MatrixDocument {
    pub fn from_matrix(name: impl Into<String>, m: &ComplexMatrix) -> Self {
        MatrixDocument {
            name: name.into(),
            dim: m.dim(),
            entries: m.as_slice().iter().map(|z| [Component(z.re), Component(z.im)]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, DocumentError> {
        let n = self.dim;
        if n == 0 {
            return Err(DocumentError::ZeroDim);
        }
        let expected = n.saturating_mul(n);
        if self.entries.len() != expected {
            return Err(DocumentError::Length {
                dim: n,
                expected,
                got: self.entries.len(),
            });
        }
        let mut data = Vec::with_capacity(expected);
        for (index, [re, im]) in self.entries.iter().enumerate() {
            if !re.0.is_finite() || !im.0.is_finite() {
                return Err(DocumentError::NonFinite {
                    index,
                    row: index / n,
                    col: index % n,
                });
            }
            data.push(Complex64::new(re.0, im.0));
        }
        Ok(ComplexMatrix::new(n, data).expect("checked shape and finiteness"))
    }
}

/// Parses a UTF-8 JSON matrix document.
pub fn parse_matrix(bytes: &[u8]) -> Result<ComplexMatrix, DocumentError> {
    parse_document(bytes)?.to_matrix()
}

pub fn parse_document(bytes: &[u8]) -> Result<MatrixDocument, DocumentError> {
    serde_json::from_slice(bytes).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

/// serde_json appends " at line L column C"; that goes in its own fields.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Pretty JSON with one entry per line.
pub fn to_json(name: &str, m: &ComplexMatrix) -> String {
    let doc = MatrixDocument::from_matrix(name, m);
    let mut out = String::new();
    out.push_str("{\n  \"name\": ");
    out.push_str(&serde_json::to_string(&doc.name).expect("string serializes"));
    out.push_str(&format!(",\n  \"dim\": {},\n  \"entries\": [", doc.dim));
    for (i, e) in doc.entries.iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        out.push_str(&serde_json::to_string(e).expect("finite floats serialize"));
    }
    out.push_str("\n  ]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_document() {
        let m = parse_matrix(br#"{"name":"jordan2","dim":2,"entries":[[0,0],[1,0],[0,0],[0,0]]}"#).unwrap();
        assert_eq!(m, ComplexMatrix::jordan(2, Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn short_entries() {
        let e = parse_matrix(br#"{"name":"x","dim":2,"entries":[[0,0],[1,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(e, DocumentError::Length { expected: 4, got: 3, .. }));
        assert!(e.to_string().starts_with("entries length ≠ dim²"));
    }

    #[test]
    fn nan_entry() {
        let e = parse_matrix(br#"{"name":"x","dim":1,"entries":[["NaN",1]]}"#).unwrap_err();
        assert_eq!(e, DocumentError::NonFinite { index: 0, row: 0, col: 0 });
        assert!(e.to_string().starts_with("non-finite entry"));
        let e = parse_matrix(br#"{"name":"x","dim":2,"entries":[[0,0],[0,"-inf"],[0,0],[0,0]]}"#).unwrap_err();
        assert_eq!(e, DocumentError::NonFinite { index: 1, row: 0, col: 1 });
    }

    #[test]
    fn syntax_error_has_position() {
        let e = parse_matrix(b"{\"name\":\"x\",\n\"dim\":1,\n\"entries\":[[0,]]}").unwrap_err();
        match e {
            DocumentError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let e = parse_matrix(br#"{"name":"x","dim":1,"entries":[["abc",0]]}"#).unwrap_err();
        assert!(matches!(e, DocumentError::Syntax { .. }));
    }

    #[test]
    fn round_trip_is_exact() {
        let vals = [0.1, -0.0, 1.0 / 3.0, f64::MIN_POSITIVE, 5e-324, f64::MAX, -2.5e17, std::f64::consts::PI];
        let data: Vec<Complex64> = (0..9).map(|k| Complex64::new(vals[k % 8], -vals[(k + 3) % 8])).collect();
        let m = ComplexMatrix::new(3, data).unwrap();
        let back = parse_matrix(to_json("t", &m).as_bytes()).unwrap();
        for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }
}
