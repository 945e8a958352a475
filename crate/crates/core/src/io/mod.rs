//! JSON documents for complexes, data, flow systems, twisted complexes and
//! curves. Parse errors carry the JSON path of the offending value.

pub mod complex;
pub mod curve;
pub mod datum;
pub mod rational;
pub mod twisted;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flowmodel::FlowSystem;
use crate::seriesalg::Gf2Poly;

pub use complex::{BorelDoc, ComplexDoc, DiffEntry};
pub use curve::{CurveDoc, FieldSpec, Scalar};
pub use datum::DatumDoc;
pub use twisted::TwistedDoc;

/// Deserializes a document, reporting failures with their path.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::parse(if path == "." { "$".to_string() } else { path }, inner.to_string())
    })
}

/// Pretty JSON with a trailing newline; output order is deterministic.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// A polynomial in q: an ascending bit list or text such as `"1+q^2"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyValue {
    Bits(Vec<u8>),
    Text(String),
}

impl PolyValue {
    pub fn to_poly(&self) -> Result<Gf2Poly> {
        match self {
            PolyValue::Bits(bits) => {
                if let Some(b) = bits.iter().find(|&&b| b > 1) {
                    return Err(Error::parse("poly", format!("bit {b} is not 0 or 1")));
                }
                Ok(Gf2Poly::from_bits(bits.iter().map(|&b| b == 1)))
            }
            PolyValue::Text(t) => Gf2Poly::parse_text(t),
        }
    }

    pub fn from_poly(p: &Gf2Poly) -> Self {
        PolyValue::Bits(p.to_bits())
    }
}

/// Any input document, recognised by its keys.
#[derive(Clone, Debug)]
pub enum Document {
    Complex(ComplexDoc),
    Datum(DatumDoc),
    Flow(FlowSystem),
    Twisted(TwistedDoc),
    Curve(CurveDoc),
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
        let has = |k: &str| v.get(k).is_some();
        if has("inv_generators") || has("non_generators") {
            Ok(Document::Datum(from_json(text)?))
        } else if has("points") {
            Ok(Document::Flow(from_json(text)?))
        } else if has("weights") {
            Ok(Document::Twisted(from_json(text)?))
        } else if has("field") {
            Ok(Document::Curve(from_json(text)?))
        } else if has("generators") {
            Ok(Document::Complex(from_json(text)?))
        } else {
            Err(Error::parse("$", "unrecognised document: expected a complex, datum, flow system, twisted or curve document"))
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Complex(_) => "complex",
            Document::Datum(_) => "datum",
            Document::Flow(_) => "flow",
            Document::Twisted(_) => "twisted",
            Document::Curve(_) => "curve",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_paths() {
        let err = from_json::<FlowSystem>(r#"{"i_anti": 0, "points": [{"name": "p", "index": "x"}]}"#).unwrap_err();
        match err {
            Error::Parse { path, .. } => assert_eq!(path, "points[0].index"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn poly_values() {
        let a = PolyValue::Bits(vec![1, 0, 1]).to_poly().unwrap();
        let b = PolyValue::Text("1+q^2".into()).to_poly().unwrap();
        assert_eq!(a, b);
        assert_eq!(PolyValue::from_poly(&a), PolyValue::Bits(vec![1, 0, 1]));
    }
}
