use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::slicecurve::{CurveData, Divisor, DivisorPoint, Field, MumfordTriple, Poly, PrimeField, Rationals, SliceMatrix};

/// `"Q"` or `{"p": prime}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime { p: u64 },
}

pub enum AnyField {
    Q(Rationals),
    P(PrimeField),
}

impl FieldSpec {
    pub fn resolve(&self) -> Result<AnyField> {
        match self {
            FieldSpec::Named(n) if n == "Q" => Ok(AnyField::Q(Rationals)),
            FieldSpec::Named(n) => Err(Error::parse("field", format!("unknown field {n:?}; expected \"Q\" or {{\"p\": prime}}"))),
            FieldSpec::Prime { p } => Ok(AnyField::P(PrimeField::new(*p)?)),
        }
    }
}

/// Field element: an integer or `"a/b"` text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn read<F: Field>(&self, f: &F, path: &str) -> Result<F::Elem> {
        let r = match self {
            Scalar::Int(n) => Ok(f.from_i64(*n)),
            Scalar::Text(t) => f.parse(t),
        };
        r.map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(path, message),
            other => other,
        })
    }

    pub fn write<F: Field>(f: &F, a: &F::Elem) -> Scalar {
        let s = f.format(a);
        match s.parse::<i64>() {
            Ok(n) => Scalar::Int(n),
            Err(_) => Scalar::Text(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleDoc {
    #[serde(rename = "U")]
    pub u: Vec<Scalar>,
    #[serde(rename = "V")]
    pub v: Vec<Scalar>,
    #[serde(rename = "W")]
    pub w: Vec<Scalar>,
}

/// Curve with optional divisor, triple or slice blocks; polynomial
/// coefficients ascend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub field: FieldSpec,
    pub f: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Vec<(Scalar, Scalar, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<TripleDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<[[Scalar; 2]; 2]>>,
}

pub fn read_poly<F: Field>(f: &F, c: &[Scalar], path: &str) -> Result<Poly<F>> {
    let coeffs = c
        .iter()
        .enumerate()
        .map(|(i, s)| s.read(f, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(f.clone(), coeffs))
}

pub fn write_poly<F: Field>(p: &Poly<F>) -> Vec<Scalar> {
    p.coeffs().iter().map(|a| Scalar::write(p.field(), a)).collect()
}

impl CurveDoc {
    pub fn curve<F: Field>(&self, f: &F) -> Result<CurveData<F>> {
        CurveData::new(read_poly(f, &self.f, "f")?)
    }

    pub fn divisor<F: Field>(&self, f: &F) -> Result<Divisor<F>> {
        let pts = self.divisor.as_ref().ok_or_else(|| Error::parse("divisor", "document has no divisor"))?;
        let mut out = Vec::new();
        for (k, (x, y, mult)) in pts.iter().enumerate() {
            let at = format!("divisor[{k}]");
            if *mult == 0 {
                return Err(Error::parse(&at, "multiplicity must be positive"));
            }
            out.push(DivisorPoint {
                x: x.read(f, &at)?,
                y: y.read(f, &at)?,
                mult: *mult,
            });
        }
        Ok(Divisor::new(out))
    }

    pub fn triple<F: Field>(&self, f: &F) -> Result<MumfordTriple<F>> {
        let t = self.triple.as_ref().ok_or_else(|| Error::parse("triple", "document has no triple"))?;
        Ok(MumfordTriple {
            u: read_poly(f, &t.u, "triple.U")?,
            v: read_poly(f, &t.v, "triple.V")?,
            w: read_poly(f, &t.w, "triple.W")?,
        })
    }

    pub fn slice<F: Field>(&self, f: &F) -> Result<SliceMatrix<F>> {
        let bs = self.blocks.as_ref().ok_or_else(|| Error::parse("blocks", "document has no blocks"))?;
        let mut blocks = Vec::new();
        for (k, b) in bs.iter().enumerate() {
            let at = format!("blocks[{k}]");
            let e = |i: usize, j: usize| b[i][j].read(f, &at);
            blocks.push([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]]);
        }
        Ok(SliceMatrix { field: f.clone(), blocks })
    }

    pub fn write_divisor<F: Field>(f: &F, d: &Divisor<F>) -> Vec<(Scalar, Scalar, usize)> {
        d.points
            .iter()
            .map(|p| (Scalar::write(f, &p.x), Scalar::write(f, &p.y), p.mult))
            .collect()
    }

    pub fn write_triple<F: Field>(t: &MumfordTriple<F>) -> TripleDoc {
        TripleDoc {
            u: write_poly(&t.u),
            v: write_poly(&t.v),
            w: write_poly(&t.w),
        }
    }

    pub fn write_blocks<F: Field>(s: &SliceMatrix<F>) -> Vec<[[Scalar; 2]; 2]> {
        let w = |a: &F::Elem| Scalar::write(&s.field, a);
        s.blocks
            .iter()
            .map(|b| [[w(&b[0][0]), w(&b[0][1])], [w(&b[1][0]), w(&b[1][1])]])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::from_json;
    use super::*;
    use crate::slicecurve::divisor_to_uvw;

    #[test]
    fn rational_divisor_document() {
        let doc: CurveDoc = from_json(r#"{"field": "Q", "f": [-4, 0, -5, 0, 1], "divisor": [[0, 2, 2]]}"#).unwrap();
        let AnyField::Q(q) = doc.field.resolve().unwrap() else { panic!() };
        let t = divisor_to_uvw(&doc.curve(&q).unwrap(), &doc.divisor(&q).unwrap()).unwrap();
        let out = CurveDoc::write_triple(&t);
        assert_eq!(out.v, vec![Scalar::Int(2)]);
        assert_eq!(out.w, vec![Scalar::Int(-5), Scalar::Int(0), Scalar::Int(1)]);
    }

    #[test]
    fn prime_field_rejects_two() {
        let doc: CurveDoc = from_json(r#"{"field": {"p": 2}, "f": [1, 0, 1]}"#).unwrap();
        assert!(matches!(doc.field.resolve(), Err(Error::FieldMismatch(_))));
    }
}
