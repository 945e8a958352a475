use serde::{Deserialize, Serialize};

use crate::borel::{borel_from_involution, borel_general, BorelComplex, InvolutiveComplex};
use crate::complexes::{Generator, GradedBasis, GradedComplex, Ring};
use crate::error::{Error, Result};
use crate::seriesalg::{BitMatrix, Gf2Poly, PolyMatrix};

use super::PolyValue;

/// `[from, to, poly]`, or `[from, to]` for coefficient 1: the coefficient
/// of `to` in `d(from)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiffEntry {
    Weighted(String, String, PolyValue),
    Unit(String, String),
}

impl DiffEntry {
    fn parts(&self) -> Result<(&str, &str, Gf2Poly)> {
        match self {
            DiffEntry::Weighted(a, b, p) => Ok((a, b, p.to_poly()?)),
            DiffEntry::Unit(a, b) => Ok((a, b, Gf2Poly::one())),
        }
    }
}

fn default_ring() -> Ring {
    Ring::F2
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub generators: Vec<Generator>,
    #[serde(default = "default_ring")]
    pub ring: Ring,
    #[serde(default)]
    pub differential: Vec<DiffEntry>,
    /// `[x, "y+z"]`: the image of `x`; unlisted generators are fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<Vec<(String, String)>>,
    /// Differential tables `d^(0), d^(1), ...` of a general Borel complex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<Vec<DiffEntry>>>,
}

/// Alias used where a document must carry Borel data.
pub type BorelDoc = ComplexDoc;

fn table(basis: &GradedBasis, entries: &[DiffEntry], path: &str) -> Result<PolyMatrix> {
    let n = basis.len();
    let mut m = PolyMatrix::zeros(n, n);
    for (k, e) in entries.iter().enumerate() {
        let at = format!("{path}[{k}]");
        let (from, to, p) = e.parts().map_err(|e| relocate(e, &at))?;
        let x = basis.index_of(from).ok_or_else(|| Error::parse(&at, format!("unknown generator {from:?}")))?;
        let y = basis.index_of(to).ok_or_else(|| Error::parse(&at, format!("unknown generator {to:?}")))?;
        let sum = m.get(y, x).cloned().unwrap_or_else(Gf2Poly::zero).add(&p);
        m.set(y, x, sum);
    }
    Ok(m)
}

fn bits(m: &PolyMatrix, path: &str) -> Result<BitMatrix> {
    if m.max_degree() > 0 {
        return Err(Error::parse(path, "entries must be 0 or 1 here"));
    }
    Ok(m.coefficient(0))
}

fn relocate(e: Error, path: &str) -> Error {
    match e {
        Error::Parse { message, .. } => Error::parse(path, message),
        other => other,
    }
}

fn entries_of(basis: &GradedBasis, m: &BitMatrix) -> Vec<DiffEntry> {
    m.entries()
        .map(|(y, x)| DiffEntry::Unit(basis.name(x).to_string(), basis.name(y).to_string()))
        .collect()
}

impl ComplexDoc {
    pub fn basis(&self) -> Result<GradedBasis> {
        GradedBasis::from_generators(self.generators.clone())
    }

    /// The complex as written, without checking `d`.
    pub fn complex_unchecked(&self) -> Result<GradedComplex> {
        let basis = self.basis()?;
        let d = table(&basis, &self.differential, "differential")?;
        Ok(match self.ring {
            Ring::F2 => GradedComplex::f2(basis, &bits(&d, "differential")?),
            Ring::F2q => GradedComplex::f2q(basis, d),
        })
    }

    /// The complex, with degrees and `d² = 0` checked.
    pub fn complex(&self) -> Result<GradedComplex> {
        let c = self.complex_unchecked()?;
        let r = c.verify_differential();
        if let Some((from, to)) = r.degree_failures.first() {
            return Err(Error::DegreeViolated {
                operator: "d".into(),
                from: from.clone(),
                to: to.clone(),
            });
        }
        if let Some((from, to)) = r.square_failures.first() {
            return Err(Error::DifferentialNotSquareZero(format!("d∘d({from}) contains {to}")));
        }
        Ok(c)
    }

    pub fn involution_matrix(&self, basis: &GradedBasis) -> Result<Option<BitMatrix>> {
        let Some(inv) = &self.involution else {
            return Ok(None);
        };
        let n = basis.len();
        let mut m = BitMatrix::identity(n);
        let mut seen = vec![false; n];
        for (k, (x, expr)) in inv.iter().enumerate() {
            let at = format!("involution[{k}]");
            let xi = basis.index_of(x).ok_or_else(|| Error::parse(&at, format!("unknown generator {x:?}")))?;
            if std::mem::replace(&mut seen[xi], true) {
                return Err(Error::parse(&at, format!("{x:?} listed twice")));
            }
            m.set(xi, xi, false);
            for term in expr.split('+').map(str::trim).filter(|t| !t.is_empty() && *t != "0") {
                let yi = basis
                    .index_of(term)
                    .ok_or_else(|| Error::parse(&at, format!("unknown generator {term:?}")))?;
                m.toggle(yi, xi);
            }
        }
        Ok(Some(m))
    }

    pub fn term_matrices(&self, basis: &GradedBasis) -> Result<Option<Vec<BitMatrix>>> {
        let Some(terms) = &self.terms else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for (k, t) in terms.iter().enumerate() {
            let path = format!("terms[{k}]");
            out.push(bits(&table(basis, t, &path)?, &path)?);
        }
        Ok(Some(out))
    }

    pub fn involutive(&self) -> Result<InvolutiveComplex> {
        let c = self.complex()?;
        let iota = self
            .involution_matrix(&c.basis)?
            .ok_or_else(|| Error::parse("involution", "document has no involution"))?;
        InvolutiveComplex::new(c, iota)
    }

    /// Borel complex from `terms` when present, otherwise from the involution.
    pub fn borel(&self) -> Result<BorelComplex> {
        let basis = self.basis()?;
        if let Some(terms) = self.term_matrices(&basis)? {
            if self.involution.is_some() {
                return Err(Error::parse("$", "give either an involution or terms, not both"));
            }
            return borel_general(basis, terms);
        }
        borel_from_involution(&self.involutive()?)
    }

    pub fn from_complex(c: &GradedComplex) -> Self {
        let differential = c
            .differential
            .entries()
            .map(|(&(y, x), p)| {
                DiffEntry::Weighted(c.basis.name(x).to_string(), c.basis.name(y).to_string(), PolyValue::from_poly(p))
            })
            .collect();
        ComplexDoc {
            generators: c.basis.generators().to_vec(),
            ring: c.ring,
            differential,
            involution: None,
            terms: None,
        }
    }

    pub fn from_involutive(ic: &InvolutiveComplex) -> Self {
        let mut doc = Self::from_complex(&ic.complex);
        let b = &ic.complex.basis;
        let iota = ic.iota();
        doc.involution = Some(
            (0..b.len())
                .map(|x| {
                    let img: Vec<&str> = iota.col(x).ones().map(|y| b.name(y)).collect();
                    let expr = if img.is_empty() { "0".to_string() } else { img.join("+") };
                    (b.name(x).to_string(), expr)
                })
                .collect(),
        );
        doc
    }

    pub fn from_borel(b: &BorelComplex) -> Self {
        ComplexDoc {
            generators: b.base.generators().to_vec(),
            ring: Ring::F2,
            differential: entries_of(&b.base, &b.terms[0]),
            involution: None,
            terms: Some(b.terms.iter().map(|t| entries_of(&b.base, t)).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{from_json, to_json};
    use super::*;

    const SWAP: &str = r#"{
        "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 0}],
        "ring": "F2",
        "differential": [],
        "involution": [["a", "b"], ["b", "a"]]
    }"#;

    #[test]
    fn swap_borel_is_torsion() {
        let doc: ComplexDoc = from_json(SWAP).unwrap();
        let b = doc.borel().unwrap();
        let inv = b.module_invariants().unwrap();
        assert_eq!((inv.r_free(), inv.r_tor()), (0, 1));
    }

    #[test]
    fn round_trip() {
        let doc: ComplexDoc = from_json(SWAP).unwrap();
        let again = ComplexDoc::from_involutive(&doc.involutive().unwrap());
        let text = to_json(&again);
        let back: ComplexDoc = from_json(&text).unwrap();
        assert_eq!(to_json(&ComplexDoc::from_involutive(&back.involutive().unwrap())), text);
    }

    #[test]
    fn unknown_generator_has_path() {
        let bad = SWAP.replace(r#"["b", "a"]"#, r#"["b", "c"]"#);
        let doc: ComplexDoc = from_json(&bad).unwrap();
        match doc.involutive() {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "involution[1]"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
