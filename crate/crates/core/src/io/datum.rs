use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexes::{Generator, GradedBasis};
use crate::error::{Error, Result};
use crate::localize::LocalizationDatum;
use crate::seriesalg::BitMatrix;

use super::rational::Value;

/// Sparse table of `[from, to]` pairs with coefficient 1.
pub type Table = Vec<(String, String)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumDoc {
    pub i_anti: i64,
    pub inv_generators: Vec<Generator>,
    pub non_generators: Vec<Generator>,
    #[serde(default)]
    pub d_inv: Table,
    #[serde(default)]
    pub d_non: Table,
    #[serde(default, rename = "U")]
    pub u: Table,
    #[serde(default, rename = "D1")]
    pub d1: Table,
    #[serde(default, rename = "D2")]
    pub d2: Table,
    #[serde(default, rename = "D1_higher", skip_serializing_if = "Vec::is_empty")]
    pub d1_higher: Vec<Table>,
    #[serde(default, rename = "X", skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<Table>,
    #[serde(default, rename = "S1", skip_serializing_if = "Vec::is_empty")]
    pub s1: Vec<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<BTreeMap<String, Value>>,
}

fn read(t: &Table, src: &GradedBasis, dst: &GradedBasis, path: &str) -> Result<BitMatrix> {
    let mut m = BitMatrix::zeros(dst.len(), src.len());
    for (k, (from, to)) in t.iter().enumerate() {
        let at = format!("{path}[{k}]");
        let x = src.index_of(from).ok_or_else(|| Error::parse(&at, format!("unknown source generator {from:?}")))?;
        let y = dst.index_of(to).ok_or_else(|| Error::parse(&at, format!("unknown target generator {to:?}")))?;
        m.toggle(y, x);
    }
    Ok(m)
}

fn write(m: &BitMatrix, src: &GradedBasis, dst: &GradedBasis) -> Table {
    let mut t: Table = m
        .entries()
        .map(|(y, x)| (src.name(x).to_string(), dst.name(y).to_string()))
        .collect();
    t.sort();
    t
}

fn read_list(ts: &[Table], src: &GradedBasis, dst: &GradedBasis, path: &str) -> Result<Vec<BitMatrix>> {
    ts.iter()
        .enumerate()
        .map(|(k, t)| read(t, src, dst, &format!("{path}[{k}]")))
        .collect()
}

impl DatumDoc {
    /// The datum as written; relations are checked by `validate`.
    pub fn to_datum(&self) -> Result<LocalizationDatum> {
        let inv = GradedBasis::from_generators(self.inv_generators.clone())?;
        let non = GradedBasis::from_generators(self.non_generators.clone())?;
        let mut d = LocalizationDatum::zero(inv.clone(), non.clone(), self.i_anti);
        d.d_inv = read(&self.d_inv, &inv, &inv, "d_inv")?;
        d.d_non = read(&self.d_non, &non, &non, "d_non")?;
        d.u = read(&self.u, &non, &non, "U")?;
        d.d1 = read(&self.d1, &non, &inv, "D1")?;
        d.d2 = read(&self.d2, &inv, &non, "D2")?;
        d.d1_higher = read_list(&self.d1_higher, &non, &inv, "D1_higher")?;
        d.x = read_list(&self.x, &inv, &inv, "X")?;
        d.s1 = read_list(&self.s1, &non, &inv, "S1")?;
        d.action = self
            .action
            .as_ref()
            .map(|a| a.iter().map(|(k, v)| (k.clone(), v.0.clone())).collect());
        Ok(d)
    }

    pub fn from_datum(d: &LocalizationDatum) -> Self {
        let (inv, non) = (&d.c_inv, &d.c_non);
        DatumDoc {
            i_anti: d.i_anti,
            inv_generators: inv.generators().to_vec(),
            non_generators: non.generators().to_vec(),
            d_inv: write(&d.d_inv, inv, inv),
            d_non: write(&d.d_non, non, non),
            u: write(&d.u, non, non),
            d1: write(&d.d1, non, inv),
            d2: write(&d.d2, inv, non),
            d1_higher: d.d1_higher.iter().map(|m| write(m, non, inv)).collect(),
            x: d.x.iter().map(|m| write(m, inv, inv)).collect(),
            s1: d.s1.iter().map(|m| write(m, non, inv)).collect(),
            action: d
                .action
                .as_ref()
                .map(|a| a.iter().map(|(k, v)| (k.clone(), Value(v.clone()))).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{from_json, to_json};
    use super::*;

    #[test]
    fn real_line_document() {
        let text = r#"{
            "i_anti": 1,
            "inv_generators": [{"name": "z", "degree": 0}],
            "non_generators": [{"name": "Gb", "degree": 0}],
            "D1": [["Gb", "z"]],
            "action": {"z": 0, "Gb": "-1/2"}
        }"#;
        let doc: DatumDoc = from_json(text).unwrap();
        let d = doc.to_datum().unwrap();
        assert!(d.d1.get(0, 0));
        assert!(d.validate().unwrap().filtration_checked);
        let out = to_json(&DatumDoc::from_datum(&d));
        assert!(out.contains("\"-1/2\""));
        let again: DatumDoc = from_json(&out).unwrap();
        assert_eq!(to_json(&DatumDoc::from_datum(&again.to_datum().unwrap())), out);
    }

    #[test]
    fn bad_target_is_located() {
        let text = r#"{"i_anti": 0, "inv_generators": [], "non_generators": [{"name": "e", "degree": 0}], "U": [["e", "f"]]}"#;
        let doc: DatumDoc = from_json(text).unwrap();
        match doc.to_datum() {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "U[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
