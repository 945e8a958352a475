use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complexes::{Generator, GradedBasis};
use crate::error::{Error, Result};
use crate::localize::{LaurentPoly, TwistedDatum};

/// `{"generators": [...], "weights": [[from, to, "1+q"], ...]}` with Laurent
/// weights in text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedDoc {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub weights: Vec<(String, String, String)>,
}

impl TwistedDoc {
    pub fn to_datum(&self) -> Result<TwistedDatum> {
        let generators = GradedBasis::from_generators(self.generators.clone())?;
        let mut sums: BTreeMap<(String, String), LaurentPoly> = BTreeMap::new();
        for (k, (from, to, w)) in self.weights.iter().enumerate() {
            let at = format!("weights[{k}]");
            for name in [from, to] {
                if generators.index_of(name).is_none() {
                    return Err(Error::parse(&at, format!("unknown generator {name:?}")));
                }
            }
            let p = LaurentPoly::parse(w).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(&at, message),
                other => other,
            })?;
            let slot = sums.entry((from.clone(), to.clone())).or_insert_with(LaurentPoly::zero);
            *slot = slot.add(&p);
        }
        Ok(TwistedDatum {
            generators,
            weighted_counts: sums.into_iter().map(|(k, p)| (k, p.to_series())).collect(),
        })
    }

    pub fn from_datum(t: &TwistedDatum) -> Self {
        TwistedDoc {
            generators: t.generators.generators().to_vec(),
            weights: t
                .weighted_counts
                .iter()
                .map(|((a, b), w)| (a.clone(), b.clone(), LaurentPoly::from_series(w).to_string()))
                .collect(),
        }
    }
}
