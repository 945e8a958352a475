use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// Named generators with integer degrees; names are unique.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Generator>", into = "Vec<Generator>")]
pub struct GradedBasis {
    gens: Vec<Generator>,
    #[serde(skip)]
    index: BTreeMap<String, usize>,
}

impl TryFrom<Vec<Generator>> for GradedBasis {
    type Error = Error;
    fn try_from(gens: Vec<Generator>) -> Result<Self> {
        GradedBasis::from_generators(gens)
    }
}

impl From<GradedBasis> for Vec<Generator> {
    fn from(b: GradedBasis) -> Self {
        b.gens
    }
}

impl GradedBasis {
    pub fn from_generators(gens: Vec<Generator>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate generator name {:?}", g.name)));
            }
        }
        Ok(GradedBasis { gens, index })
    }

    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        Self::from_generators(
            gens.into_iter()
                .map(|(name, degree)| Generator {
                    name: name.into(),
                    degree,
                })
                .collect(),
        )
    }

    pub fn empty() -> Self {
        GradedBasis::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.gens.iter().map(|g| g.degree).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::InvalidComplex(format!("unknown generator {name:?}")))
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = self.gens.iter().map(|g| g.degree).min()?;
        let hi = self.gens.iter().map(|g| g.degree).max()?;
        Some((lo, hi))
    }

    /// Same names, degrees shifted by `k`.
    pub fn shifted(&self, k: i64) -> GradedBasis {
        GradedBasis::new(self.gens.iter().map(|g| (g.name.clone(), g.degree + k)))
            .expect("names stay unique")
    }

    /// Concatenation with name prefixes to keep names unique.
    pub fn concat(parts: &[(&str, &GradedBasis)]) -> Result<GradedBasis> {
        GradedBasis::new(parts.iter().flat_map(|(prefix, b)| {
            b.gens
                .iter()
                .map(move |g| (format!("{prefix}{}", g.name), g.degree))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedBasis::new([("x", 0), ("x", 1)]).is_err());
        let b = GradedBasis::new([("x", 0), ("y", 2)]).unwrap();
        assert_eq!(b.lookup("y").unwrap(), 1);
        assert_eq!(b.degree_range(), Some((0, 2)));
    }

    #[test]
    fn serde_round_trip() {
        let b = GradedBasis::new([("x", 0), ("y", 2)]).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        let back: GradedBasis = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.lookup("x").unwrap(), 0);
    }
}
