//! Complexes over F2[q, q^-1] whose differential carries Laurent weights,
//! with cohomology over F2((q)). Here `q` has degree 0.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complexes::GradedBasis;
use crate::error::{Error, Result};
use crate::seriesalg::poly::parse_laurent_text;
use crate::seriesalg::{Gf2Poly, QLaurent, QSeries};

/// Exact Laurent polynomial `q^shift * body`, `body(0) = 1` unless zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LaurentPoly {
    pub shift: i64,
    pub body: Gf2Poly,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            shift: 0,
            body: Gf2Poly::zero(),
        }
    }

    pub fn new(shift: i64, body: Gf2Poly) -> Self {
        match body.valuation() {
            None => LaurentPoly::zero(),
            Some(v) => LaurentPoly {
                shift: shift + v as i64,
                body: Gf2Poly::from_exponents(body.exponents().into_iter().map(|e| e - v)),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (shift, body) = parse_laurent_text(text)?;
        Ok(LaurentPoly::new(shift, body))
    }

    /// Every known coefficient of a truncated Laurent series, read as an
    /// exact polynomial.
    pub fn from_series(l: &QLaurent) -> Self {
        LaurentPoly::new(l.valuation(), l.body().to_poly())
    }

    pub fn to_series(&self) -> QLaurent {
        let prec = self.body.degree().map_or(1, |d| d + 1);
        QLaurent::new(self.shift, &QSeries::from_poly(&self.body, prec))
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(other.shift);
        let a = self.body.shl((self.shift - lo) as usize);
        let b = other.body.shl((other.shift - lo) as usize);
        LaurentPoly::new(lo, a.add(&b))
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.shift + other.shift, self.body.mul(&other.body))
    }

    pub fn exponents(&self) -> Vec<i64> {
        self.body
            .exponents()
            .into_iter()
            .map(|e| e as i64 + self.shift)
            .collect()
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

#[derive(Clone, Debug)]
pub struct TwistedDatum {
    pub generators: GradedBasis,
    /// `(x_-, x_+) -> weight`: the coefficient of `x_+` in `d(x_-)`.
    pub weighted_counts: BTreeMap<(String, String), QLaurent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedReport {
    /// `dim H^n` over F2((q)) for every degree carrying generators.
    pub dims: BTreeMap<i64, usize>,
    pub total_dim: usize,
    /// Rank of `d` from each degree.
    pub ranks: BTreeMap<i64, usize>,
}

/// Rank over the fraction field of F2[q] by fraction-free elimination.
pub fn poly_rank(mut rows: Vec<Vec<Gf2Poly>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pivot = pivot_row[col].clone();
        for r in rank + 1..rows.len() {
            let factor = rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..ncols {
                let v = rows[r][c].mul(&pivot).add(&factor.mul(&pivot_row[c]));
                rows[r][c] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// Assembles the twisted differential, checks `d² = 0` exactly over
/// F2[q, q^-1], and returns cohomology dimensions over F2((q)).
pub fn twisted_diff(t: &TwistedDatum) -> Result<TwistedReport> {
    let b = &t.generators;
    let n = b.len();
    let mut d: BTreeMap<(usize, usize), LaurentPoly> = BTreeMap::new();
    for ((from, to), w) in &t.weighted_counts {
        let (x, y) = (b.lookup(from)?, b.lookup(to)?);
        let w = LaurentPoly::from_series(w);
        if w.is_zero() {
            continue;
        }
        if b.degree(y) != b.degree(x) + 1 {
            return Err(Error::DegreeViolated {
                operator: "d_twisted".into(),
                from: from.clone(),
                to: to.clone(),
            });
        }
        d.insert((y, x), w);
    }
    for x in 0..n {
        for z in 0..n {
            let mut acc = LaurentPoly::zero();
            for y in 0..n {
                if let (Some(a), Some(c)) = (d.get(&(y, x)), d.get(&(z, y))) {
                    acc = acc.add(&c.mul(a));
                }
            }
            if !acc.is_zero() {
                return Err(Error::DifferentialNotSquareZero(format!(
                    "d∘d({}) has coefficient {acc} on {}",
                    b.name(x),
                    b.name(z)
                )));
            }
        }
    }

    let mut ranks = BTreeMap::new();
    let mut dims = BTreeMap::new();
    let Some((lo, hi)) = b.degree_range() else {
        return Ok(TwistedReport {
            dims,
            total_dim: 0,
            ranks,
        });
    };
    let in_degree = |k: i64| (0..n).filter(|&i| b.degree(i) == k).collect::<Vec<_>>();
    for k in lo..=hi {
        let src = in_degree(k);
        let dst = in_degree(k + 1);
        // Column scaling by a power of q is invertible over F2((q)).
        let scale: Vec<i64> = src
            .iter()
            .map(|&x| dst.iter().filter_map(|&y| d.get(&(y, x)).map(|w| w.shift)).min().unwrap_or(0))
            .collect();
        let rows: Vec<Vec<Gf2Poly>> = dst
            .iter()
            .map(|&y| {
                src.iter()
                    .zip(&scale)
                    .map(|(&x, &s)| match d.get(&(y, x)) {
                        Some(w) => w.body.shl((w.shift - s) as usize),
                        None => Gf2Poly::zero(),
                    })
                    .collect()
            })
            .collect();
        ranks.insert(k, poly_rank(rows));
    }
    for k in lo..=hi {
        let dim = in_degree(k).len() - ranks[&k] - ranks.get(&(k - 1)).copied().unwrap_or(0);
        dims.insert(k, dim);
    }
    let total_dim = dims.values().sum();
    Ok(TwistedReport {
        dims,
        total_dim,
        ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(weights: &[(&str, &str, &str)]) -> TwistedDatum {
        TwistedDatum {
            generators: GradedBasis::new([("x-", 0), ("x+", 1)]).unwrap(),
            weighted_counts: weights
                .iter()
                .map(|(a, b, w)| ((a.to_string(), b.to_string()), LaurentPoly::parse(w).unwrap().to_series()))
                .collect(),
        }
    }

    #[test]
    fn one_plus_q_kills_cohomology() {
        assert_eq!(twisted_diff(&datum(&[("x-", "x+", "1+q")])).unwrap().total_dim, 0);
    }

    #[test]
    fn unit_weight_kills_cohomology() {
        assert_eq!(twisted_diff(&datum(&[("x-", "x+", "1")])).unwrap().total_dim, 0);
    }

    #[test]
    fn no_arrows_keeps_generators() {
        assert_eq!(twisted_diff(&datum(&[])).unwrap().total_dim, 2);
    }

    #[test]
    fn negative_powers_are_exact() {
        let r = twisted_diff(&datum(&[("x-", "x+", "q^-2+q^3")])).unwrap();
        assert_eq!(r.total_dim, 0);
        assert_eq!(LaurentPoly::parse("q^-2+q^3").unwrap().to_string(), "q^-2+q^3");
    }

    #[test]
    fn square_nonzero_rejected() {
        let t = TwistedDatum {
            generators: GradedBasis::new([("a", 0), ("b", 1), ("c", 2)]).unwrap(),
            weighted_counts: [(("a", "b"), "q"), (("b", "c"), "1+q^-1")]
                .iter()
                .map(|((x, y), w)| ((x.to_string(), y.to_string()), LaurentPoly::parse(w).unwrap().to_series()))
                .collect(),
        };
        assert!(matches!(twisted_diff(&t), Err(Error::DifferentialNotSquareZero(_))));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let p = |s: &str| Gf2Poly::parse_text(s).unwrap();
        let rows = vec![vec![p("1+q"), p("q")], vec![p("1+q^2"), p("q+q^2")]];
        assert_eq!(poly_rank(rows), 1);
    }
}
