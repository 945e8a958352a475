//! Spectral sequence of the q-adic filtration of an F2q complex.

use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::{GradedComplex, Ring};
use crate::error::{Error, Result};
use crate::seriesalg::{BitMatrix, BitVec, Echelon};

/// Dimensions of one page: `(p, base degree) -> dim E_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Page {
    pub r: usize,
    #[serde(serialize_with = "dims_as_list")]
    pub dims: BTreeMap<(usize, i64), usize>,
}

#[derive(Serialize)]
struct Entry {
    p: usize,
    degree: i64,
    dim: usize,
}

fn dims_as_list<S: serde::Serializer>(dims: &BTreeMap<(usize, i64), usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(dims.iter().map(|(&(p, degree), &dim)| Entry { p, degree, dim }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub pages: Vec<Page>,
    /// Columns `p < resolved` are exact; later columns are unresolved.
    pub resolved: usize,
    /// First page that agrees with the last computed page on the resolved range.
    pub degenerates_at: Option<usize>,
}

struct Truncated {
    n: usize,
    levels: usize,
    base_deg: Vec<i64>,
    d: BitMatrix,
}

impl Truncated {
    fn idx(&self, x: usize, j: usize) -> usize {
        j * self.n + x
    }

    /// Basis of F^p in total degree `deg`: elements `x q^j` with `j >= p`.
    fn filtered(&self, p: usize, deg: i64) -> Vec<usize> {
        let mut out = Vec::new();
        for j in p..self.levels {
            for x in 0..self.n {
                if self.base_deg[x] + j as i64 == deg {
                    out.push(self.idx(x, j));
                }
            }
        }
        out
    }

    /// `Z_r^p` in total degree `deg`: `x ∈ F^p` with `dx ∈ F^{p+r}`.
    fn z(&self, r: i64, p: i64, deg: i64) -> Vec<BitVec> {
        let cut = (p + r).max(0) as usize;
        let cols = self.filtered(p.max(0) as usize, deg);
        let total = self.n * self.levels;
        // rows of components below level p + r
        let low_rows: Vec<usize> = (0..cut.min(self.levels))
            .flat_map(|j| (0..self.n).map(move |x| j * self.n + x))
            .collect();
        let m = BitMatrix::from_cols(
            low_rows.len(),
            cols.iter()
                .map(|&c| {
                    let col = self.d.col(c);
                    BitVec::from_indices(
                        low_rows.len(),
                        low_rows.iter().enumerate().filter(|(_, &g)| col.get(g)).map(|(k, _)| k),
                    )
                })
                .collect(),
        );
        m.kernel()
            .into_iter()
            .map(|k| BitVec::from_indices(total, k.ones().map(|t| cols[t])))
            .collect()
    }

    fn e_dim(&self, r: i64, p: i64, deg: i64) -> usize {
        let zr = self.z(r, p, deg);
        let mut ech = Echelon::new(self.n * self.levels);
        for v in self.z(r - 1, p + 1, deg) {
            ech.insert(&v);
        }
        for v in self.z(r - 1, p - r + 1, deg - 1) {
            ech.insert(&self.d.apply(&v));
        }
        // B ⊂ Z_r, so dim E = dim (Z_r + B) - dim B
        zr.iter().filter(|v| ech.insert(v)).count()
    }
}

/// Pages `E_1..=E_max_page` for columns `0 <= p < precision`.
pub fn ss_pages(c: &GradedComplex, max_page: usize, precision: usize) -> Result<SpectralReport> {
    if c.ring != Ring::F2q {
        return Err(Error::InvalidComplex("spectral sequence needs an F2[[q]] complex".into()));
    }
    let report = c.verify_differential();
    if !report.passed() {
        return Err(Error::InvalidComplex("differential fails verification".into()));
    }
    let Some((lo, hi)) = c.basis.degree_range() else {
        return Ok(SpectralReport {
            pages: (1..=max_page)
                .map(|r| Page {
                    r,
                    dims: BTreeMap::new(),
                })
                .collect(),
            resolved: precision,
            degenerates_at: Some(1),
        });
    };
    let levels = precision + max_page + (hi - lo) as usize + 2;
    let n = c.dim();
    let mut d = BitMatrix::zeros(n * levels, n * levels);
    for j in 0..levels {
        for (&(y, x), v) in c.differential.entries() {
            for e in v.exponents() {
                if j + e < levels {
                    d.toggle((j + e) * n + y, j * n + x);
                }
            }
        }
    }
    let t = Truncated {
        n,
        levels,
        base_deg: c.basis.degrees(),
        d,
    };
    let mut pages = Vec::new();
    for r in 1..=max_page {
        let mut dims = BTreeMap::new();
        for p in 0..precision {
            for b in lo..=hi {
                let deg = b + p as i64;
                dims.insert((p, b), t.e_dim(r as i64, p as i64, deg));
            }
        }
        pages.push(Page { r, dims });
    }
    let last = pages.last().map(|pg| pg.dims.clone());
    let degenerates_at = pages
        .iter()
        .position(|pg| Some(&pg.dims) == last.as_ref())
        .map(|i| i + 1);
    Ok(SpectralReport {
        pages,
        resolved: precision,
        degenerates_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::complex::assemble_terms;
    use crate::complexes::GradedBasis;

    #[test]
    fn free_swap_pages() {
        let b = GradedBasis::new([("x", 0), ("y", 0)]).unwrap();
        let mut t = BitMatrix::identity(2);
        t.set(0, 1, true);
        t.set(1, 0, true);
        let c = GradedComplex::f2q(b, assemble_terms(&[BitMatrix::zeros(2, 2), t], 2));
        let rep = ss_pages(&c, 3, 4).unwrap();
        let e1 = &rep.pages[0].dims;
        let e2 = &rep.pages[1].dims;
        for p in 0..4 {
            assert_eq!(e1[&(p, 0)], 2);
            assert_eq!(e2[&(p, 0)], if p == 0 { 1 } else { 0 });
        }
        assert_eq!(rep.degenerates_at, Some(2));
    }

    #[test]
    fn trivial_action_degenerates_immediately() {
        let b = GradedBasis::new([("x", 0), ("y", 1)]).unwrap();
        let c = GradedComplex::f2q(b, assemble_terms(&[BitMatrix::zeros(2, 2)], 2));
        let rep = ss_pages(&c, 3, 3).unwrap();
        assert_eq!(rep.degenerates_at, Some(1));
        assert_eq!(rep.pages[0].dims[&(1, 1)], 1);
    }
}
