use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::basis::GradedBasis;
use super::graded::GradedF2;
use crate::error::{Error, Result};
use crate::seriesalg::{BitMatrix, Gf2Poly, PolyMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ring {
    F2,
    F2q,
}

/// Finitely generated graded complex. Entry `(y, x)` of the differential is
/// the coefficient of `y` in `d(x)`; over `F2q` the variable has degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub basis: GradedBasis,
    pub ring: Ring,
    pub differential: PolyMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DifferentialReport {
    /// `(from, to)` pairs whose entry has the wrong degree.
    pub degree_failures: Vec<(String, String)>,
    /// `(from, to)` pairs where `d∘d` is nonzero.
    pub square_failures: Vec<(String, String)>,
}

impl DifferentialReport {
    pub fn passed(&self) -> bool {
        self.degree_failures.is_empty() && self.square_failures.is_empty()
    }
}

impl GradedComplex {
    pub fn f2(basis: GradedBasis, d: &BitMatrix) -> Self {
        GradedComplex {
            basis,
            ring: Ring::F2,
            differential: PolyMatrix::from_bits(d, 0),
        }
    }

    pub fn f2q(basis: GradedBasis, d: PolyMatrix) -> Self {
        GradedComplex {
            basis,
            ring: Ring::F2q,
            differential: d,
        }
    }

    pub fn zero(basis: GradedBasis, ring: Ring) -> Self {
        let n = basis.len();
        GradedComplex {
            basis,
            ring,
            differential: PolyMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn verify_differential(&self) -> DifferentialReport {
        let mut report = DifferentialReport::default();
        let name = |i: usize| self.basis.name(i).to_string();
        for (&(y, x), v) in self.differential.entries() {
            let e = self.basis.degree(x) + 1 - self.basis.degree(y);
            let ok = match self.ring {
                Ring::F2 => e == 0 && v.is_one(),
                Ring::F2q => e >= 0 && v.monomial_exponent() == Some(e as usize),
            };
            if !ok {
                report.degree_failures.push((name(x), name(y)));
            }
        }
        let sq = self.differential.mul(&self.differential);
        for (&(y, x), _) in sq.entries() {
            report.square_failures.push((name(x), name(y)));
        }
        report
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.verify_differential();
        if !r.degree_failures.is_empty() {
            let (x, y) = &r.degree_failures[0];
            return Err(Error::InvalidComplex(format!("entry {x} -> {y} has the wrong degree")));
        }
        if !r.square_failures.is_empty() {
            let (x, y) = &r.square_failures[0];
            return Err(Error::InvalidComplex(format!("d∘d is nonzero from {x} to {y}")));
        }
        Ok(())
    }

    /// The constant part `d^(0)` as an F2 matrix.
    pub fn constant_part(&self) -> BitMatrix {
        self.differential.coefficient(0)
    }

    /// The F2 complex underlying an F2 complex.
    pub fn as_graded_f2(&self) -> Result<GradedF2> {
        if self.ring != Ring::F2 {
            return Err(Error::InvalidComplex("expected a complex over F2".into()));
        }
        self.require_valid()?;
        GradedF2::new(self.basis.degrees(), self.constant_part())
    }

    /// Quotient by `q^levels` of an F2q complex, as a finite F2 complex with
    /// multiplication by q. Basis element `x q^j` sits at index
    /// `j * dim + i(x)` in degree `deg x + j`.
    pub fn truncate(&self, levels: usize) -> Result<GradedF2> {
        if self.ring != Ring::F2q {
            return Err(Error::InvalidComplex("expected a complex over F2[[q]]".into()));
        }
        self.require_valid()?;
        let n = self.dim();
        let total = n * levels;
        let degs: Vec<i64> = (0..levels)
            .flat_map(|j| self.basis.degrees().into_iter().map(move |d| d + j as i64))
            .collect();
        let mut d = BitMatrix::zeros(total, total);
        let mut q = BitMatrix::zeros(total, total);
        for j in 0..levels {
            for (&(y, x), v) in self.differential.entries() {
                for e in v.exponents() {
                    if j + e < levels {
                        d.toggle((j + e) * n + y, j * n + x);
                    }
                }
            }
            if j + 1 < levels {
                for i in 0..n {
                    q.set((j + 1) * n + i, j * n + i, true);
                }
            }
        }
        GradedF2::new(degs, d)?.with_action(q)
    }
}

/// Dimension of `H(c)` per degree for a complex over F2.
pub fn cohomology_f2(c: &GradedComplex) -> Result<BTreeMap<i64, usize>> {
    let g = c.as_graded_f2()?;
    let coh = g.cohomology();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    if let Some((lo, hi)) = c.basis.degree_range() {
        for n in lo..=hi {
            dims.insert(n, coh.dim(n));
        }
    }
    Ok(dims)
}

/// Builds an F2q differential `Σ d^(k) q^k` from constant terms.
pub fn assemble_terms(terms: &[BitMatrix], dim: usize) -> PolyMatrix {
    let mut out = PolyMatrix::zeros(dim, dim);
    for (k, t) in terms.iter().enumerate() {
        for (i, j) in t.entries() {
            let cur = out.get(i, j).cloned().unwrap_or_default();
            out.set(i, j, cur.add(&Gf2Poly::monomial(k)));
        }
    }
    out
}
