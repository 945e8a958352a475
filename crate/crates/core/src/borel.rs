//! Borel complexes `C[[q]]` with differential `Σ d^(k) q^k` and their
//! F2[[q]]-module invariants.

use serde::Serialize;

use crate::complexes::{
    assemble_terms, module_structure, ChainMap, GradedBasis, GradedComplex, GradedF2, ModuleStructure, Window,
};
use crate::error::{Error, Result};
use crate::seriesalg::{default_precision, smith_form, BitMatrix, ModuleInvariants, QSeries, SparseQMatrix};

/// An F2 complex with a degree-0 involution commuting with `d`.
#[derive(Clone, Debug)]
pub struct InvolutiveComplex {
    pub complex: GradedComplex,
    pub involution: ChainMap,
}

impl InvolutiveComplex {
    pub fn new(complex: GradedComplex, iota: BitMatrix) -> Result<Self> {
        let n = complex.dim();
        let involution = ChainMap::new(complex.clone(), complex.clone(), iota, 0)?;
        if involution.matrix.mul(&involution.matrix) != BitMatrix::identity(n) {
            return Err(Error::NotInvolution("ι∘ι ≠ id".into()));
        }
        Ok(InvolutiveComplex { complex, involution })
    }

    pub fn iota(&self) -> &BitMatrix {
        &self.involution.matrix
    }
}

#[derive(Clone, Debug)]
pub struct BorelComplex {
    pub base: GradedBasis,
    pub terms: Vec<BitMatrix>,
    pub assembled: GradedComplex,
}

fn pair_name(base: &GradedBasis, from: usize, to: usize) -> String {
    format!("{} -> {}", base.name(from), base.name(to))
}

/// `d_borel = d + (ι - id) q`.
pub fn borel_from_involution(ic: &InvolutiveComplex) -> Result<BorelComplex> {
    let n = ic.complex.dim();
    let d = ic.complex.constant_part();
    let d1 = ic.iota().add(&BitMatrix::identity(n));
    borel_general(ic.complex.basis.clone(), vec![d, d1])
}

/// Validates degrees and `Σ_{i+j=k} d^(i) d^(j) = 0` for `k < 2·terms`.
pub fn borel_general(base: GradedBasis, terms: Vec<BitMatrix>) -> Result<BorelComplex> {
    let n = base.len();
    for (k, t) in terms.iter().enumerate() {
        assert_eq!((t.nrows(), t.ncols()), (n, n), "term {k} has the wrong shape");
        for (y, x) in t.entries() {
            if base.degree(y) != base.degree(x) + 1 - k as i64 {
                return Err(Error::DegreeViolated {
                    operator: format!("d^({k})"),
                    from: base.name(x).to_string(),
                    to: base.name(y).to_string(),
                });
            }
        }
    }
    for k in 0..2 * terms.len() {
        let mut acc = BitMatrix::zeros(n, n);
        for i in 0..=k {
            if let (Some(a), Some(b)) = (terms.get(i), terms.get(k - i)) {
                acc.add_assign(&a.mul(b));
            }
        }
        let first = acc.entries().next();
        if let Some((y, x)) = first {
            return Err(Error::RelationViolated {
                identity: "Σ d^(i) d^(j) = 0".into(),
                order: k,
                witness: pair_name(&base, x, y),
            });
        }
    }
    let assembled = GradedComplex::f2q(base.clone(), assemble_terms(&terms, n));
    Ok(BorelComplex {
        base,
        terms,
        assembled,
    })
}

fn multiset_remove(all: &mut Vec<i64>, remove: impl IntoIterator<Item = i64>) {
    for r in remove {
        let pos = all.iter().position(|&x| x == r).expect("degree present");
        all.swap_remove(pos);
    }
}

impl BorelComplex {
    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn max_q_degree(&self) -> usize {
        self.terms
            .iter()
            .rposition(|t| !t.is_zero())
            .unwrap_or(0)
    }

    pub fn default_precision(&self) -> usize {
        default_precision(self.max_q_degree(), self.dim())
    }

    /// `d_borel` as a matrix of truncated series.
    pub fn series_matrix(&self, precision: usize) -> SparseQMatrix {
        let names = self.base.names();
        let degs = self.base.degrees();
        self.assembled
            .differential
            .to_series(names.clone(), names, precision)
            .with_degrees(degs.clone(), degs)
    }

    /// Module invariants from the Smith form of `d_borel` alone: with rank
    /// `r` and pivots `q^v`, cohomology is free of rank `n - 2r` plus one
    /// `F2[[q]]/q^v` per nonunit pivot.
    pub fn smith_invariants(&self, precision: usize) -> Result<ModuleInvariants> {
        let m = self.series_matrix(precision);
        let sf = smith_form(&m)?;
        let degs = self.base.degrees();
        let mut free = degs.clone();
        multiset_remove(&mut free, sf.pivots.iter().map(|p| degs[p.col]));
        multiset_remove(&mut free, sf.pivots.iter().map(|p| degs[p.row]));
        let torsion = sf
            .pivots
            .iter()
            .filter(|p| p.valuation > 0)
            .map(|p| (degs[p.row], p.valuation as u32))
            .collect();
        Ok(ModuleInvariants::new(free, torsion))
    }

    /// Truncation level used for the degreewise computation at `precision`.
    pub fn levels(&self, precision: usize) -> usize {
        let (lo, hi) = self.base.degree_range().unwrap_or((0, 0));
        (hi - lo) as usize + precision + 3
    }

    /// Degreewise computation on `C_borel / q^L`.
    pub fn truncated_structure(&self, precision: usize) -> Result<ModuleStructure> {
        let Some((lo, hi)) = self.base.degree_range() else {
            return module_structure(
                &GradedF2::new(vec![], BitMatrix::zeros(0, 0))?,
                Window { lo: 0, hi: 0, top: 1 },
            );
        };
        let levels = self.levels(precision);
        let g = self.assembled.truncate(levels)?;
        module_structure(
            &g,
            Window {
                lo,
                hi,
                top: lo + levels as i64 - 2,
            },
        )
    }

    /// Smith-form invariants at `n` and `2n`, cross-checked against the
    /// degreewise computation.
    pub fn module_invariants_at(&self, n: usize) -> Result<ModuleInvariants> {
        let low = self.smith_invariants(n)?;
        let high = self.smith_invariants(2 * n)?;
        if low != high {
            return Err(Error::PrecisionUnstable {
                low: n,
                high: 2 * n,
                detail: format!("{low:?} vs {high:?}"),
            });
        }
        let degreewise = self.truncated_structure(n)?.invariants;
        if degreewise != low {
            return Err(Error::InvariantViolated(format!(
                "Smith form gives {low:?} but degreewise cohomology gives {degreewise:?}"
            )));
        }
        Ok(low)
    }

    pub fn module_invariants(&self) -> Result<ModuleInvariants> {
        self.module_invariants_at(self.default_precision())
    }

    /// `H(C, d^(0))` dimension.
    pub fn base_cohomology_dim(&self) -> Result<usize> {
        let d0 = self.terms.first().cloned().unwrap_or_else(|| BitMatrix::zeros(self.dim(), self.dim()));
        Ok(GradedF2::new(self.base.degrees(), d0)?.cohomology().total_dim())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UctReport {
    pub r_free: usize,
    pub r_tor: usize,
    pub dim_h: usize,
    pub passed: bool,
}

/// Checks `r_free + 2 r_tor = dim H(C, d^(0))`.
pub fn uct_check(b: &BorelComplex) -> Result<UctReport> {
    let inv = b.module_invariants()?;
    let dim_h = b.base_cohomology_dim()?;
    Ok(UctReport {
        r_free: inv.r_free(),
        r_tor: inv.r_tor(),
        dim_h,
        passed: inv.r_free() + 2 * inv.r_tor() == dim_h,
    })
}

/// Truncated series helper used by callers that build presentations.
pub fn monomial(k: usize, precision: usize) -> QSeries {
    QSeries::monomial(k, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Ring;

    fn swap() -> BitMatrix {
        let mut s = BitMatrix::zeros(2, 2);
        s.set(0, 1, true);
        s.set(1, 0, true);
        s
    }

    fn two_points() -> GradedComplex {
        GradedComplex::zero(GradedBasis::new([("x", 0), ("y", 0)]).unwrap(), Ring::F2)
    }

    fn circle() -> GradedComplex {
        GradedComplex::zero(GradedBasis::new([("p", 0), ("e", 1)]).unwrap(), Ring::F2)
    }

    #[test]
    fn identity_involution_gives_free_cohomology() {
        let ic = InvolutiveComplex::new(circle(), BitMatrix::identity(2)).unwrap();
        let b = borel_from_involution(&ic).unwrap();
        assert_eq!(b.module_invariants().unwrap(), ModuleInvariants::new(vec![0, 1], vec![]));
        let u = uct_check(&b).unwrap();
        assert!(u.passed);
        assert_eq!((u.r_free, u.r_tor, u.dim_h), (2, 0, 2));
    }

    #[test]
    fn free_swap_is_torsion() {
        let ic = InvolutiveComplex::new(two_points(), swap()).unwrap();
        let b = borel_from_involution(&ic).unwrap();
        assert_eq!(b.module_invariants().unwrap(), ModuleInvariants::new(vec![], vec![(0, 1)]));
        let u = uct_check(&b).unwrap();
        assert_eq!((u.r_free, u.r_tor, u.dim_h), (0, 1, 2));
    }

    #[test]
    fn non_involution_rejected() {
        let mut m = BitMatrix::identity(2);
        m.set(0, 1, true);
        m.set(1, 0, true);
        assert!(matches!(
            InvolutiveComplex::new(two_points(), m),
            Err(Error::NotInvolution(_))
        ));
    }

    #[test]
    fn single_term_is_plain_differential() {
        let base = GradedBasis::new([("x", 0), ("y", 1)]).unwrap();
        let mut d = BitMatrix::zeros(2, 2);
        d.set(1, 0, true);
        let b = borel_general(base, vec![d]).unwrap();
        assert_eq!(b.module_invariants().unwrap(), ModuleInvariants::default());
    }

    #[test]
    fn degree_violation_reported() {
        let base = GradedBasis::new([("x", 0), ("y", 0)]).unwrap();
        let mut d = BitMatrix::zeros(2, 2);
        d.set(1, 0, true);
        assert!(matches!(
            borel_general(base, vec![d]),
            Err(Error::DegreeViolated { .. })
        ));
    }
}
