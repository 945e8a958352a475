use std::collections::BTreeMap;

use super::complex::GradedComplex;
use super::graded::CohomologyData;
use crate::error::{Error, Result};
use crate::seriesalg::{BitMatrix, BitVec};

/// Degree-homogeneous map of F2 complexes commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: GradedComplex,
    pub target: GradedComplex,
    pub matrix: BitMatrix,
    pub degree: i64,
}

impl ChainMap {
    pub fn new(source: GradedComplex, target: GradedComplex, matrix: BitMatrix, degree: i64) -> Result<Self> {
        assert_eq!(matrix.ncols(), source.dim());
        assert_eq!(matrix.nrows(), target.dim());
        for (i, j) in matrix.entries() {
            if target.basis.degree(i) != source.basis.degree(j) + degree {
                return Err(Error::NotChainMap(format!(
                    "{} -> {} does not have degree {degree}",
                    source.basis.name(j),
                    target.basis.name(i)
                )));
            }
        }
        let ds = source.constant_part();
        let dt = target.constant_part();
        let lhs = dt.mul(&matrix);
        let rhs = matrix.mul(&ds);
        if lhs != rhs {
            let (i, j) = lhs.add(&rhs).entries().next().expect("nonzero difference");
            return Err(Error::NotChainMap(format!(
                "d f and f d differ at {} -> {}",
                source.basis.name(j),
                target.basis.name(i)
            )));
        }
        Ok(ChainMap {
            source,
            target,
            matrix,
            degree,
        })
    }

    pub fn identity(c: &GradedComplex) -> Result<Self> {
        ChainMap::new(c.clone(), c.clone(), BitMatrix::identity(c.dim()), 0)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        ChainMap::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix),
            self.degree + other.degree,
        )
    }
}

/// Induced map on cohomology, in the deterministic representative bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    /// Per source degree, the block `H^n(source) → H^{n+deg}(target)`.
    pub blocks: BTreeMap<i64, BitMatrix>,
}

fn block(
    f: &ChainMap,
    src: &CohomologyData,
    dst: &CohomologyData,
    n: i64,
) -> Result<BitMatrix> {
    let reps = src.reps(n);
    let m = n + f.degree;
    let mut out = BitMatrix::zeros(dst.dim(m), reps.len());
    for (k, r) in reps.iter().enumerate() {
        let img = f.matrix.apply(r);
        let c = dst
            .coordinates(m, &img)
            .ok_or_else(|| Error::NotChainMap(format!("image of a degree-{n} cocycle is not a cocycle")))?;
        for t in c.ones() {
            out.set(t, k, true);
        }
    }
    Ok(out)
}

fn coords_matrix(coh: &CohomologyData, n: i64, vectors: &[BitVec]) -> BitMatrix {
    let cols = vectors
        .iter()
        .map(|v| coh.coordinates(n, v).expect("cocycle"))
        .collect();
    BitMatrix::from_cols(coh.dim(n), cols)
}

pub fn induced_map_on_cohomology(f: &ChainMap) -> Result<InducedMap> {
    let gs = f.source.as_graded_f2()?;
    let gt = f.target.as_graded_f2()?;
    let src = gs.cohomology();
    let dst = gt.cohomology();
    let src2 = gs.cohomology_in(src.dims().keys().copied(), true);
    let mut blocks = BTreeMap::new();
    for &n in src.dims().keys() {
        let b = block(f, &src, &dst, n)?;
        // Recompute with the second source basis and translate back.
        let b2 = block(f, &src2, &dst, n)?;
        let change = coords_matrix(&src, n, src2.reps(n));
        if b.mul(&change) != b2 {
            return Err(Error::InvariantViolated(format!(
                "induced map in degree {n} depends on the choice of representatives"
            )));
        }
        blocks.insert(n, b);
    }
    Ok(InducedMap { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{GradedBasis, Ring};

    fn swap_complex() -> GradedComplex {
        GradedComplex::zero(GradedBasis::new([("x", 0), ("y", 0)]).unwrap(), Ring::F2)
    }

    #[test]
    fn identity_induces_identity() {
        let c = swap_complex();
        let m = induced_map_on_cohomology(&ChainMap::identity(&c).unwrap()).unwrap();
        assert_eq!(m.blocks[&0], BitMatrix::identity(2));
    }

    #[test]
    fn swap_induces_swap() {
        let c = swap_complex();
        let mut s = BitMatrix::zeros(2, 2);
        s.set(0, 1, true);
        s.set(1, 0, true);
        let f = ChainMap::new(c.clone(), c, s.clone(), 0).unwrap();
        assert_eq!(induced_map_on_cohomology(&f).unwrap().blocks[&0], s);
    }

    #[test]
    fn non_chain_map_rejected() {
        let b = GradedBasis::new([("x", 0), ("y", 1)]).unwrap();
        let mut d = BitMatrix::zeros(2, 2);
        d.set(1, 0, true);
        let c = GradedComplex::f2(b, &d);
        let mut f = BitMatrix::zeros(2, 2);
        f.set(0, 0, true);
        assert!(matches!(ChainMap::new(c.clone(), c, f, 0), Err(Error::NotChainMap(_))));
    }
}
