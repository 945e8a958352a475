//! Finite graded F2 complexes with an optional degree-one action, their
//! cohomology with deterministic representatives, and the module structure
//! read off from the action on cohomology.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::seriesalg::{BitMatrix, BitVec, ModuleInvariants, Quotient};

#[derive(Clone, Debug)]
pub struct GradedF2 {
    degrees: Vec<i64>,
    d: BitMatrix,
    action: Option<BitMatrix>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

fn check_homogeneous(name: &str, degrees: &[i64], m: &BitMatrix) -> Result<()> {
    for (i, j) in m.entries() {
        if degrees[i] != degrees[j] + 1 {
            return Err(Error::InvalidComplex(format!(
                "{name} maps basis element {j} (degree {}) to {i} (degree {})",
                degrees[j], degrees[i]
            )));
        }
    }
    Ok(())
}

impl GradedF2 {
    /// `d` must raise degree by one; `d^2 = 0` is checked.
    pub fn new(degrees: Vec<i64>, d: BitMatrix) -> Result<Self> {
        assert_eq!(degrees.len(), d.nrows());
        assert_eq!(degrees.len(), d.ncols());
        check_homogeneous("differential", &degrees, &d)?;
        if !d.mul(&d).is_zero() {
            return Err(Error::DifferentialNotSquareZero("d∘d ≠ 0".into()));
        }
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &n) in degrees.iter().enumerate() {
            by_degree.entry(n).or_default().push(i);
        }
        Ok(GradedF2 {
            degrees,
            d,
            action: None,
            by_degree,
        })
    }

    /// Attaches a degree-one operator; commutation with `d` is the caller's
    /// claim and is checked here.
    pub fn with_action(mut self, a: BitMatrix) -> Result<Self> {
        check_homogeneous("action", &self.degrees, &a)?;
        if self.d.mul(&a) != a.mul(&self.d) {
            return Err(Error::NotChainMap("action does not commute with d".into()));
        }
        self.action = Some(a);
        Ok(self)
    }

    /// Like `with_action`, but commutation is only required on inputs of
    /// degree at most `through`. Suits truncations that are exact only in a
    /// range of degrees; cohomology-level use must stay in that range.
    pub fn with_action_through(mut self, a: BitMatrix, through: i64) -> Result<Self> {
        check_homogeneous("action", &self.degrees, &a)?;
        let lhs = self.d.mul(&a);
        let rhs = a.mul(&self.d);
        for j in (0..self.len()).filter(|&j| self.degrees[j] <= through) {
            if lhs.col(j) != rhs.col(j) {
                return Err(Error::NotChainMap(format!(
                    "action does not commute with d on basis element {j} (degree {})",
                    self.degrees[j]
                )));
            }
        }
        self.action = Some(a);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn d(&self) -> &BitMatrix {
        &self.d
    }

    pub fn action(&self) -> Option<&BitMatrix> {
        self.action.as_ref()
    }

    pub fn indices(&self, n: i64) -> &[usize] {
        self.by_degree.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        Some((*self.by_degree.keys().next()?, *self.by_degree.keys().next_back()?))
    }

    fn cocycles(&self, n: i64, reverse: bool) -> Vec<BitVec> {
        let mut idx = self.indices(n).to_vec();
        if reverse {
            idx.reverse();
        }
        let cols: Vec<BitVec> = idx.iter().map(|&i| self.d.col(i).clone()).collect();
        let local = BitMatrix::from_cols(self.len(), cols);
        local
            .kernel()
            .into_iter()
            .map(|k| BitVec::from_indices(self.len(), k.ones().map(|t| idx[t])))
            .collect()
    }

    fn coboundaries(&self, n: i64) -> Vec<BitVec> {
        self.indices(n - 1)
            .iter()
            .map(|&i| self.d.col(i).clone())
            .filter(|c| !c.is_zero())
            .collect()
    }

    /// Cohomology in the given degrees. Representatives come from echelon
    /// reduction in generator order; `reverse` uses the opposite order and
    /// yields a second, generally different, basis.
    pub fn cohomology_in(&self, degrees: impl IntoIterator<Item = i64>, reverse: bool) -> CohomologyData {
        let mut per_degree = BTreeMap::new();
        for n in degrees {
            let z = self.cocycles(n, reverse);
            let b = self.coboundaries(n);
            per_degree.insert(n, Quotient::new(self.len(), b.iter(), z.iter()));
        }
        CohomologyData {
            len: self.len(),
            per_degree,
        }
    }

    /// Cohomology in every degree that carries generators.
    pub fn cohomology(&self) -> CohomologyData {
        let degs: Vec<i64> = self.by_degree.keys().copied().collect();
        self.cohomology_in(degs, false)
    }

    /// Matrix of the action `H^n → H^{n+1}` in the chosen bases.
    pub fn action_on_cohomology(&self, coh: &CohomologyData, n: i64) -> Result<BitMatrix> {
        let a = self
            .action
            .as_ref()
            .ok_or_else(|| Error::InvalidComplex("no action attached".into()))?;
        let src = coh.dim(n);
        let dst = coh.dim(n + 1);
        let mut m = BitMatrix::zeros(dst, src);
        for (k, rep) in coh.reps(n).iter().enumerate() {
            let img = a.apply(rep);
            let c = coh.coordinates(n + 1, &img).ok_or_else(|| {
                Error::NotChainMap(format!("action image of a degree-{n} cocycle is not a cocycle"))
            })?;
            for t in c.ones() {
                m.set(t, k, true);
            }
        }
        Ok(m)
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyData {
    len: usize,
    per_degree: BTreeMap<i64, Quotient>,
}

impl CohomologyData {
    pub fn dim(&self, n: i64) -> usize {
        self.per_degree.get(&n).map_or(0, Quotient::dim)
    }

    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.per_degree
            .iter()
            .filter(|(_, q)| q.dim() > 0)
            .map(|(&n, q)| (n, q.dim()))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.per_degree.values().map(Quotient::dim).sum()
    }

    pub fn reps(&self, n: i64) -> &[BitVec] {
        self.per_degree.get(&n).map_or(&[], |q| q.reps())
    }

    /// Class of a cocycle `v` of degree `n`; `None` if `v` is not a cocycle.
    pub fn coordinates(&self, n: i64, v: &BitVec) -> Option<BitVec> {
        match self.per_degree.get(&n) {
            Some(q) => q.coordinates(v),
            None => v.is_zero().then(|| BitVec::zeros(0)),
        }
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }
}

/// Range in which a truncated computation reflects the untruncated module:
/// generators live in degrees `lo..=hi`, and cohomology and the action are
/// exact through degree `top`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    pub top: i64,
}

/// Module structure of the cohomology of a truncated complex with action,
/// read off from ranks of powers of the action.
#[derive(Clone, Debug)]
pub struct ModuleStructure {
    pub invariants: ModuleInvariants,
    /// Cocycle representatives of a minimal generating set, with degrees.
    pub generators: Vec<(i64, BitVec)>,
    pub cohomology: CohomologyData,
}

pub fn module_structure(c: &GradedF2, window: Window) -> Result<ModuleStructure> {
    let Window { lo, hi, top } = window;
    if top <= hi {
        return Err(Error::PrecisionExhausted(format!(
            "window top {top} does not exceed generator range {hi}"
        )));
    }
    let coh = c.cohomology_in(lo - 1..=top, false);
    let mut act: BTreeMap<i64, BitMatrix> = BTreeMap::new();
    for n in lo - 1..top {
        act.insert(n, c.action_on_cohomology(&coh, n)?);
    }
    // rank of Q^k : H^n -> H^{n+k}
    let rank = |n: i64, k: i64| -> usize {
        if n < lo || n + k > top {
            return 0;
        }
        let mut m = BitMatrix::identity(coh.dim(n));
        for s in n..n + k {
            m = act[&s].mul(&m);
        }
        m.rank()
    };
    let born = |n: i64, k: i64| rank(n, k) - rank(n - 1, k + 1);

    let mut free = Vec::new();
    let mut torsion = Vec::new();
    for n in lo..=top {
        let b0 = born(n, 0);
        if b0 == 0 {
            continue;
        }
        if n > hi {
            return Err(Error::InvariantViolated(format!(
                "cohomology has a generator in degree {n}, above the generator range {hi}"
            )));
        }
        for e in 1..=top - n {
            let count = born(n, e - 1) - born(n, e);
            torsion.extend(std::iter::repeat_n((n, e as u32), count));
        }
        free.extend(std::iter::repeat_n(n, born(n, top - n)));
    }

    let mut generators = Vec::new();
    for n in lo..=hi {
        let dim = coh.dim(n);
        if dim == 0 {
            continue;
        }
        let images: Vec<BitVec> = act
            .get(&(n - 1))
            .map(|m| m.cols().to_vec())
            .unwrap_or_default();
        let units: Vec<BitVec> = (0..dim).map(|i| BitVec::unit(dim, i)).collect();
        let comp = Quotient::new(dim, images.iter(), units.iter());
        for class in comp.reps() {
            let mut v = BitVec::zeros(c.len());
            for t in class.ones() {
                v.xor_assign(&coh.reps(n)[t]);
            }
            generators.push((n, v));
        }
    }
    Ok(ModuleStructure {
        invariants: ModuleInvariants::new(free, torsion),
        generators,
        cohomology: coh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acyclic_pair() {
        let mut d = BitMatrix::zeros(2, 2);
        d.set(1, 0, true);
        let c = GradedF2::new(vec![0, 1], d).unwrap();
        assert_eq!(c.cohomology().total_dim(), 0);
    }

    #[test]
    fn degree_violation_rejected() {
        let mut d = BitMatrix::zeros(2, 2);
        d.set(1, 0, true);
        assert!(GradedF2::new(vec![0, 0], d).is_err());
    }

    #[test]
    fn truncated_polynomial_ring_is_free() {
        // F2[q] truncated at q^6, one generator per degree, d = 0, action = q.
        let n = 6;
        let mut a = BitMatrix::zeros(n, n);
        for i in 0..n - 1 {
            a.set(i + 1, i, true);
        }
        let c = GradedF2::new((0..n as i64).collect(), BitMatrix::zeros(n, n))
            .unwrap()
            .with_action(a)
            .unwrap();
        let ms = module_structure(&c, Window { lo: 0, hi: 0, top: 4 }).unwrap();
        assert_eq!(ms.invariants, ModuleInvariants::new(vec![0], vec![]));
        assert_eq!(ms.generators.len(), 1);
    }

    #[test]
    fn truncated_torsion_summand() {
        // F2[q]/q^2 on a degree-0 generator.
        let n = 2;
        let mut a = BitMatrix::zeros(n, n);
        a.set(1, 0, true);
        let c = GradedF2::new(vec![0, 1], BitMatrix::zeros(n, n))
            .unwrap()
            .with_action(a)
            .unwrap();
        let ms = module_structure(&c, Window { lo: 0, hi: 0, top: 5 }).unwrap();
        assert_eq!(ms.invariants, ModuleInvariants::new(vec![], vec![(0, 2)]));
    }
}
