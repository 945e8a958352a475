//! Dense bit-packed linear algebra over F2.
//!
//! Matrices are stored column-major as [`BitVec`]s because every consumer in
//! this crate builds operators by applying them to basis vectors.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    /// Parity of the overlap with `other`.
    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "[{s}]")
    }
}

/// Column-major F2 matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    nrows: usize,
    cols: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix {
            nrows,
            cols: vec![BitVec::zeros(nrows); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            nrows: n,
            cols: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    pub fn from_cols(nrows: usize, cols: Vec<BitVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.len() == nrows));
        BitMatrix { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cols[col].get(row)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.cols[col].set(row, value);
    }

    pub fn toggle(&mut self, row: usize, col: usize) {
        self.cols[col].toggle(row);
    }

    pub fn col(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[BitVec] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BitVec::is_zero)
    }

    /// Nonzero entries as `(row, col)` pairs in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.ones().map(move |i| (i, j)))
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        debug_assert_eq!(v.len(), self.ncols());
        let mut out = BitVec::zeros(self.nrows);
        for j in v.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols(), rhs.nrows(), "dimension mismatch in product");
        BitMatrix {
            nrows: self.nrows,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(
            (self.nrows, self.ncols()),
            (rhs.nrows, rhs.ncols()),
            "dimension mismatch in sum"
        );
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    pub fn add_assign(&mut self, rhs: &BitMatrix) {
        for (a, b) in self.cols.iter_mut().zip(&rhs.cols) {
            a.xor_assign(b);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols(), self.nrows);
        for (i, j) in self.entries() {
            t.set(j, i, true);
        }
        t
    }

    pub fn pow(&self, k: usize) -> BitMatrix {
        assert_eq!(self.nrows, self.ncols());
        let mut out = BitMatrix::identity(self.nrows);
        for _ in 0..k {
            out = self.mul(&out);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.nrows);
        self.cols.iter().filter(|c| ech.insert(c)).count()
    }

    /// Basis of the kernel, one vector per dependent column, in column order.
    pub fn kernel(&self) -> Vec<BitVec> {
        let n = self.ncols();
        let mut ech = Echelon::with_tracking(self.nrows, n);
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(combo) = ech.insert_tracked(c, j) {
                out.push(combo);
            }
        }
        out
    }

    /// Nilpotency index: least `k` with `self^k = 0`, if it is at most `n`.
    pub fn nilpotency_index(&self) -> Option<usize> {
        let n = self.nrows;
        assert_eq!(n, self.ncols());
        let mut p = BitMatrix::identity(n);
        for k in 0..=n {
            if p.is_zero() {
                return Some(k);
            }
            p = self.mul(&p);
        }
        None
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows, self.ncols())?;
        for i in 0..self.nrows {
            let row: String = (0..self.ncols())
                .map(|j| if self.get(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Incremental row-echelon basis keyed by lowest set bit.
///
/// With tracking enabled every stored vector remembers which inserted vectors
/// it is a combination of, so reductions can report coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    /// (pivot, reduced vector, combination of inserted labels)
    rows: Vec<(usize, BitVec, Option<BitVec>)>,
    track_len: Option<usize>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            track_len: None,
        }
    }

    pub fn with_tracking(len: usize, labels: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            track_len: Some(labels),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    fn position(&self, pivot: usize) -> std::result::Result<usize, usize> {
        self.rows.binary_search_by_key(&pivot, |r| r.0)
    }

    /// Reduces `v` in place; returns the accumulated combination if tracking.
    pub fn reduce(&self, v: &mut BitVec) -> Option<BitVec> {
        let mut combo = self.track_len.map(BitVec::zeros);
        // Stored vectors have all bits >= their pivot, so a single ascending
        // sweep over pivots suffices.
        for (p, row, c) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
                if let (Some(acc), Some(c)) = (combo.as_mut(), c.as_ref()) {
                    acc.xor_assign(c);
                }
            }
        }
        combo
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Inserts without tracking; returns true if `v` was independent.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let mut w = v.clone();
        let combo = self.reduce(&mut w);
        match w.first_one() {
            None => false,
            Some(p) => {
                let at = self.position(p).unwrap_err();
                self.rows.insert(at, (p, w, combo));
                true
            }
        }
    }

    /// Inserts `v` labelled `label`. Returns `None` if independent, otherwise
    /// the dependency (a combination of labels summing to zero, including
    /// `label`).
    pub fn insert_tracked(&mut self, v: &BitVec, label: usize) -> Option<BitVec> {
        let n = self.track_len.expect("tracking not enabled");
        let mut w = v.clone();
        let mut combo = self.reduce(&mut w).unwrap_or_else(|| BitVec::zeros(n));
        combo.toggle(label);
        match w.first_one() {
            None => Some(combo),
            Some(p) => {
                let at = self.position(p).unwrap_err();
                self.rows.insert(at, (p, w, Some(combo)));
                None
            }
        }
    }

    /// Coordinates of `v` in terms of tracked labels, if `v` lies in the span.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let mut w = v.clone();
        let combo = self.reduce(&mut w);
        if w.is_zero() {
            combo
        } else {
            None
        }
    }
}

/// Quotient of a subspace by another: `span(sub) / span(base)` with a fixed
/// ordered basis of representatives.
#[derive(Clone, Debug)]
pub struct Quotient {
    ech: Echelon,
    reps: Vec<BitVec>,
    base_rank: usize,
}

impl Quotient {
    /// `base` spans the subspace being divided out; each candidate vector that
    /// is independent modulo `base` and the earlier representatives becomes a
    /// representative.
    pub fn new<'a>(
        len: usize,
        base: impl IntoIterator<Item = &'a BitVec>,
        candidates: impl IntoIterator<Item = &'a BitVec>,
    ) -> Self {
        let candidates: Vec<&BitVec> = candidates.into_iter().collect();
        let mut ech = Echelon::with_tracking(len, candidates.len());
        for b in base {
            let mut w = b.clone();
            ech.reduce(&mut w);
            if let Some(p) = w.first_one() {
                let at = ech.position(p).unwrap_err();
                let n = candidates.len();
                ech.rows.insert(at, (p, w, Some(BitVec::zeros(n))));
            }
        }
        let base_rank = ech.rank();
        let mut reps = Vec::new();
        let mut labels = Vec::new();
        for (k, c) in candidates.iter().enumerate() {
            if ech.insert_tracked(c, k).is_none() {
                reps.push((*c).clone());
                labels.push(k);
            }
        }
        // Re-label tracked combinations from candidate index to representative
        // index so that coordinates refer to `reps`.
        let mut relabel = vec![None; candidates.len()];
        for (r, &k) in labels.iter().enumerate() {
            relabel[k] = Some(r);
        }
        let nreps = reps.len();
        for row in &mut ech.rows {
            if let Some(c) = row.2.as_mut() {
                let mut fresh = BitVec::zeros(nreps);
                for k in c.ones() {
                    if let Some(r) = relabel[k] {
                        fresh.toggle(r);
                    }
                }
                *c = fresh;
            }
        }
        ech.track_len = Some(nreps);
        Quotient {
            ech,
            reps,
            base_rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn base_rank(&self) -> usize {
        self.base_rank
    }

    pub fn reps(&self) -> &[BitVec] {
        &self.reps
    }

    /// Coordinates of the class of `v`; `None` if `v` is outside the span of
    /// base and representatives.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        self.ech.coordinates(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one_matrix() {
        // columns (1,1), (1,1), (0,1)
        let m = BitMatrix::from_cols(
            2,
            vec![
                BitVec::from_indices(2, [0, 1]),
                BitVec::from_indices(2, [0, 1]),
                BitVec::from_indices(2, [1]),
            ],
        );
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker, vec![BitVec::from_indices(3, [0, 1])]);
        for k in &ker {
            assert!(m.apply(k).is_zero());
        }
    }

    #[test]
    fn quotient_coordinates() {
        let e = |i| BitVec::unit(3, i);
        let base = [BitVec::from_indices(3, [0, 1])];
        let cands = [e(0), e(1), e(2)];
        let q = Quotient::new(3, base.iter(), cands.iter());
        assert_eq!(q.dim(), 2);
        // e1 = e0 + (e0 + e1) is the class of the first representative.
        assert_eq!(q.coordinates(&e(1)), Some(BitVec::unit(2, 0)));
        assert_eq!(q.coordinates(&e(2)), Some(BitVec::unit(2, 1)));
    }

    #[test]
    fn nilpotency() {
        let mut u = BitMatrix::zeros(3, 3);
        u.set(0, 1, true);
        u.set(1, 2, true);
        assert_eq!(u.nilpotency_index(), Some(3));
        assert_eq!(BitMatrix::identity(2).nilpotency_index(), None);
    }

    #[test]
    fn ones_iterates_across_words() {
        let v = BitVec::from_indices(200, [3, 64, 130, 199]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 130, 199]);
        assert_eq!(v.first_one(), Some(3));
        assert_eq!(v.count_ones(), 4);
    }
}
