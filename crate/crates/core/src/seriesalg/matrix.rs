//! Sparse matrices over F2[q] (exact) and F2[[q]] (truncated).

use std::collections::BTreeMap;

use super::gf2::BitMatrix;
use super::poly::Gf2Poly;
use super::series::QSeries;
use crate::error::{Error, Result};

/// Sparse matrix of truncated series with labelled rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseQMatrix {
    rows: Vec<String>,
    cols: Vec<String>,
    row_degrees: Option<Vec<i64>>,
    col_degrees: Option<Vec<i64>>,
    entries: BTreeMap<(usize, usize), QSeries>,
}

impl SparseQMatrix {
    pub fn new(rows: Vec<String>, cols: Vec<String>) -> Self {
        SparseQMatrix {
            rows,
            cols,
            row_degrees: None,
            col_degrees: None,
            entries: BTreeMap::new(),
        }
    }

    /// Unlabelled matrix; rows are named `r0, r1, ...` and columns `c0, ...`.
    pub fn unlabelled(nrows: usize, ncols: usize) -> Self {
        Self::new(
            (0..nrows).map(|i| format!("r{i}")).collect(),
            (0..ncols).map(|j| format!("c{j}")).collect(),
        )
    }

    pub fn with_degrees(mut self, row_degrees: Vec<i64>, col_degrees: Vec<i64>) -> Self {
        assert_eq!(row_degrees.len(), self.rows.len());
        assert_eq!(col_degrees.len(), self.cols.len());
        self.row_degrees = Some(row_degrees);
        self.col_degrees = Some(col_degrees);
        self
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_labels(&self) -> &[String] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[String] {
        &self.cols
    }

    pub fn row_degrees(&self) -> Option<&[i64]> {
        self.row_degrees.as_deref()
    }

    pub fn col_degrees(&self) -> Option<&[i64]> {
        self.col_degrees.as_deref()
    }

    /// Stores `value` unless it is zero at its precision.
    pub fn set(&mut self, row: usize, col: usize, value: QSeries) {
        assert!(row < self.nrows() && col < self.ncols());
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&QSeries> {
        self.entries.get(&(row, col))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &QSeries)> {
        self.entries.iter()
    }

    pub fn min_precision(&self) -> Option<usize> {
        self.entries.values().map(QSeries::precision).min()
    }

    /// Product; an absent entry is an exact zero.
    pub fn mul(&self, rhs: &SparseQMatrix) -> SparseQMatrix {
        assert_eq!(self.ncols(), rhs.nrows());
        let mut by_row: BTreeMap<usize, Vec<(usize, &QSeries)>> = BTreeMap::new();
        for (&(k, j), v) in &rhs.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), QSeries> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    let t = a.mul(b);
                    acc.entry((i, j))
                        .and_modify(|e| *e = e.add(&t))
                        .or_insert(t);
                }
            }
        }
        let mut out = SparseQMatrix::new(self.rows.clone(), rhs.cols.clone());
        out.row_degrees = self.row_degrees.clone();
        out.col_degrees = rhs.col_degrees.clone();
        for ((i, j), v) in acc {
            out.set(i, j, v);
        }
        out
    }

    /// Entrywise `∂_q`.
    pub fn dq(&self) -> Result<SparseQMatrix> {
        let mut out = self.clone();
        out.entries.clear();
        for (&(i, j), v) in &self.entries {
            out.set(i, j, v.dq()?);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> SparseQMatrix {
        let mut out = SparseQMatrix::new(self.cols.clone(), self.rows.clone());
        out.row_degrees = self.col_degrees.clone();
        out.col_degrees = self.row_degrees.clone();
        for (&(i, j), v) in &self.entries {
            out.set(j, i, v.clone());
        }
        out
    }

    /// Exact polynomial matrix from the known coefficients.
    pub fn to_poly(&self) -> PolyMatrix {
        let mut p = PolyMatrix::zeros(self.nrows(), self.ncols());
        for (&(i, j), v) in &self.entries {
            p.set(i, j, v.to_poly());
        }
        p
    }
}

/// Sparse matrix of exact polynomials in q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    nrows: usize,
    ncols: usize,
    entries: BTreeMap<(usize, usize), Gf2Poly>,
}

impl PolyMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        PolyMatrix {
            nrows,
            ncols,
            entries: BTreeMap::new(),
        }
    }

    /// Constant matrix `m` times `q^k`.
    pub fn from_bits(m: &BitMatrix, k: usize) -> Self {
        let mut p = PolyMatrix::zeros(m.nrows(), m.ncols());
        for (i, j) in m.entries() {
            p.set(i, j, Gf2Poly::monomial(k));
        }
        p
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn set(&mut self, row: usize, col: usize, value: Gf2Poly) {
        assert!(row < self.nrows && col < self.ncols);
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Gf2Poly> {
        self.entries.get(&(row, col))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Gf2Poly)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.entries
            .values()
            .filter_map(Gf2Poly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.entries {
            let cur = out.entries.remove(&(i, j)).unwrap_or_default();
            out.set(i, j, cur.add(v));
        }
        out
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.ncols, rhs.nrows);
        let mut by_row: BTreeMap<usize, Vec<(usize, &Gf2Poly)>> = BTreeMap::new();
        for (&(k, j), v) in &rhs.entries {
            by_row.entry(k).or_default().push((j, v));
        }
        let mut out = PolyMatrix::zeros(self.nrows, rhs.ncols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    let cur = out.entries.remove(&(i, j)).unwrap_or_default();
                    out.set(i, j, cur.add(&a.mul(b)));
                }
            }
        }
        out
    }

    /// The coefficient matrix of `q^k`.
    pub fn coefficient(&self, k: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.nrows, self.ncols);
        for (&(i, j), v) in &self.entries {
            if v.coeff(k) {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn to_series(&self, rows: Vec<String>, cols: Vec<String>, precision: usize) -> SparseQMatrix {
        let mut m = SparseQMatrix::new(rows, cols);
        for (&(i, j), v) in &self.entries {
            m.set(i, j, QSeries::from_poly(v, precision));
        }
        m
    }

    /// Checks that entry `(y, x)` is a multiple of the monomial
    /// `q^(col_deg[x] + shift - row_deg[y])`, returning the first offending pair.
    pub fn check_homogeneous(&self, row_deg: &[i64], col_deg: &[i64], shift: i64) -> Result<()> {
        for (&(i, j), v) in &self.entries {
            let e = col_deg[j] + shift - row_deg[i];
            let ok = e >= 0 && v.monomial_exponent() == Some(e as usize);
            if !ok {
                return Err(Error::InvalidComplex(format!(
                    "entry ({i}, {j}) = {v} is not homogeneous of exponent {e}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_dq() {
        let mut a = SparseQMatrix::unlabelled(1, 2);
        a.set(0, 0, QSeries::parse("1+q", 6).unwrap());
        a.set(0, 1, QSeries::parse("q", 6).unwrap());
        let mut b = SparseQMatrix::unlabelled(2, 1);
        b.set(0, 0, QSeries::parse("1+q", 6).unwrap());
        b.set(1, 0, QSeries::parse("q", 6).unwrap());
        let ab = a.mul(&b);
        // (1+q)^2 + q^2 = 1
        assert_eq!(ab.get(0, 0), Some(&QSeries::one(6)));
        let d = a.dq().unwrap();
        assert_eq!(d.get(0, 0), Some(&QSeries::one(5)));
    }

    #[test]
    fn poly_matrix_cancellation() {
        let mut a = PolyMatrix::zeros(1, 2);
        a.set(0, 0, Gf2Poly::one());
        a.set(0, 1, Gf2Poly::one());
        let mut b = PolyMatrix::zeros(2, 1);
        b.set(0, 0, Gf2Poly::monomial(1));
        b.set(1, 0, Gf2Poly::monomial(1));
        assert!(a.mul(&b).is_zero());
    }
}
