//! Smith normal form over the discrete valuation ring F2[[q]].

use serde::{Deserialize, Serialize};

use super::matrix::SparseQMatrix;
use super::series::QSeries;
use crate::error::{Error, Result};

/// Free and torsion summands of a finitely generated graded F2[[q]]-module.
///
/// `torsion` holds `(degree, exponent)` for summands `F2[[q]]/q^exponent`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleInvariants {
    pub free: Vec<i64>,
    pub torsion: Vec<(i64, u32)>,
}

impl ModuleInvariants {
    pub fn new(mut free: Vec<i64>, mut torsion: Vec<(i64, u32)>) -> Self {
        free.sort_unstable();
        torsion.sort_unstable();
        ModuleInvariants { free, torsion }
    }

    pub fn r_free(&self) -> usize {
        self.free.len()
    }

    pub fn r_tor(&self) -> usize {
        self.torsion.len()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// F2-dimension of the torsion part.
    pub fn torsion_dimension(&self) -> u64 {
        self.torsion.iter().map(|&(_, e)| e as u64).sum()
    }
}

/// One pivot of a Smith reduction: original row and column, and the
/// valuation of the diagonal entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub valuation: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub pivots: Vec<Pivot>,
    pub nrows: usize,
    pub ncols: usize,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Exponents of the elementary divisors in increasing order.
    pub fn exponents(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.pivots.iter().map(|p| p.valuation).collect();
        e.sort_unstable();
        e
    }
}

/// Default working precision `D * dim + 2`.
pub fn default_precision(max_q_degree: usize, dimension: usize) -> usize {
    max_q_degree.max(1) * dimension + 2
}

type Cell = Option<QSeries>;

fn add_cells(a: &Cell, b: &Cell) -> Cell {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(x.add(y)),
    }
}

fn mul_cells(a: &Cell, b: &Cell) -> Cell {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.mul(y)),
        _ => None,
    }
}

/// Reduces `m` by row and column operations, pivoting on an entry of minimal
/// valuation (ties broken by row then column). Absent entries are exact
/// zeros; stored entries that vanish at their precision are unknown beyond
/// it and must not compete with a pivot.
pub fn smith_form(m: &SparseQMatrix) -> Result<SmithForm> {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut a: Vec<Vec<Cell>> = vec![vec![None; nc]; nr];
    for (&(i, j), v) in m.entries() {
        a[i][j] = Some(v.clone());
    }
    let mut row_live = vec![true; nr];
    let mut col_live = vec![true; nc];
    let mut pivots = Vec::new();

    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in (0..nr).filter(|&i| row_live[i]) {
            for j in (0..nc).filter(|&j| col_live[j]) {
                if let Some(v) = a[i][j].as_ref().and_then(QSeries::valuation) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pr, pc)) = best else { break };

        for i in (0..nr).filter(|&i| row_live[i]) {
            for j in (0..nc).filter(|&j| col_live[j]) {
                if let Some(x) = &a[i][j] {
                    if x.is_zero() && x.precision() <= v {
                        return Err(Error::PrecisionExhausted(format!(
                            "entry ({i}, {j}) is unknown beyond q^{} but the pivot has valuation {v}",
                            x.precision()
                        )));
                    }
                }
            }
        }

        let unit = a[pr][pc].as_ref().expect("pivot present").unshift(v)?;
        let inv = Some(unit.inverse().expect("pivot body is a unit"));
        for j in (0..nc).filter(|&j| col_live[j]) {
            a[pr][j] = mul_cells(&a[pr][j], &inv);
        }
        for i in (0..nr).filter(|&i| row_live[i] && i != pr) {
            let Some(b) = a[i][pc].take() else { continue };
            let factor = Some(b.unshift(v)?);
            for j in (0..nc).filter(|&j| col_live[j] && j != pc) {
                let t = mul_cells(&factor, &a[pr][j]);
                a[i][j] = add_cells(&a[i][j], &t);
            }
        }
        for j in (0..nc).filter(|&j| col_live[j] && j != pc) {
            if let Some(x) = a[pr][j].take() {
                // Column operations clear the pivot row; the entry must be
                // divisible by the pivot.
                x.unshift(v)?;
            }
        }
        row_live[pr] = false;
        col_live[pc] = false;
        pivots.push(Pivot {
            row: pr,
            col: pc,
            valuation: v,
        });
    }
    Ok(SmithForm {
        pivots,
        nrows: nr,
        ncols: nc,
    })
}

/// Invariants of the cokernel of `presentation` (rows are generators, columns
/// relations). Row degrees are taken from the matrix when present, else 0.
pub fn smith_decompose(presentation: &SparseQMatrix) -> Result<ModuleInvariants> {
    let sf = smith_form(presentation)?;
    let deg = |i: usize| presentation.row_degrees().map_or(0, |d| d[i]);
    let mut pivot_rows = vec![false; sf.nrows];
    let mut torsion = Vec::new();
    for p in &sf.pivots {
        pivot_rows[p.row] = true;
        if p.valuation > 0 {
            torsion.push((deg(p.row), p.valuation as u32));
        }
    }
    let free = (0..sf.nrows).filter(|&i| !pivot_rows[i]).map(deg).collect();
    Ok(ModuleInvariants::new(free, torsion))
}

/// Runs `smith_decompose` on presentations built at precisions `n` and `2n`
/// and insists on agreement.
pub fn smith_decompose_certified(
    build: impl Fn(usize) -> SparseQMatrix,
    n: usize,
) -> Result<ModuleInvariants> {
    let low = smith_decompose(&build(n))?;
    let high = smith_decompose(&build(2 * n))?;
    if low != high {
        return Err(Error::PrecisionUnstable {
            low: n,
            high: 2 * n,
            detail: format!("{low:?} vs {high:?}"),
        });
    }
    Ok(low)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[&str]], prec: usize) -> SparseQMatrix {
        let mut m = SparseQMatrix::unlabelled(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, t) in r.iter().enumerate() {
                m.set(i, j, QSeries::parse(t, prec).unwrap());
            }
        }
        m
    }

    #[test]
    fn diagonal_example() {
        let inv = smith_decompose(&mat(&[&["q", "0"], &["0", "1"]], 8)).unwrap();
        assert_eq!(inv, ModuleInvariants::new(vec![], vec![(0, 1)]));
    }

    #[test]
    fn empty_relations_give_free_module() {
        let m = SparseQMatrix::unlabelled(1, 0);
        assert_eq!(smith_decompose(&m).unwrap(), ModuleInvariants::new(vec![0], vec![]));
    }

    #[test]
    fn unit_entry_example() {
        // [[1+q, q], [q, q^2]] has determinant q^2 + q^2 + q^3 = q^3.
        let inv = smith_decompose(&mat(&[&["1+q", "q"], &["q", "q^2"]], 12)).unwrap();
        assert_eq!(inv, ModuleInvariants::new(vec![], vec![(0, 3)]));
    }

    #[test]
    fn unknown_entries_block_certification() {
        // After the first pivot, entry (1, 1) becomes zero known only mod q^2
        // while (1, 2) = q^3 would be the next pivot.
        let mut m = SparseQMatrix::unlabelled(2, 3);
        m.set(0, 0, QSeries::parse("q", 8).unwrap());
        m.set(0, 1, QSeries::parse("q", 8).unwrap());
        m.set(1, 0, QSeries::parse("q", 8).unwrap());
        m.set(1, 1, QSeries::parse("q", 2).unwrap());
        m.set(1, 2, QSeries::parse("q^3", 8).unwrap());
        assert!(matches!(smith_form(&m), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn graded_degrees_follow_rows() {
        let mut m = SparseQMatrix::unlabelled(2, 1).with_degrees(vec![0, 3], vec![0]);
        m.set(1, 0, QSeries::parse("q^2", 8).unwrap());
        let inv = smith_decompose(&m).unwrap();
        assert_eq!(inv, ModuleInvariants::new(vec![0], vec![(3, 2)]));
    }
}
