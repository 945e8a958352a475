//! Coefficient rings F2[q], F2[[q]], F2((q)) and linear algebra over them.

pub mod gf2;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod series;
pub mod smith;

pub use gf2::{BitMatrix, BitVec, Echelon, Quotient};
pub use laurent::QLaurent;
pub use matrix::{PolyMatrix, SparseQMatrix};
pub use poly::Gf2Poly;
pub use series::QSeries;
pub use smith::{
    default_precision, smith_decompose, smith_decompose_certified, smith_form, ModuleInvariants,
    Pivot, SmithForm,
};

use crate::error::{Error, Result};

fn apply_constant(u: &BitMatrix, v: &[QSeries], precision: usize) -> Vec<QSeries> {
    (0..u.nrows())
        .map(|i| {
            let mut acc = QSeries::zero(precision);
            for j in 0..u.ncols() {
                if u.get(i, j) {
                    acc = acc.add(&v[j]);
                }
            }
            acc
        })
        .collect()
}

/// `(id + U ∂_q)^{-1} target`, summed as the terminating series
/// `Σ U^k ∂_q^k`.
pub fn geom_inv(u: &BitMatrix, target: &[QSeries]) -> Result<Vec<QSeries>> {
    assert_eq!(u.ncols(), target.len());
    let nil = u
        .nilpotency_index()
        .ok_or_else(|| Error::NotNilpotent(format!("U^{} != 0", u.nrows())))?;
    let mut acc: Vec<QSeries> = target.to_vec();
    let mut term: Vec<QSeries> = target.to_vec();
    for _ in 1..nil {
        let d: Vec<QSeries> = term.iter().map(QSeries::dq).collect::<Result<_>>()?;
        let p = d.iter().map(QSeries::precision).min().unwrap_or(0);
        term = apply_constant(u, &d, p);
        acc = acc.iter().zip(&term).map(|(a, t)| a.add(t)).collect();
    }
    Ok(acc)
}

/// `(id + U ∂_q) v`.
pub fn id_plus_u_dq(u: &BitMatrix, v: &[QSeries]) -> Result<Vec<QSeries>> {
    let d: Vec<QSeries> = v.iter().map(QSeries::dq).collect::<Result<_>>()?;
    let p = d.iter().map(QSeries::precision).min().unwrap_or(0);
    let ud = apply_constant(u, &d, p);
    Ok(v.iter().zip(&ud).map(|(a, b)| a.add(b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift_up() -> BitMatrix {
        let mut u = BitMatrix::zeros(2, 2);
        u.set(0, 1, true);
        u
    }

    #[test]
    fn geom_inv_examples() {
        let p = 6;
        let v = vec![QSeries::zero(p), QSeries::parse("q", p).unwrap()];
        assert_eq!(geom_inv(&BitMatrix::zeros(2, 2), &v).unwrap(), v);
        let w = geom_inv(&shift_up(), &v).unwrap();
        assert_eq!(w[0], QSeries::one(p - 1));
        assert_eq!(w[1], QSeries::parse("q", p - 1).unwrap());
        let back = id_plus_u_dq(&shift_up(), &w).unwrap();
        assert_eq!(back[0], v[0].truncate(back[0].precision()));
        assert_eq!(back[1], v[1].truncate(back[1].precision()));

        let e = vec![QSeries::one(p), QSeries::zero(p)];
        let w = geom_inv(&shift_up(), &e).unwrap();
        assert_eq!(w[0], QSeries::one(p - 1));
        assert!(w[1].is_zero());
    }

    #[test]
    fn geom_inv_rejects_non_nilpotent() {
        let v = vec![QSeries::one(4), QSeries::one(4)];
        assert!(matches!(
            geom_inv(&BitMatrix::identity(2), &v),
            Err(Error::NotNilpotent(_))
        ));
    }
}
