use crate::error::{Error, Result};

use super::field::Field;
use super::mumford::{CurveData, MumfordTriple};
use super::poly::Poly;

pub type Block<E> = [[E; 2]; 2];

/// Blocks `A_1, ..., A_m` of the slice matrix with `A_k` down the first
/// block column and identities on the block superdiagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMatrix<F: Field> {
    pub field: F,
    pub blocks: Vec<Block<F::Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceReport<F: Field> {
    /// `det(x - A) = det(A(x))`.
    pub det_identity: bool,
    pub char_poly: Poly<F>,
    pub det_a_x: Poly<F>,
    pub over_target: bool,
    /// `(A_i)_12 = (A_i)_21` for every block.
    pub fixed_locus: bool,
    pub triple: Option<MumfordTriple<F>>,
}

impl<F: Field> SliceMatrix<F> {
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    /// The full `2m × 2m` matrix.
    pub fn assemble(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let n = 2 * self.m();
        let mut a = vec![vec![f.zero(); n]; n];
        for (k, b) in self.blocks.iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    a[2 * k + i][j] = b[i][j].clone();
                }
                if k + 1 < self.m() {
                    a[2 * k + i][2 * k + 2 + i] = f.one();
                }
            }
        }
        a
    }

    pub fn is_fixed(&self) -> bool {
        self.blocks.iter().all(|b| b[0][1] == b[1][0])
    }

    /// `A(x) = x^m I - x^{m-1} A_1 - ... - A_m`.
    pub fn a_of_x(&self) -> [[Poly<F>; 2]; 2] {
        let f = &self.field;
        let m = self.m();
        let entry = |i: usize, j: usize| {
            let mut c = vec![f.zero(); m + 1];
            if i == j {
                c[m] = f.one();
            }
            for (k, b) in self.blocks.iter().enumerate() {
                c[m - k - 1] = f.neg(&b[i][j]);
            }
            Poly::new(f.clone(), c)
        };
        [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
    }

    pub fn det_a_x(&self) -> Poly<F> {
        let a = self.a_of_x();
        a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]))
    }

    /// Blocks with `A(x) = [[W, V], [V, U]]`.
    pub fn from_triple(field: F, m: usize, t: &MumfordTriple<F>) -> Self {
        let blocks = (1..=m)
            .map(|k| {
                let c = |p: &Poly<F>| field.neg(&p.coeff(m - k));
                let v = c(&t.v);
                [[c(&t.w), v.clone()], [v, c(&t.u)]]
            })
            .collect();
        SliceMatrix { field, blocks }
    }
}

/// Characteristic polynomial `det(x - A)` by reduction to Hessenberg form.
pub fn char_poly<F: Field>(field: &F, a: &[Vec<F::Elem>]) -> Poly<F> {
    let f = field;
    let n = a.len();
    let mut h: Vec<Vec<F::Elem>> = a.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !f.is_zero(&h[i][j])) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = f.inv(&h[j + 1][j]).expect("nonzero pivot");
        for i in j + 2..n {
            let t = f.mul(&h[i][j], &inv);
            if f.is_zero(&t) {
                continue;
            }
            for c in 0..n {
                let v = f.sub(&h[i][c], &f.mul(&t, &h[j + 1][c]));
                h[i][c] = v;
            }
            for row in h.iter_mut() {
                let v = f.add(&row[j + 1], &f.mul(&t, &row[i]));
                row[j + 1] = v;
            }
        }
    }
    let x = Poly::x(f.clone());
    let mut p: Vec<Poly<F>> = vec![Poly::constant(f.clone(), 1)];
    for m in 1..=n {
        let diag = Poly::new(f.clone(), vec![h[m - 1][m - 1].clone()]);
        let mut pm = x.sub(&diag).mul(&p[m - 1]);
        let mut t = f.one();
        for i in 1..m {
            t = f.mul(&t, &h[m - i][m - i - 1]);
            let coef = f.mul(&t, &h[m - i - 1][m - 1]);
            pm = pm.sub(&p[m - i - 1].scale(&coef));
        }
        p.push(pm);
    }
    p.pop().expect("at least the constant")
}

/// Checks the determinant identity and reports whether the point lies over
/// `target.f` and in the fixed locus; emits the triple when it does both.
pub fn check_point<F: Field>(s: &SliceMatrix<F>, target: &CurveData<F>) -> SliceReport<F> {
    let cp = char_poly(&s.field, &s.assemble());
    let det_a_x = s.det_a_x();
    let over_target = s.m() == target.m && cp == target.f;
    let fixed_locus = s.is_fixed();
    let triple = (over_target && fixed_locus).then(|| {
        let a = s.a_of_x();
        MumfordTriple {
            u: a[1][1].clone(),
            v: a[0][1].clone(),
            w: a[0][0].clone(),
        }
    });
    SliceReport {
        det_identity: cp == det_a_x,
        char_poly: cp,
        det_a_x,
        over_target,
        fixed_locus,
        triple,
    }
}

/// Slice matrix of a triple, verified to land over the curve in the fixed locus.
pub fn triple_to_matrix<F: Field>(c: &CurveData<F>, t: &MumfordTriple<F>) -> Result<SliceMatrix<F>> {
    t.check(c)?;
    let s = SliceMatrix::from_triple(c.field().clone(), c.m, t);
    let r = check_point(&s, c);
    if !(r.det_identity && r.over_target && r.fixed_locus) {
        return Err(Error::InvariantViolated("slice matrix of the triple misses the fixed fibre".into()));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::super::field::{PrimeField, Rationals};
    use super::*;

    #[test]
    fn degree_one_point() {
        let q = Rationals;
        let s = SliceMatrix {
            field: q,
            blocks: vec![[[q.from_i64(0), q.from_i64(-1)], [q.from_i64(-1), q.from_i64(0)]]],
        };
        let c = CurveData::new(Poly::new(q, vec![q.from_i64(-1), q.zero(), q.one()])).unwrap();
        let r = check_point(&s, &c);
        assert!(r.det_identity && r.over_target && r.fixed_locus);
        let t = r.triple.unwrap();
        assert_eq!((t.u.to_string(), t.v.to_string(), t.w.to_string()), ("x".into(), "1".into(), "x".into()));
        assert_eq!(triple_to_matrix(&c, &t).unwrap(), s);
    }

    #[test]
    fn companion_char_poly() {
        let f = PrimeField::new(101).unwrap();
        let blocks = vec![[[3, 5], [7, 98]], [[1, 2], [3, 4]], [[9, 0], [0, 11]]];
        let s = SliceMatrix { field: f, blocks };
        let r = check_point(&s, &CurveData::new(Poly::from_roots(f, &[1, 100])).unwrap());
        assert!(r.det_identity);
        assert_eq!(r.char_poly.degree(), Some(6));
        assert!(!r.fixed_locus && !r.over_target);
    }
}
