//! Constant-coefficient operators on truncated spaces `V[[q]] / q^L`,
//! indexed `j * dim V + i` for `v_i q^j`.

use crate::seriesalg::BitMatrix;

/// `M` applied coefficientwise.
pub fn lift(m: &BitMatrix, levels: usize) -> BitMatrix {
    let (r, c) = (m.nrows(), m.ncols());
    let mut out = BitMatrix::zeros(r * levels, c * levels);
    for j in 0..levels {
        for (y, x) in m.entries() {
            out.set(j * r + y, j * c + x, true);
        }
    }
    out
}

/// `∂_q`, which shifts coefficients down one level.
pub fn dq(n: usize, levels: usize) -> BitMatrix {
    let mut out = BitMatrix::zeros(n * levels, n * levels);
    for j in 1..levels {
        for i in 0..n {
            out.set((j - 1) * n + i, j * n + i, true);
        }
    }
    out
}

/// Multiplication by `q`, dropping the top level.
pub fn shift(n: usize, levels: usize) -> BitMatrix {
    let mut out = BitMatrix::zeros(n * levels, n * levels);
    for j in 0..levels.saturating_sub(1) {
        for i in 0..n {
            out.set((j + 1) * n + i, j * n + i, true);
        }
    }
    out
}

/// Restriction to `q = 0`.
pub fn eval0(n: usize, levels: usize) -> BitMatrix {
    let mut out = BitMatrix::zeros(n, n * levels);
    if levels > 0 {
        for i in 0..n {
            out.set(i, i, true);
        }
    }
    out
}

/// Inclusion as the `q^0` level.
pub fn incl0(n: usize, levels: usize) -> BitMatrix {
    eval0(n, levels).transpose()
}

/// Copies `src` into `dst` at offset `(r0, c0)`, adding over F2.
pub fn place(dst: &mut BitMatrix, src: &BitMatrix, r0: usize, c0: usize) {
    for (i, j) in src.entries() {
        dst.toggle(r0 + i, c0 + j);
    }
}

/// Columns `c0..c0 + width` and rows `r0..r0 + height` of `m`.
pub fn sub(m: &BitMatrix, r0: usize, height: usize, c0: usize, width: usize) -> BitMatrix {
    let mut out = BitMatrix::zeros(height, width);
    for (i, j) in m.entries() {
        if (r0..r0 + height).contains(&i) && (c0..c0 + width).contains(&j) {
            out.set(i - r0, j - c0, true);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_times_dq_is_identity_minus_evaluation() {
        let (n, l) = (2, 5);
        let lhs = shift(n, l).mul(&dq(n, l));
        let rhs = BitMatrix::identity(n * l).add(&incl0(n, l).mul(&eval0(n, l)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn lift_commutes_with_dq() {
        let mut m = BitMatrix::zeros(2, 3);
        m.set(0, 2, true);
        m.set(1, 0, true);
        let l = 4;
        assert_eq!(lift(&m, l).mul(&dq(3, l)), dq(2, l).mul(&lift(&m, l)));
    }
}
