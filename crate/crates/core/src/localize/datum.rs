use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use crate::borel::{borel_from_involution, BorelComplex, InvolutiveComplex};
use crate::complexes::{GradedBasis, GradedComplex};
use crate::error::{Error, Result};
use crate::seriesalg::BitMatrix;

/// Operators of a Morse complex with involution, split into the fixed part
/// `C_inv` and the free part `C_non` (one generator per free orbit).
///
/// Degrees on `C_inv` are indices inside the fixed locus, degrees on `C_non`
/// are ambient indices. Matrix entry `(y, x)` is the coefficient of `y` in
/// the image of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationDatum {
    pub c_inv: GradedBasis,
    pub c_non: GradedBasis,
    pub i_anti: i64,
    pub d_inv: BitMatrix,
    pub d_non: BitMatrix,
    pub u: BitMatrix,
    pub d1: BitMatrix,
    pub d2: BitMatrix,
    /// `D1^(k)`; when nonempty, entry 0 must equal `d1`.
    pub d1_higher: Vec<BitMatrix>,
    pub x: Vec<BitMatrix>,
    pub s1: Vec<BitMatrix>,
    /// Optional action values keyed by generator name.
    pub action: Option<BTreeMap<String, BigRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DatumReport {
    /// Identities checked, in order.
    pub checks: Vec<String>,
    pub nilpotency_index: usize,
    pub filtration_checked: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Inv,
    Non,
}

impl LocalizationDatum {
    /// Datum with all operators zero.
    pub fn zero(c_inv: GradedBasis, c_non: GradedBasis, i_anti: i64) -> Self {
        let (ni, nn) = (c_inv.len(), c_non.len());
        LocalizationDatum {
            c_inv,
            c_non,
            i_anti,
            d_inv: BitMatrix::zeros(ni, ni),
            d_non: BitMatrix::zeros(nn, nn),
            u: BitMatrix::zeros(nn, nn),
            d1: BitMatrix::zeros(ni, nn),
            d2: BitMatrix::zeros(nn, ni),
            d1_higher: Vec::new(),
            x: Vec::new(),
            s1: Vec::new(),
            action: None,
        }
    }

    pub fn n_inv(&self) -> usize {
        self.c_inv.len()
    }

    pub fn n_non(&self) -> usize {
        self.c_non.len()
    }

    /// `D1^(k)`, zero beyond the supplied list; `D1^(0) = D1`.
    pub fn d1_at(&self, k: usize) -> BitMatrix {
        if k == 0 {
            return self.d1.clone();
        }
        self.d1_higher
            .get(k)
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(self.n_inv(), self.n_non()))
    }

    pub fn x_at(&self, k: usize) -> BitMatrix {
        self.x
            .get(k)
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(self.n_inv(), self.n_inv()))
    }

    pub fn s1_at(&self, k: usize) -> BitMatrix {
        self.s1
            .get(k)
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(self.n_inv(), self.n_non()))
    }

    /// Number of terms in the longest higher-operator list.
    pub fn higher_len(&self) -> usize {
        self.d1_higher.len().max(self.x.len()).max(self.s1.len()).max(1)
    }

    fn basis(&self, s: Side) -> &GradedBasis {
        match s {
            Side::Inv => &self.c_inv,
            Side::Non => &self.c_non,
        }
    }

    fn check_degree(&self, name: &str, m: &BitMatrix, from: Side, to: Side, shift: i64) -> Result<()> {
        let (src, dst) = (self.basis(from), self.basis(to));
        assert_eq!((m.nrows(), m.ncols()), (dst.len(), src.len()), "{name} has the wrong shape");
        for (y, x) in m.entries() {
            if dst.degree(y) != src.degree(x) + shift {
                return Err(Error::DegreeViolated {
                    operator: name.to_string(),
                    from: src.name(x).to_string(),
                    to: dst.name(y).to_string(),
                });
            }
        }
        Ok(())
    }

    fn check_filtration(
        &self,
        action: &BTreeMap<String, BigRational>,
        name: &str,
        m: &BitMatrix,
        from: Side,
        to: Side,
    ) -> Result<()> {
        let (src, dst) = (self.basis(from), self.basis(to));
        let value = |b: &GradedBasis, i: usize| {
            action
                .get(b.name(i))
                .ok_or_else(|| Error::parse("action", format!("no action value for {:?}", b.name(i))))
        };
        for (y, x) in m.entries() {
            if value(src, x)? >= value(dst, y)? {
                return Err(Error::FiltrationViolated {
                    operator: name.to_string(),
                    from: src.name(x).to_string(),
                    to: dst.name(y).to_string(),
                });
            }
        }
        Ok(())
    }

    fn operators(&self) -> Vec<(String, &BitMatrix, Side, Side, i64)> {
        let ia = self.i_anti;
        let mut ops = vec![
            ("d_inv".to_string(), &self.d_inv, Side::Inv, Side::Inv, 1),
            ("d_non".to_string(), &self.d_non, Side::Non, Side::Non, 1),
            ("U".to_string(), &self.u, Side::Non, Side::Non, 1),
            ("D1".to_string(), &self.d1, Side::Non, Side::Inv, 1 - ia),
            ("D2".to_string(), &self.d2, Side::Inv, Side::Non, 1 + ia),
        ];
        for (k, m) in self.d1_higher.iter().enumerate() {
            ops.push((format!("D1^({k})"), m, Side::Non, Side::Inv, k as i64 + 1 - ia));
        }
        for (k, m) in self.x.iter().enumerate() {
            ops.push((format!("X^({k})"), m, Side::Inv, Side::Inv, k as i64 + 1));
        }
        for (k, m) in self.s1.iter().enumerate() {
            ops.push((format!("S1^({k})"), m, Side::Non, Side::Inv, k as i64 + 1 - ia));
        }
        ops
    }

    fn relation(&self, identity: &str, order: usize, diff: BitMatrix, from: Side, to: Side) -> Result<()> {
        let first = diff.entries().next();
        match first {
            None => Ok(()),
            Some((y, x)) => Err(Error::RelationViolated {
                identity: identity.to_string(),
                order,
                witness: format!("{} -> {}", self.basis(from).name(x), self.basis(to).name(y)),
            }),
        }
    }

    /// Checks degree contracts, every structural identity componentwise, the
    /// action filtration when present, and nilpotency of `U`.
    pub fn validate(&self) -> Result<DatumReport> {
        let mut checks = Vec::new();
        if self.i_anti < 0 {
            return Err(Error::InvalidComplex(format!("normal index {} is negative", self.i_anti)));
        }
        for (name, m, from, to, shift) in self.operators() {
            self.check_degree(&name, m, from, to, shift)?;
        }
        checks.push("degree contracts".to_string());

        use Side::{Inv, Non};
        let (d_inv, d_non, u, d1, d2) = (&self.d_inv, &self.d_non, &self.u, &self.d1, &self.d2);
        self.relation("d_inv d_inv = 0", 0, d_inv.mul(d_inv), Inv, Inv)?;
        self.relation("d_non d_non = 0", 0, d_non.mul(d_non), Non, Non)?;
        self.relation("d_inv D1 + D1 d_non = 0", 0, d_inv.mul(d1).add(&d1.mul(d_non)), Non, Inv)?;
        self.relation("d_non D2 + D2 d_inv = 0", 0, d_non.mul(d2).add(&d2.mul(d_inv)), Inv, Non)?;
        self.relation(
            "d_non U + U d_non = D2 D1",
            0,
            d_non.mul(u).add(&u.mul(d_non)).add(&d2.mul(d1)),
            Non,
            Non,
        )?;
        checks.push("total differential squares to zero".to_string());

        if let Some(first) = self.d1_higher.first() {
            self.relation("D1^(0) = D1", 0, first.add(d1), Non, Inv)?;
        }
        checks.push("D1^(0) = D1".to_string());

        for k in 0..=self.higher_len() {
            let (xk, dk, sk) = (self.x_at(k), self.d1_at(k), self.s1_at(k));
            self.relation(
                "d_inv X + X d_inv = D1 D2",
                k,
                d_inv.mul(&xk).add(&xk.mul(d_inv)).add(&dk.mul(d2)),
                Inv,
                Inv,
            )?;
            let rhs = dk.mul(u).add(&xk.mul(d1)).add(&self.d1_at(k + 1));
            self.relation(
                "d_inv S1 + S1 d_non = D1 U + X D1 + D1^(k+1)",
                k,
                d_inv.mul(&sk).add(&sk.mul(d_non)).add(&rhs),
                Non,
                Inv,
            )?;
        }
        checks.push("higher relations".to_string());

        let filtration_checked = match &self.action {
            Some(action) => {
                for (name, m, from, to, _) in self.operators() {
                    self.check_filtration(action, &name, m, from, to)?;
                }
                checks.push("action filtration".to_string());
                true
            }
            None => false,
        };

        let nilpotency_index = self
            .u
            .nilpotency_index()
            .ok_or_else(|| Error::NotNilpotent(format!("U^{} != 0", self.n_non())))?;
        checks.push("U nilpotent".to_string());

        Ok(DatumReport {
            checks,
            nilpotency_index,
            filtration_checked,
        })
    }
}

/// `C = C_non ⊕ C_non ⊕ C_inv[-i_anti]`, generator names prefixed `a:`,
/// `b:`, `c:`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub involutive: InvolutiveComplex,
    pub borel: BorelComplex,
}

pub fn total_basis(d: &LocalizationDatum) -> Result<GradedBasis> {
    let c = d.c_inv.shifted(d.i_anti);
    GradedBasis::concat(&[("a:", &d.c_non), ("b:", &d.c_non), ("c:", &c)])
}

/// Total Morse complex with differential
/// `[[d_non, 0, 0], [U, d_non, D2], [D1, 0, d_inv]]` and involution
/// `(a, b, c) -> (a, a + b, c)`.
pub fn assemble_total(d: &LocalizationDatum) -> Result<TotalComplex> {
    d.validate()?;
    let (nn, ni) = (d.n_non(), d.n_inv());
    let n = 2 * nn + ni;
    let (a0, b0, c0) = (0, nn, 2 * nn);
    let mut m = BitMatrix::zeros(n, n);
    let mut place = |src: &BitMatrix, r0: usize, c0: usize| {
        for (i, j) in src.entries() {
            m.toggle(r0 + i, c0 + j);
        }
    };
    place(&d.d_non, a0, a0);
    place(&d.u, b0, a0);
    place(&d.d_non, b0, b0);
    place(&d.d2, b0, c0);
    place(&d.d1, c0, a0);
    place(&d.d_inv, c0, c0);
    let mut iota = BitMatrix::identity(n);
    for i in 0..nn {
        iota.set(b0 + i, a0 + i, true);
    }
    let complex = GradedComplex::f2(total_basis(d)?, &m);
    let report = complex.verify_differential();
    if !report.passed() {
        return Err(Error::InvalidComplex(format!("total differential fails verification: {report:?}")));
    }
    let involutive = InvolutiveComplex::new(complex, iota)?;
    let borel = borel_from_involution(&involutive)?;
    Ok(TotalComplex { involutive, borel })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn real_line() -> LocalizationDatum {
        let mut d = LocalizationDatum::zero(
            GradedBasis::new([("γ", 0)]).unwrap(),
            GradedBasis::new([("β", 0)]).unwrap(),
            1,
        );
        d.d1.set(0, 0, true);
        d
    }

    #[test]
    fn zero_datum_passes() {
        let d = LocalizationDatum::zero(
            GradedBasis::new([("p", 0)]).unwrap(),
            GradedBasis::new([("e", 1)]).unwrap(),
            0,
        );
        assert!(d.validate().is_ok());
    }

    #[test]
    fn real_line_passes_and_total_is_a_point() {
        let d = real_line();
        d.validate().unwrap();
        let t = assemble_total(&d).unwrap();
        let dims = crate::complexes::cohomology_f2(&t.involutive.complex).unwrap();
        assert_eq!(dims.values().sum::<usize>(), 1);
    }

    #[test]
    fn spurious_x_is_a_degree_violation() {
        let mut d = real_line();
        let mut x = BitMatrix::zeros(1, 1);
        x.set(0, 0, true);
        d.x = vec![x];
        assert!(matches!(d.validate(), Err(Error::DegreeViolated { .. })));
    }

    #[test]
    fn missing_higher_term_is_reported() {
        // D1 U must be matched by D1^(1) when S1 = X = 0.
        let mut d = LocalizationDatum::zero(
            GradedBasis::new([("c", 2)]).unwrap(),
            GradedBasis::new([("m", 0), ("s", 1)]).unwrap(),
            0,
        );
        d.u.set(1, 0, true);
        d.d1.set(0, 1, true);
        match d.validate() {
            Err(Error::RelationViolated { order, .. }) => assert_eq!(order, 0),
            other => panic!("unexpected {other:?}"),
        }
        let mut fixed = d.clone();
        let mut h = BitMatrix::zeros(1, 2);
        h.set(0, 0, true);
        fixed.d1_higher = vec![d.d1.clone(), h];
        fixed.validate().unwrap();
    }
}
