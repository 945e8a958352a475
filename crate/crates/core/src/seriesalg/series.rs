//! Truncated power series over F2.

use std::fmt;

use super::poly::{format_terms, Gf2Poly};
use crate::error::{Error, Result};

/// A power series known modulo `q^precision`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    words: Vec<u64>,
    precision: usize,
}

impl QSeries {
    pub fn zero(precision: usize) -> Self {
        QSeries {
            words: vec![0; precision.div_ceil(64)],
            precision,
        }
    }

    pub fn one(precision: usize) -> Self {
        Self::monomial(0, precision)
    }

    /// `q^k`; zero if `k >= precision`.
    pub fn monomial(k: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if k < precision {
            s.set(k, true);
        }
        s
    }

    pub fn from_bits(bits: &[bool], precision: usize) -> Self {
        let mut s = Self::zero(precision);
        for (i, &b) in bits.iter().enumerate().take(precision) {
            s.set(i, b);
        }
        s
    }

    pub fn from_poly(p: &Gf2Poly, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        for e in p.exponents() {
            if e < precision {
                s.set(e, true);
            }
        }
        s
    }

    pub fn parse(text: &str, precision: usize) -> Result<Self> {
        Ok(Self::from_poly(&Gf2Poly::parse_text(text)?, precision))
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn coeff(&self, i: usize) -> bool {
        assert!(i < self.precision, "coefficient {i} beyond precision {}", self.precision);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    fn set(&mut self, i: usize, b: bool) {
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest nonzero exponent, or `None` if zero at this precision.
    pub fn valuation(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|k| k * 64 + self.words[k].trailing_zeros() as usize)
    }

    /// The known coefficients as an exact polynomial.
    pub fn to_poly(&self) -> Gf2Poly {
        Gf2Poly::from_bits((0..self.precision).map(|i| self.coeff(i)))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.precision).map(|i| self.coeff(i) as u8).collect()
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let p = precision.min(self.precision);
        let mut s = Self::zero(p);
        for i in 0..p {
            s.set(i, self.coeff(i));
        }
        s
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let p = self.precision.min(other.precision);
        let mut s = self.truncate(p);
        for (k, w) in s.words.iter_mut().enumerate() {
            *w ^= other.words[k];
        }
        s.mask();
        s
    }

    fn mask(&mut self) {
        let r = self.precision % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let p = self.precision.min(other.precision);
        let mut s = Self::zero(p);
        for i in 0..p {
            if !self.coeff(i) {
                continue;
            }
            for j in 0..p - i {
                if other.coeff(j) {
                    let cur = s.coeff(i + j);
                    s.set(i + j, !cur);
                }
            }
        }
        s
    }

    /// Multiplication by `q^k`; precision grows by `k`.
    pub fn shift(&self, k: usize) -> QSeries {
        let mut s = Self::zero(self.precision + k);
        for i in 0..self.precision {
            if self.coeff(i) {
                s.set(i + k, true);
            }
        }
        s
    }

    /// Exact division by `q^k`. Fails if a coefficient below `k` is nonzero or
    /// unknown.
    pub fn unshift(&self, k: usize) -> Result<QSeries> {
        if k > self.precision {
            return Err(Error::PrecisionExhausted(format!(
                "cannot divide by q^{k} at precision {}",
                self.precision
            )));
        }
        if (0..k).any(|i| self.coeff(i)) {
            return Err(Error::InvariantViolated(format!("{self} is not divisible by q^{k}")));
        }
        let mut s = Self::zero(self.precision - k);
        for i in k..self.precision {
            s.set(i - k, self.coeff(i));
        }
        Ok(s)
    }

    /// `∂_q`: drops the constant term and divides by `q`.
    pub fn dq(&self) -> Result<QSeries> {
        if self.precision == 0 {
            return Err(Error::PrecisionExhausted("d/dq of a series with precision 0".into()));
        }
        let mut s = Self::zero(self.precision - 1);
        for i in 1..self.precision {
            s.set(i - 1, self.coeff(i));
        }
        Ok(s)
    }

    /// `|_{q=0}`: the constant term as a series of the same precision.
    pub fn restrict_q0(&self) -> Result<QSeries> {
        if self.precision == 0 {
            return Err(Error::PrecisionExhausted("restriction of a series with precision 0".into()));
        }
        let mut s = Self::zero(self.precision);
        s.set(0, self.coeff(0));
        Ok(s)
    }

    pub fn is_unit(&self) -> bool {
        self.precision > 0 && self.coeff(0)
    }

    /// Inverse of a unit, at the same precision.
    pub fn inverse(&self) -> Option<QSeries> {
        if !self.is_unit() {
            return None;
        }
        let p = self.precision;
        let mut inv = Self::zero(p);
        inv.set(0, true);
        // (a * inv)_n = 0 for n >= 1 determines inv_n from lower terms.
        for n in 1..p {
            let mut acc = false;
            for i in 1..=n {
                acc ^= self.coeff(i) & inv.coeff(n - i);
            }
            inv.set(n, acc);
        }
        Some(inv)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps = (0..self.precision).filter(|&i| self.coeff(i)).map(|i| i as i64);
        write!(f, "{} + O(q^{})", format_terms(exps), self.precision)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str, p: usize) -> QSeries {
        QSeries::parse(t, p).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert!(s("1+q", 8).add(&s("1+q", 8)).is_zero());
        assert_eq!(s("1+q", 8).mul(&s("1+q", 8)), s("1+q^2", 8));
        // (1+q)(1+q+q^2+...) = 1 up to precision
        let geo = QSeries::from_bits(&[true; 8], 8);
        assert_eq!(s("1+q", 8).mul(&geo), QSeries::one(8));
        assert_eq!(s("1+q", 8).inverse().unwrap(), geo);
    }

    #[test]
    fn precision_is_min_of_operands() {
        let a = s("1+q", 5);
        let b = s("q", 9);
        assert_eq!(a.add(&b).precision(), 5);
        assert_eq!(a.mul(&b).precision(), 5);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(s("1+q+q^3", 6).dq().unwrap(), s("1+q^2", 5));
        assert!(s("1", 6).dq().unwrap().is_zero());
        assert!(QSeries::zero(0).dq().is_err());
        let x = s("1+q^2", 6);
        let back = x.dq().unwrap().shift(1).add(&x.restrict_q0().unwrap());
        assert_eq!(back, x);
    }

    #[test]
    fn restriction_examples() {
        assert_eq!(s("1+q+q^2", 4).restrict_q0().unwrap(), s("1", 4));
        assert!(s("q^3", 4).restrict_q0().unwrap().is_zero());
        assert!(QSeries::zero(0).restrict_q0().is_err());
    }

    #[test]
    fn restriction_plus_q_dq_is_identity_exhaustively() {
        // every polynomial of degree <= 8, at precision 9
        for bits in 0u32..(1 << 9) {
            let x = QSeries::from_bits(&(0..9).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>(), 9);
            let lhs = x.dq().unwrap().shift(1).add(&x.restrict_q0().unwrap());
            assert_eq!(lhs, x);
        }
    }

    #[test]
    fn unshift_checks_divisibility() {
        assert_eq!(s("q^2+q^3", 6).unshift(2).unwrap(), s("1+q", 4));
        assert!(s("q+q^3", 6).unshift(2).is_err());
    }
}
