//! Truncated Laurent series over F2.

use std::fmt;

use super::series::QSeries;

/// `q^valuation * body` with `body(0) = 1`, or zero (valuation 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QLaurent {
    valuation: i64,
    body: QSeries,
}

impl QLaurent {
    pub fn zero(precision: usize) -> Self {
        QLaurent {
            valuation: 0,
            body: QSeries::zero(precision),
        }
    }

    /// Normalizes `q^shift * s`.
    pub fn new(shift: i64, s: &QSeries) -> Self {
        match s.valuation() {
            None => QLaurent::zero(s.precision()),
            Some(v) => QLaurent {
                valuation: shift + v as i64,
                body: s.unshift(v).expect("valuation divides"),
            },
        }
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn body(&self) -> &QSeries {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Absolute precision: terms of order `>= valuation + body precision` are unknown.
    pub fn absolute_precision(&self) -> i64 {
        self.valuation + self.body.precision() as i64
    }

    pub fn coeff(&self, e: i64) -> bool {
        if e < self.valuation {
            return false;
        }
        let k = (e - self.valuation) as usize;
        k < self.body.precision() && self.body.coeff(k)
    }

    pub fn add(&self, other: &QLaurent) -> QLaurent {
        if self.is_zero() && other.is_zero() {
            return QLaurent::zero(self.body.precision().min(other.body.precision()));
        }
        let lo = self.valuation.min(other.valuation);
        let top = self.absolute_precision().min(other.absolute_precision());
        let len = (top - lo).max(0) as usize;
        let bits: Vec<bool> = (0..len)
            .map(|k| self.coeff(lo + k as i64) ^ other.coeff(lo + k as i64))
            .collect();
        QLaurent::new(lo, &QSeries::from_bits(&bits, len))
    }

    pub fn mul(&self, other: &QLaurent) -> QLaurent {
        let body = self.body.mul(&other.body);
        if body.is_zero() {
            return QLaurent::zero(body.precision());
        }
        QLaurent::new(self.valuation + other.valuation, &body)
    }

    pub fn inverse(&self) -> Option<QLaurent> {
        let inv = self.body.inverse()?;
        Some(QLaurent {
            valuation: -self.valuation,
            body: inv,
        })
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "q^{}*({})", self.valuation, self.body)
    }
}
