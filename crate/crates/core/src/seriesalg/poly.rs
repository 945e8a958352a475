//! Exact polynomials over F2 in the variable q.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Gf2Poly {
            words: vec![0; k / 64 + 1],
        };
        p.words[k / 64] |= 1 << (k % 64);
        p
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut p = Gf2Poly::zero();
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                p.toggle(i);
            }
        }
        p
    }

    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Gf2Poly::zero();
        for e in exps {
            p.toggle(e);
        }
        p
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn toggle(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.trim();
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        let w = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|k| k * 64 + self.words[k].trailing_zeros() as usize)
    }

    pub fn exponents(&self) -> Vec<usize> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).filter(|&i| self.coeff(i)).collect(),
        }
    }

    /// Single monomial exponent, if the polynomial is a monomial.
    pub fn monomial_exponent(&self) -> Option<usize> {
        let v = self.valuation()?;
        (Some(v) == self.degree()).then_some(v)
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let n = self.words.len().max(other.words.len());
        let mut words = vec![0u64; n];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Gf2Poly::zero();
        };
        let mut words = vec![0u64; (da + db) / 64 + 1];
        for i in self.exponents() {
            for (k, &w) in other.words.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                let shift = i + k * 64;
                let (q, r) = (shift / 64, shift % 64);
                words[q] ^= w << r;
                if r != 0 && q + 1 < words.len() {
                    words[q + 1] ^= w >> (64 - r);
                }
            }
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    pub fn shl(&self, k: usize) -> Gf2Poly {
        Gf2Poly::from_exponents(self.exponents().into_iter().map(|e| e + k))
    }

    pub fn pow(&self, k: usize) -> Gf2Poly {
        let mut out = Gf2Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = Gf2Poly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let s = dr - dd;
            quo.toggle(s);
            rem = rem.add(&divisor.shl(s));
        }
        (quo, rem)
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a
    }

    /// Parses `"1+q^2"`-style text.
    pub fn parse_text(text: &str) -> Result<Gf2Poly> {
        let (shift, p) = parse_laurent_text(text)?;
        if shift < 0 {
            return Err(Error::parse("", format!("negative exponent in {text:?}")));
        }
        Ok(p.shl(shift as usize))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.coeff(i) as u8).collect(),
        }
    }
}

/// Parses text like `"q^-1 + 1 + q^3"` into `(shift, p)` meaning `q^shift * p`
/// with `p(0) = 1` unless the value is zero.
pub fn parse_laurent_text(text: &str) -> Result<(i64, Gf2Poly)> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::parse("", "empty polynomial"));
    }
    let mut exps: Vec<i64> = Vec::new();
    for term in cleaned.split('+') {
        let e = match term {
            "0" => continue,
            "1" => 0,
            "q" => 1,
            t if t.starts_with("q^") => t[2..]
                .trim_start_matches('(')
                .trim_end_matches(')')
                .parse::<i64>()
                .map_err(|_| Error::parse("", format!("bad exponent in term {t:?}")))?,
            t => return Err(Error::parse("", format!("unrecognised term {t:?}"))),
        };
        exps.push(e);
    }
    let lo = exps.iter().copied().min().unwrap_or(0);
    let p = Gf2Poly::from_exponents(exps.iter().map(|&e| (e - lo) as usize));
    if p.is_zero() {
        return Ok((0, p));
    }
    let v = p.valuation().unwrap_or(0);
    let body = Gf2Poly::from_exponents(p.exponents().into_iter().map(|e| e - v));
    Ok((lo + v as i64, body))
}

pub(crate) fn format_terms(exps: impl IntoIterator<Item = i64>) -> String {
    let parts: Vec<String> = exps
        .into_iter()
        .map(|e| match e {
            0 => "1".to_string(),
            1 => "q".to_string(),
            e => format!("q^{e}"),
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.exponents().into_iter().map(|e| e as i64)))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl PartialOrd for Gf2Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Gf2Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}
