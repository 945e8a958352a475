//! Exact fields for the curve computations: F_p for odd primes below 2^61
//! and the rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::io::rational;

use super::poly::Poly;

pub trait Field: Clone + Debug + PartialEq {
    type Elem: Clone + Debug + PartialEq + Eq + Ord;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Parses `n` or `a/b`.
    fn parse(&self, text: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    /// Distinct roots in the field of a nonzero polynomial, sorted.
    fn roots(&self, p: &Poly<Self>) -> Vec<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|i| self.mul(a, &i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// The field F_p; `p` must be an odd prime below 2^61.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::FieldMismatch("characteristic 2 has no nontrivial y -> -y".into()));
        }
        if p >= 1 << 61 || !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::FieldMismatch(format!("{p} is not a prime below 2^61")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let (mut base, mut acc) = (a % self.p, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// A square root by Tonelli–Shanks, when one exists.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.pow(a, (p - 1) / 2) != 1 {
            return None;
        }
        let (mut q, mut s) = (p - 1, 0u32);
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| self.pow(z, (p - 1) / 2) == p - 1)?;
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }

    fn reduce(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits")
    }

    /// `h` split into linear factors, given that it is a product of
    /// distinct linear factors.
    fn split_linear(&self, h: &Poly<Self>, out: &mut Vec<u64>) {
        match h.degree() {
            None | Some(0) => {}
            Some(1) => {
                let m = h.monic();
                out.push(self.neg(&m.coeff(0)));
            }
            Some(_) => {
                let x = Poly::x(*self);
                let one = Poly::constant(*self, 1);
                // Equal-degree splitting with the shifts x + a for a = 0, 1, ...
                for a in 0..self.p {
                    let shifted = x.add(&Poly::constant(*self, a as i64));
                    let g = shifted.pow_mod((self.p - 1) / 2, h).sub(&one).gcd(h);
                    if let Some(d) = g.degree() {
                        if d > 0 && Some(d) != h.degree() {
                            let (rest, _) = h.div_rem(&g);
                            self.split_linear(&g, out);
                            self.split_linear(&rest, out);
                            return;
                        }
                    }
                }
                // Unreachable for squarefree split input over an odd field.
                if self.p < 16 {
                    out.extend((0..self.p).filter(|&r| h.eval(&r) == 0));
                }
            }
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        (!(*a).is_multiple_of(self.p)).then(|| self.pow(*a, self.p - 2))
    }

    fn parse(&self, text: &str) -> Result<u64> {
        let r = rational::parse(text).ok_or_else(|| Error::parse("field element", format!("not a number: {text:?}")))?;
        let den = self.reduce(r.denom());
        let inv = self
            .inv(&den)
            .ok_or_else(|| Error::FieldMismatch(format!("{text} has a denominator divisible by {}", self.p)))?;
        Ok(self.mul(&self.reduce(r.numer()), &inv))
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }

    fn name(&self) -> String {
        format!("F_{}", self.p)
    }

    fn roots(&self, p: &Poly<Self>) -> Vec<u64> {
        if p.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let x = Poly::x(*self);
        let frob = x.pow_mod(self.p, p).sub(&x.rem(p));
        let split = frob.gcd(p);
        let mut out = Vec::new();
        self.split_linear(&split, &mut out);
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn parse(&self, text: &str) -> Result<BigRational> {
        rational::parse(text).ok_or_else(|| Error::parse("field element", format!("not a rational: {text:?}")))
    }

    fn format(&self, a: &BigRational) -> String {
        rational::format(a)
    }

    fn name(&self) -> String {
        "Q".into()
    }

    /// Rational root theorem on the primitive integer multiple.
    fn roots(&self, p: &Poly<Self>) -> Vec<BigRational> {
        let Some(deg) = p.degree() else {
            return Vec::new();
        };
        let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * &lcm).to_integer()).collect();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        let mut out = Vec::new();
        if low > 0 {
            out.push(BigRational::zero());
        }
        if low < deg {
            let (a0, an) = (&ints[low], &ints[deg]);
            for num in divisors(a0) {
                for den in divisors(an) {
                    for sign in [1, -1] {
                        let r = BigRational::new(&num * sign, den.clone());
                        if p.eval(&r).is_zero() {
                            out.push(r);
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_checks() {
        assert!(PrimeField::new(101).is_ok());
        assert!(matches!(PrimeField::new(2), Err(Error::FieldMismatch(_))));
        assert!(matches!(PrimeField::new(91), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn square_roots_mod_p() {
        for p in [101u64, 103, 65537, 2305843009213693951] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..200u64 {
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.mul(&r, &r), a % p);
                }
            }
        }
    }

    #[test]
    fn parse_into_fp() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), 4);
        assert_eq!(f.parse("-1").unwrap(), 6);
        assert!(matches!(f.parse("1/14"), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn roots_of_products() {
        let f = PrimeField::new(101).unwrap();
        let p = Poly::from_roots(f, &[3, 3, 50, 77]);
        assert_eq!(f.roots(&p), vec![3, 50, 77]);
        let irreducible = Poly::new(f, vec![2, 0, 1]);
        assert!(f.roots(&irreducible).is_empty() == f.sqrt(99).is_none());
        let q = Rationals;
        let r = |s: &str| q.parse(s).unwrap();
        let p = Poly::from_roots(q, &[r("1/2"), r("-3"), r("0")]);
        assert_eq!(q.roots(&p), vec![r("-3"), r("0"), r("1/2")]);
    }
}
