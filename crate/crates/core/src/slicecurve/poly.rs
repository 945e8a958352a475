use std::fmt;

use super::field::Field;

/// Dense polynomial over an exact field, ascending coefficients with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<F: Field> {
    field: F,
    c: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: F, mut c: Vec<F::Elem>) -> Self {
        while c.last().is_some_and(|a| field.is_zero(a)) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn zero(field: F) -> Self {
        Poly { field, c: Vec::new() }
    }

    pub fn constant(field: F, n: i64) -> Self {
        let c = vec![field.from_i64(n)];
        Poly::new(field, c)
    }

    pub fn x(field: F) -> Self {
        let c = vec![field.zero(), field.one()];
        Poly::new(field, c)
    }

    /// `∏ (x - r)` over the listed roots, with repetition.
    pub fn from_roots(field: F, roots: &[F::Elem]) -> Self {
        let mut p = Poly::constant(field.clone(), 1);
        for r in roots {
            let lin = Poly::new(field.clone(), vec![field.neg(r), field.one()]);
            p = p.mul(&lin);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|a| *a == self.field.one())
    }

    pub fn lead(&self) -> F::Elem {
        self.c.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn scale(&self, a: &F::Elem) -> Self {
        let c = self.c.iter().map(|x| self.field.mul(x, a)).collect();
        Poly::new(self.field.clone(), c)
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(&self.lead()) {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.field.add(&self.coeff(i), &o.coeff(i))).collect();
        Poly::new(self.field.clone(), c)
    }

    pub fn neg(&self) -> Self {
        let c = self.c.iter().map(|x| self.field.neg(x)).collect();
        Poly::new(self.field.clone(), c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field.clone());
        }
        let f = &self.field;
        let mut c = vec![f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f.clone(), c)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let li = f.inv(&d.lead()).expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(f.clone()), self.clone());
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = f.mul(&r[k + dd], &li);
            if f.is_zero(&t) {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] = f.sub(&r[k + j], &f.mul(&t, b));
            }
            q[k] = t;
        }
        r.truncate(dd);
        (Poly::new(f.clone(), q), Poly::new(f.clone(), r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd; zero only if both inputs are zero.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` the monic gcd.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = self.field.clone();
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::constant(f.clone(), 1), Poly::zero(f.clone()));
        let (mut t0, mut t1) = (Poly::zero(f.clone()), Poly::constant(f.clone(), 1));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        match f.inv(&r0.lead()) {
            Some(i) => (r0.scale(&i), s0.scale(&i), t0.scale(&i)),
            None => (r0, s0, t0),
        }
    }

    /// Inverse modulo `m`, when coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.ext_gcd(m);
        (g.degree() == Some(0)).then(|| s.rem(m))
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.field.clone(), 1).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.c.iter().rev().fold(f.zero(), |acc, a| f.add(&f.mul(&acc, x), a))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(&f.from_i64(i as i64), a))
            .collect();
        Poly::new(f.clone(), c)
    }

    /// Coefficients of `p(a + t)` in `t`, by repeated synthetic division.
    pub fn taylor(&self, a: &F::Elem) -> Vec<F::Elem> {
        let f = &self.field;
        let mut c = self.c.clone();
        let n = c.len();
        for k in 0..n {
            for i in (k..n - 1).rev() {
                c[i] = f.add(&c[i], &f.mul(a, &c[i + 1]));
            }
        }
        c
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &F::Elem) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = Poly::new(self.field.clone(), vec![self.field.neg(r), self.field.one()]);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    pub fn format_coeffs(&self) -> Vec<String> {
        self.c.iter().map(|a| self.field.format(a)).collect()
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return out.write_str("0");
        }
        let f = &self.field;
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if f.is_zero(a) {
                continue;
            }
            let text = f.format(a);
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            if first {
                if neg {
                    out.write_str("-")?;
                }
            } else {
                out.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                out.write_str(&mag)?;
            } else if mag == "1" {
                out.write_str(&var)?;
            } else {
                write!(out, "{mag}{var}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::{PrimeField, Rationals};
    use super::*;

    fn q(c: &[i64]) -> Poly<Rationals> {
        Poly::new(Rationals, c.iter().map(|&n| Rationals.from_i64(n)).collect())
    }

    #[test]
    fn division_identity() {
        let a = q(&[4, 0, -5, 0, 1]);
        let b = q(&[2, -3, 1]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq.mul(&b).add(&r), a);
        assert_eq!(qq, q(&[2, 3, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn ext_gcd_bezout() {
        let f = PrimeField::new(101).unwrap();
        let a = Poly::from_roots(f, &[1, 2, 3]);
        let b = Poly::from_roots(f, &[3, 4]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, Poly::from_roots(f, &[3]));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn taylor_shift() {
        // x^2 at 1 + t is 1 + 2t + t^2.
        let t = q(&[0, 0, 1]).taylor(&Rationals.from_i64(1));
        assert_eq!(t, vec![Rationals.from_i64(1), Rationals.from_i64(2), Rationals.from_i64(1)]);
    }

    #[test]
    fn display() {
        assert_eq!(q(&[2, -3, 1]).to_string(), "x^2 - 3x + 2");
        assert_eq!(q(&[-1, 0, 1]).to_string(), "x^2 - 1");
        assert_eq!(q(&[]).to_string(), "0");
    }
}
