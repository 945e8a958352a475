use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::field::Field;
use super::poly::Poly;

/// The curve `f(x) + y^2 = 0` with `f` monic of degree `2m` and centred.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveData<F: Field> {
    pub m: usize,
    pub f: Poly<F>,
}

impl<F: Field> CurveData<F> {
    pub fn new(f: Poly<F>) -> Result<Self> {
        let deg = f.degree().unwrap_or(0);
        if deg == 0 || deg % 2 == 1 || !f.is_monic() {
            return Err(Error::InvariantViolated(format!("f = {f} is not monic of even positive degree")));
        }
        if !f.field().is_zero(&f.coeff(deg - 1)) {
            return Err(Error::InvariantViolated(format!("f = {f} is not centred")));
        }
        Ok(CurveData { m: deg / 2, f })
    }

    pub fn field(&self) -> &F {
        self.f.field()
    }

    pub fn is_squarefree(&self) -> bool {
        self.f.gcd(&self.f.derivative()).degree() == Some(0)
    }

    fn require_squarefree(&self) -> Result<()> {
        if self.is_squarefree() {
            Ok(())
        } else {
            Err(Error::InvariantViolated(format!("f = {} has a repeated root", self.f)))
        }
    }

    /// `-f(x)`, the value `y^2` must take.
    pub fn y_squared(&self, x: &F::Elem) -> F::Elem {
        self.field().neg(&self.f.eval(x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DivisorPoint<E> {
    pub x: E,
    pub y: E,
    pub mult: usize,
}

/// Effective divisor on the curve, points sorted by `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor<F: Field> {
    pub points: Vec<DivisorPoint<F::Elem>>,
}

impl<F: Field> Divisor<F> {
    /// Merges repeated points and sorts.
    pub fn new(points: impl IntoIterator<Item = DivisorPoint<F::Elem>>) -> Self {
        let mut merged: BTreeMap<(F::Elem, F::Elem), usize> = BTreeMap::new();
        for p in points {
            *merged.entry((p.x, p.y)).or_default() += p.mult;
        }
        Divisor {
            points: merged
                .into_iter()
                .filter(|(_, m)| *m > 0)
                .map(|((x, y), mult)| DivisorPoint { x, y, mult })
                .collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.points.iter().map(|p| p.mult).sum()
    }

    /// Curve membership, total multiplicity, and the image condition: no
    /// fibre `(x, y) + (x, -y)`, so a Weierstrass point appears at most once.
    pub fn check(&self, c: &CurveData<F>) -> Result<()> {
        let f = c.field();
        for p in &self.points {
            if f.mul(&p.y, &p.y) != c.y_squared(&p.x) {
                return Err(Error::InvariantViolated(format!(
                    "({}, {}) is not on the curve",
                    f.format(&p.x),
                    f.format(&p.y)
                )));
            }
            if f.is_zero(&p.y) && p.mult > 1 {
                return Err(Error::HyperellipticFibre(format!(
                    "Weierstrass point x = {} has multiplicity {}",
                    f.format(&p.x),
                    p.mult
                )));
            }
        }
        for w in self.points.windows(2) {
            if w[0].x == w[1].x {
                return Err(Error::HyperellipticFibre(format!(
                    "both points over x = {} are present",
                    f.format(&w[0].x)
                )));
            }
        }
        if self.degree() != c.m {
            return Err(Error::InvariantViolated(format!(
                "divisor has degree {} but m = {}",
                self.degree(),
                c.m
            )));
        }
        Ok(())
    }
}

/// `(U, V, W)` with `A(x) = [[W, V], [V, U]]` and `UW - V^2 = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MumfordTriple<F: Field> {
    pub u: Poly<F>,
    pub v: Poly<F>,
    pub w: Poly<F>,
}

impl<F: Field> MumfordTriple<F> {
    pub fn check(&self, c: &CurveData<F>) -> Result<()> {
        let m = c.m;
        let f = c.field();
        if self.u.degree() != Some(m) || !self.u.is_monic() || self.w.degree() != Some(m) || !self.w.is_monic() {
            return Err(Error::InvariantViolated(format!("U and W must be monic of degree {m}")));
        }
        if self.v.degree().is_some_and(|d| d + 1 > m) {
            return Err(Error::InvariantViolated(format!("deg V must be at most {}", m - 1)));
        }
        if !f.is_zero(&f.add(&self.u.coeff(m - 1), &self.w.coeff(m - 1))) {
            return Err(Error::InvariantViolated("subleading coefficients of U and W do not cancel".into()));
        }
        let lhs = self.u.mul(&self.w).sub(&self.v.mul(&self.v));
        if lhs != c.f {
            return Err(Error::InvariantViolated(format!("UW - V^2 = {lhs}, expected {}", c.f)));
        }
        Ok(())
    }
}

/// First `k` Taylor coefficients at `x0` of the branch of `sqrt(-f)` with
/// value `y0`, from `s^2 = -f(x0 + t)` solved term by term.
fn branch<F: Field>(c: &CurveData<F>, x0: &F::Elem, y0: &F::Elem, k: usize) -> Result<Vec<F::Elem>> {
    let f = c.field();
    let g: Vec<F::Elem> = c.f.taylor(x0).iter().map(|a| f.neg(a)).collect();
    let at = |j: usize| g.get(j).cloned().unwrap_or_else(|| f.zero());
    let mut s = vec![y0.clone()];
    if k > 1 {
        let two_y = f.add(y0, y0);
        let inv = f
            .inv(&two_y)
            .ok_or_else(|| Error::HyperellipticFibre("repeated point with y = 0".into()))?;
        for j in 1..k {
            let mut acc = at(j);
            for i in 1..j {
                acc = f.sub(&acc, &f.mul(&s[i], &s[j - i]));
            }
            s.push(f.mul(&acc, &inv));
        }
    }
    Ok(s)
}

/// `(U, V, W)` of a divisor: `U = ∏ (x - x_i)^{m_i}`, `V` the Hermite
/// interpolant of the branches through the points, `W = (f + V^2) / U`.
pub fn divisor_to_uvw<F: Field>(c: &CurveData<F>, d: &Divisor<F>) -> Result<MumfordTriple<F>> {
    d.check(c)?;
    c.require_squarefree()?;
    let f = c.field().clone();
    let mut u = Poly::constant(f.clone(), 1);
    let mut v = Poly::zero(f.clone());
    for p in &d.points {
        let s = branch(c, &p.x, &p.y, p.mult)?;
        // Local target in x: Σ s_j (x - x0)^j.
        let lin = Poly::new(f.clone(), vec![f.neg(&p.x), f.one()]);
        let mut target = Poly::zero(f.clone());
        let mut pow = Poly::constant(f.clone(), 1);
        for sj in &s {
            target = target.add(&pow.scale(sj));
            pow = pow.mul(&lin);
        }
        let modulus = pow;
        // Chinese remainder step: v + u·((target - v)·u^{-1} mod modulus).
        let u_inv = u
            .inv_mod(&modulus)
            .ok_or_else(|| Error::HyperellipticFibre("points share an x-coordinate".into()))?;
        let corr = target.sub(&v).mul(&u_inv).rem(&modulus);
        v = v.add(&u.mul(&corr));
        u = u.mul(&modulus);
    }
    let (w, rem) = c.f.add(&v.mul(&v)).div_rem(&u);
    if !rem.is_zero() {
        return Err(Error::InvariantViolated(format!("U does not divide f + V^2 (remainder {rem})")));
    }
    let t = MumfordTriple { u, v, w };
    t.check(c)?;
    Ok(t)
}

/// The divisor cut out by `(U(x), y - V(x))`.
pub fn uvw_to_divisor<F: Field>(c: &CurveData<F>, t: &MumfordTriple<F>) -> Result<Divisor<F>> {
    t.check(c)?;
    let f = c.field();
    let roots = f.roots(&t.u);
    let points: Vec<DivisorPoint<F::Elem>> = roots
        .into_iter()
        .map(|x| DivisorPoint {
            mult: t.u.root_multiplicity(&x),
            y: t.v.eval(&x),
            x,
        })
        .collect();
    let d = Divisor::new(points);
    if d.degree() != c.m {
        return Err(Error::DoesNotSplit(format!("U = {} over {}", t.u, f.name())));
    }
    d.check(c)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::super::field::{PrimeField, Rationals};
    use super::*;

    fn q(c: &[i64]) -> Poly<Rationals> {
        Poly::new(Rationals, c.iter().map(|&n| Rationals.from_i64(n)).collect())
    }

    fn pt(x: i64, y: i64, mult: usize) -> DivisorPoint<num_rational::BigRational> {
        DivisorPoint {
            x: Rationals.from_i64(x),
            y: Rationals.from_i64(y),
            mult,
        }
    }

    #[test]
    fn degree_one() {
        let c = CurveData::new(q(&[-1, 0, 1])).unwrap();
        let t = divisor_to_uvw(&c, &Divisor::new([pt(0, 1, 1)])).unwrap();
        assert_eq!((t.u.clone(), t.v.clone(), t.w.clone()), (q(&[0, 1]), q(&[1]), q(&[0, 1])));
        assert_eq!(uvw_to_divisor(&c, &t).unwrap(), Divisor::new([pt(0, 1, 1)]));
    }

    #[test]
    fn two_weierstrass_points() {
        let c = CurveData::new(q(&[4, 0, -5, 0, 1])).unwrap();
        let d = Divisor::new([pt(1, 0, 1), pt(2, 0, 1)]);
        let t = divisor_to_uvw(&c, &d).unwrap();
        assert_eq!(t.u, q(&[2, -3, 1]));
        assert!(t.v.is_zero());
        assert_eq!(t.w, q(&[2, 3, 1]));
        assert_eq!(uvw_to_divisor(&c, &t).unwrap(), d);
    }

    #[test]
    fn double_point_uses_branch_derivative() {
        let c = CurveData::new(q(&[-4, 0, -5, 0, 1])).unwrap();
        let t = divisor_to_uvw(&c, &Divisor::new([pt(0, 2, 2)])).unwrap();
        assert_eq!((t.u.clone(), t.v.clone(), t.w.clone()), (q(&[0, 0, 1]), q(&[2]), q(&[-5, 0, 1])));
        assert_eq!(uvw_to_divisor(&c, &t).unwrap(), Divisor::new([pt(0, 2, 2)]));
    }

    #[test]
    fn fibres_are_rejected() {
        let c = CurveData::new(q(&[-4, 0, -5, 0, 1])).unwrap();
        let fibre = Divisor::new([pt(0, 2, 1), pt(0, -2, 1)]);
        assert!(matches!(divisor_to_uvw(&c, &fibre), Err(Error::HyperellipticFibre(_))));
        let c = CurveData::new(q(&[4, 0, -5, 0, 1])).unwrap();
        let doubled = Divisor::new([pt(1, 0, 2)]);
        assert!(matches!(divisor_to_uvw(&c, &doubled), Err(Error::HyperellipticFibre(_))));
    }

    #[test]
    fn irreducible_u_does_not_split_over_q() {
        let c = CurveData::new(q(&[-1, 0, 0, 0, 1])).unwrap();
        let t = MumfordTriple {
            u: q(&[1, 0, 1]),
            v: q(&[]),
            w: q(&[-1, 0, 1]),
        };
        assert!(matches!(uvw_to_divisor(&c, &t), Err(Error::DoesNotSplit(_))));
    }

    #[test]
    fn round_trip_mod_p() {
        let f = PrimeField::new(101).unwrap();
        // f = (x^2 - 1)(x^2 - 4) over F_101.
        let curve = CurveData::new(Poly::from_roots(f, &[1, 100, 2, 99])).unwrap();
        let points: Vec<_> = (0..101u64)
            .filter_map(|x| f.sqrt(curve.y_squared(&x)).filter(|&y| y != 0).map(|y| (x, y)))
            .take(2)
            .collect();
        let d = Divisor::new(points.iter().map(|&(x, y)| DivisorPoint { x, y, mult: 1 }));
        let t = divisor_to_uvw(&curve, &d).unwrap();
        assert_eq!(uvw_to_divisor(&curve, &t).unwrap(), d);
    }
}
