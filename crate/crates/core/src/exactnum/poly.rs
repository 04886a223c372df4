//! Univariate polynomials and rational functions over the rationals, used for
//! symbolic Möbius values.

use num_traits::{One, Zero};

use super::Rational;

/// Dense polynomial, coefficients from low to high degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }
    pub fn zero() -> Self {
        Poly(Vec::new())
    }
    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }
    /// `a t + b`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Poly::new(vec![b, a])
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }
    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }
    fn lead(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
    /// Euclidean division; `d` must be nonzero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead();
        let mut r = self.clone();
        let mut q = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let f = r.lead() / &lead;
            q[rd - dd] = f.clone();
            let mut shifted = vec![Rational::zero(); rd - dd];
            shifted.extend(d.0.iter().map(|c| c * &f));
            r = r.sub(&Poly::new(shifted));
        }
        (Poly::new(q), r)
    }
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }
    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}

/// Reduced rational function with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let g = num.gcd(&den);
        let g = if g.is_zero() { Poly::constant(Rational::one()) } else { g };
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let lc = d.lead();
        Some(RatFunc { num: n.scale(&lc.recip()), den: d.scale(&lc.recip()) })
    }
    pub fn constant(c: Rational) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::constant(Rational::one()) }
    }
    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den)).unwrap()
    }
    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        RatFunc::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn gcd_and_cancellation() {
        // (t+1)(t+2) / (t+1)
        let a = Poly::linear(rat(1, 1), rat(1, 1));
        let b = Poly::linear(rat(1, 1), rat(2, 1));
        let f = RatFunc::new(a.mul(&b), a.scale(&rat(3, 1))).unwrap();
        assert_eq!(f.den, Poly::constant(rat(1, 1)));
        assert_eq!(f.num, b.scale(&rat(1, 3)));
    }

    #[test]
    fn divrem_identity() {
        let p = Poly::new(vec![rat(1, 1), rat(0, 1), rat(2, 1), rat(5, 3)]);
        let d = Poly::linear(rat(2, 1), rat(-1, 1));
        let (q, r) = p.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), p);
        assert!(r.degree().unwrap_or(0) == 0);
    }
}
