//! Exact arithmetic: rationals, quadratic fields Q(√D), and Möbius images of
//! named transcendental symbols.
//!
//! Rationals are `num_rational::BigRational`, always stored in lowest terms
//! with a positive denominator.

pub mod linalg;
pub mod poly;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use poly::{Poly, RatFunc};

pub type Rational = num_rational::BigRational;

/// 2×2 rational matrix, row major.
pub type RatMatrix2 = [[Rational; 2]; 2];

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::InvalidValue(format!("bad rational {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::InvalidValue(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::new(n, d))
    } else {
        BigInt::from_str(t).map(Rational::from_integer).map_err(|_| Error::InvalidValue(format!("bad rational {s:?}")))
    }
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// x + y√D, with √D = i√|D| when D < 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    d: i64,
    pub x: Rational,
    pub y: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
    Conj,
}

impl QuadElem {
    pub fn new(d: i64, x: Rational, y: Rational) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::InvalidValue(format!("D = {d} is not a squarefree integer other than 0, 1")));
        }
        Ok(QuadElem { d, x, y })
    }
    pub fn from_rational(d: i64, x: Rational) -> Result<Self> {
        QuadElem::new(d, x, Rational::zero())
    }
    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }
    fn check(&self, o: &QuadElem) -> Result<()> {
        if self.d != o.d {
            Err(Error::MismatchedField(self.d, o.d))
        } else {
            Ok(())
        }
    }
    pub fn add(&self, o: &QuadElem) -> Result<QuadElem> {
        self.check(o)?;
        Ok(QuadElem { d: self.d, x: &self.x + &o.x, y: &self.y + &o.y })
    }
    pub fn sub(&self, o: &QuadElem) -> Result<QuadElem> {
        self.check(o)?;
        Ok(QuadElem { d: self.d, x: &self.x - &o.x, y: &self.y - &o.y })
    }
    pub fn mul(&self, o: &QuadElem) -> Result<QuadElem> {
        self.check(o)?;
        let dd = rat_int(self.d);
        Ok(QuadElem { d: self.d, x: &self.x * &o.x + &self.y * &o.y * dd, y: &self.x * &o.y + &self.y * &o.x })
    }
    pub fn conj(&self) -> QuadElem {
        QuadElem { d: self.d, x: self.x.clone(), y: -self.y.clone() }
    }
    /// Field norm x² − D y².
    pub fn norm(&self) -> Rational {
        &self.x * &self.x - rat_int(self.d) * &self.y * &self.y
    }
    pub fn inv(&self) -> Result<QuadElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadElem { d: self.d, x: &self.x / &n, y: -(&self.y / &n) })
    }
    pub fn div(&self, o: &QuadElem) -> Result<QuadElem> {
        self.check(o)?;
        self.mul(&o.inv()?)
    }
    pub fn scale(&self, k: &Rational) -> QuadElem {
        QuadElem { d: self.d, x: &self.x * k, y: &self.y * k }
    }
    pub fn to_complex(&self) -> Complex64 {
        let x = rat_to_f64(&self.x);
        let y = rat_to_f64(&self.y);
        if self.d < 0 {
            Complex64::new(x, y * (-self.d as f64).sqrt())
        } else {
            Complex64::new(x + y * (self.d as f64).sqrt(), 0.0)
        }
    }
    /// (B, A) with ω² = Bω + A, for ω ∉ Q.
    pub fn minpoly(&self) -> Option<(Rational, Rational)> {
        if self.is_rational() {
            return None;
        }
        let b = rat_int(2) * &self.x;
        let a = rat_int(self.d) * &self.y * &self.y - &self.x * &self.x;
        Some((b, a))
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
    }
}

/// Field arithmetic on quadratic elements. `b` is ignored for `Conj`.
pub fn quad_arith(op: QuadOp, a: &QuadElem, b: &QuadElem) -> Result<QuadElem> {
    match op {
        QuadOp::Add => a.add(b),
        QuadOp::Sub => a.sub(b),
        QuadOp::Mul => a.mul(b),
        QuadOp::Div => a.div(b),
        QuadOp::Conj => Ok(a.conj()),
    }
}

pub fn det2(m: &RatMatrix2) -> Rational {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn mat_mul2(a: &RatMatrix2, b: &RatMatrix2) -> RatMatrix2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn identity2() -> RatMatrix2 {
    [[Rational::one(), Rational::zero()], [Rational::zero(), Rational::one()]]
}

/// Adjugate, i.e. det·M⁻¹.
pub fn adjugate2(m: &RatMatrix2) -> RatMatrix2 {
    [[m[1][1].clone(), -m[0][1].clone()], [-m[1][0].clone(), m[0][0].clone()]]
}

pub fn inverse2(m: &RatMatrix2) -> Result<RatMatrix2> {
    let d = det2(m);
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let a = adjugate2(m);
    Ok([[&a[0][0] / &d, &a[0][1] / &d], [&a[1][0] / &d, &a[1][1] / &d]])
}

/// Product M1·M2 of Möbius matrices (the map t ↦ M1(M2(t))).
pub fn mobius_compose(m1: &RatMatrix2, m2: &RatMatrix2) -> Result<RatMatrix2> {
    if det2(m1).is_zero() || det2(m2).is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(mat_mul2(m1, m2))
}

/// Scale a rational vector to a primitive integer vector (positive common factor).
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// (M₁₁t+M₁₂)/(M₂₁t+M₂₂) for a transcendental symbol t with a numeric anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicOmega {
    pub symbol: String,
    pub m: RatMatrix2,
    pub anchor: Complex64,
}

impl SymbolicOmega {
    pub fn new(symbol: &str, m: RatMatrix2, anchor: Complex64) -> Result<Self> {
        if det2(&m).is_zero() {
            return Err(Error::SingularMatrix);
        }
        if !anchor.re.is_finite() || !anchor.im.is_finite() {
            return Err(Error::InvalidValue("non-finite anchor".into()));
        }
        Ok(SymbolicOmega { symbol: symbol.to_string(), m, anchor })
    }
    /// The bare symbol t.
    pub fn symbol(symbol: &str, anchor: Complex64) -> Self {
        SymbolicOmega { symbol: symbol.to_string(), m: identity2(), anchor }
    }
    pub fn to_complex(&self) -> Complex64 {
        let c = |r: &Rational| Complex64::new(rat_to_f64(r), 0.0);
        let t = self.anchor;
        (c(&self.m[0][0]) * t + c(&self.m[0][1])) / (c(&self.m[1][0]) * t + c(&self.m[1][1]))
    }
    fn ratfunc(&self) -> RatFunc {
        RatFunc::new(Poly::linear(self.m[0][0].clone(), self.m[0][1].clone()), Poly::linear(self.m[1][0].clone(), self.m[1][1].clone()))
            .expect("nonzero denominator")
    }
}

/// Exact complex number: rational, element of Q(√D), or Möbius image of a symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub enum ExactScalar {
    Rat(Rational),
    Quad(QuadElem),
    Sym(SymbolicOmega),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ScalarRepr {
    Rat {
        v: String,
    },
    Quad {
        #[serde(rename = "D")]
        d: i64,
        x: String,
        y: String,
    },
    Sym {
        t: String,
        #[serde(rename = "M")]
        m: [[String; 2]; 2],
        anchor: [f64; 2],
    },
}

impl TryFrom<ScalarRepr> for ExactScalar {
    type Error = Error;
    fn try_from(r: ScalarRepr) -> Result<Self> {
        Ok(match r {
            ScalarRepr::Rat { v } => ExactScalar::Rat(parse_rational(&v)?),
            ScalarRepr::Quad { d, x, y } => ExactScalar::Quad(QuadElem::new(d, parse_rational(&x)?, parse_rational(&y)?)?),
            ScalarRepr::Sym { t, m, anchor } => {
                let p = |s: &String| parse_rational(s);
                let m = [[p(&m[0][0])?, p(&m[0][1])?], [p(&m[1][0])?, p(&m[1][1])?]];
                ExactScalar::Sym(SymbolicOmega::new(&t, m, Complex64::new(anchor[0], anchor[1]))?)
            }
        })
    }
}

impl From<ExactScalar> for ScalarRepr {
    fn from(s: ExactScalar) -> Self {
        match s {
            ExactScalar::Rat(v) => ScalarRepr::Rat { v: v.to_string() },
            ExactScalar::Quad(q) => ScalarRepr::Quad { d: q.d, x: q.x.to_string(), y: q.y.to_string() },
            ExactScalar::Sym(s) => ScalarRepr::Sym {
                t: s.symbol,
                m: [[s.m[0][0].to_string(), s.m[0][1].to_string()], [s.m[1][0].to_string(), s.m[1][1].to_string()]],
                anchor: [s.anchor.re, s.anchor.im],
            },
        }
    }
}

/// Base field K over which linear independence is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    Q,
    QuadraticField(i64),
}

/// Internal common representation for mixed arithmetic.
enum Lifted {
    Quad(QuadElem),
    Sym(String, Complex64, RatFunc),
}

impl ExactScalar {
    pub fn int(n: i64) -> Self {
        ExactScalar::Rat(rat_int(n))
    }
    pub fn rational(r: Rational) -> Self {
        ExactScalar::Rat(r)
    }
    /// y·√D + x
    pub fn quad(d: i64, x: Rational, y: Rational) -> Result<Self> {
        Ok(ExactScalar::Quad(QuadElem::new(d, x, y)?))
    }
    /// The Gaussian number x + y i.
    pub fn gaussian(x: Rational, y: Rational) -> Self {
        ExactScalar::Quad(QuadElem { d: -1, x, y })
    }
    pub fn to_complex(&self) -> Complex64 {
        match self {
            ExactScalar::Rat(r) => Complex64::new(rat_to_f64(r), 0.0),
            ExactScalar::Quad(q) => q.to_complex(),
            ExactScalar::Sym(s) => s.to_complex(),
        }
    }
    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rat(r) => r.is_zero(),
            ExactScalar::Quad(q) => q.is_zero(),
            ExactScalar::Sym(_) => false,
        }
    }
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactScalar::Rat(r) => Some(r),
            ExactScalar::Quad(q) if q.is_rational() => Some(&q.x),
            _ => None,
        }
    }
    /// True when the value is certainly real.
    pub fn is_real(&self) -> bool {
        match self {
            ExactScalar::Rat(_) => true,
            ExactScalar::Quad(q) => q.d > 0 || q.y.is_zero(),
            ExactScalar::Sym(s) => s.anchor.im == 0.0,
        }
    }
    /// Base field K_ω for ω = self: Q(√D) when quadratic, Q otherwise.
    pub fn field(&self) -> FieldSpec {
        match self {
            ExactScalar::Quad(q) if !q.is_rational() => FieldSpec::QuadraticField(q.d),
            _ => FieldSpec::Q,
        }
    }
    /// (B, A) with ω² = Bω + A when ω is quadratic irrational.
    pub fn minpoly(&self) -> Option<(Rational, Rational)> {
        match self {
            ExactScalar::Quad(q) => q.minpoly(),
            _ => None,
        }
    }

    fn lift(&self) -> Lifted {
        match self {
            ExactScalar::Rat(r) => Lifted::Quad(QuadElem { d: 0, x: r.clone(), y: Rational::zero() }),
            ExactScalar::Quad(q) if q.y.is_zero() => Lifted::Quad(QuadElem { d: 0, x: q.x.clone(), y: Rational::zero() }),
            ExactScalar::Quad(q) => Lifted::Quad(q.clone()),
            ExactScalar::Sym(s) => Lifted::Sym(s.symbol.clone(), s.anchor, s.ratfunc()),
        }
    }

    fn from_quad(q: QuadElem) -> ExactScalar {
        if q.d == 0 || q.y.is_zero() {
            ExactScalar::Rat(q.x)
        } else {
            ExactScalar::Quad(q)
        }
    }

    fn from_ratfunc(sym: &str, anchor: Complex64, f: RatFunc) -> Result<ExactScalar> {
        if f.is_constant() {
            return Ok(ExactScalar::Rat(f.num.coeff(0) / f.den.coeff(0)));
        }
        let (dn, dd) = (f.num.degree().unwrap_or(0), f.den.degree().unwrap_or(0));
        if dn > 1 || dd > 1 {
            return Err(Error::NotRepresentable(format!("degree ({dn},{dd}) rational function of {sym}")));
        }
        let m = [[f.num.coeff(1), f.num.coeff(0)], [f.den.coeff(1), f.den.coeff(0)]];
        Ok(ExactScalar::Sym(SymbolicOmega::new(sym, m, anchor)?))
    }

    fn combine(
        &self,
        o: &ExactScalar,
        fq: impl Fn(&QuadElem, &QuadElem) -> Result<QuadElem>,
        fs: impl Fn(&RatFunc, &RatFunc) -> Result<RatFunc>,
    ) -> Result<ExactScalar> {
        match (self.lift(), o.lift()) {
            (Lifted::Quad(mut a), Lifted::Quad(mut b)) => {
                if a.d == 0 {
                    a.d = if b.d == 0 { -1 } else { b.d };
                }
                if b.d == 0 {
                    b.d = a.d;
                }
                Ok(ExactScalar::from_quad(fq(&a, &b)?))
            }
            (Lifted::Sym(s, an, f), Lifted::Quad(q)) | (Lifted::Quad(q), Lifted::Sym(s, an, f)) => {
                if q.d != 0 && !q.y.is_zero() {
                    return Err(Error::IncompatibleRepresentations("quadratic and symbolic values do not mix".into()));
                }
                let c = RatFunc::constant(q.x.clone());
                let (l, r) = if matches!(self, ExactScalar::Sym(_)) { (f, c) } else { (c, f) };
                ExactScalar::from_ratfunc(&s, an, fs(&l, &r)?)
            }
            (Lifted::Sym(s1, an, f1), Lifted::Sym(s2, _, f2)) => {
                if s1 != s2 {
                    return Err(Error::IncompatibleRepresentations(format!("symbols {s1} and {s2} differ")));
                }
                ExactScalar::from_ratfunc(&s1, an, fs(&f1, &f2)?)
            }
        }
    }

    pub fn add(&self, o: &ExactScalar) -> Result<ExactScalar> {
        self.combine(o, |a, b| a.add(b), |a, b| Ok(a.add(b)))
    }
    pub fn sub(&self, o: &ExactScalar) -> Result<ExactScalar> {
        self.combine(o, |a, b| a.sub(b), |a, b| Ok(a.sub(b)))
    }
    pub fn mul(&self, o: &ExactScalar) -> Result<ExactScalar> {
        self.combine(o, |a, b| a.mul(b), |a, b| Ok(a.mul(b)))
    }
    pub fn div(&self, o: &ExactScalar) -> Result<ExactScalar> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.combine(o, |a, b| a.div(b), |a, b| a.div(b).ok_or(Error::DivisionByZero))
    }
    pub fn neg(&self) -> ExactScalar {
        match self {
            ExactScalar::Rat(r) => ExactScalar::Rat(-r.clone()),
            ExactScalar::Quad(q) => ExactScalar::Quad(q.scale(&rat_int(-1))),
            ExactScalar::Sym(s) => {
                let mut t = s.clone();
                t.m[0][0] = -t.m[0][0].clone();
                t.m[0][1] = -t.m[0][1].clone();
                ExactScalar::Sym(t)
            }
        }
    }
    pub fn recip(&self) -> Result<ExactScalar> {
        ExactScalar::int(1).div(self)
    }
    pub fn scale(&self, k: &Rational) -> ExactScalar {
        self.mul(&ExactScalar::Rat(k.clone())).expect("rational scaling is always representable")
    }
    /// Complex conjugate, when it stays inside the representation.
    pub fn conj(&self) -> Result<ExactScalar> {
        match self {
            ExactScalar::Rat(_) => Ok(self.clone()),
            ExactScalar::Quad(q) if q.d < 0 => Ok(ExactScalar::Quad(q.conj())),
            ExactScalar::Quad(_) => Ok(self.clone()),
            ExactScalar::Sym(s) if s.anchor.im == 0.0 => Ok(self.clone()),
            ExactScalar::Sym(s) => Err(Error::NotRepresentable(format!("conjugate of non-real symbol {}", s.symbol))),
        }
    }
    /// Exact equality of values (Möbius matrices up to scale).
    pub fn equals(&self, o: &ExactScalar) -> Result<bool> {
        Ok(self.sub(o)?.is_zero())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rat(r) => write!(f, "{r}"),
            ExactScalar::Quad(q) => write!(f, "{q}"),
            ExactScalar::Sym(s) => write!(f, "({}*{} + {})/({}*{} + {})", s.m[0][0], s.symbol, s.m[0][1], s.m[1][0], s.symbol, s.m[1][1]),
        }
    }
}

/// Q-coordinates of a list of exact values in a common finite-dimensional
/// Q-vector space (one coordinate vector per value, all the same length).
pub fn rational_coordinates(values: &[ExactScalar]) -> Result<Vec<Vec<Rational>>> {
    let mut d: Option<i64> = None;
    let mut sym: Option<String> = None;
    for v in values {
        match v {
            ExactScalar::Rat(_) => {}
            ExactScalar::Quad(q) => {
                if q.y.is_zero() {
                    continue;
                }
                if d.is_some_and(|d0| d0 != q.d) {
                    return Err(Error::IncompatibleRepresentations(format!("fields Q(sqrt({})) and Q(sqrt({}))", d.unwrap(), q.d)));
                }
                d = Some(q.d);
            }
            ExactScalar::Sym(s) => {
                if sym.as_ref().is_some_and(|s0| *s0 != s.symbol) {
                    return Err(Error::IncompatibleRepresentations("distinct symbols".into()));
                }
                sym = Some(s.symbol.clone());
            }
        }
    }
    if d.is_some() && sym.is_some() {
        return Err(Error::IncompatibleRepresentations("quadratic and symbolic values do not mix".into()));
    }
    if sym.is_none() {
        return Ok(values
            .iter()
            .map(|v| match v {
                ExactScalar::Rat(r) => vec![r.clone(), Rational::zero()],
                ExactScalar::Quad(q) => vec![q.x.clone(), q.y.clone()],
                ExactScalar::Sym(_) => unreachable!(),
            })
            .collect());
    }
    let fs: Vec<RatFunc> = values
        .iter()
        .map(|v| match v {
            ExactScalar::Rat(r) => RatFunc::constant(r.clone()),
            ExactScalar::Sym(s) => s.ratfunc(),
            ExactScalar::Quad(q) => RatFunc::constant(q.x.clone()),
        })
        .collect();
    let mut l = Poly::constant(Rational::one());
    for f in &fs {
        let g = l.gcd(&f.den);
        l = l.mul(&f.den).divrem(&g).0;
    }
    let nums: Vec<Poly> = fs.iter().map(|f| f.num.mul(&l.divrem(&f.den).0)).collect();
    let len = nums.iter().map(|p| p.coeffs().len()).max().unwrap_or(0).max(1);
    Ok(nums.iter().map(|p| (0..len).map(|i| p.coeff(i)).collect()).collect())
}

/// True iff no nontrivial K-linear combination of `values` vanishes.
pub fn linear_independent(field: FieldSpec, values: &[ExactScalar]) -> Result<bool> {
    let coords = rational_coordinates(values)?;
    if let FieldSpec::QuadraticField(dk) = field {
        let mut has_sym = false;
        for v in values {
            match v {
                ExactScalar::Quad(q) if !q.y.is_zero() && q.d != dk => {
                    return Err(Error::MismatchedField(dk, q.d));
                }
                ExactScalar::Sym(_) => has_sym = true,
                _ => {}
            }
        }
        if !has_sym {
            // all values lie in K itself, a one-dimensional K-space
            return Ok(match values {
                [] => true,
                [v] => !v.is_zero(),
                _ => false,
            });
        }
        // values in Q(t) with rational coefficients: K-rank equals Q-rank
    }
    Ok(linalg::rank(&coords) == values.len())
}

/// Integer helpers shared by the lattice code.
pub fn bigint_to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

pub fn abs_rat(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: i64, y: i64) -> QuadElem {
        QuadElem::new(-1, rat_int(x), rat_int(y)).unwrap()
    }

    #[test]
    fn quad_examples() {
        let p = quad_arith(QuadOp::Mul, &g(1, 1), &g(1, -1)).unwrap();
        assert_eq!(p, g(2, 0));
        let q = quad_arith(QuadOp::Div, &g(1, 0), &g(0, 1)).unwrap();
        assert_eq!(q, g(0, -1));
        let a = QuadElem::new(-5, rat(1, 2), rat_int(3)).unwrap();
        let c = quad_arith(QuadOp::Conj, &a, &a).unwrap();
        assert_eq!(c, QuadElem::new(-5, rat(1, 2), rat_int(-3)).unwrap());
    }

    #[test]
    fn quad_rejects_bad_d_and_mixed_fields() {
        assert!(QuadElem::new(4, rat_int(1), rat_int(1)).is_err());
        assert!(QuadElem::new(1, rat_int(1), rat_int(1)).is_err());
        let a = QuadElem::new(-3, rat_int(1), rat_int(1)).unwrap();
        assert_eq!(a.add(&g(1, 1)), Err(Error::MismatchedField(-3, -1)));
        assert_eq!(g(1, 1).div(&g(0, 0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn mobius_examples() {
        let m = [[rat_int(1), rat_int(1)], [rat_int(1), rat_int(2)]];
        let s = [[rat_int(2), rat_int(0)], [rat_int(0), rat_int(1)]];
        assert_eq!(mobius_compose(&m, &identity2()).unwrap(), m);
        assert_eq!(mobius_compose(&m, &s).unwrap(), [[rat_int(2), rat_int(1)], [rat_int(2), rat_int(2)]]);
        let p = mobius_compose(&m, &adjugate2(&m)).unwrap();
        assert_eq!(p, [[det2(&m), rat_int(0)], [rat_int(0), det2(&m)]]);
        let z = [[rat_int(1), rat_int(2)], [rat_int(2), rat_int(4)]];
        assert_eq!(mobius_compose(&m, &z), Err(Error::SingularMatrix));
    }

    #[test]
    fn linear_independence_examples() {
        let one = ExactScalar::int(1);
        let i = ExactScalar::gaussian(rat_int(0), rat_int(1));
        assert!(linear_independent(FieldSpec::Q, &[one.clone(), i.clone()]).unwrap());
        assert!(!linear_independent(FieldSpec::QuadraticField(-1), &[one.clone(), i]).unwrap());
        assert!(!linear_independent(FieldSpec::Q, &[one, ExactScalar::int(2)]).unwrap());
    }

    #[test]
    fn symbolic_arithmetic_and_independence() {
        let t = ExactScalar::Sym(SymbolicOmega::symbol("t", Complex64::new(0.3, 1.7)));
        let one = ExactScalar::int(1);
        // 1/(t+1) is Möbius, 1/(t+1) + 1/t is not
        let a = one.div(&t.add(&one).unwrap()).unwrap();
        assert!(matches!(a, ExactScalar::Sym(_)));
        assert!(matches!(a.add(&one.div(&t).unwrap()), Err(Error::NotRepresentable(_))));
        // t - t = 0 collapses to a rational
        assert_eq!(t.sub(&t).unwrap(), ExactScalar::int(0));
        assert!(linear_independent(FieldSpec::Q, &[one.clone(), t.clone()]).unwrap());
        let u = t.scale(&rat(3, 2)).add(&ExactScalar::int(5)).unwrap();
        assert!(!linear_independent(FieldSpec::Q, &[one.clone(), t.clone(), u]).unwrap());
        // 1, t, 1/t are independent over Q
        let inv = one.div(&t).unwrap();
        assert!(linear_independent(FieldSpec::Q, &[one, t, inv]).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"kind":"quad","D":-1,"x":"1/2","y":"3"}"#;
        let v: ExactScalar = serde_json::from_str(s).unwrap();
        assert_eq!(v, ExactScalar::gaussian(rat(1, 2), rat_int(3)));
        assert_eq!(serde_json::to_string(&v).unwrap(), s);
        let s = r#"{"kind":"sym","t":"t1","M":[["1","0"],["0","1"]],"anchor":[0.3,1.7]}"#;
        let v: ExactScalar = serde_json::from_str(s).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), s);
        assert!(serde_json::from_str::<ExactScalar>(r#"{"kind":"rat","v":"1","extra":1}"#).is_err());
    }
}
