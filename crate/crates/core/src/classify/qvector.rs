use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, rat_int, rat_to_f64, Rational};

/// Element of a ℚ-vector space over declared independent symbols.
///
/// Symbols: "1", the base symbol ("omega" for complex parameters, "a" for real
/// ones), free symbols `s`, and products "omega*s".
#[derive(Debug, Clone, PartialEq)]
pub struct QVector {
    pub basis: Vec<String>,
    pub coords: Vec<Rational>,
    /// (B, A) with ω² = Bω + A
    pub omega_minpoly: Option<(Rational, Rational)>,
    pub anchors: BTreeMap<String, Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QVectorRepr {
    basis: Vec<String>,
    coords: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    anchors: BTreeMap<String, [f64; 2]>,
}

impl Serialize for QVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QVectorRepr {
            basis: self.basis.clone(),
            coords: self.coords.iter().map(|c| c.to_string()).collect(),
            anchors: self.anchors.iter().map(|(k, v)| (k.clone(), [v.re, v.im])).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = QVectorRepr::deserialize(d)?;
        let coords = r.coords.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>().map_err(serde::de::Error::custom)?;
        let anchors = r.anchors.into_iter().map(|(k, v)| (k, Complex64::new(v[0], v[1]))).collect();
        QVector::new(r.basis, coords, anchors).map_err(serde::de::Error::custom)
    }
}

fn is_base(s: &str) -> bool {
    s == "omega" || s == "a"
}

impl QVector {
    pub fn new(basis: Vec<String>, coords: Vec<Rational>, anchors: BTreeMap<String, Complex64>) -> Result<Self> {
        if basis.len() != coords.len() {
            return Err(Error::InvalidValue("basis and coords lengths differ".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            if !seen.insert(b.as_str()) {
                return Err(Error::InvalidValue(format!("repeated basis symbol {b}")));
            }
        }
        let v = QVector { basis, coords, omega_minpoly: None, anchors };
        for s in v.free_symbols() {
            if !v.anchors.contains_key(&s) {
                return Err(Error::InvalidValue(format!("missing anchor for symbol {s}")));
            }
        }
        Ok(v)
    }

    /// Vector from (symbol, coefficient) pairs.
    pub fn from_terms(terms: &[(&str, Rational)], anchors: &[(&str, Complex64)]) -> Result<Self> {
        let basis = terms.iter().map(|(s, _)| s.to_string()).collect();
        let coords = terms.iter().map(|(_, c)| c.clone()).collect();
        let anchors = anchors.iter().map(|(s, z)| (s.to_string(), *z)).collect();
        Self::new(basis, coords, anchors)
    }

    pub fn with_minpoly(mut self, mp: Option<(Rational, Rational)>) -> Self {
        self.omega_minpoly = mp;
        self
    }

    pub fn coord(&self, sym: &str) -> Rational {
        self.basis.iter().position(|b| b == sym).map(|i| self.coords[i].clone()).unwrap_or_else(Rational::zero)
    }

    /// Free symbols (not "1", the base symbol, or products).
    pub fn free_symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for b in &self.basis {
            let s = match b.split_once('*') {
                Some((_, s)) => s,
                None => b.as_str(),
            };
            if s != "1" && !is_base(s) && !out.iter().any(|o| o == s) {
                out.push(s.to_string());
            }
        }
        out
    }

    /// Canonical basis: "1", base, then for each free symbol s: s, base*s.
    pub fn canonical_basis(&self, base: &str) -> Vec<String> {
        let mut b = vec!["1".to_string(), base.to_string()];
        for s in self.free_symbols() {
            b.push(s.clone());
            b.push(format!("{base}*{s}"));
        }
        b
    }

    /// Re-express over `basis` (a superset of the nonzero support).
    pub fn over(&self, basis: &[String]) -> Result<QVector> {
        for (b, c) in self.basis.iter().zip(&self.coords) {
            if !c.is_zero() && !basis.contains(b) {
                return Err(Error::BasisMismatch(format!("symbol {b} missing from target basis")));
            }
        }
        Ok(QVector {
            basis: basis.to_vec(),
            coords: basis.iter().map(|b| self.coord(b)).collect(),
            omega_minpoly: self.omega_minpoly.clone(),
            anchors: self.anchors.clone(),
        })
    }

    /// Both vectors over the union of their canonical bases.
    pub fn align(&self, other: &QVector, base: &str) -> Result<(QVector, QVector)> {
        let mut basis = self.canonical_basis(base);
        for b in other.canonical_basis(base) {
            if !basis.contains(&b) {
                basis.push(b);
            }
        }
        let mut anchors = self.anchors.clone();
        for (k, v) in &other.anchors {
            match anchors.get(k) {
                Some(w) if (w - v).norm() > 1e-12 * v.norm().max(1.0) => {
                    return Err(Error::BasisMismatch(format!("conflicting anchors for {k}")))
                }
                _ => {
                    anchors.insert(k.clone(), *v);
                }
            }
        }
        let mut a = self.over(&basis)?;
        let mut b = other.over(&basis)?;
        a.anchors = anchors.clone();
        b.anchors = anchors;
        Ok((a, b))
    }

    pub fn same_basis(&self, other: &QVector) -> bool {
        self.basis == other.basis
    }

    pub fn add(&self, o: &QVector) -> Result<QVector> {
        if !self.same_basis(o) {
            return Err(Error::BasisMismatch("add over different bases".into()));
        }
        let mut r = self.clone();
        for (c, d) in r.coords.iter_mut().zip(&o.coords) {
            *c += d;
        }
        Ok(r)
    }

    pub fn scale(&self, k: &Rational) -> QVector {
        let mut r = self.clone();
        for c in r.coords.iter_mut() {
            *c *= k;
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Multiply by p + q·ω. Needs the minimal polynomial unless q = 0.
    pub fn mul_k(&self, p: &Rational, q: &Rational) -> Result<QVector> {
        let mut out = self.scale(p);
        if q.is_zero() {
            return Ok(out);
        }
        let (b, a) = self.omega_minpoly.clone().ok_or_else(|| Error::NotRepresentable("multiplication by ω needs a quadratic ω".into()))?;
        let basis = self.canonical_basis("omega");
        let src = self.over(&basis)?;
        out = out.over(&basis)?;
        let idx = |s: &str| basis.iter().position(|x| x == s).expect("canonical");
        let mut add = |sym: &str, v: Rational| {
            let i = idx(sym);
            out.coords[i] += v;
        };
        // (x + yω)·qω = qAy + (qx + qBy)ω, for every free symbol multiplier
        let mut pairs = vec![("1".to_string(), "omega".to_string())];
        for s in self.free_symbols() {
            pairs.push((s.clone(), format!("omega*{s}")));
        }
        for (lo, hi) in pairs {
            let x = src.coord(&lo);
            let y = src.coord(&hi);
            add(&lo, q * &a * &y);
            add(&hi, q * &x + q * &b * &y);
        }
        Ok(out)
    }

    /// Numeric value, with `base` the value of the base symbol.
    pub fn value(&self, base: Complex64) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (b, c) in self.basis.iter().zip(&self.coords) {
            if c.is_zero() {
                continue;
            }
            let c = rat_to_f64(c);
            let v = match b.split_once('*') {
                Some((_, s)) => base * self.anchors.get(s).copied().unwrap_or_default(),
                None if b == "1" => Complex64::new(1.0, 0.0),
                None if is_base(b) => base,
                None => self.anchors.get(b).copied().unwrap_or_default(),
            };
            z += c * v;
        }
        z
    }

    /// True when the vector lies in ⟨1, base⟩_ℚ.
    pub fn in_base_span(&self) -> bool {
        self.basis.iter().zip(&self.coords).all(|(b, c)| c.is_zero() || b == "1" || is_base(b))
    }

    /// True when the vector is a rational multiple of `sym` (ℚ·sym).
    pub fn in_span_of(&self, sym: &str) -> bool {
        self.basis.iter().zip(&self.coords).all(|(b, c)| c.is_zero() || b == sym)
    }

    pub fn rational(r: Rational) -> QVector {
        QVector { basis: vec!["1".into()], coords: vec![r], omega_minpoly: None, anchors: BTreeMap::new() }
    }

    pub fn one() -> QVector {
        Self::rational(rat_int(1))
    }
}
