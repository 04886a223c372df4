//! Classification types, Ξ-membership, isomorphism deciders with witnesses,
//! and automorphism-group descriptors.

mod aut;
mod qvector;
mod witness;

pub use aut::{aut, aut_c1, aut_c2, aut_r1, aut_r2, field_name, AutDescriptor, AutFamily, Domain, Mat2};
pub use qvector::QVector;
pub use witness::{realize, witness_periodicity, witness_residual, IsoWitness, Map1, Realization, Step};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{linalg, rat_int, ExactScalar, Rational};
use crate::lattice::{commensurable, LatticeSpec, Witness};

/// Classified group, tagged by its type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum GroupDescriptor {
    #[serde(rename = "C1_Id")]
    C1Id,
    #[serde(rename = "C1_Exp")]
    C1Exp,
    #[serde(rename = "C1_Wp")]
    C1Wp { omega: ExactScalar },
    #[serde(rename = "C2_Product")]
    C2Product { f1: Box<GroupDescriptor>, f2: Box<GroupDescriptor> },
    #[serde(rename = "C2_Z")]
    C2Z { omega: ExactScalar },
    #[serde(rename = "C2_S")]
    C2S { omega: ExactScalar, xi: QVector },
    #[serde(rename = "C2_Abelian")]
    C2Abelian {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    #[serde(rename = "R1_Id")]
    R1Id,
    #[serde(rename = "R1_Exp")]
    R1Exp,
    #[serde(rename = "R1_Sin")]
    R1Sin,
    #[serde(rename = "R1_Wp")]
    R1Wp { a: ExactScalar },
    #[serde(rename = "R2_Product")]
    R2Product { f1: Box<GroupDescriptor>, f2: Box<GroupDescriptor> },
    #[serde(rename = "R2_Z")]
    R2Z { a: ExactScalar },
    #[serde(rename = "R2_S")]
    R2S { a: ExactScalar, xi: QVector },
    #[serde(rename = "R2_T")]
    R2T { a: ExactScalar, xi: QVector },
    #[serde(rename = "R2_Abelian")]
    R2Abelian {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

use GroupDescriptor as G;

impl GroupDescriptor {
    pub fn kind_name(&self) -> &'static str {
        match self {
            G::C1Id => "C1_Id",
            G::C1Exp => "C1_Exp",
            G::C1Wp { .. } => "C1_Wp",
            G::C2Product { .. } => "C2_Product",
            G::C2Z { .. } => "C2_Z",
            G::C2S { .. } => "C2_S",
            G::C2Abelian { .. } => "C2_Abelian",
            G::R1Id => "R1_Id",
            G::R1Exp => "R1_Exp",
            G::R1Sin => "R1_Sin",
            G::R1Wp { .. } => "R1_Wp",
            G::R2Product { .. } => "R2_Product",
            G::R2Z { .. } => "R2_Z",
            G::R2S { .. } => "R2_S",
            G::R2T { .. } => "R2_T",
            G::R2Abelian { .. } => "R2_Abelian",
        }
    }

    pub fn is_real(&self) -> bool {
        self.kind_name().starts_with('R')
    }

    pub fn dim(&self) -> usize {
        if self.kind_name().as_bytes()[1] == b'1' {
            1
        } else {
            2
        }
    }

    pub fn is_abelian_surface(&self) -> bool {
        matches!(self, G::C2Abelian { .. } | G::R2Abelian { .. })
    }

    /// Check the parameter constraints of each type.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDescriptor(format!("{}: {m}", self.kind_name())));
        match self {
            G::C1Wp { omega } | G::C2Z { omega } => {
                if omega.is_real() {
                    return bad("omega must be non-real");
                }
            }
            G::C2S { omega, xi } => {
                if omega.is_real() {
                    return bad("omega must be non-real");
                }
                check_base(xi, "omega")?;
                if xi.in_base_span() {
                    return bad("xi must lie outside <1,omega>_Q");
                }
            }
            G::C2Product { f1, f2 } => {
                for f in [f1, f2] {
                    if f.is_real() || f.dim() != 1 {
                        return bad("factors must be one-dimensional complex kinds");
                    }
                    f.validate()?;
                }
            }
            G::R2Product { f1, f2 } => {
                for f in [f1, f2] {
                    if !f.is_real() || f.dim() != 1 {
                        return bad("factors must be one-dimensional real kinds");
                    }
                    f.validate()?;
                }
            }
            G::R1Wp { a } | G::R2Z { a } => check_real_param(a)?,
            G::R2S { a, xi } => {
                check_real_param(a)?;
                let x = real_xi(a, xi)?;
                if x.in_span_of("1") {
                    return bad("xi must be irrational");
                }
            }
            G::R2T { a, xi } => {
                check_real_param(a)?;
                let x = real_xi(a, xi)?;
                let span = if a.as_rational().is_some() { "1" } else { "a" };
                if x.in_span_of(span) {
                    return bad("xi must lie outside aQ");
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn check_base(xi: &QVector, base: &str) -> Result<()> {
    let other = if base == "omega" { "a" } else { "omega" };
    if xi.basis.iter().any(|b| b == other || b.starts_with(&format!("{other}*"))) {
        return Err(Error::BasisMismatch(format!("xi must be expressed over '{base}'")));
    }
    Ok(())
}

fn check_real_param(a: &ExactScalar) -> Result<()> {
    if !a.is_real() || a.is_zero() {
        return Err(Error::InvalidDescriptor("a must be a nonzero real".into()));
    }
    Ok(())
}

/// Real ξ over basis {1, a, free symbols}; a rational `a` is folded into "1".
fn real_xi(a: &ExactScalar, xi: &QVector) -> Result<QVector> {
    check_base(xi, "a")?;
    if xi.basis.iter().any(|b| b.contains('*')) {
        return Err(Error::InvalidDescriptor("real xi cannot contain product symbols".into()));
    }
    if xi.anchors.values().any(|z| z.im != 0.0) {
        return Err(Error::InvalidDescriptor("real xi needs real anchors".into()));
    }
    match a.as_rational() {
        Some(r) => {
            let mut basis = xi.canonical_basis("a");
            basis.retain(|b| !b.contains('*'));
            let mut v = xi.over(&basis)?;
            let ca = v.coord("a");
            v.coords[0] += &ca * r;
            v.coords[1] = Rational::zero();
            Ok(v)
        }
        None => Ok(xi.clone()),
    }
}

/// ⟨1, ω⟩ for a descriptor parameter.
pub fn omega_lattice(omega: &ExactScalar) -> Result<LatticeSpec> {
    LatticeSpec::from_omega(omega)
}

/// ⟨1, a·i⟩ for a real parameter a; exact when a·i lies in an imaginary quadratic field.
pub fn real_lattice(a: &ExactScalar) -> Result<LatticeSpec> {
    LatticeSpec::new(ExactScalar::int(1).into(), real_omega(a)?)
}

fn real_omega(a: &ExactScalar) -> Result<crate::lattice::Gen> {
    use crate::lattice::Gen;
    match a {
        _ if a.as_rational().is_some() => Ok(Gen::Exact(ExactScalar::gaussian(rat_int(0), a.as_rational().expect("rational").clone()))),
        ExactScalar::Quad(q) if q.d() > 0 && q.x.is_zero() => Ok(Gen::Exact(ExactScalar::quad(-q.d(), Rational::zero(), q.y.clone())?)),
        _ => Ok(Gen::num(Complex64::new(0.0, a.to_complex().re))),
    }
}

/// a/b when it is rational and nonzero.
pub fn real_ratio(a: &ExactScalar, b: &ExactScalar) -> Option<Rational> {
    match a.div(b) {
        Ok(r) => match r {
            ExactScalar::Rat(q) if !q.is_zero() => Some(q),
            ExactScalar::Quad(q) if q.y.is_zero() && !q.x.is_zero() => Some(q.x),
            _ => None,
        },
        Err(_) => None,
    }
}

/// Result of a successful Ξ-membership test: ξ₂ = λ + k·ξ₁.
#[derive(Debug, Clone, PartialEq)]
pub struct XiMembership {
    /// k = p + q·ω
    pub k: (Rational, Rational),
    /// λ coordinates in the basis (1, ω)
    pub lam: (Rational, Rational),
}

impl XiMembership {
    pub fn k_scalar(&self, omega: &ExactScalar) -> Result<ExactScalar> {
        ExactScalar::rational(self.k.0.clone()).add(&omega.scale(&self.k.1))
    }

    pub fn lam_vector(&self, like: &QVector) -> Result<QVector> {
        let mut v = like.scale(&Rational::zero());
        let i1 = v.basis.iter().position(|b| b == "1");
        let iw = v.basis.iter().position(|b| b == "omega");
        match (i1, iw) {
            (Some(i), Some(j)) => {
                v.coords[i] = self.lam.0.clone();
                v.coords[j] = self.lam.1.clone();
                Ok(v)
            }
            _ => Err(Error::BasisMismatch("basis lacks 1/omega".into())),
        }
    }

    /// λ + k·ξ₁, exactly.
    pub fn reconstruct(&self, xi1: &QVector) -> Result<QVector> {
        let kx = xi1.mul_k(&self.k.0, &self.k.1)?.over(&xi1.basis)?;
        let lam = self.lam_vector(&kx)?;
        lam.add(&kx)
    }
}

/// Decide ξ₂ ∈ ⟨1,ω⟩_ℚ + K_ω*·ξ₁ by an exact linear solve.
pub fn xi_membership(omega: &ExactScalar, xi1: &QVector, xi2: &QVector) -> Result<Option<XiMembership>> {
    if xi1.basis != xi2.basis {
        return Err(Error::BasisMismatch("xi1 and xi2 must share a basis".into()));
    }
    let mp = omega.minpoly();
    let basis = xi1.canonical_basis("omega");
    for b in &xi1.basis {
        if !basis.contains(b) {
            return Err(Error::BasisMismatch(format!("unexpected symbol {b}")));
        }
    }
    let x1 = xi1.over(&basis)?.with_minpoly(mp.clone());
    let x2 = xi2.over(&basis)?.with_minpoly(mp.clone());
    // columns: k = p + qω acting on ξ₁ (q only when ω is quadratic)
    let col_p = x1.mul_k(&Rational::one(), &Rational::zero())?;
    let col_q = if mp.is_some() { Some(x1.mul_k(&Rational::zero(), &Rational::one())?) } else { None };
    let rows: Vec<usize> = (2..basis.len()).collect();
    let a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&i| {
            let mut r = vec![col_p.coords[i].clone()];
            if let Some(q) = &col_q {
                r.push(q.coords[i].clone());
            }
            r
        })
        .collect();
    let b: Vec<Rational> = rows.iter().map(|&i| x2.coords[i].clone()).collect();
    let nvar = if col_q.is_some() { 2 } else { 1 };
    let sol = if rows.is_empty() {
        Some(linalg::AffineSolution {
            particular: vec![Rational::zero(); nvar],
            kernel: (0..nvar).map(|j| (0..nvar).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect(),
        })
    } else {
        linalg::solve(&a, &b)
    };
    let Some(sol) = sol else { return Ok(None) };
    let mut k = sol.particular.clone();
    if k.iter().all(|x| x.is_zero()) {
        match sol.kernel.first() {
            Some(v) => k = v.clone(),
            None => return Ok(None),
        }
    }
    let (p, q) = (k[0].clone(), k.get(1).cloned().unwrap_or_else(Rational::zero));
    let kx = x1.mul_k(&p, &q)?;
    let lam = (&x2.coords[0] - &kx.coords[0], &x2.coords[1] - &kx.coords[1]);
    Ok(Some(XiMembership { k: (p, q), lam }))
}

/// One-dimensional type number (complex: 1 id, 2 exp, 3 ℘; real: 1 id, 2 exp, 3 sin, 4 ℘).
pub fn classify_1d(g: &GroupDescriptor) -> Option<u8> {
    Some(match g {
        G::C1Id | G::R1Id => 1,
        G::C1Exp | G::R1Exp => 2,
        G::C1Wp { .. } => 3,
        G::R1Sin => 3,
        G::R1Wp { .. } => 4,
        _ => return None,
    })
}

/// Type label: "1".."4" for one-dimensional kinds, "1c".."4c" / "1r".."5r" otherwise.
pub fn classify_type(g: &GroupDescriptor) -> String {
    if let Some(t) = classify_1d(g) {
        return t.to_string();
    }
    match g {
        G::C2Product { .. } => "1c",
        G::C2Z { .. } => "2c",
        G::C2S { .. } => "3c",
        G::C2Abelian { .. } => "4c",
        G::R2Product { .. } => "1r",
        G::R2Z { .. } => "2r",
        G::R2S { .. } => "3r",
        G::R2T { .. } => "4r",
        G::R2Abelian { .. } => "5r",
        _ => unreachable!(),
    }
    .to_string()
}

fn wp_witness(w: &Witness, omega1: &ExactScalar) -> Result<(Complex64, [i64; 4], u64)> {
    let abcd = w.as_i64().ok_or_else(|| Error::InvalidValue("witness too large".into()))?;
    let s = abcd[2] as f64 * omega1.to_complex() + abcd[3] as f64;
    let k = (abcd[0] * abcd[3] - abcd[1] * abcd[2]).unsigned_abs();
    Ok((1.0 / s, abcd, k))
}

/// Isomorphism of one-dimensional complex groups; the witness is u ↦ ρu.
pub fn iso_c1(g1: &GroupDescriptor, g2: &GroupDescriptor) -> Result<Option<IsoWitness>> {
    g1.validate()?;
    g2.validate()?;
    Ok(match (g1, g2) {
        (G::C1Id, G::C1Id) | (G::C1Exp, G::C1Exp) => Some(IsoWitness::scalar(Complex64::new(1.0, 0.0), None, 1, "same chart")),
        (G::C1Wp { omega: o1 }, G::C1Wp { omega: o2 }) => match commensurable(o1, o2)? {
            Some(w) => {
                let (rho, abcd, k) = wp_witness(&w, o1)?;
                Some(IsoWitness::scalar(rho, Some(abcd), k, "rho = 1/(c*omega1+d), n = 1"))
            }
            None => None,
        },
        (a, b) if a.dim() == 1 && b.dim() == 1 && !a.is_real() && !b.is_real() => None,
        _ => return Err(Error::UnsupportedKind("iso_c1 takes one-dimensional complex kinds".into())),
    })
}

/// Isomorphism of one-dimensional real groups.
pub fn iso_r1(g1: &GroupDescriptor, g2: &GroupDescriptor) -> Result<Option<IsoWitness>> {
    g1.validate()?;
    g2.validate()?;
    Ok(match (g1, g2) {
        (G::R1Id, G::R1Id) | (G::R1Exp, G::R1Exp) | (G::R1Sin, G::R1Sin) => {
            Some(IsoWitness::scalar(Complex64::new(1.0, 0.0), None, 1, "same chart"))
        }
        (G::R1Wp { a }, G::R1Wp { a: b }) => match real_ratio(b, a) {
            Some(r) => {
                let abcd = rational_abcd(&r)?;
                let rho = Complex64::new(1.0 / abcd[3] as f64, 0.0);
                Some(IsoWitness::scalar(rho, Some(abcd), (abcd[0] * abcd[3]).unsigned_abs(), "b/a rational"))
            }
            None => None,
        },
        (a, b) if a.dim() == 1 && b.dim() == 1 && a.is_real() && b.is_real() => None,
        _ => return Err(Error::UnsupportedKind("iso_r1 takes one-dimensional real kinds".into())),
    })
}

/// (p, 0, 0, q) for r = p/q: ⟨1, r·ω⟩ from ⟨1, ω⟩.
fn rational_abcd(r: &Rational) -> Result<[i64; 4]> {
    use num_traits::ToPrimitive;
    let p = r.numer().to_i64().ok_or_else(|| Error::InvalidValue("ratio too large".into()))?;
    let q = r.denom().to_i64().ok_or_else(|| Error::InvalidValue("ratio too large".into()))?;
    Ok([p, 0, 0, q])
}

fn iso_product(
    f: (&GroupDescriptor, &GroupDescriptor),
    g: (&GroupDescriptor, &GroupDescriptor),
    one: fn(&GroupDescriptor, &GroupDescriptor) -> Result<Option<IsoWitness>>,
) -> Result<Option<IsoWitness>> {
    if let (Some(a), Some(b)) = (one(f.0, g.0)?, one(f.1, g.1)?) {
        return Ok(Some(IsoWitness::diagonal(&a, &b)));
    }
    if let (Some(a), Some(b)) = (one(f.0, g.1)?, one(f.1, g.0)?) {
        return Ok(Some(IsoWitness::antidiagonal(&a, &b)));
    }
    Ok(None)
}

/// Isomorphism of two-dimensional complex groups.
pub fn iso_c2(g1: &GroupDescriptor, g2: &GroupDescriptor) -> Result<Option<IsoWitness>> {
    g1.validate()?;
    g2.validate()?;
    if g1.is_abelian_surface() || g2.is_abelian_surface() {
        return Err(Error::UnsupportedKind("abelian surfaces are opaque".into()));
    }
    match (g1, g2) {
        (G::C2Product { f1, f2 }, G::C2Product { f1: h1, f2: h2 }) => iso_product((f1, f2), (h1, h2), iso_c1),
        (G::C2Z { omega: o1 }, G::C2Z { omega: o2 }) => {
            let Some(w) = commensurable(o1, o2)? else { return Ok(None) };
            let abcd = w.as_i64().ok_or_else(|| Error::InvalidValue("witness too large".into()))?;
            let l1 = omega_lattice(o1)?;
            let mut wit = witness::z_chain(&l1, abcd)?;
            wit.abcd = Some(abcd);
            Ok(Some(wit))
        }
        (G::C2S { omega: o1, xi: x1 }, G::C2S { omega: o2, xi: x2 }) => {
            let Some(w) = commensurable(o1, o2)? else { return Ok(None) };
            let abcd = w.as_i64().ok_or_else(|| Error::InvalidValue("witness too large".into()))?;
            let [a, b, c, d] = abcd.map(rat_int);
            // (cω₁+d)·ξ₂ rewritten over (1, ω₁)
            let (x1, x2) = x1.align(x2, "omega")?;
            let mut sx2 = x2.scale(&Rational::zero());
            for s in std::iter::once("".to_string()).chain(x2.free_symbols()) {
                let (lo, hi) = if s.is_empty() { ("1".to_string(), "omega".to_string()) } else { (s.clone(), format!("omega*{s}")) };
                let (x, y) = (x2.coord(&lo), x2.coord(&hi));
                let il = sx2.basis.iter().position(|z| *z == lo).expect("aligned");
                let ih = sx2.basis.iter().position(|z| *z == hi).expect("aligned");
                sx2.coords[il] = &d * &x + &b * &y;
                sx2.coords[ih] = &c * &x + &a * &y;
            }
            let Some(m) = xi_membership(o1, &x1, &sx2)? else { return Ok(None) };
            let l1 = omega_lattice(o1)?;
            let xi1 = x1.value(o1.to_complex());
            let xi2 = x2.value(o2.to_complex());
            let mut wit = witness::s_chain(&l1, o1.minpoly(), xi1, abcd, &m, xi2)?;
            wit.abcd = Some(abcd);
            Ok(Some(wit))
        }
        (a, b) if a.dim() == 2 && b.dim() == 2 && !a.is_real() && !b.is_real() => Ok(None),
        _ => Err(Error::UnsupportedKind("iso_c2 takes two-dimensional complex kinds".into())),
    }
}

/// Isomorphism of two-dimensional real groups; witnesses are real up to rounding.
pub fn iso_r2(g1: &GroupDescriptor, g2: &GroupDescriptor) -> Result<Option<IsoWitness>> {
    g1.validate()?;
    g2.validate()?;
    if g1.is_abelian_surface() || g2.is_abelian_surface() {
        return Err(Error::UnsupportedKind("abelian surfaces are opaque".into()));
    }
    match (g1, g2) {
        (G::R2Product { f1, f2 }, G::R2Product { f1: h1, f2: h2 }) => iso_product((f1, f2), (h1, h2), iso_r1),
        (G::R2Z { a }, G::R2Z { a: b }) => {
            let Some(r) = real_ratio(b, a) else { return Ok(None) };
            let abcd = rational_abcd(&r)?;
            let mut wit = witness::z_chain(&real_lattice(a)?, abcd)?;
            wit.abcd = Some(abcd);
            Ok(Some(wit))
        }
        (G::R2S { a, xi: x1 }, G::R2S { a: b, xi: x2 }) | (G::R2T { a, xi: x1 }, G::R2T { a: b, xi: x2 }) => {
            let twisted = matches!(g1, G::R2T { .. });
            let Some(r) = real_ratio(b, a) else { return Ok(None) };
            let abcd = rational_abcd(&r)?;
            let x1 = real_xi(a, x1)?;
            // descriptor 2 counts its parameter in units of b = r·a
            let mut x2 = real_xi(b, x2)?;
            if let Some(i) = x2.basis.iter().position(|s| s == "a") {
                x2.coords[i] = &x2.coords[i] * &r;
            }
            let (x1, x2) = x1.align(&x2, "a")?;
            let s = rat_int(abcd[3]);
            let target = x2.scale(&s);
            // qξ₂ = l + k·ξ₁ with l ∈ ℚ (or aℚ when twisted), k ∈ ℚ*
            let a_rat = a.as_rational().cloned();
            let free = if twisted && a_rat.is_none() { "a" } else { "1" };
            let Some((k, l)) = solve_real_xi(&x1, &target, free) else { return Ok(None) };
            let av = a.to_complex().re;
            // twisted: λ = i·l (or i·l·a) written over (1, a·i)
            let lam = match (twisted, &a_rat) {
                (false, _) => (l, Rational::zero()),
                (true, None) => (Rational::zero(), l),
                (true, Some(ar)) => (Rational::zero(), l / ar),
            };
            let m = XiMembership { k: (k, Rational::zero()), lam };
            let l1 = real_lattice(a)?;
            let xi1 = Complex64::new(x1.value(Complex64::new(av, 0.0)).re, 0.0);
            let xi2 = Complex64::new(x2.value(Complex64::new(av, 0.0)).re, 0.0);
            let mut wit = if twisted {
                let i = Complex64::i();
                witness::s_chain(&l1, None, i * xi1, abcd, &m, i * xi2)?.conjugate_by_i()
            } else {
                witness::s_chain(&l1, None, xi1, abcd, &m, xi2)?
            };
            wit.abcd = Some(abcd);
            Ok(Some(wit))
        }
        (a, b) if a.dim() == 2 && b.dim() == 2 && a.is_real() && b.is_real() => Ok(None),
        _ => Err(Error::UnsupportedKind("iso_r2 takes two-dimensional real kinds".into())),
    }
}

/// Solve target = l·free + k·x with k ≠ 0 over a common basis.
fn solve_real_xi(x: &QVector, target: &QVector, free: &str) -> Option<(Rational, Rational)> {
    let mut k: Option<Rational> = None;
    for (i, b) in x.basis.iter().enumerate() {
        if b == free {
            continue;
        }
        let (xc, tc) = (&x.coords[i], &target.coords[i]);
        if xc.is_zero() {
            if !tc.is_zero() {
                return None;
            }
            continue;
        }
        let r = tc / xc;
        match &k {
            Some(k0) if *k0 != r => return None,
            _ => k = Some(r),
        }
    }
    let k = k.filter(|k| !k.is_zero())?;
    let l = target.coord(free) - &k * x.coord(free);
    Some((k, l))
}

/// Dispatch on descriptor dimension and base field.
pub fn isomorphic(g1: &GroupDescriptor, g2: &GroupDescriptor) -> Result<Option<IsoWitness>> {
    if g1.is_real() != g2.is_real() || g1.dim() != g2.dim() {
        g1.validate()?;
        g2.validate()?;
        return Ok(None);
    }
    match (g1.is_real(), g1.dim()) {
        (false, 1) => iso_c1(g1, g2),
        (true, 1) => iso_r1(g1, g2),
        (false, _) => iso_c2(g1, g2),
        (true, _) => iso_r2(g1, g2),
    }
}

#[cfg(test)]
mod tests;
