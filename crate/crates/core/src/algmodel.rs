//! Algebraic-group labels of classified groups and the explicit projective
//! embeddings of the Ga- and Gm-extensions of an elliptic curve.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::classify::{omega_lattice, real_lattice, GroupDescriptor};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::weier::{EvalContext, NumComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseField {
    C,
    R,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Factor {
    Ga,
    Gm,
    SO2,
    EllipticCurve(LatticeSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Shape {
    Single(Factor),
    Product(Factor, Factor),
    ExtensionByGa(LatticeSpec),
    ExtensionByGm(LatticeSpec),
    ExtensionBySO2(LatticeSpec),
    AbelianSurface,
    SimpleAbelianSurfaceOverR,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgGroupLabel {
    pub base_field: BaseField,
    pub shape: Shape,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Factor::Ga => "Ga",
            Factor::Gm => "Gm",
            Factor::SO2 => "SO2",
            Factor::EllipticCurve(_) => "E",
        })
    }
}

impl fmt::Display for AlgGroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = if self.base_field == BaseField::R { "E_inv" } else { "E" };
        match &self.shape {
            Shape::Single(a) => write!(f, "{}", factor_name(a, e)),
            Shape::Product(a, b) => write!(f, "{} x {}", factor_name(a, e), factor_name(b, e)),
            Shape::ExtensionByGa(_) => write!(f, "Ext({e}, Ga)"),
            Shape::ExtensionByGm(_) => write!(f, "Ext({e}, Gm)"),
            Shape::ExtensionBySO2(_) => write!(f, "Ext({e}, SO2)"),
            Shape::AbelianSurface => f.write_str("AbelianSurface"),
            Shape::SimpleAbelianSurfaceOverR => f.write_str("SimpleAbelianSurface/R"),
        }
    }
}

fn factor_name(a: &Factor, e: &str) -> String {
    match a {
        Factor::EllipticCurve(_) => e.to_string(),
        _ => a.to_string(),
    }
}

impl AlgGroupLabel {
    /// Isogeny-type code: "1ac".."4ac" over C, "1ar".."5ar" over R; "1a" for one-dimensional groups.
    pub fn type_code(&self) -> String {
        let n = match &self.shape {
            Shape::Single(_) => return "1a".into(),
            Shape::Product(..) => 1,
            Shape::ExtensionByGa(_) => 2,
            Shape::ExtensionByGm(_) => 3,
            Shape::ExtensionBySO2(_) => 4,
            Shape::AbelianSurface => 4,
            Shape::SimpleAbelianSurfaceOverR => 5,
        };
        let suffix = if self.base_field == BaseField::C { "ac" } else { "ar" };
        format!("{n}{suffix}")
    }
}

fn factor(g: &GroupDescriptor) -> Result<Factor> {
    use GroupDescriptor as G;
    Ok(match g {
        G::C1Id | G::R1Id => Factor::Ga,
        G::C1Exp | G::R1Exp => Factor::Gm,
        G::R1Sin => Factor::SO2,
        G::C1Wp { omega } => Factor::EllipticCurve(omega_lattice(omega)?),
        G::R1Wp { a } => Factor::EllipticCurve(real_lattice(a)?),
        _ => return Err(Error::InvalidDescriptor(format!("{} is not one-dimensional", g.kind_name()))),
    })
}

/// Algebraic group whose universal covering is the given group.
pub fn label(g: &GroupDescriptor) -> Result<AlgGroupLabel> {
    use GroupDescriptor as G;
    g.validate()?;
    let base_field = if g.is_real() { BaseField::R } else { BaseField::C };
    let shape = match g {
        G::C2Product { f1, f2 } | G::R2Product { f1, f2 } => Shape::Product(factor(f1)?, factor(f2)?),
        G::C2Z { omega } => Shape::ExtensionByGa(omega_lattice(omega)?),
        G::C2S { omega, .. } => Shape::ExtensionByGm(omega_lattice(omega)?),
        G::C2Abelian { .. } => Shape::AbelianSurface,
        G::R2Z { a } => Shape::ExtensionByGa(real_lattice(a)?),
        G::R2S { a, .. } => Shape::ExtensionByGm(real_lattice(a)?),
        G::R2T { a, .. } => Shape::ExtensionBySO2(real_lattice(a)?),
        G::R2Abelian { .. } => Shape::SimpleAbelianSurfaceOverR,
        _ => Shape::Single(factor(g)?),
    };
    Ok(AlgGroupLabel { base_field, shape })
}

/// Point of projective space, scaled so that its largest coordinate is 1.
#[derive(Debug, Clone, Serialize)]
pub struct ProjPoint {
    pub coords: Vec<NumComplex>,
    /// true when the point came from the u ∈ Ω branch
    pub pole_branch: bool,
}

impl ProjPoint {
    fn new(raw: Vec<NumComplex>, pole_branch: bool) -> Result<Self> {
        let k = argmax(&raw.iter().map(|z| z.value).collect::<Vec<_>>());
        let piv = raw[k];
        if piv.value.norm() == 0.0 || !piv.value.is_finite() {
            return Err(Error::InvalidValue("projective point has no usable coordinate".into()));
        }
        let inv = piv.recip();
        Ok(ProjPoint { coords: raw.into_iter().map(|z| z * inv).collect(), pole_branch })
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.coords.iter().map(|z| z.value).collect()
    }
}

fn argmax(v: &[Complex64]) -> usize {
    let mut k = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[k].norm() {
            k = i;
        }
    }
    k
}

/// Scale-free distance: both points divided by their coordinate at the pivot of `a`.
pub fn proj_residual(a: &ProjPoint, b: &ProjPoint) -> f64 {
    let (x, y) = (a.values(), b.values());
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    let k = argmax(&x);
    if y[k].norm() == 0.0 {
        return f64::INFINITY;
    }
    x.iter().zip(&y).map(|(p, q)| (p / x[k] - q / y[k]).norm()).fold(0.0, f64::max)
}

fn nearest_lattice_point(ctx: &EvalContext, u: Complex64) -> (i64, i64) {
    let (m, n) = ctx.lattice.coords_of(u);
    (m.round() as i64, n.round() as i64)
}

fn one() -> NumComplex {
    NumComplex::exact(Complex64::new(1.0, 0.0))
}
fn zero() -> NumComplex {
    NumComplex::exact(Complex64::new(0.0, 0.0))
}

/// Embedding of the Ga-extension into ℙ⁵.
pub fn embed_p5(ctx: &EvalContext, u: Complex64, v: Complex64) -> Result<ProjPoint> {
    if ctx.near_lattice(u) {
        let (m, n) = nearest_lattice_point(ctx, u);
        let t = NumComplex::exact(v) - ctx.eta(m, n);
        return ProjPoint::new(vec![zero(), zero(), one(), zero(), zero(), t], true);
    }
    let p = ctx.wp(u)?;
    let dp = ctx.wp_prime(u)?;
    let w = NumComplex::exact(v) - ctx.zeta(u)?;
    let half = NumComplex::exact(Complex64::new(0.5, 0.0));
    let two = NumComplex::exact(Complex64::new(2.0, 0.0));
    ProjPoint::new(vec![one(), p, dp, w, p * w - half * dp, dp * w - two * p * p], false)
}

/// Embedding of the Gm-extension with parameter ξ ∉ Ω into ℙ⁸.
pub fn embed_p8(ctx: &EvalContext, xi: Complex64, u: Complex64, v: Complex64) -> Result<ProjPoint> {
    if ctx.near_lattice(xi) {
        return Err(Error::InvalidValue("xi must not lie in the lattice".into()));
    }
    let zx = ctx.zeta(xi)?;
    if ctx.near_lattice(u) {
        let (m, n) = nearest_lattice_point(ctx, u);
        let lam = ctx.lattice.w1c() * m as f64 + ctx.lattice.w2c() * n as f64;
        let mu = ctx.eta(m, n).scale(xi) - zx.scale(lam);
        let a = (NumComplex::exact(v) - mu).exp().scale(Complex64::new(0.5, 0.0));
        let b = (mu - NumComplex::exact(v)).exp().scale(Complex64::new(-0.5, 0.0));
        return ProjPoint::new(vec![zero(), zero(), one(), zero(), zero(), a, b, zero(), zero()], true);
    }
    for s in [1.0, -1.0] {
        if ctx.near_lattice(u - s * xi) {
            let (m, n) = ctx.lattice.coords_of(u - s * xi);
            return Err(Error::PoleAt { m: m.round() as i64, n: n.round() as i64 });
        }
    }
    let p = ctx.wp(u)?;
    let dp = ctx.wp_prime(u)?;
    let px = ctx.wp(xi)?;
    let dpx = ctx.wp_prime(xi)?;
    let sx = ctx.sigma(xi)?;
    let phi = |s: f64| -> Result<NumComplex> {
        let st = ctx.sigma_tilde(xi, s * u)?;
        Ok(st / sx * (NumComplex::exact(s * v) + zx.scale(s * u)).exp())
    };
    let (f_plus, f_minus) = (phi(1.0)?, phi(-1.0)?);
    let den = p - px;
    let fu = (dp + dpx) / den;
    let fmu = (dpx - dp) / den;
    ProjPoint::new(vec![one(), p, dp, f_plus, f_minus, p * f_plus, p * f_minus, f_plus * fu, f_minus * fmu], false)
}

/// Convenience wrappers building the evaluation context from ⟨1, ω⟩.
pub fn embed_p5_omega(omega: &crate::exactnum::ExactScalar, u: Complex64, v: Complex64) -> Result<ProjPoint> {
    embed_p5(&EvalContext::new(&omega_lattice(omega)?)?, u, v)
}

pub fn embed_p8_omega(omega: &crate::exactnum::ExactScalar, xi: Complex64, u: Complex64, v: Complex64) -> Result<ProjPoint> {
    embed_p8(&EvalContext::new(&omega_lattice(omega)?)?, xi, u, v)
}

/// max over generators and samples of the projective residual φ(p + λ) vs φ(p).
pub fn kernel_residual<F>(phi: F, gens: &[[Complex64; 2]], samples: &[(Complex64, Complex64)]) -> Result<f64>
where
    F: Fn(Complex64, Complex64) -> Result<ProjPoint>,
{
    let mut worst: f64 = 0.0;
    for g in gens {
        for &(u, v) in samples {
            let a = phi(u, v)?;
            let b = phi(u + g[0], v + g[1])?;
            worst = worst.max(proj_residual(&a, &b));
        }
    }
    Ok(worst)
}

/// Kernel generators of the ℙ⁵ embedding: (λ, η(λ)).
pub fn kernel_gens_p5(ctx: &EvalContext) -> Vec<[Complex64; 2]> {
    vec![[ctx.lattice.w1c(), ctx.eta1.value], [ctx.lattice.w2c(), ctx.eta2.value]]
}

/// Kernel generators of the ℙ⁸ embedding: (λ, ξη(λ) − λζ(ξ)) and (0, 2πi).
pub fn kernel_gens_p8(ctx: &EvalContext, xi: Complex64) -> Result<Vec<[Complex64; 2]>> {
    let zx = ctx.zeta(xi)?.value;
    let (w1, w2) = (ctx.lattice.w1c(), ctx.lattice.w2c());
    Ok(vec![
        [w1, xi * ctx.eta1.value - w1 * zx],
        [w2, xi * ctx.eta2.value - w2 * zx],
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, 2.0 * std::f64::consts::PI)],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat_int, ExactScalar};

    fn ctx() -> EvalContext {
        EvalContext::new(&LatticeSpec::exact(ExactScalar::int(1), ExactScalar::gaussian(rat_int(0), rat_int(1))).unwrap()).unwrap()
    }

    const PTS: [(f64, f64, f64, f64); 3] = [(0.31, 0.22, 0.4, -0.1), (-0.27, 0.41, -0.3, 0.5), (0.12, -0.36, 0.05, 0.2)];

    fn pts() -> Vec<(Complex64, Complex64)> {
        PTS.iter().map(|&(a, b, c, d)| (Complex64::new(a, b), Complex64::new(c, d))).collect()
    }

    #[test]
    fn p5_kernel_and_consistency() {
        let c = ctx();
        let r = kernel_residual(|u, v| embed_p5(&c, u, v), &kernel_gens_p5(&c), &pts()).unwrap();
        assert!(r < 1e-9, "{r}");
        let (u, v) = pts()[0];
        let raw = embed_p5(&c, u, v).unwrap().values();
        let x = |k: usize| raw[k] / raw[0];
        assert!((x(4) - (x(1) * x(3) - x(2) / 2.0)).norm() < 1e-10 * x(4).norm().max(1.0));
        let pole = embed_p5(&c, Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)).unwrap();
        assert!(pole.pole_branch);
        let want = Complex64::new(0.5, 0.0) - c.eta1.value;
        assert!((pole.values()[5] / pole.values()[2] - want).norm() < 1e-12);
    }

    #[test]
    fn p5_pole_branch_is_the_limit() {
        let c = ctx();
        let v = Complex64::new(0.3, 0.1);
        let lam = Complex64::new(1.0, 0.0);
        let near = embed_p5(&c, lam + Complex64::new(2e-4, 1e-4), v + c.eta1.value).unwrap();
        let at = embed_p5(&c, lam, v + c.eta1.value).unwrap();
        assert!(proj_residual(&at, &near) < 1e-3);
    }

    #[test]
    fn p8_kernel_pole_branch_and_product_identity() {
        let c = ctx();
        let xi = Complex64::new(0.37, 0.19);
        let gens = kernel_gens_p8(&c, xi).unwrap();
        let r = kernel_residual(|u, v| embed_p8(&c, xi, u, v), &gens, &pts()).unwrap();
        assert!(r < 1e-9, "{r}");
        let (u, v) = pts()[1];
        let raw = embed_p8(&c, xi, u, v).unwrap().values();
        let prod = raw[3] / raw[0] * raw[4] / raw[0];
        let want = c.wp(xi).unwrap().value - c.wp(u).unwrap().value;
        assert!((prod - want).norm() < 1e-9 * want.norm());
        let lam = Complex64::new(0.0, 1.0);
        let v = Complex64::new(0.2, -0.3);
        let shift = gens[1][1];
        let at = embed_p8(&c, xi, lam, v + shift).unwrap();
        let near = embed_p8(&c, xi, lam + Complex64::new(1e-4, -2e-4), v + shift).unwrap();
        assert!(at.pole_branch);
        assert!(proj_residual(&at, &near) < 1e-3);
        let zero = embed_p8(&c, xi, Complex64::new(0.0, 0.0), v).unwrap();
        assert!(proj_residual(&at, &zero) < 1e-9);
        for k in [0, 1, 3, 4, 7, 8] {
            assert_eq!(at.values()[k], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn labels() {
        let g = GroupDescriptor::R2Product { f1: Box::new(GroupDescriptor::R1Sin), f2: Box::new(GroupDescriptor::R1Exp) };
        let l = label(&g).unwrap();
        assert_eq!(l.shape, Shape::Product(Factor::SO2, Factor::Gm));
        assert_eq!((l.type_code().as_str(), l.to_string().as_str()), ("1ar", "SO2 x Gm"));
    }
}
