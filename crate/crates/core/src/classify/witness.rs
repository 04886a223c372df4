//! Witness matrices built from elementary steps, realizations of classified
//! groups as concrete maps, and the periodicity check for witnesses.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use serde::Serialize;

use super::{omega_lattice, real_lattice, real_xi, GroupDescriptor, XiMembership};
use crate::error::{Error, Result};
use crate::exactnum::{det2, inverse2, mat_mul2, rat_to_f64, RatMatrix2, Rational};
use crate::lattice::{int_mat, LatticeSpec};
use crate::painleve::{family_eval, near_singularity, period_lattice, Family, FamilyDescriptor};
use crate::residue::{common_sublattice, gen_residue_rel, residue_c_rel};
use crate::weier::{EvalContext, NumComplex};

type M = [[NumComplex; 2]; 2];

fn nc(z: Complex64) -> NumComplex {
    NumComplex::exact(z)
}
fn re(x: f64) -> NumComplex {
    nc(Complex64::new(x, 0.0))
}

fn mat(a: NumComplex, b: NumComplex, c: NumComplex, d: NumComplex) -> M {
    [[a, b], [c, d]]
}

fn mat_mul(x: &M, y: &M) -> M {
    let e = |i: usize, j: usize| x[i][0] * y[0][j] + x[i][1] * y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity() -> M {
    mat(re(1.0), re(0.0), re(0.0), re(1.0))
}

/// One factor of a witness chain: the matrix and the period multiplier it needs.
#[derive(Debug, Clone)]
pub struct Step {
    pub name: String,
    pub matrix: M,
    pub multiplier: u64,
}

impl Step {
    fn new(name: impl Into<String>, matrix: M, multiplier: u64) -> Self {
        Step { name: name.into(), matrix, multiplier }
    }
}

/// Linear isomorphism α with g₂∘α algebraic over the field of g₁.
///
/// `multiplier` N certifies that g₂∘α is periodic under N·Λ(g₁).
#[derive(Debug, Clone, Serialize)]
pub struct IsoWitness {
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: M,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abcd: Option<[i64; 4]>,
    pub trace: Vec<String>,
    pub multiplier: u64,
    pub dim: usize,
}

fn ser_matrix<S: serde::Serializer>(m: &M, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 3]>> = m.iter().map(|r| r.iter().map(|z| [z.value.re, z.value.im, z.err]).collect()).collect();
    rows.serialize(s)
}

impl IsoWitness {
    pub fn scalar(rho: Complex64, abcd: Option<[i64; 4]>, multiplier: u64, note: &str) -> Self {
        IsoWitness {
            matrix: mat(nc(rho), re(0.0), re(0.0), re(0.0)),
            abcd,
            trace: vec![note.to_string()],
            multiplier: multiplier.max(1),
            dim: 1,
        }
    }

    pub fn diagonal(a: &IsoWitness, b: &IsoWitness) -> Self {
        IsoWitness {
            matrix: mat(a.matrix[0][0], re(0.0), re(0.0), b.matrix[0][0]),
            abcd: None,
            trace: [vec!["diagonal pairing".to_string()], a.trace.clone(), b.trace.clone()].concat(),
            multiplier: lcm(a.multiplier, b.multiplier),
            dim: 2,
        }
    }

    pub fn antidiagonal(a: &IsoWitness, b: &IsoWitness) -> Self {
        IsoWitness {
            matrix: mat(re(0.0), b.matrix[0][0], a.matrix[0][0], re(0.0)),
            abcd: None,
            trace: [vec!["antidiagonal pairing".to_string()], a.trace.clone(), b.trace.clone()].concat(),
            multiplier: lcm(a.multiplier, b.multiplier),
            dim: 2,
        }
    }

    /// Compose steps applied first-to-last.
    pub fn from_steps(steps: &[Step]) -> Self {
        let mut m = identity();
        let mut n = 1u64;
        let mut trace = Vec::new();
        for s in steps {
            m = mat_mul(&s.matrix, &m);
            n = n.saturating_mul(s.multiplier);
            trace.push(s.name.clone());
        }
        IsoWitness { matrix: m, abcd: None, trace, multiplier: n, dim: 2 }
    }

    /// diag(1, −i)·α·diag(1, i): transports a witness between the twisted real form and its complex model.
    pub fn conjugate_by_i(mut self) -> Self {
        let i = Complex64::i();
        self.matrix[0][1] = self.matrix[0][1].scale(i);
        self.matrix[1][0] = self.matrix[1][0].scale(-i);
        self.trace.insert(0, "twist (u, iv)".into());
        self.trace.push("untwist (u, -iv)".into());
        self
    }

    pub fn values(&self) -> [[Complex64; 2]; 2] {
        let m = &self.matrix;
        [[m[0][0].value, m[0][1].value], [m[1][0].value, m[1][1].value]]
    }

    /// α(p) for p of the witness dimension.
    pub fn apply(&self, p: &[Complex64]) -> Vec<Complex64> {
        let m = self.values();
        if self.dim == 1 {
            vec![m[0][0] * p[0]]
        } else {
            vec![m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]]
        }
    }

    pub fn det(&self) -> Complex64 {
        let m = self.values();
        if self.dim == 1 {
            m[0][0]
        } else {
            m[0][0] * m[1][1] - m[0][1] * m[1][0]
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b).max(1) * b
}

fn to_u64(r: &Rational) -> Result<u64> {
    r.abs().to_integer().to_u64().ok_or_else(|| Error::InvalidValue("multiplier too large".into()))
}

fn rat_matrix(a: i64, b: i64, c: i64, d: i64) -> RatMatrix2 {
    crate::lattice::int_to_rat(&int_mat(a, b, c, d))
}

/// From (L₁, ξ) to (L₂, ξ) for commensurable lattices, L₁ = r·L₂ (rows in L₂ coordinates).
fn commensurable_step(l2: &LatticeSpec, r: &RatMatrix2, xi: Complex64, name: &str) -> Result<Step> {
    let g = gen_residue_rel(l2, r)?;
    let h = common_sublattice(r)?;
    let m1 = mat_mul2(&h, &inverse2(r)?);
    let n = to_u64(&det2(&m1))?.max(1) * to_u64(&Rational::from_integer(g.index.denom().clone()))?;
    let idx = rat_to_f64(&g.index);
    Ok(Step::new(name, mat(re(1.0), re(0.0), g.qc.scale(xi), re(idx)), n))
}

/// From (L, ξ) to (L, k·ξ) for k = p + qω ∈ K_ω*.
fn field_multiple(l: &LatticeSpec, minpoly: Option<(Rational, Rational)>, xi: Complex64, p: &Rational, q: &Rational) -> Result<Vec<Step>> {
    if q.is_zero() {
        let n = to_u64(&Rational::from_integer(p.denom().clone()))?;
        return Ok(vec![Step::new("rational multiple of xi", mat(re(1.0), re(0.0), re(0.0), re(rat_to_f64(p))), n)]);
    }
    let (b, a) = minpoly.ok_or_else(|| Error::NotRepresentable("field multiple needs a quadratic omega".into()))?;
    let r: RatMatrix2 = [[p.clone(), q.clone()], [q * &a, p + q * &b]];
    let k = rat_to_f64(p) + rat_to_f64(q) * (l.w2c() / l.w1c());
    Ok(vec![
        Step::new("scaling by field element", mat(nc(k), re(0.0), re(0.0), re(1.0)), 1),
        commensurable_step(l, &r, k * xi, "field-multiple lattice comparison")?,
    ])
}

/// Translation of ξ by λ ∈ L ⊗ ℚ with coordinates (l₁, l₂).
fn xi_translate(ctx: &EvalContext, lam: &(Rational, Rational)) -> Result<Step> {
    let den = lcm(to_u64(&Rational::from_integer(lam.0.denom().clone()))?, to_u64(&Rational::from_integer(lam.1.denom().clone()))?);
    let eta = ctx.eta1.scale(Complex64::new(rat_to_f64(&lam.0), 0.0)) + ctx.eta2.scale(Complex64::new(rat_to_f64(&lam.1), 0.0));
    Ok(Step::new("xi-translate", mat(re(1.0), re(0.0), eta, re(1.0)), den))
}

/// Witness between ⟨1,ω₁⟩ and ⟨1,ω₂⟩ in the ζ-extension family, ω₂ = (aω₁+b)/(cω₁+d).
pub(crate) fn z_chain(l1: &LatticeSpec, abcd: [i64; 4]) -> Result<IsoWitness> {
    let [a, b, c, d] = abcd;
    let s = c as f64 * l1.w2c() + d as f64;
    let k = (a * d - b * c).unsigned_abs();
    let c13 = residue_c_rel(l1, &int_mat(d, c, b, a))?.c;
    let down = Step::new(
        "sublattice (c*omega1+d)<1,omega2> of <1,omega1>",
        mat(re(1.0), re(0.0), c13.scale(Complex64::new(-1.0 / k as f64, 0.0)), re(1.0 / k as f64)),
        k,
    );
    let scale = Step::new("scaling rho = 1/(c*omega1+d), n = 1", mat(nc(1.0 / s), re(0.0), re(0.0), nc(s)), 1);
    Ok(IsoWitness::from_steps(&[down, scale]))
}

/// Witness between (⟨1,ω₁⟩, ξ₁) and (⟨1,ω₂⟩, ξ₂) in the σ-extension family,
/// given (cω₁+d)ξ₂ = λ + kξ₁.
pub(crate) fn s_chain(
    l1: &LatticeSpec,
    minpoly: Option<(Rational, Rational)>,
    xi1: Complex64,
    abcd: [i64; 4],
    m: &XiMembership,
    xi2: Complex64,
) -> Result<IsoWitness> {
    let [a, b, c, d] = abcd;
    let s = c as f64 * l1.w2c() + d as f64;
    let ctx = EvalContext::new(l1)?;
    let mut steps = field_multiple(l1, minpoly, xi1, &m.k.0, &m.k.1)?;
    if !(m.lam.0.is_zero() && m.lam.1.is_zero()) {
        steps.push(xi_translate(&ctx, &m.lam)?);
    }
    let sxi2 = s * xi2;
    if abcd != [1, 0, 0, 1] {
        let r = rat_matrix(d, c, b, a);
        let inv = inverse2(&r)?;
        let sub = l1.transform(&r)?;
        steps.push(commensurable_step(&sub, &inv, sxi2, "sublattice (c*omega1+d)<1,omega2> of <1,omega1>")?);
    }
    steps.push(Step::new("scaling rho = 1/(c*omega1+d), n = 1", mat(nc(1.0 / s), re(0.0), re(0.0), re(1.0)), 1));
    Ok(IsoWitness::from_steps(&steps))
}

/// One-dimensional chart.
#[derive(Debug, Clone)]
pub enum Map1 {
    Id,
    Exp,
    Sin,
    Wp(Box<EvalContext>),
}

impl Map1 {
    fn eval(&self, u: Complex64) -> Result<NumComplex> {
        Ok(match self {
            Map1::Id => nc(u),
            Map1::Exp => nc(u).exp(),
            Map1::Sin => nc(u.sin()),
            Map1::Wp(ctx) => ctx.wp(u)?,
        })
    }
    fn periods(&self) -> Vec<Complex64> {
        match self {
            Map1::Id => vec![],
            Map1::Exp => vec![Complex64::new(0.0, 2.0 * PI)],
            Map1::Sin => vec![Complex64::new(2.0 * PI, 0.0)],
            Map1::Wp(ctx) => vec![ctx.lattice.w1c(), ctx.lattice.w2c()],
        }
    }
    fn near_pole(&self, u: Complex64, tol: f64) -> bool {
        match self {
            Map1::Wp(ctx) => ctx.dist_to_lattice(u) < tol,
            _ => false,
        }
    }
    fn scale(&self) -> f64 {
        match self {
            Map1::Wp(ctx) => ctx.lattice.w1c().norm().max(ctx.lattice.w2c().norm()),
            _ => 1.0,
        }
    }
}

/// A classified group as a concrete map with its period generators.
#[derive(Debug, Clone)]
pub enum Realization {
    One(Map1),
    Product(Map1, Map1),
    Family(FamilyDescriptor),
}

fn map1(g: &GroupDescriptor) -> Result<Map1> {
    use GroupDescriptor as G;
    Ok(match g {
        G::C1Id | G::R1Id => Map1::Id,
        G::C1Exp | G::R1Exp => Map1::Exp,
        G::R1Sin => Map1::Sin,
        G::C1Wp { omega } => Map1::Wp(Box::new(EvalContext::new(&omega_lattice(omega)?)?)),
        G::R1Wp { a } => Map1::Wp(Box::new(EvalContext::new(&real_lattice(a)?)?)),
        _ => return Err(Error::UnsupportedKind(g.kind_name().into())),
    })
}

/// Concrete map realizing a descriptor.
pub fn realize(g: &GroupDescriptor) -> Result<Realization> {
    use GroupDescriptor as G;
    let fam = |f: Family, l: LatticeSpec, xi: Complex64| Ok(Realization::Family(FamilyDescriptor::new(f, Some(l), Some(xi))?));
    match g {
        G::C2Product { f1, f2 } | G::R2Product { f1, f2 } => Ok(Realization::Product(map1(f1)?, map1(f2)?)),
        G::C2Z { omega } => fam(Family::G4, omega_lattice(omega)?, Complex64::new(1.0, 0.0)),
        G::C2S { omega, xi } => fam(Family::G5, omega_lattice(omega)?, xi.value(omega.to_complex())),
        G::R2Z { a } => fam(Family::G4, real_lattice(a)?, Complex64::new(1.0, 0.0)),
        G::R2S { a, xi } | G::R2T { a, xi } => {
            let x = real_xi(a, xi)?.value(a.to_complex());
            let f = if matches!(g, G::R2S { .. }) { Family::G5 } else { Family::G6 };
            fam(f, real_lattice(a)?, Complex64::new(x.re, 0.0))
        }
        G::C2Abelian { .. } | G::R2Abelian { .. } => Err(Error::UnsupportedKind("abelian surfaces have no realization".into())),
        _ => Ok(Realization::One(map1(g)?)),
    }
}

impl Realization {
    pub fn dim(&self) -> usize {
        match self {
            Realization::One(_) => 1,
            _ => 2,
        }
    }

    pub fn eval(&self, p: &[Complex64]) -> Result<Vec<NumComplex>> {
        match self {
            Realization::One(f) => Ok(vec![f.eval(p[0])?]),
            Realization::Product(f, g) => Ok(vec![f.eval(p[0])?, g.eval(p[1])?]),
            Realization::Family(d) => {
                let (a, b) = family_eval(d, p[0], p[1])?;
                Ok(vec![a, b])
            }
        }
    }

    pub fn periods(&self) -> Result<Vec<Vec<Complex64>>> {
        let z = Complex64::new(0.0, 0.0);
        Ok(match self {
            Realization::One(f) => f.periods().into_iter().map(|w| vec![w]).collect(),
            Realization::Product(f, g) => {
                f.periods().into_iter().map(|w| vec![w, z]).chain(g.periods().into_iter().map(|w| vec![z, w])).collect()
            }
            Realization::Family(d) => period_lattice(d)?.generators.into_iter().map(|g| g.to_vec()).collect(),
        })
    }

    pub fn scale(&self) -> f64 {
        match self {
            Realization::One(f) => f.scale(),
            Realization::Product(f, g) => f.scale().max(g.scale()),
            Realization::Family(d) => d.lattice.as_ref().map_or(1.0, |l| l.w1c().norm().max(l.w2c().norm())),
        }
    }

    pub fn near_pole(&self, p: &[Complex64]) -> bool {
        let tol = 0.05 * self.scale();
        match self {
            Realization::One(f) => f.near_pole(p[0], tol),
            Realization::Product(f, g) => f.near_pole(p[0], tol) || g.near_pole(p[1], tol),
            Realization::Family(d) => near_singularity(d, p[0], tol),
        }
    }
}

fn rel_diff(a: &[NumComplex], b: &[NumComplex]) -> f64 {
    let n = |v: &[NumComplex]| v.iter().map(|z| z.value.norm()).fold(0.0, f64::max);
    let d = a.iter().zip(b).map(|(x, y)| (x.value - y.value).norm()).fold(0.0, f64::max);
    d / n(a).max(n(b)).max(f64::MIN_POSITIVE)
}

/// max residual of g₂∘α under N·λ for each period generator λ of g₁, over `per_gen` samples.
pub fn witness_residual(g1: &GroupDescriptor, g2: &GroupDescriptor, w: &IsoWitness, per_gen: usize, seed: u64) -> Result<f64> {
    let r1 = realize(g1)?;
    let r2 = realize(g2)?;
    if r1.dim() != w.dim || r2.dim() != w.dim {
        return Err(Error::BasisMismatch("witness dimension differs from descriptors".into()));
    }
    if w.det().norm() == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let scale = r1.scale();
    let n = w.multiplier as f64;
    let mut worst: f64 = 0.0;
    for lam in r1.periods()? {
        let shift: Vec<Complex64> = lam.iter().map(|z| z * n).collect();
        let mut done = 0;
        let mut tries = 0;
        while done < per_gen {
            tries += 1;
            if tries > 200 * per_gen {
                return Err(Error::NoConvergence("could not sample away from poles".into()));
            }
            let p: Vec<Complex64> = (0..w.dim)
                .map(|i| {
                    let s = if i == 0 { scale } else { 1.0 };
                    Complex64::new(rand::Rng::random_range(&mut rng, -0.5..0.5), rand::Rng::random_range(&mut rng, -0.5..0.5)) * s
                })
                .collect();
            let q: Vec<Complex64> = p.iter().zip(&shift).map(|(a, b)| a + b).collect();
            let (ap, aq) = (w.apply(&p), w.apply(&q));
            if r2.near_pole(&ap) || r2.near_pole(&aq) {
                continue;
            }
            let (fa, fb) = match (r2.eval(&ap), r2.eval(&aq)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            worst = worst.max(rel_diff(&fa, &fb));
            done += 1;
        }
    }
    Ok(worst)
}

/// Periodicity check with five samples per generator and a fixed seed.
pub fn witness_periodicity(g1: &GroupDescriptor, g2: &GroupDescriptor, w: &IsoWitness) -> Result<f64> {
    witness_residual(g1, g2, w, 5, 0x5eed)
}
