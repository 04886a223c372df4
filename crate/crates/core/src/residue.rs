//! Residue constants of a sublattice and the generalized index/residue of
//! commensurable lattices.
//!
//! For Ω₁ ≤ Ω₂ with coset representatives a₁ = 0, a₂, …, aₙ:
//!
//! ```text
//! ℘₂(u) = Σ ℘₁(u+aᵢ) − c
//! ζ₂(u) = Σ ζ₁(u+aᵢ) + c·u + C
//! σ₂(u) = exp(c/2·u² + C·u + C′) Π σ₁(u+aᵢ)
//! ```

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{det2, inverse2, mat_mul2, RatMatrix2, Rational};
use crate::lattice::{int_to_rat, intersect_rational, relation, CosetSystem, IntMat2, LatticeSpec};
use crate::weier::{EvalContext, NumComplex};

#[derive(Debug, Clone)]
pub struct CosetConstants {
    pub c: NumComplex,
    pub big_c: NumComplex,
    pub c_prime: NumComplex,
    pub rep_system: CosetSystem,
    pub anchor_u0: Complex64,
}

#[derive(Debug, Clone)]
pub struct GenResidue {
    pub index: Rational,
    pub qc: NumComplex,
    pub common_sub: LatticeSpec,
}

fn anchor(sup: &LatticeSpec) -> Complex64 {
    Complex64::new(0.37, 0.11) * sup.w1c()
}

fn sum_nc(it: impl Iterator<Item = NumComplex>) -> NumComplex {
    it.fold(NumComplex::exact(Complex64::new(0.0, 0.0)), |a, b| a + b)
}

/// Constants for the sublattice whose basis, in `sup` coordinates, is the rows of `m`.
pub fn residue_c_rel(sup: &LatticeSpec, m: &IntMat2) -> Result<CosetConstants> {
    from_system(CosetSystem::from_matrix(sup, m)?)
}

/// Constants for exact lattices sub ≤ sup.
pub fn residue_c(sup: &LatticeSpec, sub: &LatticeSpec) -> Result<CosetConstants> {
    from_system(crate::lattice::coset_reps(sup, sub)?)
}

pub fn from_system(sys: CosetSystem) -> Result<CosetConstants> {
    let sub_ctx = EvalContext::new(&sys.sub)?;
    let sup_ctx = EvalContext::new(&sys.sup)?;
    let nonzero: Vec<Complex64> = sys.reps.iter().skip(1).copied().collect();
    let c = sum_nc(nonzero.iter().map(|&b| sub_ctx.wp(b)).collect::<Result<Vec<_>>>()?.into_iter());
    let mut u0 = anchor(&sys.sup);
    // nudge the anchor off any pole of the shifted sub functions
    for k in 0..8 {
        if !sys.reps.iter().any(|&a| sub_ctx.near_lattice(u0 + a)) && !sup_ctx.near_lattice(u0) {
            break;
        }
        u0 += Complex64::new(0.013, 0.029) * (k + 1) as f64 * sys.sup.w1c();
    }
    let u0n = NumComplex::exact(u0);
    let zs = sum_nc(sys.reps.iter().map(|&a| sub_ctx.zeta(u0 + a)).collect::<Result<Vec<_>>>()?.into_iter());
    let big_c = sup_ctx.zeta(u0)? - zs - c * u0n;
    let prod = sys
        .reps
        .iter()
        .map(|&a| sub_ctx.sigma(u0 + a))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(NumComplex::exact(Complex64::new(1.0, 0.0)), |a, b| a * b);
    let ratio = sup_ctx.sigma(u0)? / prod;
    let log = NumComplex::new(ratio.value.ln(), ratio.err / ratio.value.norm());
    let half = NumComplex::exact(Complex64::new(0.5, 0.0));
    let c_prime = log - half * c * u0n * u0n - big_c * u0n;
    Ok(CosetConstants { c, big_c, c_prime, rep_system: sys, anchor_u0: u0 })
}

/// Relative residuals of the four coset identities at (u, ξ).
pub fn identity_residuals(k: &CosetConstants, u: Complex64, xi: Complex64) -> Result<[f64; 4]> {
    let sys = &k.rep_system;
    let sub = EvalContext::new(&sys.sub)?;
    let sup = EvalContext::new(&sys.sup)?;
    let (c, cc, cp) = (k.c.value, k.big_c.value, k.c_prime.value);
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / a.norm().max(b.norm()).max(1e-300);

    let mut wp = Complex64::new(0.0, 0.0);
    let mut ze = Complex64::new(0.0, 0.0);
    let mut si = Complex64::new(1.0, 0.0);
    let mut st = Complex64::new(1.0, 0.0);
    for &a in &sys.reps {
        wp += sub.wp(u + a)?.value;
        ze += sub.zeta(u + a)?.value;
        si *= sub.sigma(u + a)?.value;
        st *= sub.sigma_tilde(xi, u + a)?.value;
    }
    let r1 = rel(sup.wp(u)?.value, wp - c);
    // additive identity: scale by the size of the summands
    let zl = sup.zeta(u)?.value;
    let zr = ze + c * u + cc;
    let r2 = (zl - zr).norm() / zl.norm().max(zr.norm()).max((c * u).norm()).max(1.0);
    let r3 = rel(sup.sigma(u)?.value, (c / 2.0 * u * u + cc * u + cp).exp() * si);
    let r4 = rel(sup.sigma_tilde(xi, u)?.value, (-xi * c * u + c / 2.0 * xi * xi - cc * xi).exp() * st);
    Ok([r1, r2, r3, r4])
}

/// [L2 : L1] from the relation matrix (rows: L1 basis in L2 coordinates).
pub fn gen_index_rel(r: &RatMatrix2) -> Rational {
    det2(r).abs()
}

pub fn gen_index(l2: &LatticeSpec, l1: &LatticeSpec) -> Result<Rational> {
    Ok(gen_index_rel(&relation(l2, l1)?))
}

fn to_int_mat(m: &RatMatrix2) -> Option<IntMat2> {
    let f = |x: &Rational| x.is_integer().then(|| x.to_integer());
    Some([[f(&m[0][0])?, f(&m[0][1])?], [f(&m[1][0])?, f(&m[1][1])?]])
}

/// q𝔠(L2, L1) through an explicit common sublattice `omega` (basis in L2 coordinates).
pub fn gen_residue_with_sub(l2: &LatticeSpec, r: &RatMatrix2, omega: &RatMatrix2) -> Result<GenResidue> {
    let l1 = l2.transform(r)?;
    let m2 = to_int_mat(omega).ok_or(Error::NotContained)?;
    let m1 = to_int_mat(&mat_mul2(omega, &inverse2(r)?)).ok_or(Error::NotContained)?;
    let i2 = det2(&int_to_rat(&m2)).abs();
    let i1 = det2(&int_to_rat(&m1)).abs();
    let index = &i2 / &i1;
    let c2 = residue_c_rel(l2, &m2)?;
    let c1 = residue_c_rel(&l1, &m1)?;
    let k = NumComplex::exact(Complex64::new(crate::exactnum::rat_to_f64(&index), 0.0));
    let qc = c2.c - k * c1.c;
    Ok(GenResidue { index, qc, common_sub: c2.rep_system.sub })
}

/// Canonical common sublattice of L2 and r·L2 (Hermite form of the intersection).
pub fn common_sublattice(r: &RatMatrix2) -> Result<RatMatrix2> {
    let id: RatMatrix2 = [[BigRational::one(), BigRational::zero()], [BigRational::zero(), BigRational::one()]];
    intersect_rational(&id, r)
}

pub fn gen_residue_rel(l2: &LatticeSpec, r: &RatMatrix2) -> Result<GenResidue> {
    if det2(r).is_zero() {
        return Err(Error::SingularMatrix);
    }
    gen_residue_with_sub(l2, r, &common_sublattice(r)?)
}

pub fn gen_residue(l2: &LatticeSpec, l1: &LatticeSpec) -> Result<GenResidue> {
    gen_residue_rel(l2, &relation(l2, l1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int, ExactScalar};
    use crate::lattice::int_mat;

    fn std_lattice() -> LatticeSpec {
        LatticeSpec::exact(ExactScalar::int(1), ExactScalar::gaussian(rat_int(0), rat_int(1))).unwrap()
    }

    #[test]
    fn trivial_and_symmetric_cases() {
        let l = std_lattice();
        assert_eq!(residue_c(&l, &l).unwrap().c.value, Complex64::new(0.0, 0.0));
        let k = residue_c_rel(&l, &int_mat(2, 0, 0, 2)).unwrap();
        assert!(k.c.value.norm() < 1e-10);
        let k = residue_c_rel(&l, &int_mat(1, 0, 0, 2)).unwrap();
        let direct =
            crate::weier::oracle::wp_lattice_sum(Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(0.0, 1.0), 300);
        assert!(k.c.value.im.abs() < 1e-12 && k.c.value.re.abs() > 1.0);
        assert!((k.c.value - direct).norm() < 1e-4 * direct.norm());
    }

    #[test]
    fn identities_hold() {
        let l = std_lattice();
        let k = residue_c_rel(&l, &int_mat(3, 1, 0, 3)).unwrap();
        for u in [Complex64::new(0.21, 0.4), Complex64::new(-1.3, 0.77)] {
            let r = identity_residuals(&k, u, Complex64::new(0.3, -0.2)).unwrap();
            assert!(r[0] < 1e-9 && r[1] < 1e-9 && r[2] < 1e-8 && r[3] < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn index_and_telescoping() {
        let l = std_lattice();
        let r = [[rat(3, 2), rat_int(0)], [rat_int(0), rat(3, 2)]];
        assert_eq!(gen_index_rel(&r), rat(9, 4));
        let g = gen_residue_rel(&l, &r).unwrap();
        let cm = residue_c_rel(&l, &int_mat(3, 0, 0, 3)).unwrap().c.value;
        let cn = residue_c_rel(&l, &int_mat(2, 0, 0, 2)).unwrap().c.value;
        // the Gaussian lattice has vanishing residues for scalar sublattices
        assert!((g.qc.value - (cm - cn)).norm() < 1e-8);
        let id = crate::exactnum::identity2();
        let g = gen_residue_rel(&l, &id).unwrap();
        assert_eq!(g.index, rat_int(1));
        assert_eq!(g.qc.value, Complex64::new(0.0, 0.0));
    }
}
