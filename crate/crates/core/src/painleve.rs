//! Representative maps of the Painlevé families and their period groups.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;
use crate::weier::{EvalContext, NumComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    G1,
    G2,
    G3,
    G4,
    G5,
    /// real type with an SO₂ factor: (℘(u), (e^{iv}σ̃_{iξ}(u) − e^{−iv}σ̃_{−iξ}(u))/2i)
    G6,
    P6,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "g1" => Family::G1,
            "g2" => Family::G2,
            "g3" => Family::G3,
            "g4" => Family::G4,
            "g5" => Family::G5,
            "g6" => Family::G6,
            "p6" => Family::P6,
            _ => return Err(Error::InvalidDescriptor(format!("unknown family {s}"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct FamilyDescriptor {
    pub family: Family,
    pub lattice: Option<LatticeSpec>,
    pub xi: Option<Complex64>,
    ctx: Option<EvalContext>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodGroup {
    pub generators: Vec<[Complex64; 2]>,
    pub rank: usize,
    /// true when the generators are not stated in closed form by the source and were derived
    pub derived: bool,
}

impl FamilyDescriptor {
    pub fn new(family: Family, lattice: Option<LatticeSpec>, xi: Option<Complex64>) -> Result<Self> {
        let needs_lattice = matches!(family, Family::G4 | Family::G5 | Family::G6);
        if needs_lattice != lattice.is_some() {
            return Err(Error::InvalidDescriptor(format!("{family:?}: lattice presence mismatch")));
        }
        if needs_lattice != xi.is_some() {
            return Err(Error::InvalidDescriptor(format!("{family:?}: xi presence mismatch")));
        }
        if let Some(x) = xi {
            match family {
                Family::G4 if x != Complex64::new(0.0, 0.0) && x != Complex64::new(1.0, 0.0) => {
                    return Err(Error::InvalidDescriptor("G4 requires xi in {0, 1}".into()))
                }
                Family::G6 if x.im != 0.0 => return Err(Error::InvalidDescriptor("G6 requires real xi".into())),
                _ => {}
            }
        }
        let ctx = lattice.as_ref().map(EvalContext::new).transpose()?;
        Ok(FamilyDescriptor { family, lattice, xi, ctx })
    }

    pub fn simple(family: Family) -> Result<Self> {
        Self::new(family, None, None)
    }

    pub fn context(&self) -> Option<&EvalContext> {
        self.ctx.as_ref()
    }
}

fn exact(z: Complex64) -> NumComplex {
    NumComplex::exact(z)
}

pub fn family_eval(d: &FamilyDescriptor, u: Complex64, v: Complex64) -> Result<(NumComplex, NumComplex)> {
    match d.family {
        Family::G1 => Ok((exact(u), exact(v))),
        Family::G2 => Ok((exact(u).exp(), exact(v))),
        Family::G3 => Ok((exact(u).exp(), exact(v).exp())),
        Family::G4 | Family::G5 | Family::G6 => {
            let ctx = d.ctx.as_ref().expect("validated");
            let xi = d.xi.expect("validated");
            let p = ctx.wp(u)?;
            let second = match d.family {
                Family::G4 => exact(v) - ctx.zeta(u)?.scale(xi),
                Family::G5 => exact(v).exp() * ctx.sigma_tilde(xi, u)?,
                _ => {
                    let i = Complex64::i();
                    let a = exact(i * v).exp() * ctx.sigma_tilde(i * xi, u)?;
                    let b = exact(-i * v).exp() * ctx.sigma_tilde(-i * xi, u)?;
                    (a - b).scale(1.0 / (2.0 * i))
                }
            };
            Ok((p, second))
        }
        Family::P6 => Err(Error::UnsupportedKind("P6".into())),
    }
}

pub fn period_lattice(d: &FamilyDescriptor) -> Result<PeriodGroup> {
    let tpi = Complex64::new(0.0, 2.0 * PI);
    let zero = Complex64::new(0.0, 0.0);
    let (generators, derived) = match d.family {
        Family::G1 => (vec![], false),
        Family::G2 => (vec![[tpi, zero]], false),
        Family::G3 => (vec![[tpi, zero], [zero, tpi]], false),
        Family::G4 | Family::G5 | Family::G6 => {
            let ctx = d.ctx.as_ref().expect("validated");
            let l = d.lattice.as_ref().expect("validated");
            let xi = d.xi.expect("validated");
            let mut g = vec![[l.w1c(), xi * ctx.eta1.value], [l.w2c(), xi * ctx.eta2.value]];
            match d.family {
                Family::G5 => g.push([zero, tpi]),
                Family::G6 => g.push([zero, Complex64::new(2.0 * PI, 0.0)]),
                _ => {}
            }
            (g, d.family == Family::G6)
        }
        Family::P6 => return Err(Error::UnsupportedKind("P6".into())),
    };
    let rank = generators.len();
    Ok(PeriodGroup { generators, rank, derived })
}

pub fn family_rank(d: &FamilyDescriptor) -> Result<usize> {
    match d.family {
        Family::P6 => Ok(4),
        _ => Ok(period_lattice(d)?.rank),
    }
}

/// max over samples of ‖f(p+λ) − f(p)‖∞ / max(‖f(p)‖∞, ‖f(p+λ)‖∞).
pub fn periodicity_residual(d: &FamilyDescriptor, lam: [Complex64; 2], samples: &[(Complex64, Complex64)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(u, v) in samples {
        let a = family_eval(d, u, v)?;
        let b = family_eval(d, u + lam[0], v + lam[1])?;
        let na = a.0.value.norm().max(a.1.value.norm());
        let nb = b.0.value.norm().max(b.1.value.norm());
        let diff = (a.0.value - b.0.value).norm().max((a.1.value - b.1.value).norm());
        worst = worst.max(diff / na.max(nb).max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// True when u lies within `tol` of a pole or zero locus of the representative map.
pub fn near_singularity(d: &FamilyDescriptor, u: Complex64, tol: f64) -> bool {
    let Some(ctx) = d.ctx.as_ref() else { return false };
    let near = |z: Complex64| ctx.dist_to_lattice(z) < tol;
    let xi = d.xi.unwrap_or_default();
    near(u)
        || match d.family {
            Family::G5 => near(u - xi),
            Family::G6 => near(u - Complex64::i() * xi) || near(u + Complex64::i() * xi),
            _ => false,
        }
}

/// Draw sample points (u, v) for a descriptor, rejecting points near poles.
pub fn sample_points<R: rand::Rng>(d: &FamilyDescriptor, rng: &mut R, n: usize) -> Vec<(Complex64, Complex64)> {
    let scale = d.lattice.as_ref().map(|l| l.w1c().norm().max(l.w2c().norm())).unwrap_or(1.0);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale;
        let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if near_singularity(d, u, 0.05 * scale) {
            continue;
        }
        out.push((u, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat_int, ExactScalar};
    use rand::SeedableRng;

    fn gauss() -> LatticeSpec {
        LatticeSpec::exact(ExactScalar::int(1), ExactScalar::gaussian(rat_int(0), rat_int(1))).unwrap()
    }

    #[test]
    fn simple_families() {
        let g2 = FamilyDescriptor::simple(Family::G2).unwrap();
        let (a, b) = family_eval(&g2, Complex64::new(0.0, 0.0), Complex64::new(5.0, 0.0)).unwrap();
        assert_eq!((a.value, b.value), (Complex64::new(1.0, 0.0), Complex64::new(5.0, 0.0)));
        let ranks: Vec<usize> =
            [Family::G1, Family::G2, Family::G3].iter().map(|&f| family_rank(&FamilyDescriptor::simple(f).unwrap()).unwrap()).collect();
        assert_eq!(ranks, vec![0, 1, 2]);
    }

    #[test]
    fn g5_with_zero_xi_is_product() {
        let d = FamilyDescriptor::new(Family::G5, Some(gauss()), Some(Complex64::new(0.0, 0.0))).unwrap();
        let u = Complex64::new(0.3, 0.2);
        let v = Complex64::new(0.1, -0.4);
        let (_, b) = family_eval(&d, u, v).unwrap();
        assert!((b.value - v.exp()).norm() < 1e-14);
    }

    #[test]
    fn generators_are_periods_and_halves_are_not() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (f, xi) in [(Family::G4, 1.0), (Family::G5, 0.3), (Family::G6, 0.41)] {
            let d = FamilyDescriptor::new(f, Some(gauss()), Some(Complex64::new(xi, 0.1 * (f == Family::G5) as i32 as f64))).unwrap();
            let pts = sample_points(&d, &mut rng, 6);
            for g in period_lattice(&d).unwrap().generators {
                assert!(periodicity_residual(&d, g, &pts).unwrap() < 1e-9, "{f:?}");
                assert!(periodicity_residual(&d, [g[0] / 2.0, g[1] / 2.0], &pts).unwrap() > 1e-3);
            }
        }
    }

    #[test]
    fn g4_xi_must_be_zero_or_one() {
        assert!(FamilyDescriptor::new(Family::G4, Some(gauss()), Some(Complex64::new(2.0, 0.0))).is_err());
    }
}
