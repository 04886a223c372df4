//! Automorphism groups of the classified groups.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{iso_c1, omega_lattice, real_lattice, real_xi, GroupDescriptor};
use crate::error::{Error, Result};
use crate::exactnum::{det2, rat_to_f64, ExactScalar, FieldSpec, RatMatrix2, Rational};
use crate::lattice::LatticeSpec;
use crate::residue::gen_residue_rel;

pub type Mat2 = [[Complex64; 2]; 2];

/// Parameter domain of a one-parameter family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Domain {
    C,
    R,
    Q,
    /// K_ω for ω (quadratic or not)
    K(ExactScalar),
}

impl Domain {
    fn name(&self) -> String {
        match self {
            Domain::C => "C*".into(),
            Domain::R => "R*".into(),
            Domain::Q => "Q*".into(),
            Domain::K(w) => format!("{}*", field_name(w)),
        }
    }

    fn check(&self, q: &ExactScalar) -> Result<()> {
        if q.is_zero() {
            return Err(Error::InvalidValue("parameter must be nonzero".into()));
        }
        let ok = match self {
            Domain::C => true,
            Domain::R => q.is_real(),
            Domain::Q => q.as_rational().is_some(),
            Domain::K(w) => k_coords(w, q).is_some(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidValue(format!("{q} is not in {}", self.name())))
        }
    }
}

/// K_ω written out: Q(sqrt(D)) for quadratic ω, Q otherwise.
pub fn field_name(w: &ExactScalar) -> String {
    match w.field() {
        FieldSpec::QuadraticField(d) => format!("Q(sqrt({d}))"),
        FieldSpec::Q => "Q".into(),
    }
}

/// (p, r) with q = p + r·ω, when q ∈ K_ω.
fn k_coords(w: &ExactScalar, q: &ExactScalar) -> Option<(Rational, Rational)> {
    if let Some(r) = q.as_rational() {
        return Some((r.clone(), Rational::zero()));
    }
    match (w, q) {
        (ExactScalar::Quad(a), ExactScalar::Quad(b)) if a.d() == b.d() && !a.y.is_zero() => {
            let r = &b.y / &a.y;
            Some((&b.x - &r * &a.x, r))
        }
        _ => None,
    }
}

/// How the concrete matrices of a descriptor are produced.
#[derive(Debug, Clone)]
pub enum AutFamily {
    /// One-dimensional: u ↦ q·u.
    Scalar(Domain),
    /// A matrix group containing the scalars of the domain; instances are q·I.
    Group(Domain),
    /// q·[[1, 0], [t·q𝔠(Ω, qΩ), e]] with t = ξ (or 1), e = [Ω:qΩ]/q² when `index_entry`.
    Affine { lattice: LatticeSpec, omega: Option<ExactScalar>, xi: Complex64, index_entry: bool, domain: Domain },
}

#[derive(Debug, Clone, Serialize)]
pub struct AutDescriptor {
    pub case_id: String,
    pub real: bool,
    pub dim: usize,
    /// e.g. "Diag(Q*, C*)" or "{q (1 0; xi*qc(Omega,q*Omega) 1) : q in Q*}"
    pub group: String,
    pub param_domain: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub family: AutFamily,
}

const KSTAR_NOTE: &str = "K_omega is read as its unit group K_omega* under multiplication";

impl AutDescriptor {
    fn new(case_id: &str, real: bool, dim: usize, group: String, family: AutFamily) -> Self {
        let param_domain = match &family {
            AutFamily::Scalar(d) | AutFamily::Group(d) => d.name(),
            AutFamily::Affine { domain, .. } => domain.name(),
        };
        let notes = if group.contains("Q(sqrt")
            || matches!(&family, AutFamily::Scalar(Domain::K(_)) | AutFamily::Affine { domain: Domain::K(_), .. })
        {
            vec![KSTAR_NOTE.to_string()]
        } else {
            vec![]
        };
        AutDescriptor { case_id: case_id.into(), real, dim, group, param_domain, notes, family }
    }

    /// Concrete automorphism for parameter q (a dim×dim matrix).
    pub fn numeric_instance(&self, q: &ExactScalar) -> Result<Vec<Vec<Complex64>>> {
        let qv = q.to_complex();
        let zero = Complex64::new(0.0, 0.0);
        match &self.family {
            AutFamily::Scalar(d) => {
                d.check(q)?;
                Ok(vec![vec![qv]])
            }
            AutFamily::Group(d) => {
                d.check(q)?;
                Ok(vec![vec![qv, zero], vec![zero, qv]])
            }
            AutFamily::Affine { lattice, omega, xi, index_entry, domain } => {
                domain.check(q)?;
                let (p, r) = match omega {
                    Some(w) => k_coords(w, q).expect("checked"),
                    None => (q.as_rational().expect("checked").clone(), Rational::zero()),
                };
                let (b, a) = omega.as_ref().and_then(|w| w.minpoly()).unwrap_or_else(|| (Rational::zero(), Rational::zero()));
                let rel: RatMatrix2 = [[p.clone(), r.clone()], [&r * &a, &p + &r * &b]];
                let qc = gen_residue_rel(lattice, &rel)?.qc.value;
                let e = if *index_entry { rat_to_f64(&det2(&rel).abs()) / (qv * qv) } else { Complex64::new(1.0, 0.0) };
                Ok(vec![vec![qv, zero], vec![qv * xi * qc, qv * e]])
            }
        }
    }
}

/// Largest listed domain contained in both.
fn meet(a: &Domain, b: &Domain) -> Domain {
    match (a, b) {
        (Domain::C, x) | (x, Domain::C) => x.clone(),
        (Domain::K(x), Domain::K(y)) if x.field() == y.field() => a.clone(),
        _ => Domain::Q,
    }
}

fn one_dim_domain(g: &GroupDescriptor) -> Result<Domain> {
    use GroupDescriptor as G;
    Ok(match g {
        G::C1Id => Domain::C,
        G::R1Id => Domain::R,
        G::C1Exp | G::R1Exp | G::R1Sin | G::R1Wp { .. } => Domain::Q,
        G::C1Wp { omega } => match omega.field() {
            FieldSpec::Q => Domain::Q,
            _ => Domain::K(omega.clone()),
        },
        _ => return Err(Error::UnsupportedKind(g.kind_name().into())),
    })
}

pub fn aut_c1(g: &GroupDescriptor) -> Result<AutDescriptor> {
    if g.is_real() || g.dim() != 1 {
        return Err(Error::UnsupportedKind("aut_c1 takes one-dimensional complex kinds".into()));
    }
    g.validate()?;
    let d = one_dim_domain(g)?;
    let case = super::classify_1d(g).expect("1-dim").to_string();
    Ok(AutDescriptor::new(&case, false, 1, d.name(), AutFamily::Scalar(d)))
}

pub fn aut_r1(g: &GroupDescriptor) -> Result<AutDescriptor> {
    if !g.is_real() || g.dim() != 1 {
        return Err(Error::UnsupportedKind("aut_r1 takes one-dimensional real kinds".into()));
    }
    g.validate()?;
    let d = one_dim_domain(g)?;
    let case = super::classify_1d(g).expect("1-dim").to_string();
    Ok(AutDescriptor::new(&case, true, 1, d.name(), AutFamily::Scalar(d)))
}

fn affine(case: &str, real: bool, lattice: LatticeSpec, omega: Option<ExactScalar>, xi: Option<Complex64>) -> AutDescriptor {
    let domain = match &omega {
        Some(w) if w.minpoly().is_some() => Domain::K(w.clone()),
        _ => Domain::Q,
    };
    let index_entry = xi.is_none();
    let group = if index_entry {
        format!("{{q (1 0; qc(Omega,q*Omega) [Omega:q*Omega]/q^2) : q in {}}}", domain.name())
    } else {
        format!("{{q (1 0; xi*qc(Omega,q*Omega) 1) : q in {}}}", domain.name())
    };
    let omega = if matches!(domain, Domain::K(_)) { omega } else { None };
    AutDescriptor::new(
        case,
        real,
        2,
        group,
        AutFamily::Affine { lattice, omega, xi: xi.unwrap_or(Complex64::new(1.0, 0.0)), index_entry, domain },
    )
}

pub fn aut_c2(g: &GroupDescriptor) -> Result<AutDescriptor> {
    use GroupDescriptor as G;
    g.validate()?;
    match g {
        G::C2Product { f1, f2 } => {
            let (d1, d2) = (one_dim_domain(f1)?, one_dim_domain(f2)?);
            let rank = |f: &GroupDescriptor| super::classify_1d(f).expect("1-dim");
            let (case, group) = match (rank(f1), rank(f2)) {
                (1, 1) => ("1", "GL2(C)".to_string()),
                (2, 2) => ("4", "GL2(Q)".to_string()),
                (3, 3) => {
                    // ℘_{ω₁}(τu) algebraic over ℂ(℘_{ω₂}(u))
                    match iso_c1(f2, f1)? {
                        Some(w) => {
                            let tau = w.matrix[0][0].value;
                            let G::C1Wp { omega } = f1.as_ref() else { unreachable!() };
                            ("6.1", format!("diag(1,tau^-1) GL2({}) diag(1,tau), tau = {} + {}i", field_name(omega), tau.re, tau.im))
                        }
                        None => ("6.2", format!("Diag({}, {})", d1.name(), d2.name())),
                    }
                }
                (a, b) => {
                    let case = match (a.min(b), a.max(b)) {
                        (1, 2) => "2",
                        (1, 3) => "3",
                        _ => "5",
                    };
                    (case, format!("Diag({}, {})", d1.name(), d2.name()))
                }
            };
            let scalars = meet(&d1, &d2);
            Ok(AutDescriptor::new(case, false, 2, group, AutFamily::Group(scalars)))
        }
        G::C2Z { omega } => Ok(affine("7", false, omega_lattice(omega)?, Some(omega.clone()), None)),
        G::C2S { omega, xi } => Ok(affine("8", false, omega_lattice(omega)?, None, Some(xi.value(omega.to_complex())))),
        G::C2Abelian { .. } => Err(Error::UnsupportedKind("abelian surfaces are opaque".into())),
        _ => Err(Error::UnsupportedKind("aut_c2 takes two-dimensional complex kinds".into())),
    }
}

pub fn aut_r2(g: &GroupDescriptor) -> Result<AutDescriptor> {
    use GroupDescriptor as G;
    g.validate()?;
    match g {
        G::R2Product { f1, f2 } => {
            let (d1, d2) = (one_dim_domain(f1)?, one_dim_domain(f2)?);
            let kinds = (super::classify_1d(f1).expect("1-dim"), super::classify_1d(f2).expect("1-dim"));
            let (case, group) = match kinds {
                (1, 1) => ("1", "GL2(R)".to_string()),
                (1, _) | (_, 1) => ("2", format!("Diag({}, {})", d1.name(), d2.name())),
                (a, b) if a == b && a != 4 => ("3", "GL2(Q)".to_string()),
                (4, 4) => {
                    let (G::R1Wp { a }, G::R1Wp { a: b }) = (f1.as_ref(), f2.as_ref()) else { unreachable!() };
                    if super::real_ratio(a, b).is_some() {
                        ("5.1", "GL2(Q)".to_string())
                    } else {
                        ("5.2", "Diag(Q*, Q*)".to_string())
                    }
                }
                _ => ("4", "Diag(Q*, Q*)".to_string()),
            };
            let scalars = if case == "1" { Domain::R } else { Domain::Q };
            Ok(AutDescriptor::new(case, true, 2, group, AutFamily::Group(scalars)))
        }
        G::R2Z { a } => Ok(affine("6", true, real_lattice(a)?, None, None)),
        G::R2S { a, xi } | G::R2T { a, xi } => {
            let x = real_xi(a, xi)?.value(a.to_complex()).re;
            let case = if matches!(g, G::R2S { .. }) { "7" } else { "8" };
            Ok(affine(case, true, real_lattice(a)?, None, Some(Complex64::new(x, 0.0))))
        }
        G::R2Abelian { .. } => Err(Error::UnsupportedKind("abelian surfaces are opaque".into())),
        _ => Err(Error::UnsupportedKind("aut_r2 takes two-dimensional real kinds".into())),
    }
}

/// Dispatch on dimension and base field.
pub fn aut(g: &GroupDescriptor) -> Result<AutDescriptor> {
    match (g.is_real(), g.dim()) {
        (false, 1) => aut_c1(g),
        (true, 1) => aut_r1(g),
        (false, _) => aut_c2(g),
        (true, _) => aut_r2(g),
    }
}
