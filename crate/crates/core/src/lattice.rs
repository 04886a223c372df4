//! Complex lattices: normalization and reduction, sublattice indices, coset
//! representatives, intersections, commensurability witnesses and
//! conjugation invariance.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{
    adjugate2, clear_denominators, det2, linalg, mat_mul2, rat_int, rational_coordinates, ExactScalar, RatMatrix2, Rational,
};

/// 2×2 integer matrix, row major.
pub type IntMat2 = [[BigInt; 2]; 2];

pub fn int_mat(a: i64, b: i64, c: i64, d: i64) -> IntMat2 {
    [[BigInt::from(a), BigInt::from(b)], [BigInt::from(c), BigInt::from(d)]]
}

pub fn int_to_rat(m: &IntMat2) -> RatMatrix2 {
    let r = |x: &BigInt| Rational::from_integer(x.clone());
    [[r(&m[0][0]), r(&m[0][1])], [r(&m[1][0]), r(&m[1][1])]]
}

fn rat_to_int(m: &RatMatrix2) -> Option<IntMat2> {
    let i = |x: &Rational| x.is_integer().then(|| x.to_integer());
    Some([[i(&m[0][0])?, i(&m[0][1])?], [i(&m[1][0])?, i(&m[1][1])?]])
}

/// A lattice generator: exact scalar or plain complex number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gen {
    Exact(ExactScalar),
    Numeric([f64; 2]),
}

impl Gen {
    pub fn value(&self) -> Complex64 {
        match self {
            Gen::Exact(e) => e.to_complex(),
            Gen::Numeric([re, im]) => Complex64::new(*re, *im),
        }
    }
    pub fn exact(&self) -> Option<&ExactScalar> {
        match self {
            Gen::Exact(e) => Some(e),
            Gen::Numeric(_) => None,
        }
    }
    pub fn num(z: Complex64) -> Gen {
        Gen::Numeric([z.re, z.im])
    }
}

impl From<ExactScalar> for Gen {
    fn from(e: ExactScalar) -> Self {
        Gen::Exact(e)
    }
}

/// Lattice ⟨w1, w2⟩ with cached normalization and SL₂(Z) reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr", into = "LatticeRepr")]
pub struct LatticeSpec {
    pub w1: Gen,
    pub w2: Gen,
    scale: Complex64,
    tau: Complex64,
    reduced_tau: Complex64,
    reduction: [[i64; 2]; 2],
    /// eval_scale·⟨1, reduced_tau⟩ = L
    eval_scale: Complex64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeRepr {
    w1: Gen,
    w2: Gen,
}

impl TryFrom<LatticeRepr> for LatticeSpec {
    type Error = Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        LatticeSpec::new(r.w1, r.w2)
    }
}

impl From<LatticeSpec> for LatticeRepr {
    fn from(l: LatticeSpec) -> Self {
        LatticeRepr { w1: l.w1, w2: l.w2 }
    }
}

fn gauss_reduce_numeric(mut tau: Complex64) -> ([[i64; 2]; 2], Complex64) {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..10_000 {
        let k = tau.re.round();
        if k != 0.0 {
            tau -= k;
            let k = k as i64;
            m = [[m[0][0] - k * m[1][0], m[0][1] - k * m[1][1]], m[1]];
        }
        if tau.norm_sqr() < 1.0 - 1e-14 {
            tau = -1.0 / tau;
            m = [[-m[1][0], -m[1][1]], m[0]];
        } else {
            break;
        }
    }
    (m, tau)
}

/// Exact Gauss reduction for τ = x + y√D, D < 0.
fn gauss_reduce_quad(tau: &ExactScalar) -> Option<([[i64; 2]; 2], ExactScalar)> {
    let ExactScalar::Quad(q) = tau else { return None };
    if q.d() >= 0 || q.y.is_zero() {
        return None;
    }
    let mut t = tau.clone();
    let mut m = [[1i64, 0], [0, 1]];
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for _ in 0..10_000 {
        let ExactScalar::Quad(cur) = &t else { return None };
        let k = (&cur.x + &half).floor();
        if !k.is_zero() {
            t = t.sub(&ExactScalar::Rat(k.clone())).ok()?;
            let k = k.to_integer().to_i64()?;
            m = [[m[0][0] - k * m[1][0], m[0][1] - k * m[1][1]], m[1]];
        }
        let ExactScalar::Quad(cur) = &t else { return None };
        let norm = cur.norm();
        if norm < rat_int(1) {
            t = ExactScalar::int(-1).div(&t).ok()?;
            m = [[-m[1][0], -m[1][1]], m[0]];
        } else {
            break;
        }
    }
    Some((m, t))
}

impl LatticeSpec {
    pub fn new(w1: Gen, w2: Gen) -> Result<Self> {
        let (z1, z2) = (w1.value(), w2.value());
        if z1.norm() == 0.0 || z2.norm() == 0.0 || !z1.is_finite() || !z2.is_finite() {
            return Err(Error::DegenerateLattice);
        }
        let exact_ratio = match (w1.exact(), w2.exact()) {
            (Some(a), Some(b)) => b.div(a).ok(),
            _ => None,
        };
        if let Some(r) = &exact_ratio {
            let real = match r {
                ExactScalar::Rat(_) => true,
                ExactScalar::Quad(q) => q.d() > 0 || q.y.is_zero(),
                ExactScalar::Sym(_) => false,
            };
            if real {
                return Err(Error::DegenerateLattice);
            }
        }
        let ratio = z2 / z1;
        if ratio.im.abs() <= 1e-13 * ratio.norm() {
            return Err(Error::DegenerateLattice);
        }
        let (scale, tau, exact_tau) =
            if ratio.im > 0.0 { (z1, ratio, exact_ratio) } else { (z2, z1 / z2, exact_ratio.and_then(|r| r.recip().ok())) };
        let (reduction, reduced_tau) = match exact_tau.as_ref().and_then(gauss_reduce_quad) {
            Some((m, t)) => (m, t.to_complex()),
            None => gauss_reduce_numeric(tau),
        };
        let c = reduction[1][0] as f64;
        let d = reduction[1][1] as f64;
        let eval_scale = scale * (c * tau + d);
        Ok(LatticeSpec { w1, w2, scale, tau, reduced_tau, reduction, eval_scale })
    }

    pub fn exact(w1: ExactScalar, w2: ExactScalar) -> Result<Self> {
        LatticeSpec::new(Gen::Exact(w1), Gen::Exact(w2))
    }

    pub fn numeric(w1: Complex64, w2: Complex64) -> Result<Self> {
        LatticeSpec::new(Gen::num(w1), Gen::num(w2))
    }

    /// ⟨1, ω⟩.
    pub fn from_omega(omega: &ExactScalar) -> Result<Self> {
        LatticeSpec::exact(ExactScalar::int(1), omega.clone())
    }

    pub fn w1c(&self) -> Complex64 {
        self.w1.value()
    }
    pub fn w2c(&self) -> Complex64 {
        self.w2.value()
    }
    pub fn is_exact(&self) -> bool {
        self.w1.exact().is_some() && self.w2.exact().is_some()
    }
    pub fn tau(&self) -> Complex64 {
        self.tau
    }
    pub fn reduced_tau(&self) -> Complex64 {
        self.reduced_tau
    }
    pub fn reduction_matrix(&self) -> [[i64; 2]; 2] {
        self.reduction
    }
    /// s with L = s·⟨1, reduced_tau⟩.
    pub fn eval_scale(&self) -> Complex64 {
        self.eval_scale
    }
    /// +1 when Im(w2/w1) > 0, −1 otherwise.
    pub fn orientation(&self) -> i32 {
        if (self.w2c() / self.w1c()).im > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Generator combination m·w1 + n·w2, exact when representable.
    pub fn combo(&self, m: &BigInt, n: &BigInt) -> Gen {
        if let (Some(a), Some(b)) = (self.w1.exact(), self.w2.exact()) {
            let mm = Rational::from_integer(m.clone());
            let nn = Rational::from_integer(n.clone());
            if let Ok(v) = a.scale(&mm).add(&b.scale(&nn)) {
                return Gen::Exact(v);
            }
        }
        let (mf, nf) = (m.to_f64().unwrap_or(f64::NAN), n.to_f64().unwrap_or(f64::NAN));
        Gen::num(mf * self.w1c() + nf * self.w2c())
    }

    fn rat_combo(&self, p: &Rational, q: &Rational) -> Gen {
        if let (Some(a), Some(b)) = (self.w1.exact(), self.w2.exact()) {
            if let Ok(v) = a.scale(p).add(&b.scale(q)) {
                return Gen::Exact(v);
            }
        }
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        Gen::num(f(p) * self.w1c() + f(q) * self.w2c())
    }

    /// Lattice whose generators are the rows of `r` in the basis (w1, w2).
    pub fn transform(&self, r: &RatMatrix2) -> Result<LatticeSpec> {
        if det2(r).is_zero() {
            return Err(Error::SingularMatrix);
        }
        LatticeSpec::new(self.rat_combo(&r[0][0], &r[0][1]), self.rat_combo(&r[1][0], &r[1][1]))
    }

    pub fn sublattice(&self, m: &IntMat2) -> Result<LatticeSpec> {
        self.transform(&int_to_rat(m))
    }

    /// The lattice a·L for rational a.
    pub fn scaled_rational(&self, a: &Rational) -> Result<LatticeSpec> {
        let z = Rational::zero();
        self.transform(&[[a.clone(), z.clone()], [z, a.clone()]])
    }

    /// Numeric scaling a·L.
    pub fn scaled(&self, a: Complex64) -> Result<LatticeSpec> {
        LatticeSpec::numeric(a * self.w1c(), a * self.w2c())
    }

    pub fn conj(&self) -> Result<LatticeSpec> {
        let c = |g: &Gen| -> Result<Gen> {
            Ok(match g {
                Gen::Exact(e) => Gen::Exact(e.conj()?),
                Gen::Numeric([re, im]) => Gen::Numeric([*re, -*im]),
            })
        };
        LatticeSpec::new(c(&self.w1)?, c(&self.w2)?)
    }

    /// Integer coordinates (m, n) of a numeric lattice point, by rounding.
    pub fn coords_of(&self, z: Complex64) -> (f64, f64) {
        let (a, b) = (self.w1c(), self.w2c());
        let det = a.re * b.im - a.im * b.re;
        let m = (z.re * b.im - z.im * b.re) / det;
        let n = (a.re * z.im - a.im * z.re) / det;
        (m, n)
    }
}

/// normalize(L) = (scale, τ) with ⟨1, τ⟩ = scale⁻¹·L and Im τ > 0.
pub fn normalize(l: &LatticeSpec) -> (Complex64, Complex64) {
    (l.scale, l.tau)
}

/// Rows: generators of `l1` expressed in the basis of `l2`.
pub fn relation(l2: &LatticeSpec, l1: &LatticeSpec) -> Result<RatMatrix2> {
    let gens = [&l2.w1, &l2.w2, &l1.w1, &l1.w2];
    let ex: Vec<ExactScalar> = gens.iter().map(|g| g.exact().cloned().ok_or(Error::NotExact)).collect::<Result<_>>()?;
    let coords = rational_coordinates(&ex)?;
    let k = coords[0].len();
    let a: Vec<Vec<Rational>> = (0..k).map(|i| vec![coords[0][i].clone(), coords[1][i].clone()]).collect();
    let mut rows = Vec::new();
    for target in &coords[2..] {
        let sol = linalg::solve(&a, target).ok_or(Error::NotCommensurable)?;
        if !sol.kernel.is_empty() {
            return Err(Error::DegenerateLattice);
        }
        rows.push(sol.particular);
    }
    Ok([[rows[0][0].clone(), rows[0][1].clone()], [rows[1][0].clone(), rows[1][1].clone()]])
}

/// [sup : sub] when sub ≤ sup.
pub fn sublattice_test(sup: &LatticeSpec, sub: &LatticeSpec) -> Result<BigInt> {
    let r = relation(sup, sub).map_err(|e| match e {
        Error::NotCommensurable => Error::NotContained,
        e => e,
    })?;
    let m = rat_to_int(&r).ok_or(Error::NotContained)?;
    let d = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    Ok(d.abs())
}

/// Row echelon form `h = u·a` by unimodular row operations; returns (h, u, rank).
pub fn echelon_with_transform(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize) {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut h = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !h[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&p) = nz.first() {
                    h.swap(r, p);
                    u.swap(r, p);
                    if h[r][c].is_negative() {
                        for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                            *x = -x.clone();
                        }
                    }
                    r += 1;
                }
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            for &i in nz.iter().filter(|&&i| i != p) {
                let q = h[i][c].div_floor(&h[p][c]);
                for j in 0..n {
                    let t = &q * &h[p][j];
                    h[i][j] -= t;
                }
                for j in 0..m {
                    let t = &q * &u[p][j];
                    u[i][j] -= t;
                }
            }
        }
    }
    (h, u, r)
}

/// Hermite normal form [[a, b], [0, d]], a, d > 0, 0 ≤ b < d, of a full-rank
/// row lattice in Z².
pub fn hnf2(rows: &[[BigInt; 2]]) -> Result<IntMat2> {
    let a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.to_vec()).collect();
    let (h, _, rank) = echelon_with_transform(&a);
    if rank < 2 || h[0][0].is_zero() || h[1][1].is_zero() {
        return Err(Error::DegenerateLattice);
    }
    let d = h[1][1].clone();
    let b = h[0][1].mod_floor(&d);
    Ok([[h[0][0].clone(), b], [BigInt::zero(), d]])
}

/// Intersection of two full-rank lattices in Q², given by rational row bases;
/// result in the same coordinates, canonical by Hermite form.
pub fn intersect_rational(b1: &RatMatrix2, b2: &RatMatrix2) -> Result<RatMatrix2> {
    let all: Vec<&Rational> = b1.iter().chain(b2.iter()).flatten().collect();
    let n = all.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let nr = Rational::from_integer(n.clone());
    let to_int = |x: &Rational| (x * &nr).to_integer();
    let stacked: Vec<Vec<BigInt>> = vec![
        vec![to_int(&b1[0][0]), to_int(&b1[0][1])],
        vec![to_int(&b1[1][0]), to_int(&b1[1][1])],
        vec![-to_int(&b2[0][0]), -to_int(&b2[0][1])],
        vec![-to_int(&b2[1][0]), -to_int(&b2[1][1])],
    ];
    let (_, u, rank) = echelon_with_transform(&stacked);
    if rank != 2 {
        return Err(Error::DegenerateLattice);
    }
    let mut rows = Vec::new();
    for k in rank..4 {
        let (p, q) = (&u[k][0], &u[k][1]);
        rows.push([p * &stacked[0][0] + q * &stacked[1][0], p * &stacked[0][1] + q * &stacked[1][1]]);
    }
    let h = hnf2(&rows)?;
    let back = |x: &BigInt| Rational::new(x.clone(), n.clone());
    Ok([[back(&h[0][0]), back(&h[0][1])], [back(&h[1][0]), back(&h[1][1])]])
}

/// Coset representatives of sub in sup.
#[derive(Debug, Clone)]
pub struct CosetSystem {
    pub sup: LatticeSpec,
    pub sub: LatticeSpec,
    pub index: u64,
    /// Hermite form of the sub basis in sup coordinates.
    pub hnf: IntMat2,
    /// Integer sup-coordinates of each representative; coords[0] = (0, 0).
    pub coords: Vec<(i64, i64)>,
    pub reps: Vec<Complex64>,
}

impl CosetSystem {
    /// Build from an integer matrix whose rows are sub generators in sup coordinates.
    pub fn from_matrix(sup: &LatticeSpec, m: &IntMat2) -> Result<Self> {
        let sub = sup.sublattice(m)?;
        Self::with_sub(sup, sub, m)
    }

    fn with_sub(sup: &LatticeSpec, sub: LatticeSpec, m: &IntMat2) -> Result<Self> {
        let h = hnf2(&[m[0].clone(), m[1].clone()])?;
        let a = h[0][0].to_i64().ok_or(Error::InvalidValue("index too large".into()))?;
        let d = h[1][1].to_i64().ok_or(Error::InvalidValue("index too large".into()))?;
        let mut coords = Vec::with_capacity((a * d) as usize);
        for i in 0..a {
            for j in 0..d {
                coords.push((i, j));
            }
        }
        let reps = coords.iter().map(|&(i, j)| i as f64 * sup.w1c() + j as f64 * sup.w2c()).collect();
        Ok(CosetSystem { sup: sup.clone(), sub, index: (a * d) as u64, hnf: h, coords, reps })
    }

    /// True iff the sup-coordinate vector (x, y) lies in sub.
    pub fn in_sub(&self, x: i64, y: i64) -> bool {
        let (a, b, d) = (&self.hnf[0][0], &self.hnf[0][1], &self.hnf[1][1]);
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        if !x.is_multiple_of(a) {
            return false;
        }
        let k = &x / a;
        (y - k * b).is_multiple_of(d)
    }
}

/// Coset representatives of sub in sup (both exact).
pub fn coset_reps(sup: &LatticeSpec, sub: &LatticeSpec) -> Result<CosetSystem> {
    let r = relation(sup, sub).map_err(|e| match e {
        Error::NotCommensurable => Error::NotContained,
        e => e,
    })?;
    let m = rat_to_int(&r).ok_or(Error::NotContained)?;
    CosetSystem::with_sub(sup, sub.clone(), &m)
}

/// Integer quadruple with ω₂ = (aω₁+b)/(cω₁+d).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Witness {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Witness { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }
    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }
    pub fn matrix(&self) -> RatMatrix2 {
        let r = |x: &BigInt| Rational::from_integer(x.clone());
        [[r(&self.a), r(&self.b)], [r(&self.c), r(&self.d)]]
    }
    fn from_rational(v: [Rational; 4]) -> Witness {
        let mut i = clear_denominators(&v);
        if i[2].is_negative() || (i[2].is_zero() && i[3].is_negative()) {
            i.iter_mut().for_each(|x| *x = -x.clone());
        }
        Witness { a: i[0].clone(), b: i[1].clone(), c: i[2].clone(), d: i[3].clone() }
    }
    pub fn as_i64(&self) -> Option<[i64; 4]> {
        Some([self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?, self.d.to_i64()?])
    }
    /// Möbius image (aω+b)/(cω+d), numerically.
    pub fn apply(&self, w: Complex64) -> Complex64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.a) * w + f(&self.b)) / (f(&self.c) * w + f(&self.d))
    }
}

/// Emitted as `{"a","b","c","d","det"}`; entries beyond i64 become decimal strings.
impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(5))?;
        for (k, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d), ("det", &self.det())] {
            match v.to_i64() {
                Some(x) => m.serialize_entry(k, &x)?,
                None => m.serialize_entry(k, &v.to_string())?,
            }
        }
        m.end()
    }
}

fn check_omega(w: &ExactScalar) -> Result<()> {
    let real = match w {
        ExactScalar::Rat(_) => true,
        ExactScalar::Quad(q) => q.d() > 0 || q.y.is_zero(),
        ExactScalar::Sym(_) => w.to_complex().im == 0.0,
    };
    if real {
        Err(Error::InvalidValue(format!("omega = {w} is real")))
    } else {
        Ok(())
    }
}

/// Exact check ω₂(cω₁+d) = aω₁+b.
pub fn verify_witness(omega1: &ExactScalar, omega2: &ExactScalar, w: &Witness) -> Result<bool> {
    if w.det().is_zero() {
        return Ok(false);
    }
    match (omega1, omega2) {
        (ExactScalar::Sym(s1), ExactScalar::Sym(s2)) => {
            if s1.symbol != s2.symbol {
                return Ok(false);
            }
            let p = mat_mul2(&w.matrix(), &s1.m);
            let pv: Vec<&Rational> = p.iter().flatten().collect();
            let mv: Vec<&Rational> = s2.m.iter().flatten().collect();
            Ok((0..4).all(|i| (i + 1..4).all(|j| (pv[i] * mv[j] - pv[j] * mv[i]).is_zero())))
        }
        _ => {
            let r = |x: &BigInt| ExactScalar::Rat(Rational::from_integer(x.clone()));
            let lhs = omega2.mul(&omega1.mul(&r(&w.c))?.add(&r(&w.d))?)?;
            let rhs = omega1.mul(&r(&w.a))?.add(&r(&w.b))?;
            lhs.equals(&rhs)
        }
    }
}

/// Search bound for the minimal-height witness in the quadratic case.
const WITNESS_SEARCH: i64 = 12;

/// Integer Möbius relation between two exact non-real ω's, or `None` when the
/// lattices ⟨1,ω₁⟩ and ⟨1,ω₂⟩ are not commensurable.
pub fn commensurable(omega1: &ExactScalar, omega2: &ExactScalar) -> Result<Option<Witness>> {
    check_omega(omega1)?;
    check_omega(omega2)?;
    match (omega1, omega2) {
        (ExactScalar::Quad(q1), ExactScalar::Quad(q2)) => {
            if q1.d() != q2.d() {
                return Ok(None);
            }
            // ω₂ = u + vω₁
            let v = &q2.y / &q1.y;
            let u = &q2.x - &v * &q1.x;
            let (bb, aa) = q1.minpoly().expect("non-real quadratic");
            let mut best: Option<(Witness, (BigInt, i64, i64))> = None;
            for c in 0..=WITNESS_SEARCH {
                for d in -WITNESS_SEARCH..=WITNESS_SEARCH {
                    if c == 0 && d <= 0 {
                        continue;
                    }
                    let (cr, dr) = (rat_int(c), rat_int(d));
                    let a = &u * &cr + &v * &dr + &v * &cr * &bb;
                    let b = &u * &dr + &v * &cr * &aa;
                    if !a.is_integer() || !b.is_integer() {
                        continue;
                    }
                    let w = Witness { a: a.to_integer(), b: b.to_integer(), c: c.into(), d: d.into() };
                    if w.det().is_zero() {
                        continue;
                    }
                    let h = [&w.a, &w.b, &w.c, &w.d].iter().map(|x| x.abs()).max().unwrap();
                    let key = (h, c, d.abs());
                    if best.as_ref().is_none_or(|(_, k)| key < *k) {
                        best = Some((w, key));
                    }
                }
            }
            let w = match best {
                Some((w, _)) => Witness::from_rational([w.a, w.b, w.c, w.d].map(Rational::from_integer)),
                None => Witness::from_rational([v, u, Rational::zero(), Rational::one()]),
            };
            Ok(Some(w))
        }
        (ExactScalar::Sym(s1), ExactScalar::Sym(s2)) => {
            if s1.symbol != s2.symbol {
                return Ok(None);
            }
            let m = mat_mul2(&s2.m, &adjugate2(&s1.m));
            Ok(Some(Witness::from_rational([m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()])))
        }
        _ => Ok(None),
    }
}

/// True iff conj(L) = L.
pub fn is_invariant(l: &LatticeSpec) -> Result<bool> {
    let c = l.conj()?;
    match relation(l, &c) {
        Ok(r) => Ok(rat_to_int(&r).is_some()),
        Err(Error::NotCommensurable) => Ok(false),
        Err(e) => Err(e),
    }
}

/// L ∩ conj(L), as an explicit basis.
pub fn invariant_core(l: &LatticeSpec) -> Result<LatticeSpec> {
    let c = l.conj()?;
    let r = relation(l, &c).map_err(|e| match e {
        Error::NotCommensurable => Error::NotCommensurableWithConjugate,
        e => e,
    })?;
    let id = crate::exactnum::identity2();
    let core = intersect_rational(&id, &r)?;
    l.transform(&core)
}

fn left_kernel_primitive(k: &IntMat2) -> Option<[BigInt; 2]> {
    let rows = vec![k[0].to_vec(), k[1].to_vec()];
    let (h, u, _) = echelon_with_transform(&rows);
    (0..2).find(|&i| h[i].iter().all(|x| x.is_zero())).map(|i| [u[i][0].clone(), u[i][1].clone()])
}

/// Sublattice ⟨a, bi⟩ (a, b real) of finite index in an invariant lattice.
pub fn real_imag_sublattice(l: &LatticeSpec) -> Result<LatticeSpec> {
    let c = l.conj()?;
    let r = relation(l, &c).map_err(|_| Error::NotInvariant)?;
    let cm = rat_to_int(&r).ok_or(Error::NotInvariant)?;
    let one = BigInt::one();
    let minus = [[&cm[0][0] - &one, cm[0][1].clone()], [cm[1][0].clone(), &cm[1][1] - &one]];
    let plus = [[&cm[0][0] + &one, cm[0][1].clone()], [cm[1][0].clone(), &cm[1][1] + &one]];
    let re = left_kernel_primitive(&minus).ok_or(Error::NotInvariant)?;
    let im = left_kernel_primitive(&plus).ok_or(Error::NotInvariant)?;
    LatticeSpec::new(l.combo(&re[0], &re[1]), l.combo(&im[0], &im[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, SymbolicOmega};

    #[test]
    fn witness_json() {
        let w = Witness::new(2, 0, 0, 1);
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"a":2,"b":0,"c":0,"d":1,"det":2}"#);
        let big = Witness { a: BigInt::from(i64::MAX) * 4, b: BigInt::zero(), c: BigInt::zero(), d: BigInt::one() };
        assert!(serde_json::to_string(&big).unwrap().contains(r#""a":"36893488147419103228""#));
    }

    fn g(x: i64, y: i64) -> ExactScalar {
        ExactScalar::gaussian(rat_int(x), rat_int(y))
    }
    fn gl(a: ExactScalar, b: ExactScalar) -> LatticeSpec {
        LatticeSpec::exact(a, b).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let (s, t) = normalize(&gl(g(2, 0), g(0, 2)));
        assert!((s - Complex64::new(2.0, 0.0)).norm() < 1e-15 && (t - Complex64::i()).norm() < 1e-15);
        let (_, t) = normalize(&gl(g(1, 0), g(0, -1)));
        assert!((t - Complex64::i()).norm() < 1e-15);
        let (_, t) = normalize(&gl(g(1, 1), g(0, 2)));
        assert!((t - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        assert_eq!(LatticeSpec::exact(g(1, 0), g(2, 0)), Err(Error::DegenerateLattice));
    }

    #[test]
    fn reduction_lands_in_fundamental_domain() {
        let l = gl(g(1, 0), ExactScalar::gaussian(rat(7, 3), rat(1, 5)));
        let t = l.reduced_tau();
        assert!(t.re.abs() <= 0.5 && t.norm() >= 1.0 - 1e-14 && t.im > 0.0);
        let m = l.reduction_matrix();
        assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
        // eval_scale·⟨1, τ'⟩ spans the same lattice: check w1 and w2 have integral coordinates
        let s = l.eval_scale();
        let base = LatticeSpec::numeric(s, s * t).unwrap();
        for w in [l.w1c(), l.w2c()] {
            let (m, n) = base.coords_of(w);
            assert!((m - m.round()).abs() < 1e-9 && (n - n.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn sublattice_examples() {
        let l = gl(g(1, 0), g(0, 1));
        assert_eq!(sublattice_test(&l, &gl(g(2, 0), g(0, 2))).unwrap(), BigInt::from(4));
        assert_eq!(sublattice_test(&l, &l).unwrap(), BigInt::from(1));
        assert_eq!(sublattice_test(&gl(g(2, 0), g(0, 2)), &l), Err(Error::NotContained));
    }

    #[test]
    fn coset_examples() {
        let l = gl(g(1, 0), g(0, 1));
        let cs = coset_reps(&l, &gl(g(2, 0), g(0, 2))).unwrap();
        let mut got: Vec<(i64, i64)> = cs.reps.iter().map(|z| (z.re as i64, z.im as i64)).collect();
        got.sort();
        assert_eq!(got, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let cs = coset_reps(&l, &gl(g(1, 0), g(0, 2))).unwrap();
        assert_eq!(cs.reps.len(), 2);
        assert!((cs.reps[1] - Complex64::i()).norm() < 1e-15);
        assert_eq!(coset_reps(&l, &l).unwrap().reps, vec![Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn commensurable_examples() {
        let i = g(0, 1);
        let w = ExactScalar::gaussian(rat(3, 5), rat(1, 5)); // (i+1)/(i+2)
        assert_eq!(commensurable(&i, &w).unwrap(), Some(Witness::new(1, 1, 1, 2)));
        assert_eq!(commensurable(&i, &g(0, 2)).unwrap(), Some(Witness::new(2, 0, 0, 1)));
        let s3 = ExactScalar::quad(-3, rat_int(0), rat_int(1)).unwrap();
        assert_eq!(commensurable(&i, &s3).unwrap(), None);
        let t = ExactScalar::Sym(SymbolicOmega::symbol("t", Complex64::new(0.2, 1.3)));
        assert_eq!(commensurable(&i, &t).unwrap(), None);
    }

    #[test]
    fn symbolic_commensurability() {
        let anchor = Complex64::new(0.2, 1.3);
        let t = ExactScalar::Sym(SymbolicOmega::symbol("t", anchor));
        let m = [[rat_int(2), rat_int(1)], [rat_int(1), rat_int(3)]];
        let u = ExactScalar::Sym(SymbolicOmega::new("t", m, anchor).unwrap());
        let w = commensurable(&t, &u).unwrap().unwrap();
        assert!(verify_witness(&t, &u, &w).unwrap());
        assert!((w.apply(t.to_complex()) - u.to_complex()).norm() < 1e-12);
        let s = ExactScalar::Sym(SymbolicOmega::symbol("s", anchor));
        assert_eq!(commensurable(&t, &s).unwrap(), None);
    }

    #[test]
    fn invariance_examples() {
        assert!(is_invariant(&gl(g(1, 0), g(0, 1))).unwrap());
        assert!(is_invariant(&gl(g(1, 0), g(1, 1))).unwrap());
        // 1/2 + √−3 has conjugate 1 − ω, so that lattice is invariant
        let w = ExactScalar::quad(-3, rat(1, 2), rat_int(1)).unwrap();
        assert!(is_invariant(&LatticeSpec::from_omega(&w).unwrap()).unwrap());
        let w = ExactScalar::quad(-3, rat(1, 3), rat_int(1)).unwrap();
        let l = LatticeSpec::from_omega(&w).unwrap();
        assert!(!is_invariant(&l).unwrap());
        let core = invariant_core(&l).unwrap();
        assert!(is_invariant(&core).unwrap());
        let n = sublattice_test(&l, &core).unwrap();
        assert!(n > BigInt::one());
        let r = real_imag_sublattice(&gl(g(1, 1), g(1, -1))).unwrap();
        let r2 = gl(g(2, 0), g(0, 2));
        assert_eq!(sublattice_test(&r, &r2).unwrap(), BigInt::one());
        assert_eq!(sublattice_test(&r2, &r).unwrap(), BigInt::one());
    }

    #[test]
    fn intersection_of_scaled_lattices() {
        // ⟨1,i⟩ ∩ (3/2)⟨1,i⟩ = 3⟨1,i⟩
        let id = crate::exactnum::identity2();
        let s = [[rat(3, 2), rat_int(0)], [rat_int(0), rat(3, 2)]];
        let c = intersect_rational(&id, &s).unwrap();
        assert_eq!(c, [[rat_int(3), rat_int(0)], [rat_int(0), rat_int(3)]]);
    }
}
