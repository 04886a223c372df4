//! Weierstrass ℘, ℘′, ζ, σ and σ̃ over a lattice, with quasi-periods.
//!
//! The lattice is written as s·⟨1, τ⟩ with τ SL₂(Z)-reduced, so the theta nome
//! e^{iπτ} has modulus at most e^{−π√3/2}. The argument is reduced to the cell
//! around 0 and the quasi-periodicity of ζ and σ is applied explicitly.
//! Quasi-periods follow the convention η(λ) = ζ(u+λ) − ζ(u), so that
//! η(w) = 2ζ(w/2) for a generator w.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

const EPS: f64 = f64::EPSILON;

/// Complex value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumComplex {
    pub value: Complex64,
    pub err: f64,
}

impl serde::Serialize for NumComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NumComplex", 3)?;
        st.serialize_field("re", &self.value.re)?;
        st.serialize_field("im", &self.value.im)?;
        st.serialize_field("err", &self.err)?;
        st.end()
    }
}

impl NumComplex {
    pub fn new(value: Complex64, err: f64) -> Self {
        NumComplex { value, err }
    }
    pub fn exact(value: Complex64) -> Self {
        NumComplex { value, err: 0.0 }
    }
    pub fn recip(self) -> Self {
        let v = 1.0 / self.value;
        NumComplex::new(v, self.err * v.norm_sqr() + EPS * v.norm())
    }
    pub fn exp(self) -> Self {
        let v = self.value.exp();
        NumComplex::new(v, v.norm() * (self.err + EPS))
    }
    pub fn scale(self, k: Complex64) -> Self {
        NumComplex::new(self.value * k, self.err * k.norm())
    }
}

impl Add for NumComplex {
    type Output = NumComplex;
    fn add(self, o: NumComplex) -> NumComplex {
        let v = self.value + o.value;
        NumComplex::new(v, self.err + o.err + EPS * v.norm())
    }
}

impl Sub for NumComplex {
    type Output = NumComplex;
    fn sub(self, o: NumComplex) -> NumComplex {
        let v = self.value - o.value;
        NumComplex::new(v, self.err + o.err + EPS * v.norm())
    }
}

impl Mul for NumComplex {
    type Output = NumComplex;
    fn mul(self, o: NumComplex) -> NumComplex {
        let v = self.value * o.value;
        NumComplex::new(v, self.err * o.value.norm() + o.err * self.value.norm() + EPS * v.norm())
    }
}

impl std::ops::Div for NumComplex {
    type Output = NumComplex;
    fn div(self, o: NumComplex) -> NumComplex {
        self * o.recip()
    }
}

impl Neg for NumComplex {
    type Output = NumComplex;
    fn neg(self) -> NumComplex {
        NumComplex::new(-self.value, self.err)
    }
}

/// θ₁(x) and its first three x-derivatives.
#[derive(Debug, Clone, Copy)]
struct Theta {
    d: [Complex64; 4],
    /// Sum of term magnitudes, for error estimates.
    mag: f64,
}

/// Evaluation context for one lattice; immutable after construction.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub lattice: LatticeSpec,
    pub target_tol: f64,
    s: Complex64,
    tau: Complex64,
    /// ζ(1/2) and ζ(τ/2) for ⟨1, τ⟩
    eta1_std: Complex64,
    eta3_std: Complex64,
    theta1p0: Complex64,
    /// nome exp(2πiτ)
    pub q: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    /// η(w1) = 2ζ(w1/2), η(w2) = 2ζ(w2/2)
    pub eta1: NumComplex,
    pub eta2: NumComplex,
    /// (m, n) coordinates of w1, w2 in the reduced basis (s, sτ)
    gen_coords: [[i64; 2]; 2],
}

fn theta1(x: Complex64, tau: Complex64) -> Theta {
    let mut d = [Complex64::new(0.0, 0.0); 4];
    let mut mag = 0.0;
    let mut small = 0;
    for n in 0..200 {
        let h = n as f64 + 0.5;
        let k = 2.0 * h;
        let sign = if n % 2 == 0 { 2.0 } else { -2.0 };
        let c = sign * (Complex64::i() * PI * tau * h * h).exp();
        let (s, co) = ((k * x).sin(), (k * x).cos());
        let t = [c * s, c * k * co, -c * k * k * s, -c * k * k * k * co];
        let tm = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..4 {
            d[i] += t[i];
        }
        mag += tm;
        let scale = d.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if tm <= EPS * 1e-2 * scale {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    Theta { d, mag }
}

fn eisenstein(q: Complex64) -> (Complex64, Complex64) {
    let mut e4 = Complex64::new(1.0, 0.0);
    let mut e6 = Complex64::new(1.0, 0.0);
    let mut qn = q;
    for n in 1..400 {
        let nf = n as f64;
        let denom = Complex64::new(1.0, 0.0) - qn;
        let t4 = 240.0 * nf.powi(3) * qn / denom;
        let t6 = -504.0 * nf.powi(5) * qn / denom;
        e4 += t4;
        e6 += t6;
        if t4.norm() < 1e-18 * e4.norm() && t6.norm() < 1e-18 * e6.norm() {
            break;
        }
        qn *= q;
    }
    (e4, e6)
}

/// Result of reducing an argument into the fundamental cell.
struct Reduced {
    z0: Complex64,
    m: i64,
    n: i64,
}

impl EvalContext {
    pub fn new(lattice: &LatticeSpec) -> Result<Self> {
        Self::with_tol(lattice, 1e-12)
    }

    pub fn with_tol(lattice: &LatticeSpec, target_tol: f64) -> Result<Self> {
        if !(target_tol > 0.0) {
            return Err(Error::BadParams("target_tol must be positive".into()));
        }
        let s = lattice.eval_scale();
        let tau = lattice.reduced_tau();
        let th0 = theta1(Complex64::new(0.0, 0.0), tau);
        let theta1p0 = th0.d[1];
        let eta1_std = -(PI * PI / 6.0) * th0.d[3] / theta1p0;
        let mut ctx = EvalContext {
            lattice: lattice.clone(),
            target_tol,
            s,
            tau,
            eta1_std,
            eta3_std: Complex64::new(0.0, 0.0),
            theta1p0,
            q: (2.0 * PI * Complex64::i() * tau).exp(),
            g2: Complex64::new(0.0, 0.0),
            g3: Complex64::new(0.0, 0.0),
            eta1: NumComplex::exact(Complex64::new(0.0, 0.0)),
            eta2: NumComplex::exact(Complex64::new(0.0, 0.0)),
            gen_coords: [[0; 2]; 2],
        };
        // ζ(τ/2) straight from the theta quotient, not from the Legendre relation
        let x = PI * tau / 2.0;
        let th = theta1(x, tau);
        ctx.eta3_std = 2.0 * eta1_std * (tau / 2.0) + PI * th.d[1] / th.d[0];
        let (e4, e6) = eisenstein(ctx.q);
        ctx.g2 = (4.0 * PI.powi(4) / 3.0) * e4 / s.powi(4);
        ctx.g3 = (8.0 * PI.powi(6) / 27.0) * e6 / s.powi(6);
        for (k, w) in [lattice.w1c(), lattice.w2c()].into_iter().enumerate() {
            let z = w / s;
            let n = z.im / tau.im;
            let m = (z - n.round() * tau).re;
            if (n - n.round()).abs() > 1e-6 || (m - m.round()).abs() > 1e-6 {
                return Err(Error::NoConvergence("generator not on the reduced lattice".into()));
            }
            ctx.gen_coords[k] = [m.round() as i64, n.round() as i64];
        }
        let e = |c: [i64; 2]| {
            let v = (2.0 * c[0] as f64 * eta1_std + 2.0 * c[1] as f64 * ctx.eta3_std) / s;
            NumComplex::new(v, 64.0 * EPS * (v.norm() + eta1_std.norm() / s.norm()))
        };
        ctx.eta1 = e(ctx.gen_coords[0]);
        ctx.eta2 = e(ctx.gen_coords[1]);
        Ok(ctx)
    }

    fn reduce(&self, u: Complex64) -> Result<Reduced> {
        let z = u / self.s;
        let n = (z.im / self.tau.im).round();
        let z1 = z - n * self.tau;
        let m = z1.re.round();
        let z0 = z1 - m;
        if !z0.is_finite() {
            return Err(Error::InvalidValue("non-finite argument".into()));
        }
        Ok(Reduced { z0, m: m as i64, n: n as i64 })
    }

    fn pole_check(&self, r: &Reduced) -> Result<()> {
        if (r.z0 * self.s).norm() <= 1e-9 * self.lattice.w1c().norm() {
            let lam = self.s * (r.m as f64 + r.n as f64 * self.tau);
            let (m, n) = self.lattice.coords_of(lam);
            return Err(Error::PoleAt { m: m.round() as i64, n: n.round() as i64 });
        }
        Ok(())
    }

    /// η of the reduced-basis vector m + nτ, for ⟨1, τ⟩.
    fn eta_std(&self, m: i64, n: i64) -> Complex64 {
        2.0 * m as f64 * self.eta1_std + 2.0 * n as f64 * self.eta3_std
    }

    /// Distance from u to the nearest lattice point.
    pub fn dist_to_lattice(&self, u: Complex64) -> f64 {
        match self.reduce(u) {
            Ok(r) => (r.z0 * self.s).norm(),
            Err(_) => 0.0,
        }
    }

    /// True when u is within the pole guard of a lattice point.
    pub fn near_lattice(&self, u: Complex64) -> bool {
        self.reduce(u).map(|r| self.pole_check(&r).is_err()).unwrap_or(true)
    }

    pub fn wp(&self, u: Complex64) -> Result<NumComplex> {
        let r = self.reduce(u)?;
        self.pole_check(&r)?;
        let th = theta1(PI * r.z0, self.tau);
        let l1 = th.d[1] / th.d[0];
        let l2 = th.d[2] / th.d[0] - l1 * l1;
        let v = -2.0 * self.eta1_std - PI * PI * l2;
        let s2 = self.s * self.s;
        let mag = 2.0 * self.eta1_std.norm() + PI * PI * (th.d[2].norm() / th.d[0].norm() + l1.norm_sqr());
        let err = 32.0 * EPS * (mag + th.mag / th.d[0].norm()) / s2.norm();
        Ok(NumComplex::new(v / s2, err))
    }

    pub fn wp_prime(&self, u: Complex64) -> Result<NumComplex> {
        let r = self.reduce(u)?;
        self.pole_check(&r)?;
        let th = theta1(PI * r.z0, self.tau);
        let l1 = th.d[1] / th.d[0];
        let t2 = th.d[2] / th.d[0];
        let t3 = th.d[3] / th.d[0];
        let l3 = t3 - 3.0 * t2 * l1 + 2.0 * l1 * l1 * l1;
        let v = -PI.powi(3) * l3;
        let s3 = self.s * self.s * self.s;
        let mag = PI.powi(3) * (t3.norm() + 3.0 * t2.norm() * l1.norm() + 2.0 * l1.norm().powi(3));
        Ok(NumComplex::new(v / s3, 32.0 * EPS * mag / s3.norm()))
    }

    pub fn zeta(&self, u: Complex64) -> Result<NumComplex> {
        let r = self.reduce(u)?;
        self.pole_check(&r)?;
        let th = theta1(PI * r.z0, self.tau);
        let base = 2.0 * self.eta1_std * r.z0 + PI * th.d[1] / th.d[0];
        let shift = self.eta_std(r.m, r.n);
        let v = (base + shift) / self.s;
        let mag = base.norm() + shift.norm() + PI * th.mag / th.d[0].norm();
        Ok(NumComplex::new(v, 32.0 * EPS * mag / self.s.norm()))
    }

    /// σ on ⟨1, τ⟩ at z = z0 + λ, as (value, relative error estimate).
    fn sigma_std(&self, r: &Reduced) -> (Complex64, f64) {
        let th = theta1(PI * r.z0, self.tau);
        let base = (self.eta1_std * r.z0 * r.z0).exp() * th.d[0] / (PI * self.theta1p0);
        if r.m == 0 && r.n == 0 {
            return (base, 16.0 * EPS * (1.0 + th.mag / th.d[0].norm().max(f64::MIN_POSITIVE)));
        }
        let lam = r.m as f64 + r.n as f64 * self.tau;
        let sign = if (r.m + r.n + r.m * r.n) % 2 == 0 { 1.0 } else { -1.0 };
        let expo = self.eta_std(r.m, r.n) * (r.z0 + lam / 2.0);
        let rel = 16.0 * EPS * (1.0 + expo.norm() + th.mag / th.d[0].norm().max(f64::MIN_POSITIVE));
        (sign * expo.exp() * base, rel)
    }

    pub fn sigma(&self, u: Complex64) -> Result<NumComplex> {
        let r = self.reduce(u)?;
        let (v, rel) = self.sigma_std(&r);
        let v = v * self.s;
        let mut err = rel * v.norm();
        if r.z0.norm() < 1e-300 {
            err = EPS * self.s.norm();
        }
        Ok(NumComplex::new(v, err))
    }

    /// σ(u − ξ)/σ(u), via σ̃(z + λ) = e^{−ξη(λ)}σ̃(z) at the reduced point.
    pub fn sigma_tilde(&self, xi: Complex64, u: Complex64) -> Result<NumComplex> {
        let ru = self.reduce(u)?;
        self.pole_check(&ru)?;
        let z = Reduced { z0: ru.z0, m: 0, n: 0 };
        let rx = self.reduce(ru.z0 * self.s - xi)?;
        let (a, ea) = self.sigma_std(&rx);
        let (b, eb) = self.sigma_std(&z);
        let expo = -(xi / self.s) * self.eta_std(ru.m, ru.n);
        let v = a / b * expo.exp();
        let err = (ea + eb + EPS * (1.0 + expo.norm())) * v.norm();
        Ok(NumComplex::new(v, err))
    }

    /// η(m·w1 + n·w2) = m·η₁ + n·η₂.
    pub fn eta(&self, m: i64, n: i64) -> NumComplex {
        self.eta1.scale(Complex64::new(m as f64, 0.0)) + self.eta2.scale(Complex64::new(n as f64, 0.0))
    }

    /// η of a numeric lattice element (rounded to lattice coordinates).
    pub fn eta_of(&self, lam: Complex64) -> Result<NumComplex> {
        let (m, n) = self.lattice.coords_of(lam);
        if (m - m.round()).abs() > 1e-6 || (n - n.round()).abs() > 1e-6 {
            return Err(Error::InvalidValue(format!("{lam} is not a lattice point")));
        }
        Ok(self.eta(m.round() as i64, n.round() as i64))
    }

    /// η₁w2 − η₂w1; equals 2πi·orientation.
    pub fn legendre(&self) -> Complex64 {
        self.eta1.value * self.lattice.w2c() - self.eta2.value * self.lattice.w1c()
    }
}

/// Slow independent evaluations used as oracles in tests.
pub mod oracle {
    use super::*;

    /// ℘ by direct summation over the symmetric box |m|,|n| ≤ n_max.
    pub fn wp_lattice_sum(w1: Complex64, w2: Complex64, u: Complex64, n_max: i64) -> Complex64 {
        let mut s = 1.0 / (u * u);
        for m in -n_max..=n_max {
            for n in -n_max..=n_max {
                if m == 0 && n == 0 {
                    continue;
                }
                let w = m as f64 * w1 + n as f64 * w2;
                s += 1.0 / ((u - w) * (u - w)) - 1.0 / (w * w);
            }
        }
        s
    }

    /// ℘ on ⟨1, τ⟩ by the Lambert-type q-expansion (valid for |Im z| < Im τ).
    pub fn wp_lambert(tau: Complex64, z: Complex64) -> Complex64 {
        let i2pi = 2.0 * PI * Complex64::i();
        let q = (i2pi * tau).exp();
        let w = (i2pi * z).exp();
        let one = Complex64::new(1.0, 0.0);
        let term = |x: Complex64| x / ((one - x) * (one - x));
        let mut s = term(w);
        let mut qn = one;
        for _ in 1..2000 {
            qn *= q;
            let t = term(qn * w) + term(qn / w);
            s += t;
            if t.norm() < 1e-18 * s.norm() && qn.norm() < 1e-18 {
                break;
            }
        }
        let mut e2 = one;
        let mut qn = one;
        for n in 1..2000 {
            qn *= q;
            let t = -24.0 * n as f64 * qn / (one - qn);
            e2 += t;
            if t.norm() < 1e-18 {
                break;
            }
        }
        i2pi * i2pi * (s + e2 / 12.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat_int, ExactScalar};

    fn gauss(scale: i64) -> EvalContext {
        let l = LatticeSpec::exact(ExactScalar::gaussian(rat_int(scale), rat_int(0)), ExactScalar::gaussian(rat_int(0), rat_int(scale)))
            .unwrap();
        EvalContext::new(&l).unwrap()
    }

    #[test]
    fn half_period_of_square_lattice() {
        let c = gauss(2);
        assert!(c.wp(Complex64::new(1.0, 1.0)).unwrap().value.norm() < 1e-10);
    }

    #[test]
    fn homogeneity_example() {
        let (c1, c2) = (gauss(1), gauss(2));
        let u = Complex64::new(0.31, 0.17);
        let a = c2.wp(2.0 * u).unwrap().value;
        let b = c1.wp(u).unwrap().value / 4.0;
        assert!((a - b).norm() < 1e-12 * b.norm());
    }

    #[test]
    fn pole_is_reported() {
        let c = gauss(1);
        assert_eq!(c.wp(Complex64::new(1.0, 1.0)), Err(Error::PoleAt { m: 1, n: 1 }));
    }

    #[test]
    fn sigma_is_odd_and_sigma_tilde_zero_is_one() {
        let c = gauss(1);
        for u in [Complex64::new(0.3, 0.2), Complex64::new(1.7, -2.1)] {
            let a = c.sigma(u).unwrap();
            let b = c.sigma(-u).unwrap();
            assert!((a.value + b.value).norm() <= 10.0 * (a.err + b.err) + 1e-14 * a.value.norm());
            let t = c.sigma_tilde(Complex64::new(0.0, 0.0), u).unwrap();
            assert!((t.value - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn zeta_quasi_period_is_constant() {
        let c = gauss(1);
        let e = c.eta(1, 0).value;
        for k in 0..5 {
            let u = Complex64::new(0.1 + 0.13 * k as f64, 0.07 * k as f64 - 0.2);
            let d = c.zeta(u + 1.0).unwrap().value - c.zeta(u).unwrap().value;
            assert!((d - e).norm() < 1e-12);
        }
        let u = Complex64::new(0.21, 0.33);
        let d = c.zeta(u + Complex64::new(1.0, 1.0)).unwrap().value - c.zeta(u).unwrap().value;
        assert!((d - c.eta(1, 1).value).norm() < 1e-12);
        assert_eq!(c.eta(0, 0).value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn legendre_on_square_lattice() {
        let c = gauss(1);
        assert!((c.legendre() - 2.0 * PI * Complex64::i()).norm() < 1e-12);
    }

    #[test]
    fn theta_agrees_with_independent_oracles() {
        let l = LatticeSpec::numeric(Complex64::new(1.0, 0.0), Complex64::new(0.3, 1.1)).unwrap();
        let c = EvalContext::new(&l).unwrap();
        let u = Complex64::new(0.27, 0.19);
        let v = c.wp(u).unwrap().value;
        let lam = oracle::wp_lambert(l.reduced_tau(), u / l.eval_scale()) / (l.eval_scale() * l.eval_scale());
        assert!((v - lam).norm() < 1e-10 * v.norm());
        let direct = oracle::wp_lattice_sum(l.w1c(), l.w2c(), u, 400);
        assert!((v - direct).norm() < 1e-4 * v.norm());
    }

    #[test]
    fn differential_equation_with_eisenstein_invariants() {
        let l = LatticeSpec::numeric(Complex64::new(0.8, 0.3), Complex64::new(-0.2, 1.4)).unwrap();
        let c = EvalContext::new(&l).unwrap();
        for u in [Complex64::new(0.3, 0.1), Complex64::new(-0.45, 0.9), Complex64::new(2.2, -3.1)] {
            let p = c.wp(u).unwrap().value;
            let dp = c.wp_prime(u).unwrap().value;
            let rhs = 4.0 * p * p * p - c.g2 * p - c.g3;
            assert!((dp * dp - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
        }
    }
}
