use num_complex::Complex64;
use proptest::prelude::*;

use lnash::exactnum::{rat, QuadElem};
use lnash::lattice::{commensurable, verify_witness};
use lnash::{EvalContext, ExactScalar, LatticeSpec};

fn quad(d: i64) -> impl Strategy<Value = QuadElem> {
    (-20i64..20, 1i64..8, -20i64..20, 1i64..8).prop_map(move |(a, b, c, e)| QuadElem::new(d, rat(a, b), rat(c, e)).unwrap())
}

fn field() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-1i64, -2, -3, -7, 2, 5])
}

fn upper_tau() -> impl Strategy<Value = Complex64> {
    (-0.5f64..0.5, 0.87f64..2.5).prop_map(|(x, y)| Complex64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_field_axioms((a, b, c) in field().prop_flat_map(|d| (quad(d), quad(d), quad(d)))) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let dist = a.mul(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(dist, a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        if !b.is_zero() {
            prop_assert_eq!(a.div(&b).unwrap().mul(&b).unwrap(), a.clone());
        }
        prop_assert_eq!(a.mul(&a.conj()).unwrap().y.clone(), rat(0, 1));
    }

    #[test]
    fn scalar_json_round_trip(d in field(), x in -50i64..50, y in 1i64..50) {
        let s = ExactScalar::quad(d, rat(x, 3), rat(y, 7)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: ExactScalar = serde_json::from_str(&text).unwrap();
        prop_assert!(back.equals(&s).unwrap());
    }

    #[test]
    fn wp_is_even_and_periodic(tau in upper_tau(), u in (0.05f64..0.95, 0.05f64..0.95)) {
        let l = LatticeSpec::numeric(Complex64::new(1.0, 0.0), tau).unwrap();
        let ctx = EvalContext::new(&l).unwrap();
        let z = Complex64::new(u.0, 0.0) + tau * u.1;
        prop_assume!(!ctx.near_lattice(z));
        let w = ctx.wp(z).unwrap().value;
        let scale = w.norm().max(1.0);
        prop_assert!((ctx.wp(-z).unwrap().value - w).norm() / scale < 1e-10);
        prop_assert!((ctx.wp(z + 1.0).unwrap().value - w).norm() / scale < 1e-9);
        prop_assert!((ctx.wp(z + tau).unwrap().value - w).norm() / scale < 1e-9);
    }

    #[test]
    fn legendre_relation_on_random_lattices(tau in upper_tau(), s in (0.3f64..3.0, -3.0f64..3.0)) {
        let a = Complex64::new(s.0, s.1);
        let l = LatticeSpec::numeric(a, a * tau).unwrap();
        let ctx = EvalContext::new(&l).unwrap();
        let v = ctx.legendre().norm();
        prop_assert!((v / (2.0 * std::f64::consts::PI) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mobius_images_are_commensurable(d in prop::sample::select(vec![-1i64, -2, -3]), y in 1i64..5, m in (-3i64..4, -3i64..4, 1i64..4, -3i64..4)) {
        let w = ExactScalar::quad(d, rat(1, 2), rat(y, 3)).unwrap();
        let (a, b, c, e) = m;
        prop_assume!(a * e - b * c != 0);
        let num = w.mul(&ExactScalar::int(a)).unwrap().add(&ExactScalar::int(b)).unwrap();
        let den = w.mul(&ExactScalar::int(c)).unwrap().add(&ExactScalar::int(e)).unwrap();
        let w2 = num.div(&den).unwrap();
        prop_assume!(w2.to_complex().im.abs() > 1e-12);
        let wit = commensurable(&w, &w2).unwrap();
        prop_assert!(wit.is_some());
        prop_assert!(verify_witness(&w, &w2, &wit.unwrap()).unwrap());
    }
}
