use super::*;
use crate::exactnum::rat;
use std::collections::BTreeMap;

fn i() -> ExactScalar {
    ExactScalar::gaussian(rat_int(0), rat_int(1))
}
fn gi(y: i64) -> ExactScalar {
    ExactScalar::gaussian(rat_int(0), rat_int(y))
}
fn xi_hat() -> (&'static str, Complex64) {
    ("s", Complex64::new(0.3137, 0.1722))
}
fn qv(terms: &[(&str, Rational)]) -> QVector {
    let (s, z) = xi_hat();
    let anchors = if terms.iter().any(|(t, _)| t.contains('s')) { vec![(s, z)] } else { vec![] };
    QVector::from_terms(terms, &anchors).unwrap()
}

#[test]
fn xi_membership_examples() {
    let mp = i().minpoly();
    let x1 = qv(&[("1", rat_int(0)), ("omega", rat_int(0)), ("s", rat_int(1)), ("omega*s", rat_int(0))]).with_minpoly(mp.clone());
    let x2 = qv(&[("1", rat(1, 2)), ("omega", rat_int(0)), ("s", rat_int(2)), ("omega*s", rat_int(0))]);
    let m = xi_membership(&i(), &x1, &x2).unwrap().unwrap();
    assert_eq!(m.k, (rat_int(2), rat_int(0)));
    assert_eq!(m.lam, (rat(1, 2), rat_int(0)));
    // (1+ω)ξ + ω
    let x3 = qv(&[("1", rat_int(0)), ("omega", rat_int(1)), ("s", rat_int(1)), ("omega*s", rat_int(1))]);
    let m = xi_membership(&i(), &x1, &x3).unwrap().unwrap();
    assert_eq!(m.k, (rat_int(1), rat_int(1)));
    assert_eq!(m.lam, (rat_int(0), rat_int(1)));
    assert_eq!(m.reconstruct(&x1).unwrap().coords, x3.coords);
}

#[test]
fn xi_membership_independent_symbol_fails() {
    let anchors: BTreeMap<String, Complex64> =
        [("s".to_string(), Complex64::new(0.31, 0.17)), ("t".to_string(), Complex64::new(-0.2, 0.71))].into();
    let b: Vec<String> = ["1", "omega", "s", "omega*s", "t", "omega*t"].iter().map(|s| s.to_string()).collect();
    let x1 = QVector::new(b.clone(), [0, 0, 1, 0, 0, 0].map(rat_int).to_vec(), anchors.clone()).unwrap();
    let x2 = QVector::new(b, [0, 0, 0, 0, 1, 0].map(rat_int).to_vec(), anchors).unwrap();
    assert!(xi_membership(&i(), &x1, &x2).unwrap().is_none());
}

#[test]
fn iso_c1_examples() {
    let w = iso_c1(&G::C1Wp { omega: i() }, &G::C1Wp { omega: gi(2) }).unwrap().unwrap();
    assert_eq!(w.abcd, Some([2, 0, 0, 1]));
    assert!((w.matrix[0][0].value - 1.0).norm() < 1e-15);
    assert!(iso_c1(&G::C1Exp, &G::C1Id).unwrap().is_none());
    let s3 = ExactScalar::quad(-3, rat_int(0), rat_int(1)).unwrap();
    assert!(iso_c1(&G::C1Wp { omega: i() }, &G::C1Wp { omega: s3 }).unwrap().is_none());
    assert!(witness_periodicity(&G::C1Wp { omega: i() }, &G::C1Wp { omega: gi(2) }, &w).unwrap() < 1e-9);
}

#[test]
fn z_witness_is_periodic() {
    let (g1, g2) = (G::C2Z { omega: i() }, G::C2Z { omega: gi(2) });
    let w = iso_c2(&g1, &g2).unwrap().unwrap();
    let r = witness_periodicity(&g1, &g2, &w).unwrap();
    assert!(r < 1e-7, "{r}");
    let g3 = G::C2Z { omega: ExactScalar::gaussian(rat(1, 3), rat(1, 2)) };
    let w = iso_c2(&g1, &g3).unwrap().unwrap();
    assert!(witness_periodicity(&g1, &g3, &w).unwrap() < 1e-7);
}

fn s_desc(omega: ExactScalar, c: [i64; 4]) -> G {
    let x = qv(&[("1", rat_int(c[0])), ("omega", rat_int(c[1])), ("s", rat_int(c[2])), ("omega*s", rat_int(c[3]))]);
    G::C2S { omega, xi: x }
}

#[test]
fn s_witness_is_periodic() {
    let g1 = s_desc(i(), [0, 0, 1, 0]);
    for (w2, c) in
        [(i(), [1, 0, 2, 0]), (i(), [0, 1, 1, 1]), (gi(2), [1, 0, 1, 0]), (ExactScalar::gaussian(rat_int(1), rat_int(1)), [0, 0, 1, 1])]
    {
        let g2 = s_desc(w2, c);
        let w = iso_c2(&g1, &g2).unwrap().unwrap_or_else(|| panic!("{c:?}"));
        let r = witness_periodicity(&g1, &g2, &w).unwrap();
        assert!(r < 1e-7, "{c:?}: {r} {:?}", w.trace);
    }
    assert!(iso_c2(&g1, &G::C2Z { omega: i() }).unwrap().is_none());
}

fn rq(terms: &[(&str, i64)]) -> QVector {
    let t: Vec<(&str, Rational)> = terms.iter().map(|(s, c)| (*s, rat_int(*c))).collect();
    let anchors = if terms.iter().any(|(s, _)| *s == "s") { vec![("s", Complex64::new(0.2718, 0.0))] } else { vec![] };
    QVector::from_terms(&t, &anchors).unwrap()
}

#[test]
fn real_examples() {
    let g1 = G::R2S { a: ExactScalar::int(1), xi: rq(&[("s", 1)]) };
    let g2 = G::R2S { a: ExactScalar::int(2), xi: rq(&[("1", 1), ("s", 3)]) };
    let w = iso_r2(&g1, &g2).unwrap().unwrap();
    let r = witness_periodicity(&g1, &g2, &w).unwrap();
    assert!(r < 1e-7, "{r} {:?}", w.trace);
    for row in w.values() {
        for z in row {
            assert!(z.im.abs() < 1e-9, "{:?}", w.values());
        }
    }
    let t1 = G::R2T { a: ExactScalar::int(1), xi: rq(&[("s", 1)]) };
    assert!(iso_r2(&g1, &t1).unwrap().is_none());
    let t2 = G::R2T { a: ExactScalar::int(3), xi: rq(&[("1", 2), ("s", 5)]) };
    let w = iso_r2(&t1, &t2).unwrap().unwrap();
    let r = witness_periodicity(&t1, &t2, &w).unwrap();
    assert!(r < 1e-7, "{r} {:?}", w.trace);
    let z1 = G::R2Z { a: ExactScalar::int(1) };
    let z2 = G::R2Z { a: ExactScalar::int(3) };
    let w = iso_r2(&z1, &z2).unwrap().unwrap();
    assert!(witness_periodicity(&z1, &z2, &w).unwrap() < 1e-7);
}

#[test]
fn classification_types() {
    assert_eq!(classify_type(&G::R1Sin), "3");
    assert_eq!(classify_type(&G::R2T { a: ExactScalar::int(1), xi: rq(&[("s", 1)]) }), "4r");
    assert_eq!(aut(&G::R1Sin).unwrap().group, "Q*");
    assert_eq!(aut(&G::R1Id).unwrap().group, "R*");
    let p = G::C2Product { f1: Box::new(G::C1Exp), f2: Box::new(G::C1Id) };
    assert_eq!(aut(&p).unwrap().group, "Diag(Q*, C*)");
    let p = G::R2Product { f1: Box::new(G::R1Exp), f2: Box::new(G::R1Sin) };
    assert_eq!(aut(&p).unwrap().group, "Diag(Q*, Q*)");
}

#[test]
fn aut_families_multiply() {
    let descs = [G::C2Z { omega: i() }, s_desc(i(), [0, 0, 1, 0]), G::R2S { a: ExactScalar::int(1), xi: rq(&[("s", 1)]) }];
    for g in descs {
        let a = aut(&g).unwrap();
        let one = a.numeric_instance(&ExactScalar::int(1)).unwrap();
        assert_eq!(
            one,
            vec![vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]]
        );
        let m2 = a.numeric_instance(&ExactScalar::int(2)).unwrap();
        let m3 = a.numeric_instance(&ExactScalar::int(3)).unwrap();
        let m6 = a.numeric_instance(&ExactScalar::int(6)).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                let p = m2[r][0] * m3[0][c] + m2[r][1] * m3[1][c];
                assert!((p - m6[r][c]).norm() < 1e-8 * m6[r][c].norm().max(1.0), "{:?}", a.case_id);
            }
        }
    }
}

#[test]
fn descriptor_json_roundtrip() {
    let g = s_desc(i(), [1, 0, 2, 0]);
    let s = serde_json::to_string(&g).unwrap();
    let back: GroupDescriptor = serde_json::from_str(&s).unwrap();
    assert_eq!(g, back);
    let r: GroupDescriptor = serde_json::from_str(r#"{"kind":"R1_Sin"}"#).unwrap();
    assert_eq!(r, G::R1Sin);
}
