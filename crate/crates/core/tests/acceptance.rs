//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;

use lnash::algmodel::label;
use lnash::classify::aut;
use lnash::classify::GroupDescriptor;
use lnash::exactnum::rat_int;
use lnash::harness::{brute_force_commensurable, descriptor_pairs, quadratic_pairs, verify, Report, SuiteParams, DEFAULT_SEED};
use lnash::lattice::{commensurable, verify_witness, LatticeSpec};
use lnash::painleve::{family_rank, Family, FamilyDescriptor};
use lnash::ExactScalar;

type Outcome = Result<String, String>;

/// `LNASH_SEED` overrides the default seed.
fn seed() -> u64 {
    std::env::var("LNASH_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn suite(name: &str) -> Result<Report, String> {
    verify(name, &SuiteParams::default(), seed(), None).map_err(|e| format!("{name}: {e}"))
}

fn suites(names: &[&str]) -> Outcome {
    let mut worst = 0.0f64;
    for n in names {
        let r = suite(n)?;
        if !r.pass {
            let bad: Vec<_> = r.failed().map(|c| format!("{} ({:.2e} vs {:.0e})", c.name, c.residual, c.bound)).collect();
            return Err(format!("{n}: {}", bad.join(", ")));
        }
        worst = worst.max(r.max_residual);
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn c1_ranks() -> Outcome {
    let start = Instant::now();
    let gauss = LatticeSpec::from_omega(&ExactScalar::gaussian(rat_int(0), rat_int(1))).map_err(|e| e.to_string())?;
    let xi = Complex64::new(0.31, 0.17);
    let fams = [
        FamilyDescriptor::simple(Family::G1),
        FamilyDescriptor::simple(Family::G2),
        FamilyDescriptor::simple(Family::G3),
        FamilyDescriptor::new(Family::G4, Some(gauss.clone()), Some(Complex64::new(1.0, 0.0))),
        FamilyDescriptor::new(Family::G5, Some(gauss), Some(xi)),
    ];
    let mut ranks = Vec::new();
    for f in fams {
        ranks.push(family_rank(&f.map_err(|e| e.to_string())?).map_err(|e| e.to_string())?);
    }
    if ranks != [0, 1, 2, 2, 3] {
        return Err(format!("ranks {ranks:?}"));
    }
    let detail = suites(&["period_g1", "period_g2", "period_g3", "period_g4", "period_g5"])?;
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("ranks (0,1,2,2,3), {detail}"))
}

fn c6_commensurable() -> Outcome {
    let pairs = quadratic_pairs(seed(), 100).map_err(|e| e.to_string())?;
    let mut found = 0;
    for (i, (w1, w2)) in pairs.iter().enumerate() {
        let fast = commensurable(w1, w2).map_err(|e| e.to_string())?;
        let slow = brute_force_commensurable(w1, w2, 10).map_err(|e| e.to_string())?;
        if fast.is_some() != slow.is_some() {
            return Err(format!("pair {i} ({w1}, {w2}): decider {fast:?}, oracle {slow:?}"));
        }
        for w in fast.iter().chain(slow.iter()) {
            if !verify_witness(w1, w2, w).map_err(|e| e.to_string())? {
                return Err(format!("pair {i}: witness {w:?} does not verify"));
            }
        }
        found += fast.is_some() as usize;
    }
    Ok(format!("100 pairs agree, {found} commensurable"))
}

fn c9_witnesses() -> Outcome {
    let r =
        verify("witness_periodicity", &SuiteParams { samples: Some(50), ..Default::default() }, seed(), None).map_err(|e| e.to_string())?;
    if !r.pass {
        let bad: Vec<_> = r.failed().map(|c| c.name.clone()).collect();
        return Err(bad.join(", "));
    }
    Ok(format!("{} checks, max residual {:.2e}", r.checks.len(), r.max_residual))
}

type Criterion = Box<dyn Fn() -> Outcome>;

type Matrix = Vec<Vec<Complex64>>;

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn c10_automorphisms() -> Outcome {
    let pairs = descriptor_pairs(seed(), 10).map_err(|e| e.to_string())?;
    let wanted = [("C2_Z", "7"), ("C2_S", "8"), ("R2_S", "7"), ("R2_T", "8")];
    let mut worst = 0.0f64;
    for (kind, case) in wanted {
        let g = pairs.iter().map(|p| &p.g1).find(|g| g.kind_name() == kind).ok_or(format!("no {kind} descriptor"))?;
        let a = aut(g).map_err(|e| e.to_string())?;
        if a.case_id != case {
            return Err(format!("{kind}: case {} instead of {case}", a.case_id));
        }
        let inst = |k: i64| a.numeric_instance(&ExactScalar::int(k)).map_err(|e| e.to_string());
        let one = inst(1)?;
        let id: Matrix =
            vec![vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
        if one != id {
            return Err(format!("{kind}: instance(1) = {one:?}"));
        }
        let d = max_diff(&matmul(&inst(2)?, &inst(3)?), &inst(6)?);
        if d >= 1e-8 {
            return Err(format!("{kind}: composition residual {d:.2e}"));
        }
        worst = worst.max(d);
    }
    Ok(format!("4 families, composition residual {worst:.2e}"))
}

fn desc(json: &str) -> Result<GroupDescriptor, String> {
    serde_json::from_str(json).map_err(|e| format!("{json}: {e}"))
}

fn c12_labels() -> Outcome {
    let pairs = descriptor_pairs(seed(), 10).map_err(|e| e.to_string())?;
    let pick = |kind: &str| pairs.iter().map(|p| p.g1.clone()).find(|g| g.kind_name() == kind).ok_or(format!("no {kind}"));
    let gauss = r#"{"kind":"quad","D":-1,"x":"0","y":"1"}"#;
    let golden: Vec<(GroupDescriptor, &str, &str)> = vec![
        (desc(&format!(r#"{{"kind":"C2_Product","f1":{{"kind":"C1_Exp"}},"f2":{{"kind":"C1_Wp","omega":{gauss}}}}}"#))?, "1ac", "Gm x E"),
        (desc(&format!(r#"{{"kind":"C2_Z","omega":{gauss}}}"#))?, "2ac", "Ext(E, Ga)"),
        (pick("C2_S")?, "3ac", "Ext(E, Gm)"),
        (desc(r#"{"kind":"C2_Abelian"}"#)?, "4ac", "AbelianSurface"),
        (desc(r#"{"kind":"R2_Product","f1":{"kind":"R1_Sin"},"f2":{"kind":"R1_Id"}}"#)?, "1ar", "SO2 x Ga"),
        (desc(r#"{"kind":"R2_Z","a":{"kind":"rat","v":"2"}}"#)?, "2ar", "Ext(E_inv, Ga)"),
        (pick("R2_S")?, "3ar", "Ext(E_inv, Gm)"),
        (pick("R2_T")?, "4ar", "Ext(E_inv, SO2)"),
        (desc(r#"{"kind":"R2_Abelian"}"#)?, "5ar", "SimpleAbelianSurface/R"),
    ];
    for (g, code, text) in &golden {
        let l = label(g).map_err(|e| e.to_string())?;
        if l.type_code() != *code || l.to_string() != *text {
            return Err(format!("{}: got {} / {}, want {code} / {text}", g.kind_name(), l.type_code(), l));
        }
    }
    Ok(format!("{} types match", golden.len()))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 rank table and period generators", Box::new(c1_ranks)),
        ("2 Legendre relation", Box::new(|| suites(&["legendre"]))),
        ("3 coset identities", Box::new(|| suites(&["cosets1", "cosets2", "cosets3", "cosets4"]))),
        ("4 homogeneity", Box::new(|| suites(&["homogeneity"]))),
        ("5 conjugation", Box::new(|| suites(&["conjugation"]))),
        ("6 commensurability decider vs oracle", Box::new(c6_commensurable)),
        ("7 Xi calculus", Box::new(|| suites(&["xi_axioms"]))),
        ("8 qc calculus", Box::new(|| suites(&["qc_telescope", "qc_real", "qc_scaling"]))),
        ("9 isomorphism witnesses", Box::new(c9_witnesses)),
        ("10 automorphism families", Box::new(c10_automorphisms)),
        ("11 projective embeddings", Box::new(|| suites(&["kernel_p5", "kernel_p8"]))),
        ("12 algebraic-group labels", Box::new(c12_labels)),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{secs:.2} s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} [{secs:.2} s]");
            }
        }
    }
    println!("{} of {} criteria passed (seed {})", criteria.len() - failed, criteria.len(), seed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
