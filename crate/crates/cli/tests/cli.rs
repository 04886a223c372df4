use std::process::{Command, Output};

use serde_json::Value;

fn lnash(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnash")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

const GAUSS: &str = r#"{"kind":"quad","D":-1,"x":"0","y":"1"}"#;

#[test]
fn classify_sin_matches_documented_output() {
    let o = lnash(&["classify", "--desc", r#"{"kind":"R1_Sin"}"#, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), r#"{"type":3,"aut":"Q*","spec":"1"}"#);
}

#[test]
fn classify_two_dimensional_type_is_a_string() {
    let o = lnash(&["classify", "--desc", &format!(r#"{{"kind":"C2_Z","omega":{GAUSS}}}"#), "--json"]);
    assert_eq!(json(&o)["type"], "2c");
}

#[test]
fn isomorphic_example() {
    let g1 = format!(r#"{{"kind":"C2_Z","omega":{GAUSS}}}"#);
    let g2 = r#"{"kind":"C2_Z","omega":{"kind":"quad","D":-1,"x":"0","y":"2"}}"#;
    let o = lnash(&["isomorphic", "--g1", &g1, "--g2", g2, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["abcd"], serde_json::json!([2, 0, 0, 1]));
    assert!(v["trace"].as_array().is_some_and(|t| !t.is_empty()));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("1.0000000000000000e0"), "{text}");
}

#[test]
fn cross_type_is_not_isomorphic() {
    let o = lnash(&["isomorphic", "--g1", r#"{"kind":"R1_Sin"}"#, "--g2", r#"{"kind":"R1_Exp"}"#, "--json"]);
    assert_eq!(json(&o)["isomorphic"], false);
}

#[test]
fn verify_exit_codes() {
    let o = lnash(&["verify", "--suite", "legendre", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["seed"], 20_240_917);
    let o = lnash(&["verify", "--suite", "legendre", "--tol", "1e-30", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let o = lnash(&["verify", "--suite", "nope", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "UnknownSuite");
    let o = lnash(&["verify", "--suite", "period_g4", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
}

#[test]
fn usage_and_domain_errors() {
    let o = lnash(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "Usage");
    let o = lnash(&["classify", "--desc", &format!(r#"{{"kind":"C2_Z","omega":{GAUSS},"extra":1}}"#)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "InvalidJson");
    let o = lnash(&["eval", "--fn", "wp", "--lattice", GAUSS, "--u", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "PoleAt");
    let o = lnash(&[
        "classify",
        "--desc",
        r#"{"kind":"C2_S","omega":{"kind":"quad","D":-1,"x":"0","y":"1"},"xi":{"basis":["1"],"coords":["1/2"]}}"#,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "InvalidDescriptor");
}

#[test]
fn eval_half_period_of_square_lattice() {
    let l = r#"{"w1":{"kind":"rat","v":"2"},"w2":{"kind":"quad","D":-1,"x":"0","y":"2"}}"#;
    let o = lnash(&["eval", "--fn", "wp", "--lattice", l, "--u", "1,1", "--json"]);
    let v = json(&o);
    let re = v["value"][0].as_f64().unwrap();
    let im = v["value"][1].as_f64().unwrap();
    assert!(re.hypot(im) < 1e-10);
}

#[test]
fn genresidue_index_is_rational_string() {
    let l1 = r#"{"w1":{"kind":"rat","v":"3/2"},"w2":{"kind":"quad","D":-1,"x":"0","y":"3/2"}}"#;
    let o = lnash(&["genresidue", "--l2", GAUSS, "--l1", l1, "--json"]);
    assert_eq!(json(&o)["index"], "9/4");
}

#[test]
fn family_and_embed() {
    let o = lnash(&["family", "--kind", "g5", "--lattice", GAUSS, "--xi", "0.3,0.2", "--op", "rank", "--json"]);
    assert_eq!(json(&o)["rank"], 3);
    let o = lnash(&["embed", "--model", "p5", "--omega", GAUSS, "--u", "0,0", "--v", "0.5", "--json"]);
    let v = json(&o);
    assert_eq!(v["pole_branch"], true);
    assert_eq!(v["coords"].as_array().unwrap().len(), 6);
}

#[test]
fn aut_and_label_outputs() {
    let o = lnash(&["aut", "--desc", r#"{"kind":"C2_Product","f1":{"kind":"C1_Exp"},"f2":{"kind":"C1_Id"}}"#, "--json"]);
    assert_eq!(json(&o)["group"], "Diag(Q*, C*)");
    let o = lnash(&["label", "--desc", r#"{"kind":"R1_Sin"}"#, "--json"]);
    assert_eq!(json(&o)["label"], "SO2");
}
