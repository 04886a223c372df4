mod json;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::Value;

use lnash::algmodel::{embed_p5, embed_p8, label};
use lnash::classify::{aut, classify_type, isomorphic};
use lnash::harness::{verify, SuiteParams, DEFAULT_SEED};
use lnash::painleve::{family_eval, family_rank, period_lattice, Family, FamilyDescriptor};
use lnash::residue::{gen_residue, residue_c};
use lnash::{Error, EvalContext, ExactScalar, GroupDescriptor, LatticeSpec};

use json::{complex, envelope, num, render};

#[derive(Parser)]
#[command(name = "lnash", version, about = "Abelian locally Nash groups: numerics, deciders and verification suites")]
struct Cli {
    /// Seed for sampled checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance override (evaluation target or suite tolerance)
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Compact single-line JSON (verify prints a text summary without it)
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Func {
    Wp,
    Wpprime,
    Zeta,
    Sigma,
    Sigmatilde,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyOp {
    Rank,
    Periods,
    Eval,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    P5,
    P8,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a Weierstrass function
    Eval {
        #[arg(long = "fn", value_enum)]
        func: Func,
        /// Lattice JSON, or an exact omega for <1, omega>
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Residue constants of a sublattice
    Residue {
        #[arg(long)]
        sup: String,
        #[arg(long)]
        sub: String,
    },
    /// Generalized index and residue of commensurable lattices
    Genresidue {
        #[arg(long)]
        l2: String,
        #[arg(long)]
        l1: String,
    },
    /// Representative maps of the Painleve families
    Family {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        lattice: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, value_enum)]
        op: FamilyOp,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// Classification type and automorphism group
    Classify {
        #[arg(long)]
        desc: String,
    },
    /// Decide isomorphism and emit a witness
    Isomorphic {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
    },
    /// Automorphism-group descriptor
    Aut {
        #[arg(long)]
        desc: String,
    },
    /// Algebraic-group label
    Label {
        #[arg(long)]
        desc: String,
    },
    /// Projective embedding of a Ga- or Gm-extension
    Embed {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        omega: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Run a verification suite
    Verify {
        #[arg(long)]
        suite: String,
        /// Suite parameters as JSON
        #[arg(long)]
        params: Option<String>,
    },
}

enum Failure {
    Usage(&'static str, String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<(Value, bool), Failure>;

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage("InvalidJson", format!("{what}: {e}")))
}

/// "re,im", "re", a JSON number or a JSON [re, im] pair.
fn parse_complex(what: &str, s: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::Usage("InvalidComplex", format!("{what}: cannot read {s:?}"));
    let t = s.trim();
    if t.starts_with('[') {
        let [re, im]: [f64; 2] = serde_json::from_str(t).map_err(|_| bad())?;
        return Ok(Complex64::new(re, im));
    }
    let parts: Vec<&str> = t.split(',').collect();
    let f = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [re] => Ok(Complex64::new(f(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(f(re)?, f(im)?)),
        _ => Err(bad()),
    }
}

/// A lattice object, or an exact ω standing for ⟨1, ω⟩.
fn parse_lattice(what: &str, s: &str) -> Result<LatticeSpec, Failure> {
    if let Ok(l) = serde_json::from_str::<LatticeSpec>(s) {
        return Ok(l);
    }
    let v: Value = parse_json(what, s)?;
    if v.get("kind").is_some() {
        let w: ExactScalar = serde_json::from_value(v).map_err(|e| Failure::Usage("InvalidJson", format!("{what}: {e}")))?;
        return Ok(LatticeSpec::from_omega(&w)?);
    }
    match serde_json::from_value::<LatticeSpec>(v) {
        Ok(l) => Ok(l),
        Err(e) => Err(Failure::Usage("InvalidJson", format!("{what}: {e}"))),
    }
}

fn parse_desc(what: &str, s: &str) -> Result<GroupDescriptor, Failure> {
    let g: GroupDescriptor = parse_json(what, s)?;
    g.validate()?;
    Ok(g)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn run(cli: &Cli) -> Out {
    let done = |v: Value| Ok((v, true));
    match &cli.cmd {
        Cmd::Eval { func, lattice, xi, u } => {
            let l = parse_lattice("lattice", lattice)?;
            let ctx = match cli.tol {
                Some(t) => EvalContext::with_tol(&l, t)?,
                None => EvalContext::new(&l)?,
            };
            let u = parse_complex("u", u)?;
            let r = match func {
                Func::Wp => ctx.wp(u)?,
                Func::Wpprime => ctx.wp_prime(u)?,
                Func::Zeta => ctx.zeta(u)?,
                Func::Sigma => ctx.sigma(u)?,
                Func::Sigmatilde => {
                    let xi = xi.as_deref().ok_or_else(|| Failure::Usage("MissingArgument", "sigmatilde needs --xi".into()))?;
                    ctx.sigma_tilde(parse_complex("xi", xi)?, u)?
                }
            };
            done(envelope(vec![("value", complex(r.value)), ("err", num(r.err))]))
        }
        Cmd::Residue { sup, sub } => {
            let k = residue_c(&parse_lattice("sup", sup)?, &parse_lattice("sub", sub)?)?;
            done(envelope(vec![
                ("c", complex(k.c.value)),
                ("C", complex(k.big_c.value)),
                ("Cprime", complex(k.c_prime.value)),
                ("index", Value::from(k.rep_system.reps.len())),
                ("anchor_u0", complex(k.anchor_u0)),
            ]))
        }
        Cmd::Genresidue { l2, l1 } => {
            let g = gen_residue(&parse_lattice("l2", l2)?, &parse_lattice("l1", l1)?)?;
            done(envelope(vec![("index", Value::from(g.index.to_string())), ("qc", complex(g.qc.value)), ("qc_err", num(g.qc.err))]))
        }
        Cmd::Family { kind, lattice, xi, op, u, v } => {
            let fam: Family = kind.parse()?;
            let l = lattice.as_deref().map(|s| parse_lattice("lattice", s)).transpose()?;
            let xi = xi.as_deref().map(|s| parse_complex("xi", s)).transpose()?;
            let d = FamilyDescriptor::new(fam, l, xi)?;
            match op {
                FamilyOp::Rank => done(envelope(vec![("rank", Value::from(family_rank(&d)?))])),
                FamilyOp::Periods => {
                    let p = period_lattice(&d)?;
                    let gens = p.generators.iter().map(|g| Value::Array(vec![complex(g[0]), complex(g[1])])).collect();
                    done(envelope(vec![
                        ("rank", Value::from(p.rank)),
                        ("generators", Value::Array(gens)),
                        ("derived", Value::from(p.derived)),
                    ]))
                }
                FamilyOp::Eval => {
                    let need = |x: &Option<String>, n: &'static str| {
                        x.as_deref()
                            .ok_or_else(|| Failure::Usage("MissingArgument", format!("eval needs --{n}")))
                            .and_then(|s| parse_complex(n, s))
                    };
                    let (a, b) = family_eval(&d, need(u, "u")?, need(v, "v")?)?;
                    done(envelope(vec![
                        ("value", Value::Array(vec![complex(a.value), complex(b.value)])),
                        ("err", Value::Array(vec![num(a.err), num(b.err)])),
                    ]))
                }
            }
        }
        Cmd::Classify { desc } => {
            let g = parse_desc("desc", desc)?;
            let t = classify_type(&g);
            let t = t.parse::<u64>().map(Value::from).unwrap_or(Value::String(t));
            let a = aut(&g)?;
            done(envelope(vec![("type", t), ("aut", Value::String(a.group))]))
        }
        Cmd::Isomorphic { g1, g2 } => {
            let (g1, g2) = (parse_desc("g1", g1)?, parse_desc("g2", g2)?);
            match isomorphic(&g1, &g2)? {
                None => done(envelope(vec![("isomorphic", Value::Bool(false))])),
                Some(w) => {
                    let m = w.values();
                    let rows = m.iter().map(|r| Value::Array(r.iter().map(|z| complex(*z)).collect())).collect();
                    done(envelope(vec![
                        ("isomorphic", Value::Bool(true)),
                        ("abcd", w.abcd.map(|a| to_value(&a)).unwrap_or(Value::Null)),
                        ("witness", Value::Array(rows)),
                        ("multiplier", Value::from(w.multiplier)),
                        ("trace", to_value(&w.trace)),
                    ]))
                }
            }
        }
        Cmd::Aut { desc } => {
            let a = aut(&parse_desc("desc", desc)?)?;
            let Value::Object(m) = to_value(&a) else { unreachable!("struct serializes to an object") };
            done(envelope(m))
        }
        Cmd::Label { desc } => {
            let l = label(&parse_desc("desc", desc)?)?;
            done(envelope(vec![("label", Value::String(l.to_string())), ("type", Value::String(l.type_code()))]))
        }
        Cmd::Embed { model, omega, xi, u, v } => {
            let l = parse_lattice("omega", omega)?;
            let ctx = EvalContext::new(&l)?;
            let (u, v) = (parse_complex("u", u)?, parse_complex("v", v)?);
            let p = match model {
                Model::P5 => embed_p5(&ctx, u, v)?,
                Model::P8 => {
                    let xi = xi.as_deref().ok_or_else(|| Failure::Usage("MissingArgument", "p8 needs --xi".into()))?;
                    embed_p8(&ctx, parse_complex("xi", xi)?, u, v)?
                }
            };
            let coords = p.values().into_iter().map(complex).collect();
            done(envelope(vec![("coords", Value::Array(coords)), ("pole_branch", Value::Bool(p.pole_branch))]))
        }
        Cmd::Verify { suite, params } => {
            let params: SuiteParams = match params {
                Some(s) => parse_json("params", s)?,
                None => SuiteParams::default(),
            };
            let r = verify(suite, &params, cli.seed.unwrap_or(DEFAULT_SEED), cli.tol)?;
            let pass = r.pass;
            let Value::Object(m) = to_value(&r) else { unreachable!("struct serializes to an object") };
            Ok((envelope(m), pass))
        }
    }
}

fn verify_text(v: &Value) -> String {
    let mut out = String::new();
    let s = |k: &str| v.get(k).cloned().unwrap_or(Value::Null);
    out.push_str(&format!(
        "suite {} seed {} tol {:e}: {}\n",
        s("suite").as_str().unwrap_or("?"),
        s("seed"),
        s("tol").as_f64().unwrap_or(0.0),
        if s("pass").as_bool() == Some(true) { "PASS" } else { "FAIL" }
    ));
    for c in s("checks").as_array().into_iter().flatten() {
        out.push_str(&format!(
            "  {} {:<40} residual {:.3e} ({} {:e}, {} samples)\n",
            if c["pass"].as_bool() == Some(true) { "ok  " } else { "FAIL" },
            c["name"].as_str().unwrap_or("?"),
            c["residual"].as_f64().unwrap_or(f64::NAN),
            c["expect"].as_str().unwrap_or("?"),
            c["bound"].as_f64().unwrap_or(f64::NAN),
            c["samples"],
        ));
    }
    if let Some(Value::Object(n)) = v.get("notes") {
        for (k, x) in n {
            out.push_str(&format!("  note {k}: {}\n", x.as_str().unwrap_or("")));
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand)
            {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let v = envelope(vec![("error", Value::from("Usage")), ("detail", Value::from(e.to_string().trim().to_string()))]);
            println!("{}", render(&v, false));
            return ExitCode::from(2);
        }
    };
    let pretty = !cli.json;
    match run(&cli) {
        Ok((v, ok)) => {
            if matches!(cli.cmd, Cmd::Verify { .. }) && pretty {
                print!("{}", verify_text(&v));
            } else {
                println!("{}", render(&v, pretty));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(code, detail)) => {
            println!("{}", render(&envelope(vec![("error", Value::from(code)), ("detail", Value::from(detail))]), false));
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            println!("{}", render(&envelope(vec![("error", Value::from(e.code())), ("detail", Value::from(e.to_string()))]), false));
            ExitCode::from(1)
        }
    }
}
