//! JSON rendering with floats printed to 17 significant digits.

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

pub fn num(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn complex(z: Complex64) -> Value {
    Value::Array(vec![num(z.re), num(z.im)])
}

/// Object with the given entries followed by `"spec":"1"`.
pub fn envelope<K: Into<String>>(entries: impl IntoIterator<Item = (K, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.into(), v);
    }
    m.insert("spec".into(), Value::String("1".into()));
    Value::Object(m)
}

pub fn render(v: &Value, pretty: bool) -> String {
    let mut out = String::new();
    write(v, pretty, 0, &mut out);
    out
}

fn format_number(n: &Number) -> String {
    if n.is_f64() {
        format!("{:.16e}", n.as_f64().expect("f64"))
    } else {
        n.to_string()
    }
}

fn indent(out: &mut String, pretty: bool, level: usize) {
    if pretty {
        out.push('\n');
        out.push_str(&"  ".repeat(level));
    }
}

fn write(v: &Value, pretty: bool, level: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) => {
            // short numeric arrays stay on one line
            let flat = !pretty || items.iter().all(|x| !x.is_array() && !x.is_object());
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                    if flat && pretty {
                        out.push(' ');
                    }
                }
                if !flat {
                    indent(out, pretty, level + 1);
                }
                write(x, pretty, level + 1, out);
            }
            if !flat && !items.is_empty() {
                indent(out, pretty, level);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                indent(out, pretty, level + 1);
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push(':');
                if pretty {
                    out.push(' ');
                }
                write(x, pretty, level + 1, out);
            }
            if !m.is_empty() {
                indent(out, pretty, level);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_17_digits() {
        assert_eq!(render(&num(0.1), false), "1.0000000000000001e-1");
        assert_eq!(render(&serde_json::json!({"a": [1, 2.5]}), false), r#"{"a":[1,2.5000000000000000e0]}"#);
    }

    #[test]
    fn envelope_appends_spec() {
        let v = envelope(vec![("type", Value::from(3)), ("aut", Value::from("Q*"))]);
        assert_eq!(render(&v, false), r#"{"type":3,"aut":"Q*","spec":"1"}"#);
    }
}
