//! Reports: a JSON value tree rendered either as indented `key: value` text
//! or as pretty-printed JSON.

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct Report(pub Map<String, Value>);

impl Report {
    pub fn new(command: &str) -> Self {
        let mut m = Map::new();
        m.insert("command".into(), Value::String(command.into()));
        Report(m)
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.into(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn to_value(&self) -> Value {
        Value::Object(self.0.clone())
    }

    pub fn render(&self, machine: bool) -> String {
        if machine {
            let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report values are plain JSON");
            s.push('\n');
            s
        } else {
            render_text(&self.to_value())
        }
    }
}

/// A number for a report. Negative zero is printed as zero and non-finite
/// values become `null`.
pub fn num(x: f64) -> Value {
    let x = x + 0.0;
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn matrix<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> Value {
    Value::Array(
        (0..R)
            .map(|i| nums(&(0..C).map(|j| m[(i, j)]).collect::<Vec<_>>()))
            .collect(),
    )
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn inline_array(xs: &[Value]) -> String {
    format!("[{}]", xs.iter().map(scalar_text).collect::<Vec<_>>().join(", "))
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(is_scalar),
        other => is_scalar(other),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(xs) => inline_array(xs),
        other => scalar_text(other),
    }
}

fn write_object(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    for (k, v) in m {
        if is_inline(v) {
            out.push_str(&format!("{pad}{k}: {}\n", inline(v)));
        } else {
            out.push_str(&format!("{pad}{k}:\n"));
            write_block(out, v, indent + 2);
        }
    }
}

fn write_block(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => write_object(out, m, indent),
        Value::Array(xs) => {
            for x in xs {
                match x {
                    Value::Object(m) => {
                        let mut item = String::new();
                        write_object(&mut item, m, indent + 2);
                        // first line of the item gets the list marker
                        let marked = format!("{pad}- {}", &item[indent + 2..]);
                        out.push_str(if item.is_empty() { "" } else { &marked });
                    }
                    other if is_inline(other) => out.push_str(&format!("{pad}{}\n", inline(other))),
                    other => {
                        out.push_str(&format!("{pad}-\n"));
                        write_block(out, other, indent + 2);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar_text(other))),
    }
}

pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    write_block(&mut out, v, 0);
    out
}
