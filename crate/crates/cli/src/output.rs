use std::io::{self, Write};

use serde_json::{Map, Number, Value};

use crate::args::Format;

/// One computed quantity, optionally compared with a reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: &'static str,
    pub inputs: Vec<(&'static str, Input)>,
    pub value: f64,
    pub error_estimate: f64,
    pub reference: Option<f64>,
    pub residual: Option<f64>,
    pub converged: bool,
    pub evals: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Int(u64),
    Real(f64),
    List(Vec<f64>),
    Text(String),
}

impl OutputRecord {
    /// Sets `reference` and `residual = value - reference`.
    pub fn with_reference(mut self, reference: f64) -> Self {
        self.reference = Some(reference);
        self.residual = Some(self.value - reference);
        self
    }
}

/// Seventeen significant digits, enough to round-trip any f64.
pub fn json_number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    if x == x.trunc() && x.abs() < 1e15 {
        return Value::Number(Number::from_string_unchecked(format!("{x:.1}")));
    }
    Value::Number(Number::from_string_unchecked(format!("{x:.16e}")))
}

/// `digits` significant digits; plain notation for moderate magnitudes.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..10).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.prec$e}", prec = digits - 1)
    }
}

fn input_json(v: &Input) -> Value {
    match v {
        Input::Int(i) => Value::Number((*i).into()),
        Input::Real(x) => json_number(*x),
        Input::List(xs) => Value::Array(xs.iter().map(|&x| json_number(x)).collect()),
        Input::Text(s) => Value::String(s.clone()),
    }
}

// Inputs are echoed in shortest round-trip form.
fn input_text(v: &Input) -> String {
    match v {
        Input::Int(i) => i.to_string(),
        Input::Real(x) => x.to_string(),
        Input::List(xs) => xs.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        Input::Text(s) => s.clone(),
    }
}

fn inputs_text(r: &OutputRecord) -> String {
    r.inputs
        .iter()
        .map(|(k, v)| format!("{k}={}", input_text(v)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn to_json(r: &OutputRecord) -> Value {
    let mut inputs = Map::new();
    for (k, v) in &r.inputs {
        inputs.insert((*k).to_string(), input_json(v));
    }
    let opt = |x: Option<f64>| x.map_or(Value::Null, json_number);
    let mut m = Map::new();
    m.insert("command".into(), Value::String(r.command.into()));
    m.insert("inputs".into(), Value::Object(inputs));
    m.insert("value".into(), json_number(r.value));
    m.insert("error_estimate".into(), json_number(r.error_estimate));
    m.insert("reference".into(), opt(r.reference));
    m.insert("residual".into(), opt(r.residual));
    m.insert("converged".into(), Value::Bool(r.converged));
    m.insert("evals".into(), Value::Number(r.evals.into()));
    Value::Object(m)
}

const HEADER: [&str; 8] = [
    "command",
    "inputs",
    "value",
    "error_estimate",
    "reference",
    "residual",
    "converged",
    "evals",
];

fn text_row(r: &OutputRecord) -> [String; 8] {
    let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| sig(v, 10));
    [
        r.command.to_string(),
        inputs_text(r),
        sig(r.value, 10),
        sig(r.error_estimate, 3),
        opt(r.reference),
        r.residual.map_or_else(|| "-".to_string(), |v| sig(v, 3)),
        r.converged.to_string(),
        r.evals.to_string(),
    ]
}

/// Left-aligned text columns, numeric columns right-aligned.
pub fn write_table<W: Write>(
    out: &mut W,
    rows: &[[String; 8]],
    header: [&str; 8],
) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            let pad = w - cell.chars().count();
            if i < 2 {
                s.push_str(cell);
                if i + 1 < cells.len() {
                    s.push_str(&" ".repeat(pad));
                }
            } else {
                s.push_str(&" ".repeat(pad));
                s.push_str(cell);
            }
        }
        s
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

pub fn write_records<W: Write>(
    out: &mut W,
    records: &[OutputRecord],
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                writeln!(out, "{}", to_json(r))?;
            }
            Ok(())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(HEADER).map_err(io::Error::other)?;
            for r in records {
                let num = |x: f64| json_number(x).to_string();
                let opt = |x: Option<f64>| x.map_or_else(String::new, num);
                w.write_record([
                    r.command.to_string(),
                    inputs_text(r),
                    num(r.value),
                    num(r.error_estimate),
                    opt(r.reference),
                    opt(r.residual),
                    r.converged.to_string(),
                    r.evals.to_string(),
                ])
                .map_err(io::Error::other)?;
            }
            w.flush()
        }
        Format::Text => {
            let rows: Vec<_> = records.iter().map(text_row).collect();
            write_table(out, &rows, HEADER)
        }
    }
}
