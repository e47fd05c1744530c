//! Tabular output shared by all subcommands.

use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::CliError;

/// 17 significant digits; infinities as `inf` / `-inf`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Null,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Num(x) => num(*x),
            Field::Int(i) => i.to_string(),
            Field::Text(t) => t.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Num(x) if x.is_finite() => {
                Value::Number(Number::from_str(&num(*x)).expect("formatted float is a JSON number"))
            }
            Field::Num(x) => Value::String(num(*x)),
            Field::Int(i) => Value::from(*i),
            Field::Text(t) => Value::String(t.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Null => Value::Null,
        }
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Num(x)
    }
}

impl From<onecircle::Extended> for Field {
    fn from(x: onecircle::Extended) -> Self {
        match x {
            onecircle::Extended::Finite(v) => Field::Num(v),
            onecircle::Extended::Infinite => Field::Num(f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self::with_header(header.iter().map(|h| h.to_string()).collect())
    }

    pub fn with_header(header: Vec<String>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    /// A top-level array with one object per row.
    pub fn to_json(&self) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.clone(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&Value::Array(records)).expect("json");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(
            num(2.0 * std::f64::consts::PI / 3.0),
            "2.0943951023931953e0"
        );
        assert_eq!(num(0.0), "0.0000000000000000e0");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
        for &x in &[1e-300, 0.1, -123.456, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["a", "b", "tag"]);
        t.push(vec![
            Field::Num(0.5),
            Field::Num(f64::INFINITY),
            Field::Text("C3".into()),
        ]);
        t.push(vec![Field::Int(-2), Field::Null, Field::Bool(true)]);
        assert_eq!(
            t.to_csv().unwrap(),
            "a,b,tag\n5.0000000000000000e-1,inf,C3\n-2,,true\n"
        );
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["b"], "inf");
        assert_eq!(v[0]["a"].as_f64(), Some(0.5));
        assert!(t.to_json().contains("5.0000000000000000e-1"));
        assert_eq!(v[1]["b"], Value::Null);
    }
}
