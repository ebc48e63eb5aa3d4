//! Table assembly and serialization: CSV with a fixed column order and
//! scientific notation at the requested precision, or JSON as an array of
//! flat objects carrying exact `f64` values.

use serde_json::{json, Map, Value};

/// One serializable cell.
pub enum Ser {
    Int(i64),
    Num(f64),
    Str(String),
    Bool(bool),
}

/// A header row plus data rows, in emission order.
pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Ser>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Ser>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Ser::Int(v) => v.to_string(),
                    Ser::Num(v) => format!("{v:.precision$e}"),
                    Ser::Str(v) => v.clone(),
                    Ser::Bool(v) => v.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.headers.iter().zip(row) {
                    let value = match cell {
                        Ser::Int(v) => json!(v),
                        Ser::Num(v) => json!(v),
                        Ser::Str(v) => json!(v),
                        Ser::Bool(v) => json!(v),
                    };
                    obj.insert((*name).to_string(), value);
                }
                Value::Object(obj)
            })
            .collect()
    }
}
