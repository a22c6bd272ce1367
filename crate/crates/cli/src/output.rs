//! Aligned tables and JSON lines.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Jsonl,
}

/// One kind of result row, e.g. homology groups or validation findings.
pub struct Table {
    pub record: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(record: &'static str, columns: &[&'static str]) -> Self {
        Table {
            record,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_table(t: &Table, out: &mut String) {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.len()).collect();
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |items: Vec<&str>, out: &mut String| {
        let last = items.len() - 1;
        for (i, (s, w)) in items.iter().zip(&widths).enumerate() {
            out.push_str(s);
            if i < last {
                out.push_str(&" ".repeat(w - s.chars().count() + 2));
            }
        }
        out.push('\n');
    };
    line(t.columns.clone(), out);
    for row in &cells {
        line(row.iter().map(String::as_str).collect(), out);
    }
}

/// Tables are separated by a blank line; JSON lines carry a `record` field
/// and keys in sorted order, so output is byte-stable.
pub fn render(tables: &[Table], format: Format) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        match format {
            Format::Table => {
                if i > 0 {
                    out.push('\n');
                }
                render_table(t, &mut out);
            }
            Format::Jsonl => {
                for row in &t.rows {
                    let mut obj = Map::new();
                    obj.insert("record".into(), Value::from(t.record));
                    for (k, v) in t.columns.iter().zip(row) {
                        obj.insert((*k).into(), v.clone());
                    }
                    out.push_str(&Value::Object(obj).to_string());
                    out.push('\n');
                }
            }
        }
    }
    out
}
