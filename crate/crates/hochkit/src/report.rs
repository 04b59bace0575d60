//! Rendering of job results. All three formats are byte-deterministic.

use serde_json::{Map, Value};

use crate::jobspec::Format;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub fields: Vec<(String, String)>,
    pub table: Option<Table>,
    /// `false` when a mathematical check failed.
    pub ok: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), fields: Vec::new(), table: None, ok: true }
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn table(&mut self, columns: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.table = Some(Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows });
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        if !self.fields.is_empty() {
            let line: Vec<String> = self.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        if let Some(t) = &self.table {
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for row in &t.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                    .collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            out.push_str(&line(&t.columns));
            for row in &t.rows {
                out.push_str(&line(row));
            }
        }
        out
    }

    /// The table if there is one, otherwise the fields as a single row.
    fn csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, rec: &[String]| w.write_record(rec).expect("writing to memory");
        match &self.table {
            Some(t) => {
                write(&mut w, &t.columns);
                for row in &t.rows {
                    write(&mut w, row);
                }
            }
            None => {
                write(&mut w, &self.fields.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>());
                write(&mut w, &self.fields.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
            }
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }

    fn json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::String(self.command.clone()));
        obj.insert("ok".into(), Value::Bool(self.ok));
        for (k, v) in &self.fields {
            obj.insert(k.clone(), Value::String(v.clone()));
        }
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|row| {
                    let m: Map<String, Value> =
                        t.columns.iter().cloned().zip(row.iter().map(|c| Value::String(c.clone()))).collect();
                    Value::Object(m)
                })
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
        }
        serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize") + "\n"
    }
}
