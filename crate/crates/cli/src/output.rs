use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    /// CSV rendering: 17 significant digits for floats, empty for missing.
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// Tabular command output plus a free-form summary.
#[derive(Debug, Clone)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        let mut meta = Map::new();
        meta.insert("command".into(), command.into());
        Report {
            columns,
            rows: Vec::new(),
            meta,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.insert(key.into(), value.into());
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Vec<u8> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| ((*c).to_owned(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(self.meta.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut bytes = serde_json::to_vec_pretty(&Value::Object(doc)).expect("serialisable");
        bytes.push(b'\n');
        bytes
    }

    fn summary_json(&self) -> Vec<u8> {
        let mut bytes =
            serde_json::to_vec_pretty(&Value::Object(self.meta.clone())).expect("serialisable");
        bytes.push(b'\n');
        bytes
    }

    /// Write in the requested format. In CSV mode the summary goes to stderr
    /// and, when writing to a file, to `<out>.summary.json` as well.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> CliResult<()> {
        let body = match format {
            Format::Csv => self.to_csv()?,
            Format::Json => self.to_json(),
        };
        match out {
            Some(path) => {
                write_file(path, &body)?;
                if format == Format::Csv {
                    let mut side = path.as_os_str().to_owned();
                    side.push(".summary.json");
                    write_file(Path::new(&side), &self.summary_json())?;
                }
            }
            None => std::io::stdout().lock().write_all(&body)?,
        }
        if format == Format::Csv {
            std::io::stderr().lock().write_all(&self.summary_json())?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
