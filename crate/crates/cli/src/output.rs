//! Every artifact goes through [`Emitter`]: tables are rendered into memory
//! in canonical order and written in one piece, so identical inputs give
//! byte-identical files regardless of how the work was scheduled.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::Format;

/// Where a command's primary artifact goes.
pub enum Emitter {
    Stdout,
    File(PathBuf),
}

impl Emitter {
    pub fn new(out: Option<&Path>) -> Emitter {
        match out {
            Some(p) => Emitter::File(p.to_path_buf()),
            None => Emitter::Stdout,
        }
    }

    pub fn emit(&self, text: &str) -> Result<()> {
        match self {
            Emitter::Stdout => {
                let mut lock = std::io::stdout().lock();
                lock.write_all(text.as_bytes())?;
                lock.flush()?;
                Ok(())
            }
            Emitter::File(p) => write_file(p, text),
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// One table cell. Floats are rendered with six decimals in both formats so
/// that output does not depend on float-printing details.
#[derive(Clone, Debug)]
pub enum Cell {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.6}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn value(&self) -> serde_json::Value {
        match self {
            Cell::Str(s) => s.clone().into(),
            Cell::Int(i) => (*i).into(),
            Cell::Float(x) => format!("{x:.6}").parse::<f64>().map_or(serde_json::Value::Null, Into::into),
            Cell::Bool(b) => (*b).into(),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Str(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::Bool(b)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Cell {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(i: $t) -> Cell {
                Cell::Int(i as i64)
            }
        }
    )*};
}
int_cell!(u32, u64, usize);

/// In-memory table with a fixed header, rendered as CSV or as
/// `{"columns": [...], "rows": [[...]]}`.
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Table {
        Table { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        let bytes = w.into_inner().map_err(|e| anyhow::anyhow!("flushing table: {e}"))?;
        Ok(String::from_utf8(bytes)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Vec<serde_json::Value>> = self.rows.iter().map(|r| r.iter().map(Cell::value).collect()).collect();
        json(&serde_json::json!({ "columns": self.columns, "rows": rows }))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Subject ids as safe file stems.
pub fn file_stem(subject: &str) -> String {
    subject.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}
