//! Reading and writing tables as CSV, TSV or JSON.
//!
//! - CSV: `,` delimiter, double-quote quoting where needed, header first.
//! - TSV: tab delimiter, no quoting; cells may not contain tabs or line breaks.
//! - JSON: `{"header": [...], "types": [...], "records": [[...], ...]}` with
//!   numbers as JSON numbers and empty cells as `null`. Types are stored, so
//!   JSON round trips never re-infer them.
//!
//! Output always uses `\n` line endings. CSV and TSV cells are trimmed on
//! input, the same as cells coming out of a cleanup script.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::table::{CellValue, ColumnType, Datatable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Tsv,
    Json,
}

impl TableFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<TableFormat> {
        path.extension()?.to_str()?.parse().ok()
    }
}

impl FromStr for TableFormat {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "tsv" | "tab" | "txt" => Ok(TableFormat::Tsv),
            "json" => Ok(TableFormat::Json),
            other => Err(IoError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Csv => "csv",
            TableFormat::Tsv => "tsv",
            TableFormat::Json => "json",
        })
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: not valid UTF-8", path.display())]
    Encoding { path: PathBuf },
    #[error("unknown table format {0:?} (expected csv, tsv or json)")]
    UnknownFormat(String),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("record {record}: cell {cell:?} cannot be written as TSV (contains a tab or line break)")]
    TsvCell { record: usize, cell: String },
}

fn malformed(line: usize, message: impl Into<String>) -> IoError {
    IoError::Malformed {
        line,
        message: message.into(),
    }
}

/// Parses table text. CSV and TSV column types are inferred.
pub fn parse_table(text: &str, format: TableFormat) -> Result<Datatable, IoError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    match format {
        TableFormat::Csv => parse_csv(text),
        TableFormat::Tsv => parse_tsv(text),
        TableFormat::Json => parse_json(text),
    }
}

fn build(header: Vec<String>, rows: Vec<(usize, Vec<String>)>) -> Result<Datatable, IoError> {
    for (line, row) in &rows {
        if row.len() != header.len() {
            return Err(malformed(
                *line,
                format!("row has {} fields, header has {}", row.len(), header.len()),
            ));
        }
    }
    let rows: Vec<Vec<String>> = rows.into_iter().map(|(_, r)| r).collect();
    Datatable::from_text_rows(header, &rows).map_err(|e| malformed(0, e.to_string()))
}

fn parse_csv(text: &str) -> Result<Datatable, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut header = None;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let cells: Vec<String> = record.iter().map(str::to_string).collect();
        if header.is_none() {
            header = Some(cells);
        } else {
            rows.push((line, cells));
        }
    }
    let header = header.ok_or_else(|| malformed(1, "missing header row"))?;
    build(header, rows)
}

fn parse_tsv(text: &str) -> Result<Datatable, IoError> {
    let mut lines = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .collect::<Vec<_>>();
    if lines.last().is_some_and(|(_, l)| l.is_empty()) {
        lines.pop();
    }
    let mut lines = lines.into_iter();
    let (_, header) = lines.next().ok_or_else(|| malformed(1, "missing header row"))?;
    let header = header.split('\t').map(str::to_string).collect();
    let rows = lines
        .map(|(n, l)| (n, l.split('\t').map(str::to_string).collect()))
        .collect();
    build(header, rows)
}

#[derive(Deserialize)]
struct JsonTable {
    header: Vec<String>,
    types: Vec<String>,
    records: Vec<Vec<Value>>,
}

fn parse_json(text: &str) -> Result<Datatable, IoError> {
    let doc: JsonTable =
        serde_json::from_str(text).map_err(|e| malformed(e.line(), e.to_string()))?;
    let types = doc
        .types
        .iter()
        .map(|t| match t.as_str() {
            "Number" => Ok(ColumnType::Number),
            "Text" => Ok(ColumnType::Text),
            other => Err(malformed(0, format!("unknown column type {other:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if types.len() != doc.header.len() {
        return Err(malformed(
            0,
            format!("{} types for {} fields", types.len(), doc.header.len()),
        ));
    }
    let mut records = Vec::with_capacity(doc.records.len());
    for (i, rec) in doc.records.into_iter().enumerate() {
        if rec.len() != doc.header.len() {
            return Err(malformed(
                0,
                format!("record {} has {} cells, header has {}", i + 1, rec.len(), doc.header.len()),
            ));
        }
        let cells = rec
            .into_iter()
            .map(|v| match v {
                Value::Null => Ok(CellValue::Empty),
                Value::String(s) => Ok(CellValue::text(s)),
                Value::Number(n) => n
                    .as_f64()
                    .and_then(CellValue::number)
                    .ok_or_else(|| malformed(0, format!("record {}: bad number {n}", i + 1))),
                other => Err(malformed(0, format!("record {}: unsupported cell {other}", i + 1))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        records.push(cells);
    }
    Ok(Datatable::new(doc.header, types, records))
}

fn json_cell(v: &CellValue) -> Value {
    match v {
        CellValue::Empty => Value::Null,
        CellValue::Text(s) => Value::String(s.clone()),
        CellValue::Number(n) => {
            if n.fract() == 0.0 && n.abs() < 9_007_199_254_740_992.0 {
                Value::from(*n as i64)
            } else {
                Value::from(*n)
            }
        }
    }
}

/// Serializes a table. Numbers are written without trailing zeros.
pub fn render_table(table: &Datatable, format: TableFormat) -> Result<String, IoError> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            let write_err = |e: csv::Error| malformed(0, e.to_string());
            w.write_record(table.header()).map_err(write_err)?;
            for r in table.records() {
                w.write_record(r.iter().map(CellValue::to_text)).map_err(write_err)?;
            }
            let bytes = w.into_inner().map_err(|e| malformed(0, e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv writer preserves UTF-8"))
        }
        TableFormat::Tsv => {
            let mut out = String::new();
            let bad = |s: &str| s.contains(['\t', '\n', '\r']);
            if let Some(h) = table.header().iter().find(|h| bad(h)) {
                return Err(IoError::TsvCell { record: 0, cell: h.clone() });
            }
            out.push_str(&table.header().join("\t"));
            out.push('\n');
            for (i, r) in table.records().iter().enumerate() {
                let cells: Vec<String> = r.iter().map(CellValue::to_text).collect();
                if let Some(c) = cells.iter().find(|c| bad(c)) {
                    return Err(IoError::TsvCell { record: i + 1, cell: c.clone() });
                }
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
            Ok(out)
        }
        TableFormat::Json => {
            let enc = |v: &Value| serde_json::to_string(v).expect("JSON values serialize");
            let header = enc(&Value::from(table.header().to_vec()));
            let types = enc(&Value::from(
                table
                    .column_types()
                    .iter()
                    .map(|t| t.as_str())
                    .collect::<Vec<_>>(),
            ));
            let records: Vec<String> = table
                .records()
                .iter()
                .map(|r| format!("    {}", enc(&Value::Array(r.iter().map(json_cell).collect()))))
                .collect();
            let body = if records.is_empty() {
                "[]".to_string()
            } else {
                format!("[\n{}\n  ]", records.join(",\n"))
            };
            Ok(format!(
                "{{\n  \"header\": {header},\n  \"types\": {types},\n  \"records\": {body}\n}}\n"
            ))
        }
    }
}

fn resolve(path: &Path, format: Option<TableFormat>) -> Result<TableFormat, IoError> {
    format
        .or_else(|| TableFormat::from_path(path))
        .ok_or_else(|| IoError::UnknownFormat(path.display().to_string()))
}

/// Reads a UTF-8 table file; the format defaults to the file extension.
pub fn load_table(path: &Path, format: Option<TableFormat>) -> Result<Datatable, IoError> {
    let format = resolve(path, format)?;
    let bytes = fs::read(path).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|_| IoError::Encoding {
        path: path.to_path_buf(),
    })?;
    parse_table(&text, format)
}

pub fn emit_table(table: &Datatable, path: &Path, format: Option<TableFormat>) -> Result<(), IoError> {
    let format = resolve(path, format)?;
    let text = render_table(table, format)?;
    fs::write(path, text).map_err(|source| IoError::File {
        path: path.to_path_buf(),
        source,
    })
}
