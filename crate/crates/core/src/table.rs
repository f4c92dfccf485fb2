//! The typed first-normal-form datatable and its validation.
//!
//! A [`Datatable`] is a header, one declared [`ColumnType`] per field and a
//! list of records. Construction is permissive so that half-cleaned tables can
//! be inspected; [`Datatable::validate_1nf`] reports everything that keeps the
//! table from being a proper first-normal-form relation.

use std::fmt;

use thiserror::Error;

use crate::cleanse::composite::looks_composite;

/// Errors raised by table-shape operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("field not found: {0:?}")]
    FieldNotFound(String),
    #[error("row {row} has {found} cells, expected {expected}")]
    Shape {
        row: usize,
        found: usize,
        expected: usize,
    },
}

/// Declared type of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColumnType {
    Number,
    Text,
}

impl ColumnType {
    pub fn as_str(self) -> &'static str {
        match self {
            ColumnType::Number => "Number",
            ColumnType::Text => "Text",
        }
    }
}

impl fmt::Display for ColumnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single cell: a finite number, a piece of text, or nothing.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum CellValue {
    Number(f64),
    Text(String),
    #[default]
    Empty,
}

impl CellValue {
    /// Text cell; the empty string becomes [`CellValue::Empty`].
    pub fn text(s: impl Into<String>) -> Self {
        let s = s.into();
        if s.is_empty() {
            CellValue::Empty
        } else {
            CellValue::Text(s)
        }
    }

    /// Number cell. Non-finite input is rejected.
    pub fn number(n: f64) -> Option<Self> {
        n.is_finite().then_some(CellValue::Number(n))
    }

    /// Reads a raw cell the way a spreadsheet import would: decimal numbers
    /// become numbers, blank text becomes empty, everything else is text.
    pub fn infer(raw: &str) -> Self {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            CellValue::Empty
        } else if let Some(n) = parse_number(trimmed) {
            CellValue::Number(n)
        } else {
            CellValue::Text(trimmed.to_string())
        }
    }

    /// Reads a raw cell under a declared column type.
    pub fn parse_as(raw: &str, ty: ColumnType) -> Self {
        match ty {
            ColumnType::Number => CellValue::infer(raw),
            ColumnType::Text => CellValue::text(raw.trim()),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CellValue::Empty)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            CellValue::Number(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            CellValue::Text(s) => Some(s),
            _ => None,
        }
    }

    /// Text rendering used for concatenation and file output: integral
    /// numbers print without a decimal point, empty cells as `""`.
    pub fn to_text(&self) -> String {
        match self {
            CellValue::Number(n) => format_number(*n),
            CellValue::Text(s) => s.clone(),
            CellValue::Empty => String::new(),
        }
    }
}

impl fmt::Display for CellValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<f64> for CellValue {
    fn from(n: f64) -> Self {
        CellValue::Number(n)
    }
}

impl From<i32> for CellValue {
    fn from(n: i32) -> Self {
        CellValue::Number(f64::from(n))
    }
}

impl From<&str> for CellValue {
    fn from(s: &str) -> Self {
        CellValue::text(s)
    }
}

impl From<String> for CellValue {
    fn from(s: String) -> Self {
        CellValue::text(s)
    }
}

/// Parses a decimal number with `.` as the separator: an optional leading
/// `-`, digits, and an optional fraction. No exponents, no grouping, no
/// surrounding whitespace.
pub fn parse_number(s: &str) -> Option<f64> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if let Some(f) = frac {
        if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
    }
    s.parse::<f64>().ok().filter(|n| n.is_finite())
}

/// Shortest decimal text for a number; integral values print without a
/// decimal point and negative zero prints as `0`.
pub fn format_number(n: f64) -> String {
    if n == 0.0 {
        return "0".to_string();
    }
    format!("{n}")
}

/// Infers column types from raw text rows: a column is [`ColumnType::Number`]
/// iff every non-blank cell parses as a decimal number.
pub fn infer_column_types<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Vec<ColumnType>, TableError> {
    let Some(first) = rows.first() else {
        return Ok(Vec::new());
    };
    let width = first.len();
    let mut numeric = vec![true; width];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(TableError::Shape {
                row: i + 1,
                found: row.len(),
                expected: width,
            });
        }
        for (col, cell) in row.iter().enumerate() {
            let cell = cell.as_ref().trim();
            if !cell.is_empty() && parse_number(cell).is_none() {
                numeric[col] = false;
            }
        }
    }
    Ok(numeric
        .into_iter()
        .map(|n| if n { ColumnType::Number } else { ColumnType::Text })
        .collect())
}

fn without<T: Clone>(v: &[T], col: usize) -> Vec<T> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| *i != col)
        .map(|(_, x)| x.clone())
        .collect()
}

/// A header + typed records. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Datatable {
    header: Vec<String>,
    column_types: Vec<ColumnType>,
    records: Vec<Vec<CellValue>>,
}

impl Datatable {
    /// Builds a table as given. Nothing is checked here; call
    /// [`validate_1nf`](Self::validate_1nf) to find out what is wrong with it.
    pub fn new(
        header: Vec<String>,
        column_types: Vec<ColumnType>,
        records: Vec<Vec<CellValue>>,
    ) -> Self {
        Datatable {
            header,
            column_types,
            records,
        }
    }

    /// Builds a table from raw text cells, inferring the column types.
    pub fn from_text_rows<S: AsRef<str>>(
        header: Vec<String>,
        rows: &[Vec<S>],
    ) -> Result<Self, TableError> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != header.len() {
                return Err(TableError::Shape {
                    row: i + 1,
                    found: row.len(),
                    expected: header.len(),
                });
            }
        }
        let column_types = if rows.is_empty() {
            vec![ColumnType::Text; header.len()]
        } else {
            infer_column_types(rows)?
        };
        let records = rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&column_types)
                    .map(|(cell, ty)| CellValue::parse_as(cell.as_ref(), *ty))
                    .collect()
            })
            .collect();
        Ok(Datatable {
            header,
            column_types,
            records,
        })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn column_types(&self) -> &[ColumnType] {
        &self.column_types
    }

    pub fn records(&self) -> &[Vec<CellValue>] {
        &self.records
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    pub fn field_count(&self) -> usize {
        self.header.len()
    }

    /// Zero-based position of a field. An exact match wins; otherwise a
    /// unique case-insensitive match is accepted.
    pub fn field_index(&self, name: &str) -> Result<usize, TableError> {
        if let Some(i) = self.header.iter().position(|h| h == name) {
            return Ok(i);
        }
        let mut hits = self
            .header
            .iter()
            .enumerate()
            .filter(|(_, h)| h.eq_ignore_ascii_case(name));
        match (hits.next(), hits.next()) {
            (Some((i, _)), None) => Ok(i),
            _ => Err(TableError::FieldNotFound(name.to_string())),
        }
    }

    /// The values of one field in record order.
    pub fn column_vector(&self, name: &str) -> Result<Vec<CellValue>, TableError> {
        let col = self.field_index(name)?;
        Ok(self
            .records
            .iter()
            .map(|r| r.get(col).cloned().unwrap_or_default())
            .collect())
    }

    /// A copy of the table without one field.
    pub fn drop_column(&self, name: &str) -> Result<Datatable, TableError> {
        let col = self.field_index(name)?;
        Ok(Datatable {
            header: without(&self.header, col),
            column_types: without(&self.column_types, col),
            records: self.records.iter().map(|r| without(r, col)).collect(),
        })
    }

    /// Checks rectangularity, field names, column typing and atomicity.
    pub fn validate_1nf(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut warnings = Vec::new();
        let width = self.header.len();

        for (col, name) in self.header.iter().enumerate() {
            if name.trim().is_empty() {
                violations.push(Violation::new(0, Some(col + 1), "empty field name"));
            } else if self.header[..col].contains(name) {
                violations.push(Violation::new(
                    0,
                    Some(col + 1),
                    format!("duplicate field name {name:?}"),
                ));
            }
        }
        if self.column_types.len() != width {
            violations.push(Violation::new(
                0,
                None,
                format!(
                    "{} column types declared for {} fields",
                    self.column_types.len(),
                    width
                ),
            ));
        }

        for (i, record) in self.records.iter().enumerate() {
            let row = i + 1;
            if record.len() != width {
                violations.push(Violation::new(
                    row,
                    None,
                    format!("record has {} cells, header has {}", record.len(), width),
                ));
            }
            for (col, cell) in record.iter().enumerate() {
                let ty = self.column_types.get(col).copied();
                match (cell, ty) {
                    (CellValue::Text(s), _) if looks_composite(s) => {
                        violations.push(Violation::new(
                            row,
                            Some(col + 1),
                            format!("non-atomic composite value {s:?}"),
                        ));
                    }
                    (CellValue::Number(n), _) if !n.is_finite() => {
                        violations.push(Violation::new(row, Some(col + 1), "non-finite number"));
                    }
                    (CellValue::Text(s), Some(ColumnType::Number)) => {
                        violations.push(Violation::new(
                            row,
                            Some(col + 1),
                            format!("text {s:?} in a Number column"),
                        ));
                    }
                    (CellValue::Number(n), Some(ColumnType::Text)) => {
                        violations.push(Violation::new(
                            row,
                            Some(col + 1),
                            format!("number {} in a Text column", format_number(*n)),
                        ));
                    }
                    (CellValue::Empty, Some(ColumnType::Number)) => {
                        warnings.push(Violation::new(
                            row,
                            Some(col + 1),
                            "missing value in a Number column",
                        ));
                    }
                    _ => {}
                }
            }
        }

        ValidationReport {
            is_1nf: violations.is_empty(),
            violations,
            warnings,
            shape: (self.records.len(), width),
        }
    }
}

/// One problem found by [`Datatable::validate_1nf`].
///
/// `row` is 0 for the header and 1-based for records; `column` is 1-based
/// and absent for whole-row problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub row: usize,
    pub column: Option<usize>,
    pub reason: String,
}

impl Violation {
    fn new(row: usize, column: Option<usize>, reason: impl Into<String>) -> Self {
        Violation {
            row,
            column,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = if self.row == 0 {
            "header".to_string()
        } else {
            format!("record {}", self.row)
        };
        match self.column {
            Some(c) => write!(f, "{row}, field {c}: {}", self.reason),
            None => write!(f, "{row}: {}", self.reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_1nf: bool,
    pub violations: Vec<Violation>,
    /// Findings that do not break first normal form, such as missing numbers.
    pub warnings: Vec<Violation>,
    /// `(record_count, field_count)`.
    pub shape: (usize, usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn raw(rows: &[&[&str]]) -> Vec<Vec<String>> {
        rows.iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn beaufort_table_is_1nf() {
        let report = fixtures::beaufort_table().validate_1nf();
        assert!(report.is_1nf, "{:?}", report.violations);
        assert_eq!(report.shape, (13, 4));
        assert!(report.warnings.is_empty());
    }

    #[test]
    fn empty_table_is_vacuously_valid() {
        let t = Datatable::new(
            vec!["Force".into(), "Speed".into(), "Description".into(), "Specifications".into()],
            vec![ColumnType::Number, ColumnType::Number, ColumnType::Text, ColumnType::Text],
            vec![],
        );
        let report = t.validate_1nf();
        assert!(report.is_1nf);
        assert_eq!(report.shape, (0, 4));
    }

    #[test]
    fn composite_cell_is_flagged() {
        let t = Datatable::new(
            vec!["Force".into(), "Description".into()],
            vec![ColumnType::Number, ColumnType::Text],
            vec![
                vec![CellValue::from(7), "near gale".into()],
                vec!["8 (55-65)".into(), "gale".into()],
            ],
        );
        let report = t.validate_1nf();
        assert!(!report.is_1nf);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!((v.row, v.column), (2, Some(1)));
        assert!(v.reason.contains("composite"));
    }

    #[test]
    fn ragged_and_bad_header_are_violations() {
        let t = Datatable::new(
            vec!["a".into(), "a".into(), "".into()],
            vec![ColumnType::Text; 3],
            vec![vec!["x".into()]],
        );
        let report = t.validate_1nf();
        assert!(!report.is_1nf);
        assert_eq!(report.violations.len(), 3);
        assert_eq!(report.violations[2].row, 1);
        assert_eq!(report.violations[2].column, None);
    }

    #[test]
    fn empty_number_cell_only_warns() {
        let t = Datatable::from_text_rows(vec!["n".into()], &raw(&[&[""], &["3"]])).unwrap();
        let report = t.validate_1nf();
        assert!(report.is_1nf);
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn infers_beaufort_types() {
        let rows = raw(&[
            &["0", "0", "calm", "Smoke rises vertically."],
            &["12", "105", "hurricane", "Devastation."],
        ]);
        assert_eq!(
            infer_column_types(&rows).unwrap(),
            vec![ColumnType::Number, ColumnType::Number, ColumnType::Text, ColumnType::Text]
        );
    }

    #[test]
    fn one_text_cell_poisons_column() {
        let rows = raw(&[&["1"], &["2"], &["x"]]);
        assert_eq!(infer_column_types(&rows).unwrap(), vec![ColumnType::Text]);
    }

    #[test]
    fn blank_cells_ignored_by_inference() {
        let rows = raw(&[&[""], &["3"]]);
        assert_eq!(infer_column_types(&rows).unwrap(), vec![ColumnType::Number]);
    }

    #[test]
    fn ragged_rows_fail_inference() {
        let rows = raw(&[&["1", "2"], &["3"]]);
        assert_eq!(
            infer_column_types(&rows),
            Err(TableError::Shape { row: 2, found: 1, expected: 2 })
        );
    }

    #[test]
    fn drop_column_keeps_order() {
        let t = Datatable::from_text_rows(
            vec!["force".into(), "lo".into(), "hi".into(), "description".into(), "specification".into()],
            &raw(&[&["8", "55", "65", "gale", "Twigs break off trees."]]),
        )
        .unwrap();
        let dropped = t.drop_column("hi").unwrap();
        assert_eq!(dropped.header(), ["force", "lo", "description", "specification"]);
        assert_eq!(dropped.records()[0][2], CellValue::text("gale"));
        let report = dropped.validate_1nf();
        assert!(report.is_1nf);
        assert_eq!(report.shape, (1, 4));
        assert_eq!(
            t.drop_column("foo"),
            Err(TableError::FieldNotFound("foo".into()))
        );
    }

    #[test]
    fn beaufort_vectors() {
        let t = fixtures::beaufort_table();
        let speed: Vec<_> = t
            .column_vector("Speed")
            .unwrap()
            .iter()
            .map(|c| c.as_number().unwrap())
            .collect();
        assert_eq!(
            speed,
            [0., 2., 7., 13., 19., 27., 36., 45., 55., 66., 78., 91., 105.]
        );
        let force: Vec<_> = t
            .column_vector("Force")
            .unwrap()
            .iter()
            .map(|c| c.as_number().unwrap())
            .collect();
        assert_eq!(force, (0..13).map(f64::from).collect::<Vec<_>>());
        let empty = Datatable::new(vec!["Speed".into()], vec![ColumnType::Number], vec![]);
        assert!(empty.column_vector("Speed").unwrap().is_empty());
    }

    #[test]
    fn number_grammar() {
        assert_eq!(parse_number("36"), Some(36.0));
        assert_eq!(parse_number("-0.5"), Some(-0.5));
        for bad in ["", "1,5", "1e3", " 1", "1.", ".5", "inf", "NaN", "+1"] {
            assert_eq!(parse_number(bad), None, "{bad:?}");
        }
        assert_eq!(format_number(6.0), "6");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(104.9), "104.9");
    }
}
