//! A small worksheet and an interpreter for the formula subset
//! `INDEX`, `MATCH`, `LEFT`, `RIGHT`, `LEN`, `UPPER`, `&`, `+` and `-`.
//!
//! Formulas are queries: they are parsed and evaluated on demand against the
//! current cells. Nothing is stored in cells except values.

mod eval;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lookup::LookupError;
use crate::table::{CellValue, Datatable};

pub use eval::evaluate;
pub use parse::{parse_formula, Expr, FormulaError, Function};

/// Columns `A` through `ZZ`.
pub const MAX_COLUMNS: u16 = 26 + 26 * 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefError {
    #[error("invalid cell reference {0:?}")]
    Invalid(String),
    #[error("range {0} is neither a single row nor a single column")]
    NotAVector(String),
}

/// Spreadsheet letters for a 0-based column index: 0 is `A`, 26 is `AA`.
pub fn column_label(col: usize) -> String {
    if col < 26 {
        char::from(b'A' + col as u8).to_string()
    } else {
        let hi = col / 26 - 1;
        let lo = col % 26;
        format!("{}{}", char::from(b'A' + hi as u8), char::from(b'A' + lo as u8))
    }
}

fn parse_column(letters: &str) -> Option<u16> {
    let b = letters.as_bytes();
    let val = |c: u8| u16::from(c.to_ascii_uppercase() - b'A');
    match b {
        [a] if a.is_ascii_alphabetic() => Some(val(*a)),
        [a, z] if a.is_ascii_alphabetic() && z.is_ascii_alphabetic() => {
            Some((val(*a) + 1) * 26 + val(*z))
        }
        _ => None,
    }
}

/// A single-cell A1 reference. Ordered row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellRef {
    row: u32,
    col: u16,
}

impl CellRef {
    /// `col` is 0-based, `row` 1-based.
    pub fn new(col: u16, row: u32) -> Option<CellRef> {
        (col < MAX_COLUMNS && row >= 1).then_some(CellRef { row, col })
    }

    pub fn col(self) -> u16 {
        self.col
    }

    pub fn row(self) -> u32 {
        self.row
    }

    fn offset(self, dc: usize, dr: usize) -> Option<CellRef> {
        let col = u16::try_from(usize::from(self.col) + dc).ok()?;
        let row = u32::try_from(self.row as usize + dr).ok()?;
        CellRef::new(col, row)
    }
}

impl FromStr for CellRef {
    type Err = RefError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let split = s.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(s.len());
        let (letters, digits) = s.split_at(split);
        let col = parse_column(letters);
        let row = (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
            .then(|| digits.parse::<u32>().ok())
            .flatten();
        match (col, row) {
            (Some(c), Some(r)) => CellRef::new(c, r).ok_or_else(|| RefError::Invalid(s.into())),
            _ => Err(RefError::Invalid(s.into())),
        }
    }
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", column_label(usize::from(self.col)), self.row)
    }
}

/// A one-dimensional range, normalized so `start <= end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RangeRef {
    start: CellRef,
    end: CellRef,
}

impl RangeRef {
    pub fn new(a: CellRef, b: CellRef) -> Result<RangeRef, RefError> {
        if a.col != b.col && a.row != b.row {
            return Err(RefError::NotAVector(format!("{a}:{b}")));
        }
        Ok(RangeRef {
            start: a.min(b),
            end: a.max(b),
        })
    }

    pub fn start(&self) -> CellRef {
        self.start
    }

    pub fn end(&self) -> CellRef {
        self.end
    }

    pub fn len(&self) -> usize {
        if self.start.col == self.end.col {
            (self.end.row - self.start.row) as usize + 1
        } else {
            usize::from(self.end.col - self.start.col) + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        let vertical = self.start.col == self.end.col;
        (0..self.len()).map(move |i| {
            if vertical {
                CellRef { row: self.start.row + i as u32, col: self.start.col }
            } else {
                CellRef { row: self.start.row, col: self.start.col + i as u16 }
            }
        })
    }
}

impl FromStr for RangeRef {
    type Err = RefError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(':').ok_or_else(|| RefError::Invalid(s.into()))?;
        RangeRef::new(a.parse()?, b.parse()?)
    }
}

impl fmt::Display for RangeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

/// Sparse grid of values. Unset cells read as empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sheet {
    cells: BTreeMap<CellRef, CellValue>,
}

impl Sheet {
    pub fn new() -> Sheet {
        Sheet::default()
    }

    pub fn get(&self, at: CellRef) -> &CellValue {
        static EMPTY: CellValue = CellValue::Empty;
        self.cells.get(&at).unwrap_or(&EMPTY)
    }

    /// Writes a value, replacing whatever was there.
    pub fn set_cell(&mut self, at: CellRef, value: CellValue) {
        if value.is_empty() {
            self.cells.remove(&at);
        } else {
            self.cells.insert(at, value);
        }
    }

    pub fn range_values(&self, range: &RangeRef) -> Vec<CellValue> {
        range.cells().map(|c| self.get(c).clone()).collect()
    }

    /// Writes `table` with its top-left corner at `anchor`: the header row
    /// first if `header` is set, records below, columns in table order.
    /// Fails with `#REF!` if any target cell is already occupied.
    pub fn bind_table(
        &mut self,
        table: &Datatable,
        anchor: CellRef,
        header: bool,
    ) -> Result<(), LookupError> {
        let mut writes = Vec::new();
        let skip = usize::from(header);
        if header {
            for (c, name) in table.header().iter().enumerate() {
                writes.push((c, 0, CellValue::text(name.as_str())));
            }
        }
        for (r, record) in table.records().iter().enumerate() {
            for (c, v) in record.iter().enumerate() {
                writes.push((c, r + skip, v.clone()));
            }
        }
        let mut placed = Vec::with_capacity(writes.len());
        for (c, r, v) in writes {
            let at = anchor.offset(c, r).ok_or_else(|| {
                LookupError::reference(format!("table does not fit at {anchor}"))
            })?;
            if !self.get(at).is_empty() {
                return Err(LookupError::reference(format!("{at} is already occupied")));
            }
            placed.push((at, v));
        }
        for (at, v) in placed {
            self.set_cell(at, v);
        }
        Ok(())
    }

    /// Parses and evaluates a formula against this sheet.
    pub fn eval(&self, formula: &str) -> Result<Result<CellValue, LookupError>, FormulaError> {
        Ok(evaluate(&parse_formula(formula)?, self))
    }
}
