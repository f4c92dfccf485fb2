//! Whole-record lookups over a force table, the same compositions a sheet
//! would build from `INDEX` and `MATCH`.

use std::fmt;
use std::str::FromStr;

use crate::lookup::{choose_algorithm, index, match_with, LookupError, MatchType, QueryKind};
use crate::style::SentenceRecord;
use crate::table::{CellValue, Datatable, TableError};

/// Which field a lookup searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LookupKey {
    Force,
    /// A measured speed; finds the band containing it.
    Speed,
    Description,
}

impl LookupKey {
    pub fn query_kind(self) -> QueryKind {
        match self {
            LookupKey::Speed => QueryKind::Banded,
            LookupKey::Force | LookupKey::Description => QueryKind::Exact,
        }
    }
}

impl FromStr for LookupKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "force" => Ok(LookupKey::Force),
            "speed" => Ok(LookupKey::Speed),
            "description" => Ok(LookupKey::Description),
            _ => Err(format!("unknown lookup key {s:?} (expected force, speed or description)")),
        }
    }
}

impl fmt::Display for LookupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LookupKey::Force => "force",
            LookupKey::Speed => "speed",
            LookupKey::Description => "description",
        })
    }
}

/// Column positions of the four fields a force table needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForceFields {
    pub force: usize,
    pub speed: usize,
    pub description: usize,
    pub specification: usize,
}

impl ForceFields {
    /// Finds `Force`, `Speed`, `Description` and `Specifications` (or
    /// `Specification`), ignoring case.
    pub fn resolve(table: &Datatable) -> Result<ForceFields, TableError> {
        Ok(ForceFields {
            force: table.field_index("Force")?,
            speed: table.field_index("Speed")?,
            description: table.field_index("Description")?,
            specification: table
                .field_index("Specifications")
                .or_else(|_| table.field_index("Specification"))?,
        })
    }

    pub fn column(self, key: LookupKey) -> usize {
        match key {
            LookupKey::Force => self.force,
            LookupKey::Speed => self.speed,
            LookupKey::Description => self.description,
        }
    }

    pub fn sentence_record(self, record: &[CellValue]) -> SentenceRecord {
        SentenceRecord {
            force: record[self.force].clone(),
            speed: record[self.speed].clone(),
            description: record[self.description].clone(),
            specification: record[self.specification].clone(),
        }
    }
}

/// A found record and how it was found.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordMatch {
    pub match_type: MatchType,
    /// 1-based record position.
    pub position: usize,
    pub record: Vec<CellValue>,
}

fn column(table: &Datatable, col: usize) -> Vec<CellValue> {
    table.records().iter().map(|r| r[col].clone()).collect()
}

/// Finds the record for `value`. Force and description lookups are exact;
/// speed lookups find the band by binary search over the ascending speeds.
/// Every field of the result is read with [`index`], so the record is what
/// `INDEX(field, MATCH(value, key, type))` gives column by column.
pub fn lookup_record(
    table: &Datatable,
    fields: ForceFields,
    key: LookupKey,
    value: &CellValue,
) -> Result<RecordMatch, LookupError> {
    let keys = column(table, fields.column(key));
    let match_type = choose_algorithm(&keys, key.query_kind())?;
    let position = match_with(match_type, value, &keys)?;
    let record = (0..table.field_count())
        .map(|c| index(&column(table, c), position as f64))
        .collect::<Result<_, _>>()?;
    Ok(RecordMatch {
        match_type,
        position,
        record,
    })
}

/// The record at a 1-based position.
pub fn record_at(table: &Datatable, position: usize) -> Result<Vec<CellValue>, LookupError> {
    (0..table.field_count())
        .map(|c| index(&column(table, c), position as f64))
        .collect()
}
