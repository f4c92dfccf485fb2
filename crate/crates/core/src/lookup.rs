//! Spreadsheet search semantics: `MATCH` by linear or binary search, `INDEX`,
//! their composition, and drop-down selection.
//!
//! Positions are 1-based everywhere, like the cells they stand for. Failures
//! are [`LookupError`]s whose kinds mirror the spreadsheet error values
//! `#N/A`, `#VALUE!` and `#REF!`.

use std::fmt;

use thiserror::Error;

use crate::table::{format_number, CellValue};

/// How `MATCH` searches its vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MatchType {
    /// `match_type = 0`: first equal element, linear scan.
    Exact,
    /// `match_type = 1`, the default: largest element `<=` the lookup value
    /// in an ascending vector, binary search.
    #[default]
    AscendingLargestLeq,
}

impl MatchType {
    /// The spreadsheet `match_type` argument.
    pub fn code(self) -> i32 {
        match self {
            MatchType::Exact => 0,
            MatchType::AscendingLargestLeq => 1,
        }
    }

    pub fn from_code(code: f64) -> Result<MatchType, LookupError> {
        if code == 0.0 {
            Ok(MatchType::Exact)
        } else if code == 1.0 {
            Ok(MatchType::AscendingLargestLeq)
        } else {
            Err(LookupError::value(format!(
                "unsupported match_type {}",
                format_number(code)
            )))
        }
    }
}

/// Drop-down semantics: the linked cell receives either the position of the
/// chosen item or the item itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionMode {
    Positional,
    ByValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// No match.
    NA,
    /// Wrong type or a violated precondition.
    Value,
    /// Position or range out of bounds.
    Ref,
}

impl ErrorKind {
    pub fn spreadsheet_code(self) -> &'static str {
        match self {
            ErrorKind::NA => "#N/A",
            ErrorKind::Value => "#VALUE!",
            ErrorKind::Ref => "#REF!",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.spreadsheet_code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {detail}")]
pub struct LookupError {
    pub kind: ErrorKind,
    /// The offending input, for diagnostics.
    pub detail: String,
}

impl LookupError {
    pub fn na(detail: impl Into<String>) -> Self {
        LookupError { kind: ErrorKind::NA, detail: detail.into() }
    }

    pub fn value(detail: impl Into<String>) -> Self {
        LookupError { kind: ErrorKind::Value, detail: detail.into() }
    }

    pub fn reference(detail: impl Into<String>) -> Self {
        LookupError { kind: ErrorKind::Ref, detail: detail.into() }
    }
}

fn same_value(a: &CellValue, b: &CellValue) -> bool {
    match (a, b) {
        (CellValue::Number(x), CellValue::Number(y)) => x == y,
        (CellValue::Text(x), CellValue::Text(y)) => {
            x == y || x.to_lowercase() == y.to_lowercase()
        }
        _ => false,
    }
}

/// Linear search: the position of the first element equal to `value`.
/// Numbers compare numerically, text case-insensitively; empty cells never
/// match.
pub fn match_exact(value: &CellValue, vector: &[CellValue]) -> Result<usize, LookupError> {
    if value.is_empty() {
        return Err(LookupError::na("lookup value is empty"));
    }
    vector
        .iter()
        .position(|v| same_value(value, v))
        .map(|i| i + 1)
        .ok_or_else(|| LookupError::na(format!("{} not found", value.to_text())))
}

/// Checks that every cell is a number and the sequence never decreases.
pub fn ascending_numbers(vector: &[CellValue]) -> Result<Vec<f64>, LookupError> {
    let mut out = Vec::with_capacity(vector.len());
    for (i, cell) in vector.iter().enumerate() {
        let n = cell.as_number().ok_or_else(|| {
            LookupError::value(format!(
                "position {} holds {:?}, ascending search needs numbers",
                i + 1,
                cell.to_text()
            ))
        })?;
        if let Some(&prev) = out.last() {
            if n < prev {
                return Err(LookupError::value(format!(
                    "vector is not ascending at position {} ({} after {})",
                    i + 1,
                    format_number(n),
                    format_number(prev)
                )));
            }
        }
        out.push(n);
    }
    Ok(out)
}

/// Binary search over an ascending slice: the number of elements `<= x`,
/// together with the number of probes it took.
///
/// Equal elements are kept on the left of the cut, so with duplicates the
/// result points at the last of them.
pub fn count_leq(sorted: &[f64], x: f64) -> (usize, usize) {
    let (mut lo, mut hi) = (0, sorted.len());
    let mut probes = 0;
    // invariant: sorted[..lo] <= x < sorted[hi..]
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        probes += 1;
        if sorted[mid] <= x {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    (lo, probes)
}

/// Binary search on an ascending vector: the position of the largest element
/// `<= value`, the last one if several are equal.
///
/// Sortedness is checked first; an unsorted or non-numeric vector is a
/// `#VALUE!` error rather than a silently wrong position.
pub fn match_ascending(value: &CellValue, vector: &[CellValue]) -> Result<usize, LookupError> {
    let x = value
        .as_number()
        .ok_or_else(|| LookupError::value(format!("{:?} is not a number", value.to_text())))?;
    let sorted = ascending_numbers(vector)?;
    match count_leq(&sorted, x).0 {
        0 => Err(LookupError::na(format!(
            "{} is below the first element",
            format_number(x)
        ))),
        n => Ok(n),
    }
}

/// `MATCH(value, vector, match_type)`.
pub fn match_with(
    mtype: MatchType,
    value: &CellValue,
    vector: &[CellValue],
) -> Result<usize, LookupError> {
    match mtype {
        MatchType::Exact => match_exact(value, vector),
        MatchType::AscendingLargestLeq => match_ascending(value, vector),
    }
}

/// `INDEX(vector, position)` with a 1-based position.
pub fn index(vector: &[CellValue], position: f64) -> Result<CellValue, LookupError> {
    if position.fract() != 0.0 || !position.is_finite() {
        return Err(LookupError::value(format!(
            "position {} is not an integer",
            format_number(position)
        )));
    }
    if position < 1.0 || position > vector.len() as f64 {
        return Err(LookupError::reference(format!(
            "position {} outside 1..={}",
            format_number(position),
            vector.len()
        )));
    }
    Ok(vector[position as usize - 1].clone())
}

/// `INDEX(result, MATCH(lookup, search, mtype))`.
pub fn index_match(
    lookup: &CellValue,
    search: &[CellValue],
    result: &[CellValue],
    mtype: MatchType,
) -> Result<CellValue, LookupError> {
    if search.len() != result.len() {
        return Err(LookupError::reference(format!(
            "search vector has {} cells, result vector {}",
            search.len(),
            result.len()
        )));
    }
    let pos = match_with(mtype, lookup, search)?;
    index(result, pos as f64)
}

/// What a lookup asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    /// The value is one of the vector's items.
    Exact,
    /// The value falls somewhere inside a band of the vector.
    Banded,
}

/// Picks the search for a query: exact membership is a linear search,
/// band lookups need binary search over ascending numbers.
pub fn choose_algorithm(vector: &[CellValue], query: QueryKind) -> Result<MatchType, LookupError> {
    match query {
        QueryKind::Exact => Ok(MatchType::Exact),
        QueryKind::Banded => {
            ascending_numbers(vector)?;
            Ok(MatchType::AscendingLargestLeq)
        }
    }
}

/// What a drop-down hands to its linked cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    Position(usize),
    Item(CellValue),
}

impl Selection {
    pub fn to_cell(&self) -> CellValue {
        match self {
            Selection::Position(p) => CellValue::Number(*p as f64),
            Selection::Item(v) => v.clone(),
        }
    }
}

/// Selects the `choice`-th item (1-based).
pub fn select(
    items: &[CellValue],
    mode: SelectionMode,
    choice: usize,
) -> Result<Selection, LookupError> {
    if choice < 1 || choice > items.len() {
        return Err(LookupError::reference(format!(
            "choice {choice} outside 1..={}",
            items.len()
        )));
    }
    Ok(match mode {
        SelectionMode::Positional => Selection::Position(choice),
        SelectionMode::ByValue => Selection::Item(items[choice - 1].clone()),
    })
}
