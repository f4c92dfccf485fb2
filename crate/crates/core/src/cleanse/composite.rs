//! Splitting `"<force> (<lo>[-<hi>][ <])"` cells into their three values.

use super::ScriptError;
use crate::table::CellValue;

/// Names of the three fields a composite cell is split into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeFieldSpec {
    pub names: [String; 3],
}

impl CompositeFieldSpec {
    pub fn new(value: &str, lo: &str, hi: &str) -> Self {
        CompositeFieldSpec {
            names: [value.to_string(), lo.to_string(), hi.to_string()],
        }
    }
}

impl Default for CompositeFieldSpec {
    fn default() -> Self {
        CompositeFieldSpec::new("Force", "Speed", "Upper")
    }
}

/// The three slots of a split composite cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeParts {
    pub value: f64,
    pub lo: f64,
    /// `Empty` for single-value and open-ended ranges.
    pub hi: CellValue,
    /// Set when the range ends in `<` (no upper boundary).
    pub open_ended: bool,
}

fn integer(s: &str) -> Option<(f64, &str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if end == 0 {
        return None;
    }
    Some((s[..end].parse().ok()?, &s[end..]))
}

fn parse(cell: &str) -> Option<CompositeParts> {
    let s = cell.trim();
    let (value, rest) = integer(s)?;
    let rest = rest.trim_start().strip_prefix('(')?.trim_start();
    let (lo, rest) = integer(rest)?;
    let rest = rest.trim_start();
    let (hi, open_ended, rest) = if let Some(r) = rest.strip_prefix(['-', '\u{2013}']) {
        let (hi, r) = integer(r.trim_start())?;
        (CellValue::Number(hi), false, r.trim_start())
    } else if let Some(r) = rest.strip_prefix('<') {
        (CellValue::Empty, true, r.trim_start())
    } else {
        (CellValue::Empty, false, rest)
    };
    if rest != ")" {
        return None;
    }
    Some(CompositeParts {
        value,
        lo,
        hi,
        open_ended,
    })
}

/// True for cells that pack a value and a speed range into one string.
pub fn looks_composite(cell: &str) -> bool {
    parse(cell).is_some()
}

/// Splits a composite cell such as `"8 (55-65)"` into `(8, 55, 65)`.
/// `"0 (0)"` and `"12 (105 <)"` have no upper boundary; the latter is
/// marked open-ended. `names` only labels the output fields.
pub fn split_composite_field(
    cell: &str,
    _names: &CompositeFieldSpec,
) -> Result<CompositeParts, ScriptError> {
    parse(cell).ok_or_else(|| ScriptError::Split(cell.to_string()))
}
