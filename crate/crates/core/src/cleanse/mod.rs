//! Declarative cleanup scripts that turn extracted table text into a
//! [`Datatable`].
//!
//! A script is a list of steps. Text steps (`replace`, `unify`) rewrite the
//! raw text; the first table step (`header`, `split`, `drop`, `patch`)
//! converts the tab-separated lines into a grid, and the remaining steps edit
//! that grid. Every executed step leaves one entry in the [`AuditLog`], with
//! the number of replacements or cells it touched so the counts can be
//! checked against what the script writer expected.

pub mod composite;
mod replace;
mod script;

use std::fmt;

use thiserror::Error;

use crate::table::{CellValue, Datatable, TableError, ValidationReport};
pub use composite::{split_composite_field, CompositeFieldSpec, CompositeParts};
pub use replace::{escape, expand_escapes, replace_all, replace_literal};
pub use script::{CleanupScript, ColumnSelector, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("script line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("cell {0:?} is not of the form \"<n> (<lo>[-<hi>][ <])\"")]
    Split(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("line {line} has {found} fields, expected {expected}")]
    Shape {
        line: usize,
        found: usize,
        expected: usize,
    },
    #[error("record {row} does not exist ({records} records)")]
    RowOutOfRange { row: usize, records: usize },
    #[error("input is not valid UTF-8: {0}")]
    Decode(String),
}

/// Result of [`unify_separators`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unified {
    pub lines: Vec<String>,
    /// Separator occurrences turned into tabs.
    pub replaced: usize,
    /// Tab-separated field count of each output line.
    pub fields_per_line: Vec<usize>,
}

/// Turns every occurrence of an extra separator into exactly one tab.
/// Consecutive separators are kept, so empty fields survive.
pub fn unify_separators<S: AsRef<str>>(lines: &[S], extra: &[char]) -> Unified {
    let mut replaced = 0;
    let lines: Vec<String> = lines
        .iter()
        .map(|line| {
            line.as_ref()
                .chars()
                .map(|c| {
                    if extra.contains(&c) {
                        replaced += 1;
                        '\t'
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let fields_per_line = lines.iter().map(|l| l.split('\t').count()).collect();
    Unified {
        lines,
        replaced,
        fields_per_line,
    }
}

/// Outcome of checking a step count against the script's expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditStatus {
    Pass,
    Fail,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    /// 1-based position of the step in the script.
    pub step: usize,
    pub description: String,
    /// Replacements made or cells touched.
    pub count: usize,
    pub expected: Option<usize>,
}

impl AuditEntry {
    pub fn status(&self) -> AuditStatus {
        match self.expected {
            None => AuditStatus::Unchecked,
            Some(e) if e == self.count => AuditStatus::Pass,
            Some(_) => AuditStatus::Fail,
        }
    }
}

impl fmt::Display for AuditEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t", self.step, self.description, self.count)?;
        match (self.status(), self.expected) {
            (AuditStatus::Pass, _) => f.write_str("PASS"),
            (AuditStatus::Fail, Some(e)) => write!(f, "FAIL (expected {e})"),
            _ => f.write_str("-"),
        }
    }
}

/// One entry per executed step, in execution order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditLog {
    pub entries: Vec<AuditEntry>,
}

impl AuditLog {
    pub fn all_passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.status() != AuditStatus::Fail)
    }

    /// Counts of the entries that carried an expectation.
    pub fn checked_counts(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| e.expected.is_some())
            .map(|e| e.count)
            .collect()
    }
}

impl fmt::Display for AuditLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScriptOutcome {
    pub table: Datatable,
    pub audit: AuditLog,
    pub report: ValidationReport,
}

/// A run that stopped on a hard error, with the audit entries of the steps
/// that completed before it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{error}")]
pub struct RunFailure {
    pub error: ScriptError,
    pub audit: AuditLog,
}

struct Grid {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Grid {
    fn from_text(text: &str, header: bool) -> Result<Grid, ScriptError> {
        let mut lines = text
            .split('\n')
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l.split('\t').map(|c| c.trim().to_string()).collect::<Vec<_>>()));
        let mut rows = Vec::new();
        let header = if header {
            lines.next().map(|(_, h)| h).unwrap_or_default()
        } else {
            let first = lines.next();
            let width = first.as_ref().map_or(0, |(_, r)| r.len());
            rows.extend(first.map(|(_, r)| r));
            (0..width).map(crate::sheet::column_label).collect()
        };
        for (line, row) in lines {
            if row.len() != header.len() {
                return Err(ScriptError::Shape {
                    line,
                    found: row.len(),
                    expected: header.len(),
                });
            }
            rows.push(row);
        }
        Ok(Grid { header, rows })
    }

    fn column(&self, sel: &ColumnSelector) -> Result<usize, ScriptError> {
        let hit = match sel {
            ColumnSelector::Index(i) => (1..=self.header.len()).contains(i).then(|| i - 1),
            ColumnSelector::Name(n) => self
                .header
                .iter()
                .position(|h| h == n)
                .or_else(|| self.header.iter().position(|h| h.eq_ignore_ascii_case(n))),
        };
        hit.ok_or_else(|| TableError::FieldNotFound(sel.to_string()).into())
    }
}

/// Runs a script over raw bytes, rejecting input that is not UTF-8.
pub fn run_script_bytes(script: &CleanupScript, input: &[u8]) -> Result<ScriptOutcome, RunFailure> {
    match std::str::from_utf8(input) {
        Ok(text) => run_script(script, text),
        Err(e) => Err(RunFailure {
            error: ScriptError::Decode(e.to_string()),
            audit: AuditLog::default(),
        }),
    }
}

/// Executes `script` over `input`. Count mismatches only mark the audit
/// entry as failed; split, lookup and shape errors stop the run.
pub fn run_script(script: &CleanupScript, input: &str) -> Result<ScriptOutcome, RunFailure> {
    let mut audit = AuditLog::default();
    match execute(script, input, &mut audit) {
        Ok(table) => {
            let report = table.validate_1nf();
            Ok(ScriptOutcome {
                table,
                audit,
                report,
            })
        }
        Err(error) => Err(RunFailure { error, audit }),
    }
}

fn execute(script: &CleanupScript, input: &str, audit: &mut AuditLog) -> Result<Datatable, ScriptError> {
    let mut text = input
        .strip_prefix('\u{feff}')
        .unwrap_or(input)
        .replace("\r\n", "\n");
    let mut grid: Option<Grid> = None;

    for (i, step) in script.steps().iter().enumerate() {
        let n = i + 1;
        let mut entry = |description: String, count: usize, expected: Option<usize>| {
            audit.entries.push(AuditEntry {
                step: n,
                description,
                count,
                expected,
            })
        };
        match step {
            Step::Replace {
                pattern,
                replacement,
                expected,
            } => {
                let (out, count) = replace_all(&text, pattern, replacement)?;
                text = out;
                entry(format!("replace {pattern:?} -> {replacement:?}"), count, *expected);
            }
            Step::UnifySeparators {
                separators,
                expected,
            } => {
                let lines: Vec<&str> = text.split('\n').collect();
                let unified = unify_separators(&lines, separators);
                text = unified.lines.join("\n");
                let fields = summarize_fields(&unified.fields_per_line);
                let seps: String = separators.iter().collect();
                entry(
                    format!("unify {seps:?} -> tab; fields per line: {fields}"),
                    unified.replaced,
                    *expected,
                );
            }
            Step::DeclareHeader(flag) => {
                let g = Grid::from_text(&text, *flag)?;
                entry(
                    format!(
                        "text to table, header {}: {} records x {} fields",
                        if *flag { "yes" } else { "no" },
                        g.rows.len(),
                        g.header.len()
                    ),
                    g.rows.len(),
                    None,
                );
                grid = Some(g);
            }
            Step::SplitColumn { column, spec } => {
                let g = grid.get_or_insert(Grid::from_text(&text, true)?);
                let col = g.column(column)?;
                let mut open = Vec::new();
                for (r, row) in g.rows.iter_mut().enumerate() {
                    let parts = split_composite_field(&row[col], spec)?;
                    if parts.open_ended {
                        open.push((r + 1).to_string());
                    }
                    let hi = match parts.hi {
                        CellValue::Empty => String::new(),
                        v => v.to_text(),
                    };
                    row.splice(
                        col..=col,
                        [
                            crate::table::format_number(parts.value),
                            crate::table::format_number(parts.lo),
                            hi,
                        ],
                    );
                }
                g.header.splice(col..=col, spec.names.iter().cloned());
                let mut desc = format!("split {column} into {}", spec.names.join(", "));
                if !open.is_empty() {
                    desc.push_str(&format!("; open-ended records: {}", open.join(", ")));
                }
                entry(desc, g.rows.len(), None);
            }
            Step::DropColumn(name) => {
                let g = grid.get_or_insert(Grid::from_text(&text, true)?);
                let col = g.column(&ColumnSelector::Name(name.clone()))?;
                g.header.remove(col);
                for row in &mut g.rows {
                    row.remove(col);
                }
                entry(format!("drop column {name:?}"), g.rows.len(), None);
            }
            Step::Patch { row, column, value } => {
                let g = grid.get_or_insert(Grid::from_text(&text, true)?);
                let col = g.column(column)?;
                let records = g.rows.len();
                let cell = row
                    .checked_sub(1)
                    .and_then(|r| g.rows.get_mut(r))
                    .ok_or(ScriptError::RowOutOfRange { row: *row, records })?;
                let old = std::mem::replace(&mut cell[col], value.clone());
                entry(format!("patch record {row}, {column}: {old:?} -> {value:?}"), 1, None);
            }
        }
    }

    let g = match grid {
        Some(g) => g,
        None => Grid::from_text(&text, true)?,
    };
    Ok(Datatable::from_text_rows(g.header, &g.rows)?)
}

/// Run-length summary such as `5x14` or `4x1, 5x13`.
fn summarize_fields(counts: &[usize]) -> String {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &c in counts {
        match runs.last_mut() {
            Some((v, n)) if *v == c => *n += 1,
            _ => runs.push((c, 1)),
        }
    }
    runs.iter()
        .map(|(v, n)| format!("{v}x{n}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::table::ColumnType;

    #[test]
    fn unify_mixed_separators() {
        let u = unify_separators(&["a\tb|c"], &['|']);
        assert_eq!(u.lines, ["a\tb\tc"]);
        assert_eq!(u.replaced, 1);
        assert_eq!(u.fields_per_line, [3]);
    }

    #[test]
    fn unify_keeps_empty_fields() {
        let u = unify_separators(&["x||y", "plain"], &['|']);
        assert_eq!(u.lines, ["x\t\ty", "plain"]);
        assert_eq!(u.fields_per_line, [3, 1]);
    }

    #[test]
    fn beaufort_script_end_to_end() {
        let out = run_script(&fixtures::beaufort_script(), fixtures::BEAUFORT_RAW).unwrap();
        assert_eq!(out.audit.checked_counts()[..3], [14, 13, 14]);
        assert!(out.audit.all_passed(), "{}", out.audit);
        assert!(out.report.is_1nf);
        assert_eq!(out.report.shape, (13, 4));
        assert_eq!(out.table, fixtures::beaufort_table());
    }

    #[test]
    fn lossy_export_repaired_by_patches_and_split() {
        let script = CleanupScript::parse(fixtures::BEAUFORT_LOSSY_SCRIPT).unwrap();
        let out = run_script(&script, fixtures::BEAUFORT_LOSSY_RAW).unwrap();
        assert!(out.audit.all_passed(), "{}", out.audit);
        assert_eq!(out.table, fixtures::beaufort_table());
        let split = out
            .audit
            .entries
            .iter()
            .find(|e| e.description.starts_with("split"))
            .unwrap();
        assert!(split.description.ends_with("open-ended records: 13"));
    }

    #[test]
    fn hungarian_script() {
        let script = CleanupScript::parse(fixtures::BEAUFORT_HU_SCRIPT).unwrap();
        let out = run_script(&script, fixtures::BEAUFORT_HU_RAW).unwrap();
        assert_eq!(out.audit.checked_counts()[..3], [14, 13, 14]);
        assert!(out.audit.all_passed(), "{}", out.audit);
        assert_eq!(out.table.header(), ["Fokozat", "seb1", "Megnevezés", "Szárazföldön"]);
        assert_eq!(out.report.shape, (13, 4));
    }

    #[test]
    fn header_only_script_matches_direct_ingest() {
        let tsv = "Force\tSpeed\n0\t0\n1\t2\n";
        let script = CleanupScript::parse("header\tyes\n").unwrap();
        let out = run_script(&script, tsv).unwrap();
        let direct = Datatable::from_text_rows(
            vec!["Force".into(), "Speed".into()],
            &[vec!["0", "0"], vec!["1", "2"]],
        )
        .unwrap();
        assert_eq!(out.table, direct);
    }

    #[test]
    fn headerless_grid_gets_column_letters() {
        let script = CleanupScript::parse("header\tno\n").unwrap();
        let out = run_script(&script, "1\tx\n2\ty\n").unwrap();
        assert_eq!(out.table.header(), ["A", "B"]);
        assert_eq!(out.table.column_types(), [ColumnType::Number, ColumnType::Text]);
    }

    #[test]
    fn count_mismatch_is_not_fatal() {
        // one record removed: 13 paragraph breaks instead of 14
        let short: String = fixtures::BEAUFORT_RAW
            .split_inclusive('\n')
            .filter(|l| !l.starts_with("(45-54)") && *l != "7\n")
            .collect();
        let out = run_script(&fixtures::beaufort_script(), &short).unwrap();
        let first = &out.audit.entries[0];
        assert_eq!(first.count, 13);
        assert_eq!(first.status(), AuditStatus::Fail);
        assert!(!out.audit.all_passed());
        assert_eq!(out.report.shape, (12, 4));
    }

    #[test]
    fn missing_column_aborts_with_partial_audit() {
        let script = CleanupScript::parse("replace\t^p(\t^t\t14\ndrop\tNope\n").unwrap();
        let err = run_script(&script, fixtures::BEAUFORT_RAW).unwrap_err();
        assert_eq!(err.error, ScriptError::Table(TableError::FieldNotFound("Nope".into())));
        assert_eq!(err.audit.entries.len(), 1);
    }

    #[test]
    fn split_error_names_cell() {
        let script = CleanupScript::parse("unify\t|\nsplit\t1\tF\tS\tU\n").unwrap();
        let err = run_script(&script, fixtures::BEAUFORT_LOSSY_RAW).unwrap_err();
        assert_eq!(err.error, ScriptError::Split("(2-6)".into()));
    }

    #[test]
    fn invalid_utf8_is_a_decode_error() {
        let err = run_script_bytes(&fixtures::beaufort_script(), b"\xff\xfe").unwrap_err();
        assert!(matches!(err.error, ScriptError::Decode(_)));
    }

    #[test]
    fn deterministic() {
        let a = run_script(&fixtures::beaufort_script(), fixtures::BEAUFORT_RAW).unwrap();
        let b = run_script(&fixtures::beaufort_script(), fixtures::BEAUFORT_RAW).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn audit_line_format() {
        let e = AuditEntry {
            step: 1,
            description: "replace \"^p(\" -> \"^t\"".into(),
            count: 13,
            expected: Some(14),
        };
        assert_eq!(e.to_string(), "1\treplace \"^p(\" -> \"^t\"\t13\tFAIL (expected 14)");
    }
}
