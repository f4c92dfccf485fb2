//! The line-oriented cleanup-script format.
//!
//! One step per line, fields separated by a tab, `#` starts a comment line:
//!
//! ```text
//! replace  <pattern>  <replacement>  [expected count]
//! unify    <separator chars>  [expected count]
//! header   yes|no
//! split    <column>  <value field>  <lower field>  <upper field>
//! drop     <field name>
//! patch    <record>  <column>  <new value>
//! ```
//!
//! Patterns and replacements use `^p`, `^t` and `^^` escapes. Columns are a
//! 1-based index or a field name; records are 1-based.

use std::fmt;

use super::{expand_escapes, CompositeFieldSpec, ScriptError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    /// 1-based.
    Index(usize),
    Name(String),
}

impl ColumnSelector {
    fn parse(s: &str) -> ColumnSelector {
        match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        }
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Index(i) => write!(f, "column {i}"),
            ColumnSelector::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Literal replacement; pattern and replacement are kept in escaped form.
    Replace {
        pattern: String,
        replacement: String,
        expected: Option<usize>,
    },
    UnifySeparators {
        separators: Vec<char>,
        expected: Option<usize>,
    },
    DeclareHeader(bool),
    SplitColumn {
        column: ColumnSelector,
        spec: CompositeFieldSpec,
    },
    DropColumn(String),
    Patch {
        row: usize,
        column: ColumnSelector,
        value: String,
    },
}

impl Step {
    fn is_text_step(&self) -> bool {
        matches!(self, Step::Replace { .. } | Step::UnifySeparators { .. })
    }
}

/// An ordered, non-empty list of cleanup steps.
///
/// Text steps come first. `header`, when present, must be the first table
/// step since it decides how the text is read into a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanupScript {
    steps: Vec<Step>,
}

impl CleanupScript {
    pub fn new(steps: Vec<Step>) -> Result<Self, ScriptError> {
        let err = |line: usize, message: &str| ScriptError::Syntax {
            line,
            message: message.to_string(),
        };
        if steps.is_empty() {
            return Err(err(0, "script has no steps"));
        }
        let mut in_table = false;
        for (i, step) in steps.iter().enumerate() {
            if step.is_text_step() {
                if in_table {
                    return Err(err(i + 1, "text step after the text was converted to a table"));
                }
            } else {
                if matches!(step, Step::DeclareHeader(_)) && in_table {
                    return Err(err(i + 1, "header must be the first table step"));
                }
                in_table = true;
            }
            if let Step::Replace { pattern, replacement, .. } = step {
                if expand_escapes(pattern)?.is_empty() {
                    return Err(ScriptError::InvalidPattern("empty pattern".into()));
                }
                expand_escapes(replacement)?;
            }
        }
        Ok(CleanupScript { steps })
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Parses the tab-separated script format. Errors carry the 1-based
    /// script line.
    pub fn parse(source: &str) -> Result<Self, ScriptError> {
        let mut steps = Vec::new();
        let mut lines_of_steps = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let n = i + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            steps.push(parse_step(line).map_err(|message| ScriptError::Syntax { line: n, message })?);
            lines_of_steps.push(n);
        }
        CleanupScript::new(steps).map_err(|e| match e {
            // report the script line, not the step index
            ScriptError::Syntax { line, message } if line > 0 => ScriptError::Syntax {
                line: lines_of_steps[line - 1],
                message,
            },
            e => e,
        })
    }
}

fn parse_count(s: Option<&str>) -> Result<Option<usize>, String> {
    match s {
        None | Some("") => Ok(None),
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|_| format!("expected count must be a non-negative integer, got {s:?}")),
    }
}

fn parse_step(line: &str) -> Result<Step, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    let (kind, args) = fields.split_first().expect("split yields at least one field");
    let arity = |min: usize, max: usize| {
        if args.len() < min || args.len() > max {
            Err(format!(
                "{kind} takes {} arguments, got {}",
                if min == max { min.to_string() } else { format!("{min} to {max}") },
                args.len()
            ))
        } else {
            Ok(())
        }
    };
    match kind.trim() {
        "replace" => {
            arity(2, 3)?;
            Ok(Step::Replace {
                pattern: args[0].to_string(),
                replacement: args[1].to_string(),
                expected: parse_count(args.get(2).copied())?,
            })
        }
        "unify" => {
            arity(1, 2)?;
            let separators: Vec<char> = args[0].chars().collect();
            if separators.is_empty() {
                return Err("unify needs at least one separator character".into());
            }
            Ok(Step::UnifySeparators {
                separators,
                expected: parse_count(args.get(1).copied())?,
            })
        }
        "header" => {
            arity(1, 1)?;
            match args[0].trim() {
                "yes" | "true" => Ok(Step::DeclareHeader(true)),
                "no" | "false" => Ok(Step::DeclareHeader(false)),
                other => Err(format!("header expects yes or no, got {other:?}")),
            }
        }
        "split" => {
            arity(4, 4)?;
            Ok(Step::SplitColumn {
                column: ColumnSelector::parse(args[0]),
                spec: CompositeFieldSpec::new(args[1], args[2], args[3]),
            })
        }
        "drop" => {
            arity(1, 1)?;
            Ok(Step::DropColumn(args[0].to_string()))
        }
        "patch" => {
            arity(3, 3)?;
            let row = args[0]
                .parse()
                .map_err(|_| format!("patch record must be a positive integer, got {:?}", args[0]))?;
            Ok(Step::Patch {
                row,
                column: ColumnSelector::parse(args[1]),
                value: args[2].to_string(),
            })
        }
        other => Err(format!("unknown step {other:?}")),
    }
}
