//! Turn table text pulled out of documents into first-normal-form datatables,
//! then query them the way a spreadsheet would.
//!
//! ```
//! use tablecook::{fixtures, run_script, CellValue, MatchType};
//! use tablecook::query::{lookup_record, ForceFields, LookupKey};
//!
//! let outcome = run_script(&fixtures::beaufort_script(), fixtures::BEAUFORT_RAW).unwrap();
//! assert_eq!(outcome.audit.checked_counts(), [14, 13, 14, 1, 28]);
//!
//! let table = outcome.table;
//! let fields = ForceFields::resolve(&table).unwrap();
//! let gale = lookup_record(&table, fields, LookupKey::Speed, &CellValue::from(60)).unwrap();
//! assert_eq!(gale.match_type, MatchType::AscendingLargestLeq);
//! assert_eq!(gale.record[2], CellValue::from("gale"));
//! ```

pub mod cleanse;
pub mod cli;
pub mod fixtures;
pub mod io;
pub mod lookup;
pub mod query;
pub mod sheet;
pub mod style;
pub mod table;

pub use cleanse::{run_script, run_script_bytes, AuditLog, CleanupScript, ScriptError, ScriptOutcome};
pub use io::{emit_table, load_table, parse_table, render_table, IoError, TableFormat};
pub use lookup::{index, index_match, match_ascending, match_exact, ErrorKind, LookupError, MatchType};
pub use sheet::{CellRef, RangeRef, Sheet};
pub use table::{CellValue, ColumnType, Datatable, ValidationReport};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/normalization.md")]
    mod normalization {}
    #[doc = include_str!("../../../book/src/lookups.md")]
    mod lookups {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/styling.md")]
    mod styling {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
