//! The Beaufort wind force scale, bundled as sample data.

use crate::cleanse::CleanupScript;
use crate::io::{parse_table, TableFormat};
use crate::table::Datatable;

/// Word-processor export: `|` cell borders and a line break inside the
/// first cell of every row.
pub const BEAUFORT_RAW: &str = include_str!("../fixtures/beaufort_raw.txt");
/// Turns [`BEAUFORT_RAW`] into [`BEAUFORT_CSV`].
pub const BEAUFORT_SCRIPT: &str = include_str!("../fixtures/beaufort.script");
pub const BEAUFORT_HU_RAW: &str = include_str!("../fixtures/beaufort_hu_raw.txt");
pub const BEAUFORT_HU_SCRIPT: &str = include_str!("../fixtures/beaufort_hu.script");
/// An export where the speed ranges of a few rows were lost.
pub const BEAUFORT_LOSSY_RAW: &str = include_str!("../fixtures/beaufort_lossy.txt");
pub const BEAUFORT_LOSSY_SCRIPT: &str = include_str!("../fixtures/beaufort_lossy.script");
/// The clean table: `Force,Speed,Description,Specifications`.
pub const BEAUFORT_CSV: &str = include_str!("../fixtures/beaufort.csv");
pub const BEAUFORT_PALETTE_CSV: &str = include_str!("../fixtures/beaufort_palette.csv");

pub fn beaufort_script() -> CleanupScript {
    CleanupScript::parse(BEAUFORT_SCRIPT).expect("bundled script parses")
}

pub fn beaufort_table() -> Datatable {
    parse_table(BEAUFORT_CSV, TableFormat::Csv).expect("bundled table parses")
}
