#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use tablecook::{fixtures, CellRef, Sheet};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// The Beaufort table at A1 with its header, as the lookup sheets use it.
pub fn beaufort_sheet() -> Sheet {
    let mut s = Sheet::new();
    s.bind_table(&fixtures::beaufort_table(), "A1".parse().unwrap(), true)
        .unwrap();
    s
}

pub fn set(sheet: &mut Sheet, at: &str, value: impl Into<tablecook::CellValue>) {
    sheet.set_cell(at.parse::<CellRef>().unwrap(), value.into());
}

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tablecook").chain(args.iter().copied());
    let code = tablecook::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Brute force: 1-based position of the last element `<= x`.
pub fn largest_leq(v: &[f64], x: f64) -> Option<usize> {
    v.iter().rposition(|&e| e <= x).map(|i| i + 1)
}

fn column_name(rng: &mut impl Rng) -> String {
    let letters = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    let mut s = String::new();
    if rng.gen_bool(0.2) {
        s.push(letters[rng.gen_range(0..26)] as char);
    }
    s.push(letters[rng.gen_range(0..26)] as char);
    if rng.gen_bool(0.3) {
        s = s.to_lowercase();
    }
    s
}

fn cell(rng: &mut impl Rng) -> String {
    format!("{}{}", column_name(rng), rng.gen_range(1..200))
}

fn range(rng: &mut impl Rng) -> String {
    let col = column_name(rng);
    let (a, b) = (rng.gen_range(1..50), rng.gen_range(1..50));
    if rng.gen_bool(0.5) {
        format!("{col}{a}:{col}{b}")
    } else {
        format!("{}{a}:{}{a}", column_name(rng), column_name(rng))
    }
}

fn ws(rng: &mut impl Rng) -> &'static str {
    ["", "", "", " ", "  "].choose(rng).unwrap()
}

fn leaf(rng: &mut impl Rng) -> String {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(0..1000).to_string(),
        1 => format!("{}.{}", rng.gen_range(0..100), rng.gen_range(0..100)),
        2 => {
            let words = ["gale", "km/h", " is ", "Say \"\"hi\"\"", "", "szél", "&+-"];
            format!("\"{}\"", words.choose(rng).unwrap())
        }
        _ => cell(rng),
    }
}

fn expr(rng: &mut impl Rng, depth: u32) -> String {
    if depth == 0 {
        return leaf(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => leaf(rng),
        1 => format!("{}{}{}&{}{}", expr(rng, d), ws(rng), "", ws(rng), expr(rng, d)),
        2 => format!("{}{}{}{}", expr(rng, d), if rng.gen_bool(0.5) { "+" } else { "-" }, ws(rng), expr(rng, d)),
        3 => format!("({}{}{})", ws(rng), expr(rng, d), ws(rng)),
        4 => {
            let name = ["INDEX", "index", "Index"].choose(rng).unwrap();
            format!("{name}({},{}{})", range(rng), ws(rng), expr(rng, d))
        }
        5 => {
            let name = ["MATCH", "match"].choose(rng).unwrap();
            if rng.gen_bool(0.5) {
                format!("{name}({},{})", expr(rng, d), range(rng))
            } else {
                format!("{name}({}, {}, {})", expr(rng, d), range(rng), rng.gen_range(0..2))
            }
        }
        _ => match rng.gen_range(0..4) {
            0 => format!("LEFT({})", expr(rng, d)),
            1 => format!("RIGHT({},{})", expr(rng, d), expr(rng, d)),
            2 => format!("LEN({})", expr(rng, d)),
            _ => format!("upper({})", expr(rng, d)),
        },
    }
}

/// A random well-formed formula with uneven spacing and letter case.
pub fn random_formula(rng: &mut impl Rng) -> String {
    format!("={}{}", ws(rng), expr(rng, 4))
}
