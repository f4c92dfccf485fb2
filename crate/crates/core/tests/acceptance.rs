//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tablecook::lookup::{match_with, ErrorKind};
use tablecook::sheet::parse_formula;
use tablecook::style::{BandPalette, Rgb};
use tablecook::{
    fixtures, index, index_match, match_ascending, match_exact, parse_table, render_table, run_script, CellValue,
    ColumnType, MatchType, TableFormat,
};

use common::{beaufort_sheet, cli, fixture, largest_leq, random_formula, set};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn replacement_audit() -> Check {
    let start = Instant::now();
    let script = fixture("beaufort.script");
    let raw = fixture("beaufort_raw.txt");
    let (code, _, err) = cli(&["convert", "--script", script.to_str().unwrap(), "--in", raw.to_str().unwrap()]);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit code {code}\n{err}"))?;
    let counts: Vec<&str> = err
        .lines()
        .filter(|l| l.contains("\treplace "))
        .map(|l| l.split('\t').nth(2).unwrap())
        .take(3)
        .collect();
    ensure(counts == ["14", "13", "14"], || format!("counts {counts:?}"))?;
    ensure(err.lines().take(3).all(|l| l.ends_with("\tPASS")), || err.clone())?;
    let outcome = run_script(&fixtures::beaufort_script(), fixtures::BEAUFORT_RAW).map_err(|e| e.to_string())?;
    ensure(outcome.audit.checked_counts()[..3] == [14, 13, 14], || format!("{:?}", outcome.audit))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))
}

fn first_normal_form() -> Check {
    let outcome = run_script(&fixtures::beaufort_script(), fixtures::BEAUFORT_RAW).map_err(|e| e.to_string())?;
    let t = &outcome.table;
    ensure(outcome.report.is_1nf, || format!("{:?}", outcome.report.violations))?;
    ensure((t.record_count(), t.field_count()) == (13, 4), || format!("{:?}", outcome.report.shape))?;
    ensure(
        t.column_types() == [ColumnType::Number, ColumnType::Number, ColumnType::Text, ColumnType::Text],
        || format!("{:?}", t.column_types()),
    )?;
    ensure(*t == fixtures::beaufort_table(), || "converted table differs from beaufort.csv".into())
}

fn force_lookup() -> Check {
    let table = fixture("beaufort.csv");
    let (code, out, err) = cli(&["lookup", "--table", table.to_str().unwrap(), "--by", "force", "--value", "6"]);
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    ensure(out == "6,36,strong breeze,Large branches in motion.\n", || format!("{out:?}"))
}

fn speed_lookup() -> Check {
    let table = fixture("beaufort.csv");
    let (code, out, err) = cli(&["lookup", "--table", table.to_str().unwrap(), "--by", "speed", "--value", "60"]);
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    ensure(out == "8,55,gale,Twigs break off trees.\n", || format!("{out:?}"))?;
    ensure(err.contains("match type 1 (AscendingLargestLeq)"), || format!("{err:?}"))?;
    let speeds = fixtures::beaufort_table().column_vector("Speed").unwrap();
    let pos = match_with(MatchType::default(), &CellValue::from(60), &speeds).map_err(|e| e.to_string())?;
    ensure(MatchType::default() == MatchType::AscendingLargestLeq && pos == 9, || format!("position {pos}"))
}

fn sentences() -> Check {
    let table = fixture("beaufort.csv");
    let table = table.to_str().unwrap();
    let (_, force, _) = cli(&["lookup", "--table", table, "--by", "force", "--value", "6", "--format", "sentence"]);
    let (_, speed, _) = cli(&["lookup", "--table", table, "--by", "speed", "--value", "60", "--format", "sentence"]);
    ensure(
        force == "The speed of force 6 is 36 km/h, its description: strong breeze, its specification: Large branches in motion.\n",
        || format!("{force:?}"),
    )?;
    ensure(
        speed == "60 km/h speed of wind is in force 8, its description is gale, and here twigs break off trees.\n",
        || format!("{speed:?}"),
    )
}

fn palette() -> Check {
    let expected = [
        (210, 211, 213),
        (0, 135, 75),
        (0, 166, 81),
        (78, 183, 72),
        (167, 206, 56),
        (215, 223, 37),
        (255, 203, 3),
        (251, 168, 28),
        (245, 131, 33),
        (241, 96, 35),
        (240, 64, 35),
        (238, 28, 37),
        (196, 21, 28),
    ];
    let p = BandPalette::beaufort();
    ensure(p.bands().len() == 13, || format!("{} bands", p.bands().len()))?;
    for (force, (r, g, b)) in expected.into_iter().enumerate() {
        let got = p.rgb_for_force(force as u32).map_err(|e| e.to_string())?;
        ensure(got == Rgb::new(r, g, b), || format!("force {force}: {got}"))?;
    }
    Ok(())
}

fn formula_engine() -> Check {
    let mut sheet = beaufort_sheet();
    set(&mut sheet, "F3", 6);
    set(&mut sheet, "F8", 60);
    set(&mut sheet, "F10", "gale");
    let mut by_position = beaufort_sheet();
    set(&mut by_position, "F3", 9);
    let cases: [(&tablecook::Sheet, &str, CellValue); 9] = [
        (&sheet, "=MATCH(F3,A2:A14,0)", 7.into()),
        (&sheet, "=INDEX(B2:B14,MATCH(F3,A2:A14,0))", 36.into()),
        (&sheet, "=MATCH(F8,B2:B14)", 9.into()),
        (&sheet, "=INDEX(A2:A14,MATCH(F8,B2:B14))", 8.into()),
        (&by_position, "=INDEX(D2:D14,F3)", "Twigs break off trees.".into()),
        (&by_position, "=INDEX(B2:B14,F3)", 55.into()),
        (&sheet, "=INDEX(D2:D14,MATCH(F10,C2:C14,0))", "Twigs break off trees.".into()),
        (&sheet, "=F10", "gale".into()),
        (&sheet, "=UPPER(LEFT(F10))&RIGHT(F10,LEN(F10)-1)", "Gale".into()),
    ];
    for (s, formula, want) in cases {
        let got = s.eval(formula).map_err(|e| format!("{formula}: {e}"))?;
        ensure(got.as_ref() == Ok(&want), || format!("{formula}: {got:?}"))?;
    }
    Ok(())
}

fn first_equal(value: &CellValue, v: &[CellValue]) -> Option<usize> {
    v.iter()
        .position(|e| match (value, e) {
            (CellValue::Number(a), CellValue::Number(b)) => a == b,
            (CellValue::Text(a), CellValue::Text(b)) => a.to_lowercase() == b.to_lowercase(),
            _ => false,
        })
        .map(|i| i + 1)
}

fn oracle_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..1000 {
        let len = rng.gen_range(1..40);
        let mut v: Vec<f64> = (0..len).map(|_| rng.gen_range(0..30) as f64).collect();
        v.sort_by(f64::total_cmp);
        let cells: Vec<CellValue> = v.iter().map(|&x| CellValue::Number(x)).collect();
        for _ in 0..5 {
            let x = rng.gen_range(-5..36) as f64 + if rng.gen_bool(0.3) { 0.5 } else { 0.0 };
            let got = match_ascending(&CellValue::Number(x), &cells);
            match (largest_leq(&v, x), &got) {
                (Some(p), Ok(q)) if p == *q => {}
                (None, Err(e)) if e.kind == ErrorKind::NA => {}
                (want, _) => return Err(format!("case {case}: {v:?} x={x}: want {want:?}, got {got:?}")),
            }

            let needle = CellValue::Number(rng.gen_range(-2..32) as f64);
            let got = match_exact(&needle, &cells).ok();
            ensure(got == first_equal(&needle, &cells), || format!("exact {needle:?} in {v:?}: {got:?}"))?;

            let results: Vec<CellValue> = (0..len).map(|i| CellValue::text(format!("r{i}"))).collect();
            let composed = index_match(&needle, &cells, &results, MatchType::Exact);
            let manual = match_exact(&needle, &cells).and_then(|p| index(&results, p as f64));
            ensure(composed == manual, || format!("index_match {needle:?}: {composed:?} vs {manual:?}"))?;
        }
    }
    let words: Vec<CellValue> = ["calm", "Gale", "gale", "storm"].into_iter().map(CellValue::from).collect();
    ensure(match_exact(&"GALE".into(), &words) == Ok(2), || "case-insensitive first occurrence".into())
}

fn band_consistency() -> Check {
    let palette = BandPalette::beaufort();
    let mut sheet = beaufort_sheet();
    let boundaries = [0, 2, 7, 13, 19, 27, 36, 45, 55, 66, 78, 91, 105];
    for tenth in 0..=1500 {
        let speed = tenth as f64 / 10.0;
        set(&mut sheet, "F8", speed);
        let via_formula = sheet
            .eval("=INDEX(A2:A14,MATCH(F8,B2:B14))")
            .map_err(|e| e.to_string())?
            .map_err(|e| format!("speed {speed}: {e}"))?;
        let via_bands = palette.band_for_value(speed).map_err(|e| e.to_string())?;
        ensure(via_formula == CellValue::from(via_bands as f64), || {
            format!("speed {speed}: formula {via_formula:?}, bands {via_bands}")
        })?;
        let oracle = boundaries.iter().rposition(|&b| b as f64 <= speed).unwrap();
        ensure(via_bands as usize == oracle, || format!("speed {speed}: bands {via_bands}, expected {oracle}"))?;
    }
    Ok(())
}

fn round_trips() -> Check {
    let mut rng = StdRng::seed_from_u64(200);
    for _ in 0..200 {
        let source = random_formula(&mut rng);
        let parsed = parse_formula(&source).map_err(|e| format!("{source}: {e}"))?;
        let printed = parsed.to_formula();
        let reparsed = parse_formula(&printed).map_err(|e| format!("{printed}: {e}"))?;
        ensure(reparsed == parsed, || format!("{source} -> {printed}"))?;
        ensure(reparsed.to_formula() == printed, || format!("printing {printed} is not stable"))?;
    }
    let table = fixtures::beaufort_table();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for format in [TableFormat::Csv, TableFormat::Tsv, TableFormat::Json] {
        let path = dir.path().join(format!("beaufort.{format}"));
        tablecook::emit_table(&table, &path, None).map_err(|e| e.to_string())?;
        let loaded = tablecook::load_table(&path, None).map_err(|e| e.to_string())?;
        ensure(loaded == table, || format!("{format}: loaded table differs"))?;
        let text = render_table(&table, format).map_err(|e| e.to_string())?;
        let again = render_table(&parse_table(&text, format).map_err(|e| e.to_string())?, format).map_err(|e| e.to_string())?;
        ensure(again == text, || format!("{format}: text differs after reload"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("replacement audit reports 14, 13, 14", replacement_audit),
        ("converted table is 13 x 4 in first normal form", first_normal_form),
        ("force 6 lookup", force_lookup),
        ("speed 60 lookup by binary search", speed_lookup),
        ("force and speed sentences", sentences),
        ("palette colours", palette),
        ("formula engine on the bound sheet", formula_engine),
        ("search oracles on 1,000 random vectors", oracle_suite),
        ("band colours agree with INDEX/MATCH from 0 to 150 km/h", band_consistency),
        ("formula and table round trips", round_trips),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2}. {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
