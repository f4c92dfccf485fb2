//! The `tablecook` command line.
//!
//! Data goes to standard output and diagnostics to standard error. Exit
//! codes: 0 success, 1 an error value such as `#N/A`, 2 bad input, 3 a
//! cleanup script whose expected counts did not all match.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cleanse::{run_script_bytes, CleanupScript};
use crate::io::{load_table, render_table, TableFormat};
use crate::lookup::{match_exact, select, LookupError, SelectionMode};
use crate::query::{lookup_record, record_at, ForceFields, LookupKey};
use crate::sheet::{CellRef, Sheet};
use crate::style::{
    build_sentence, emit_bar_chart, render_colored, BandPalette, ChartFormat, ColorMode, SentenceTemplate,
};
use crate::table::{CellValue, Datatable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR_VALUE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_AUDIT_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tablecook", version, about = "Clean up extracted tables and query them like a spreadsheet")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a cleanup script over raw table text and write the resulting table
    Convert {
        #[arg(long)]
        script: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// Output file; standard output if omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; defaults to the extension of --out, else csv
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Check that a table is in first normal form
    Validate {
        #[command(flatten)]
        table: TableArgs,
    },
    /// Find a record by force, speed or description
    Lookup {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum)]
        by: KeyArg,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Pick the n-th item of a field, as a drop-down list would
    Select {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum, default_value = "index")]
        mode: ModeArg,
        #[arg(long, allow_hyphen_values = true)]
        choice: i64,
        #[arg(long, default_value = "Description")]
        field: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fill a sentence template from a looked-up record
    Sentence {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, value_enum)]
        by: KeyArg,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        /// Template with {force}, {speed}, {description}, {specification}
        #[arg(long)]
        template: Option<String>,
        /// Colour the sentence by the record's force
        #[arg(long, value_enum)]
        color: Option<ColorArg>,
        #[arg(long)]
        palette: Option<PathBuf>,
    },
    /// Evaluate a formula over a sheet holding the table
    Eval {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long = "table-format", value_enum)]
        table_format: Option<FormatArg>,
        /// Top-left cell of the bound table (its header row)
        #[arg(long, default_value = "A1")]
        anchor: String,
        /// Set a cell before evaluating, e.g. F3=6
        #[arg(long = "set", value_name = "REF=VALUE")]
        sets: Vec<String>,
        #[arg(allow_hyphen_values = true)]
        formula: String,
    },
    /// Draw one bar per record
    Chart {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long, default_value = "Force")]
        x: String,
        #[arg(long, default_value = "Speed")]
        y: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: ChartArg,
        /// Bar colours for SVG; the built-in Beaufort palette if omitted
        #[arg(long)]
        palette: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    table: PathBuf,
    /// Defaults to the file extension
    #[arg(long = "table-format", value_enum)]
    table_format: Option<FormatArg>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "row")]
    format: OutputFormat,
    #[arg(long)]
    palette: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ansi")]
    color: ColorArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
    Json,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => TableFormat::Csv,
            FormatArg::Tsv => TableFormat::Tsv,
            FormatArg::Json => TableFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KeyArg {
    Force,
    Speed,
    Description,
}

impl From<KeyArg> for LookupKey {
    fn from(k: KeyArg) -> Self {
        match k {
            KeyArg::Force => LookupKey::Force,
            KeyArg::Speed => LookupKey::Speed,
            KeyArg::Description => LookupKey::Description,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Index,
    Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Row,
    Sentence,
    Colored,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ColorArg {
    Ansi,
    Hex,
    Plain,
}

impl From<ColorArg> for ColorMode {
    fn from(c: ColorArg) -> Self {
        match c {
            ColorArg::Ansi => ColorMode::Ansi,
            ColorArg::Hex => ColorMode::Hex,
            ColorArg::Plain => ColorMode::Plain,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChartArg {
    Ascii,
    Svg,
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_INPUT
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Convert {
            script,
            input,
            out: out_path,
            format,
        } => convert(&script, &input, out_path.as_deref(), format.map(Into::into), out, err),
        Command::Validate { table } => validate(&table, out),
        Command::Lookup {
            table,
            by,
            value,
            output,
        } => lookup(&table, by.into(), &value, &output, out, err),
        Command::Select {
            table,
            mode,
            choice,
            field,
            output,
        } => select_cmd(&table, mode, choice, &field, &output, out, err),
        Command::Sentence {
            table,
            by,
            value,
            template,
            color,
            palette,
        } => sentence(&table, by.into(), &value, template.as_deref(), color, palette.as_deref(), out, err),
        Command::Eval {
            table,
            table_format,
            anchor,
            sets,
            formula,
        } => eval(table.as_deref(), table_format, &anchor, &sets, &formula, out, err),
        Command::Chart {
            table,
            x,
            y,
            format,
            palette,
        } => chart(&table, &x, &y, format, palette.as_deref(), out, err),
    }
}

fn read_table(args: &TableArgs) -> anyhow::Result<Datatable> {
    load_table(&args.table, args.table_format.map(Into::into)).context("cannot load table")
}

/// Loads a table and insists on first normal form.
fn read_valid_table(args: &TableArgs) -> anyhow::Result<Datatable> {
    let table = read_table(args)?;
    let report = table.validate_1nf();
    if let Some(v) = report.violations.first() {
        bail!(
            "{} is not in first normal form: {v} ({} violations)",
            args.table.display(),
            report.violations.len()
        );
    }
    Ok(table)
}

fn read_palette(path: Option<&Path>) -> anyhow::Result<BandPalette> {
    match path {
        None => Ok(BandPalette::beaufort()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            BandPalette::from_csv(&text).with_context(|| format!("bad palette {}", p.display()))
        }
    }
}

/// Prints an error value the way a cell would show it.
fn error_value(e: &LookupError, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    writeln!(out, "{}", e.kind)?;
    writeln!(err, "{}", e.detail)?;
    Ok(EXIT_ERROR_VALUE)
}

fn csv_row(record: &[CellValue]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(record.iter().map(CellValue::to_text))
        .expect("writing to memory");
    let bytes = w.into_inner().expect("writing to memory");
    String::from_utf8(bytes).expect("csv writer preserves UTF-8")
}

fn force_of(record: &[CellValue], fields: ForceFields) -> Result<u32, LookupError> {
    match record[fields.force] {
        CellValue::Number(n) if n >= 0.0 && n.fract() == 0.0 => Ok(n as u32),
        ref other => Err(LookupError::value(format!("force {:?} is not a whole number", other.to_text()))),
    }
}

fn convert(
    script_path: &Path,
    input: &Path,
    out_path: Option<&Path>,
    format: Option<TableFormat>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let source = fs::read_to_string(script_path)
        .with_context(|| format!("cannot read script {}", script_path.display()))?;
    let script = CleanupScript::parse(&source).with_context(|| format!("bad script {}", script_path.display()))?;
    let raw = fs::read(input).with_context(|| format!("cannot read {}", input.display()))?;
    let outcome = match run_script_bytes(&script, &raw) {
        Ok(o) => o,
        Err(failure) => {
            for entry in &failure.audit.entries {
                writeln!(err, "{entry}")?;
            }
            bail!("script stopped: {}", failure.error);
        }
    };
    for entry in &outcome.audit.entries {
        writeln!(err, "{entry}")?;
    }
    if !outcome.report.is_1nf {
        for v in &outcome.report.violations {
            writeln!(err, "{v}")?;
        }
        bail!("result is not in first normal form");
    }
    for w in &outcome.report.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let format = format
        .or_else(|| out_path.and_then(TableFormat::from_path))
        .unwrap_or(TableFormat::Csv);
    let text = render_table(&outcome.table, format)?;
    match out_path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(if outcome.audit.all_passed() {
        EXIT_OK
    } else {
        writeln!(err, "some replacement counts differ from the expected ones")?;
        EXIT_AUDIT_FAIL
    })
}

fn validate(args: &TableArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let table = read_table(args)?;
    let report = table.validate_1nf();
    let (records, fields) = report.shape;
    let types: Vec<&str> = table.column_types().iter().map(|t| t.as_str()).collect();
    writeln!(out, "records: {records}")?;
    writeln!(out, "fields: {fields}")?;
    writeln!(out, "types: {}", types.join(", "))?;
    for v in &report.violations {
        writeln!(out, "violation: {v}")?;
    }
    for w in &report.warnings {
        writeln!(out, "warning: {w}")?;
    }
    writeln!(out, "1NF: {}", if report.is_1nf { "yes" } else { "no" })?;
    Ok(if report.is_1nf { EXIT_OK } else { EXIT_INPUT })
}

fn default_template(key: LookupKey) -> &'static str {
    match key {
        LookupKey::Force => SentenceTemplate::FORCE,
        LookupKey::Speed => SentenceTemplate::SPEED,
        LookupKey::Description => SentenceTemplate::DESCRIPTION,
    }
}

/// Renders a found record as a row, a sentence or a coloured sentence.
fn render_record(
    record: &[CellValue],
    fields: ForceFields,
    template: &str,
    speed_override: Option<CellValue>,
    output: &OutputArgs,
) -> anyhow::Result<Result<String, LookupError>> {
    if output.format == OutputFormat::Row {
        return Ok(Ok(csv_row(record)));
    }
    let template = SentenceTemplate::parse(template)?;
    let mut values = fields.sentence_record(record);
    if let Some(speed) = speed_override {
        values.speed = speed;
    }
    let sentence = match build_sentence(&template, &values) {
        Ok(s) => s,
        Err(e) => return Ok(Err(e)),
    };
    if output.format == OutputFormat::Sentence {
        return Ok(Ok(format!("{sentence}\n")));
    }
    let palette = read_palette(output.palette.as_deref())?;
    Ok(force_of(record, fields)
        .and_then(|f| palette.rgb_for_force(f))
        .map(|rgb| format!("{}\n", render_colored(&sentence, rgb, output.color.into()))))
}

fn lookup(
    args: &TableArgs,
    key: LookupKey,
    value: &str,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let table = read_valid_table(args)?;
    let fields = ForceFields::resolve(&table)?;
    let value = CellValue::infer(value);
    let found = match lookup_record(&table, fields, key, &value) {
        Ok(m) => m,
        Err(e) => return error_value(&e, out, err),
    };
    writeln!(
        err,
        "{key} lookup: match type {} ({:?}), record {}",
        found.match_type.code(),
        found.match_type,
        found.position
    )?;
    let speed = (key == LookupKey::Speed).then(|| value.clone());
    match render_record(&found.record, fields, default_template(key), speed, output)? {
        Ok(text) => {
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Err(e) => error_value(&e, out, err),
    }
}

fn select_cmd(
    args: &TableArgs,
    mode: ModeArg,
    choice: i64,
    field: &str,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let table = read_valid_table(args)?;
    let fields = ForceFields::resolve(&table)?;
    let items = table.column_vector(field)?;
    let choice = usize::try_from(choice).unwrap_or(0);
    let mode = match mode {
        ModeArg::Index => SelectionMode::Positional,
        ModeArg::Value => SelectionMode::ByValue,
    };
    let picked = select(&items, mode, choice).and_then(|sel| {
        let position = match mode {
            SelectionMode::Positional => choice,
            SelectionMode::ByValue => match_exact(&sel.to_cell(), &items)?,
        };
        Ok((sel, record_at(&table, position)?))
    });
    let (selection, record) = match picked {
        Ok(p) => p,
        Err(e) => return error_value(&e, out, err),
    };
    let rendered = render_record(&record, fields, SentenceTemplate::DESCRIPTION, None, output)?;
    match rendered {
        Ok(text) => {
            writeln!(out, "{}", selection.to_cell())?;
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Err(e) => error_value(&e, out, err),
    }
}

#[allow(clippy::too_many_arguments)]
fn sentence(
    args: &TableArgs,
    key: LookupKey,
    value: &str,
    template: Option<&str>,
    color: Option<ColorArg>,
    palette: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let table = read_valid_table(args)?;
    let fields = ForceFields::resolve(&table)?;
    let value = CellValue::infer(value);
    let found = match lookup_record(&table, fields, key, &value) {
        Ok(m) => m,
        Err(e) => return error_value(&e, out, err),
    };
    let output = OutputArgs {
        format: if color.is_some() { OutputFormat::Colored } else { OutputFormat::Sentence },
        palette: palette.map(Path::to_path_buf),
        color: color.unwrap_or(ColorArg::Plain),
    };
    let speed = (key == LookupKey::Speed).then(|| value.clone());
    let template = template.unwrap_or(default_template(key));
    match render_record(&found.record, fields, template, speed, &output)? {
        Ok(text) => {
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Err(e) => error_value(&e, out, err),
    }
}

#[allow(clippy::too_many_arguments)]
fn eval(
    table: Option<&Path>,
    table_format: Option<FormatArg>,
    anchor: &str,
    sets: &[String],
    formula: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let mut sheet = Sheet::new();
    if let Some(path) = table {
        let t = load_table(path, table_format.map(Into::into)).context("cannot load table")?;
        let anchor: CellRef = anchor.parse().map_err(|e| anyhow!("bad anchor: {e}"))?;
        sheet
            .bind_table(&t, anchor, true)
            .map_err(|e| anyhow!("cannot place table at {anchor}: {}", e.detail))?;
    }
    for set in sets {
        let (at, value) = set
            .split_once('=')
            .ok_or_else(|| anyhow!("--set {set:?} is not REF=VALUE"))?;
        let at: CellRef = at.trim().parse().map_err(|e| anyhow!("--set {set:?}: {e}"))?;
        sheet.set_cell(at, CellValue::infer(value));
    }
    match sheet.eval(formula) {
        Err(e) => {
            writeln!(err, "{formula}")?;
            writeln!(err, "{}^", " ".repeat(formula[..e.offset().min(formula.len())].chars().count()))?;
            writeln!(err, "error: {e}")?;
            Ok(EXIT_INPUT)
        }
        Ok(Err(e)) => error_value(&e, out, err),
        Ok(Ok(v)) => {
            writeln!(out, "{v}")?;
            Ok(EXIT_OK)
        }
    }
}

fn chart(
    args: &TableArgs,
    x: &str,
    y: &str,
    format: ChartArg,
    palette: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<i32> {
    let table = read_valid_table(args)?;
    let (format, palette) = match format {
        ChartArg::Ascii => (ChartFormat::Ascii, None),
        ChartArg::Svg => (ChartFormat::Svg, Some(read_palette(palette)?)),
    };
    match emit_bar_chart(&table, x, y, format, palette.as_ref()) {
        Ok(text) => {
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
        Err(e) => error_value(&e, out, err),
    }
}

