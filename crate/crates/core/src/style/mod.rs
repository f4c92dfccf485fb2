//! Colour bands, coloured text, sentence templates and bar charts.

mod chart;
mod palette;
mod sentence;

pub use chart::{emit_bar_chart, ChartFormat, ASCII_BAR_WIDTH};
pub use palette::{Band, BandPalette, PaletteError, Rgb};
pub use sentence::{build_sentence, SentenceRecord, SentenceTemplate, TemplateError};

use crate::lookup::LookupError;

/// How [`render_colored`] marks up text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorMode {
    /// 24-bit SGR foreground colour, then a reset.
    Ansi,
    /// `#RRGGBB ` prefix.
    Hex,
    Plain,
}

pub fn render_colored(text: &str, rgb: Rgb, mode: ColorMode) -> String {
    match mode {
        ColorMode::Ansi => format!("\x1b[38;2;{};{};{}m{text}\x1b[0m", rgb.r, rgb.g, rgb.b),
        ColorMode::Hex => format!("{} {text}", rgb.hex()),
        ColorMode::Plain => text.to_string(),
    }
}

/// One-to-one uppercase mapping: characters whose uppercase form is more
/// than one character (such as `ß`) are left alone.
pub fn upper_simple(c: char) -> char {
    let mut up = c.to_uppercase();
    match (up.next(), up.next()) {
        (Some(u), None) => u,
        _ => c,
    }
}

fn lower_simple(c: char) -> char {
    let mut low = c.to_lowercase();
    match (low.next(), low.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Uppercases the first character and leaves the rest alone.
pub fn capitalize_first(s: &str) -> Result<String, LookupError> {
    let mut chars = s.chars();
    let first = chars
        .next()
        .ok_or_else(|| LookupError::value("cannot capitalize an empty string"))?;
    Ok(std::iter::once(upper_simple(first)).chain(chars).collect())
}

/// Lowercases the first character, for splicing a sentence into another.
pub fn uncapitalize_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => std::iter::once(lower_simple(first)).chain(chars).collect(),
        None => String::new(),
    }
}
