//! Category bar charts: one bar per record, labelled by one field and sized
//! by another.

use std::fmt::Write as _;

use super::BandPalette;
use crate::lookup::LookupError;
use crate::table::{format_number, CellValue, Datatable};

/// Width in characters of the longest ASCII bar.
pub const ASCII_BAR_WIDTH: usize = 50;

const SVG_BAR_WIDTH: usize = 30;
const SVG_GAP: usize = 10;
const SVG_PLOT_HEIGHT: f64 = 200.0;
const SVG_MARGIN: usize = 20;
const DEFAULT_FILL: &str = "#4472C4";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartFormat {
    Ascii,
    Svg,
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders `y_field` against `x_field` labels in record order.
///
/// Bars are scaled so the largest value gets the full length. With a
/// palette, SVG bars whose label is a force in the palette take its colour.
pub fn emit_bar_chart(
    table: &Datatable,
    x_field: &str,
    y_field: &str,
    format: ChartFormat,
    palette: Option<&BandPalette>,
) -> Result<String, LookupError> {
    let missing = |e: crate::table::TableError| LookupError::reference(e.to_string());
    let labels: Vec<String> = table
        .column_vector(x_field)
        .map_err(missing)?
        .iter()
        .map(CellValue::to_text)
        .collect();
    let values = table
        .column_vector(y_field)
        .map_err(missing)?
        .iter()
        .enumerate()
        .map(|(i, v)| match v {
            CellValue::Number(n) if *n >= 0.0 => Ok(*n),
            other => Err(LookupError::value(format!(
                "record {}: {:?} is not a non-negative number",
                i + 1,
                other.to_text()
            ))),
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let max = values.iter().copied().fold(0.0, f64::max);
    let scale = |v: f64, full: f64| if max > 0.0 { v / max * full } else { 0.0 };

    let mut out = String::new();
    match format {
        ChartFormat::Ascii => {
            let w = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
            for (label, &v) in labels.iter().zip(&values) {
                let len = scale(v, ASCII_BAR_WIDTH as f64).round() as usize;
                let pad = w - label.chars().count();
                let _ = writeln!(
                    out,
                    "{}{label} | {} {}",
                    " ".repeat(pad),
                    "#".repeat(len),
                    format_number(v)
                );
            }
        }
        ChartFormat::Svg => {
            let n = values.len();
            let width = 2 * SVG_MARGIN + n * (SVG_BAR_WIDTH + SVG_GAP);
            let height = SVG_PLOT_HEIGHT as usize + 3 * SVG_MARGIN;
            let base = SVG_MARGIN as f64 + SVG_PLOT_HEIGHT;
            let _ = writeln!(
                out,
                r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
            );
            let _ = writeln!(
                out,
                r#"  <title>{} by {}</title>"#,
                xml_escape(y_field),
                xml_escape(x_field)
            );
            for (i, (label, &v)) in labels.iter().zip(&values).enumerate() {
                let h = scale(v, SVG_PLOT_HEIGHT);
                let x = SVG_MARGIN + i * (SVG_BAR_WIDTH + SVG_GAP);
                let fill = palette
                    .zip(label.parse::<u32>().ok())
                    .and_then(|(p, force)| p.rgb_for_force(force).ok())
                    .map_or_else(|| DEFAULT_FILL.to_string(), |rgb| rgb.hex());
                let _ = writeln!(
                    out,
                    r#"  <rect class="bar" x="{x}" y="{:.2}" width="{SVG_BAR_WIDTH}" height="{h:.2}" fill="{fill}"><title>{}: {}</title></rect>"#,
                    base - h,
                    xml_escape(label),
                    format_number(v)
                );
                let _ = writeln!(
                    out,
                    r#"  <text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
                    x + SVG_BAR_WIDTH / 2,
                    base as usize + 15,
                    xml_escape(label)
                );
            }
            out.push_str("</svg>\n");
        }
    }
    Ok(out)
}
