//! Sentence templates over a Beaufort-style record.
//!
//! Placeholders are `{force}`, `{speed}`, `{description}` and
//! `{specification}`, optionally with a case modifier: `{description:cap}`
//! uppercases the first character, `{specification:uncap}` lowercases it.
//! `{{` and `}}` produce literal braces.

use thiserror::Error;

use super::{capitalize_first, uncapitalize_first};
use crate::lookup::LookupError;
use crate::table::{format_number, CellValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("unknown placeholder {{{0}}}")]
    UnknownField(String),
    #[error("unknown modifier {0:?}")]
    UnknownModifier(String),
    #[error("unclosed placeholder starting at byte {0}")]
    Unclosed(usize),
    #[error("unmatched '}}' at byte {0}")]
    Unmatched(usize),
}

impl From<TemplateError> for LookupError {
    fn from(e: TemplateError) -> Self {
        LookupError::value(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Force,
    Speed,
    Description,
    Specification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Case {
    AsIs,
    Capitalize,
    Uncapitalize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Literal(String),
    Slot(Field, Case),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceTemplate {
    source: String,
    pieces: Vec<Piece>,
}

impl SentenceTemplate {
    /// The sentence for a force given as input.
    pub const FORCE: &'static str = "The speed of force {force} is {speed} km/h, its description: {description}, its specification: {specification}";
    /// The sentence for a wind speed given as input; `{speed}` is the
    /// measured speed, not the band's lower boundary.
    pub const SPEED: &'static str = "{speed} km/h speed of wind is in force {force}, its description is {description}, and here {specification:uncap}";
    /// The sentence for a description picked from a list.
    pub const DESCRIPTION: &'static str = "{description:cap} is force {force}, from {speed} km/h, its specification: {specification}";

    pub fn parse(source: &str) -> Result<SentenceTemplate, TemplateError> {
        let mut pieces = Vec::new();
        let mut lit = String::new();
        let mut rest = source;
        let offset = |r: &str| source.len() - r.len();
        while let Some(c) = rest.chars().next() {
            if let Some(r) = rest.strip_prefix("{{") {
                lit.push('{');
                rest = r;
            } else if let Some(r) = rest.strip_prefix("}}") {
                lit.push('}');
                rest = r;
            } else if c == '}' {
                return Err(TemplateError::Unmatched(offset(rest)));
            } else if c == '{' {
                let close = rest.find('}').ok_or(TemplateError::Unclosed(offset(rest)))?;
                let inner = &rest[1..close];
                let (name, modifier) = inner.split_once(':').unwrap_or((inner, ""));
                let field = match name.trim() {
                    "force" => Field::Force,
                    "speed" => Field::Speed,
                    "description" => Field::Description,
                    "specification" => Field::Specification,
                    other => return Err(TemplateError::UnknownField(other.to_string())),
                };
                let case = match modifier.trim() {
                    "" => Case::AsIs,
                    "cap" => Case::Capitalize,
                    "uncap" => Case::Uncapitalize,
                    other => return Err(TemplateError::UnknownModifier(other.to_string())),
                };
                if !lit.is_empty() {
                    pieces.push(Piece::Literal(std::mem::take(&mut lit)));
                }
                pieces.push(Piece::Slot(field, case));
                rest = &rest[close + 1..];
            } else {
                lit.push(c);
                rest = &rest[c.len_utf8()..];
            }
        }
        if !lit.is_empty() {
            pieces.push(Piece::Literal(lit));
        }
        Ok(SentenceTemplate {
            source: source.to_string(),
            pieces,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// The values a sentence talks about.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceRecord {
    pub force: CellValue,
    pub speed: CellValue,
    pub description: CellValue,
    pub specification: CellValue,
}

/// Fills the template. Numbers print without a decimal point when integral.
pub fn build_sentence(template: &SentenceTemplate, record: &SentenceRecord) -> Result<String, LookupError> {
    let mut out = String::new();
    for piece in &template.pieces {
        match piece {
            Piece::Literal(s) => out.push_str(s),
            Piece::Slot(field, case) => {
                let value = match field {
                    Field::Force => &record.force,
                    Field::Speed => &record.speed,
                    Field::Description => &record.description,
                    Field::Specification => &record.specification,
                };
                let text = match value {
                    CellValue::Number(n) => format_number(*n),
                    v => v.to_text(),
                };
                match case {
                    Case::AsIs => out.push_str(&text),
                    Case::Capitalize => out.push_str(&capitalize_first(&text)?),
                    Case::Uncapitalize => out.push_str(&uncapitalize_first(&text)),
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strong_breeze() -> SentenceRecord {
        SentenceRecord {
            force: 6.into(),
            speed: 36.into(),
            description: "strong breeze".into(),
            specification: "Large branches in motion.".into(),
        }
    }

    fn gale_at_60() -> SentenceRecord {
        SentenceRecord {
            force: 8.into(),
            speed: 60.into(),
            description: "gale".into(),
            specification: "Twigs break off trees.".into(),
        }
    }

    #[test]
    fn force_sentence() {
        let t = SentenceTemplate::parse(SentenceTemplate::FORCE).unwrap();
        assert_eq!(
            build_sentence(&t, &strong_breeze()).unwrap(),
            "The speed of force 6 is 36 km/h, its description: strong breeze, its specification: Large branches in motion."
        );
    }

    #[test]
    fn speed_sentence() {
        let t = SentenceTemplate::parse(SentenceTemplate::SPEED).unwrap();
        assert_eq!(
            build_sentence(&t, &gale_at_60()).unwrap(),
            "60 km/h speed of wind is in force 8, its description is gale, and here twigs break off trees."
        );
    }

    #[test]
    fn description_sentence_capitalizes() {
        let t = SentenceTemplate::parse(SentenceTemplate::DESCRIPTION).unwrap();
        let mut r = gale_at_60();
        r.speed = 55.into();
        assert_eq!(
            build_sentence(&t, &r).unwrap(),
            "Gale is force 8, from 55 km/h, its specification: Twigs break off trees."
        );
    }

    #[test]
    fn literal_templates_and_braces() {
        let t = SentenceTemplate::parse("no placeholders here").unwrap();
        assert_eq!(build_sentence(&t, &gale_at_60()).unwrap(), "no placeholders here");
        let t = SentenceTemplate::parse("{{force}} = {force}").unwrap();
        assert_eq!(build_sentence(&t, &gale_at_60()).unwrap(), "{force} = 8");
    }

    #[test]
    fn bad_templates() {
        assert_eq!(
            SentenceTemplate::parse("{gust}"),
            Err(TemplateError::UnknownField("gust".into()))
        );
        assert!(matches!(SentenceTemplate::parse("{force:loud}"), Err(TemplateError::UnknownModifier(_))));
        assert_eq!(SentenceTemplate::parse("ab {force"), Err(TemplateError::Unclosed(3)));
        assert_eq!(SentenceTemplate::parse("a}b"), Err(TemplateError::Unmatched(1)));
        let e: LookupError = TemplateError::UnknownField("gust".into()).into();
        assert_eq!(e.kind, crate::lookup::ErrorKind::Value);
    }

    #[test]
    fn fractional_speed() {
        let t = SentenceTemplate::parse("{speed} km/h").unwrap();
        let mut r = gale_at_60();
        r.speed = 60.5.into();
        assert_eq!(build_sentence(&t, &r).unwrap(), "60.5 km/h");
    }
}
