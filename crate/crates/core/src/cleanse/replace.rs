//! Literal find-and-replace with word-processor escapes.

use super::ScriptError;

/// Expands `^p` (paragraph break), `^t` (tab) and `^^` (a literal caret).
pub fn expand_escapes(s: &str) -> Result<String, ScriptError> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '^' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('p') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('^') => out.push('^'),
            Some(other) => {
                return Err(ScriptError::InvalidPattern(format!(
                    "unknown escape ^{other} in {s:?}"
                )))
            }
            None => {
                return Err(ScriptError::InvalidPattern(format!(
                    "dangling ^ at the end of {s:?}"
                )))
            }
        }
    }
    Ok(out)
}

/// Inverse of [`expand_escapes`], for audit descriptions.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\n' => out.push_str("^p"),
            '\t' => out.push_str("^t"),
            '^' => out.push_str("^^"),
            c => out.push(c),
        }
    }
    out
}

/// Replaces every non-overlapping occurrence of `pattern`, scanning left to
/// right, and returns the new text with the number of replacements.
/// Both `pattern` and `replacement` are taken in escaped form.
pub fn replace_all(
    text: &str,
    pattern: &str,
    replacement: &str,
) -> Result<(String, usize), ScriptError> {
    let pattern = expand_escapes(pattern)?;
    let replacement = expand_escapes(replacement)?;
    replace_literal(text, &pattern, &replacement)
}

/// [`replace_all`] on already-expanded strings.
pub fn replace_literal(
    text: &str,
    pattern: &str,
    replacement: &str,
) -> Result<(String, usize), ScriptError> {
    if pattern.is_empty() {
        return Err(ScriptError::InvalidPattern("empty pattern".into()));
    }
    let mut out = String::with_capacity(text.len());
    let mut count = 0;
    let mut rest = text;
    while let Some(at) = rest.find(pattern) {
        out.push_str(&rest[..at]);
        out.push_str(replacement);
        rest = &rest[at + pattern.len()..];
        count += 1;
    }
    out.push_str(rest);
    Ok((out, count))
}
