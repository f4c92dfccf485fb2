//! Recursive-descent parser and canonical printer for formulas.
//!
//! ```text
//! formula  := '=' expr
//! expr     := additive ('&' additive)*
//! additive := primary (('+' | '-') primary)*
//! primary  := number | string | cellref | cellref ':' cellref
//!           | name '(' [expr (',' expr)*] ')' | '(' expr ')'
//! ```
//!
//! Strings are double-quoted with `""` standing for one quote. Function
//! names and cell references are case-insensitive. Spaces between tokens
//! are ignored.

use std::fmt;

use thiserror::Error;

use super::{CellRef, RangeRef, RefError};
use crate::table::format_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Index,
    Match,
    Left,
    Right,
    Len,
    Upper,
}

impl Function {
    pub const ALL: [Function; 6] = [
        Function::Index,
        Function::Match,
        Function::Left,
        Function::Right,
        Function::Len,
        Function::Upper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Index => "INDEX",
            Function::Match => "MATCH",
            Function::Left => "LEFT",
            Function::Right => "RIGHT",
            Function::Len => "LEN",
            Function::Upper => "UPPER",
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Function::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
    }

    /// Inclusive bounds on the argument count.
    pub fn arity(self) -> (usize, usize) {
        match self {
            Function::Index => (2, 2),
            Function::Match => (2, 3),
            Function::Left | Function::Right => (1, 2),
            Function::Len | Function::Upper => (1, 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Text(String),
    Ref(CellRef),
    Range(RangeRef),
    Call(Function, Vec<Expr>),
    Concat(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// `=` followed by the canonical rendering.
    pub fn to_formula(&self) -> String {
        format!("={self}")
    }

    fn is_concat(&self) -> bool {
        matches!(self, Expr::Concat(..))
    }

    fn is_additive(&self) -> bool {
        matches!(self, Expr::Add(..) | Expr::Sub(..))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool| {
            if wrap {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Number(n) => f.write_str(&format_number(*n)),
            Expr::Text(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            Expr::Ref(r) => write!(f, "{r}"),
            Expr::Range(r) => write!(f, "{r}"),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Concat(l, r) => {
                paren(f, l, false)?;
                f.write_str("&")?;
                paren(f, r, r.is_concat())
            }
            Expr::Add(l, r) | Expr::Sub(l, r) => {
                paren(f, l, l.is_concat())?;
                f.write_str(if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                paren(f, r, r.is_concat() || r.is_additive())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at offset {offset}: expected {}, found {}", expected.join(" or "), found.map_or("end of input".to_string(), |c| format!("{c:?}")))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: Option<char>,
    },
    #[error("unknown function {name:?} at offset {offset}")]
    UnknownFunction { offset: usize, name: String },
    #[error("{name} takes {min} to {max} arguments, got {found} (offset {offset})")]
    Arity {
        offset: usize,
        name: &'static str,
        min: usize,
        max: usize,
        found: usize,
    },
    #[error("{error} at offset {offset}")]
    Reference { offset: usize, error: RefError },
}

impl FormulaError {
    pub fn offset(&self) -> usize {
        match self {
            FormulaError::Syntax { offset, .. }
            | FormulaError::UnknownFunction { offset, .. }
            | FormulaError::Arity { offset, .. }
            | FormulaError::Reference { offset, .. } => *offset,
        }
    }
}

const PRIMARY: &[&str] = &["number", "string", "cell reference", "function call", "'('"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &[&'static str]) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax {
            offset: self.pos,
            expected: expected.to_vec(),
            found: self.peek(),
        })
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if pred(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<Expr, FormulaError> {
        let mut left = self.additive()?;
        while self.eat('&') {
            let right = self.additive()?;
            left = Expr::Concat(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn additive(&mut self) -> Result<Expr, FormulaError> {
        let mut left = self.primary()?;
        loop {
            if self.eat('+') {
                left = Expr::Add(Box::new(left), Box::new(self.primary()?));
            } else if self.eat('-') {
                left = Expr::Sub(Box::new(left), Box::new(self.primary()?));
            } else {
                return Ok(left);
            }
        }
    }

    fn primary(&mut self) -> Result<Expr, FormulaError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => self.number(),
            Some('"') => self.string(),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.fail(&["')'"]);
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => self.name(),
            _ => self.fail(PRIMARY),
        }
    }

    fn number(&mut self) -> Result<Expr, FormulaError> {
        let start = self.pos;
        self.take_while(|c| c.is_ascii_digit());
        if self.peek() == Some('.') {
            self.pos += 1;
            if self.take_while(|c| c.is_ascii_digit()).is_empty() {
                return self.fail(&["digit"]);
            }
        }
        let n: f64 = self.src[start..self.pos].parse().expect("digits parse");
        if !n.is_finite() {
            self.pos = start;
            return self.fail(&["finite number"]);
        }
        Ok(Expr::Number(n))
    }

    fn string(&mut self) -> Result<Expr, FormulaError> {
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return self.fail(&["'\"'"]),
                Some('"') => {
                    self.pos += 1;
                    if self.peek() == Some('"') {
                        self.pos += 1;
                        out.push('"');
                    } else {
                        return Ok(Expr::Text(out));
                    }
                }
                Some(c) => {
                    self.pos += c.len_utf8();
                    out.push(c);
                }
            }
        }
    }

    fn cell(&mut self, start: usize, letters: &str) -> Result<CellRef, FormulaError> {
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return self.fail(&["row number", "'('"]);
        }
        format!("{letters}{digits}")
            .parse()
            .map_err(|error| FormulaError::Reference { offset: start, error })
    }

    fn name(&mut self) -> Result<Expr, FormulaError> {
        let start = self.pos;
        let letters = self.take_while(|c| c.is_ascii_alphabetic());
        if self.peek() == Some('(') {
            self.pos += 1;
            let func = Function::from_name(letters).ok_or_else(|| FormulaError::UnknownFunction {
                offset: start,
                name: letters.to_string(),
            })?;
            let args = self.args()?;
            let (min, max) = func.arity();
            if args.len() < min || args.len() > max {
                return Err(FormulaError::Arity {
                    offset: start,
                    name: func.name(),
                    min,
                    max,
                    found: args.len(),
                });
            }
            return Ok(Expr::Call(func, args));
        }
        let first = self.cell(start, letters)?;
        if self.peek() != Some(':') {
            return Ok(Expr::Ref(first));
        }
        self.pos += 1;
        let second_start = self.pos;
        let letters = self.take_while(|c| c.is_ascii_alphabetic());
        if letters.is_empty() {
            return self.fail(&["cell reference"]);
        }
        let second = self.cell(second_start, letters)?;
        RangeRef::new(first, second)
            .map(Expr::Range)
            .map_err(|error| FormulaError::Reference { offset: start, error })
    }

    fn args(&mut self) -> Result<Vec<Expr>, FormulaError> {
        let mut args = Vec::new();
        if self.eat(')') {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat(')') {
                return Ok(args);
            }
            if !self.eat(',') {
                return self.fail(&["','", "')'"]);
            }
        }
    }
}

/// Parses `=expr`.
pub fn parse_formula(text: &str) -> Result<Expr, FormulaError> {
    let mut p = Parser { src: text, pos: 0 };
    if !p.eat('=') {
        return p.fail(&["'='"]);
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return p.fail(&["'&'", "'+'", "'-'", "end of input"]);
    }
    Ok(e)
}
