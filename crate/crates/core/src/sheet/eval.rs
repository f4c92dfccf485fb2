use super::{Expr, Function, Sheet};
use crate::lookup::{self, LookupError, MatchType};
use crate::style::upper_simple;
use crate::table::{format_number, CellValue};

/// Evaluates a parsed formula against a sheet snapshot.
///
/// Arguments are evaluated left to right and the first error met is the
/// result, so the leftmost innermost failure wins.
pub fn evaluate(expr: &Expr, sheet: &Sheet) -> Result<CellValue, LookupError> {
    match expr {
        Expr::Number(n) => Ok(CellValue::Number(*n)),
        Expr::Text(s) => Ok(CellValue::text(s.as_str())),
        Expr::Ref(r) => Ok(sheet.get(*r).clone()),
        Expr::Range(r) => Err(LookupError::value(format!("range {r} used as a single value"))),
        Expr::Concat(l, r) => {
            let l = evaluate(l, sheet)?;
            let r = evaluate(r, sheet)?;
            Ok(CellValue::text(l.to_text() + &r.to_text()))
        }
        Expr::Add(l, r) => arithmetic(l, r, sheet, |a, b| a + b),
        Expr::Sub(l, r) => arithmetic(l, r, sheet, |a, b| a - b),
        Expr::Call(func, args) => call(*func, args, sheet),
    }
}

fn number(v: &CellValue) -> Result<f64, LookupError> {
    match v {
        CellValue::Number(n) => Ok(*n),
        CellValue::Empty => Ok(0.0),
        CellValue::Text(s) => Err(LookupError::value(format!("{s:?} is not a number"))),
    }
}

fn arithmetic(
    l: &Expr,
    r: &Expr,
    sheet: &Sheet,
    op: impl Fn(f64, f64) -> f64,
) -> Result<CellValue, LookupError> {
    let a = number(&evaluate(l, sheet)?)?;
    let b = number(&evaluate(r, sheet)?)?;
    CellValue::number(op(a, b)).ok_or_else(|| LookupError::value("arithmetic overflow"))
}

fn vector(expr: &Expr, sheet: &Sheet) -> Result<Vec<CellValue>, LookupError> {
    match expr {
        Expr::Range(r) => Ok(sheet.range_values(r)),
        other => Ok(vec![evaluate(other, sheet)?]),
    }
}

/// Character count for `LEFT`/`RIGHT`: integral part, must not be negative.
fn char_count(v: &CellValue) -> Result<usize, LookupError> {
    let n = number(v)?.trunc();
    if n < 0.0 {
        return Err(LookupError::value(format!(
            "character count {} is negative",
            format_number(n)
        )));
    }
    Ok(n.min(usize::MAX as f64) as usize)
}

fn call(func: Function, args: &[Expr], sheet: &Sheet) -> Result<CellValue, LookupError> {
    let text_arg = |i: usize| evaluate(&args[i], sheet).map(|v| v.to_text());
    match func {
        Function::Index => {
            let v = vector(&args[0], sheet)?;
            let pos = number(&evaluate(&args[1], sheet)?)?;
            lookup::index(&v, pos)
        }
        Function::Match => {
            let needle = evaluate(&args[0], sheet)?;
            let hay = vector(&args[1], sheet)?;
            let mtype = match args.get(2) {
                Some(e) => MatchType::from_code(number(&evaluate(e, sheet)?)?)?,
                None => MatchType::default(),
            };
            lookup::match_with(mtype, &needle, &hay).map(|p| CellValue::Number(p as f64))
        }
        Function::Left | Function::Right => {
            let s = text_arg(0)?;
            let n = match args.get(1) {
                Some(e) => char_count(&evaluate(e, sheet)?)?,
                None => 1,
            };
            let len = s.chars().count();
            let out: String = if func == Function::Left {
                s.chars().take(n).collect()
            } else {
                s.chars().skip(len.saturating_sub(n)).collect()
            };
            Ok(CellValue::text(out))
        }
        Function::Len => Ok(CellValue::Number(text_arg(0)?.chars().count() as f64)),
        Function::Upper => Ok(CellValue::text(text_arg(0)?.chars().map(upper_simple).collect::<String>())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lookup::ErrorKind;

    fn sheet() -> Sheet {
        let mut s = Sheet::new();
        s.bind_table(&fixtures::beaufort_table(), "A1".parse().unwrap(), true)
            .unwrap();
        s.set_cell("F3".parse().unwrap(), 6.into());
        s.set_cell("F8".parse().unwrap(), 60.into());
        s.set_cell("F10".parse().unwrap(), "gale".into());
        s
    }

    fn eval(f: &str) -> Result<CellValue, LookupError> {
        sheet().eval(f).unwrap()
    }

    #[test]
    fn beaufort_formulas() {
        assert_eq!(eval("=MATCH(F3,A2:A14,0)"), Ok(7.into()));
        assert_eq!(eval("=INDEX(B2:B14,MATCH(F3,A2:A14,0))"), Ok(36.into()));
        assert_eq!(eval("=MATCH(F8,B2:B14)"), Ok(9.into()));
        assert_eq!(eval("=INDEX(A2:A14,MATCH(F8,B2:B14))"), Ok(8.into()));
        assert_eq!(eval("=F10"), Ok("gale".into()));
        assert_eq!(eval("=INDEX(D2:D14,MATCH(F10,C2:C14,0))"), Ok("Twigs break off trees.".into()));
        assert_eq!(eval("=UPPER(LEFT(F10))&RIGHT(F10,LEN(F10)-1)"), Ok("Gale".into()));
    }

    #[test]
    fn concat_renders_integers_plainly() {
        assert_eq!(
            eval("=\"The speed of force \"&F3&\" is \"&INDEX(B2:B14,MATCH(F3,A2:A14,0))&\" km/h\""),
            Ok("The speed of force 6 is 36 km/h".into())
        );
        assert_eq!(eval("=1.5&\"\"&Z99"), Ok("1.5".into()));
    }

    #[test]
    fn text_functions() {
        assert_eq!(eval("=LEFT(\"gale\",10)"), Ok("gale".into()));
        assert_eq!(eval("=RIGHT(\"gale\",10)"), Ok("gale".into()));
        assert_eq!(eval("=RIGHT(\"gale\")"), Ok("e".into()));
        assert_eq!(eval("=LEFT(\"gale\",0)"), Ok(CellValue::Empty));
        assert_eq!(eval("=LEN(\"szélcsend\")"), Ok(9.into()));
        assert_eq!(eval("=UPPER(\"orkán\")"), Ok("ORKÁN".into()));
        assert_eq!(eval("=LEN(105)"), Ok(3.into()));
        assert_eq!(eval("=RIGHT(\"\",LEN(\"\")-1)").unwrap_err().kind, ErrorKind::Value);
    }

    #[test]
    fn error_values() {
        assert_eq!(eval("=MATCH(13,A2:A14,0)").unwrap_err().kind, ErrorKind::NA);
        assert_eq!(eval("=INDEX(B2:B14,0)").unwrap_err().kind, ErrorKind::Ref);
        assert_eq!(eval("=F10+1").unwrap_err().kind, ErrorKind::Value);
        assert_eq!(eval("=A2:A14").unwrap_err().kind, ErrorKind::Value);
        assert_eq!(eval("=MATCH(F8,C2:C14)").unwrap_err().kind, ErrorKind::Value);
        assert_eq!(eval("=MATCH(1,A2:A14,0-1)").unwrap_err().kind, ErrorKind::Value);
        assert_eq!(eval("=MATCH(F8,B1:B14)").unwrap_err().kind, ErrorKind::Value);
    }

    #[test]
    fn leftmost_innermost_error_wins() {
        let e = eval("=INDEX(B2:B14,MATCH(99,A2:A14,0))&INDEX(B2:B14,0)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::NA);
        let e = eval("=INDEX(B2:B14,0)&MATCH(99,A2:A14,0)").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Ref);
    }

    #[test]
    fn empty_cells_in_arithmetic_are_zero() {
        assert_eq!(eval("=Z1+2"), Ok(2.into()));
        assert_eq!(eval("=Z1"), Ok(CellValue::Empty));
    }
}
