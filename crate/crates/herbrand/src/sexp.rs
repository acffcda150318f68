//! Reading s-expressions, with the small accessors the formats share.

use lexpr::Value;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("read error: {0}")]
    Read(String),
    #[error("{message}: `{form}`")]
    Form { message: String, form: String },
}

pub type PResult<T> = Result<T, ParseError>;

pub fn bad<T>(message: impl Into<String>, form: &Value) -> PResult<T> {
    Err(ParseError::Form { message: message.into(), form: form.to_string() })
}

/// Every top-level datum of `src`. `;` starts a comment.
pub fn read_all(src: &str) -> PResult<Vec<Value>> {
    let mut p = lexpr::Parser::from_str(src);
    let mut out = Vec::new();
    loop {
        match p.next_value() {
            Ok(Some(v)) => out.push(v),
            Ok(None) => return Ok(out),
            Err(e) => return Err(ParseError::Read(e.to_string())),
        }
    }
}

/// Exactly one datum.
pub fn read_one(src: &str) -> PResult<Value> {
    let mut all = read_all(src)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => Err(ParseError::Read(format!("expected one expression, found {}", n))),
    }
}

/// Elements of a proper list; `()` is the empty list.
pub fn list(v: &Value) -> PResult<Vec<&Value>> {
    if v.is_null() {
        return Ok(Vec::new());
    }
    match v.list_iter() {
        Some(it) if v.is_list() => Ok(it.collect()),
        _ => bad("expected a list", v),
    }
}

/// `(head args...)` with a symbol head.
pub fn form(v: &Value) -> Option<(&str, Vec<&Value>)> {
    if !v.is_cons() || !v.is_list() {
        return None;
    }
    let items: Vec<&Value> = v.list_iter()?.collect();
    let head = items.first()?.as_symbol()?;
    Some((head, items[1..].to_vec()))
}

pub fn symbol(v: &Value) -> PResult<&str> {
    match v.as_symbol() {
        Some(s) => Ok(s),
        None => bad("expected a symbol", v),
    }
}

pub fn nat(v: &Value) -> PResult<u64> {
    match v.as_u64() {
        Some(n) => Ok(n),
        None => bad("expected a natural number", v),
    }
}

pub fn arity(head: &str, args: &[&Value], n: usize, whole: &Value) -> PResult<()> {
    if args.len() == n {
        Ok(())
    } else {
        bad(format!("`{}` takes {} arguments, got {}", head, n, args.len()), whole)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_forms_and_comments() {
        let vs = read_all("(a b) ; note\n(c (d 1))\n").unwrap();
        assert_eq!(vs.len(), 2);
        let (h, args) = form(&vs[1]).unwrap();
        assert_eq!(h, "c");
        assert_eq!(nat(list(args[0]).unwrap()[1]).unwrap(), 1);
        assert!(read_one("(a) (b)").is_err());
        assert!(read_all("(a").is_err());
        assert!(list(&read_one("(a . b)").unwrap()).is_err());
        assert!(list(&read_one("()").unwrap()).unwrap().is_empty());
    }
}
