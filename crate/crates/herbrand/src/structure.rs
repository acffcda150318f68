//! The structure-spec file format. The printer is `StructureSpec`'s `Display`.

use herbrand_core::semantics::{CmpOp, Cond, Expr, FunDef, StructureSpec};
use herbrand_core::syntax::{name, Name};
use lexpr::Value;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::sexp::{arity, bad, form, list, nat, read_all, symbol, PResult};

pub fn parse_expr(v: &Value) -> PResult<Expr> {
    if let Some(n) = v.as_i64() {
        return Ok(Expr::int(n));
    }
    if let Some(n) = v.as_u64() {
        return Ok(Expr::Num(BigRational::from_integer(BigInt::from(n))));
    }
    if let Some(s) = v.as_symbol() {
        return Ok(Expr::name(s));
    }
    let Some((head, args)) = form(v) else { return bad("not an expression", v) };
    let args = args.into_iter().map(parse_expr).collect::<PResult<Vec<_>>>()?;
    if matches!(head, "+" | "-" | "*" | "/") {
        if args.len() < 2 {
            return bad(format!("`{}` needs two or more operands", head), v);
        }
        let mut it = args.into_iter();
        let first = it.next().expect("non-empty");
        return Ok(it.fold(first, |acc, b| Expr::bin(head, acc, b).expect("arithmetic operator")));
    }
    Ok(Expr::call(head, args))
}

pub fn parse_cond(v: &Value) -> PResult<Cond> {
    match v.as_symbol() {
        Some("true") => return Ok(Cond::Bool(true)),
        Some("false") => return Ok(Cond::Bool(false)),
        _ => {}
    }
    let Some((head, args)) = form(v) else { return bad("not a condition", v) };
    if let Some(op) = CmpOp::parse(head) {
        arity(head, &args, 2, v)?;
        return Ok(Cond::Cmp(op, parse_expr(args[0])?, parse_expr(args[1])?));
    }
    match head {
        "not" => {
            arity(head, &args, 1, v)?;
            Ok(Cond::Not(Box::new(parse_cond(args[0])?)))
        }
        "and" => Ok(Cond::And(args.into_iter().map(parse_cond).collect::<PResult<_>>()?)),
        "or" => Ok(Cond::Or(args.into_iter().map(parse_cond).collect::<PResult<_>>()?)),
        _ => bad(format!("unknown condition `{}`", head), v),
    }
}

fn params(v: &Value) -> PResult<Vec<Name>> {
    list(v)?.into_iter().map(|p| Ok(name(symbol(p)?))).collect()
}

fn parse_fun(args: &[&Value], v: &Value) -> PResult<FunDef> {
    match args.len() {
        2 => Ok(FunDef::Expr { params: params(args[0])?, body: parse_expr(args[1])? }),
        1 => match form(args[0]) {
            Some(("iterate", a)) if a.len() == 2 => Ok(FunDef::Iterate { of: name(symbol(a[0])?), times: nat(a[1])? }),
            Some(("table", rows)) => {
                let mut entries = Vec::new();
                let mut default = None;
                for row in rows {
                    if let Some(("default", d)) = form(row) {
                        arity("default", &d, 1, row)?;
                        default = Some(nat(d[0])?);
                        continue;
                    }
                    let r = list(row)?;
                    if r.len() != 2 {
                        return bad("a table row is ((args...) value)", row);
                    }
                    let xs = list(r[0])?.into_iter().map(nat).collect::<PResult<Vec<_>>>()?;
                    entries.push((xs, nat(r[1])?));
                }
                match default {
                    Some(default) => Ok(FunDef::Table { entries, default }),
                    None => bad("a table needs (default n)", v),
                }
            }
            _ => bad("expected (fun f (params) body), (fun f (table ...)) or (fun f (iterate h n))", v),
        },
        _ => bad("expected (fun f (params) body)", v),
    }
}

pub fn parse_structure(src: &str) -> PResult<StructureSpec> {
    let mut spec = StructureSpec::default();
    for v in read_all(src)? {
        let Some((head, args)) = form(&v) else { return bad("expected a structure item", &v) };
        if args.is_empty() {
            return bad("missing symbol", &v);
        }
        let sym = name(symbol(args[0])?);
        match head {
            "const" => {
                arity(head, &args, 2, &v)?;
                spec.consts.push((sym, parse_expr(args[1])?));
            }
            "fun" => spec.funs.push((sym, parse_fun(&args[1..], &v)?)),
            "seq" => {
                arity(head, &args, 3, &v)?;
                let p = params(args[1])?;
                if p.len() != 1 {
                    return bad("a sequence has one index parameter", &v);
                }
                spec.seqs.push((sym, p[0].clone(), parse_expr(args[2])?));
            }
            "rel" => {
                arity(head, &args, 3, &v)?;
                spec.rels.push((sym, params(args[1])?, parse_cond(args[2])?));
            }
            _ => return bad(format!("unknown item `{}`", head), &v),
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use herbrand_core::example::default_spec;
    use herbrand_core::proof::metastability_signature;
    use herbrand_core::semantics::Structure;

    const DEFAULT: &str = "(const k 2) (fun g (n) (+ n 1)) (seq a (n) (/ 1 (+ n 1))) (rel P (v w l) (<= (- (a v) (a w)) (/ l (+ k 1))))";

    #[test]
    fn default_structure_text() {
        let spec = parse_structure(DEFAULT).unwrap();
        assert_eq!(spec, default_spec(2));
        let printed = spec.to_string();
        assert_eq!(parse_structure(&printed).unwrap(), spec);
        Structure::new(&metastability_signature(), &spec).unwrap();
    }

    #[test]
    fn other_function_forms() {
        let src = "(fun g (table ((0) 3) ((1) 5) (default 0))) (fun h (iterate g 2)) (const k -1)";
        let spec = parse_structure(src).unwrap();
        assert_eq!(spec.funs.len(), 2);
        assert_eq!(parse_structure(&spec.to_string()).unwrap(), spec);
        assert!(parse_structure("(fun g (table ((0) 3)))").is_err());
        assert!(parse_structure("(seq a (n m) n)").is_err());
        assert!(parse_structure("(rel P (v) (~ v 1))").is_err());
        assert!(parse_structure("(widget x)").is_err());
    }
}
