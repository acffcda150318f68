//! Terms, formulas and primitive recursive derivations as s-expressions.
//!
//! The printers are the `Display` impls of the core types; the parsers here
//! invert them. In a term a bare symbol is a constant when the signature has
//! it with arity 0 and a variable otherwise; a natural number `n` stands for
//! the numeral `S...S0`.

use std::sync::Arc;

use herbrand_core::pr::{PrDerivation, PrRegistry};
use herbrand_core::proof::EqAxiom;
use herbrand_core::syntax::{name, Formula, SigTerm, Signature};
use lexpr::Value;

use crate::sexp::{arity, bad, form, nat, read_one, symbol, PResult};

const KEYWORDS: &[&str] = &["not", "or", "and", "implies", "iff", "forall", "exists", "=", "<", "<="];

pub fn parse_term(sig: &Signature, v: &Value) -> PResult<SigTerm> {
    if let Some(n) = v.as_u64() {
        return Ok(SigTerm::numeral(n));
    }
    if let Some(s) = v.as_symbol() {
        return match sig.function(s) {
            Some(f) if f.arity == 0 => Ok(SigTerm::constant(s)),
            Some(f) => bad(format!("`{}` expects {} arguments", s, f.arity), v),
            None if KEYWORDS.contains(&s) || sig.relation(s).is_some() => bad("not a term", v),
            None => Ok(SigTerm::var(s)),
        };
    }
    let Some((head, args)) = form(v) else { return bad("not a term", v) };
    let Some(f) = sig.function(head) else { return bad(format!("unknown function symbol `{}`", head), v) };
    if f.arity == 0 {
        return bad(format!("`{}` is a constant", head), v);
    }
    arity(head, &args, f.arity, v)?;
    let args = args.into_iter().map(|a| parse_term(sig, a)).collect::<PResult<Vec<_>>>()?;
    Ok(SigTerm::app(head, args))
}

fn variable<'a>(sig: &Signature, v: &'a Value) -> PResult<&'a str> {
    let s = symbol(v)?;
    if KEYWORDS.contains(&s) || sig.function(s).is_some() || sig.relation(s).is_some() {
        return bad("expected a variable", v);
    }
    Ok(s)
}

/// Right-nested `(op a b c)` as `(op a (op b c))`.
fn nested(sig: &Signature, args: &[&Value], whole: &Value, f: fn(Formula, Formula) -> Formula) -> PResult<Formula> {
    if args.len() < 2 {
        return bad("needs at least two arguments", whole);
    }
    let mut parts = args.iter().map(|a| parse_formula(sig, a)).collect::<PResult<Vec<_>>>()?;
    let mut acc = parts.pop().expect("two or more");
    while let Some(p) = parts.pop() {
        acc = f(p, acc);
    }
    Ok(acc)
}

pub fn parse_formula(sig: &Signature, v: &Value) -> PResult<Formula> {
    if let Some(s) = v.as_symbol() {
        return match sig.relation(s) {
            Some(r) if r.arity == 0 => Ok(Formula::atom(s, Vec::new())),
            _ => bad("not a formula", v),
        };
    }
    let Some((head, args)) = form(v) else { return bad("not a formula", v) };
    let term = |a: &Value| parse_term(sig, a);
    let binary_terms = |f: fn(SigTerm, SigTerm) -> Formula| -> PResult<Formula> {
        arity(head, &args, 2, v)?;
        Ok(f(term(args[0])?, term(args[1])?))
    };
    let quant = |f: fn(&str, Formula) -> Formula| -> PResult<Formula> {
        arity(head, &args, 2, v)?;
        Ok(f(variable(sig, args[0])?, parse_formula(sig, args[1])?))
    };
    match head {
        "not" => {
            arity(head, &args, 1, v)?;
            Ok(Formula::not(parse_formula(sig, args[0])?))
        }
        "or" => nested(sig, &args, v, Formula::or),
        "and" => nested(sig, &args, v, Formula::and),
        "implies" => {
            arity(head, &args, 2, v)?;
            Ok(Formula::implies(parse_formula(sig, args[0])?, parse_formula(sig, args[1])?))
        }
        "iff" => {
            arity(head, &args, 2, v)?;
            Ok(Formula::iff(parse_formula(sig, args[0])?, parse_formula(sig, args[1])?))
        }
        "forall" => quant(Formula::forall),
        "exists" => quant(Formula::exists),
        "=" => binary_terms(Formula::eq),
        "<" => binary_terms(Formula::lt),
        "<=" => binary_terms(Formula::le),
        r => {
            let Some(rel) = sig.relation(r) else { return bad(format!("unknown relation symbol `{}`", r), v) };
            arity(r, &args, rel.arity, v)?;
            let ts = args.into_iter().map(term).collect::<PResult<Vec<_>>>()?;
            Ok(Formula::atom(r, ts))
        }
    }
}

pub fn term_from_str(sig: &Signature, s: &str) -> PResult<SigTerm> {
    parse_term(sig, &read_one(s)?)
}

pub fn formula_from_str(sig: &Signature, s: &str) -> PResult<Formula> {
    parse_formula(sig, &read_one(s)?)
}

/// `zero`, `(zero n)`, `succ`, `(proj i n)`, `(comp f g...)`,
/// `(primrec base step)`, or the name of a registered symbol.
pub fn parse_pr(reg: &PrRegistry, v: &Value) -> PResult<Arc<PrDerivation>> {
    let d = parse_pr_raw(reg, v)?;
    match d.validate() {
        Ok(_) => Ok(d),
        Err(e) => bad(e.to_string(), v),
    }
}

fn parse_pr_raw(reg: &PrRegistry, v: &Value) -> PResult<Arc<PrDerivation>> {
    if let Some(s) = v.as_symbol() {
        return match s {
            "zero" => Ok(Arc::new(PrDerivation::Zero(0))),
            "succ" => Ok(Arc::new(PrDerivation::Succ)),
            _ => match reg.reference(s) {
                Ok(d) => Ok(d),
                Err(_) => bad(format!("unknown primitive recursive symbol `{}`", s), v),
            },
        };
    }
    let Some((head, args)) = form(v) else { return bad("not a derivation", v) };
    match head {
        "zero" => {
            arity(head, &args, 1, v)?;
            Ok(Arc::new(PrDerivation::Zero(nat(args[0])? as usize)))
        }
        "proj" => {
            arity(head, &args, 2, v)?;
            Ok(PrDerivation::proj(nat(args[0])? as usize, nat(args[1])? as usize))
        }
        "comp" => {
            if args.is_empty() {
                return bad("`comp` needs a function", v);
            }
            let f = parse_pr_raw(reg, args[0])?;
            let gs = args[1..].iter().map(|g| parse_pr_raw(reg, g)).collect::<PResult<Vec<_>>>()?;
            Ok(PrDerivation::comp(f, gs))
        }
        "primrec" => {
            arity(head, &args, 2, v)?;
            Ok(PrDerivation::primrec(parse_pr_raw(reg, args[0])?, parse_pr_raw(reg, args[1])?))
        }
        _ => bad(format!("unknown derivation former `{}`", head), v),
    }
}

pub fn pr_from_str(reg: &PrRegistry, s: &str) -> PResult<Arc<PrDerivation>> {
    parse_pr(reg, &read_one(s)?)
}

/// `refl`, `sym`, `trans`, `(fun f)`, `(rel R)`.
pub fn parse_eq_axiom(v: &Value) -> PResult<EqAxiom> {
    if let Some(s) = v.as_symbol() {
        return match s {
            "refl" => Ok(EqAxiom::Refl),
            "sym" => Ok(EqAxiom::Sym),
            "trans" => Ok(EqAxiom::Trans),
            _ => bad("unknown equality axiom", v),
        };
    }
    match form(v) {
        Some(("fun", a)) if a.len() == 1 => Ok(EqAxiom::Fun(name(symbol(a[0])?))),
        Some(("rel", a)) if a.len() == 1 => Ok(EqAxiom::Rel(name(symbol(a[0])?))),
        _ => bad("unknown equality axiom", v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use herbrand_core::pr::default_roster;
    use herbrand_core::proof::metastability_signature;
    use num_bigint::BigUint;

    #[test]
    fn formulas_round_trip() {
        let sig = metastability_signature();
        for s in [
            "(forall x (or (not (<= x t)) (P x (g x) k)))",
            "(exists m (P m (g m) (S 0)))",
            "(and (= (+ x 1) (S x)) (not (< x 0)))",
            "(or (not (P 0 y (S k))) (P y y y))",
        ] {
            let f = formula_from_str(&sig, s).unwrap();
            let printed = f.to_string();
            assert_eq!(formula_from_str(&sig, &printed).unwrap(), f, "{}", s);
        }
        let f = formula_from_str(&sig, "(forall x (or (not (<= x t)) (P x x x)))").unwrap();
        assert!(f.as_forall_le().is_some());
        assert_eq!(f.to_string(), "(forall x (or (not (<= x t)) (P x x x)))");
    }

    #[test]
    fn numbers_are_numerals() {
        let sig = metastability_signature();
        assert_eq!(term_from_str(&sig, "2").unwrap(), SigTerm::numeral(2));
        assert_eq!(term_from_str(&sig, "(S (S 0))").unwrap(), SigTerm::numeral(2));
        assert_eq!(term_from_str(&sig, "k").unwrap(), SigTerm::constant("k"));
        assert_eq!(term_from_str(&sig, "y").unwrap(), SigTerm::var("y"));
    }

    #[test]
    fn rejects_bad_input() {
        let sig = metastability_signature();
        for s in ["(g)", "(g 1 2)", "(h 1)", "(P 1 2)", "(forall (g x) (P x x x))", "(not)", "(or (P 0 0 0))", "P"] {
            assert!(formula_from_str(&sig, s).is_err(), "{}", s);
        }
        assert!(term_from_str(&sig, "forall").is_err());
    }

    #[test]
    fn pr_plus() {
        let reg = default_roster();
        let d = pr_from_str(&reg, "(primrec (proj 1 1) (comp succ (proj 3 3)))").unwrap();
        assert_eq!(d.arity(), 2);
        let v = d.eval(&[BigUint::from(2u32), BigUint::from(3u32)]).unwrap();
        assert_eq!(v, BigUint::from(5u32));
        assert_eq!(d.to_string(), "(primrec (proj 1 1) (comp succ (proj 3 3)))");
        assert!(pr_from_str(&reg, "(comp succ (proj 1 2) (proj 2 2))").is_err());
        assert!(pr_from_str(&reg, "(proj 3 2)").is_err());
        let r = pr_from_str(&reg, "(comp + (proj 1 1) (proj 1 1))").unwrap();
        assert_eq!(r.eval(&[BigUint::from(4u32)]).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn equality_axioms() {
        for s in ["refl", "sym", "trans", "(fun g)", "(rel P)"] {
            let a = parse_eq_axiom(&read_one(s).unwrap()).unwrap();
            assert_eq!(a.to_string(), s);
        }
    }
}
