//! The proof-script file format. See `docs/formats.md` for the grammar.

use herbrand_core::pr::default_roster;
use herbrand_core::proof::Theory;
use herbrand_core::script::{Label, Script, ScriptRule, ScriptStep};
use herbrand_core::syntax::{name, Signature};
use lexpr::Value;

use crate::sexp::{arity, bad, form, nat, read_all, symbol, PResult};
use crate::text::{parse_eq_axiom, parse_formula, parse_pr, parse_term};

pub fn parse_script(src: &str) -> PResult<Script> {
    let items = read_all(src)?;
    let mut theory = None;
    let mut registry = default_roster();
    let mut decls: Vec<(bool, &Value, usize)> = Vec::new();
    let mut gamma_forms: Vec<&Value> = Vec::new();
    let mut step_forms: Vec<&Value> = Vec::new();
    for v in &items {
        let Some((head, args)) = form(v) else { return bad("expected a script item", v) };
        if head != "step" && !step_forms.is_empty() {
            return bad("header items must precede the steps", v);
        }
        match head {
            "theory" => {
                arity(head, &args, 1, v)?;
                if theory.is_some() {
                    return bad("theory given twice", v);
                }
                match Theory::parse(symbol(args[0])?) {
                    Some(t) => theory = Some(t),
                    None => return bad("theory is `pa` or `isigma1`", v),
                }
            }
            "pr" => {
                arity(head, &args, 2, v)?;
                if !decls.is_empty() {
                    return bad("`pr` declarations precede `function` and `relation`", v);
                }
                let d = parse_pr(&registry, args[1])?;
                if let Err(e) = registry.register(symbol(args[0])?, d) {
                    return bad(e.to_string(), v);
                }
            }
            "function" | "relation" => {
                arity(head, &args, 2, v)?;
                symbol(args[0])?;
                decls.push((head == "function", v, nat(args[1])? as usize));
            }
            "gamma" => gamma_forms.extend(args),
            "step" => step_forms.push(v),
            _ => return bad(format!("unknown item `{}`", head), v),
        }
    }
    let mut signature = Signature::arithmetic(registry);
    for (is_fn, v, n) in decls {
        let (_, args) = form(v).expect("checked above");
        let s = symbol(args[0])?;
        let r = if is_fn { signature.add_function(s, n) } else { signature.add_relation(s, n) };
        if let Err(e) = r {
            return bad(e.to_string(), v);
        }
    }
    let gamma = gamma_forms.into_iter().map(|g| parse_formula(&signature, g)).collect::<PResult<Vec<_>>>()?;
    let steps = step_forms.into_iter().map(|s| parse_step(&signature, s)).collect::<PResult<Vec<_>>>()?;
    let Some(theory) = theory else { return Err(crate::sexp::ParseError::Read("missing (theory ...)".into())) };
    Ok(Script { theory, signature, gamma, steps })
}

fn parse_step(sig: &Signature, v: &Value) -> PResult<ScriptStep> {
    let (_, args) = form(v).expect("a step form");
    if args.len() != 2 && args.len() != 3 {
        return bad("expected (step LABEL RULE [FORMULA])", v);
    }
    let label = nat(args[0])?;
    let rule = parse_rule(sig, args[1])?;
    let formula = match args.get(2) {
        Some(f) => Some(parse_formula(sig, f)?),
        None => None,
    };
    Ok(ScriptStep { label, rule, formula })
}

fn parse_rule(sig: &Signature, v: &Value) -> PResult<ScriptRule> {
    use ScriptRule::*;
    let Some((head, a)) = form(v) else { return bad("expected a rule", v) };
    let n = a.len();
    let lab = |i: usize| -> PResult<Label> { nat(a[i]) };
    let term = |i: usize| parse_term(sig, a[i]);
    let fml = |i: usize| parse_formula(sig, a[i]);
    let var = |i: usize| -> PResult<_> { Ok(name(symbol(a[i])?)) };
    let want = |k: usize| arity(head, &a, k, v);
    Ok(match (head, n) {
        ("em", 0) => Em(None),
        ("em", 1) => Em(Some(fml(0)?)),
        ("subst", 1) => Subst(term(0)?, None),
        ("subst", 2) => Subst(term(0)?, Some(fml(1)?)),
        ("equality", 1) => Equality(parse_eq_axiom(a[0])?),
        ("arith", 1) => Arith(name(symbol(a[0])?)),
        ("gamma", 1) => Gamma(nat(a[0])? as usize),
        ("induction", 0) => Induction(None),
        ("induction", 2) => Induction(Some((var(0)?, fml(1)?))),
        ("or-intro", 1) => OrIntro(lab(0)?, None),
        ("or-intro", 2) => OrIntro(lab(0)?, Some(fml(1)?)),
        ("forall-intro", 1) => ForallIntro(lab(0)?, None),
        ("forall-intro", 2) => ForallIntro(lab(0)?, Some(var(1)?)),
        ("contract" | "assoc" | "commute" | "permute" | "dn-intro" | "dn-elim" | "assoc-left", _) => {
            want(1)?;
            let l = lab(0)?;
            match head {
                "contract" => Contract(l),
                "assoc" => Assoc(l),
                "commute" => Commute(l),
                "permute" => Permute(l),
                "dn-intro" => DnIntro(l),
                "dn-elim" => DnElim(l),
                _ => AssocLeft(l),
            }
        }
        ("cut" | "mp" | "conj", _) => {
            want(2)?;
            let (i, j) = (lab(0)?, lab(1)?);
            match head {
                "cut" => Cut(i, j),
                "mp" => Mp(i, j),
                _ => Conj(i, j),
            }
        }
        ("inst", _) => {
            want(2)?;
            Inst(lab(0)?, term(1)?)
        }
        ("inst-front", _) => {
            want(2)?;
            InstFront(lab(0)?, term(1)?)
        }
        ("gen", _) => {
            want(2)?;
            Gen(lab(0)?, var(1)?)
        }
        ("exists-intro", _) => {
            want(4)?;
            ExistsIntro(lab(0)?, var(1)?, fml(2)?, term(3)?)
        }
        _ => return bad(format!("unknown rule `{}` with {} arguments", head, n), v),
    })
}

/// Prints a script; `parse_script` reads it back to an equal script.
pub fn write_script(s: &Script) -> String {
    let mut out = format!("(theory {})\n", s.theory.tag());
    let roster = default_roster();
    for (n, d) in s.signature.registry().iter() {
        if !roster.contains(n) {
            out.push_str(&format!("(pr {} {})\n", n, d));
        }
    }
    for f in s.signature.extra_functions() {
        out.push_str(&format!("(function {} {})\n", f.name, f.arity));
    }
    for r in s.signature.extra_relations() {
        out.push_str(&format!("(relation {} {})\n", r.name, r.arity));
    }
    if !s.gamma.is_empty() {
        out.push_str("(gamma");
        for g in &s.gamma {
            out.push_str(&format!("\n  {}", g));
        }
        out.push_str(")\n");
    }
    for st in &s.steps {
        match &st.formula {
            Some(f) => out.push_str(&format!("(step {} {}\n  {})\n", st.label, st.rule, f)),
            None => out.push_str(&format!("(step {} {})\n", st.label, st.rule)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use herbrand_core::proof::check_proof;
    use herbrand_core::script::expand;

    const SMALL: &str = "
(theory isigma1)
(pr double (comp + (proj 1 1) (proj 1 1)))
(relation P 1)
(gamma (forall x (P x)))
; instantiate the axiom
(step 10 (gamma 0))
(step 11 (inst 10 (double 3)) (P (double (S (S (S 0))))))
(step 12 (em (P 0)))
(step 13 (forall-intro 12)
  (or (forall y (not (P 0))) (P 0)))
";

    #[test]
    fn small_script() {
        let s = parse_script(SMALL).unwrap();
        assert_eq!(s.steps.len(), 4);
        assert!(s.signature.function("double").is_some());
        let e = expand(&s).unwrap();
        check_proof(e.proof).unwrap();
        let again = parse_script(&write_script(&s)).unwrap();
        assert_eq!(again.steps, s.steps);
        assert_eq!(again.gamma, s.gamma);
        assert!(again.signature.function("double").is_some());
    }

    #[test]
    fn script_errors() {
        assert!(parse_script("(step 0 (em (P 0)))").is_err());
        assert!(parse_script("(theory isigma1) (step 0 (em)) (relation P 1)").is_err());
        assert!(parse_script("(theory zf)").is_err());
        assert!(parse_script("(theory pa) (step 0 (frobnicate 1))").is_err());
        assert!(parse_script("(theory pa) (step 0 (cut 1))").is_err());
        assert!(parse_script("(theory pa) (relation P 1) (function P 1)").is_err());
        let s = parse_script("(theory pa) (relation P 1) (step 0 (commute 5))").unwrap();
        assert!(expand(&s).is_err());
    }
}
