//! The metastability example: its structures, the hand-built witness terms
//! `r, a, q, m`, their expected normal forms, and a bounded structural
//! comparison of normal forms.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::omega::{argmax_b, decompose, numeral, recursor, CaseConst, OFormula, OmegaError, Seq, Term, Type, Var};
use crate::proof::metastability_signature;
use crate::rewrite::{analyze_spine, Engine, RewriteError, SpineHead};
use crate::semantics::{Cond, CmpOp, Expr, FunDef, SemError, Structure, StructureSpec};
use crate::syntax::{name, Formula, SigTerm};

/// `P(v,w,l)` iff `a_v - a_w <= l/(k+1)`, with `g` and `a` given as expressions in `n`.
pub fn metastability_spec(k: u64, g: Expr, a: Expr) -> StructureSpec {
    let p = |v: &str| Expr::name(v);
    let diff = Expr::bin("-", Expr::call("a", vec![p("v")]), Expr::call("a", vec![p("w")])).expect("operator");
    let bound = Expr::bin("/", p("l"), Expr::bin("+", p("k"), Expr::int(1)).expect("operator")).expect("operator");
    StructureSpec {
        consts: vec![(name("k"), Expr::int(k as i64))],
        funs: vec![(name("g"), FunDef::Expr { params: vec![name("n")], body: g })],
        seqs: vec![(name("a"), name("n"), a)],
        rels: vec![(name("P"), vec![name("v"), name("w"), name("l")], Cond::Cmp(CmpOp::Le, diff, bound))],
    }
}

/// `g(n) = n + 1`, `a_n = 1/(n+1)`.
pub fn default_spec(k: u64) -> StructureSpec {
    let n = || Expr::name("n");
    let g = Expr::bin("+", n(), Expr::int(1)).expect("operator");
    let a = Expr::bin("/", Expr::int(1), Expr::bin("+", n(), Expr::int(1)).expect("operator")).expect("operator");
    metastability_spec(k, g, a)
}

pub fn default_structure(k: u64) -> Result<Structure, SemError> {
    Structure::new(&metastability_signature(), &default_spec(k))
}

fn g() -> Term {
    Term::constant("g", 1)
}

fn g_of(t: Term) -> Term {
    Term::app(g(), t).expect("g takes type 0")
}

/// `λv.λw.g w`.
fn step_g() -> Term {
    let v = Var::nat("v");
    let w = Var::nat("w");
    Term::lams(&[v, w.clone()], g_of(Term::var(w)))
}

fn p_atom(args: [Term; 3]) -> OFormula {
    OFormula::Atom(name("P"), args.to_vec())
}

/// The terms `R_{g0,λv.λw.gw}`, `a`, `q` and `m` of the example.
#[derive(Clone, Debug)]
pub struct WitnessTerms {
    pub r: Term,
    pub a: Term,
    pub q: Term,
    pub m: Term,
}

/// Builds `a := a^3_B(g0)(λv.λw.gw)k` with
/// `B := ¬P(0,R_{u,f}z,Sz) ∧ P(0,R_{u,f}(Sz),SSz)`, then `q` and `m`.
pub fn witness_terms() -> Result<WitnessTerms, OmegaError> {
    let sig = metastability_signature();
    let u = Var::nat("u");
    let f = Var { name: name("f"), ty: Type::arrow(Type::Zero, Type::nat_fn(1)) };
    let z = Var::nat("z");
    let ruf = recursor(Term::var(u.clone()), Term::var(f.clone()))?;
    let rz = Term::app(ruf.clone(), Term::var(z.clone()))?;
    let rsz = Term::app(ruf, Term::succ(Term::var(z.clone())))?;
    let b = OFormula::and(
        OFormula::not(p_atom([Term::zero(), rz, Term::succ(Term::var(z.clone()))])),
        p_atom([Term::zero(), rsz, Term::succ(Term::succ(Term::var(z)))]),
    );
    let dec = decompose(&b)?;
    let am = argmax_b(&sig, &b, &dec, 2)?;
    let g0 = g_of(Term::zero());
    let a = Term::apps(am, &[g0.clone(), step_g(), Term::constant("k", 0)])?;
    let r = recursor(g0, step_g())?;
    let q = Term::app(r.clone(), a.clone())?;
    let m = Term::apps(case_closed(), &[Term::zero(), q.clone()])?;
    Ok(WitnessTerms { r, a, q, m })
}

/// `c_{P(0,g(0),S(0))}`.
fn case_closed() -> Term {
    let phi = Formula::atom("P", vec![SigTerm::zero(), SigTerm::app("g", vec![SigTerm::zero()]), SigTerm::numeral(1)]);
    Term::case(CaseConst { formula: phi, vars: Vec::new() })
}

/// `c_φ` for `φ := ¬P(a,b,c) ∧ P(d,e,f)`.
fn case_phi() -> Term {
    let x = |s: &str| SigTerm::var(s);
    let phi = Formula::and(
        Formula::not(Formula::atom("P", vec![x("a"), x("b"), x("c")])),
        Formula::atom("P", vec![x("d"), x("e"), x("f")]),
    );
    let vars = ["a", "b", "c", "d", "e", "f"].iter().map(|s| name(s)).collect();
    Term::case(CaseConst { formula: phi, vars })
}

/// The expected normal forms `r′ = (g^(n+1)0)_n`, `(u_n)_n`, `a′ = (u_n)k`,
/// `q′ = r′a′` and `m′ = c_{P(0,g(0),S(0))}0q′`, written as displayed,
/// with `r′ n` left unreduced inside `u_n`.
#[derive(Clone, Debug)]
pub struct NormalForms {
    pub r: Term,
    pub u: Term,
    pub a: Term,
    pub q: Term,
    pub m: Term,
}

pub fn expected_normal_forms() -> NormalForms {
    let r_seq = Seq::table(
        "r'",
        Type::Zero,
        Vec::new(),
        Arc::new(|n| (0..=n).fold(Term::zero(), |t, _| g_of(t))),
    );
    let r = Term::seq(r_seq.clone());
    let u_r = r.clone();
    let u = Term::seq(Seq::table("u", Type::Zero, Vec::new(), Arc::new(move |n| u_branch(&u_r, n))));
    let a = Term::app(u.clone(), Term::constant("k", 0)).expect("zero sequence");
    let q = Term::app(r.clone(), a.clone()).expect("zero sequence");
    let m = Term::apps(case_closed(), &[Term::zero(), q.clone()]).expect("case arity");
    NormalForms { r, u, a, q, m }
}

/// `u_0 = 0`, `u_{n+1} = c_φ 0 (r′n) (n+1) 0 (r′(n+1)) (n+2) n u_n`.
pub fn u_branch(r: &Term, n: u64) -> Term {
    let rn = |i: u64| Term::app(r.clone(), numeral(i)).expect("zero sequence");
    (0..n).fold(Term::zero(), |acc, i| {
        let args = [Term::zero(), rn(i), numeral(i + 1), Term::zero(), rn(i + 1), numeral(i + 2), numeral(i), acc];
        Term::apps(case_phi(), &args).expect("case arity")
    })
}

fn same_case(a: &CaseConst, b: &CaseConst) -> bool {
    if a.vars.len() != b.vars.len() {
        return false;
    }
    let canon = |c: &CaseConst| {
        let map: BTreeMap<_, _> =
            c.vars.iter().enumerate().map(|(i, v)| (v.clone(), SigTerm::var(&alloc::format!("#{}", i)))).collect();
        c.formula.subst_many_unchecked(&map)
    };
    canon(a) == canon(b)
}

/// Normalizes both terms and compares their spines: equal constant heads,
/// equal case constants up to renaming, and for zero-sequence heads the
/// normal branches `0..=depth`, recursively.
pub fn spines_agree(engine: &mut Engine, s: &Term, t: &Term, depth: u64) -> Result<bool, RewriteError> {
    let mut seen = Vec::new();
    agree(engine, s, t, depth, &mut seen)
}

fn agree(engine: &mut Engine, s: &Term, t: &Term, depth: u64, seen: &mut Vec<(Term, Term)>) -> Result<bool, RewriteError> {
    let s = engine.normalize(s)?;
    let t = engine.normalize(t)?;
    if seen.iter().any(|(a, b)| a.ptr_eq(&s) && b.ptr_eq(&t)) {
        return Ok(true);
    }
    seen.push((s.clone(), t.clone()));
    let (hs, xs) = analyze_spine(&s)?;
    let (ht, ys) = analyze_spine(&t)?;
    if xs.len() != ys.len() {
        return Ok(false);
    }
    let heads = match (&hs, &ht) {
        (SpineHead::Const(a, n), SpineHead::Const(b, m)) => a == b && n == m,
        (SpineHead::Case(a), SpineHead::Case(b)) => same_case(a, b),
        (SpineHead::Seq(a), SpineHead::Seq(b)) => {
            let mut ok = true;
            for i in 0..=depth {
                let ba = engine.normal_branch(a, i)?;
                let bb = engine.normal_branch(b, i)?;
                if !agree(engine, &ba, &bb, depth, seen)? {
                    ok = false;
                    break;
                }
            }
            ok
        }
        _ => false,
    };
    if !heads {
        return Ok(false);
    }
    for (x, y) in xs.iter().zip(&ys) {
        if !agree(engine, x, y, depth, seen)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herbrand::{herbrand_set, DEFAULT_CAP};
    use crate::rewrite::Budget;
    use crate::semantics::eval_direct;

    #[test]
    fn witness_normal_forms_match() {
        let w = witness_terms().unwrap();
        let nf = expected_normal_forms();
        let mut e = Engine::new(Budget::default());
        for k in [0u64, 2, 5] {
            let d = k + 2;
            assert!(spines_agree(&mut e, &w.r, &nf.r, d).is_err(), "r is not of type 0");
            let probe = |t: &Term| Term::app(t.clone(), numeral(k)).unwrap();
            assert!(spines_agree(&mut e, &probe(&w.r), &probe(&nf.r), d).unwrap());
            assert!(spines_agree(&mut e, &w.a, &nf.a, d).unwrap());
            assert!(spines_agree(&mut e, &w.q, &nf.q, d).unwrap());
            assert!(spines_agree(&mut e, &w.m, &nf.m, d).unwrap());
        }
        // a different shape is rejected
        assert!(!spines_agree(&mut e, &w.q, &nf.a, 4).unwrap());
    }

    #[test]
    fn u_sets() {
        let m = default_structure(2).unwrap();
        let nf = expected_normal_forms();
        let mut e = Engine::new(Budget::default());
        for n in 0..=10u64 {
            let un = Term::app(nf.u.clone(), numeral(n)).unwrap();
            let un = e.normalize(&un).unwrap();
            let s = herbrand_set(&m, &mut e, &un, DEFAULT_CAP).unwrap();
            let want: Vec<SigTerm> = (0..=n.saturating_sub(1)).map(SigTerm::numeral).collect();
            let mut got = s.terms();
            got.sort_by_key(|t| t.as_numeral());
            assert_eq!(got, want, "n={}", n);
        }
    }

    #[test]
    fn m_value() {
        let w = witness_terms().unwrap();
        for k in [0u64, 1, 2, 3] {
            let m = default_structure(k).unwrap();
            // P(m, g m, 1) holds in the structure
            let v = eval_direct(&m, &w.m).unwrap();
            let vv = crate::pr::to_u64(&v).unwrap();
            let a = |i: u64| num_rational::BigRational::new(1.into(), (i as i64 + 1).into());
            assert!(a(vv) - a(vv + 1) <= num_rational::BigRational::new(1.into(), (k as i64 + 1).into()));
        }
    }
}
