//! Derived ω-terms: recursors, case terms, argmax terms and the embedding ι.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::{fresh_var, CaseConst, OFormula, Seq, Term, Type, TypeError, Var};
use crate::pr::PrDerivation;
use crate::syntax::{name, Formula, Name, SigTerm, Signature, LESS, SUCC, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub enum OmegaError {
    Type(TypeError),
    UnknownFunction(Name),
    MissingDerivation(Name),
    NotQuantifierFree(String),
    NotNatVariable(String),
    DecompositionMismatch(String),
    NotDecomposable(String),
}

impl From<TypeError> for OmegaError {
    fn from(e: TypeError) -> OmegaError {
        OmegaError::Type(e)
    }
}

impl fmt::Display for OmegaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaError::Type(e) => write!(f, "{}", e),
            OmegaError::UnknownFunction(n) => write!(f, "unknown function symbol `{}`", n),
            OmegaError::MissingDerivation(n) => write!(f, "no derivation registered for `{}`", n),
            OmegaError::NotQuantifierFree(s) => write!(f, "not quantifier-free: {}", s),
            OmegaError::NotNatVariable(s) => write!(f, "variable {} is not of type 0", s),
            OmegaError::DecompositionMismatch(s) => write!(f, "decomposition does not reproduce the formula: {}", s),
            OmegaError::NotDecomposable(s) => write!(f, "no decomposition for {}", s),
        }
    }
}

/// `R_{a,b}` as a term of type `0 -> ρ`.
pub fn recursor(a: Term, b: Term) -> Result<Term, OmegaError> {
    Ok(Term::seq(Seq::recursor(a, b)?))
}

/// Components of `R_{as,bs}`.
pub fn simultaneous_recursor(bases: Vec<Term>, steps: Vec<Term>) -> Result<Vec<Term>, OmegaError> {
    Ok(Seq::simultaneous(bases, steps)?.into_iter().map(Term::seq).collect())
}

/// `λz1...λzn.0` at the given type.
pub fn zero_functional(ty: &Type) -> Term {
    let vars: Vec<Var> = ty.arg_types().into_iter().map(|t| fresh_var("z", t)).collect();
    Term::lams(&vars, Term::zero())
}

/// The expansion `ι(d)` of a primitive recursive derivation, type `0^n -> 0`.
pub fn embed_derivation(d: &PrDerivation) -> Term {
    let fresh = |n: usize| -> Vec<Var> { (0..n).map(|_| fresh_var("x", Type::Zero)).collect() };
    let vars = |xs: &[Var]| -> Vec<Term> { xs.iter().cloned().map(Term::var).collect() };
    match d {
        PrDerivation::Zero(n) => Term::lams(&fresh(*n), Term::zero()),
        PrDerivation::Succ => Term::succ_const(),
        PrDerivation::Proj(i, n) => {
            let xs = fresh(*n);
            let body = Term::var(xs[i - 1].clone());
            Term::lams(&xs, body)
        }
        PrDerivation::Comp(f, gs) => {
            let xs = fresh(d.arity());
            let args: Vec<Term> = gs
                .iter()
                .map(|g| Term::apps(embed_derivation(g), &vars(&xs)).expect("derivation arity"))
                .collect();
            let body = Term::apps(embed_derivation(f), &args).expect("derivation arity");
            Term::lams(&xs, body)
        }
        PrDerivation::PrimRec(b, s) => {
            let xs = fresh(b.arity());
            let y = fresh_var("y", Type::Zero);
            let v = fresh_var("v", Type::Zero);
            let w = fresh_var("w", Type::Zero);
            let base = Term::apps(embed_derivation(b), &vars(&xs)).expect("derivation arity");
            let mut sargs = vars(&xs);
            sargs.push(Term::var(v.clone()));
            sargs.push(Term::var(w.clone()));
            let step = Term::lams(&[v, w], Term::apps(embed_derivation(s), &sargs).expect("derivation arity"));
            let rec = recursor(base, step).expect("derivation typing");
            let mut all = xs;
            all.push(y.clone());
            Term::lams(&all, Term::app(rec, Term::var(y)).expect("recursor application"))
        }
        PrDerivation::Ref(_, d) => embed_derivation(d),
    }
}

/// The closed term for a function symbol.
pub fn embed_symbol(sig: &Signature, f: &str) -> Result<Term, OmegaError> {
    let sym = sig.function(f).ok_or_else(|| OmegaError::UnknownFunction(name(f)))?;
    match sym.kind {
        crate::syntax::FnKind::PrimitiveRecursive => {
            let d = sig.registry().get(f).ok_or_else(|| OmegaError::MissingDerivation(name(f)))?;
            Ok(embed_derivation(d))
        }
        _ => Ok(Term::constant(f, sym.arity)),
    }
}

/// `ι(t)`.
pub fn embed_term(sig: &Signature, t: &SigTerm) -> Result<Term, OmegaError> {
    match t {
        SigTerm::Var(x) => Ok(Term::var(Var { name: x.clone(), ty: Type::Zero })),
        SigTerm::App(f, args) => {
            let head = embed_symbol(sig, f)?;
            let args = args.iter().map(|a| embed_term(sig, a)).collect::<Result<Vec<_>, _>>()?;
            Ok(Term::apps(head, &args)?)
        }
    }
}

/// `ι(φ)`.
pub fn embed_formula(sig: &Signature, phi: &Formula) -> Result<OFormula, OmegaError> {
    Ok(match phi {
        Formula::Atom(r, args) => OFormula::Atom(
            r.clone(),
            args.iter().map(|a| embed_term(sig, a)).collect::<Result<Vec<_>, _>>()?,
        ),
        Formula::Eq(a, b) => OFormula::Eq(embed_term(sig, a)?, embed_term(sig, b)?),
        Formula::Not(a) => OFormula::not(embed_formula(sig, a)?),
        Formula::Or(a, b) => OFormula::or(embed_formula(sig, a)?, embed_formula(sig, b)?),
        Formula::Forall(x, a) => OFormula::Forall(
            Var { name: x.clone(), ty: Type::Zero },
            Arc::new(embed_formula(sig, a)?),
        ),
    })
}

fn nat_vars(names: &[Name]) -> Vec<Var> {
    names.iter().map(|n| Var { name: n.clone(), ty: Type::Zero }).collect()
}

/// Fresh-looking variable names `a, b, c, ...` avoiding `used`.
struct Namer {
    used: BTreeSet<Name>,
    next: usize,
}

impl Namer {
    fn new(used: BTreeSet<Name>) -> Namer {
        Namer { used, next: 0 }
    }

    fn fresh(&mut self) -> Name {
        loop {
            let i = self.next;
            self.next += 1;
            let s = if i < 26 {
                String::from((b'a' + i as u8) as char)
            } else {
                format!("x{}", i)
            };
            let n = name(&s);
            if !self.used.contains(&n) {
                self.used.insert(n.clone());
                return n;
            }
        }
    }
}

/// Characteristic term of an arithmetic quantifier-free formula: 0 iff true.
pub fn characteristic_term(sig: &Signature, phi: &Formula) -> Result<Term, OmegaError> {
    let sym = |f: &str| embed_symbol(sig, f);
    Ok(match phi {
        Formula::Eq(a, b) => Term::apps(sym("chi_eq")?, &[embed_term(sig, a)?, embed_term(sig, b)?])?,
        Formula::Atom(r, args) if &**r == LESS => {
            Term::apps(sym("chi_lt")?, &[embed_term(sig, &args[0])?, embed_term(sig, &args[1])?])?
        }
        Formula::Atom(..) => return Err(OmegaError::NotQuantifierFree(format!("{} is not arithmetic", phi))),
        Formula::Not(a) => Term::app(sym("nsg")?, characteristic_term(sig, a)?)?,
        Formula::Or(a, b) => Term::apps(sym("*")?, &[characteristic_term(sig, a)?, characteristic_term(sig, b)?])?,
        Formula::Forall(..) => {
            let (x, t, body) = phi
                .as_forall_le()
                .ok_or_else(|| OmegaError::NotQuantifierFree(format!("{}", phi)))?;
            let z = Var { name: x.clone(), ty: Type::Zero };
            let chi = characteristic_term(sig, body)?;
            let v = fresh_var("v", Type::Zero);
            let w = fresh_var("w", Type::Zero);
            let at_sv = chi.subst1(&z, &Term::succ(Term::var(v.clone())));
            let step = Term::lams(&[v, w.clone()], Term::apps(sym("+")?, &[Term::var(w), at_sv])?);
            let sum = recursor(chi.subst1(&z, &Term::zero()), step)?;
            Term::app(sym("sg")?, Term::app(sum, embed_term(sig, t)?)?)?
        }
    })
}

fn abstract_term(
    sig: &Signature,
    t: &SigTerm,
    bound: &[Name],
    namer: &mut Namer,
    out: &mut Vec<(Name, SigTerm)>,
) -> SigTerm {
    if sig.term_is_arithmetic(t) {
        return t.clone();
    }
    let has_bound = t.free_vars().iter().any(|v| bound.contains(v));
    if !has_bound {
        let n = namer.fresh();
        out.push((n.clone(), t.clone()));
        return SigTerm::Var(n);
    }
    match t {
        SigTerm::App(f, args) => SigTerm::App(
            f.clone(),
            args.iter().map(|a| abstract_term(sig, a, bound, namer, out)).collect(),
        ),
        SigTerm::Var(_) => t.clone(),
    }
}

fn abstract_formula(
    sig: &Signature,
    phi: &Formula,
    bound: &mut Vec<Name>,
    namer: &mut Namer,
    out: &mut Vec<(Name, SigTerm)>,
) -> Formula {
    match phi {
        Formula::Atom(r, args) => Formula::Atom(
            r.clone(),
            args.iter().map(|a| abstract_term(sig, a, bound, namer, out)).collect(),
        ),
        Formula::Eq(a, b) => Formula::Eq(
            abstract_term(sig, a, bound, namer, out),
            abstract_term(sig, b, bound, namer, out),
        ),
        Formula::Not(a) => Formula::not(abstract_formula(sig, a, bound, namer, out)),
        Formula::Or(a, b) => {
            let l = abstract_formula(sig, a, bound, namer, out);
            Formula::or(l, abstract_formula(sig, b, bound, namer, out))
        }
        Formula::Forall(x, a) => {
            bound.push(x.clone());
            let body = abstract_formula(sig, a, bound, namer, out);
            bound.pop();
            Formula::Forall(x.clone(), Arc::new(body))
        }
    }
}

/// `c_φ` of type `0^{m+2} -> 0` for a quantifier-free σ-formula with `m`
/// free variables (in order of appearance).
///
/// Non-arithmetic subterms free of bound variables are abstracted to fresh
/// variables first. An arithmetic result gets a term built from `cond` and
/// characteristic functions; otherwise the constant `c_φ'` is used.
pub fn derived_case_term(sig: &Signature, phi: &Formula) -> Result<Term, OmegaError> {
    if !phi.is_quantifier_free() {
        return Err(OmegaError::NotQuantifierFree(format!("{}", phi)));
    }
    let mut used = BTreeSet::new();
    phi.all_vars(&mut used);
    let mut namer = Namer::new(used);
    let mut abstracted = Vec::new();
    let core_phi = abstract_formula(sig, phi, &mut Vec::new(), &mut namer, &mut abstracted);
    let core_vars = core_phi.free_vars();
    let head = if sig.formula_is_arithmetic(&core_phi) {
        let chi = characteristic_term(sig, &core_phi)?;
        let b1 = fresh_var("b", Type::Zero);
        let b2 = fresh_var("b", Type::Zero);
        let body = Term::apps(embed_symbol(sig, "cond")?, &[chi, Term::var(b1.clone()), Term::var(b2.clone())])?;
        let mut binders = nat_vars(&core_vars);
        binders.push(b1);
        binders.push(b2);
        Term::lams(&binders, body)
    } else {
        Term::case(CaseConst { formula: core_phi.clone(), vars: core_vars.clone() })
    };
    if abstracted.is_empty() {
        return Ok(head);
    }
    let outer = nat_vars(&phi.free_vars());
    let mut args = Vec::new();
    for v in &core_vars {
        match abstracted.iter().find(|(n, _)| n == v) {
            Some((_, t)) => args.push(embed_term(sig, t)?),
            None => args.push(Term::var(Var { name: v.clone(), ty: Type::Zero })),
        }
    }
    let b1 = fresh_var("b", Type::Zero);
    let b2 = fresh_var("b", Type::Zero);
    args.push(Term::var(b1.clone()));
    args.push(Term::var(b2.clone()));
    let mut binders = outer;
    binders.push(b1);
    binders.push(b2);
    Ok(Term::lams(&binders, Term::apps(head, &args)?))
}

/// A decomposition `B = ι(φ)[x1:=t1]...[xm:=tm]`, `x1..xm` the free
/// variables of `φ` in order of appearance.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub formula: Formula,
    pub terms: Vec<Term>,
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(decomposition {}", self.formula)?;
        for (x, t) in self.formula.free_vars().iter().zip(&self.terms) {
            write!(f, " ({} {})", x, t)?;
        }
        f.write_str(")")
    }
}

/// Reads a type-0 ω-term built from variables and function constants back as a σ-term.
pub fn unembed_term(t: &Term) -> Option<SigTerm> {
    if !t.ty().is_zero() {
        return None;
    }
    let (head, args) = t.spine();
    if let Some(v) = head.as_var() {
        return if args.is_empty() { Some(SigTerm::Var(v.name.clone())) } else { None };
    }
    let (f, arity) = head.as_const()?;
    if arity != args.len() {
        return None;
    }
    let args = args.iter().map(unembed_term).collect::<Option<Vec<_>>>()?;
    Some(SigTerm::App(f.clone(), args))
}

fn decompose_term(
    t: &Term,
    bound: &[Var],
    namer: &mut Namer,
    out: &mut Vec<(Name, Term)>,
) -> Result<SigTerm, OmegaError> {
    if !t.fv().iter().any(|v| bound.contains(v)) {
        let n = namer.fresh();
        out.push((n.clone(), t.clone()));
        return Ok(SigTerm::Var(n));
    }
    if let Some(v) = t.as_var() {
        return Ok(SigTerm::Var(v.name.clone()));
    }
    let (head, args) = t.spine();
    match head.as_const() {
        Some((f, arity)) if arity == args.len() => Ok(SigTerm::App(
            f.clone(),
            args.iter().map(|a| decompose_term(a, bound, namer, out)).collect::<Result<_, _>>()?,
        )),
        _ => Err(OmegaError::NotDecomposable(format!("{}", t))),
    }
}

fn decompose_formula(
    b: &OFormula,
    bound: &mut Vec<Var>,
    namer: &mut Namer,
    out: &mut Vec<(Name, Term)>,
) -> Result<Formula, OmegaError> {
    Ok(match b {
        OFormula::Atom(r, args) => Formula::Atom(
            r.clone(),
            args.iter().map(|a| decompose_term(a, bound, namer, out)).collect::<Result<_, _>>()?,
        ),
        OFormula::Eq(x, y) => {
            let l = decompose_term(x, bound, namer, out)?;
            Formula::Eq(l, decompose_term(y, bound, namer, out)?)
        }
        OFormula::Not(a) => Formula::not(decompose_formula(a, bound, namer, out)?),
        OFormula::Or(x, y) => {
            let l = decompose_formula(x, bound, namer, out)?;
            Formula::or(l, decompose_formula(y, bound, namer, out)?)
        }
        OFormula::Forall(z, a) => {
            if !z.ty.is_zero() {
                return Err(OmegaError::NotNatVariable(format!("{}", z)));
            }
            bound.push(z.clone());
            let body = decompose_formula(a, bound, namer, out)?;
            bound.pop();
            Formula::Forall(z.name.clone(), Arc::new(body))
        }
    })
}

/// The decomposition that abstracts every atom argument free of bound
/// variables (as in `¬P(a,b,c) ∧ P(d,e,f)`).
pub fn decompose(b: &OFormula) -> Result<Decomposition, OmegaError> {
    if !b.is_quantifier_free() {
        return Err(OmegaError::NotQuantifierFree(format!("{}", b)));
    }
    let mut used = BTreeSet::new();
    collect_bound_names(b, &mut used);
    let mut namer = Namer::new(used);
    let mut out = Vec::new();
    let formula = decompose_formula(b, &mut Vec::new(), &mut namer, &mut out)?;
    let order = formula.free_vars();
    let terms = order
        .iter()
        .map(|n| out.iter().find(|(m, _)| m == n).map(|(_, t)| t.clone()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| OmegaError::NotDecomposable(format!("{}", b)))?;
    Ok(Decomposition { formula, terms })
}

fn collect_bound_names(b: &OFormula, out: &mut BTreeSet<Name>) {
    match b {
        OFormula::Not(a) => collect_bound_names(a, out),
        OFormula::Or(x, y) => {
            collect_bound_names(x, out);
            collect_bound_names(y, out);
        }
        OFormula::Forall(z, a) => {
            out.insert(z.name.clone());
            collect_bound_names(a, out);
        }
        _ => {}
    }
}

/// `c_B := λz1...λzq.(c_φ t1 ... tm)` for the supplied decomposition.
pub fn case_on_formula(sig: &Signature, b: &OFormula, dec: &Decomposition) -> Result<Term, OmegaError> {
    let xs = nat_vars(&dec.formula.free_vars());
    if xs.len() != dec.terms.len() {
        return Err(OmegaError::DecompositionMismatch(format!(
            "{} variables, {} terms",
            xs.len(),
            dec.terms.len()
        )));
    }
    if let Some(t) = dec.terms.iter().find(|t| !t.ty().is_zero()) {
        return Err(OmegaError::DecompositionMismatch(format!("{} is not of type 0", t)));
    }
    let map: Vec<(Var, Term)> = xs.into_iter().zip(dec.terms.iter().cloned()).collect();
    let rebuilt = embed_formula(sig, &dec.formula)?.subst(&map);
    if !rebuilt.alpha_eq(b) {
        return Err(OmegaError::DecompositionMismatch(format!("{} vs {}", rebuilt, b)));
    }
    let c = derived_case_term(sig, &dec.formula)?;
    let body = Term::apps(c, &dec.terms)?;
    Ok(Term::lams(&b.free_vars(), body))
}

/// `λz1..(no zi)..λzq. R_{0, λv.λw.(head z1..v..zq v w)}` where `head`
/// applied to `vars` has type `0 -> 0 -> 0`.
pub fn argmax_over(head: &Term, vars: &[Var], i: usize) -> Result<Term, OmegaError> {
    let zi = vars.get(i).ok_or_else(|| OmegaError::NotNatVariable(format!("index {}", i)))?;
    if !zi.ty.is_zero() {
        return Err(OmegaError::NotNatVariable(format!("{}", zi)));
    }
    let v = fresh_var("v", Type::Zero);
    let w = fresh_var("w", Type::Zero);
    let mut args: Vec<Term> = vars
        .iter()
        .enumerate()
        .map(|(j, z)| if j == i { Term::var(v.clone()) } else { Term::var(z.clone()) })
        .collect();
    args.push(Term::var(v.clone()));
    args.push(Term::var(w.clone()));
    let step = Term::lams(&[v, w], Term::apps(head.clone(), &args)?);
    let rec = recursor(Term::zero(), step)?;
    let others: Vec<Var> = vars.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, z)| z.clone()).collect();
    Ok(Term::lams(&others, rec))
}

/// `a^i_φ`.
pub fn argmax_formula(sig: &Signature, phi: &Formula, i: usize) -> Result<Term, OmegaError> {
    let c = derived_case_term(sig, phi)?;
    argmax_over(&c, &nat_vars(&phi.free_vars()), i)
}

/// `a^i_B` over the decomposition of `B`.
pub fn argmax_b(sig: &Signature, b: &OFormula, dec: &Decomposition, i: usize) -> Result<Term, OmegaError> {
    let c = case_on_formula(sig, b, dec)?;
    argmax_over(&c, &b.free_vars(), i)
}

/// Case distinction at type `ty`: `λa.(cb (w1 a) (w2 a))`, where `cb` has
/// type `0 -> 0 -> 0`.
pub fn case_lift(cb: &Term, ty: &Type, w1: &Term, w2: &Term) -> Result<Term, OmegaError> {
    let vars: Vec<Var> = ty.arg_types().into_iter().map(|t| fresh_var("a", t)).collect();
    let args: Vec<Term> = vars.iter().cloned().map(Term::var).collect();
    let l = Term::apps(w1.clone(), &args)?;
    let r = Term::apps(w2.clone(), &args)?;
    Ok(Term::lams(&vars, Term::apps(cb.clone(), &[l, r])?))
}

/// A closed type-0 σ-term as an ω-term built from `0` and `S` only, if it is a numeral.
pub fn is_numeral_term(t: &SigTerm) -> bool {
    match t {
        SigTerm::App(f, a) if &**f == ZERO => a.is_empty(),
        SigTerm::App(f, a) if &**f == SUCC => a.len() == 1 && is_numeral_term(&a[0]),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn sig() -> Signature {
        let mut s = Signature::standard();
        s.add_function("g", 1).unwrap();
        s.add_function("k", 0).unwrap();
        s.add_relation("P", 3).unwrap();
        s
    }

    #[test]
    fn embed_extra_symbol() {
        let t = embed_term(&sig(), &SigTerm::app("g", vec![SigTerm::zero()])).unwrap();
        let (f, a) = t.as_app().unwrap();
        assert_eq!(f.as_const().unwrap().0.as_ref(), "g");
        assert_eq!(a.as_numeral(), Some(0));
    }

    #[test]
    fn case_term_for_extra_relation_is_a_constant() {
        let phi = Formula::atom("P", vec![SigTerm::var("x"), SigTerm::var("y"), SigTerm::var("z")]);
        let c = derived_case_term(&sig(), &phi).unwrap();
        assert!(c.as_case().is_some());
        assert_eq!(c.ty(), &Type::nat_fn(5));
    }

    #[test]
    fn case_term_abstracts_extra_subterms() {
        let g0 = SigTerm::app("g", vec![SigTerm::zero()]);
        let phi = Formula::atom("P", vec![SigTerm::var("x"), g0, SigTerm::var("x")]);
        let c = derived_case_term(&sig(), &phi).unwrap();
        assert_eq!(c.ty(), &Type::nat_fn(3));
        assert!(c.render(0).contains("(case (P x a x))"));
    }

    #[test]
    fn decomposition_round_trip() {
        let s = sig();
        let b = OFormula::Atom(name("P"), vec![Term::zero(), Term::nat_var("z"), Term::succ(Term::nat_var("z"))]);
        let dec = decompose(&b).unwrap();
        assert_eq!(dec.formula.to_string(), "(P a b c)");
        let cb = case_on_formula(&s, &b, &dec).unwrap();
        assert_eq!(cb.fv().len(), 0);
        assert_eq!(cb.ty(), &Type::nat_fn(3));
        let wrong = Decomposition { formula: dec.formula.clone(), terms: vec![Term::zero(), Term::zero(), Term::zero()] };
        assert!(matches!(case_on_formula(&s, &b, &wrong), Err(OmegaError::DecompositionMismatch(_))));
    }

    #[test]
    fn identity_decomposition() {
        let s = sig();
        let px = Formula::atom("P", vec![SigTerm::var("x"), SigTerm::var("x"), SigTerm::var("x")]);
        let b = embed_formula(&s, &px).unwrap().subst(&[(Var::nat("x"), Term::nat_var("z"))]);
        let dec = Decomposition { formula: px, terms: vec![Term::nat_var("z")] };
        let cb = case_on_formula(&s, &b, &dec).unwrap();
        assert_eq!(cb.render(0), "(lambda (z 0) ((case (P x x x)) z))");
    }

    #[test]
    fn argmax_shape() {
        let s = sig();
        let phi = Formula::eq(SigTerm::var("x"), SigTerm::var("y"));
        let a = argmax_formula(&s, &phi, 0).unwrap();
        assert_eq!(a.ty(), &Type::nat_fn(2));
        assert!(argmax_over(&Term::zero(), &[Var::new("f", Type::nat_fn(1))], 0).is_err());
    }

    #[test]
    fn zero_functional_types() {
        let ty = Type::arrow(Type::nat_fn(1), Type::nat_fn(1));
        assert_eq!(zero_functional(&ty).ty(), &ty);
        assert_eq!(zero_functional(&Type::Zero).as_numeral(), Some(0));
        assert!(is_numeral_term(&SigTerm::numeral(2)));
    }
}
