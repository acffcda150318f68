//! The deduction system, the arithmetic axioms, and a checker for explicit proofs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::script::{expand, Script, ScriptError, ScriptRule, ScriptWriter};
use crate::syntax::{name, Formula, Name, SigTerm, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theory {
    /// Induction for every formula.
    Pa,
    /// Induction for existential formulas.
    ISigma1,
}

impl Theory {
    pub fn tag(self) -> &'static str {
        match self {
            Theory::Pa => "pa",
            Theory::ISigma1 => "isigma1",
        }
    }

    pub fn parse(s: &str) -> Option<Theory> {
        match s {
            "pa" => Some(Theory::Pa),
            "isigma1" => Some(Theory::ISigma1),
            _ => None,
        }
    }
}

/// Members of the equality schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqAxiom {
    Refl,
    Sym,
    Trans,
    Fun(Name),
    Rel(Name),
}

impl fmt::Display for EqAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqAxiom::Refl => f.write_str("refl"),
            EqAxiom::Sym => f.write_str("sym"),
            EqAxiom::Trans => f.write_str("trans"),
            EqAxiom::Fun(n) => write!(f, "(fun {})", n),
            EqAxiom::Rel(n) => write!(f, "(rel {})", n),
        }
    }
}

/// Justification of a step. Premises are indices of earlier steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    ExcludedMiddle,
    Substitution(SigTerm),
    Equality(EqAxiom),
    Arith(Name),
    Induction,
    Gamma(usize),
    OrIntro(usize),
    Contraction(usize),
    Assoc(usize),
    Cut(usize, usize),
    ForallIntro(usize),
}

impl Rule {
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Rule::OrIntro(i) | Rule::Contraction(i) | Rule::Assoc(i) | Rule::ForallIntro(i) => vec![*i],
            Rule::Cut(i, j) => vec![*i, *j],
            _ => Vec::new(),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Rule::ExcludedMiddle => "em",
            Rule::Substitution(_) => "subst",
            Rule::Equality(_) => "equality",
            Rule::Arith(_) => "arith",
            Rule::Induction => "induction",
            Rule::Gamma(_) => "gamma",
            Rule::OrIntro(_) => "or-intro",
            Rule::Contraction(_) => "contract",
            Rule::Assoc(_) => "assoc",
            Rule::Cut(..) => "cut",
            Rule::ForallIntro(_) => "forall-intro",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub conclusion: Formula,
    pub rule: Rule,
}

#[derive(Clone, Debug)]
pub struct Proof {
    pub theory: Theory,
    pub signature: Signature,
    pub gamma: Vec<Formula>,
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn goal(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.conclusion)
    }
}

/// What the checker established for a step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Axiom,
    Substitution { phi: Formula, var: Name, term: SigTerm },
    Induction { phi: Formula, var: Name },
    Cut { cut: Formula },
    ForallIntro { var: Name, bound: Option<SigTerm> },
    Rule,
}

#[derive(Clone, Debug)]
pub struct CheckedProof {
    proof: Proof,
    evidence: Vec<Evidence>,
}

impl CheckedProof {
    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn evidence(&self) -> &[Evidence] {
        &self.evidence
    }

    pub fn goal(&self) -> &Formula {
        &self.proof.steps.last().expect("checked proofs are non-empty").conclusion
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofError {
    Empty,
    Syntax { step: usize, message: String },
    GammaNotUniversal(usize),
    Step { step: usize, rule: &'static str, message: String },
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofError::Empty => f.write_str("proof has no steps"),
            ProofError::Syntax { step, message } => write!(f, "step {}: {}", step, message),
            ProofError::GammaNotUniversal(i) => write!(f, "gamma sentence {} is not a universal sentence", i),
            ProofError::Step { step, rule, message } => write!(f, "step {} ({}): {}", step, rule, message),
        }
    }
}

fn v(x: &str) -> SigTerm {
    SigTerm::var(x)
}

fn close(vars: &[String], body: Formula) -> Formula {
    vars.iter().rev().fold(body, |acc, x| Formula::forall(x, acc))
}

fn conj(mut fs: Vec<Formula>) -> Formula {
    let last = fs.pop().expect("non-empty conjunction");
    fs.into_iter().rev().fold(last, |acc, f| Formula::and(f, acc))
}

/// The equality schema instance for `ax` over `sig`.
pub fn equality_axiom(sig: &Signature, ax: &EqAxiom) -> Option<Formula> {
    let eq = |a: &str, b: &str| Formula::eq(v(a), v(b));
    Some(match ax {
        EqAxiom::Refl => Formula::forall("x", eq("x", "x")),
        EqAxiom::Sym => close(&["x".into(), "y".into()], Formula::implies(eq("x", "y"), eq("y", "x"))),
        EqAxiom::Trans => close(
            &["x".into(), "y".into(), "z".into()],
            Formula::implies(Formula::and(eq("x", "y"), eq("y", "z")), eq("x", "z")),
        ),
        EqAxiom::Fun(f) => {
            let n = sig.function(f)?.arity;
            if n == 0 {
                return None;
            }
            let (xs, ys, vars) = cong_vars(n);
            let hyps: Vec<Formula> = (0..n).map(|i| eq(&xs[i], &ys[i])).collect();
            let lhs = SigTerm::app(f, xs.iter().map(|x| v(x)).collect());
            let rhs = SigTerm::app(f, ys.iter().map(|y| v(y)).collect());
            close(&vars, Formula::implies(conj(hyps), Formula::eq(lhs, rhs)))
        }
        EqAxiom::Rel(r) => {
            let n = sig.relation(r)?.arity;
            let (xs, ys, vars) = cong_vars(n);
            let mut hyps: Vec<Formula> = (0..n).map(|i| eq(&xs[i], &ys[i])).collect();
            hyps.push(Formula::atom(r, xs.iter().map(|x| v(x)).collect()));
            close(&vars, Formula::implies(conj(hyps), Formula::atom(r, ys.iter().map(|y| v(y)).collect())))
        }
    })
}

fn cong_vars(n: usize) -> (Vec<String>, Vec<String>, Vec<String>) {
    let xs: Vec<String> = (1..=n).map(|i| format!("x{}", i)).collect();
    let ys: Vec<String> = (1..=n).map(|i| format!("y{}", i)).collect();
    let vars = xs.iter().chain(ys.iter()).cloned().collect();
    (xs, ys, vars)
}

/// Every equality axiom of `sig`.
pub fn equality_axioms(sig: &Signature) -> Vec<(EqAxiom, Formula)> {
    let mut keys = vec![EqAxiom::Refl, EqAxiom::Sym, EqAxiom::Trans];
    keys.extend(sig.functions().filter(|f| f.arity > 0).map(|f| EqAxiom::Fun(f.name.clone())));
    keys.extend(sig.relations().map(|r| EqAxiom::Rel(r.name.clone())));
    keys.into_iter().filter_map(|k| equality_axiom(sig, &k).map(|f| (k, f))).collect()
}

/// The universal arithmetic axioms with their labels: the four successor and
/// order axioms and the defining axioms of the registered symbols.
pub fn arith_axioms(sig: &Signature) -> Vec<(Name, Formula)> {
    let s = |t: SigTerm| SigTerm::succ(t);
    let mut out = vec![
        (name("succ-not-zero"), Formula::forall("x", Formula::not(Formula::eq(s(v("x")), SigTerm::zero())))),
        (
            name("succ-inj"),
            close(
                &["x".into(), "y".into()],
                Formula::implies(Formula::eq(s(v("x")), s(v("y"))), Formula::eq(v("x"), v("y"))),
            ),
        ),
        (name("not-lt-zero"), Formula::forall("x", Formula::not(Formula::lt(v("x"), SigTerm::zero())))),
        (
            name("lt-succ"),
            close(
                &["x".into(), "y".into()],
                Formula::iff(Formula::lt(v("x"), s(v("y"))), Formula::le(v("x"), v("y"))),
            ),
        ),
    ];
    for (n, _) in sig.registry().iter() {
        if let Ok(axs) = sig.registry().defining_axioms(n) {
            for (i, ax) in axs.into_iter().enumerate() {
                out.push((name(&format!("def-{}-{}", n, i)), ax));
            }
        }
    }
    out
}

pub fn arith_axiom(sig: &Signature, label: &str) -> Option<Formula> {
    arith_axioms(sig).into_iter().find(|(n, _)| &**n == label).map(|(_, f)| f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InductionError {
    NotExistential(String),
}

impl fmt::Display for InductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InductionError::NotExistential(s) => write!(f, "induction formula {} is not existential", s),
        }
    }
}

/// `((φ[x:=0]) ∧ ∀x(φ → φ[x:=Sx])) → ∀x φ`.
pub fn induction_instance(theory: Theory, phi: &Formula, x: &str) -> Result<Formula, InductionError> {
    if theory == Theory::ISigma1 && phi.existential_matrix().is_none() {
        return Err(InductionError::NotExistential(format!("{}", phi)));
    }
    let at0 = phi.substitute(x, &SigTerm::zero());
    let at_s = phi.substitute(x, &SigTerm::succ(SigTerm::var(x)));
    let step = Formula::forall(x, Formula::implies(phi.clone(), at_s));
    Ok(Formula::implies(Formula::and(at0, step), Formula::forall(x, phi.clone())))
}

/// Recovers `(φ, x)` from an induction instance.
pub fn as_induction_instance(f: &Formula) -> Option<(Formula, Name)> {
    let (_, concl) = f.as_or()?;
    let (x, phi) = concl.as_forall()?;
    Some((phi.clone(), x.clone()))
}

fn err(step: usize, rule: &Rule, message: String) -> ProofError {
    ProofError::Step { step, rule: rule.tag(), message }
}

/// Checks every step against its rule schema.
pub fn check_proof(p: Proof) -> Result<CheckedProof, ProofError> {
    if p.steps.is_empty() {
        return Err(ProofError::Empty);
    }
    for (i, g) in p.gamma.iter().enumerate() {
        if !g.is_closed() || !g.is_universal() {
            return Err(ProofError::GammaNotUniversal(i));
        }
        p.signature.check_formula(g).map_err(|e| ProofError::Syntax { step: 0, message: format!("gamma {}: {}", i, e) })?;
    }
    let mut evidence = Vec::with_capacity(p.steps.len());
    for (i, step) in p.steps.iter().enumerate() {
        p.signature
            .check_formula(&step.conclusion)
            .map_err(|e| ProofError::Syntax { step: i, message: format!("{}", e) })?;
        for j in step.rule.premises() {
            if j >= i {
                return Err(err(i, &step.rule, format!("premise {} does not precede the step", j)));
            }
        }
        evidence.push(check_step(&p, i)?);
    }
    Ok(CheckedProof { proof: p, evidence })
}

fn check_step(p: &Proof, i: usize) -> Result<Evidence, ProofError> {
    let step = &p.steps[i];
    let c = &step.conclusion;
    let rule = &step.rule;
    let prem = |j: usize| &p.steps[j].conclusion;
    let fail = |m: String| err(i, rule, m);
    let want = |expected: &Formula| {
        if expected == c {
            Ok(())
        } else {
            Err(err(i, rule, format!("expected conclusion {}", expected)))
        }
    };
    match rule {
        Rule::ExcludedMiddle => {
            let (l, r) = c.as_or().ok_or_else(|| fail("not of the form (or (not φ) φ)".into()))?;
            if l.as_not() != Some(r) {
                return Err(fail("not of the form (or (not φ) φ)".into()));
            }
            Ok(Evidence::Axiom)
        }
        Rule::Substitution(t) => {
            let (l, _) = c.as_or().ok_or_else(|| fail("not of the form (or (not (forall x φ)) φ[x:=t])".into()))?;
            let (x, phi) = l
                .as_not()
                .and_then(Formula::as_forall)
                .ok_or_else(|| fail("not of the form (or (not (forall x φ)) φ[x:=t])".into()))?;
            if !phi.is_free_for(x, t) {
                return Err(fail(format!("`{}` is not free for {} in {}", x, t, phi)));
            }
            p.signature.check_term(t).map_err(|e| fail(format!("{}", e)))?;
            want(&Formula::or(l.clone(), phi.substitute(x, t)))?;
            Ok(Evidence::Substitution { phi: phi.clone(), var: x.clone(), term: t.clone() })
        }
        Rule::Equality(ax) => {
            let f = equality_axiom(&p.signature, ax).ok_or_else(|| fail(format!("no equality axiom {}", ax)))?;
            want(&f)?;
            Ok(Evidence::Axiom)
        }
        Rule::Arith(label) => {
            let f = arith_axiom(&p.signature, label).ok_or_else(|| fail(format!("no arithmetic axiom `{}`", label)))?;
            want(&f)?;
            Ok(Evidence::Axiom)
        }
        Rule::Gamma(k) => {
            let f = p.gamma.get(*k).ok_or_else(|| fail(format!("no gamma sentence {}", k)))?;
            want(f)?;
            Ok(Evidence::Axiom)
        }
        Rule::Induction => {
            let (phi, x) = as_induction_instance(c).ok_or_else(|| fail("not an induction instance".into()))?;
            let inst = induction_instance(p.theory, &phi, &x).map_err(|e| fail(format!("{}", e)))?;
            want(&inst)?;
            Ok(Evidence::Induction { phi, var: x })
        }
        Rule::OrIntro(j) => {
            let (l, _) = c.as_or().ok_or_else(|| fail("conclusion is not a disjunction".into()))?;
            if l != prem(*j) {
                return Err(fail(format!("left disjunct differs from premise {}", j)));
            }
            Ok(Evidence::Rule)
        }
        Rule::Contraction(j) => {
            want_pair(prem(*j), c).ok_or_else(|| fail(format!("premise {} is not (or φ φ) for the conclusion", j)))?;
            Ok(Evidence::Rule)
        }
        Rule::Assoc(j) => {
            let bad = || fail(format!("premise {} is not of the form (or (or φ ψ) χ)", j));
            let (ab, cc) = prem(*j).as_or().ok_or_else(bad)?;
            let (a, b) = ab.as_or().ok_or_else(bad)?;
            want(&Formula::or(a.clone(), Formula::or(b.clone(), cc.clone())))?;
            Ok(Evidence::Rule)
        }
        Rule::Cut(j, k) => {
            let (a, psi) = prem(*j).as_or().ok_or_else(|| fail(format!("premise {} is not a disjunction", j)))?;
            let (na, chi) = prem(*k).as_or().ok_or_else(|| fail(format!("premise {} is not a disjunction", k)))?;
            if na.as_not() != Some(a) {
                return Err(fail(format!("premise {} does not start with the negation of {}", k, a)));
            }
            want(&Formula::or(psi.clone(), chi.clone()))?;
            Ok(Evidence::Cut { cut: a.clone() })
        }
        Rule::ForallIntro(j) => {
            let (l, psi) = c.as_or().ok_or_else(|| fail("conclusion is not a disjunction".into()))?;
            let (x, phi) = l.as_forall().ok_or_else(|| fail("left disjunct is not a universal formula".into()))?;
            if psi.has_free(x) {
                return Err(fail(format!("`{}` is free in {}", x, psi)));
            }
            if prem(*j) != &Formula::or(phi.clone(), psi.clone()) {
                return Err(fail(format!("premise {} is not (or φ ψ) for the conclusion", j)));
            }
            let bound = l.as_forall_le().map(|(_, t, _)| t.clone());
            Ok(Evidence::ForallIntro { var: x.clone(), bound })
        }
    }
}

fn want_pair(premise: &Formula, c: &Formula) -> Option<()> {
    let (a, b) = premise.as_or()?;
    (a == c && b == c).then_some(())
}

/// Builds proofs step by step; the derived rules expand into primitive steps.
#[derive(Clone, Debug)]
pub struct ProofBuilder {
    proof: Proof,
}

/// Failure of a derived rule, reported before any step is added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacroError(pub String);

impl fmt::Display for MacroError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

type MResult = Result<usize, MacroError>;

fn merr<T>(s: String) -> Result<T, MacroError> {
    Err(MacroError(s))
}

/// The disjuncts of `f`, read through every top-level `or`.
pub fn disjuncts(f: &Formula) -> Vec<&Formula> {
    let mut out = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        match g.as_or() {
            Some((a, b)) => {
                stack.push(b);
                stack.push(a);
            }
            None => out.push(g),
        }
    }
    out
}

impl ProofBuilder {
    pub fn new(theory: Theory, signature: Signature, gamma: Vec<Formula>) -> ProofBuilder {
        ProofBuilder { proof: Proof { theory, signature, gamma, steps: Vec::new() } }
    }

    pub fn len(&self) -> usize {
        self.proof.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proof.steps.is_empty()
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.proof.steps[i].conclusion
    }

    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn finish(self) -> Proof {
        self.proof
    }

    /// Appends a primitive step without checking it.
    pub fn push(&mut self, conclusion: Formula, rule: Rule) -> usize {
        self.proof.steps.push(Step { conclusion, rule });
        self.proof.steps.len() - 1
    }

    fn or_parts(&self, i: usize) -> Result<(Formula, Formula), MacroError> {
        match self.formula(i).as_or() {
            Some((a, b)) => Ok((a.clone(), b.clone())),
            None => merr(format!("step {} is not a disjunction", i)),
        }
    }

    pub fn em(&mut self, phi: &Formula) -> usize {
        self.push(Formula::or(Formula::not(phi.clone()), phi.clone()), Rule::ExcludedMiddle)
    }

    /// `¬∀xφ ∨ φ[x:=t]`.
    pub fn subst_axiom(&mut self, all: &Formula, t: &SigTerm) -> MResult {
        let Some((x, phi)) = all.as_forall() else { return merr(format!("{} is not universal", all)) };
        let c = Formula::or(Formula::not(all.clone()), phi.substitute(x, t));
        Ok(self.push(c, Rule::Substitution(t.clone())))
    }

    pub fn gamma(&mut self, k: usize) -> MResult {
        match self.proof.gamma.get(k) {
            Some(f) => {
                let f = f.clone();
                Ok(self.push(f, Rule::Gamma(k)))
            }
            None => merr(format!("no gamma sentence {}", k)),
        }
    }

    pub fn arith(&mut self, label: &str) -> MResult {
        match arith_axiom(&self.proof.signature, label) {
            Some(f) => Ok(self.push(f, Rule::Arith(name(label)))),
            None => merr(format!("no arithmetic axiom `{}`", label)),
        }
    }

    pub fn equality(&mut self, ax: EqAxiom) -> MResult {
        match equality_axiom(&self.proof.signature, &ax) {
            Some(f) => Ok(self.push(f, Rule::Equality(ax))),
            None => merr(format!("no equality axiom {}", ax)),
        }
    }

    pub fn induction(&mut self, phi: &Formula, x: &str) -> MResult {
        match induction_instance(self.proof.theory, phi, x) {
            Ok(f) => Ok(self.push(f, Rule::Induction)),
            Err(e) => merr(format!("{}", e)),
        }
    }

    pub fn or_intro(&mut self, i: usize, psi: &Formula) -> usize {
        let c = Formula::or(self.formula(i).clone(), psi.clone());
        self.push(c, Rule::OrIntro(i))
    }

    pub fn contract(&mut self, i: usize) -> MResult {
        let (a, b) = self.or_parts(i)?;
        if a != b {
            return merr(format!("step {} is not of the form (or φ φ)", i));
        }
        Ok(self.push(a, Rule::Contraction(i)))
    }

    pub fn assoc(&mut self, i: usize) -> MResult {
        let (ab, c) = self.or_parts(i)?;
        let Some((a, b)) = ab.as_or() else { return merr(format!("step {} is not (or (or φ ψ) χ)", i)) };
        let f = Formula::or(a.clone(), Formula::or(b.clone(), c));
        Ok(self.push(f, Rule::Assoc(i)))
    }

    pub fn cut(&mut self, i: usize, j: usize) -> MResult {
        let (a, psi) = self.or_parts(i)?;
        let (na, chi) = self.or_parts(j)?;
        if na.as_not() != Some(&a) {
            return merr(format!("cut: step {} does not begin with the negation of {}", j, a));
        }
        Ok(self.push(Formula::or(psi, chi), Rule::Cut(i, j)))
    }

    pub fn forall_intro(&mut self, i: usize, x: &str) -> MResult {
        let (phi, psi) = self.or_parts(i)?;
        if psi.has_free(x) {
            return merr(format!("forall-intro: `{}` is free in {}", x, psi));
        }
        Ok(self.push(Formula::or(Formula::forall(x, phi), psi), Rule::ForallIntro(i)))
    }

    /// `φ ∨ ψ` to `ψ ∨ φ`.
    pub fn commute(&mut self, i: usize) -> MResult {
        let (a, _) = self.or_parts(i)?;
        let e = self.em(&a);
        self.cut(i, e)
    }

    /// `φ` and `¬φ ∨ ψ` to `ψ`.
    pub fn mp(&mut self, i: usize, j: usize) -> MResult {
        let (_, psi) = self.or_parts(j)?;
        let w = self.or_intro(i, &psi);
        let c = self.cut(w, j)?;
        self.contract(c)
    }

    /// `¬d ∨ g` where `d` occurs as a disjunct of `g`.
    fn leaf_lemma(&mut self, d: &Formula, g: &Formula) -> MResult {
        if d == g {
            return Ok(self.em(d));
        }
        let Some((l, r)) = g.as_or() else { return merr(format!("{} does not occur in {}", d, g)) };
        let (l, r) = (l.clone(), r.clone());
        if disjuncts(&l).contains(&d) {
            let a = self.leaf_lemma(d, &l)?;
            let b = self.or_intro(a, &r);
            self.assoc(b)
        } else {
            let a = self.leaf_lemma(d, &r)?;
            let b = self.commute(a)?;
            let c = self.or_intro(b, &l);
            let e = self.assoc(c)?;
            let f = self.commute(e)?;
            self.assoc(f)
        }
    }

    /// `¬f ∨ g` when every disjunct of `f` is a disjunct of `g`.
    pub fn implication_lemma(&mut self, f: &Formula, g: &Formula) -> MResult {
        let Some((f1, f2)) = f.as_or() else { return self.leaf_lemma(f, g) };
        let (f1, f2) = (f1.clone(), f2.clone());
        let l1 = self.implication_lemma(&f1, g)?;
        let l2 = self.implication_lemma(&f2, g)?;
        let nf = Formula::not(f.clone());
        // ¬f ∨ (f1 ∨ f2) → (¬f ∨ f1) ∨ f2 → f2 ∨ (¬f ∨ f1)
        let e = self.em(f);
        let a = self.assoc_left(e)?;
        let b = self.commute(a)?;
        // (¬f ∨ f1) ∨ g → f1 ∨ (g ∨ ¬f)
        let c = self.cut(b, l2)?;
        let d = self.assoc(c)?;
        let d2 = self.commute(d)?;
        let d3 = self.assoc(d2)?;
        // (g ∨ ¬f) ∨ g → g ∨ (¬f ∨ g), then ¬g ∨ (¬f ∨ g) and contraction
        let e2 = self.cut(d3, l1)?;
        let e3 = self.assoc(e2)?;
        let target = Formula::or(nf, g.clone());
        let t = self.leaf_lemma(g, &target)?;
        let e4 = self.cut(e3, t)?;
        self.contract(e4)
    }

    /// From step `i` derive `g`, whose disjuncts include every disjunct of step `i`.
    pub fn permute(&mut self, i: usize, g: &Formula) -> MResult {
        if self.formula(i) == g {
            return Ok(i);
        }
        let f = self.formula(i).clone();
        let missing: Vec<String> = {
            let gd = disjuncts(g);
            disjuncts(&f).into_iter().filter(|d| !gd.contains(d)).map(|d| format!("{}", d)).collect()
        };
        if !missing.is_empty() {
            return merr(format!("permute: {} missing from the target", missing.join(", ")));
        }
        if let Some(path) = rearrangement(&f, g, 8) {
            let mut cur = i;
            for op in path {
                cur = match op {
                    Rearrange::Commute => self.commute(cur)?,
                    Rearrange::Assoc => self.assoc(cur)?,
                    Rearrange::AssocLeft => self.assoc_left(cur)?,
                };
            }
            return Ok(cur);
        }
        let l = self.implication_lemma(&f, g)?;
        self.mp(i, l)
    }

    /// `φ ∨ (ψ ∨ χ)` to `(φ ∨ ψ) ∨ χ`.
    pub fn assoc_left(&mut self, i: usize) -> MResult {
        let a = self.commute(i)?;
        let b = self.assoc(a)?;
        let c = self.commute(b)?;
        let d = self.assoc(c)?;
        self.commute(d)
    }

    /// `∀xφ` to `φ[x:=t]`.
    pub fn instantiate(&mut self, i: usize, t: &SigTerm) -> MResult {
        let all = self.formula(i).clone();
        let s = self.subst_axiom(&all, t)?;
        self.mp(i, s)
    }

    /// `(∀xφ) ∨ C` to `φ[x:=t] ∨ C`.
    pub fn instantiate_front(&mut self, i: usize, t: &SigTerm) -> MResult {
        let (all, _) = self.or_parts(i)?;
        let s = self.subst_axiom(&all, t)?;
        let c = self.cut(i, s)?;
        self.commute(c)
    }

    /// `φ[x:=t] ∨ C` to `(∃xφ) ∨ C`.
    pub fn exists_intro(&mut self, i: usize, x: &str, phi: &Formula, t: &SigTerm) -> MResult {
        let (inst, _) = self.or_parts(i)?;
        if phi.substitute(x, t) != inst {
            return merr(format!("exists-intro: {} is not {}[{}:={}]", inst, phi, x, t));
        }
        let all = Formula::forall(x, Formula::not(phi.clone()));
        let s = self.subst_axiom(&all, t)?;
        let s2 = self.commute(s)?;
        let c = self.cut(i, s2)?;
        self.commute(c)
    }

    /// `φ ∨ C` to `¬¬φ ∨ C`.
    pub fn dn_intro(&mut self, i: usize) -> MResult {
        let (a, _) = self.or_parts(i)?;
        let e = self.em(&Formula::not(a));
        let e2 = self.commute(e)?;
        let c = self.cut(i, e2)?;
        self.commute(c)
    }

    /// `¬¬φ ∨ C` to `φ ∨ C`.
    pub fn dn_elim(&mut self, i: usize) -> MResult {
        let (nna, _) = self.or_parts(i)?;
        let Some(a) = nna.as_not().and_then(Formula::as_not) else {
            return merr(format!("dn-elim: {} is not a double negation", nna));
        };
        let e = self.em(&a.clone());
        let c = self.cut(e, i)?;
        self.commute(c)
    }

    /// `φ` to `∀xφ`.
    pub fn gen(&mut self, i: usize, x: &str) -> MResult {
        let all = Formula::forall(x, self.formula(i).clone());
        let a = self.or_intro(i, &all);
        let b = self.forall_intro(a, x)?;
        self.contract(b)
    }

    /// `A ∨ C` and `B ∨ C` to `(A ∧ B) ∨ C`.
    pub fn conj(&mut self, i: usize, j: usize) -> MResult {
        let (a, c) = self.or_parts(i)?;
        let (b, c2) = self.or_parts(j)?;
        if c != c2 {
            return merr("conj: the side formulas differ".into());
        }
        let nanb = Formula::or(Formula::not(a.clone()), Formula::not(b.clone()));
        let e = self.em(&nanb);
        let e1 = self.commute(e)?;
        let l = self.assoc(e1)?;
        let s1 = self.cut(i, l)?;
        let s2 = self.commute(s1)?;
        let s2 = self.assoc(s2)?;
        // C ∨ ((a ∧ b) ∨ C) to (C ∨ C) ∨ (a ∧ b), then contract C through a small lemma
        let s3 = self.cut(j, s2)?;
        let s4 = self.assoc_left(s3)?;
        let s5 = self.commute(s4)?;
        let s6 = self.assoc_left(s5)?;
        let cc = Formula::or(c.clone(), c.clone());
        let lemma = self.implication_lemma(&cc, &c)?;
        self.cut(s6, lemma)
    }

    /// Checks the proof built so far.
    pub fn check(&self) -> Result<CheckedProof, ProofError> {
        check_proof(self.proof.clone())
    }
}

/// The signature `k/0, g/1, P/3` over the arithmetic base.
pub fn metastability_signature() -> Signature {
    let mut s = Signature::standard();
    s.add_function("k", 0).expect("fresh symbol");
    s.add_function("g", 1).expect("fresh symbol");
    s.add_relation("P", 3).expect("fresh symbol");
    s
}

fn pp(a: SigTerm, b: SigTerm, c: SigTerm) -> Formula {
    Formula::atom("P", vec![a, b, c])
}

fn gt(t: SigTerm) -> SigTerm {
    SigTerm::app("g", vec![t])
}

/// The two universal sentences of the metastability argument.
pub fn metastability_gamma() -> Vec<Formula> {
    let (vv, p, r, b) = (v("v"), v("p"), v("r"), v("b"));
    let one = SigTerm::numeral(1);
    let chain = Formula::implies(
        Formula::and(Formula::not(pp(vv.clone(), p.clone(), b.clone())), Formula::not(pp(p, r.clone(), one))),
        Formula::not(pp(vv, r, SigTerm::succ(b))),
    );
    let bound = Formula::forall("t", pp(SigTerm::zero(), v("t"), SigTerm::succ(SigTerm::constant("k"))));
    vec![close(&["v".into(), "p".into(), "r".into(), "b".into()], chain), bound]
}

/// `∃m P(m, gm, S0)`.
pub fn metastability_goal() -> Formula {
    Formula::exists("m", pp(v("m"), gt(v("m")), SigTerm::numeral(1)))
}

/// An explicit derivation of the metastability goal from the two sentences,
/// by induction on `∃y ¬P(0, y, Sx)`.
pub fn metastability_proof() -> Result<Proof, ScriptError> {
    expand(&metastability_script()?).map(|e| e.proof)
}

/// The same derivation as a script over derived rules.
pub fn metastability_script() -> Result<Script, ScriptError> {
    use ScriptRule::*;
    let mut w = ScriptWriter::new(Theory::ISigma1, metastability_signature(), metastability_gamma());
    let z = SigTerm::zero;
    let one = || SigTerm::numeral(1);
    let sx = || SigTerm::succ(v("x"));
    let goal = metastability_goal();
    let h = goal.as_not().expect("existential").clone();
    let matrix = |l: SigTerm| Formula::not(pp(z(), v("y"), l));
    let phi = |l: SigTerm| Formula::exists("y", matrix(l));

    // base: φ(0) ∨ D
    let s0 = w.step(Subst(z(), Some(h.clone())))?;
    let s1 = w.step(Commute(s0))?;
    let base = w.step(ExistsIntro(s1, name("y"), matrix(one()), gt(z())))?;

    // step: ∀x(¬φ(x) ∨ φ(Sx)) ∨ D
    let a1 = Formula::not(pp(z(), v("y"), sx()));
    let a2 = Formula::not(pp(v("y"), gt(v("y")), one()));
    let c = Formula::not(pp(z(), gt(v("y")), SigTerm::succ(sx())));
    let mut cur = w.step(Gamma(0))?;
    for t in [z(), v("y"), gt(v("y")), sx()] {
        cur = w.step(Inst(cur, t))?;
    }
    let t1 = w.step(DnElim(cur))?;
    let t2 = w.step_to(
        Permute(t1),
        Some(Formula::or(Formula::not(a2.clone()), Formula::or(c.clone(), Formula::or(Formula::not(a1.clone()), goal.clone())))),
    )?;
    let hy = w.step(Subst(v("y"), Some(h)))?;
    let hy2 = w.step(Commute(hy))?;
    let t3 = w.step(Cut(hy2, t2))?;
    let t4 = w.step_to(Permute(t3), Some(Formula::or(c, Formula::or(Formula::not(a1.clone()), goal.clone()))))?;
    let t5 = w.step(ExistsIntro(t4, name("y"), matrix(SigTerm::succ(sx())), gt(v("y"))))?;
    let t6 = w.step_to(
        Permute(t5),
        Some(Formula::or(Formula::not(a1), Formula::or(phi(SigTerm::succ(sx())), goal.clone()))),
    )?;
    let t7 = w.step(ForallIntro(t6, Some(name("y"))))?;
    let t8 = w.step(DnIntro(t7))?;
    let t9 = w.step(AssocLeft(t8))?;
    let step = w.step(ForallIntro(t9, Some(name("x"))))?;

    // combine
    let both = w.step(Conj(base, step))?;
    let ind = w.step(Induction(Some((name("x"), phi(sx())))))?;
    let k1 = w.step(Cut(both, ind))?;
    let k2 = w.step(Commute(k1))?;
    let at_k = w.step(InstFront(k2, SigTerm::constant("k")))?;
    let g2 = w.step(Gamma(1))?;
    let w0 = w.step(Inst(g2, v("y")))?;
    let w1 = w.step(OrIntro(w0, Some(goal)))?;
    let w2 = w.step(DnIntro(w1))?;
    let w3 = w.step(ForallIntro(w2, Some(name("y"))))?;
    let w4 = w.step(DnIntro(w3))?;
    let fin = w.step(Cut(at_k, w4))?;
    w.step(Contract(fin))?;
    Ok(w.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rearrange {
    Commute,
    Assoc,
    AssocLeft,
}

/// A shortest sequence of top-level commutations and reassociations taking
/// `from` to `to`, searched up to `depth` moves.
fn rearrangement(from: &Formula, to: &Formula, depth: usize) -> Option<Vec<Rearrange>> {
    use alloc::collections::{BTreeMap, VecDeque};
    let mut seen: BTreeMap<Formula, (Option<Formula>, Option<Rearrange>)> = BTreeMap::new();
    seen.insert(from.clone(), (None, None));
    let mut queue = VecDeque::from([(from.clone(), 0usize)]);
    while let Some((f, d)) = queue.pop_front() {
        if &f == to {
            let mut path = Vec::new();
            let mut cur = f;
            while let Some((Some(prev), Some(op))) = seen.get(&cur).cloned() {
                path.push(op);
                cur = prev;
            }
            path.reverse();
            return Some(path);
        }
        if d == depth {
            continue;
        }
        let Some((a, b)) = f.as_or() else { continue };
        let mut next = vec![(Formula::or(b.clone(), a.clone()), Rearrange::Commute)];
        if let Some((x, y)) = a.as_or() {
            next.push((Formula::or(x.clone(), Formula::or(y.clone(), b.clone())), Rearrange::Assoc));
        }
        if let Some((x, y)) = b.as_or() {
            next.push((Formula::or(Formula::or(a.clone(), x.clone()), y.clone()), Rearrange::AssocLeft));
        }
        for (g, op) in next {
            if !seen.contains_key(&g) {
                seen.insert(g.clone(), (Some(f.clone()), Some(op)));
                queue.push_back((g, d + 1));
            }
        }
    }
    None
}

/// Labels of derived rules understood by script loaders.
pub const MACROS: &[&str] =
    &["commute", "permute", "mp", "inst", "inst-front", "exists-intro", "dn-intro", "dn-elim", "gen", "conj", "assoc-left"];

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ExcludedMiddle => f.write_str("(em)"),
            Rule::Substitution(t) => write!(f, "(subst {})", t),
            Rule::Equality(a) => write!(f, "(equality {})", a),
            Rule::Arith(l) => write!(f, "(arith {})", l),
            Rule::Induction => f.write_str("(induction)"),
            Rule::Gamma(k) => write!(f, "(gamma {})", k),
            Rule::OrIntro(i) => write!(f, "(or-intro {})", i),
            Rule::Contraction(i) => write!(f, "(contract {})", i),
            Rule::Assoc(i) => write!(f, "(assoc {})", i),
            Rule::Cut(i, j) => write!(f, "(cut {} {})", i, j),
            Rule::ForallIntro(i) => write!(f, "(forall-intro {})", i),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        let mut s = Signature::standard();
        s.add_relation("P", 1).unwrap();
        s.add_function("g", 1).unwrap();
        s
    }

    fn p(t: SigTerm) -> Formula {
        Formula::atom("P", vec![t])
    }

    #[test]
    fn excluded_middle_accepted() {
        let mut b = ProofBuilder::new(Theory::Pa, sig(), vec![]);
        b.em(&p(SigTerm::zero()));
        assert!(b.check().is_ok());
    }

    #[test]
    fn forall_intro_side_condition() {
        let mut b = ProofBuilder::new(Theory::Pa, sig(), vec![]);
        let x = v("x");
        b.push(Formula::or(Formula::not(p(x.clone())), p(x.clone())), Rule::ExcludedMiddle);
        b.push(Formula::or(Formula::forall("x", Formula::not(p(x.clone()))), p(x)), Rule::ForallIntro(0));
        match b.check() {
            Err(ProofError::Step { step: 1, rule: "forall-intro", message }) => assert!(message.contains("free")),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn induction_shapes() {
        let phi = Formula::exists("z", Formula::atom("P", vec![v("z")]));
        let inst = induction_instance(Theory::ISigma1, &phi, "x").unwrap();
        assert_eq!(as_induction_instance(&inst).unwrap().1, name("x"));
        let bad = Formula::forall("y", Formula::exists("z", Formula::eq(v("y"), v("z"))));
        assert!(induction_instance(Theory::ISigma1, &bad, "x").is_err());
        assert!(induction_instance(Theory::Pa, &bad, "x").is_ok());
        let refl = Formula::eq(v("x"), v("x"));
        assert!(induction_instance(Theory::ISigma1, &refl, "x").is_ok());
    }

    #[test]
    fn arith_axioms_universal() {
        let axs = arith_axioms(&sig());
        assert!(axs.iter().all(|(_, f)| f.is_universal() && f.is_closed()));
        let want = Formula::forall("x", Formula::not(Formula::eq(SigTerm::succ(v("x")), SigTerm::zero())));
        assert!(axs.iter().any(|(_, f)| *f == want));
        let lt = close(
            &["x".into(), "y".into()],
            Formula::iff(Formula::lt(v("x"), SigTerm::succ(v("y"))), Formula::le(v("x"), v("y"))),
        );
        assert!(axs.iter().any(|(_, f)| *f == lt));
        for (_, f) in equality_axioms(&sig()) {
            assert!(f.is_universal() && f.is_closed());
        }
    }

    #[test]
    fn macros_check() {
        let (a, b, c) = (p(v("a")), p(v("b")), p(v("c")));
        let mut pb = ProofBuilder::new(Theory::Pa, sig(), vec![]);
        let e = pb.em(&a);
        let x = pb.or_intro(e, &b);
        let y = pb.permute(x, &Formula::or(b.clone(), Formula::or(a.clone(), Formula::not(a.clone())))).unwrap();
        let _ = pb.dn_intro(y).unwrap();
        let z = pb.assoc_left(y).unwrap();
        let _ = pb.commute(z).unwrap();
        let e2 = pb.em(&c);
        let w = pb.conj(e2, e2).unwrap();
        assert_eq!(pb.formula(w), &Formula::or(Formula::and(Formula::not(c.clone()), Formula::not(c.clone())), c));
        let checked = pb.check().unwrap();
        assert_eq!(checked.proof().steps.len(), pb.len());
    }

    #[test]
    fn corpus_accepted() {
        let p = metastability_proof().unwrap();
        let checked = check_proof(p).unwrap();
        assert_eq!(checked.goal(), &metastability_goal());
        assert!(metastability_gamma().iter().all(Formula::is_universal));
    }

    #[test]
    fn permute_rejects_missing_disjunct() {
        let mut pb = ProofBuilder::new(Theory::Pa, sig(), vec![]);
        let e = pb.em(&p(v("a")));
        assert!(pb.permute(e, &p(v("a"))).is_err());
    }
}
