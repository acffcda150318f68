//! The functional interpretation of σ-formulas and witness extraction from
//! checked proofs.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::omega::{
    argmax_b, case_lift, case_on_formula, decompose, embed_formula, embed_term, fresh_var, recursor,
    simultaneous_recursor, zero_functional, OFormula, OmegaError, Term, Type, TypeError, Var,
};
use crate::proof::{CheckedProof, Evidence, Rule};
use crate::semantics::{sample_valuations, Env, Evaluator, SemError, Structure};
use crate::syntax::{Formula, SigTerm, Signature};

#[derive(Clone, Debug)]
pub enum Shape {
    Atom,
    /// `¬ψ`; the node's `u` are the fresh functionals.
    Not(Arc<Interp>),
    Or(Arc<Interp>, Arc<Interp>),
    /// Unbounded `∀`, with the variable renamed to `var`.
    Forall(Var, Arc<Interp>),
    /// `∀z ≤ t ψ`.
    Bounded(Var, Term, Arc<Interp>),
    /// A removed double negation (only with `collapse_double_negation`).
    DoubleNeg(Arc<Interp>),
}

/// `φ_Sh` with its tuples `u_φ`, `x_φ`.
#[derive(Clone, Debug)]
pub struct Interp {
    pub formula: Formula,
    pub sh: OFormula,
    pub u: Vec<Var>,
    pub x: Vec<Var>,
    pub shape: Shape,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct InterpOptions {
    /// Read `¬¬ψ` as `ψ`.
    pub collapse_double_negation: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InterpError {
    Omega(OmegaError),
    Shape(String),
    UnsupportedInduction(String),
    Step { step: usize, message: String },
}

impl fmt::Display for InterpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterpError::Omega(e) => write!(f, "{}", e),
            InterpError::Shape(s) => write!(f, "interpretation shape mismatch: {}", s),
            InterpError::UnsupportedInduction(s) => write!(f, "unsupported induction formula: {}", s),
            InterpError::Step { step, message } => write!(f, "step {}: {}", step, message),
        }
    }
}

impl From<OmegaError> for InterpError {
    fn from(e: OmegaError) -> Self {
        InterpError::Omega(e)
    }
}

impl From<TypeError> for InterpError {
    fn from(e: TypeError) -> Self {
        InterpError::Omega(OmegaError::Type(e))
    }
}

type IResult<T> = Result<T, InterpError>;

fn shape_err<T>(s: String) -> IResult<T> {
    Err(InterpError::Shape(s))
}

fn vars_terms(vs: &[Var]) -> Vec<Term> {
    vs.iter().cloned().map(Term::var).collect()
}

fn types(vs: &[Var]) -> Vec<Type> {
    vs.iter().map(|v| v.ty.clone()).collect()
}

pub fn interpret(sig: &Signature, phi: &Formula) -> IResult<Interp> {
    interpret_with(sig, phi, InterpOptions::default())
}

pub fn interpret_with(sig: &Signature, phi: &Formula, opts: InterpOptions) -> IResult<Interp> {
    if let Some((z, t, body)) = phi.as_forall_le() {
        let inner = interpret_with(sig, body, opts)?;
        let zv = Var::nat(z);
        let bound = embed_term(sig, t)?;
        return Ok(Interp {
            formula: phi.clone(),
            sh: OFormula::forall_le(zv.clone(), bound.clone(), inner.sh.clone()),
            u: inner.u.clone(),
            x: inner.x.clone(),
            shape: Shape::Bounded(zv, bound, Arc::new(inner)),
        });
    }
    match phi {
        Formula::Atom(..) | Formula::Eq(..) => Ok(Interp {
            formula: phi.clone(),
            sh: embed_formula(sig, phi)?,
            u: Vec::new(),
            x: Vec::new(),
            shape: Shape::Atom,
        }),
        Formula::Not(a) => {
            if opts.collapse_double_negation {
                if let Some(b) = a.as_not() {
                    let inner = interpret_with(sig, b, opts)?;
                    return Ok(Interp {
                        formula: phi.clone(),
                        sh: inner.sh.clone(),
                        u: inner.u.clone(),
                        x: inner.x.clone(),
                        shape: Shape::DoubleNeg(Arc::new(inner)),
                    });
                }
            }
            let inner = interpret_with(sig, a, opts)?;
            let ut = types(&inner.u);
            let f: Vec<Var> = inner.x.iter().map(|x| fresh_var("f", Type::tuple_arrow(&ut, &x.ty))).collect();
            let args = vars_terms(&inner.u);
            let map = f
                .iter()
                .zip(&inner.x)
                .map(|(fv, xv)| Ok((xv.clone(), Term::apps(Term::var(fv.clone()), &args)?)))
                .collect::<IResult<Vec<_>>>()?;
            let mut sh = OFormula::not(inner.sh.subst(&map));
            if opts.collapse_double_negation {
                sh = sh.strip_double_negations();
            }
            Ok(Interp {
                formula: phi.clone(),
                sh,
                u: f,
                x: inner.u.clone(),
                shape: Shape::Not(Arc::new(inner)),
            })
        }
        Formula::Or(a, b) => {
            let l = interpret_with(sig, a, opts)?;
            let r = interpret_with(sig, b, opts)?;
            Ok(Interp {
                formula: phi.clone(),
                sh: OFormula::or(l.sh.clone(), r.sh.clone()),
                u: l.u.iter().chain(&r.u).cloned().collect(),
                x: l.x.iter().chain(&r.x).cloned().collect(),
                shape: Shape::Or(Arc::new(l), Arc::new(r)),
            })
        }
        Formula::Forall(z, a) => {
            let zv = fresh_var(z, Type::Zero);
            let inner = interpret_with(sig, &a.substitute(z, &SigTerm::Var(zv.name.clone())), opts)?;
            let mut u = vec![zv.clone()];
            u.extend(inner.u.iter().cloned());
            Ok(Interp {
                formula: phi.clone(),
                sh: inner.sh.clone(),
                u,
                x: inner.x.clone(),
                shape: Shape::Forall(zv, Arc::new(inner)),
            })
        }
    }
}

impl Interp {
    pub fn or_parts(&self) -> IResult<(&Interp, &Interp)> {
        match &self.shape {
            Shape::Or(a, b) => Ok((a, b)),
            _ => shape_err(format!("{} is not a disjunction", self.formula)),
        }
    }

    pub fn not_inner(&self) -> IResult<&Interp> {
        match &self.shape {
            Shape::Not(a) => Ok(a),
            _ => shape_err(format!("{} is not a negation", self.formula)),
        }
    }

    /// `φ_Sh[x := ts]`.
    pub fn instantiate(&self, ts: &[Term]) -> OFormula {
        let map: Vec<(Var, Term)> = self.x.iter().cloned().zip(ts.iter().cloned()).collect();
        self.sh.subst(&map)
    }

    /// The free first-order variables of the formula.
    pub fn free_vars(&self) -> Vec<Var> {
        self.formula.free_vars().iter().map(|n| Var::nat(n)).collect()
    }
}

impl fmt::Display for Interp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |vs: &[Var]| {
            let parts: Vec<String> = vs.iter().map(|v| format!("({} {})", v.name, v.ty)).collect();
            format!("({})", parts.join(" "))
        };
        writeln!(f, "formula {}", self.formula)?;
        writeln!(f, "u {}", list(&self.u))?;
        writeln!(f, "x {}", list(&self.x))?;
        write!(f, "sh {}", self.sh)
    }
}

/// Positional renaming of one interpretation's variables into another's.
fn align(from: &Interp, to: &Interp) -> IResult<Vec<(Var, Term)>> {
    let mut out = align_vars(&from.u, &to.u)?;
    out.extend(align_vars(&from.x, &to.x)?);
    Ok(out)
}

fn align_vars(from: &[Var], to: &[Var]) -> IResult<Vec<(Var, Term)>> {
    if from.len() != to.len() {
        return shape_err(format!("{} vs {} variables", from.len(), to.len()));
    }
    let mut out = Vec::new();
    for (a, b) in from.iter().zip(to) {
        if a.ty != b.ty {
            return shape_err(format!("{} : {} vs {} : {}", a, a.ty, b, b.ty));
        }
        if a != b {
            out.push((a.clone(), Term::var(b.clone())));
        }
    }
    Ok(out)
}

fn subst_all(ts: &[Term], map: &[(Var, Term)]) -> Vec<Term> {
    if map.is_empty() {
        return ts.to_vec();
    }
    ts.iter().map(|t| t.subst_beta(map)).collect()
}

/// An interpretation of a step's conclusion with terms for its `x`, open in
/// its `u` and the free variables of the formula.
#[derive(Clone, Debug)]
pub struct Witness {
    pub interp: Arc<Interp>,
    pub terms: Vec<Term>,
}

impl Witness {
    /// `λu.t` for each component.
    pub fn closed_over_u(&self) -> Vec<Term> {
        self.terms.iter().map(|t| Term::lams(&self.interp.u, t.clone())).collect()
    }

    pub fn instantiated(&self) -> OFormula {
        self.interp.instantiate(&self.terms)
    }
}

#[derive(Clone, Debug)]
pub struct WitnessedProof {
    pub proof: CheckedProof,
    pub witnesses: Vec<Witness>,
}

impl WitnessedProof {
    pub fn goal(&self) -> &Witness {
        self.witnesses.last().expect("non-empty proof")
    }
}

/// Extracts a witness for every step.
pub fn extract_witnesses(p: &CheckedProof) -> IResult<WitnessedProof> {
    extract_witnesses_with(p, &mut |_, _| {})
}

/// As [`extract_witnesses`], reporting each step's witness as it is built.
pub fn extract_witnesses_with(p: &CheckedProof, observe: &mut dyn FnMut(usize, &Witness)) -> IResult<WitnessedProof> {
    let proof = p.proof();
    let sig = &proof.signature;
    let mut ws: Vec<Witness> = Vec::with_capacity(proof.steps.len());
    for (i, step) in proof.steps.iter().enumerate() {
        let interp = interpret(sig, &step.conclusion)?;
        let terms = step_witness(sig, &interp, &step.rule, &p.evidence()[i], &ws)
            .map_err(|e| InterpError::Step { step: i, message: format!("{}", e) })?;
        if terms.len() != interp.x.len() {
            return Err(InterpError::Step { step: i, message: format!("{} terms for {} variables", terms.len(), interp.x.len()) });
        }
        let w = Witness { interp: Arc::new(interp), terms };
        observe(i, &w);
        ws.push(w);
    }
    Ok(WitnessedProof { proof: p.clone(), witnesses: ws })
}

fn step_witness(sig: &Signature, i: &Interp, rule: &Rule, ev: &Evidence, ws: &[Witness]) -> IResult<Vec<Term>> {
    match rule {
        Rule::Equality(_) | Rule::Arith(_) | Rule::Gamma(_) => {
            if !i.x.is_empty() {
                return shape_err(format!("universal axiom {} has witness variables", i.formula));
            }
            Ok(Vec::new())
        }
        Rule::ExcludedMiddle => {
            let (na, a2) = i.or_parts()?;
            let f = &na.u;
            let args = vars_terms(&a2.u);
            let mut out = args.clone();
            for fv in f {
                out.push(Term::apps(Term::var(fv.clone()), &args)?);
            }
            Ok(out)
        }
        Rule::Substitution(t) => subst_witness(sig, i, t),
        Rule::Induction => {
            let Evidence::Induction { phi, var } = ev else { return shape_err("missing induction evidence".into()) };
            induction_witness(sig, i, phi, var)
        }
        Rule::OrIntro(j) => {
            let (l, r) = i.or_parts()?;
            let w = &ws[*j];
            let map = align(&w.interp, l)?;
            let mut out = subst_all(&w.terms, &map);
            out.extend(r.x.iter().map(|v| zero_functional(&v.ty)));
            Ok(out)
        }
        Rule::Assoc(j) => {
            let w = &ws[*j];
            Ok(subst_all(&w.terms, &align(&w.interp, i)?))
        }
        Rule::Contraction(j) => contraction_witness(sig, i, &ws[*j]),
        Rule::Cut(j, k) => cut_witness(i, &ws[*j], &ws[*k]),
        Rule::ForallIntro(j) => forall_intro_witness(sig, i, &ws[*j]),
    }
}

fn subst_witness(sig: &Signature, i: &Interp, t: &SigTerm) -> IResult<Vec<Term>> {
    let (na, b) = i.or_parts()?;
    let a = na.not_inner()?;
    let f = &na.u;
    let bu = vars_terms(&b.u);
    let (mut out, fargs) = match &a.shape {
        Shape::Forall(_, inner) => {
            align_vars(&inner.u, &b.u)?;
            let it = embed_term(sig, t)?;
            let mut out = vec![it.clone()];
            out.extend(bu.iter().cloned());
            let mut fargs = vec![it];
            fargs.extend(bu.iter().cloned());
            (out, fargs)
        }
        Shape::Bounded(_, _, inner) => {
            align_vars(&inner.u, &b.u)?;
            (bu.clone(), bu.clone())
        }
        _ => return shape_err(format!("{} is not universal", a.formula)),
    };
    for fv in f {
        out.push(Term::apps(Term::var(fv.clone()), &fargs)?);
    }
    Ok(out)
}

fn contraction_witness(sig: &Signature, i: &Interp, w: &Witness) -> IResult<Vec<Term>> {
    let (a1, a2) = w.interp.or_parts()?;
    let mut map = align_vars(&a1.u, &i.u)?;
    map.extend(align_vars(&a2.u, &i.u)?);
    let n = a1.x.len();
    let w1 = subst_all(&w.terms[..n], &map);
    let w2 = subst_all(&w.terms[n..], &map);
    if w1.iter().zip(&w2).all(|(a, b)| a.alpha_eq(b)) {
        return Ok(w1);
    }
    let b = i.instantiate(&w1).strip_double_negations();
    let dec = decompose(&b)?;
    let cb = case_on_formula(sig, &b, &dec)?;
    let cb = Term::apps(cb, &vars_terms(&b.free_vars()))?;
    w1.iter()
        .zip(&w2)
        .zip(&i.x)
        .map(|((t1, t2), xv)| if t1.alpha_eq(t2) { Ok(t1.clone()) } else { Ok(case_lift(&cb, &xv.ty, t1, t2)?) })
        .collect()
}

fn cut_witness(i: &Interp, w1: &Witness, w2: &Witness) -> IResult<Vec<Term>> {
    let (a, b) = w1.interp.or_parts()?;
    let (na, c) = w2.interp.or_parts()?;
    let (b2, c2) = i.or_parts()?;
    let concl: Vec<Var> = i.free_vars();
    let mut stray: Vec<(Var, Term)> = Vec::new();
    for v in w1.interp.free_vars().into_iter().chain(w2.interp.free_vars()) {
        if !concl.contains(&v) && !stray.iter().any(|(s, _)| *s == v) {
            stray.push((v, Term::zero()));
        }
    }
    let mut m1 = align_vars(&b.u, &b2.u)?;
    m1.extend(stray.iter().cloned());
    let mut m2 = align_vars(&c.u, &c2.u)?;
    m2.extend(stray.iter().cloned());
    let t1 = subst_all(&w1.terms, &m1);
    let t2 = subst_all(&w2.terms, &m2);
    let (ta, tb) = t1.split_at(a.x.len());
    let (sa, sc) = t2.split_at(na.x.len());
    if na.x.len() != a.u.len() {
        return shape_err("cut formula interpretations differ".into());
    }
    let fstar: Vec<(Var, Term)> =
        na.u.iter().zip(ta).map(|(f, t)| (f.clone(), Term::lams(&a.u, t.clone()))).collect();
    let ustar = subst_all(sa, &fstar);
    let umap: Vec<(Var, Term)> = a.u.iter().cloned().zip(ustar).collect();
    let mut out = subst_all(tb, &umap);
    out.extend(subst_all(sc, &fstar));
    Ok(out)
}

fn forall_intro_witness(sig: &Signature, i: &Interp, w: &Witness) -> IResult<Vec<Term>> {
    let (l, _) = i.or_parts()?;
    match &l.shape {
        Shape::Forall(z, _) => {
            let mut map = align_vars(&w.interp.u, &without(&i.u, z))?;
            let (x, _) = l.formula.as_forall().ok_or_else(|| InterpError::Shape("not universal".into()))?;
            map.push((Var::nat(x), Term::var(z.clone())));
            Ok(subst_all(&w.terms, &map))
        }
        Shape::Bounded(zv, bound, inner) => {
            if !inner.x.is_empty() {
                return shape_err(format!("bounded generalization over {} with witness variables", inner.formula));
            }
            let map = align_vars(&w.interp.u, &i.u)?;
            let wb = subst_all(&w.terms, &map);
            let c = OFormula::not(inner.sh.clone()).strip_double_negations();
            let xstar = if c.has_free(zv) {
                let fv = c.free_vars();
                let idx = fv.iter().position(|v| v == zv).expect("free variable");
                let dec = decompose(&c)?;
                let am = argmax_b(sig, &c, &dec, idx)?;
                let mut args: Vec<Term> =
                    fv.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, v)| Term::var(v.clone())).collect();
                args.push(Term::succ(bound.clone()));
                Term::apps(am, &args)?
            } else {
                Term::zero()
            };
            Ok(subst_all(&wb, &[(zv.clone(), xstar)]))
        }
        _ => shape_err(format!("{} is not universal", l.formula)),
    }
}

fn without(vs: &[Var], z: &Var) -> Vec<Var> {
    vs.iter().filter(|v| *v != z).cloned().collect()
}

/// The witnesses `x* := a_B u f y`, `z := R_{u,f} x*`, `v := R_{u,f} y` of the
/// induction instance for `φ = ∃z̄ A`, before lifting through the double
/// negation: returns `([x*, R x*...], [R y...])`.
pub fn induction_triple(
    sig: &Signature,
    phi: &Formula,
    xname: &str,
    u0s: &[Var],
    fs: &[Var],
    y: &Var,
) -> IResult<(Vec<Term>, Vec<Term>)> {
    let Some((zs, matrix)) = phi.existential_matrix() else {
        return Err(InterpError::UnsupportedInduction(format!("{}", phi)));
    };
    if u0s.len() != zs.len() || fs.len() != zs.len() {
        return Err(InterpError::UnsupportedInduction(format!("{}", phi)));
    }
    let rs: Vec<Term> = match zs.len() {
        0 => Vec::new(),
        1 => vec![recursor(Term::var(u0s[0].clone()), Term::var(fs[0].clone()))?],
        _ => simultaneous_recursor(vars_terms(u0s), vars_terms(fs))?,
    };
    let ia = embed_formula(sig, matrix)?;
    let at = |t: Term| -> IResult<OFormula> {
        let mut map = vec![(Var::nat(xname), t.clone())];
        for (z, rj) in zs.iter().zip(&rs) {
            map.push((Var::nat(z), Term::app(rj.clone(), t.clone())?));
        }
        Ok(ia.subst(&map))
    };
    let w = fresh_var("w", Type::Zero);
    let wt = Term::var(w.clone());
    let b = OFormula::and(
        at(wt.clone())?.strip_double_negations(),
        OFormula::not(at(Term::succ(wt))?).strip_double_negations(),
    );
    let yt = Term::var(y.clone());
    let xstar = if b.has_free(&w) {
        let fv = b.free_vars();
        let idx = fv.iter().position(|v| *v == w).expect("free variable");
        let dec = decompose(&b)?;
        let am = argmax_b(sig, &b, &dec, idx)?;
        let mut args: Vec<Term> =
            fv.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, v)| Term::var(v.clone())).collect();
        args.push(yt.clone());
        Term::apps(am, &args)?
    } else {
        Term::zero()
    };
    let mut tx = vec![xstar.clone()];
    for rj in &rs {
        tx.push(Term::app(rj.clone(), xstar.clone())?);
    }
    let tv: Vec<Term> = rs.iter().map(|rj| Term::app(rj.clone(), yt.clone())).collect::<Result<_, _>>()?;
    Ok((tx, tv))
}

/// Witnesses for `¬¬(¬φ(0) ∨ ¬∀x(¬φ ∨ φ(Sx))) ∨ ∀xφ`, `φ` existential.
fn induction_witness(sig: &Signature, i: &Interp, phi: &Formula, xname: &str) -> IResult<Vec<Term>> {
    let Some((zs, _)) = phi.existential_matrix() else {
        return Err(InterpError::UnsupportedInduction(format!("{}", phi)));
    };
    let n = zs.len();
    let (l, r) = i.or_parts()?;
    let nx = l.not_inner()?;
    let x_node = nx.not_inner()?;
    let (not_base, not_step) = x_node.or_parts()?;
    let u0s = &not_base.u;
    let fs = &not_step.u;
    let y = match &r.shape {
        Shape::Forall(y, _) => y.clone(),
        _ => return shape_err("induction conclusion is not universal".into()),
    };
    if u0s.len() != n || fs.len() != n || x_node.x.len() != n + 1 || r.x.len() != n {
        return Err(InterpError::UnsupportedInduction(format!("{}", phi)));
    }
    let (tx, tv) = induction_triple(sig, phi, xname, u0s, fs, &y)?;

    // lift through the double negation: g := λU.tx, U := h g
    let us: Vec<Var> = u0s.iter().chain(fs).cloned().collect();
    let gs: Vec<Term> = tx.iter().map(|t| Term::lams(&us, t.clone())).collect();
    let hs = &l.u;
    if hs.len() != us.len() {
        return shape_err("induction premise interpretation differs".into());
    }
    let umap = hs
        .iter()
        .zip(&us)
        .map(|(h, u)| Ok((u.clone(), Term::apps(Term::var(h.clone()), &gs)?)))
        .collect::<IResult<Vec<_>>>()?;
    let mut out = gs;
    out.extend(subst_all(&tv, &umap));
    Ok(out)
}

/// The closed witness term for a goal `∃x A`.
pub fn extract_existential_witness(wp: &WitnessedProof) -> IResult<Term> {
    let goal = wp.goal();
    let f = &goal.interp.formula;
    let (x, _) = f.as_exists().ok_or_else(|| InterpError::Shape(format!("{} is not existential", f)))?;
    if !goal.interp.u.is_empty() || goal.terms.len() != 1 || !f.is_closed() {
        return shape_err(format!("goal {} is not a closed existential formula in one variable", f));
    }
    let t = goal.terms[0].clone();
    if !t.is_closed() {
        return shape_err(format!("witness for {} is not closed", x));
    }
    Ok(t)
}

/// Outcome of sampling one step's interpreted formula.
#[derive(Clone, Debug, Default)]
pub struct StepCheck {
    pub samples: usize,
    pub failures: Vec<String>,
    pub errors: Vec<String>,
}

impl StepCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }
}

/// Evaluates `φ_Sh[x := t]` under sampled values of `u` and the free variables.
pub fn check_witness(m: &Structure, w: &Witness, seed: u64, fuel: u64) -> StepCheck {
    let body = w.instantiated();
    let mut vars = w.interp.u.clone();
    for v in w.interp.free_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let mut report = StepCheck::default();
    for val in sample_valuations(&vars, seed) {
        let mut ev = Evaluator::with_fuel(m, fuel);
        let mut env = Env::new();
        let mut bad = None;
        for (v, t) in &val {
            match ev.eval(t, &Env::new()) {
                Ok(x) => env = env.bind(v.clone(), x),
                Err(e) => bad = Some(e),
            }
        }
        report.samples += 1;
        let res: Result<bool, SemError> = match bad {
            Some(e) => Err(e),
            None => ev.eval_oformula(&body, &env),
        };
        match res {
            Ok(true) => {}
            Ok(false) => report.failures.push(describe(&val)),
            Err(e) => report.errors.push(format!("{}: {}", describe(&val), e)),
        }
    }
    report
}

fn describe(val: &[(Var, Term)]) -> String {
    let parts: Vec<String> = val.iter().map(|(v, t)| format!("{}={}", v.name, t.render(2))).collect();
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::{numeral, recursor, OFormula};
    use crate::proof::{check_proof, induction_instance, metastability_proof, EqAxiom, ProofBuilder, Theory};
    use crate::semantics::eval_direct;
    use crate::semantics::tests::{metastability_sig, metastability_spec};

    fn types(vs: &[Var]) -> Vec<String> {
        vs.iter().map(|v| format!("{}", v.ty)).collect()
    }

    fn q_sig() -> Signature {
        let mut s = Signature::standard();
        s.add_relation("Q", 2).unwrap();
        s
    }

    #[test]
    fn atom_has_empty_tuples() {
        let sig = metastability_sig();
        let a = Formula::atom("P", vec![SigTerm::var("x"), SigTerm::zero(), SigTerm::numeral(1)]);
        let i = interpret(&sig, &a).unwrap();
        assert!(i.u.is_empty() && i.x.is_empty());
        assert_eq!(i.sh, embed_formula(&sig, &a).unwrap());
    }

    #[test]
    fn existential_shape() {
        let sig = metastability_sig();
        let a = Formula::atom("P", vec![SigTerm::var("x"), SigTerm::zero(), SigTerm::numeral(1)]);
        let e = Formula::exists("x", a.clone());
        let i = interpret(&sig, &e).unwrap();
        assert!(i.u.is_empty());
        assert_eq!(types(&i.x), vec!["0"]);
        let x = Term::var(i.x[0].clone());
        let ia = embed_formula(&sig, &a).unwrap().subst(&[(Var::nat("x"), x)]);
        assert!(i.sh.alpha_eq(&OFormula::not(OFormula::not(ia.clone()))));
        let c = interpret_with(&sig, &e, InterpOptions { collapse_double_negation: true }).unwrap();
        assert_eq!(types(&c.x), vec!["0"]);
        let xc = Term::var(c.x[0].clone());
        let iac = embed_formula(&sig, &a).unwrap().subst(&[(Var::nat("x"), xc)]);
        assert!(c.sh.alpha_eq(&iac), "{} vs {}", c.sh, iac);
    }

    #[test]
    fn induction_tuples() {
        let sig = q_sig();
        let phi = Formula::exists("z", Formula::atom("Q", vec![SigTerm::var("x"), SigTerm::var("z")]));
        let psi = induction_instance(Theory::ISigma1, &phi, "x").unwrap();
        let i = interpret_with(&sig, &psi, InterpOptions { collapse_double_negation: true }).unwrap();
        assert_eq!(types(&i.u), vec!["0", "(-> 0 (-> 0 0))", "0"]);
        assert_eq!(types(&i.x), vec!["0", "0", "0"]);
        let lit = interpret(&sig, &psi).unwrap();
        assert_eq!(lit.u.len(), 3);
        assert_eq!(lit.x.len(), 3);
    }

    #[test]
    fn induction_triple_matches() {
        let sig = q_sig();
        let phi = Formula::exists("z", Formula::atom("Q", vec![SigTerm::var("x"), SigTerm::var("z")]));
        let u = Var::nat("u");
        let f = Var { name: crate::syntax::name("f"), ty: Type::arrow(Type::Zero, Type::nat_fn(1)) };
        let y = Var::nat("y");
        let (tx, tv) = induction_triple(&sig, &phi, "x", &[u.clone()], &[f.clone()], &y).unwrap();
        let r = recursor(Term::var(u.clone()), Term::var(f.clone())).unwrap();
        let w = Var::nat("w");
        let q = |t: Term| OFormula::Atom(crate::syntax::name("Q"), vec![t.clone(), Term::app(r.clone(), t).unwrap()]);
        let b = OFormula::and(q(Term::var(w.clone())), OFormula::not(q(Term::succ(Term::var(w.clone())))));
        let am = argmax_b(&sig, &b, &decompose(&b).unwrap(), 0).unwrap();
        let xstar = Term::apps(am, &[Term::var(u.clone()), Term::var(f.clone()), Term::var(y.clone())]).unwrap();
        // recursors are compared by behaviour: sequence identity differs
        let (h, args) = tx[0].spine();
        assert!(h.as_lam().is_some());
        assert!(args.iter().map(|a| &*a.as_var().unwrap().name).eq(["u", "f", "y"]));
        let m = Structure::new(&sig, &q_structure()).unwrap();
        let want = [xstar.clone(), Term::app(r.clone(), xstar).unwrap(), Term::app(r, Term::var(y.clone())).unwrap()];
        let got = [tx[0].clone(), tx[1].clone(), tv[0].clone()];
        for val in sample_valuations(&[u, f, y], 3) {
            for (a, b) in got.iter().zip(&want) {
                let (a, b) = (a.subst(&val), b.subst(&val));
                assert_eq!(eval_direct(&m, &a).unwrap(), eval_direct(&m, &b).unwrap());
            }
        }
    }

    fn q_structure() -> crate::semantics::StructureSpec {
        use crate::semantics::{CmpOp, Cond, Expr};
        let n = |s: &str| crate::syntax::name(s);
        crate::semantics::StructureSpec {
            rels: vec![(n("Q"), vec![n("a"), n("b")], Cond::Cmp(CmpOp::Lt, Expr::name("a"), Expr::name("b")))],
            ..Default::default()
        }
    }

    #[test]
    fn excluded_middle_is_sound() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let p = |a: &str, b: &str| Formula::atom("P", vec![SigTerm::var(a), SigTerm::var(b), SigTerm::numeral(1)]);
        for phi in [p("x", "y"), Formula::exists("y", p("x", "y")), Formula::forall("x", Formula::exists("y", p("x", "y")))] {
            let mut b = ProofBuilder::new(Theory::ISigma1, sig.clone(), Vec::new());
            b.em(&phi);
            let wp = extract_witnesses(&b.check().unwrap()).unwrap();
            let r = check_witness(&m, wp.goal(), 1, 1_000_000);
            assert!(r.passed() && r.samples > 0, "{} {:?}", phi, r);
        }
    }

    #[test]
    fn trivial_existential() {
        let sig = Signature::standard();
        let goal = Formula::exists("x", Formula::eq(SigTerm::var("x"), SigTerm::zero()));
        let mut b = ProofBuilder::new(Theory::ISigma1, sig.clone(), Vec::new());
        let r = b.equality(EqAxiom::Refl).unwrap();
        let i = b.instantiate(r, &SigTerm::zero()).unwrap();
        let j = b.or_intro(i, &goal);
        let k = b.exists_intro(j, "x", &Formula::eq(SigTerm::var("x"), SigTerm::zero()), &SigTerm::zero()).unwrap();
        b.contract(k).unwrap();
        let wp = extract_witnesses(&b.check().unwrap()).unwrap();
        let t = extract_existential_witness(&wp).unwrap();
        assert!(t.is_closed());
        let m = Structure::new(&sig, &Default::default()).unwrap();
        assert_eq!(eval_direct(&m, &t).unwrap(), num_bigint::BigUint::from(0u32));
    }

    #[test]
    fn corpus_steps_sound() {
        let p = check_proof(metastability_proof().unwrap()).unwrap();
        let wp = extract_witnesses(&p).unwrap();
        let m = Structure::new(&metastability_sig(), &metastability_spec(2, 1)).unwrap();
        for (i, w) in wp.witnesses.iter().enumerate() {
            assert_eq!(w.terms.len(), w.interp.x.len());
            let mut scope = w.interp.u.clone();
            scope.extend(w.interp.free_vars());
            for (t, x) in w.terms.iter().zip(&w.interp.x) {
                assert_eq!(t.ty(), &x.ty, "step {}", i);
                assert!(t.fv().iter().all(|v| scope.contains(v)), "step {}: {}", i, t);
            }
        }
        // sampled soundness on every fourth step; the full sweep runs in the acceptance suite
        for (i, w) in wp.witnesses.iter().enumerate().step_by(4) {
            let r = check_witness(&m, w, i as u64, 1_000_000);
            assert!(r.passed(), "step {} {}: {:?}", i, p.proof().steps[i].rule, r);
        }
        let t = extract_existential_witness(&wp).unwrap();
        assert_eq!(eval_direct(&m, &t).unwrap(), num_bigint::BigUint::from(1u32));
    }

    #[test]
    fn wrong_witness_fails() {
        let p = check_proof(metastability_proof().unwrap()).unwrap();
        let wp = extract_witnesses(&p).unwrap();
        let m = Structure::new(&metastability_sig(), &metastability_spec(2, 1)).unwrap();
        let mut w = wp.goal().clone();
        w.terms = vec![numeral(0)];
        assert!(!check_witness(&m, &w, 0, 1_000_000).passed());
        w.terms = vec![numeral(1)];
        assert!(check_witness(&m, &w, 0, 1_000_000).passed());
    }
}
