//! Reduction of ω-terms: β, sequence permutation and sequence indexing.
//!
//! Normalization is leftmost-outermost along the spine. A sequence applied to
//! an argument first normalizes that argument; if it is a numeral the branch is
//! selected, otherwise a non-zero sequence absorbs the pending arguments and a
//! zero sequence stays in place.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::omega::{numeral, CaseConst, Gen, Kind, Seq, Term};
use crate::syntax::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: u64,
    pub max_demand: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { max_steps: 100_000, max_demand: 1_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Beta,
    SeqPermute,
    SeqIndex,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Beta => "beta",
            Rule::SeqPermute => "seqPermute",
            Rule::SeqIndex => "seqIndex",
        })
    }
}

/// One step of a path into a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pos {
    /// Function part of an application.
    Fun,
    /// Argument part of an application.
    Arg,
    /// Body of a λ-abstraction.
    Body,
    /// A branch of a sequence.
    Branch(u64),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Path(pub Vec<Pos>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            match p {
                Pos::Fun => f.write_str("f")?,
                Pos::Arg => f.write_str("a")?,
                Pos::Body => f.write_str("b")?,
                Pos::Branch(n) => write!(f, "n{}", n)?,
            }
        }
        Ok(())
    }
}

impl Path {
    pub fn parse(s: &str) -> Option<Path> {
        if s == "root" || s.is_empty() {
            return Some(Path(Vec::new()));
        }
        s.split('.')
            .map(|seg| match seg {
                "f" => Some(Pos::Fun),
                "a" => Some(Pos::Arg),
                "b" => Some(Pos::Body),
                _ => seg.strip_prefix('n')?.parse().ok().map(Pos::Branch),
            })
            .collect::<Option<Vec<_>>>()
            .map(Path)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub n: u64,
    pub rule: Rule,
    pub position: String,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "STEP {} {} {}", self.n, self.rule, self.position)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RewriteError {
    StepBudget { steps: u64 },
    DemandBudget { depth: usize },
    NoRedex(String),
    BadPosition(String),
    Spine(String),
}

impl fmt::Display for RewriteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewriteError::StepBudget { steps } => write!(f, "step budget exhausted after {} steps", steps),
            RewriteError::DemandBudget { depth } => write!(f, "demand depth budget exhausted at depth {}", depth),
            RewriteError::NoRedex(p) => write!(f, "no redex at position {}", p),
            RewriteError::BadPosition(p) => write!(f, "position {} does not exist", p),
            RewriteError::Spine(s) => write!(f, "normal-form spine violation: {}", s),
        }
    }
}

/// Normalizer state: budgets, counters and an optional trace.
pub struct Engine {
    budget: Budget,
    steps: u64,
    depth: usize,
    max_depth: usize,
    trace: Option<Vec<TraceStep>>,
    path: Vec<Pos>,
    // normal forms of shared non-normal subterms, keyed by address; the key term is kept alive
    memo: BTreeMap<usize, (Term, Term)>,
}

impl Engine {
    pub fn new(budget: Budget) -> Engine {
        Engine { budget, steps: 0, depth: 0, max_depth: 0, trace: None, path: Vec::new(), memo: BTreeMap::new() }
    }

    pub fn with_trace(budget: Budget) -> Engine {
        let mut e = Engine::new(budget);
        e.trace = Some(Vec::new());
        e
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Deepest nesting of branch demands so far.
    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn trace(&self) -> &[TraceStep] {
        self.trace.as_deref().unwrap_or(&[])
    }

    fn record(&mut self, rule: Rule, extra: &[Pos]) -> Result<(), RewriteError> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(RewriteError::StepBudget { steps: self.budget.max_steps });
        }
        if let Some(tr) = &mut self.trace {
            let mut p = self.path.clone();
            p.extend_from_slice(extra);
            tr.push(TraceStep { n: self.steps, rule, position: Path(p).to_string() });
        }
        Ok(())
    }

    fn tracing(&self) -> bool {
        self.trace.is_some()
    }

    fn push_spine_arg(&mut self, i: usize, len: usize) -> usize {
        if !self.tracing() {
            return 0;
        }
        for _ in 0..(len - 1 - i) {
            self.path.push(Pos::Fun);
        }
        self.path.push(Pos::Arg);
        len - i
    }

    fn pop(&mut self, k: usize) {
        let n = self.path.len() - k;
        self.path.truncate(n);
    }

    fn head_path(len: usize) -> Vec<Pos> {
        alloc::vec![Pos::Fun; len.saturating_sub(1)]
    }

    /// Normal form on the demanded spine.
    pub fn normalize(&mut self, t: &Term) -> Result<Term, RewriteError> {
        if t.is_marked_normal() {
            return Ok(t.clone());
        }
        if t.as_numeral().is_some() {
            t.mark_normal();
            return Ok(t.clone());
        }
        if let Some((_, nf)) = self.memo.get(&t.addr()) {
            return Ok(nf.clone());
        }
        let nf = self.normalize_spine(t)?;
        self.memo.insert(t.addr(), (t.clone(), nf.clone()));
        Ok(nf)
    }

    fn normalize_spine(&mut self, t: &Term) -> Result<Term, RewriteError> {
        let (mut head, mut args) = t.spine();
        args.reverse();
        // `args` is a stack; the next argument is at the end.
        loop {
            match head.kind().clone() {
                Kind::Lam(x, body) => {
                    let Some(a) = args.pop() else {
                        let k = if self.tracing() {
                            self.path.push(Pos::Body);
                            1
                        } else {
                            0
                        };
                        let body = self.normalize(&body);
                        self.pop(k);
                        let out = Term::lam(x, body?);
                        out.mark_normal();
                        return Ok(out);
                    };
                    self.record(Rule::Beta, &Self::head_path(args.len() + 1))?;
                    head = body.subst1(&x, &a);
                    let (h, mut more) = head.spine();
                    more.reverse();
                    args.extend(more);
                    head = h;
                }
                Kind::Seq(s) => {
                    let Some(first) = args.pop() else {
                        let out = Term::seq(s.normalized());
                        out.mark_normal();
                        return Ok(out);
                    };
                    let len = args.len() + 1;
                    let k = self.push_spine_arg(0, len);
                    let first = self.normalize(&first);
                    self.pop(k);
                    let first = first?;
                    if let Some(m) = first.as_numeral() {
                        let hp = Self::head_path(len);
                        self.record(Rule::SeqIndex, &hp)?;
                        if self.tracing() {
                            self.path.extend_from_slice(&hp);
                            self.path.push(Pos::Branch(m));
                        }
                        let branch = self.normal_branch(&s, m);
                        if self.tracing() {
                            self.pop(hp.len() + 1);
                        }
                        let (h, mut more) = branch?.spine();
                        more.reverse();
                        args.extend(more);
                        head = h;
                        continue;
                    }
                    if s.is_zero() || args.is_empty() {
                        let mut out = Term::app(Term::seq(s.normalized()), first).expect("typing preserved");
                        out.mark_normal();
                        if !args.is_empty() {
                            return Err(RewriteError::Spine(format!("zero sequence applied to {} arguments", len)));
                        }
                        out = self.finish(out, Vec::new())?;
                        return Ok(out);
                    }
                    let next = args.pop().expect("nonempty");
                    self.record(Rule::SeqPermute, &Self::head_path(len - 1))?;
                    let permuted = Seq::applied(s, next).expect("typing preserved");
                    head = Term::seq(permuted);
                    args.push(first);
                }
                Kind::Var(_) | Kind::Const(..) | Kind::Case(_) => {
                    args.reverse();
                    return self.finish(head, args);
                }
                Kind::App(..) => unreachable!("spine head is never an application"),
            }
        }
    }

    fn finish(&mut self, head: Term, args: Vec<Term>) -> Result<Term, RewriteError> {
        let len = args.len();
        let mut out = head;
        for (i, a) in args.iter().enumerate() {
            let k = self.push_spine_arg(i, len);
            let a = self.normalize(a);
            self.pop(k);
            out = Term::app(out, a?).expect("typing preserved");
        }
        out.mark_normal();
        Ok(out)
    }

    /// Normal form of branch `n` of `s`, memoized on the normalized view.
    pub fn normal_branch(&mut self, s: &Seq, n: u64) -> Result<Term, RewriteError> {
        let view = s.normalized();
        if let Some(t) = view.memoized(n) {
            return Ok(t);
        }
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        let r = if self.depth > self.budget.max_demand {
            Err(RewriteError::DemandBudget { depth: self.budget.max_demand })
        } else {
            self.compute_branch(&view, n)
        };
        self.depth -= 1;
        let t = r?;
        t.mark_normal();
        Ok(view.fill(n, t))
    }

    fn compute_branch(&mut self, view: &Seq, n: u64) -> Result<Term, RewriteError> {
        let Gen::Normal { inner } = view.gen() else { unreachable!("normalized view") };
        match inner.gen() {
            Gen::Recursor { base, step } => {
                let (mut k, mut t) = match view.memo_floor(n) {
                    Some(p) => p,
                    None => {
                        let b = self.normalize(base)?;
                        b.mark_normal();
                        (0, view.fill(0, b))
                    }
                };
                while k < n {
                    let next = Term::apps(step.clone(), &[numeral(k), t]).expect("recursor typing");
                    let next = self.normalize(&next)?;
                    k += 1;
                    t = view.fill(k, next);
                }
                Ok(t)
            }
            Gen::SimRec { group, index } => {
                if group.normal_levels_len() == 0 {
                    let level = group.bases().iter().map(|b| self.normalize(b)).collect::<Result<Vec<_>, _>>()?;
                    group.push_normal_level(0, level);
                }
                let mut k = group.normal_levels_len() - 1;
                while k < n {
                    let prev = group.normal_level(k).expect("recorded level");
                    let mut args = alloc::vec![numeral(k)];
                    args.extend(prev);
                    let level = group
                        .steps()
                        .iter()
                        .map(|s| self.normalize(&Term::apps(s.clone(), &args).expect("simultaneous typing")))
                        .collect::<Result<Vec<_>, _>>()?;
                    k += 1;
                    group.push_normal_level(k, level);
                }
                Ok(group.normal_level(n).expect("recorded level")[*index].clone())
            }
            Gen::Table { .. } => self.normalize(&inner.raw_branch(n)),
            Gen::Apply { inner, arg } => {
                let b = self.normal_branch(inner, n)?;
                self.normalize(&Term::app(b, arg.clone()).expect("permutation typing"))
            }
            Gen::Subst { inner, map } => {
                let b = self.normal_branch(inner, n)?;
                self.normalize(&b.subst(map))
            }
            Gen::Normal { .. } => unreachable!("views are not nested"),
        }
    }
}

/// Normalizes with default bookkeeping.
pub fn normalize(t: &Term, budget: Budget) -> Result<Term, RewriteError> {
    Engine::new(budget).normalize(t)
}

fn redex(t: &Term) -> Option<(Rule, Term)> {
    let (f, a) = t.as_app()?;
    if let Some((x, body)) = f.as_lam() {
        return Some((Rule::Beta, body.subst1(x, a)));
    }
    if let Some(s) = f.as_seq() {
        let m = a.as_numeral()?;
        return Some((Rule::SeqIndex, s.raw_branch(m)));
    }
    if let Some((g, r)) = f.as_app() {
        if let Some(s) = g.as_seq() {
            if !s.is_zero() {
                let permuted = Seq::applied(s.clone(), a.clone()).ok()?;
                return Some((Rule::SeqPermute, Term::app(Term::seq(permuted), r.clone()).ok()?));
            }
        }
    }
    None
}

/// Contracts the redex at `path`.
pub fn step_at(t: &Term, path: &Path) -> Result<(Rule, Term), RewriteError> {
    step_in(t, &path.0).map_err(|e| match e {
        StepErr::NoRedex => RewriteError::NoRedex(path.to_string()),
        StepErr::BadPosition => RewriteError::BadPosition(path.to_string()),
    })
}

enum StepErr {
    NoRedex,
    BadPosition,
}

fn step_in(t: &Term, path: &[Pos]) -> Result<(Rule, Term), StepErr> {
    let Some((first, rest)) = path.split_first() else {
        return redex(t).ok_or(StepErr::NoRedex);
    };
    match (first, t.kind()) {
        (Pos::Fun, Kind::App(f, a)) => {
            let (r, f2) = step_in(f, rest)?;
            Ok((r, Term::app(f2, a.clone()).expect("typing preserved")))
        }
        (Pos::Arg, Kind::App(f, a)) => {
            let (r, a2) = step_in(a, rest)?;
            Ok((r, Term::app(f.clone(), a2).expect("typing preserved")))
        }
        (Pos::Body, Kind::Lam(x, b)) => {
            let (r, b2) = step_in(b, rest)?;
            Ok((r, Term::lam(x.clone(), b2)))
        }
        (Pos::Branch(n), Kind::Seq(s)) => {
            let (r, b2) = step_in(&s.raw_branch(*n), rest)?;
            let (old, n) = (s.clone(), *n);
            let mut fv = old.fv().to_vec();
            for v in b2.fv() {
                if !fv.contains(v) {
                    fv.push(v.clone());
                }
            }
            let f = Arc::new(move |m: u64| if m == n { b2.clone() } else { old.raw_branch(m) });
            Ok((r, Term::seq(Seq::table("step", s.elem().clone(), fv, f))))
        }
        _ => Err(StepErr::BadPosition),
    }
}

/// Head of a normal closed type-0 spine.
#[derive(Clone, Debug)]
pub enum SpineHead {
    Const(Name, usize),
    Case(Arc<CaseConst>),
    Seq(Seq),
}

/// Splits a normal closed type-0 term as `f s1 ... sk` with each `si` of type 0.
pub fn analyze_spine(s: &Term) -> Result<(SpineHead, Vec<Term>), RewriteError> {
    if !s.ty().is_zero() {
        return Err(RewriteError::Spine(format!("term of type {} is not of type 0", s.ty())));
    }
    let (head, args) = s.spine();
    if let Some(a) = args.iter().find(|a| !a.ty().is_zero()) {
        return Err(RewriteError::Spine(format!("argument of type {} on the spine", a.ty())));
    }
    let h = match head.kind() {
        Kind::Const(c, n) => SpineHead::Const(c.clone(), *n),
        Kind::Case(c) => SpineHead::Case(c.clone()),
        Kind::Seq(q) if q.is_zero() => SpineHead::Seq(q.clone()),
        Kind::Seq(q) => return Err(RewriteError::Spine(format!("non-zero sequence of type {} on the spine", q.elem()))),
        Kind::Lam(..) => return Err(RewriteError::Spine("λ-expression on the spine".into())),
        Kind::Var(v) => return Err(RewriteError::Spine(format!("free variable {} on the spine", v))),
        Kind::App(..) => unreachable!("spine head"),
    };
    Ok((h, args))
}

/// Checks the spine lemma on `s` and on every argument and demanded branch below it.
pub fn check_normal_structure(s: &Term) -> Result<usize, RewriteError> {
    let mut seen = alloc::collections::BTreeSet::new();
    let mut todo = alloc::vec![s.clone()];
    let mut count = 0;
    while let Some(t) = todo.pop() {
        if !seen.insert(t.addr()) {
            continue;
        }
        count += 1;
        let (h, args) = analyze_spine(&t)?;
        if let SpineHead::Seq(q) = h {
            let view = q.normalized();
            for n in view.demanded() {
                todo.push(view.memoized(n).expect("demanded"));
            }
        }
        todo.extend(args);
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::{recursor, Type, Var};
    use alloc::string::ToString;
    use alloc::vec;

    fn g() -> Term {
        Term::constant("g", 1)
    }

    fn g_iter(n: u64) -> Term {
        (0..n).fold(Term::zero(), |t, _| Term::app(g(), t).unwrap())
    }

    fn r_prime() -> Term {
        let v = Var::nat("v");
        let w = Var::nat("w");
        let step = Term::lams(&[v, w.clone()], Term::app(g(), Term::var(w)).unwrap());
        recursor(Term::app(g(), Term::zero()).unwrap(), step).unwrap()
    }

    #[test]
    fn beta_identity() {
        let x = Var::nat("x");
        let t = Term::app(Term::lam(x.clone(), Term::var(x)), Term::zero()).unwrap();
        let (rule, out) = step_at(&t, &Path::default()).unwrap();
        assert_eq!(rule, Rule::Beta);
        assert_eq!(out.as_numeral(), Some(0));
        assert!(matches!(step_at(&out, &Path::default()), Err(RewriteError::NoRedex(_))));
    }

    #[test]
    fn seq_index_at_two() {
        let t = Term::app(r_prime(), numeral(2)).unwrap();
        let out = normalize(&t, Budget::default()).unwrap();
        assert!(out.alpha_eq(&g_iter(3)));
        let (rule, raw) = step_at(&t, &Path::default()).unwrap();
        assert_eq!(rule, Rule::SeqIndex);
        assert!(normalize(&raw, Budget::default()).unwrap().alpha_eq(&g_iter(3)));
    }

    #[test]
    fn recursor_normal_branches() {
        let r = r_prime();
        let nf = normalize(&r, Budget::default()).unwrap();
        let s = nf.as_seq().unwrap().clone();
        let mut e = Engine::new(Budget::default());
        for n in 0..12 {
            assert!(e.normal_branch(&s, n).unwrap().alpha_eq(&g_iter(n + 1)));
        }
        let again = e.normal_branch(&s, 5).unwrap();
        assert!(again.ptr_eq(&e.normal_branch(&s, 5).unwrap()));
    }

    #[test]
    fn permutation_branches() {
        let x = Var::nat("x");
        let tab = Seq::table(
            "t",
            Type::nat_fn(1),
            vec![],
            Arc::new(move |n| Term::lam(x.clone(), Term::apps(Term::constant("k2", 2), &[numeral(n), Term::var(x.clone())]).unwrap())),
        );
        let r = Term::constant("c", 0);
        let t = Term::apps(Term::seq(tab), &[r, Term::zero()]).unwrap();
        let (rule, out) = step_at(&t, &Path::default()).unwrap();
        assert_eq!(rule, Rule::SeqPermute);
        let (h, args) = out.spine();
        assert_eq!(args.len(), 1);
        let b3 = h.as_seq().unwrap().raw_branch(3);
        let nb = normalize(&b3, Budget::default()).unwrap();
        assert_eq!(nb.to_string(), "(k2 (S (S (S 0))) 0)");
    }

    #[test]
    fn zero_seq_on_non_numeral_stays() {
        let t = Term::app(r_prime(), Term::constant("k", 0)).unwrap();
        let mut e = Engine::with_trace(Budget::default());
        let out = e.normalize(&t).unwrap();
        let (h, args) = analyze_spine(&out).unwrap();
        assert!(matches!(h, SpineHead::Seq(_)));
        assert_eq!(args[0].to_string(), "k");
        assert_eq!(e.steps(), 0);
    }

    #[test]
    fn trace_and_budget() {
        let t = Term::app(r_prime(), numeral(3)).unwrap();
        let mut e = Engine::with_trace(Budget::default());
        e.normalize(&t).unwrap();
        assert_eq!(e.trace()[0].to_string(), "STEP 1 seqIndex root");
        assert!(e.trace().iter().skip(1).all(|s| s.rule == Rule::Beta));
        let tight = Budget { max_steps: 2, max_demand: 10 };
        let t = Term::app(r_prime(), numeral(30)).unwrap();
        assert!(matches!(normalize(&t, tight), Err(RewriteError::StepBudget { .. })));
    }

    #[test]
    fn spine_violations() {
        let x = Var::nat("x");
        let lam = Term::lam(x.clone(), Term::var(x));
        assert!(analyze_spine(&lam).is_err());
        let s2 = Term::succ(numeral(1));
        let (h, args) = analyze_spine(&s2).unwrap();
        assert!(matches!(h, SpineHead::Const(ref c, 1) if &**c == "S"));
        assert_eq!(args[0].as_numeral(), Some(1));
    }

    #[test]
    fn path_round_trip() {
        let p = Path(vec![Pos::Fun, Pos::Arg, Pos::Branch(4), Pos::Body]);
        assert_eq!(p.to_string(), "f.a.n4.b");
        assert_eq!(Path::parse("f.a.n4.b"), Some(p));
        assert_eq!(Path::parse("root"), Some(Path::default()));
    }
}
