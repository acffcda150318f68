//! Finite types and ω-terms with demand-driven infinite sequence nodes.

mod build;
mod formula;

pub use build::*;
pub use formula::*;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use spin::{Mutex, Once};

use crate::syntax::{name, Formula, Name, SUCC, ZERO};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Zero,
    Arrow(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Arc::new(a), Arc::new(b))
    }

    /// `0^n -> 0`.
    pub fn nat_fn(n: usize) -> Type {
        (0..n).fold(Type::Zero, |acc, _| Type::arrow(Type::Zero, acc))
    }

    /// `(r1, ..., rn) -> t`, curried.
    pub fn tuple_arrow(args: &[Type], res: &Type) -> Type {
        args.iter().rev().fold(res.clone(), |acc, a| Type::arrow(a.clone(), acc))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Type::Zero)
    }

    /// Argument types up to the final `0`.
    pub fn arg_types(&self) -> Vec<Type> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Type::Arrow(a, b) = cur {
            out.push((**a).clone());
            cur = b;
        }
        out
    }

    pub fn split(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            Type::Zero => None,
        }
    }
}

/// `rs -> ts`, componentwise.
pub fn tuple_arrows(rs: &[Type], ts: &[Type]) -> Vec<Type> {
    ts.iter().map(|t| Type::tuple_arrow(rs, t)).collect()
}

pub fn zeros(n: usize) -> Vec<Type> {
    alloc::vec![Type::Zero; n]
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Zero => f.write_str("0"),
            Type::Arrow(a, b) => write!(f, "(-> {} {})", a, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Name,
    pub ty: Type,
}

impl Var {
    pub fn new(n: &str, ty: Type) -> Var {
        Var { name: name(n), ty }
    }

    pub fn nat(n: &str) -> Var {
        Var::new(n, Type::Zero)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

static GLOBAL_FRESH: AtomicU64 = AtomicU64::new(0);
static SEQ_IDS: AtomicU64 = AtomicU64::new(0);

/// A variable that no parsed input can name (`%` never occurs in input symbols).
pub fn fresh_var(base: &str, ty: Type) -> Var {
    let n = GLOBAL_FRESH.fetch_add(1, Ordering::Relaxed);
    let stem = base.split(['#', '%']).next().unwrap_or(base);
    Var { name: name(&format!("{}%{}", stem, n)), ty }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    pub context: &'static str,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ill-typed {}: expected {}, found {}", self.context, self.expected, self.found)
    }
}

impl TypeError {
    fn new(context: &'static str, expected: &dyn fmt::Display, found: &dyn fmt::Display) -> TypeError {
        TypeError { context, expected: expected.to_string(), found: found.to_string() }
    }
}

/// `c_φ` for a quantifier-free σ-formula; `vars` are its free variables in
/// order of appearance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CaseConst {
    pub formula: Formula,
    pub vars: Vec<Name>,
}

#[derive(Clone, Debug)]
pub enum Kind {
    Var(Var),
    /// Function symbol of arity n, type `0^n -> 0`.
    Const(Name, usize),
    Case(Arc<CaseConst>),
    Lam(Var, Term),
    App(Term, Term),
    Seq(Seq),
}

#[derive(Debug)]
pub struct Node {
    kind: Kind,
    ty: Type,
    fv: Arc<[Var]>,
    normal: AtomicBool,
}

#[derive(Clone, Debug)]
pub struct Term(Arc<Node>);

fn merge_fv(a: &[Var], b: &[Var]) -> Arc<[Var]> {
    if b.is_empty() {
        return Arc::from(a);
    }
    let mut out: Vec<Var> = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    Arc::from(out)
}

impl Term {
    fn mk(kind: Kind, ty: Type, fv: Arc<[Var]>) -> Term {
        Term(Arc::new(Node { kind, ty, fv, normal: AtomicBool::new(false) }))
    }

    pub fn var(v: Var) -> Term {
        let ty = v.ty.clone();
        let fv: Arc<[Var]> = Arc::from(alloc::vec![v.clone()]);
        Term::mk(Kind::Var(v), ty, fv)
    }

    pub fn nat_var(n: &str) -> Term {
        Term::var(Var::nat(n))
    }

    pub fn constant(f: &str, arity: usize) -> Term {
        Term::mk(Kind::Const(name(f), arity), Type::nat_fn(arity), Arc::from(Vec::new()))
    }

    pub fn zero() -> Term {
        Term::constant(ZERO, 0)
    }

    pub fn succ_const() -> Term {
        Term::constant(SUCC, 1)
    }

    pub fn succ(t: Term) -> Term {
        Term::app(Term::succ_const(), t).expect("S applied to a type-0 term")
    }

    pub fn case(c: CaseConst) -> Term {
        let m = c.vars.len();
        Term::mk(Kind::Case(Arc::new(c)), Type::nat_fn(m + 2), Arc::from(Vec::new()))
    }

    pub fn lam(v: Var, body: Term) -> Term {
        let ty = Type::arrow(v.ty.clone(), body.ty().clone());
        let fv: Vec<Var> = body.fv().iter().filter(|w| **w != v).cloned().collect();
        Term::mk(Kind::Lam(v, body), ty, Arc::from(fv))
    }

    pub fn lams(vs: &[Var], body: Term) -> Term {
        vs.iter().rev().fold(body, |acc, v| Term::lam(v.clone(), acc))
    }

    pub fn app(f: Term, a: Term) -> Result<Term, TypeError> {
        let res = match f.ty() {
            Type::Arrow(dom, cod) if **dom == *a.ty() => (**cod).clone(),
            Type::Arrow(dom, _) => return Err(TypeError::new("application argument", dom, a.ty())),
            Type::Zero => return Err(TypeError::new("application head", &"a function type", &"0")),
        };
        let fv = merge_fv(f.fv(), a.fv());
        Ok(Term::mk(Kind::App(f, a), res, fv))
    }

    pub fn apps(f: Term, args: &[Term]) -> Result<Term, TypeError> {
        args.iter().try_fold(f, |acc, a| Term::app(acc, a.clone()))
    }

    pub fn seq(s: Seq) -> Term {
        let ty = Type::arrow(Type::Zero, s.elem().clone());
        let fv = s.0.fv.clone();
        Term::mk(Kind::Seq(s), ty, fv)
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn ty(&self) -> &Type {
        &self.0.ty
    }

    /// Free variables in order of first appearance.
    pub fn fv(&self) -> &[Var] {
        &self.0.fv
    }

    pub fn is_closed(&self) -> bool {
        self.0.fv.is_empty()
    }

    pub fn has_free(&self, v: &Var) -> bool {
        self.0.fv.contains(v)
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn addr(&self) -> usize {
        Arc::as_ptr(&self.0) as *const u8 as usize
    }

    pub fn is_marked_normal(&self) -> bool {
        self.0.normal.load(Ordering::Relaxed)
    }

    pub fn mark_normal(&self) {
        self.0.normal.store(true, Ordering::Relaxed)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self.kind() {
            Kind::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            Kind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    pub fn as_lam(&self) -> Option<(&Var, &Term)> {
        match self.kind() {
            Kind::Lam(v, b) => Some((v, b)),
            _ => None,
        }
    }

    pub fn as_seq(&self) -> Option<&Seq> {
        match self.kind() {
            Kind::Seq(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<(&Name, usize)> {
        match self.kind() {
            Kind::Const(n, a) => Some((n, *a)),
            _ => None,
        }
    }

    pub fn as_case(&self) -> Option<&Arc<CaseConst>> {
        match self.kind() {
            Kind::Case(c) => Some(c),
            _ => None,
        }
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (Term, Vec<Term>) {
        let mut args = Vec::new();
        let mut cur = self.clone();
        while let Kind::App(f, a) = cur.kind() {
            args.push(a.clone());
            let next = f.clone();
            cur = next;
        }
        args.reverse();
        (cur, args)
    }

    /// Value of a numeral `S...S0`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        loop {
            match cur.kind() {
                Kind::Const(c, 0) if &**c == ZERO => return Some(n),
                Kind::App(f, a) => match f.kind() {
                    Kind::Const(c, 1) if &**c == SUCC => {
                        n += 1;
                        cur = a;
                    }
                    _ => return None,
                },
                _ => return None,
            }
        }
    }

    /// Simultaneous capture-avoiding substitution.
    pub fn subst(&self, map: &[(Var, Term)]) -> Term {
        if map.is_empty() || !map.iter().any(|(v, _)| self.has_free(v)) {
            return self.clone();
        }
        match self.kind() {
            Kind::Var(v) => {
                map.iter().find(|(w, _)| w == v).map(|(_, t)| t.clone()).unwrap_or_else(|| self.clone())
            }
            Kind::Const(..) | Kind::Case(_) => self.clone(),
            Kind::App(f, a) => Term::app(f.subst(map), a.subst(map)).expect("substitution preserves types"),
            Kind::Lam(v, body) => {
                let inner: Vec<(Var, Term)> = map
                    .iter()
                    .filter(|(w, _)| w != v && body.has_free(w))
                    .cloned()
                    .collect();
                if inner.is_empty() {
                    return self.clone();
                }
                if inner.iter().any(|(_, t)| t.has_free(v)) {
                    let v2 = fresh_var(&v.name, v.ty.clone());
                    let mut renamed = inner;
                    renamed.push((v.clone(), Term::var(v2.clone())));
                    Term::lam(v2, body.subst(&renamed))
                } else {
                    Term::lam(v.clone(), body.subst(&inner))
                }
            }
            Kind::Seq(s) => {
                let inner: Vec<(Var, Term)> =
                    map.iter().filter(|(w, _)| s.0.fv.contains(w)).cloned().collect();
                Term::seq(Seq::substituted(s.clone(), inner))
            }
        }
    }

    /// Substitution that contracts the redexes it creates when a
    /// λ-abstraction lands in head position. Shared subterms are visited once.
    pub fn subst_beta(&self, map: &[(Var, Term)]) -> Term {
        let mut memo = BTreeMap::new();
        self.subst_beta_in(map, &mut memo)
    }

    fn subst_beta_in(&self, map: &[(Var, Term)], memo: &mut BTreeMap<usize, Term>) -> Term {
        if map.is_empty() || !map.iter().any(|(v, _)| self.has_free(v)) {
            return self.clone();
        }
        if let Some(t) = memo.get(&self.addr()) {
            return t.clone();
        }
        let out = match self.kind() {
            Kind::Var(_) | Kind::Const(..) | Kind::Case(_) | Kind::Seq(_) => self.subst(map),
            Kind::Lam(v, body) => {
                let inner: Vec<(Var, Term)> =
                    map.iter().filter(|(w, _)| w != v && body.has_free(w)).cloned().collect();
                if inner.iter().any(|(_, t)| t.has_free(v)) {
                    let v2 = fresh_var(&v.name, v.ty.clone());
                    let mut renamed = inner;
                    renamed.push((v.clone(), Term::var(v2.clone())));
                    Term::lam(v2, body.subst_beta(&renamed))
                } else {
                    Term::lam(v.clone(), body.subst_beta(&inner))
                }
            }
            Kind::App(..) => {
                let (head, args) = self.spine();
                let head = head.subst_beta_in(map, memo);
                let args: Vec<Term> = args.iter().map(|a| a.subst_beta_in(map, memo)).collect();
                beta_apps(head, args)
            }
        };
        memo.insert(self.addr(), out.clone());
        out
    }

    pub fn subst1(&self, v: &Var, t: &Term) -> Term {
        self.subst(&[(v.clone(), t.clone())])
    }

    /// Alpha-equivalence; sequences compare by identity.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }

    /// Number of distinct nodes of the term graph, not descending into sequence branches.
    pub fn dag_size(&self) -> usize {
        let mut seen = alloc::collections::BTreeSet::new();
        let mut stack = alloc::vec![self.clone()];
        while let Some(t) = stack.pop() {
            if !seen.insert(t.addr()) {
                continue;
            }
            match t.kind() {
                Kind::App(f, a) => {
                    stack.push(f.clone());
                    stack.push(a.clone());
                }
                Kind::Lam(_, b) => stack.push(b.clone()),
                _ => {}
            }
        }
        seen.len()
    }

    /// Number of nodes, not descending into sequence branches.
    pub fn size(&self) -> usize {
        match self.kind() {
            Kind::App(f, a) => 1 + f.size() + a.size(),
            Kind::Lam(_, b) => 1 + b.size(),
            _ => 1,
        }
    }

    /// Renders with `shown` branches per sequence.
    pub fn render(&self, shown: usize) -> String {
        let mut s = String::new();
        self.write_to(&mut s, shown).expect("writing to a String");
        s
    }

    fn write_to(&self, out: &mut String, shown: usize) -> fmt::Result {
        use core::fmt::Write;
        match self.kind() {
            Kind::Var(v) => out.write_str(&v.name),
            Kind::Const(c, _) => out.write_str(c),
            Kind::Case(c) => write!(out, "(case {})", c.formula),
            Kind::Lam(v, b) => {
                write!(out, "(lambda ({} {}) ", v.name, v.ty)?;
                b.write_to(out, shown)?;
                out.write_str(")")
            }
            Kind::App(..) => {
                let (h, args) = self.spine();
                out.write_str("(")?;
                h.write_to(out, shown)?;
                for a in args {
                    out.write_str(" ")?;
                    a.write_to(out, shown)?;
                }
                out.write_str(")")
            }
            Kind::Seq(s) => {
                write!(out, "(seq {} :shown (", s.elem())?;
                for i in 0..shown {
                    if i > 0 {
                        out.write_str(" ")?;
                    }
                    s.raw_branch(i as u64).write_to(out, shown)?;
                }
                out.write_str(") ...)")
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (self.kind(), other.kind()) {
            (Kind::Var(a), Kind::Var(b)) => a == b,
            (Kind::Const(a, n), Kind::Const(b, m)) => a == b && n == m,
            (Kind::Case(a), Kind::Case(b)) => a == b,
            (Kind::Lam(v, a), Kind::Lam(w, b)) => v == w && a == b,
            (Kind::App(f, a), Kind::App(g, b)) => f == g && a == b,
            (Kind::Seq(s), Kind::Seq(t)) => s.id() == t.id(),
            _ => false,
        }
    }
}

fn alpha_eq_in(a: &Term, b: &Term, env: &mut Vec<(Var, Var)>) -> bool {
    match (a.kind(), b.kind()) {
        (Kind::Var(x), Kind::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Kind::Const(x, n), Kind::Const(y, m)) => x == y && n == m,
        (Kind::Case(x), Kind::Case(y)) => x == y,
        (Kind::Lam(v, x), Kind::Lam(w, y)) => {
            if v.ty != w.ty {
                return false;
            }
            env.push((v.clone(), w.clone()));
            let r = alpha_eq_in(x, y, env);
            env.pop();
            r
        }
        (Kind::App(f, x), Kind::App(g, y)) => alpha_eq_in(f, g, env) && alpha_eq_in(x, y, env),
        (Kind::Seq(s), Kind::Seq(t)) => s.id() == t.id(),
        _ => false,
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(3))
    }
}

/// Applies `t` to a tuple of arguments: `t () = t`, `t (v, w) = (t v) w`.
pub fn apply_tuple(t: &Term, args: &[Term]) -> Result<Term, TypeError> {
    Term::apps(t.clone(), args)
}

/// Componentwise tuple application: `() v = ()`, `(ts, u) v = (ts v, u v)`.
pub fn apply_tuples(ts: &[Term], args: &[Term]) -> Result<Vec<Term>, TypeError> {
    ts.iter().map(|t| apply_tuple(t, args)).collect()
}

pub type Generator = Arc<dyn Fn(u64) -> Term + Send + Sync>;

/// Shared state of a simultaneous recursor.
pub struct SimGroup {
    bases: Vec<Term>,
    steps: Vec<Term>,
    levels: Mutex<Vec<Vec<Term>>>,
    normal_levels: Mutex<Vec<Vec<Term>>>,
}

pub enum Gen {
    Recursor { base: Term, step: Term },
    SimRec { group: Arc<SimGroup>, index: usize },
    Table { label: Name, f: Generator },
    /// Branch n is `inner_n arg`.
    Apply { inner: Seq, arg: Term },
    /// Branch n is `inner_n[map]`.
    Subst { inner: Seq, map: Vec<(Var, Term)> },
    /// Branch n is the normal form of `inner_n`, filled by the rewrite engine.
    Normal { inner: Seq },
}

pub struct SeqNode {
    id: u64,
    elem: Type,
    fv: Arc<[Var]>,
    gen: Gen,
    memo: Mutex<BTreeMap<u64, Term>>,
    normalized: Once<Seq>,
}

/// An infinite sequence `(t_n)` with pure, memoized branches.
#[derive(Clone)]
pub struct Seq(Arc<SeqNode>);

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq#{}<{}>", self.0.id, self.0.elem)
    }
}

impl Seq {
    fn make(elem: Type, fv: Arc<[Var]>, gen: Gen) -> Seq {
        let id = SEQ_IDS.fetch_add(1, Ordering::Relaxed);
        Seq(Arc::new(SeqNode {
            id,
            elem,
            fv,
            gen,
            memo: Mutex::new(BTreeMap::new()),
            normalized: Once::new(),
        }))
    }

    /// `R_{a,b}`: `t_0 = a`, `t_{n+1} = b n t_n`.
    pub fn recursor(base: Term, step: Term) -> Result<Seq, TypeError> {
        let rho = base.ty().clone();
        let want = Type::arrow(Type::Zero, Type::arrow(rho.clone(), rho.clone()));
        if *step.ty() != want {
            return Err(TypeError::new("recursor step", &want, step.ty()));
        }
        let fv = merge_fv(base.fv(), step.fv());
        Ok(Seq::make(rho, fv, Gen::Recursor { base, step }))
    }

    /// Components of a simultaneous recursor.
    pub fn simultaneous(bases: Vec<Term>, steps: Vec<Term>) -> Result<Vec<Seq>, TypeError> {
        if bases.len() != steps.len() {
            return Err(TypeError::new("simultaneous recursor", &bases.len(), &steps.len()));
        }
        let rhos: Vec<Type> = bases.iter().map(|b| b.ty().clone()).collect();
        for (i, s) in steps.iter().enumerate() {
            let want = Type::arrow(Type::Zero, Type::tuple_arrow(&rhos, &rhos[i]));
            if *s.ty() != want {
                return Err(TypeError::new("simultaneous recursor step", &want, s.ty()));
            }
        }
        let mut fv: Arc<[Var]> = Arc::from(Vec::new());
        for t in bases.iter().chain(steps.iter()) {
            fv = merge_fv(&fv, t.fv());
        }
        let group = Arc::new(SimGroup { bases, steps, levels: Mutex::new(Vec::new()), normal_levels: Mutex::new(Vec::new()) });
        Ok((0..rhos.len())
            .map(|index| {
                Seq::make(rhos[index].clone(), fv.clone(), Gen::SimRec { group: group.clone(), index })
            })
            .collect())
    }

    /// A sequence given by a pure generator; `fv` must cover every branch.
    pub fn table(label: &str, elem: Type, fv: Vec<Var>, f: Generator) -> Seq {
        Seq::make(elem, Arc::from(fv), Gen::Table { label: name(label), f })
    }

    /// `((t_n s))` for the permutation rule.
    pub fn applied(inner: Seq, arg: Term) -> Result<Seq, TypeError> {
        let elem = match inner.elem() {
            Type::Arrow(dom, cod) if **dom == *arg.ty() => (**cod).clone(),
            other => return Err(TypeError::new("sequence permutation", other, &format!("(-> {} _)", arg.ty()))),
        };
        let fv = merge_fv(&inner.0.fv, arg.fv());
        Ok(Seq::make(elem, fv, Gen::Apply { inner, arg }))
    }

    fn substituted(inner: Seq, map: Vec<(Var, Term)>) -> Seq {
        if map.is_empty() {
            return inner;
        }
        let mut fv: Vec<Var> =
            inner.0.fv.iter().filter(|v| !map.iter().any(|(w, _)| w == *v)).cloned().collect();
        for (_, t) in &map {
            for v in t.fv() {
                if !fv.contains(v) {
                    fv.push(v.clone());
                }
            }
        }
        Seq::make(inner.elem().clone(), Arc::from(fv), Gen::Subst { inner, map })
    }

    /// The unique normalized view of this sequence.
    pub fn normalized(&self) -> Seq {
        if matches!(self.0.gen, Gen::Normal { .. }) {
            return self.clone();
        }
        self.0
            .normalized
            .call_once(|| Seq::make(self.0.elem.clone(), self.0.fv.clone(), Gen::Normal { inner: self.clone() }))
            .clone()
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn elem(&self) -> &Type {
        &self.0.elem
    }

    pub fn is_zero(&self) -> bool {
        self.0.elem.is_zero()
    }

    pub fn fv(&self) -> &[Var] {
        &self.0.fv
    }

    pub fn gen(&self) -> &Gen {
        &self.0.gen
    }

    pub fn is_normal_view(&self) -> bool {
        matches!(self.0.gen, Gen::Normal { .. })
    }

    pub fn memoized(&self, n: u64) -> Option<Term> {
        self.0.memo.lock().get(&n).cloned()
    }

    /// Number of memoized branches.
    pub fn demanded(&self) -> Vec<u64> {
        self.0.memo.lock().keys().copied().collect()
    }

    /// Stores a branch unless one is present; returns the stored branch.
    pub fn fill(&self, n: u64, t: Term) -> Term {
        self.0.memo.lock().entry(n).or_insert(t).clone()
    }

    /// Largest memoized index `<= n` and its branch.
    pub fn memo_floor(&self, n: u64) -> Option<(u64, Term)> {
        self.0.memo.lock().range(..=n).next_back().map(|(k, t)| (*k, t.clone()))
    }

    /// Branch `n` as generated. For a normalized view, the normal branch if
    /// already computed and otherwise the (equal-valued) underlying branch.
    pub fn raw_branch(&self, n: u64) -> Term {
        if let Some(t) = self.memoized(n) {
            return t;
        }
        match &self.0.gen {
            Gen::Recursor { base, step } => {
                let (mut k, mut t) = match self.memo_floor(n) {
                    Some(p) => p,
                    None => (0, self.fill(0, base.clone())),
                };
                while k < n {
                    let next = Term::apps(step.clone(), &[numeral(k), t]).expect("recursor typing");
                    k += 1;
                    t = self.fill(k, next);
                }
                t
            }
            Gen::SimRec { group, index } => self.fill(n, group.level(n)[*index].clone()),
            Gen::Table { f, .. } => {
                let t = f(n);
                debug_assert_eq!(t.ty(), self.elem());
                self.fill(n, t)
            }
            Gen::Apply { inner, arg } => {
                let t = Term::app(inner.raw_branch(n), arg.clone()).expect("permutation typing");
                self.fill(n, t)
            }
            Gen::Subst { inner, map } => self.fill(n, inner.raw_branch(n).subst(map)),
            Gen::Normal { inner } => inner.raw_branch(n),
        }
    }
}

impl SimGroup {
    pub fn bases(&self) -> &[Term] {
        &self.bases
    }

    pub fn steps(&self) -> &[Term] {
        &self.steps
    }

    /// Normal forms of all components at level `n`, if recorded.
    pub fn normal_level(&self, n: u64) -> Option<Vec<Term>> {
        self.normal_levels.lock().get(n as usize).cloned()
    }

    /// Number of recorded normal levels.
    pub fn normal_levels_len(&self) -> u64 {
        self.normal_levels.lock().len() as u64
    }

    /// Records level `n`; levels must be pushed in order.
    pub fn push_normal_level(&self, n: u64, level: Vec<Term>) -> Vec<Term> {
        let mut shared = self.normal_levels.lock();
        if shared.len() as u64 == n {
            shared.push(level);
        }
        shared[n as usize].clone()
    }

    fn level(&self, n: u64) -> Vec<Term> {
        let mut levels = self.levels.lock().clone();
        if levels.is_empty() {
            levels.push(self.bases.clone());
        }
        while (levels.len() as u64) <= n {
            let k = levels.len() as u64 - 1;
            let prev = levels.last().expect("nonempty").clone();
            let mut args = alloc::vec![numeral(k)];
            args.extend(prev);
            let next: Vec<Term> = self
                .steps
                .iter()
                .map(|s| Term::apps(s.clone(), &args).expect("simultaneous recursor typing"))
                .collect();
            levels.push(next);
        }
        let mut shared = self.levels.lock();
        if shared.len() < levels.len() {
            *shared = levels;
        }
        shared[n as usize].clone()
    }
}

/// The numeral `S...S0`.
pub fn numeral(n: u64) -> Term {
    let mut t = Term::zero();
    for _ in 0..n {
        t = Term::succ(t);
    }
    t
}

/// Description of a generator for diagnostics.
pub fn describe_gen(s: &Seq) -> String {
    match s.gen() {
        Gen::Recursor { .. } => "recursor".into(),
        Gen::SimRec { index, .. } => format!("simultaneous recursor component {}", index),
        Gen::Table { label, .. } => format!("table {}", label),
        Gen::Apply { inner, .. } => format!("applied #{}", inner.id()),
        Gen::Subst { inner, .. } => format!("substituted #{}", inner.id()),
        Gen::Normal { inner } => format!("normal #{}", inner.id()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn g() -> Term {
        Term::constant("g", 1)
    }

    fn app(f: &Term, a: Term) -> Term {
        Term::app(f.clone(), a).unwrap()
    }

    #[test]
    fn type_identities() {
        assert_eq!(Type::nat_fn(0), Type::Zero);
        assert_eq!(Type::nat_fn(2), Type::arrow(Type::Zero, Type::nat_fn(1)));
        let t = Type::tuple_arrow(&[Type::Zero, Type::nat_fn(1)], &Type::Zero);
        assert_eq!(t.to_string(), "(-> 0 (-> (-> 0 0) 0))");
        assert_eq!(tuple_arrows(&[], &[Type::Zero]), vec![Type::Zero]);
        assert!(tuple_arrows(&[Type::Zero], &[]).is_empty());
    }

    #[test]
    fn application_is_type_checked() {
        assert!(Term::app(Term::zero(), Term::zero()).is_err());
        assert!(Term::app(g(), g()).is_err());
        assert_eq!(app(&g(), Term::zero()).ty(), &Type::Zero);
    }

    #[test]
    fn numerals_round_trip() {
        for n in 0..=1000 {
            assert_eq!(numeral(n).as_numeral(), Some(n));
        }
        assert_eq!(numeral(3).to_string(), "(S (S (S 0)))");
    }

    #[test]
    fn recursor_branches_and_memo() {
        let v = Var::nat("v");
        let w = Var::nat("w");
        let step = Term::lams(&[v, w.clone()], app(&g(), Term::var(w)));
        let r = Seq::recursor(app(&g(), Term::zero()), step).unwrap();
        assert_eq!(r.raw_branch(0).to_string(), "(g 0)");
        let b5 = r.raw_branch(5);
        assert!(b5.ptr_eq(&r.raw_branch(5)));
        assert!(Seq::recursor(Term::zero(), g()).is_err());
    }

    #[test]
    fn substitution_avoids_capture() {
        let x = Var::nat("x");
        let y = Var::nat("y");
        let plus_like = Term::constant("h", 2);
        let body = Term::apps(plus_like, &[Term::var(x.clone()), Term::var(y.clone())]).unwrap();
        let lam = Term::lam(y.clone(), body);
        let out = lam.subst1(&x, &Term::var(y.clone()));
        let (bound, inner) = out.as_lam().unwrap();
        assert_ne!(bound, &y);
        assert_eq!(inner.fv(), &[y.clone(), bound.clone()][..]);
    }

    #[test]
    fn tuple_application_clauses() {
        let t = g();
        assert!(apply_tuple(&t, &[]).unwrap().ptr_eq(&t));
        assert!(apply_tuples(&[], &[Term::zero()]).unwrap().is_empty());
        let out = apply_tuples(&[g(), Term::succ_const()], &[Term::zero()]).unwrap();
        assert_eq!(out[0].to_string(), "(g 0)");
        assert_eq!(out[1].to_string(), "(S 0)");
    }

    #[test]
    fn alpha_equivalence() {
        let a = Term::lam(Var::nat("a"), Term::nat_var("a"));
        let b = Term::lam(Var::nat("b"), Term::nat_var("b"));
        assert!(a.alpha_eq(&b));
        assert_ne!(a, b);
    }
}

/// `h a1 ... an`, contracting head redexes.
pub fn beta_apps(mut head: Term, args: Vec<Term>) -> Term {
    let mut rest = args.into_iter();
    loop {
        let Some((v, body)) = head.as_lam().map(|(v, b)| (v.clone(), b.clone())) else { break };
        let Some(a) = rest.next() else { return head };
        head = body.subst_beta(&[(v, a)]);
    }
    rest.fold(head, |f, a| Term::app(f, a).expect("well-typed application"))
}
