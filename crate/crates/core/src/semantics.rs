//! Structures with standard arithmetic reduct and evaluation of σ-terms,
//! quantifier-free formulas and closed type-0 ω-terms.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::omega::{numeral, CaseConst, Gen, Kind, OFormula, Seq, SimGroup, Term, Type, Var};
use crate::pr::to_u64;
use crate::rewrite::{analyze_spine, Budget, Engine, RewriteError, SpineHead};
use crate::syntax::{name, FnKind, Formula, Name, RelKind, SigTerm, Signature, LESS, SUCC, ZERO};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemError {
    UnknownSymbol(Name),
    MissingDefinition(Name),
    ArithmeticOverride(Name),
    Arity { symbol: Name, expected: usize, found: usize },
    NotNatural(String),
    DivisionByZero,
    Unbound(Name),
    NotQuantifierFree(String),
    NotNatValue(String),
    IndexTooLarge,
    Fuel,
    Rewrite(RewriteError),
}

impl From<RewriteError> for SemError {
    fn from(e: RewriteError) -> SemError {
        SemError::Rewrite(e)
    }
}

impl fmt::Display for SemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemError::UnknownSymbol(n) => write!(f, "unknown symbol `{}`", n),
            SemError::MissingDefinition(n) => write!(f, "structure does not define `{}`", n),
            SemError::ArithmeticOverride(n) => write!(f, "`{}` belongs to the arithmetic signature and cannot be redefined", n),
            SemError::Arity { symbol, expected, found } => {
                write!(f, "`{}` expects {} arguments, got {}", symbol, expected, found)
            }
            SemError::NotNatural(s) => write!(f, "value {} is not a natural number", s),
            SemError::DivisionByZero => f.write_str("division by zero"),
            SemError::Unbound(n) => write!(f, "unbound variable `{}`", n),
            SemError::NotQuantifierFree(s) => write!(f, "not quantifier-free: {}", s),
            SemError::NotNatValue(s) => write!(f, "expected a number, got {}", s),
            SemError::IndexTooLarge => f.write_str("sequence index exceeds 64 bits"),
            SemError::Fuel => f.write_str("evaluation fuel exhausted"),
            SemError::Rewrite(e) => write!(f, "{}", e),
        }
    }
}

/// Exact rational expressions used by structure definitions.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    /// A parameter, or a constant of the structure.
    Name(Name),
    Add(Box<Expr>, Box<Expr>),
    /// Exact subtraction (may be negative).
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// A function symbol, auxiliary sequence or roster symbol applied to arguments.
    Call(Name, Vec<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Num(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn name(n: &str) -> Expr {
        Expr::Name(name(n))
    }

    pub fn call(f: &str, args: Vec<Expr>) -> Expr {
        Expr::Call(name(f), args)
    }

    pub fn bin(op: &str, a: Expr, b: Expr) -> Option<Expr> {
        let (a, b) = (Box::new(a), Box::new(b));
        Some(match op {
            "+" => Expr::Add(a, b),
            "-" => Expr::Sub(a, b),
            "*" => Expr::Mul(a, b),
            "/" => Expr::Div(a, b),
            _ => return None,
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Expr::Num(q) => write!(f, "(/ {} {})", q.numer(), q.denom()),
            Expr::Name(n) => f.write_str(n),
            Expr::Add(a, b) => write!(f, "(+ {} {})", a, b),
            Expr::Sub(a, b) => write!(f, "(- {} {})", a, b),
            Expr::Mul(a, b) => write!(f, "(* {} {})", a, b),
            Expr::Div(a, b) => write!(f, "(/ {} {})", a, b),
            Expr::Call(g, args) => {
                write!(f, "({}", g)?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn parse(s: &str) -> Option<CmpOp> {
        Some(match s {
            "<" => CmpOp::Lt,
            "<=" => CmpOp::Le,
            "=" => CmpOp::Eq,
            "!=" => CmpOp::Ne,
            ">=" => CmpOp::Ge,
            ">" => CmpOp::Gt,
            _ => return None,
        })
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    fn holds(self, a: &BigRational, b: &BigRational) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }
}

/// Decidable conditions defining relations.
#[derive(Clone, Debug, PartialEq)]
pub enum Cond {
    Bool(bool),
    Cmp(CmpOp, Expr, Expr),
    Not(Box<Cond>),
    And(Vec<Cond>),
    Or(Vec<Cond>),
}

impl fmt::Display for Cond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, op: &str, cs: &[Cond]| {
            write!(f, "({}", op)?;
            for c in cs {
                write!(f, " {}", c)?;
            }
            f.write_str(")")
        };
        match self {
            Cond::Bool(true) => f.write_str("true"),
            Cond::Bool(false) => f.write_str("false"),
            Cond::Cmp(op, a, b) => write!(f, "({} {} {})", op.symbol(), a, b),
            Cond::Not(c) => write!(f, "(not {})", c),
            Cond::And(cs) => list(f, "and", cs),
            Cond::Or(cs) => list(f, "or", cs),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunDef {
    Expr { params: Vec<Name>, body: Expr },
    /// Finite table on argument tuples with a default value.
    Table { entries: Vec<(Vec<u64>, u64)>, default: u64 },
    /// `f(n) = h^(times)(n)` for a unary symbol `h`.
    Iterate { of: Name, times: u64 },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StructureSpec {
    pub consts: Vec<(Name, Expr)>,
    pub funs: Vec<(Name, FunDef)>,
    pub seqs: Vec<(Name, Name, Expr)>,
    pub rels: Vec<(Name, Vec<Name>, Cond)>,
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = |ps: &[Name]| -> String {
            let v: Vec<&str> = ps.iter().map(|p| &**p).collect();
            v.join(" ")
        };
        for (n, e) in &self.consts {
            writeln!(f, "(const {} {})", n, e)?;
        }
        for (n, d) in &self.funs {
            match d {
                FunDef::Expr { params: ps, body } => writeln!(f, "(fun {} ({}) {})", n, params(ps), body)?,
                FunDef::Table { entries, default } => {
                    write!(f, "(fun {} (table", n)?;
                    for (args, v) in entries {
                        let a: Vec<String> = args.iter().map(|x| format!("{}", x)).collect();
                        write!(f, " (({}) {})", a.join(" "), v)?;
                    }
                    writeln!(f, " (default {})))", default)?;
                }
                FunDef::Iterate { of, times } => writeln!(f, "(fun {} (iterate {} {}))", n, of, times)?,
            }
        }
        for (n, p, e) in &self.seqs {
            writeln!(f, "(seq {} ({}) {})", n, p, e)?;
        }
        for (n, ps, c) in &self.rels {
            writeln!(f, "(rel {} ({}) {})", n, params(ps), c)?;
        }
        Ok(())
    }
}

fn nat_of(q: &BigRational) -> Result<BigUint, SemError> {
    if !q.is_integer() || q.is_negative() {
        return Err(SemError::NotNatural(format!("{}", q)));
    }
    Ok(q.numer().magnitude().clone())
}

fn rat_of(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// A σ-structure whose arithmetic reduct is the standard model.
#[derive(Clone, Debug)]
pub struct Structure {
    sig: Signature,
    consts: BTreeMap<Name, BigUint>,
    funs: BTreeMap<Name, FunDef>,
    seqs: BTreeMap<Name, (Name, Expr)>,
    rels: BTreeMap<Name, (Vec<Name>, Cond)>,
}

impl Structure {
    pub fn new(sig: &Signature, spec: &StructureSpec) -> Result<Structure, SemError> {
        let mut m = Structure {
            sig: sig.clone(),
            consts: BTreeMap::new(),
            funs: BTreeMap::new(),
            seqs: BTreeMap::new(),
            rels: BTreeMap::new(),
        };
        let extra = |n: &Name, want_fn: bool| -> Result<usize, SemError> {
            if want_fn {
                match sig.function(n) {
                    Some(s) if s.kind == FnKind::Extra => Ok(s.arity),
                    Some(_) => Err(SemError::ArithmeticOverride(n.clone())),
                    None => Err(SemError::UnknownSymbol(n.clone())),
                }
            } else {
                match sig.relation(n) {
                    Some(s) if s.kind == RelKind::Extra => Ok(s.arity),
                    Some(_) => Err(SemError::ArithmeticOverride(n.clone())),
                    None => Err(SemError::UnknownSymbol(n.clone())),
                }
            }
        };
        for (n, _, e) in &spec.seqs {
            if sig.function(n).is_some() || sig.relation(n).is_some() {
                return Err(SemError::ArithmeticOverride(n.clone()));
            }
            m.seqs.insert(n.clone(), (spec.seqs.iter().find(|s| &s.0 == n).unwrap().1.clone(), e.clone()));
        }
        for (n, e) in &spec.consts {
            let arity = extra(n, true)?;
            if arity != 0 {
                return Err(SemError::Arity { symbol: n.clone(), expected: arity, found: 0 });
            }
            let v = m.eval_expr(e, &BTreeMap::new(), 0)?;
            m.consts.insert(n.clone(), nat_of(&v)?);
        }
        for (n, d) in &spec.funs {
            let arity = extra(n, true)?;
            let found = match d {
                FunDef::Expr { params, .. } => params.len(),
                FunDef::Table { entries, .. } => entries.first().map(|e| e.0.len()).unwrap_or(arity),
                FunDef::Iterate { .. } => 1,
            };
            if found != arity {
                return Err(SemError::Arity { symbol: n.clone(), expected: arity, found });
            }
            m.funs.insert(n.clone(), d.clone());
        }
        for (n, ps, c) in &spec.rels {
            let arity = extra(n, false)?;
            if ps.len() != arity {
                return Err(SemError::Arity { symbol: n.clone(), expected: arity, found: ps.len() });
            }
            m.rels.insert(n.clone(), (ps.clone(), c.clone()));
        }
        for f in sig.extra_functions() {
            if !m.funs.contains_key(&f.name) && !m.consts.contains_key(&f.name) {
                return Err(SemError::MissingDefinition(f.name.clone()));
            }
        }
        for r in sig.extra_relations() {
            if !m.rels.contains_key(&r.name) {
                return Err(SemError::MissingDefinition(r.name.clone()));
            }
        }
        Ok(m)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Value of a 0-ary extra symbol.
    pub fn constant(&self, n: &str) -> Option<&BigUint> {
        self.consts.get(n)
    }

    fn eval_expr(&self, e: &Expr, env: &BTreeMap<Name, BigRational>, depth: usize) -> Result<BigRational, SemError> {
        if depth > 10_000 {
            return Err(SemError::Fuel);
        }
        let bin = |a: &Expr, b: &Expr| -> Result<(BigRational, BigRational), SemError> {
            Ok((self.eval_expr(a, env, depth + 1)?, self.eval_expr(b, env, depth + 1)?))
        };
        Ok(match e {
            Expr::Num(q) => q.clone(),
            Expr::Name(n) => {
                if let Some(v) = env.get(n) {
                    v.clone()
                } else if let Some(v) = self.consts.get(n) {
                    rat_of(v)
                } else if self.sig.function(n).map(|s| s.arity) == Some(0) {
                    rat_of(&self.fn_value(n, &[])?)
                } else {
                    return Err(SemError::Unbound(n.clone()));
                }
            }
            Expr::Add(a, b) => {
                let (x, y) = bin(a, b)?;
                x + y
            }
            Expr::Sub(a, b) => {
                let (x, y) = bin(a, b)?;
                x - y
            }
            Expr::Mul(a, b) => {
                let (x, y) = bin(a, b)?;
                x * y
            }
            Expr::Div(a, b) => {
                let (x, y) = bin(a, b)?;
                if y.is_zero() {
                    return Err(SemError::DivisionByZero);
                }
                x / y
            }
            Expr::Call(f, args) => {
                let vals = args.iter().map(|a| self.eval_expr(a, env, depth + 1)).collect::<Result<Vec<_>, _>>()?;
                if let Some((p, body)) = self.seqs.get(f) {
                    if vals.len() != 1 {
                        return Err(SemError::Arity { symbol: f.clone(), expected: 1, found: vals.len() });
                    }
                    let mut inner = BTreeMap::new();
                    inner.insert(p.clone(), rat_of(&nat_of(&vals[0])?));
                    return self.eval_expr(body, &inner, depth + 1);
                }
                let nats = vals.iter().map(nat_of).collect::<Result<Vec<_>, _>>()?;
                rat_of(&self.fn_value(f, &nats)?)
            }
        })
    }

    fn eval_cond(&self, c: &Cond, env: &BTreeMap<Name, BigRational>) -> Result<bool, SemError> {
        Ok(match c {
            Cond::Bool(b) => *b,
            Cond::Cmp(op, a, b) => op.holds(&self.eval_expr(a, env, 0)?, &self.eval_expr(b, env, 0)?),
            Cond::Not(c) => !self.eval_cond(c, env)?,
            Cond::And(cs) => {
                for c in cs {
                    if !self.eval_cond(c, env)? {
                        return Ok(false);
                    }
                }
                true
            }
            Cond::Or(cs) => {
                for c in cs {
                    if self.eval_cond(c, env)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// `f^M(args)`.
    pub fn fn_value(&self, f: &str, args: &[BigUint]) -> Result<BigUint, SemError> {
        let sym = self.sig.function(f).ok_or_else(|| SemError::UnknownSymbol(name(f)))?;
        if sym.arity != args.len() {
            return Err(SemError::Arity { symbol: name(f), expected: sym.arity, found: args.len() });
        }
        match sym.kind {
            FnKind::ArithmeticBase if f == ZERO => Ok(BigUint::zero()),
            FnKind::ArithmeticBase if f == SUCC => Ok(&args[0] + 1u32),
            FnKind::ArithmeticBase => Err(SemError::UnknownSymbol(name(f))),
            FnKind::PrimitiveRecursive => {
                self.sig.registry().eval(f, args).map_err(|_| SemError::MissingDefinition(name(f)))
            }
            FnKind::Extra => {
                if let Some(v) = self.consts.get(f) {
                    return Ok(v.clone());
                }
                match self.funs.get(f).ok_or_else(|| SemError::MissingDefinition(name(f)))? {
                    FunDef::Expr { params, body } => {
                        let env = params.iter().cloned().zip(args.iter().map(rat_of)).collect();
                        nat_of(&self.eval_expr(body, &env, 0)?)
                    }
                    FunDef::Table { entries, default } => {
                        let key: Option<Vec<u64>> = args.iter().map(to_u64).collect();
                        let hit = key.and_then(|k| entries.iter().find(|(a, _)| *a == k).map(|(_, v)| *v));
                        Ok(BigUint::from(hit.unwrap_or(*default)))
                    }
                    FunDef::Iterate { of, times } => {
                        let mut v = args[0].clone();
                        for _ in 0..*times {
                            v = self.fn_value(of, &[v])?;
                        }
                        Ok(v)
                    }
                }
            }
        }
    }

    /// `R^M(args)`.
    pub fn rel_value(&self, r: &str, args: &[BigUint]) -> Result<bool, SemError> {
        let sym = self.sig.relation(r).ok_or_else(|| SemError::UnknownSymbol(name(r)))?;
        if sym.arity != args.len() {
            return Err(SemError::Arity { symbol: name(r), expected: sym.arity, found: args.len() });
        }
        if r == LESS {
            return Ok(args[0] < args[1]);
        }
        let (params, cond) = self.rels.get(r).ok_or_else(|| SemError::MissingDefinition(name(r)))?;
        let env = params.iter().cloned().zip(args.iter().map(rat_of)).collect();
        self.eval_cond(cond, &env)
    }
}

pub type NatEnv = BTreeMap<Name, BigUint>;

/// `t^M_e`.
pub fn eval_sig_term(m: &Structure, t: &SigTerm, e: &NatEnv) -> Result<BigUint, SemError> {
    match t {
        SigTerm::Var(x) => e.get(x).cloned().ok_or_else(|| SemError::Unbound(x.clone())),
        SigTerm::App(f, args) => {
            if let Some(n) = t.as_numeral() {
                return Ok(BigUint::from(n));
            }
            let vals = args.iter().map(|a| eval_sig_term(m, a, e)).collect::<Result<Vec<_>, _>>()?;
            m.fn_value(f, &vals)
        }
    }
}

/// `‖φ‖^M_e` for quantifier-free φ; bounded quantifiers by finite search.
pub fn eval_qf(m: &Structure, phi: &Formula, e: &NatEnv) -> Result<bool, SemError> {
    match phi {
        Formula::Atom(r, args) => {
            let vals = args.iter().map(|a| eval_sig_term(m, a, e)).collect::<Result<Vec<_>, _>>()?;
            m.rel_value(r, &vals)
        }
        Formula::Eq(a, b) => Ok(eval_sig_term(m, a, e)? == eval_sig_term(m, b, e)?),
        Formula::Not(a) => Ok(!eval_qf(m, a, e)?),
        Formula::Or(a, b) => Ok(eval_qf(m, a, e)? || eval_qf(m, b, e)?),
        Formula::Forall(..) => {
            let (x, t, body) = phi.as_forall_le().ok_or_else(|| SemError::NotQuantifierFree(format!("{}", phi)))?;
            let bound = to_u64(&eval_sig_term(m, t, e)?).ok_or(SemError::IndexTooLarge)?;
            let mut inner = e.clone();
            for v in 0..=bound {
                inner.insert(x.clone(), BigUint::from(v));
                if !eval_qf(m, body, &inner)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Outcome of sampling Γ on a finite box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    pub bound: u64,
    pub checked: u64,
    pub counterexamples: Vec<(usize, Vec<(Name, u64)>)>,
}

impl GammaReport {
    /// Passing is necessary, not sufficient, for `M ⊨ Γ`.
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks each universal sentence of Γ on all arguments `<= bound`.
pub fn check_gamma(m: &Structure, gamma: &[Formula], bound: u64) -> Result<GammaReport, SemError> {
    let mut report = GammaReport { bound, checked: 0, counterexamples: Vec::new() };
    for (i, g) in gamma.iter().enumerate() {
        let (vars, matrix) = g.universal_matrix().ok_or_else(|| SemError::NotQuantifierFree(format!("{}", g)))?;
        let mut idx = vec![0u64; vars.len()];
        loop {
            let env: NatEnv = vars.iter().cloned().zip(idx.iter().map(|v| BigUint::from(*v))).collect();
            report.checked += 1;
            if !eval_qf(m, matrix, &env)? {
                report.counterexamples.push((i, vars.iter().cloned().zip(idx.iter().copied()).collect()));
                break;
            }
            let mut pos = 0;
            while pos < idx.len() && idx[pos] == bound {
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
            idx[pos] += 1;
        }
    }
    Ok(report)
}

/// Values of the direct evaluator.
#[derive(Clone)]
pub enum Value {
    Nat(BigUint),
    Fun(Arc<Closure>),
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{}", n),
            Value::Fun(_) => f.write_str("<function>"),
        }
    }
}

impl Value {
    pub fn nat(&self) -> Result<&BigUint, SemError> {
        match self {
            Value::Nat(n) => Ok(n),
            Value::Fun(_) => Err(SemError::NotNatValue("a function".into())),
        }
    }
}

#[derive(Clone)]
pub enum Head {
    Const(Name, usize),
    Case(Arc<CaseConst>),
}

pub enum Closure {
    Lam { var: Var, body: Term, env: Env },
    Partial { head: Head, args: Vec<BigUint> },
    Seq { seq: Seq, env: Env },
}

struct EnvNode {
    var: Var,
    value: Value,
    next: Env,
}

/// Persistent environment of variable values.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn bind(&self, var: Var, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode { var, value, next: self.clone() })))
    }

    pub fn lookup(&self, v: &Var) -> Option<&Value> {
        let mut cur = &self.0;
        while let Some(node) = cur {
            if node.var == *v {
                return Some(&node.value);
            }
            cur = &node.next.0;
        }
        None
    }
}

/// Direct evaluator of ω-terms: environments and closures, no rewriting.
pub struct Evaluator<'m> {
    m: &'m Structure,
    fuel: u64,
    seq_cache: BTreeMap<(u64, u64), Value>,
    group_cache: BTreeMap<(usize, u64), Vec<Value>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(m: &'m Structure) -> Evaluator<'m> {
        Evaluator::with_fuel(m, 50_000_000)
    }

    pub fn with_fuel(m: &'m Structure, fuel: u64) -> Evaluator<'m> {
        Evaluator { m, fuel, seq_cache: BTreeMap::new(), group_cache: BTreeMap::new() }
    }

    fn burn(&mut self) -> Result<(), SemError> {
        if self.fuel == 0 {
            return Err(SemError::Fuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    pub fn eval(&mut self, t: &Term, env: &Env) -> Result<Value, SemError> {
        self.burn()?;
        if let Some(n) = t.as_numeral() {
            return Ok(Value::Nat(BigUint::from(n)));
        }
        match t.kind() {
            Kind::Var(v) => env.lookup(v).cloned().ok_or_else(|| SemError::Unbound(v.name.clone())),
            Kind::Const(c, 0) => Ok(Value::Nat(self.m.fn_value(c, &[])?)),
            Kind::Const(c, n) => Ok(Value::Fun(Arc::new(Closure::Partial { head: Head::Const(c.clone(), *n), args: Vec::new() }))),
            Kind::Case(c) => Ok(Value::Fun(Arc::new(Closure::Partial { head: Head::Case(c.clone()), args: Vec::new() }))),
            Kind::Lam(v, b) => Ok(Value::Fun(Arc::new(Closure::Lam { var: v.clone(), body: b.clone(), env: env.clone() }))),
            Kind::Seq(s) => Ok(Value::Fun(Arc::new(Closure::Seq { seq: s.clone(), env: env.clone() }))),
            Kind::App(..) => {
                let (h, args) = t.spine();
                let mut f = self.eval(&h, env)?;
                for a in &args {
                    let v = self.eval(a, env)?;
                    f = self.apply(&f, v)?;
                }
                Ok(f)
            }
        }
    }

    pub fn eval_nat(&mut self, t: &Term, env: &Env) -> Result<BigUint, SemError> {
        match self.eval(t, env)? {
            Value::Nat(n) => Ok(n),
            Value::Fun(_) => Err(SemError::NotNatValue(format!("{}", t.render(1)))),
        }
    }

    pub fn apply(&mut self, f: &Value, a: Value) -> Result<Value, SemError> {
        self.burn()?;
        let Value::Fun(c) = f else { return Err(SemError::NotNatValue("application of a number".into())) };
        match &**c {
            Closure::Lam { var, body, env } => {
                let env = env.bind(var.clone(), a);
                self.eval(body, &env)
            }
            Closure::Partial { head, args } => {
                let mut args = args.clone();
                args.push(a.nat()?.clone());
                let need = match head {
                    Head::Const(_, n) => *n,
                    Head::Case(c) => c.vars.len() + 2,
                };
                if args.len() < need {
                    return Ok(Value::Fun(Arc::new(Closure::Partial { head: head.clone(), args })));
                }
                match head {
                    Head::Const(name, _) => Ok(Value::Nat(self.m.fn_value(name, &args)?)),
                    Head::Case(c) => Ok(Value::Nat(decide_case(self.m, c, &args)?)),
                }
            }
            Closure::Seq { seq, env } => {
                let n = to_u64(a.nat()?).ok_or(SemError::IndexTooLarge)?;
                self.seq_value(seq, env, n)
            }
        }
    }

    /// Value of branch `n` of `s` under `env`.
    pub fn seq_value(&mut self, s: &Seq, env: &Env, n: u64) -> Result<Value, SemError> {
        let closed = s.fv().is_empty();
        if closed {
            if let Some(v) = self.seq_cache.get(&(s.id(), n)) {
                return Ok(v.clone());
            }
        }
        let v = match s.gen() {
            Gen::Recursor { base, step } => {
                let (mut k, mut v) = match closed.then(|| self.seq_cache.range((s.id(), 0)..=(s.id(), n)).next_back()).flatten() {
                    Some(((_, k), v)) => (*k, v.clone()),
                    None => (0, self.eval(base, env)?),
                };
                let step_v = if k < n { Some(self.eval(step, env)?) } else { None };
                while k < n {
                    let f = self.apply(step_v.as_ref().expect("step value"), Value::Nat(BigUint::from(k)))?;
                    v = self.apply(&f, v)?;
                    k += 1;
                    if closed {
                        self.seq_cache.insert((s.id(), k), v.clone());
                    }
                }
                v
            }
            Gen::SimRec { group, index } => self.group_value(group, env, n, closed)?[*index].clone(),
            Gen::Table { .. } => self.eval(&s.raw_branch(n), env)?,
            Gen::Apply { inner, arg } => {
                let f = self.seq_value(inner, env, n)?;
                let a = self.eval(arg, env)?;
                self.apply(&f, a)?
            }
            Gen::Subst { inner, map } => {
                let mut env2 = env.clone();
                for (v, t) in map {
                    let val = self.eval(t, env)?;
                    env2 = env2.bind(v.clone(), val);
                }
                self.seq_value(inner, &env2, n)?
            }
            Gen::Normal { inner } => match s.memoized(n) {
                Some(t) => self.eval(&t, env)?,
                None => self.seq_value(inner, env, n)?,
            },
        };
        if closed {
            self.seq_cache.insert((s.id(), n), v.clone());
        }
        Ok(v)
    }

    fn group_value(&mut self, g: &Arc<SimGroup>, env: &Env, n: u64, closed: bool) -> Result<Vec<Value>, SemError> {
        let key = Arc::as_ptr(g) as *const u8 as usize;
        if closed {
            if let Some(v) = self.group_cache.get(&(key, n)) {
                return Ok(v.clone());
            }
        }
        let (mut k, mut level) = match closed.then(|| self.group_cache.range((key, 0)..=(key, n)).next_back()).flatten() {
            Some(((_, k), v)) => (*k, v.clone()),
            None => (0, g.bases().iter().map(|b| self.eval(b, env)).collect::<Result<Vec<_>, _>>()?),
        };
        let steps = g.steps().iter().map(|s| self.eval(s, env)).collect::<Result<Vec<_>, _>>()?;
        while k < n {
            let mut next = Vec::with_capacity(steps.len());
            for s in &steps {
                let mut f = self.apply(s, Value::Nat(BigUint::from(k)))?;
                for v in &level {
                    f = self.apply(&f, v.clone())?;
                }
                next.push(f);
            }
            level = next;
            k += 1;
            if closed {
                self.group_cache.insert((key, k), level.clone());
            }
        }
        Ok(level)
    }

    /// `‖B‖^{M,ω}_e` for quantifier-free ω-formulas.
    pub fn eval_oformula(&mut self, b: &OFormula, env: &Env) -> Result<bool, SemError> {
        match b {
            OFormula::Atom(r, args) => {
                let vals = args.iter().map(|a| self.eval_nat(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.m.rel_value(r, &vals)
            }
            OFormula::Eq(x, y) => Ok(self.eval_nat(x, env)? == self.eval_nat(y, env)?),
            OFormula::Not(a) => Ok(!self.eval_oformula(a, env)?),
            OFormula::Or(x, y) => Ok(self.eval_oformula(x, env)? || self.eval_oformula(y, env)?),
            OFormula::Forall(..) => {
                let (z, t, body) = b.as_forall_le().ok_or_else(|| SemError::NotQuantifierFree(format!("{}", b)))?;
                let bound = to_u64(&self.eval_nat(t, env)?).ok_or(SemError::IndexTooLarge)?;
                for v in 0..=bound {
                    self.burn()?;
                    let env2 = env.bind(z.clone(), Value::Nat(BigUint::from(v)));
                    if !self.eval_oformula(body, &env2)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

fn decide_case(m: &Structure, c: &CaseConst, args: &[BigUint]) -> Result<BigUint, SemError> {
    let k = c.vars.len();
    let env: NatEnv = c.vars.iter().cloned().zip(args[..k].iter().cloned()).collect();
    Ok(if eval_qf(m, &c.formula, &env)? { args[k].clone() } else { args[k + 1].clone() })
}

/// Closed type-0 term evaluated without normalization.
pub fn eval_direct(m: &Structure, t: &Term) -> Result<BigUint, SemError> {
    Evaluator::new(m).eval_nat(t, &Env::new())
}

/// Evaluates a closed type-0 term in normal form by walking its spine,
/// demanding normal branches of zero sequences.
pub fn eval_normal(m: &Structure, engine: &mut Engine, s: &Term) -> Result<BigUint, SemError> {
    let mut memo = BTreeMap::new();
    eval_normal_in(m, engine, s, &mut memo)
}

fn eval_normal_in(
    m: &Structure,
    engine: &mut Engine,
    s: &Term,
    memo: &mut BTreeMap<usize, BigUint>,
) -> Result<BigUint, SemError> {
    if let Some(n) = s.as_numeral() {
        return Ok(BigUint::from(n));
    }
    if let Some(v) = memo.get(&s.addr()) {
        return Ok(v.clone());
    }
    let (head, args) = analyze_spine(s)?;
    let v = match head {
        SpineHead::Const(c, _) => {
            let vals = args.iter().map(|a| eval_normal_in(m, engine, a, memo)).collect::<Result<Vec<_>, _>>()?;
            m.fn_value(&c, &vals)?
        }
        SpineHead::Case(c) => {
            let vals = args.iter().map(|a| eval_normal_in(m, engine, a, memo)).collect::<Result<Vec<_>, _>>()?;
            decide_case(m, &c, &vals)?
        }
        SpineHead::Seq(q) => {
            let r = eval_normal_in(m, engine, &args[0], memo)?;
            let r = to_u64(&r).ok_or(SemError::IndexTooLarge)?;
            let branch = engine.normal_branch(&q, r)?;
            eval_normal_in(m, engine, &branch, memo)?
        }
    };
    memo.insert(s.addr(), v.clone());
    Ok(v)
}

/// `s^{M,ω}`: normalize, then evaluate the spine.
pub fn eval_omega(m: &Structure, s: &Term, budget: Budget) -> Result<BigUint, SemError> {
    let mut engine = Engine::new(budget);
    let nf = engine.normalize(s)?;
    eval_normal(m, &mut engine, &nf)
}

/// Sample closed terms of type `ty`: `0..=5` at type 0; at function types the
/// constant 0, the identity, successor and `+2` of a probe of the first argument.
pub fn sample_terms(ty: &Type) -> Vec<Term> {
    if ty.is_zero() {
        return (0..=5).map(numeral).collect();
    }
    let args: Vec<Var> = ty.arg_types().into_iter().map(|t| crate::omega::fresh_var("p", t)).collect();
    let a1 = &args[0];
    let zs: Vec<Term> = a1.ty.arg_types().iter().map(crate::omega::zero_functional).collect();
    let probe = Term::apps(Term::var(a1.clone()), &zs).expect("probe typing");
    let bodies = [Term::zero(), probe.clone(), Term::succ(probe.clone()), Term::succ(Term::succ(probe))];
    bodies.into_iter().map(|b| Term::lams(&args, b)).collect()
}

/// Valuations of `vars` by sample terms: exhaustive up to 4096 combinations,
/// otherwise 512 seeded draws.
pub fn sample_valuations(vars: &[Var], seed: u64) -> Vec<Vec<(Var, Term)>> {
    let pools: Vec<Vec<Term>> = vars.iter().map(|v| sample_terms(&v.ty)).collect();
    let total = pools.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()));
    let pick = |idx: &[usize]| -> Vec<(Var, Term)> {
        vars.iter().cloned().zip(idx.iter().zip(&pools).map(|(i, p)| p[*i].clone())).collect()
    };
    match total {
        Some(n) if n <= 4096 => {
            let mut out = Vec::with_capacity(n);
            let mut idx = vec![0usize; vars.len()];
            loop {
                out.push(pick(&idx));
                let mut pos = 0;
                while pos < idx.len() && idx[pos] + 1 == pools[pos].len() {
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    return out;
                }
                idx[pos] += 1;
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..512)
                .map(|_| {
                    let idx: Vec<usize> = pools.iter().map(|p| (rng.next_u64() % p.len() as u64) as usize).collect();
                    pick(&idx)
                })
                .collect()
        }
    }
}

/// Rational number helper for structure definitions.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::omega::{argmax_formula, derived_case_term, embed_formula, embed_term, recursor, simultaneous_recursor};

    pub(crate) fn metastability_sig() -> Signature {
        let mut s = Signature::standard();
        s.add_function("k", 0).unwrap();
        s.add_function("g", 1).unwrap();
        s.add_relation("P", 3).unwrap();
        s
    }

    pub(crate) fn metastability_spec(k: i64, g_plus: i64) -> StructureSpec {
        let p = |n: &str| name(n);
        StructureSpec {
            consts: vec![(p("k"), Expr::int(k))],
            funs: vec![(p("g"), FunDef::Expr { params: vec![p("n")], body: Expr::bin("+", Expr::name("n"), Expr::int(g_plus)).unwrap() })],
            seqs: vec![(p("a"), p("n"), Expr::bin("/", Expr::int(1), Expr::bin("+", Expr::name("n"), Expr::int(1)).unwrap()).unwrap())],
            rels: vec![(
                p("P"),
                vec![p("v"), p("w"), p("l")],
                Cond::Cmp(
                    CmpOp::Le,
                    Expr::bin("-", Expr::call("a", vec![Expr::name("v")]), Expr::call("a", vec![Expr::name("w")])).unwrap(),
                    Expr::bin("/", Expr::name("l"), Expr::bin("+", Expr::name("k"), Expr::int(1)).unwrap()).unwrap(),
                ),
            )],
        }
    }

    fn nat(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn sig_term_values() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let e = NatEnv::new();
        assert_eq!(eval_sig_term(&m, &SigTerm::numeral(2), &e).unwrap(), nat(2));
        let g0 = SigTerm::app("g", vec![SigTerm::zero()]);
        assert_eq!(eval_sig_term(&m, &g0, &e).unwrap(), nat(1));
        let g3 = (0..3).fold(SigTerm::zero(), |t, _| SigTerm::app("g", vec![t]));
        assert_eq!(eval_sig_term(&m, &g3, &e).unwrap(), nat(3));
    }

    #[test]
    fn qf_values() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let e = NatEnv::new();
        assert!(eval_qf(&m, &Formula::le(SigTerm::zero(), SigTerm::numeral(1)), &e).unwrap());
        let bounded = Formula::forall_le("x", SigTerm::numeral(2), Formula::lt(SigTerm::var("x"), SigTerm::numeral(3)));
        assert!(eval_qf(&m, &bounded, &e).unwrap());
        let p011 = Formula::atom("P", vec![SigTerm::zero(), SigTerm::numeral(1), SigTerm::numeral(1)]);
        assert!(!eval_qf(&m, &p011, &e).unwrap());
        let p121 = Formula::atom("P", vec![SigTerm::numeral(1), SigTerm::numeral(2), SigTerm::numeral(1)]);
        assert!(eval_qf(&m, &p121, &e).unwrap());
    }

    #[test]
    fn structure_validation() {
        let sig = metastability_sig();
        let mut spec = metastability_spec(2, 1);
        spec.funs.push((name("+"), FunDef::Iterate { of: name("g"), times: 2 }));
        assert_eq!(Structure::new(&sig, &spec).unwrap_err(), SemError::ArithmeticOverride(name("+")));
        let mut spec = metastability_spec(2, 1);
        spec.rels.clear();
        assert_eq!(Structure::new(&sig, &spec).unwrap_err(), SemError::MissingDefinition(name("P")));
    }

    #[test]
    fn gamma_sampling() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let bad = Formula::forall("x", Formula::lt(SigTerm::var("x"), SigTerm::var("x")));
        let r = check_gamma(&m, &[bad], 10).unwrap();
        assert_eq!(r.counterexamples, vec![(0, vec![(name("x"), 0)])]);
        assert!(check_gamma(&m, &[], 10).unwrap().passed());
    }

    #[test]
    fn case_term_equation() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let phi = Formula::eq(SigTerm::var("x"), SigTerm::zero());
        let c = derived_case_term(&sig, &phi).unwrap();
        for (x, want) in [(0, 7), (1, 9)] {
            let t = Term::apps(c.clone(), &[numeral(x), numeral(7), numeral(9)]).unwrap();
            assert_eq!(eval_direct(&m, &t).unwrap(), nat(want));
            assert_eq!(eval_omega(&m, &t, Budget::default()).unwrap(), nat(want));
        }
    }

    #[test]
    fn recursor_and_argmax() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let v = Var::nat("v");
        let w = Var::nat("w");
        let step = Term::lams(&[v, w.clone()], Term::app(Term::constant("g", 1), Term::var(w)).unwrap());
        let r = recursor(Term::app(Term::constant("g", 1), Term::zero()).unwrap(), step).unwrap();
        for n in 0..10 {
            let t = Term::app(r.clone(), numeral(n)).unwrap();
            assert_eq!(eval_direct(&m, &t).unwrap(), nat(n + 1));
        }
        let phi = Formula::lt(SigTerm::var("x"), SigTerm::numeral(4));
        let a = argmax_formula(&sig, &phi, 0).unwrap();
        for n in 0..8u64 {
            let want = if n == 0 { 0 } else { (n - 1).min(3) };
            let t = Term::app(a.clone(), numeral(n)).unwrap();
            assert_eq!(eval_direct(&m, &t).unwrap(), nat(want));
            assert_eq!(eval_omega(&m, &t, Budget::default()).unwrap(), nat(want));
        }
    }

    #[test]
    fn simultaneous_components() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let (n, a, b) = (Var::nat("n"), Var::nat("a"), Var::nat("b"));
        let s1 = Term::lams(&[n.clone(), a.clone(), b.clone()], Term::succ(Term::var(b.clone())));
        let s2 = Term::lams(&[n, a.clone(), b], Term::app(Term::constant("g", 1), Term::var(a)).unwrap());
        let g0 = Term::app(Term::constant("g", 1), Term::zero()).unwrap();
        let rs = simultaneous_recursor(vec![Term::zero(), g0], vec![s1, s2]).unwrap();
        let (mut x, mut y) = (0u64, 1u64);
        for i in 0..=10 {
            for (j, want) in [(0, x), (1, y)] {
                let t = Term::app(rs[j].clone(), numeral(i)).unwrap();
                assert_eq!(eval_direct(&m, &t).unwrap(), nat(want));
                assert_eq!(eval_omega(&m, &t, Budget::default()).unwrap(), nat(want));
            }
            (x, y) = (y + 1, x + 1);
        }
    }

    #[test]
    fn embedding_coherence_small() {
        let sig = metastability_sig();
        let m = Structure::new(&sig, &metastability_spec(2, 1)).unwrap();
        let t = SigTerm::app("+", vec![SigTerm::var("x"), SigTerm::numeral(1)]);
        let it = embed_term(&sig, &t).unwrap();
        for x in 0..=10u64 {
            let closed = it.subst1(&Var::nat("x"), &numeral(x));
            assert_eq!(eval_direct(&m, &closed).unwrap(), nat(x + 1));
            assert_eq!(eval_omega(&m, &closed, Budget::default()).unwrap(), nat(x + 1));
        }
        let phi = Formula::le(SigTerm::app("*", vec![SigTerm::numeral(2), SigTerm::numeral(3)]), SigTerm::numeral(6));
        let b = embed_formula(&sig, &phi).unwrap();
        assert!(Evaluator::new(&m).eval_oformula(&b, &Env::new()).unwrap());
    }

    #[test]
    fn samples() {
        let f = Var::new("f", Type::nat_fn(1));
        let x = Var::nat("x");
        let vals = sample_valuations(&[f, x], 1);
        assert_eq!(vals.len(), 24);
        let h = Var::new("h", Type::arrow(Type::nat_fn(1), Type::Zero));
        let many: Vec<Var> = (0..7).map(|_| h.clone()).collect();
        assert_eq!(sample_valuations(&many, 3).len(), 512);
        assert_eq!(sample_valuations(&many, 3).len(), 512);
    }
}
