//! First-order syntax over signatures extending the arithmetic signature.
//!
//! Derived connectives are not separate node kinds: `and`, `implies`,
//! `exists`, `<=` and the bounded quantifiers are built as their primitive
//! expansions and recognized by matching those exact shapes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::pr::PrRegistry;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

pub const ZERO: &str = "0";
pub const SUCC: &str = "S";
pub const LESS: &str = "<";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SigTerm {
    Var(Name),
    App(Name, Vec<SigTerm>),
}

impl SigTerm {
    pub fn var(x: &str) -> SigTerm {
        SigTerm::Var(name(x))
    }

    pub fn app(f: &str, args: Vec<SigTerm>) -> SigTerm {
        SigTerm::App(name(f), args)
    }

    pub fn constant(c: &str) -> SigTerm {
        SigTerm::App(name(c), Vec::new())
    }

    pub fn zero() -> SigTerm {
        SigTerm::constant(ZERO)
    }

    pub fn succ(t: SigTerm) -> SigTerm {
        SigTerm::App(name(SUCC), alloc::vec![t])
    }

    pub fn numeral(n: u64) -> SigTerm {
        let mut t = SigTerm::zero();
        for _ in 0..n {
            t = SigTerm::succ(t);
        }
        t
    }

    /// Value of `S...S0`, if the term has that shape.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        loop {
            match cur {
                SigTerm::App(f, args) if &**f == ZERO && args.is_empty() => return Some(n),
                SigTerm::App(f, args) if &**f == SUCC && args.len() == 1 => {
                    n += 1;
                    cur = &args[0];
                }
                _ => return None,
            }
        }
    }

    pub fn has_var(&self, x: &str) -> bool {
        match self {
            SigTerm::Var(y) => &**y == x,
            SigTerm::App(_, args) => args.iter().any(|a| a.has_var(x)),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            SigTerm::Var(_) => false,
            SigTerm::App(_, args) => args.iter().all(SigTerm::is_closed),
        }
    }

    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            SigTerm::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            SigTerm::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn subst(&self, x: &str, t: &SigTerm) -> SigTerm {
        match self {
            SigTerm::Var(y) if &**y == x => t.clone(),
            SigTerm::Var(_) => self.clone(),
            SigTerm::App(f, args) => {
                SigTerm::App(f.clone(), args.iter().map(|a| a.subst(x, t)).collect())
            }
        }
    }

    /// Simultaneous substitution.
    pub fn subst_many(&self, map: &BTreeMap<Name, SigTerm>) -> SigTerm {
        match self {
            SigTerm::Var(y) => map.get(y).cloned().unwrap_or_else(|| self.clone()),
            SigTerm::App(f, args) => {
                SigTerm::App(f.clone(), args.iter().map(|a| a.subst_many(map)).collect())
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            SigTerm::Var(_) => 1,
            SigTerm::App(_, args) => 1 + args.iter().map(SigTerm::size).sum::<usize>(),
        }
    }

    pub fn function_symbols(&self, out: &mut BTreeSet<Name>) {
        if let SigTerm::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.function_symbols(out));
        }
    }
}

impl fmt::Display for SigTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigTerm::Var(x) => f.write_str(x),
            SigTerm::App(g, args) if args.is_empty() => f.write_str(g),
            SigTerm::App(g, args) => {
                write!(f, "({}", g)?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Name, Vec<SigTerm>),
    Eq(SigTerm, SigTerm),
    Not(Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Forall(Name, Arc<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    QuantifierFree,
    Universal,
    Existential,
    Other,
}

impl Formula {
    pub fn atom(r: &str, args: Vec<SigTerm>) -> Formula {
        Formula::Atom(name(r), args)
    }

    pub fn eq(a: SigTerm, b: SigTerm) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn lt(a: SigTerm, b: SigTerm) -> Formula {
        Formula::Atom(name(LESS), alloc::vec![a, b])
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Arc::new(a))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn forall(x: &str, a: Formula) -> Formula {
        Formula::Forall(name(x), Arc::new(a))
    }

    pub fn forall_n(x: &Name, a: Formula) -> Formula {
        Formula::Forall(x.clone(), Arc::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn exists(x: &str, a: Formula) -> Formula {
        Formula::not(Formula::forall(x, Formula::not(a)))
    }

    pub fn le(a: SigTerm, b: SigTerm) -> Formula {
        Formula::or(Formula::lt(a.clone(), b.clone()), Formula::Eq(a, b))
    }

    pub fn forall_le(x: &str, t: SigTerm, a: Formula) -> Formula {
        Formula::forall(x, Formula::or(Formula::not(Formula::le(SigTerm::var(x), t)), a))
    }

    pub fn exists_le(x: &str, t: SigTerm, a: Formula) -> Formula {
        Formula::not(Formula::forall_le(x, t, Formula::not(a)))
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Not(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Or(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_forall(&self) -> Option<(&Name, &Formula)> {
        match self {
            Formula::Forall(x, a) => Some((x, a)),
            _ => None,
        }
    }

    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        let (a, b) = self.as_or()?;
        Some((a.as_not()?, b))
    }

    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        let (a, b) = self.as_not()?.as_or()?;
        Some((a.as_not()?, b.as_not()?))
    }

    pub fn as_exists(&self) -> Option<(&Name, &Formula)> {
        let (x, body) = self.as_not()?.as_forall()?;
        Some((x, body.as_not()?))
    }

    pub fn as_lt(&self) -> Option<(&SigTerm, &SigTerm)> {
        match self {
            Formula::Atom(r, args) if &**r == LESS && args.len() == 2 => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    pub fn as_le(&self) -> Option<(&SigTerm, &SigTerm)> {
        let (l, r) = self.as_or()?;
        let (a, b) = l.as_lt()?;
        match r {
            Formula::Eq(c, d) if a == c && b == d => Some((a, b)),
            _ => None,
        }
    }

    /// Recognizes `forall x (or (not (<= x t)) a)` with `x` not in `t`.
    pub fn as_forall_le(&self) -> Option<(&Name, &SigTerm, &Formula)> {
        let (x, body) = self.as_forall()?;
        let (guard, a) = body.as_or()?;
        let (v, t) = guard.as_not()?.as_le()?;
        match v {
            SigTerm::Var(y) if y == x && !t.has_var(x) => Some((x, t, a)),
            _ => None,
        }
    }

    pub fn as_exists_le(&self) -> Option<(&Name, &SigTerm, &Formula)> {
        let (x, t, a) = self.as_not()?.as_forall_le()?;
        Some((x, t, a.as_not()?))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Eq(..) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Forall(..) => match self.as_forall_le() {
                Some((_, _, a)) => a.is_quantifier_free(),
                None => false,
            },
        }
    }

    /// `forall x1 ... forall xn A` with `A` quantifier-free (n may be 0).
    pub fn universal_matrix(&self) -> Option<(Vec<Name>, &Formula)> {
        let mut vars = Vec::new();
        let mut cur = self;
        loop {
            if cur.is_quantifier_free() {
                return Some((vars, cur));
            }
            let (x, a) = cur.as_forall()?;
            vars.push(x.clone());
            cur = a;
        }
    }

    /// `exists x1 ... exists xn A` with `A` quantifier-free (n may be 0).
    pub fn existential_matrix(&self) -> Option<(Vec<Name>, &Formula)> {
        let mut vars = Vec::new();
        let mut cur = self;
        loop {
            if cur.is_quantifier_free() {
                return Some((vars, cur));
            }
            let (x, a) = cur.as_exists()?;
            vars.push(x.clone());
            cur = a;
        }
    }

    pub fn classify(&self) -> Class {
        if self.is_quantifier_free() {
            Class::QuantifierFree
        } else if self.universal_matrix().is_some() {
            Class::Universal
        } else if self.existential_matrix().is_some() {
            Class::Existential
        } else {
            Class::Other
        }
    }

    pub fn is_universal(&self) -> bool {
        matches!(self.classify(), Class::QuantifierFree | Class::Universal)
    }

    pub fn is_existential(&self) -> bool {
        matches!(self.classify(), Class::QuantifierFree | Class::Existential)
    }

    /// Free variables in order of first appearance.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        let term = |t: &SigTerm, out: &mut Vec<Name>| {
            for v in t.free_vars() {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| term(t, out)),
            Formula::Eq(a, b) => {
                term(a, out);
                term(b, out);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Atom(_, args) => args.iter().any(|t| t.has_var(x)),
            Formula::Eq(a, b) => a.has_var(x) || b.has_var(x),
            Formula::Not(a) => a.has_free(x),
            Formula::Or(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Forall(y, a) => &**y != x && a.has_free(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring free or bound.
    pub fn all_vars(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(_, args) => {
                args.iter().for_each(|t| out.extend(t.free_vars()));
            }
            Formula::Eq(a, b) => {
                out.extend(a.free_vars());
                out.extend(b.free_vars());
            }
            Formula::Not(a) => a.all_vars(out),
            Formula::Or(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::Forall(x, a) => {
                out.insert(x.clone());
                a.all_vars(out);
            }
        }
    }

    /// `x` is free for `t`: no free occurrence of `x` lies under a binder of a variable of `t`.
    pub fn is_free_for(&self, x: &str, t: &SigTerm) -> bool {
        match self {
            Formula::Atom(..) | Formula::Eq(..) => true,
            Formula::Not(a) => a.is_free_for(x, t),
            Formula::Or(a, b) => a.is_free_for(x, t) && b.is_free_for(x, t),
            Formula::Forall(y, a) => {
                if &**y == x || !a.has_free(x) {
                    true
                } else {
                    !t.has_var(y) && a.is_free_for(x, t)
                }
            }
        }
    }

    /// `self[x := t]`, renaming bound variables that would capture variables of `t`.
    pub fn substitute(&self, x: &str, t: &SigTerm) -> Formula {
        match self {
            Formula::Atom(r, args) => {
                Formula::Atom(r.clone(), args.iter().map(|a| a.subst(x, t)).collect())
            }
            Formula::Eq(a, b) => Formula::Eq(a.subst(x, t), b.subst(x, t)),
            Formula::Not(a) => Formula::not(a.substitute(x, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(x, t), b.substitute(x, t)),
            Formula::Forall(y, a) => {
                if &**y == x || !a.has_free(x) {
                    self.clone()
                } else if t.has_var(y) {
                    let mut avoid = BTreeSet::new();
                    avoid.extend(t.free_vars());
                    a.all_vars(&mut avoid);
                    avoid.insert(name(x));
                    let y2 = primed_variant(y, &avoid);
                    let renamed = a.substitute(y, &SigTerm::Var(y2.clone()));
                    Formula::Forall(y2, Arc::new(renamed.substitute(x, t)))
                } else {
                    Formula::Forall(y.clone(), Arc::new(a.substitute(x, t)))
                }
            }
        }
    }

    /// Simultaneous substitution for free variables (no capture avoidance; callers
    /// substitute terms whose variables are not bound in `self`).
    pub fn subst_many_unchecked(&self, map: &BTreeMap<Name, SigTerm>) -> Formula {
        match self {
            Formula::Atom(r, args) => {
                Formula::Atom(r.clone(), args.iter().map(|a| a.subst_many(map)).collect())
            }
            Formula::Eq(a, b) => Formula::Eq(a.subst_many(map), b.subst_many(map)),
            Formula::Not(a) => Formula::not(a.subst_many_unchecked(map)),
            Formula::Or(a, b) => {
                Formula::or(a.subst_many_unchecked(map), b.subst_many_unchecked(map))
            }
            Formula::Forall(y, a) => {
                if map.contains_key(y) {
                    let mut inner = map.clone();
                    inner.remove(y);
                    Formula::Forall(y.clone(), Arc::new(a.subst_many_unchecked(&inner)))
                } else {
                    Formula::Forall(y.clone(), Arc::new(a.subst_many_unchecked(map)))
                }
            }
        }
    }

    pub fn symbols(&self, fns: &mut BTreeSet<Name>, rels: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(r, args) => {
                rels.insert(r.clone());
                args.iter().for_each(|t| t.function_symbols(fns));
            }
            Formula::Eq(a, b) => {
                a.function_symbols(fns);
                b.function_symbols(fns);
            }
            Formula::Not(a) => a.symbols(fns, rels),
            Formula::Or(a, b) => {
                a.symbols(fns, rels);
                b.symbols(fns, rels);
            }
            Formula::Forall(_, a) => a.symbols(fns, rels),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(SigTerm::size).sum::<usize>(),
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Not(a) => 1 + a.size(),
            Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a) => 1 + a.size(),
        }
    }
}

/// `y'`, `y''`, ... : the first primed variant of `y` not in `avoid`.
pub fn primed_variant(y: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut s = String::from(y);
    loop {
        s.push('\'');
        if !avoid.iter().any(|v| **v == *s) {
            return name(&s);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = self.as_le() {
            return write!(f, "(<= {} {})", a, b);
        }
        if let Some((x, a)) = self.as_exists() {
            return write!(f, "(exists {} {})", x, a);
        }
        if let Some((a, b)) = self.as_and() {
            return write!(f, "(and {} {})", a, b);
        }
        match self {
            Formula::Atom(r, args) if args.is_empty() => f.write_str(r),
            Formula::Atom(r, args) => {
                write!(f, "({}", r)?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "(= {} {})", a, b),
            Formula::Not(a) => write!(f, "(not {})", a),
            Formula::Or(a, b) => write!(f, "(or {} {})", a, b),
            Formula::Forall(x, a) => write!(f, "(forall {} {})", x, a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnKind {
    ArithmeticBase,
    PrimitiveRecursive,
    Extra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelKind {
    LessThan,
    Extra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnSymbol {
    pub name: Name,
    pub arity: usize,
    pub kind: FnKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelSymbol {
    pub name: Name,
    pub arity: usize,
    pub kind: RelKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxError {
    DuplicateSymbol(Name),
    ReservedName(Name),
    UnknownFunction(Name),
    UnknownRelation(Name),
    Arity { symbol: Name, expected: usize, found: usize },
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxError::DuplicateSymbol(s) => write!(f, "symbol `{}` declared twice", s),
            SyntaxError::ReservedName(s) => write!(f, "`{}` is reserved", s),
            SyntaxError::UnknownFunction(s) => write!(f, "unknown function symbol `{}`", s),
            SyntaxError::UnknownRelation(s) => write!(f, "unknown relation symbol `{}`", s),
            SyntaxError::Arity { symbol, expected, found } => {
                write!(f, "`{}` expects {} arguments, got {}", symbol, expected, found)
            }
        }
    }
}

/// A signature containing the arithmetic signature: `0`, `S`, `<`, and every
/// symbol of its primitive recursive registry.
#[derive(Clone, Debug)]
pub struct Signature {
    functions: BTreeMap<Name, FnSymbol>,
    relations: BTreeMap<Name, RelSymbol>,
    registry: Arc<PrRegistry>,
}

impl Signature {
    pub fn arithmetic(registry: PrRegistry) -> Signature {
        let mut functions = BTreeMap::new();
        for (n, a) in [(ZERO, 0), (SUCC, 1)] {
            functions.insert(
                name(n),
                FnSymbol { name: name(n), arity: a, kind: FnKind::ArithmeticBase },
            );
        }
        for (n, d) in registry.iter() {
            functions.insert(
                n.clone(),
                FnSymbol { name: n.clone(), arity: d.arity(), kind: FnKind::PrimitiveRecursive },
            );
        }
        let mut relations = BTreeMap::new();
        relations.insert(
            name(LESS),
            RelSymbol { name: name(LESS), arity: 2, kind: RelKind::LessThan },
        );
        Signature { functions, relations, registry: Arc::new(registry) }
    }

    /// The arithmetic signature over the default roster.
    pub fn standard() -> Signature {
        Signature::arithmetic(crate::pr::default_roster())
    }

    fn check_fresh(&self, n: &str) -> Result<(), SyntaxError> {
        if n == "=" || n.is_empty() || n.bytes().all(|b| b.is_ascii_digit()) {
            return Err(SyntaxError::ReservedName(name(n)));
        }
        if self.functions.contains_key(n) || self.relations.contains_key(n) {
            return Err(SyntaxError::DuplicateSymbol(name(n)));
        }
        Ok(())
    }

    pub fn add_function(&mut self, n: &str, arity: usize) -> Result<(), SyntaxError> {
        self.check_fresh(n)?;
        self.functions
            .insert(name(n), FnSymbol { name: name(n), arity, kind: FnKind::Extra });
        Ok(())
    }

    pub fn add_relation(&mut self, n: &str, arity: usize) -> Result<(), SyntaxError> {
        self.check_fresh(n)?;
        self.relations
            .insert(name(n), RelSymbol { name: name(n), arity, kind: RelKind::Extra });
        Ok(())
    }

    pub fn function(&self, n: &str) -> Option<&FnSymbol> {
        self.functions.get(n)
    }

    pub fn relation(&self, n: &str) -> Option<&RelSymbol> {
        self.relations.get(n)
    }

    pub fn functions(&self) -> impl Iterator<Item = &FnSymbol> {
        self.functions.values()
    }

    pub fn relations(&self) -> impl Iterator<Item = &RelSymbol> {
        self.relations.values()
    }

    pub fn registry(&self) -> &PrRegistry {
        &self.registry
    }

    pub fn is_arithmetic_function(&self, n: &str) -> bool {
        matches!(
            self.functions.get(n).map(|s| &s.kind),
            Some(FnKind::ArithmeticBase) | Some(FnKind::PrimitiveRecursive)
        )
    }

    /// Extra function symbols, in name order.
    pub fn extra_functions(&self) -> Vec<FnSymbol> {
        self.functions.values().filter(|s| s.kind == FnKind::Extra).cloned().collect()
    }

    pub fn extra_relations(&self) -> Vec<RelSymbol> {
        self.relations.values().filter(|s| s.kind == RelKind::Extra).cloned().collect()
    }

    pub fn check_term(&self, t: &SigTerm) -> Result<(), SyntaxError> {
        match t {
            SigTerm::Var(_) => Ok(()),
            SigTerm::App(f, args) => {
                let sym =
                    self.function(f).ok_or_else(|| SyntaxError::UnknownFunction(f.clone()))?;
                if sym.arity != args.len() {
                    return Err(SyntaxError::Arity {
                        symbol: f.clone(),
                        expected: sym.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    pub fn check_formula(&self, phi: &Formula) -> Result<(), SyntaxError> {
        match phi {
            Formula::Atom(r, args) => {
                let sym =
                    self.relation(r).ok_or_else(|| SyntaxError::UnknownRelation(r.clone()))?;
                if sym.arity != args.len() {
                    return Err(SyntaxError::Arity {
                        symbol: r.clone(),
                        expected: sym.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Formula::Eq(a, b) => {
                self.check_term(a)?;
                self.check_term(b)
            }
            Formula::Not(a) => self.check_formula(a),
            Formula::Or(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Forall(_, a) => self.check_formula(a),
        }
    }

    /// True if every symbol of the term is arithmetic.
    pub fn term_is_arithmetic(&self, t: &SigTerm) -> bool {
        match t {
            SigTerm::Var(_) => true,
            SigTerm::App(f, args) => {
                self.is_arithmetic_function(f) && args.iter().all(|a| self.term_is_arithmetic(a))
            }
        }
    }

    pub fn formula_is_arithmetic(&self, phi: &Formula) -> bool {
        let mut fns = BTreeSet::new();
        let mut rels = BTreeSet::new();
        phi.symbols(&mut fns, &mut rels);
        fns.iter().all(|f| self.is_arithmetic_function(f)) && rels.iter().all(|r| &**r == LESS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn p(args: Vec<SigTerm>) -> Formula {
        Formula::atom("P", args)
    }

    #[test]
    fn substitute_base_case() {
        let phi = p(vec![SigTerm::var("x")]);
        assert_eq!(phi.substitute("x", &SigTerm::zero()), p(vec![SigTerm::zero()]));
    }

    #[test]
    fn substitute_renames_bound_variable() {
        let phi = Formula::forall("y", p(vec![SigTerm::var("x"), SigTerm::var("y")]));
        let t = SigTerm::app("g", vec![SigTerm::var("y")]);
        let out = phi.substitute("x", &t);
        assert_eq!(out.to_string(), "(forall y' (P (g y) y'))");
    }

    #[test]
    fn substitute_two_occurrences() {
        let x = SigTerm::var("x");
        let phi = Formula::lt(x.clone(), SigTerm::succ(x));
        let g0 = SigTerm::app("g", vec![SigTerm::zero()]);
        assert_eq!(phi.substitute("x", &g0), Formula::lt(g0.clone(), SigTerm::succ(g0)));
    }

    #[test]
    fn classify_examples() {
        let (x, y, z) = (SigTerm::var("x"), SigTerm::var("y"), SigTerm::var("z"));
        assert_eq!(p(vec![x.clone(), y.clone(), z]).classify(), Class::QuantifierFree);
        let bounded = Formula::forall_le("x", SigTerm::var("t"), p(vec![x.clone()]));
        assert_eq!(bounded.classify(), Class::QuantifierFree);
        let alt = Formula::forall("x", Formula::exists("y", p(vec![x, y])));
        assert_eq!(alt.classify(), Class::Other);
    }

    #[test]
    fn bounded_shape_is_literal() {
        let phi = Formula::forall_le("x", SigTerm::var("t"), p(vec![SigTerm::var("x")]));
        assert_eq!(phi.to_string(), "(forall x (or (not (<= x t)) (P x)))");
        let (x, t, body) = phi.as_forall_le().unwrap();
        assert_eq!(&**x, "x");
        assert_eq!(t, &SigTerm::var("t"));
        assert_eq!(body, &p(vec![SigTerm::var("x")]));
    }

    #[test]
    fn bound_containing_variable_is_not_bounded() {
        let x = SigTerm::var("x");
        let phi = Formula::forall("x", Formula::or(Formula::not(Formula::le(x.clone(), SigTerm::succ(x.clone()))), p(vec![x])));
        assert!(phi.as_forall_le().is_none());
        assert_eq!(phi.classify(), Class::Universal);
    }

    #[test]
    fn free_vars_in_order() {
        let (x, y) = (SigTerm::var("x"), SigTerm::var("y"));
        let phi = p(vec![x.clone(), SigTerm::app("g", vec![y.clone()]), x.clone()]);
        assert_eq!(phi.free_vars(), vec![name("x"), name("y")]);
        let psi = Formula::forall("x", p(vec![x, y]));
        assert_eq!(psi.free_vars(), vec![name("y")]);
        let closed = Formula::forall("x", p(vec![SigTerm::var("x")]));
        assert!(closed.free_vars().is_empty());
    }

    #[test]
    fn existential_and_universal_prefixes() {
        let phi = Formula::exists("z", p(vec![SigTerm::var("x"), SigTerm::var("z")]));
        assert_eq!(phi.classify(), Class::Existential);
        let (vars, _) = phi.existential_matrix().unwrap();
        assert_eq!(vars, vec![name("z")]);
        let u = Formula::forall("x", Formula::forall("y", Formula::eq(SigTerm::var("x"), SigTerm::var("y"))));
        assert_eq!(u.classify(), Class::Universal);
    }

    #[test]
    fn free_for() {
        let phi = Formula::forall("y", p(vec![SigTerm::var("x"), SigTerm::var("y")]));
        assert!(!phi.is_free_for("x", &SigTerm::var("y")));
        assert!(phi.is_free_for("x", &SigTerm::var("z")));
        assert!(phi.is_free_for("y", &SigTerm::var("y")));
    }

    #[test]
    fn signature_rejects_duplicates_and_reserved() {
        let mut sig = Signature::standard();
        assert!(sig.add_function("g", 1).is_ok());
        assert_eq!(sig.add_function("g", 1), Err(SyntaxError::DuplicateSymbol(name("g"))));
        assert!(sig.add_relation("S", 1).is_err());
        assert!(sig.add_relation("=", 2).is_err());
        assert!(sig.function("+").is_some());
        assert_eq!(sig.relation("<").unwrap().kind, RelKind::LessThan);
    }

    #[test]
    fn numerals() {
        assert_eq!(SigTerm::numeral(3).to_string(), "(S (S (S 0)))");
        assert_eq!(SigTerm::numeral(17).as_numeral(), Some(17));
        assert_eq!(SigTerm::var("x").as_numeral(), None);
    }
}
