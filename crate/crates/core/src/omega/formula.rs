use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::{fresh_var, Term, Var};
use crate::syntax::{name, Name, LESS};

/// Formulas whose terms are ω-terms of type 0.
#[derive(Clone, Debug, PartialEq)]
pub enum OFormula {
    Atom(Name, Vec<Term>),
    Eq(Term, Term),
    Not(Arc<OFormula>),
    Or(Arc<OFormula>, Arc<OFormula>),
    Forall(Var, Arc<OFormula>),
}

impl OFormula {
    pub fn not(a: OFormula) -> OFormula {
        OFormula::Not(Arc::new(a))
    }

    pub fn or(a: OFormula, b: OFormula) -> OFormula {
        OFormula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn and(a: OFormula, b: OFormula) -> OFormula {
        OFormula::not(OFormula::or(OFormula::not(a), OFormula::not(b)))
    }

    pub fn lt(a: Term, b: Term) -> OFormula {
        OFormula::Atom(name(LESS), alloc::vec![a, b])
    }

    pub fn le(a: Term, b: Term) -> OFormula {
        OFormula::or(OFormula::lt(a.clone(), b.clone()), OFormula::Eq(a, b))
    }

    /// `forall z (or (not (<= z t)) a)`.
    pub fn forall_le(z: Var, t: Term, a: OFormula) -> OFormula {
        let guard = OFormula::not(OFormula::le(Term::var(z.clone()), t));
        OFormula::Forall(z, Arc::new(OFormula::or(guard, a)))
    }

    pub fn as_forall_le(&self) -> Option<(&Var, &Term, &OFormula)> {
        let OFormula::Forall(z, body) = self else { return None };
        let OFormula::Or(guard, a) = &**body else { return None };
        let OFormula::Not(le) = &**guard else { return None };
        let OFormula::Or(l, r) = &**le else { return None };
        let OFormula::Atom(rel, args) = &**l else { return None };
        let OFormula::Eq(c, d) = &**r else { return None };
        if &**rel != LESS || args.len() != 2 || args[0] != *c || args[1] != *d {
            return None;
        }
        if args[0].as_var() != Some(z) || args[1].has_free(z) {
            return None;
        }
        Some((z, &args[1], a))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            OFormula::Atom(..) | OFormula::Eq(..) => true,
            OFormula::Not(a) => a.is_quantifier_free(),
            OFormula::Or(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            OFormula::Forall(..) => match self.as_forall_le() {
                Some((_, _, a)) => a.is_quantifier_free(),
                None => false,
            },
        }
    }

    /// Free variables in order of first appearance.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect(&mut Vec::new(), &mut out);
        out
    }

    fn collect(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        let add = |t: &Term, bound: &Vec<Var>, out: &mut Vec<Var>| {
            for v in t.fv() {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match self {
            OFormula::Atom(_, args) => args.iter().for_each(|t| add(t, bound, out)),
            OFormula::Eq(a, b) => {
                add(a, bound, out);
                add(b, bound, out);
            }
            OFormula::Not(a) => a.collect(bound, out),
            OFormula::Or(a, b) => {
                a.collect(bound, out);
                b.collect(bound, out);
            }
            OFormula::Forall(z, a) => {
                bound.push(z.clone());
                a.collect(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, v: &Var) -> bool {
        match self {
            OFormula::Atom(_, args) => args.iter().any(|t| t.has_free(v)),
            OFormula::Eq(a, b) => a.has_free(v) || b.has_free(v),
            OFormula::Not(a) => a.has_free(v),
            OFormula::Or(a, b) => a.has_free(v) || b.has_free(v),
            OFormula::Forall(z, a) => z != v && a.has_free(v),
        }
    }

    /// Simultaneous capture-avoiding substitution.
    pub fn subst(&self, map: &[(Var, Term)]) -> OFormula {
        match self {
            OFormula::Atom(r, args) => OFormula::Atom(r.clone(), args.iter().map(|t| t.subst(map)).collect()),
            OFormula::Eq(a, b) => OFormula::Eq(a.subst(map), b.subst(map)),
            OFormula::Not(a) => OFormula::not(a.subst(map)),
            OFormula::Or(a, b) => OFormula::or(a.subst(map), b.subst(map)),
            OFormula::Forall(z, a) => {
                let inner: Vec<(Var, Term)> =
                    map.iter().filter(|(w, _)| w != z && a.has_free(w)).cloned().collect();
                if inner.is_empty() {
                    return self.clone();
                }
                if inner.iter().any(|(_, t)| t.has_free(z)) {
                    let z2 = fresh_var(&z.name, z.ty.clone());
                    let mut renamed = inner;
                    renamed.push((z.clone(), Term::var(z2.clone())));
                    OFormula::Forall(z2, Arc::new(a.subst(&renamed)))
                } else {
                    OFormula::Forall(z.clone(), Arc::new(a.subst(&inner)))
                }
            }
        }
    }

    /// Removes every double negation.
    pub fn strip_double_negations(&self) -> OFormula {
        match self {
            OFormula::Not(a) => match &**a {
                OFormula::Not(b) => b.strip_double_negations(),
                _ => OFormula::not(a.strip_double_negations()),
            },
            OFormula::Or(a, b) => OFormula::or(a.strip_double_negations(), b.strip_double_negations()),
            OFormula::Forall(z, a) => OFormula::Forall(z.clone(), Arc::new(a.strip_double_negations())),
            _ => self.clone(),
        }
    }

    pub fn alpha_eq(&self, other: &OFormula) -> bool {
        alpha_eq_in(self, other, &mut Vec::new())
    }
}

fn alpha_eq_in(a: &OFormula, b: &OFormula, env: &mut Vec<(Var, Var)>) -> bool {
    let term_eq = |x: &Term, y: &Term, env: &Vec<(Var, Var)>| {
        if env.is_empty() {
            return x.alpha_eq(y);
        }
        let fresh: Vec<(Var, Term)> =
            env.iter().map(|(l, _)| (l.clone(), Term::var(fresh_var("b", l.ty.clone())))).collect();
        let lhs = x.subst(&fresh);
        let rmap: Vec<(Var, Term)> =
            env.iter().zip(fresh.iter()).map(|((_, r), (_, t))| (r.clone(), t.clone())).collect();
        lhs.alpha_eq(&y.subst(&rmap))
    };
    match (a, b) {
        (OFormula::Atom(r, xs), OFormula::Atom(s, ys)) => {
            r == s && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
        }
        (OFormula::Eq(x1, x2), OFormula::Eq(y1, y2)) => term_eq(x1, y1, env) && term_eq(x2, y2, env),
        (OFormula::Not(x), OFormula::Not(y)) => alpha_eq_in(x, y, env),
        (OFormula::Or(x1, x2), OFormula::Or(y1, y2)) => alpha_eq_in(x1, y1, env) && alpha_eq_in(x2, y2, env),
        (OFormula::Forall(v, x), OFormula::Forall(w, y)) => {
            if v.ty != w.ty {
                return false;
            }
            env.push((v.clone(), w.clone()));
            let r = alpha_eq_in(x, y, env);
            env.pop();
            r
        }
        _ => false,
    }
}

impl fmt::Display for OFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OFormula::Atom(r, args) if args.is_empty() => f.write_str(r),
            OFormula::Atom(r, args) => {
                write!(f, "({}", r)?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                f.write_str(")")
            }
            OFormula::Eq(a, b) => write!(f, "(= {} {})", a, b),
            OFormula::Not(a) => write!(f, "(not {})", a),
            OFormula::Or(a, b) => write!(f, "(or {} {})", a, b),
            OFormula::Forall(z, a) => write!(f, "(forall {} {})", z, a),
        }
    }
}
