//! Primitive recursive derivations and the symbol roster.
//!
//! Recursion is on the last argument: `f(xs, 0) = g(xs)` and
//! `f(xs, S y) = h(xs, y, f(xs, y))`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::syntax::{name, Formula, Name, SigTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrDerivation {
    Zero(usize),
    Succ,
    Proj(usize, usize),
    Comp(Arc<PrDerivation>, Vec<Arc<PrDerivation>>),
    PrimRec(Arc<PrDerivation>, Arc<PrDerivation>),
    /// A registered symbol, carried with its derivation.
    Ref(Name, Arc<PrDerivation>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrError {
    Arity { expected: usize, found: usize },
    Malformed(&'static str),
    Unknown(Name),
    NotAxiomatizable(Name),
}

impl fmt::Display for PrError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrError::Arity { expected, found } => {
                write!(f, "arity mismatch: expected {}, found {}", expected, found)
            }
            PrError::Malformed(m) => write!(f, "malformed derivation: {}", m),
            PrError::Unknown(n) => write!(f, "no derivation registered for `{}`", n),
            PrError::NotAxiomatizable(n) => write!(
                f,
                "`{}` uses an anonymous nested recursion; its defining axioms need named parts",
                n
            ),
        }
    }
}

impl PrDerivation {
    pub fn proj(i: usize, n: usize) -> Arc<PrDerivation> {
        Arc::new(PrDerivation::Proj(i, n))
    }

    pub fn comp(f: Arc<PrDerivation>, gs: Vec<Arc<PrDerivation>>) -> Arc<PrDerivation> {
        Arc::new(PrDerivation::Comp(f, gs))
    }

    pub fn primrec(base: Arc<PrDerivation>, step: Arc<PrDerivation>) -> Arc<PrDerivation> {
        Arc::new(PrDerivation::PrimRec(base, step))
    }

    /// Arity, assuming the derivation validated.
    pub fn arity(&self) -> usize {
        match self {
            PrDerivation::Zero(n) => *n,
            PrDerivation::Succ => 1,
            PrDerivation::Proj(_, n) => *n,
            PrDerivation::Comp(_, gs) => gs.first().map(|g| g.arity()).unwrap_or(0),
            PrDerivation::PrimRec(b, _) => b.arity() + 1,
            PrDerivation::Ref(_, d) => d.arity(),
        }
    }

    /// Checks arity consistency at every node and returns the arity.
    pub fn validate(&self) -> Result<usize, PrError> {
        match self {
            PrDerivation::Zero(n) => Ok(*n),
            PrDerivation::Succ => Ok(1),
            PrDerivation::Proj(i, n) => {
                if *i == 0 || i > n {
                    Err(PrError::Malformed("projection index out of range"))
                } else {
                    Ok(*n)
                }
            }
            PrDerivation::Comp(f, gs) => {
                if gs.is_empty() {
                    return Err(PrError::Malformed("composition needs at least one inner function"));
                }
                let fa = f.validate()?;
                if fa != gs.len() {
                    return Err(PrError::Arity { expected: fa, found: gs.len() });
                }
                let n = gs[0].validate()?;
                for g in &gs[1..] {
                    let m = g.validate()?;
                    if m != n {
                        return Err(PrError::Arity { expected: n, found: m });
                    }
                }
                Ok(n)
            }
            PrDerivation::PrimRec(b, s) => {
                let n = b.validate()?;
                let m = s.validate()?;
                if m != n + 2 {
                    return Err(PrError::Arity { expected: n + 2, found: m });
                }
                Ok(n + 1)
            }
            PrDerivation::Ref(_, d) => d.validate(),
        }
    }

    /// Whether the value can depend on argument `i` (0-based); conservative.
    pub fn uses_arg(&self, i: usize) -> bool {
        match self {
            PrDerivation::Zero(_) => false,
            PrDerivation::Succ => i == 0,
            PrDerivation::Proj(j, _) => *j == i + 1,
            PrDerivation::Comp(f, gs) => {
                gs.iter().enumerate().any(|(j, g)| g.uses_arg(i) && f.uses_arg(j))
            }
            PrDerivation::PrimRec(b, s) => {
                let n = b.arity();
                i == n || b.uses_arg(i) || s.uses_arg(i)
            }
            PrDerivation::Ref(_, d) => d.uses_arg(i),
        }
    }

    /// Evaluates by direct interpretation of the derivation.
    pub fn eval(&self, args: &[BigUint]) -> Result<BigUint, PrError> {
        let a = self.validate()?;
        if a != args.len() {
            return Err(PrError::Arity { expected: a, found: args.len() });
        }
        Ok(self.run(args))
    }

    fn run(&self, args: &[BigUint]) -> BigUint {
        match self {
            PrDerivation::Zero(_) => BigUint::zero(),
            PrDerivation::Succ => &args[0] + 1u32,
            PrDerivation::Proj(i, _) => args[i - 1].clone(),
            PrDerivation::Comp(f, gs) => {
                let inner: Vec<BigUint> = gs.iter().map(|g| g.run(args)).collect();
                f.run(&inner)
            }
            PrDerivation::PrimRec(b, s) => {
                let n = args.len() - 1;
                let y = &args[n];
                let mut buf: Vec<BigUint> = args[..n].to_vec();
                if y.is_zero() {
                    return b.run(&buf);
                }
                if !s.uses_arg(n + 1) {
                    buf.push(y - 1u32);
                    buf.push(BigUint::zero());
                    return s.run(&buf);
                }
                let mut acc = b.run(&buf);
                buf.push(BigUint::zero());
                buf.push(BigUint::zero());
                let mut i = BigUint::zero();
                while &i < y {
                    buf[n] = i.clone();
                    buf[n + 1] = acc;
                    acc = s.run(&buf);
                    i += 1u32;
                }
                acc
            }
            PrDerivation::Ref(_, d) => d.run(args),
        }
    }

    /// The derivation as a term in `args`, if it is built from named parts only.
    pub fn as_term(&self, args: &[SigTerm]) -> Option<SigTerm> {
        match self {
            PrDerivation::Zero(_) => Some(SigTerm::zero()),
            PrDerivation::Succ => Some(SigTerm::succ(args[0].clone())),
            PrDerivation::Proj(i, _) => Some(args[i - 1].clone()),
            PrDerivation::Comp(f, gs) => {
                let inner = gs.iter().map(|g| g.as_term(args)).collect::<Option<Vec<_>>>()?;
                f.as_term(&inner)
            }
            PrDerivation::PrimRec(..) => None,
            PrDerivation::Ref(n, _) => Some(SigTerm::App(n.clone(), args.to_vec())),
        }
    }
}

impl fmt::Display for PrDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrDerivation::Zero(0) => f.write_str("zero"),
            PrDerivation::Zero(n) => write!(f, "(zero {})", n),
            PrDerivation::Succ => f.write_str("succ"),
            PrDerivation::Proj(i, n) => write!(f, "(proj {} {})", i, n),
            PrDerivation::Comp(g, hs) => {
                write!(f, "(comp {}", g)?;
                for h in hs {
                    write!(f, " {}", h)?;
                }
                f.write_str(")")
            }
            PrDerivation::PrimRec(b, s) => write!(f, "(primrec {} {})", b, s),
            PrDerivation::Ref(n, _) => f.write_str(n),
        }
    }
}

/// Native evaluator attached to a roster symbol.
pub type Jet = fn(&[BigUint]) -> BigUint;

#[derive(Clone, Debug)]
pub struct PrEntry {
    pub derivation: Arc<PrDerivation>,
    pub jet: Option<Jet>,
}

/// Named primitive recursive symbols, in registration order.
#[derive(Clone, Debug, Default)]
pub struct PrRegistry {
    entries: BTreeMap<Name, PrEntry>,
    order: Vec<Name>,
}

impl PrRegistry {
    pub fn new() -> PrRegistry {
        PrRegistry::default()
    }

    pub fn register(&mut self, n: &str, d: Arc<PrDerivation>) -> Result<(), PrError> {
        self.insert(n, d, None)
    }

    /// Registers a symbol with a native evaluator used by [`PrRegistry::eval`].
    pub fn register_with_jet(&mut self, n: &str, d: Arc<PrDerivation>, jet: Jet) -> Result<(), PrError> {
        self.insert(n, d, Some(jet))
    }

    fn insert(&mut self, n: &str, d: Arc<PrDerivation>, jet: Option<Jet>) -> Result<(), PrError> {
        d.validate()?;
        let key = name(n);
        if self.entries.insert(key.clone(), PrEntry { derivation: d, jet }).is_none() {
            self.order.push(key);
        }
        Ok(())
    }

    pub fn get(&self, n: &str) -> Option<&Arc<PrDerivation>> {
        self.entries.get(n).map(|e| &e.derivation)
    }

    /// A reference node for use inside other derivations.
    pub fn reference(&self, n: &str) -> Result<Arc<PrDerivation>, PrError> {
        let d = self.get(n).ok_or_else(|| PrError::Unknown(name(n)))?;
        Ok(Arc::new(PrDerivation::Ref(name(n), d.clone())))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Arc<PrDerivation>)> {
        self.order.iter().map(move |n| (n, &self.entries[n].derivation))
    }

    pub fn contains(&self, n: &str) -> bool {
        self.entries.contains_key(n)
    }

    /// Evaluates a symbol, through its jet when one is registered.
    pub fn eval(&self, n: &str, args: &[BigUint]) -> Result<BigUint, PrError> {
        let e = self.entries.get(n).ok_or_else(|| PrError::Unknown(name(n)))?;
        let a = e.derivation.arity();
        if a != args.len() {
            return Err(PrError::Arity { expected: a, found: args.len() });
        }
        match e.jet {
            Some(j) => Ok(j(args)),
            None => e.derivation.eval(args),
        }
    }

    /// Defining axioms of a symbol as universal sentences.
    pub fn defining_axioms(&self, n: &str) -> Result<Vec<Formula>, PrError> {
        let d = self.get(n).ok_or_else(|| PrError::Unknown(name(n)))?;
        let arity = d.arity();
        let fname = name(n);
        let close = |vars: &[SigTerm], body: Formula| {
            vars.iter().rev().fold(body, |acc, v| match v {
                SigTerm::Var(x) => Formula::forall_n(x, acc),
                SigTerm::App(..) => acc,
            })
        };
        match &**d {
            PrDerivation::PrimRec(b, s) => {
                let xs: Vec<SigTerm> =
                    (1..arity).map(|i| SigTerm::Var(name(&alloc::format!("x{}", i)))).collect();
                let y = SigTerm::var("y");
                let mut at0 = xs.clone();
                at0.push(SigTerm::zero());
                let base =
                    b.as_term(&xs).ok_or_else(|| PrError::NotAxiomatizable(fname.clone()))?;
                let ax0 = close(&xs, Formula::eq(SigTerm::App(fname.clone(), at0), base));
                let mut aty = xs.clone();
                aty.push(y.clone());
                let rec = SigTerm::App(fname.clone(), aty);
                let mut sargs = xs.clone();
                sargs.push(y.clone());
                sargs.push(rec);
                let step =
                    s.as_term(&sargs).ok_or_else(|| PrError::NotAxiomatizable(fname.clone()))?;
                let mut atsy = xs.clone();
                atsy.push(SigTerm::succ(y.clone()));
                let mut vars = xs.clone();
                vars.push(y);
                let ax1 = close(&vars, Formula::eq(SigTerm::App(fname.clone(), atsy), step));
                Ok(vec![ax0, ax1])
            }
            _ => {
                let xs: Vec<SigTerm> =
                    (1..=arity).map(|i| SigTerm::Var(name(&alloc::format!("x{}", i)))).collect();
                let body =
                    d.as_term(&xs).ok_or_else(|| PrError::NotAxiomatizable(fname.clone()))?;
                Ok(vec![close(&xs, Formula::eq(SigTerm::App(fname, xs.clone()), body))])
            }
        }
    }
}

fn small(v: &BigUint) -> bool {
    v.is_zero()
}

fn monus(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        BigUint::zero()
    }
}

fn bit(b: bool) -> BigUint {
    if b {
        BigUint::one()
    } else {
        BigUint::zero()
    }
}

/// The default roster: `+`, `*`, `pred`, `monus`, `max`, `min`, `sg`, `nsg`,
/// `select`, `cond`, `chi_eq`, `chi_lt`.
///
/// `cond(c, b1, b2)` is `b1` when `c = 0`; characteristic functions return 0
/// for true.
pub fn default_roster() -> PrRegistry {
    use PrDerivation as D;
    let mut r = PrRegistry::new();
    let p = PrDerivation::proj;
    let zero = |n| Arc::new(D::Zero(n));
    let succ = Arc::new(D::Succ);

    let plus = PrDerivation::primrec(p(1, 1), PrDerivation::comp(succ.clone(), vec![p(3, 3)]));
    r.register_with_jet("+", plus, |a| &a[0] + &a[1]).unwrap();

    let times = PrDerivation::primrec(
        zero(1),
        PrDerivation::comp(r.reference("+").unwrap(), vec![p(3, 3), p(1, 3)]),
    );
    r.register_with_jet("*", times, |a| &a[0] * &a[1]).unwrap();

    let pred = PrDerivation::primrec(zero(0), p(1, 2));
    r.register_with_jet("pred", pred, |a| monus(&a[0], &BigUint::one())).unwrap();

    let mon = PrDerivation::primrec(
        p(1, 1),
        PrDerivation::comp(r.reference("pred").unwrap(), vec![p(3, 3)]),
    );
    r.register_with_jet("monus", mon, |a| monus(&a[0], &a[1])).unwrap();

    let max = PrDerivation::comp(
        r.reference("+").unwrap(),
        vec![p(1, 2), PrDerivation::comp(r.reference("monus").unwrap(), vec![p(2, 2), p(1, 2)])],
    );
    r.register_with_jet("max", max, |a| a[0].clone().max(a[1].clone())).unwrap();

    let min = PrDerivation::comp(
        r.reference("monus").unwrap(),
        vec![p(1, 2), PrDerivation::comp(r.reference("monus").unwrap(), vec![p(1, 2), p(2, 2)])],
    );
    r.register_with_jet("min", min, |a| a[0].clone().min(a[1].clone())).unwrap();

    let sg = PrDerivation::primrec(zero(0), PrDerivation::comp(succ.clone(), vec![zero(2)]));
    r.register_with_jet("sg", sg, |a| bit(!small(&a[0]))).unwrap();

    let nsg = PrDerivation::primrec(PrDerivation::comp(succ, vec![zero(0)]), zero(2));
    r.register_with_jet("nsg", nsg, |a| bit(small(&a[0]))).unwrap();

    let select = PrDerivation::primrec(p(1, 2), p(2, 4));
    r.register_with_jet("select", select, |a| if small(&a[2]) { a[0].clone() } else { a[1].clone() })
        .unwrap();

    let cond = PrDerivation::comp(r.reference("select").unwrap(), vec![p(2, 3), p(3, 3), p(1, 3)]);
    r.register_with_jet("cond", cond, |a| if small(&a[0]) { a[1].clone() } else { a[2].clone() })
        .unwrap();

    let monus_ref = r.reference("monus").unwrap();
    let m = |x, y| PrDerivation::comp(monus_ref.clone(), vec![p(x, 2), p(y, 2)]);
    let chi_eq = PrDerivation::comp(
        r.reference("sg").unwrap(),
        vec![PrDerivation::comp(r.reference("+").unwrap(), vec![m(1, 2), m(2, 1)])],
    );
    r.register_with_jet("chi_eq", chi_eq, |a| bit(a[0] != a[1])).unwrap();

    let chi_lt = PrDerivation::comp(r.reference("nsg").unwrap(), vec![m(2, 1)]);
    r.register_with_jet("chi_lt", chi_lt, |a| bit(a[0] >= a[1])).unwrap();
    r
}

/// Value of a small natural, for indexing.
pub fn to_u64(v: &BigUint) -> Option<u64> {
    v.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn interp(r: &PrRegistry, s: &str, args: &[u64]) -> u64 {
        let a: Vec<BigUint> = args.iter().map(|&v| n(v)).collect();
        r.get(s).unwrap().eval(&a).unwrap().to_u64().unwrap()
    }

    #[test]
    fn roster_values() {
        let r = default_roster();
        assert_eq!(interp(&r, "+", &[2, 3]), 5);
        assert_eq!(interp(&r, "monus", &[1, 2]), 0);
        assert_eq!(interp(&r, "pred", &[7]), 6);
        assert_eq!(interp(&r, "max", &[3, 5]), 5);
        assert_eq!(interp(&r, "cond", &[0, 11, 22]), 11);
        assert_eq!(interp(&r, "cond", &[4, 11, 22]), 22);
    }

    #[test]
    fn predecessor_by_unary_recursion() {
        // pred(y) is the x with S x = y, found by counting up
        let r = default_roster();
        for y in 1..40u64 {
            let mut x = 0;
            while x + 1 != y {
                x += 1;
            }
            assert_eq!(interp(&r, "pred", &[y]), x);
        }
    }

    #[test]
    fn plus_text_form() {
        let r = default_roster();
        assert_eq!(r.get("+").unwrap().to_string(), "(primrec (proj 1 1) (comp succ (proj 3 3)))");
    }

    #[test]
    fn arity_errors() {
        let r = default_roster();
        assert!(r.eval("+", &[n(1)]).is_err());
        let bad = PrDerivation::primrec(PrDerivation::proj(1, 1), PrDerivation::proj(1, 2));
        assert!(bad.validate().is_err());
        assert!(PrDerivation::Proj(0, 2).validate().is_err());
    }

    #[test]
    fn uses_arg_analysis() {
        let r = default_roster();
        let pred = r.get("pred").unwrap();
        if let PrDerivation::PrimRec(_, s) = &**pred {
            assert!(!s.uses_arg(1));
            assert!(s.uses_arg(0));
        } else {
            panic!()
        }
    }

    #[test]
    fn defining_axioms_are_universal_sentences() {
        let r = default_roster();
        for (n, _) in r.iter() {
            for ax in r.defining_axioms(n).unwrap() {
                assert!(ax.is_closed(), "{}", ax);
                assert!(ax.is_universal(), "{}", ax);
            }
        }
        let ax = r.defining_axioms("+").unwrap();
        assert_eq!(ax[0].to_string(), "(forall x1 (= (+ x1 0) x1))");
        assert_eq!(ax[1].to_string(), "(forall x1 (forall y (= (+ x1 (S y)) (S (+ x1 y)))))");
    }
}
