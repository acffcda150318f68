//! Randomized property suites over the metastability signature, with
//! independent native oracles. Shared by the acceptance harness and the
//! integration tests.

use std::sync::Arc;

use herbrand_core::example::default_structure;
use herbrand_core::interp::{check_witness, extract_witnesses};
use herbrand_core::omega::{
    argmax_formula, derived_case_term, embed_formula, embed_symbol, embed_term, numeral, recursor, simultaneous_recursor,
    Kind, Seq, Term, Type, Var,
};
use herbrand_core::proof::{check_proof, metastability_proof, metastability_signature};
use herbrand_core::rewrite::{check_normal_structure, Budget, Engine};
use herbrand_core::semantics::{eval_direct, eval_normal, eval_omega, eval_qf, eval_sig_term, Env, Evaluator, NatEnv, Structure};
use herbrand_core::syntax::{Formula, SigTerm, Signature};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Result of one suite.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    fn new(name: &str) -> Outcome {
        Outcome { name: name.into(), cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// The structure every suite runs in: `k = 2`, `g(n) = n+1`, `a_n = 1/(n+1)`.
pub fn suite_structure() -> (Signature, Structure) {
    (metastability_signature(), default_structure(2).expect("default structure"))
}

// ---------------------------------------------------------------------------
// native oracles

/// `P(v,w,l)` iff `1/(v+1) - 1/(w+1) <= l/3`, decided over the integers.
pub fn oracle_p(v: u64, w: u64, l: u64) -> bool {
    let (v, w, l) = (v as i128, w as i128, l as i128);
    3 * (w - v) <= l * (v + 1) * (w + 1)
}

pub type Valuation = Vec<(String, u64)>;

fn lookup(e: &Valuation, x: &str) -> Option<u64> {
    e.iter().rev().find(|(n, _)| n == x).map(|(_, v)| *v)
}

/// Term value over `0, S, g, k, +, *, pred, monus, max` and variables.
pub fn oracle_term(t: &SigTerm, e: &Valuation) -> Option<u64> {
    match t {
        SigTerm::Var(x) => lookup(e, x),
        SigTerm::App(f, args) => {
            let vs = args.iter().map(|a| oracle_term(a, e)).collect::<Option<Vec<_>>>()?;
            Some(match (&**f, vs.as_slice()) {
                ("0", []) => 0,
                ("k", []) => 2,
                ("S", [a]) => a + 1,
                ("g", [a]) => a + 1,
                ("pred", [a]) => a.saturating_sub(1),
                ("+", [a, b]) => a.checked_add(*b)?,
                ("*", [a, b]) => a.checked_mul(*b)?,
                ("monus", [a, b]) => a.saturating_sub(*b),
                ("max", [a, b]) => *a.max(b),
                _ => return None,
            })
        }
    }
}

/// Truth of a formula whose quantifiers are all bounded.
pub fn oracle_formula(phi: &Formula, e: &Valuation) -> Option<bool> {
    if let Some((x, t, body)) = phi.as_forall_le() {
        let n = oracle_term(t, e)?;
        let mut all = true;
        for v in 0..=n {
            let mut e2 = e.clone();
            e2.push((x.to_string(), v));
            all &= oracle_formula(body, &e2)?;
        }
        return Some(all);
    }
    Some(match phi {
        Formula::Atom(r, args) => {
            let vs = args.iter().map(|a| oracle_term(a, e)).collect::<Option<Vec<_>>>()?;
            match (&**r, vs.as_slice()) {
                ("<", [a, b]) => a < b,
                ("P", [v, w, l]) => oracle_p(*v, *w, *l),
                _ => return None,
            }
        }
        Formula::Eq(a, b) => oracle_term(a, e)? == oracle_term(b, e)?,
        Formula::Not(a) => !oracle_formula(a, e)?,
        Formula::Or(a, b) => oracle_formula(a, e)? || oracle_formula(b, e)?,
        Formula::Forall(..) => return None,
    })
}

// ---------------------------------------------------------------------------
// random σ-terms and formulas

/// Random σ-terms and quantifier-free or boundedly quantified formulas.
pub struct SigGen {
    pub rng: ChaCha8Rng,
    /// Allow the extra symbols `g`, `k` and `P`.
    pub extra: bool,
    /// Largest admissible oracle value of any generated term.
    pub max_value: u64,
}

impl SigGen {
    pub fn new(seed: u64, extra: bool) -> SigGen {
        SigGen { rng: ChaCha8Rng::seed_from_u64(seed), extra, max_value: 60 }
    }

    fn term_raw(&mut self, depth: u32, scope: &[String]) -> SigTerm {
        let leaf = depth == 0 || self.rng.gen_bool(0.3);
        if leaf {
            return match self.rng.gen_range(0..4) {
                0 | 1 if !scope.is_empty() => SigTerm::var(scope.choose(&mut self.rng).expect("non-empty")),
                2 if self.extra => SigTerm::constant("k"),
                _ => SigTerm::numeral(self.rng.gen_range(0..=3)),
            };
        }
        let unary = ["S", "g", "pred"];
        let binary = ["+", "*", "monus", "max"];
        if self.rng.gen_bool(0.4) {
            let f = *unary.choose(&mut self.rng).expect("non-empty");
            let f = if f == "g" && !self.extra { "S" } else { f };
            SigTerm::app(f, vec![self.term_raw(depth - 1, scope)])
        } else {
            let f = *binary.choose(&mut self.rng).expect("non-empty");
            SigTerm::app(f, vec![self.term_raw(depth - 1, scope), self.term_raw(depth - 1, scope)])
        }
    }

    fn small(&self, t: &SigTerm, scope: &[String]) -> bool {
        fn walk(g: &SigGen, t: &SigTerm, e: &Valuation) -> bool {
            let ok = oracle_term(t, e).is_some_and(|v| v <= g.max_value);
            match t {
                SigTerm::App(_, args) => ok && args.iter().all(|a| walk(g, a, e)),
                SigTerm::Var(_) => ok,
            }
        }
        // variables range over 0..=20 in the suites
        let e: Valuation = scope.iter().map(|x| (x.clone(), 20)).collect();
        walk(self, t, &e)
    }

    /// A term whose subterm values stay below `max_value` (variables at 20).
    pub fn term(&mut self, depth: u32, scope: &[String]) -> SigTerm {
        loop {
            let t = self.term_raw(depth, scope);
            if self.small(&t, scope) {
                return t;
            }
        }
    }

    fn atom(&mut self, scope: &[String]) -> Formula {
        let d = 2;
        match self.rng.gen_range(0..5) {
            0 | 1 if self.extra => {
                let args = (0..3).map(|_| self.term(1, scope)).collect();
                Formula::atom("P", args)
            }
            0 | 2 => Formula::lt(self.term(d, scope), self.term(d, scope)),
            1 | 3 => Formula::eq(self.term(d, scope), self.term(d, scope)),
            _ => Formula::le(self.term(d, scope), self.term(d, scope)),
        }
    }

    /// A formula over `scope`; `bounded` allows `∀x≤t` and `∃x≤t` with small bounds.
    pub fn formula(&mut self, depth: u32, scope: &[String], bounded: bool) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.atom(scope);
        }
        match self.rng.gen_range(0..if bounded { 7 } else { 5 }) {
            0 => Formula::not(self.formula(depth - 1, scope, bounded)),
            1 => Formula::or(self.formula(depth - 1, scope, bounded), self.formula(depth - 1, scope, bounded)),
            2 => Formula::and(self.formula(depth - 1, scope, bounded), self.formula(depth - 1, scope, bounded)),
            3 => Formula::implies(self.formula(depth - 1, scope, bounded), self.formula(depth - 1, scope, bounded)),
            4 => Formula::iff(self.formula(depth - 1, scope, bounded), self.formula(depth - 1, scope, bounded)),
            q => {
                let x = format!("q{}", scope.len());
                let bound = SigTerm::numeral(self.rng.gen_range(0..=3));
                let mut inner = scope.to_vec();
                inner.push(x.clone());
                let body = self.formula(depth - 1, &inner, bounded);
                if q == 5 {
                    Formula::forall_le(&x, bound, body)
                } else {
                    Formula::exists_le(&x, bound, body)
                }
            }
        }
    }
}

fn mentions_p(phi: &Formula) -> bool {
    let mut fs = Default::default();
    let mut rs = std::collections::BTreeSet::new();
    phi.symbols(&mut fs, &mut rs);
    rs.iter().any(|r| &**r == "P")
}

fn has_case_constant(t: &Term) -> bool {
    match t.kind() {
        Kind::Case(_) => true,
        Kind::Lam(_, b) => has_case_constant(b),
        Kind::App(f, a) => has_case_constant(f) || has_case_constant(a),
        _ => false,
    }
}

/// Evaluates a closed type-0 term directly and through normalization; both must equal `want`.
fn agrees(m: &Structure, t: &Term, want: u64) -> Result<(), String> {
    let d = eval_direct(m, t).map_err(|e| format!("direct: {}", e))?;
    let o = eval_omega(m, t, Budget::default()).map_err(|e| format!("normalized: {}", e))?;
    if d == big(want) && o == big(want) {
        Ok(())
    } else {
        Err(format!("want {}, direct {}, normalized {}", want, d, o))
    }
}

// ---------------------------------------------------------------------------
// derived-term semantics

fn nat_lams(names: &[&str], body: impl FnOnce(&[Term]) -> Term) -> Term {
    let vs: Vec<Var> = names.iter().map(|n| Var::nat(n)).collect();
    let ts: Vec<Term> = vs.iter().cloned().map(Term::var).collect();
    Term::lams(&vs, body(&ts))
}

fn app(f: Term, args: &[Term]) -> Term {
    Term::apps(f, args).expect("well typed")
}

fn g(t: Term) -> Term {
    app(Term::constant("g", 1), &[t])
}

type Step2 = (&'static str, fn(u64, u64) -> u64);

const RECURSOR_STEPS: [Step2; 5] = [
    ("S w", |_, w| w + 1),
    ("g w", |_, w| w + 1),
    ("v", |v, _| v),
    ("+ v w", |v, w| v + w),
    ("pred w", |_, w| w.saturating_sub(1)),
];

fn recursor_step(sig: &Signature, i: usize) -> Term {
    let sym = |s: &str| embed_symbol(sig, s).expect("roster symbol");
    nat_lams(&["v", "w"], |x| match i {
        0 => Term::succ(x[1].clone()),
        1 => g(x[1].clone()),
        2 => x[0].clone(),
        3 => app(sym("+"), &[x[0].clone(), x[1].clone()]),
        _ => app(sym("pred"), &[x[1].clone()]),
    })
}

/// `R_{a,b} n` against `t_0 = a`, `t_{n+1} = b n t_n`.
pub fn recursor_suite(seed: u64, cases: usize) -> Outcome {
    let (sig, m) = suite_structure();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Outcome::new("recursor");
    for _ in 0..cases {
        let a = rng.gen_range(0..=20u64);
        let i = rng.gen_range(0..RECURSOR_STEPS.len());
        let n = rng.gen_range(0..=20u64);
        let want = (0..n).fold(a, |t, v| (RECURSOR_STEPS[i].1)(v, t));
        let r = recursor(numeral(a), recursor_step(&sig, i)).expect("typed");
        let res = agrees(&m, &app(r, &[numeral(n)]), want);
        out.check(res.is_ok(), || format!("a={} step={} n={}: {:?}", a, RECURSOR_STEPS[i].0, n, res));
    }
    out
}

type Step3 = (&'static str, fn(u64, u64, u64) -> u64);

const SIM_STEPS: [Step3; 6] = [
    ("S w0", |_, a, _| a + 1),
    ("S w1", |_, _, b| b + 1),
    ("w0", |_, a, _| a),
    ("w1", |_, _, b| b),
    ("v", |v, _, _| v),
    ("g w0", |_, a, _| a + 1),
];

fn sim_step(i: usize) -> Term {
    nat_lams(&["v", "w0", "w1"], |x| match i {
        0 => Term::succ(x[1].clone()),
        1 => Term::succ(x[2].clone()),
        2 => x[1].clone(),
        3 => x[2].clone(),
        4 => x[0].clone(),
        _ => g(x[1].clone()),
    })
}

/// Components of a two-component simultaneous recursor against the mutual recursion.
pub fn simultaneous_suite(seed: u64, cases: usize) -> Outcome {
    let (_, m) = suite_structure();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Outcome::new("simultaneous recursor");
    for _ in 0..cases {
        let bases = [rng.gen_range(0..=20u64), rng.gen_range(0..=20u64)];
        let steps = [rng.gen_range(0..SIM_STEPS.len()), rng.gen_range(0..SIM_STEPS.len())];
        let n = rng.gen_range(0..=20u64);
        let j = rng.gen_range(0..2usize);
        let mut cur = bases;
        for v in 0..n {
            cur = [(SIM_STEPS[steps[0]].1)(v, cur[0], cur[1]), (SIM_STEPS[steps[1]].1)(v, cur[0], cur[1])];
        }
        let rs = simultaneous_recursor(
            vec![numeral(bases[0]), numeral(bases[1])],
            vec![sim_step(steps[0]), sim_step(steps[1])],
        )
        .expect("typed");
        let res = agrees(&m, &app(rs[j].clone(), &[numeral(n)]), cur[j]);
        out.check(res.is_ok(), || {
            format!("bases={:?} steps=({}, {}) n={} component {}: {:?}", bases, SIM_STEPS[steps[0]].0, SIM_STEPS[steps[1]].0, n, j, res)
        });
    }
    out
}

fn random_args(rng: &mut ChaCha8Rng, names: &[String]) -> Valuation {
    names.iter().map(|x| (x.clone(), rng.gen_range(0..=20u64))).collect()
}

fn scope3() -> Vec<String> {
    ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
}

/// `c_φ x⃗ b1 b2` is `b1` when `φ(x⃗)` holds and `b2` otherwise. With `constant`
/// the formulas mention `P` and the term's head is a case constant; otherwise
/// they are arithmetic and the term is built from roster conditionals.
pub fn case_suite(seed: u64, cases: usize, constant: bool) -> Outcome {
    let (sig, m) = suite_structure();
    let mut gen = SigGen::new(seed, constant);
    let mut out = Outcome::new(if constant { "case constant" } else { "derived case term" });
    while out.cases < cases {
        let phi = gen.formula(2, &scope3(), false);
        if phi.free_vars().is_empty() || mentions_p(&phi) != constant {
            continue;
        }
        let xs: Vec<String> = phi.free_vars().iter().map(|x| x.to_string()).collect();
        let vals = random_args(&mut gen.rng, &xs);
        let (b1, b2) = (gen.rng.gen_range(0..=20u64), gen.rng.gen_range(0..=20u64));
        let Some(truth) = oracle_formula(&phi, &vals) else { continue };
        let c = match derived_case_term(&sig, &phi) {
            Ok(c) => c,
            Err(e) => {
                out.check(false, || format!("{}: {}", phi, e));
                continue;
            }
        };
        if has_case_constant(&c) != constant {
            out.check(false, || format!("{}: unexpected head shape", phi));
            continue;
        }
        let mut args: Vec<Term> = vals.iter().map(|(_, v)| numeral(*v)).collect();
        args.push(numeral(b1));
        args.push(numeral(b2));
        let want = if truth { b1 } else { b2 };
        let res = agrees(&m, &app(c, &args), want);
        out.check(res.is_ok(), || format!("{} at {:?}: {:?}", phi, vals, res));
    }
    out
}

/// `a^i_φ z⃗ n` is the largest `p < n` with `φ[z_i := p]`, or 0.
pub fn argmax_suite(seed: u64, cases: usize) -> Outcome {
    let (sig, m) = suite_structure();
    let mut gen = SigGen::new(seed, true);
    let mut out = Outcome::new("argmax");
    while out.cases < cases {
        let phi = gen.formula(2, &scope3(), false);
        let xs: Vec<String> = phi.free_vars().iter().map(|x| x.to_string()).collect();
        if xs.is_empty() {
            continue;
        }
        let i = gen.rng.gen_range(0..xs.len());
        let vals = random_args(&mut gen.rng, &xs);
        let n = gen.rng.gen_range(0..=20u64);
        let mut want = Some(0);
        for p in 0..n {
            let mut e = vals.clone();
            e[i].1 = p;
            match oracle_formula(&phi, &e) {
                Some(true) => want = Some(p),
                Some(false) => {}
                None => want = None,
            }
        }
        let Some(want) = want else { continue };
        let a = match argmax_formula(&sig, &phi, i) {
            Ok(a) => a,
            Err(e) => {
                out.check(false, || format!("{}: {}", phi, e));
                continue;
            }
        };
        let mut args: Vec<Term> = vals.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, (_, v))| numeral(*v)).collect();
        args.push(numeral(n));
        let res = agrees(&m, &app(a, &args), want);
        out.check(res.is_ok(), || format!("{} over {} at {:?}, n={}: {:?}", phi, xs[i], vals, n, res));
    }
    out
}

/// All derived-term suites, `cases` each.
pub fn semantics_suites(seed: u64, cases: usize) -> Vec<Outcome> {
    vec![
        recursor_suite(seed, cases),
        simultaneous_suite(seed + 1, cases),
        case_suite(seed + 2, cases, true),
        case_suite(seed + 3, cases, false),
        argmax_suite(seed + 4, cases),
    ]
}

// ---------------------------------------------------------------------------
// random closed ω-terms

/// Random well-typed ω-terms over types built from `0`, with zero and
/// non-zero sequences drawn from a fixed family of branch generators.
pub struct OmegaGen {
    pub rng: ChaCha8Rng,
    counter: usize,
}

fn t1() -> Type {
    Type::nat_fn(1)
}

impl OmegaGen {
    pub fn new(seed: u64) -> OmegaGen {
        OmegaGen { rng: ChaCha8Rng::seed_from_u64(seed), counter: 0 }
    }

    fn fresh(&mut self, ty: Type) -> Var {
        self.counter += 1;
        Var::new(&format!("x{}", self.counter), ty)
    }

    fn var_of(&mut self, ty: &Type, scope: &[Var]) -> Option<Term> {
        let vs: Vec<&Var> = scope.iter().filter(|v| &v.ty == ty).collect();
        vs.choose(&mut self.rng).map(|v| Term::var((*v).clone()))
    }

    /// A zero or non-zero sequence of type `0 -> elem` from the family.
    fn seq(&mut self, elem: &Type, fuel: u32, scope: &[Var]) -> Option<Term> {
        let pick = self.rng.gen_range(0..3);
        if elem.is_zero() {
            return Some(match pick {
                0 => Term::seq(Seq::table("nat", Type::Zero, Vec::new(), Arc::new(numeral))),
                1 => Term::seq(Seq::table("g-iter", Type::Zero, Vec::new(), Arc::new(|n| (0..n).fold(Term::zero(), |t, _| g(t))))),
                _ => {
                    let a = self.term(&Type::Zero, fuel / 2, scope);
                    let b = self.term(&Type::tuple_arrow(&[Type::Zero, Type::Zero], &Type::Zero), fuel / 2, scope);
                    recursor(a, b).expect("typed")
                }
            });
        }
        if *elem == t1() {
            return Some(match pick {
                0 => Term::seq(Seq::table(
                    "shift",
                    t1(),
                    Vec::new(),
                    Arc::new(|n| {
                        let x = Var::nat("s");
                        Term::lam(x.clone(), (0..n).fold(Term::var(x), |t, _| Term::succ(t)))
                    }),
                )),
                1 => Term::seq(Seq::table("const", t1(), Vec::new(), Arc::new(|n| Term::lam(Var::nat("s"), numeral(n))))),
                _ => {
                    let a = self.term(&t1(), fuel / 2, scope);
                    let b = self.term(&Type::tuple_arrow(&[Type::Zero, t1()], &t1()), fuel / 2, scope);
                    recursor(a, b).expect("typed")
                }
            });
        }
        None
    }

    /// A term of type `ty` with free variables from `scope`.
    pub fn term(&mut self, ty: &Type, fuel: u32, scope: &[Var]) -> Term {
        if let Some((a, b)) = ty.split() {
            let (a, b) = (a.clone(), b.clone());
            let choice = if fuel == 0 { 0 } else { [0, 1, 2, 2].choose(&mut self.rng).copied().expect("non-empty") };
            if choice == 1 {
                if let Some(v) = self.var_of(ty, scope) {
                    return v;
                }
            }
            if choice == 2 && a.is_zero() {
                if let Some(s) = self.seq(&b, fuel - 1, scope) {
                    return s;
                }
            }
            let x = self.fresh(a);
            let mut inner = scope.to_vec();
            inner.push(x.clone());
            let body = self.term(&b, fuel.saturating_sub(1), &inner);
            return Term::lam(x, body);
        }
        let leaf = fuel == 0 || self.rng.gen_bool(0.2);
        if leaf {
            if self.rng.gen_bool(0.75) {
                if let Some(v) = self.var_of(ty, scope) {
                    return v;
                }
            }
            return if self.rng.gen_bool(0.2) { Term::constant("k", 0) } else { numeral(self.rng.gen_range(0..=2)) };
        }
        match self.rng.gen_range(0..5) {
            0 => Term::succ(self.term(&Type::Zero, fuel - 1, scope)),
            1 => g(self.term(&Type::Zero, fuel - 1, scope)),
            _ => {
                let arg_ty = [Type::Zero, Type::Zero, t1()].choose(&mut self.rng).expect("non-empty").clone();
                let f_ty = Type::arrow(arg_ty.clone(), Type::Zero);
                let seq_head = arg_ty.is_zero() && fuel > 1 && self.rng.gen_bool(0.5);
                let f = match seq_head {
                    true => self.seq(&Type::Zero, fuel - 1, scope).expect("zero sequence"),
                    false => self.term(&f_ty, fuel / 2, scope),
                };
                let a = self.term(&arg_ty, fuel / 2, scope);
                Term::app(f, a).expect("typed")
            }
        }
    }

    /// A closed type-0 term of size between 6 and `max_size`.
    pub fn closed(&mut self, max_size: usize) -> Term {
        loop {
            let fuel = self.rng.gen_range(3..=10);
            let t = self.term(&Type::Zero, fuel, &[]);
            // skip bare numerals and other trivial terms
            if (6..=max_size).contains(&t.size()) && t.is_closed() {
                return t;
            }
        }
    }
}

/// Normalizes random closed type-0 terms; checks the spine lemma on every
/// demanded spine and that evaluation is unchanged.
pub fn normal_form_suite(seed: u64, cases: usize, max_size: usize) -> Outcome {
    let (_, m) = suite_structure();
    let mut gen = OmegaGen::new(seed);
    let mut out = Outcome::new("normal forms");
    for _ in 0..cases {
        let t = gen.closed(max_size);
        let res = (|| -> Result<(), String> {
            let before = Evaluator::with_fuel(&m, 10_000_000).eval_nat(&t, &Env::new()).map_err(|e| format!("direct: {}", e))?;
            let mut engine = Engine::new(Budget::default());
            let nf = engine.normalize(&t).map_err(|e| format!("normalize: {}", e))?;
            let via_nf = eval_normal(&m, &mut engine, &nf).map_err(|e| format!("normal evaluation: {}", e))?;
            let direct_nf = eval_direct(&m, &nf).map_err(|e| format!("direct on normal form: {}", e))?;
            check_normal_structure(&nf).map_err(|e| format!("spine: {}", e))?;
            if before != via_nf || before != direct_nf {
                return Err(format!("before {}, after {} / {}", before, via_nf, direct_nf));
            }
            Ok(())
        })();
        out.check(res.is_ok(), || format!("{}: {:?}", t.render(3), res));
    }
    out
}

// ---------------------------------------------------------------------------
// coherence through ι

/// `eval_sig_term` and `eval_qf` against ω-evaluation of the embedded
/// term or formula, and both against the native oracle.
pub fn coherence_suites(seed: u64, cases: usize) -> Vec<Outcome> {
    let (sig, m) = suite_structure();
    let mut gen = SigGen::new(seed, true);
    let mut terms = Outcome::new("term coherence");
    while terms.cases < cases {
        let t = gen.term(3, &[]);
        let res = (|| -> Result<(), String> {
            let want = oracle_term(&t, &Vec::new()).ok_or("oracle")?;
            let v = eval_sig_term(&m, &t, &NatEnv::new()).map_err(|e| e.to_string())?;
            if v != big(want) {
                return Err(format!("evalSigTerm {} vs oracle {}", v, want));
            }
            let it = embed_term(&sig, &t).map_err(|e| e.to_string())?;
            agrees(&m, &it, want)
        })();
        terms.check(res.is_ok(), || format!("{}: {:?}", t, res));
    }
    let mut formulas = Outcome::new("formula coherence");
    while formulas.cases < cases {
        let phi = gen.formula(3, &[], true);
        let res = (|| -> Result<(), String> {
            let want = oracle_formula(&phi, &Vec::new()).ok_or("oracle")?;
            let v = eval_qf(&m, &phi, &NatEnv::new()).map_err(|e| e.to_string())?;
            let b = embed_formula(&sig, &phi).map_err(|e| e.to_string())?;
            let w = Evaluator::new(&m).eval_oformula(&b, &Env::new()).map_err(|e| e.to_string())?;
            if v == want && w == want {
                Ok(())
            } else {
                Err(format!("evalQF {}, ω {}, oracle {}", v, w, want))
            }
        })();
        formulas.check(res.is_ok(), || format!("{}: {:?}", phi, res));
    }
    vec![terms, formulas]
}

// ---------------------------------------------------------------------------
// soundness of extracted witnesses

/// Every step of the bundled proof: the witnesses make the interpreted
/// formula true under all sampled valuations, in the structure with the given `k`.
pub fn soundness_suite(k: u64, step_by: usize) -> Outcome {
    let m = default_structure(k).expect("default structure");
    let p = check_proof(metastability_proof().expect("corpus script")).expect("corpus proof checks");
    let wp = extract_witnesses(&p).expect("extraction");
    let mut out = Outcome::new("step soundness");
    for (i, w) in wp.witnesses.iter().enumerate().step_by(step_by.max(1)) {
        let r = check_witness(&m, w, i as u64, 1_000_000);
        out.check(r.passed() && r.samples > 0, || {
            format!("step {} ({}): {} failures, {} errors {:?}", i, p.proof().steps[i].rule, r.failures.len(), r.errors.len(), r.errors.first())
        });
    }
    out
}
