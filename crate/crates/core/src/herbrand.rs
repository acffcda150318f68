//! The finite term sets `T^M_s` of normal closed ω-terms, Herbrand
//! disjunctions and the end-to-end pipeline from a checked proof.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::interp::{extract_witnesses, extract_existential_witness, InterpError};
use crate::omega::Term;
use crate::pr::to_u64;
use crate::proof::CheckedProof;
use crate::rewrite::{analyze_spine, Budget, Engine, RewriteError, SpineHead};
use crate::semantics::{check_gamma, eval_normal, eval_qf, eval_sig_term, GammaReport, NatEnv, SemError, Structure};
use crate::syntax::{Formula, Name, SigTerm};

/// Default cap on the size of any intermediate term set.
pub const DEFAULT_CAP: usize = 10_000;

/// How a member of `T^M_s` was produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Function-symbol clause with the provenance of each argument.
    Function(Name, Vec<Arc<Provenance>>),
    /// Case-constant clause; `then` is true for the first branch argument.
    Case { then: bool, inner: Arc<Provenance> },
    /// Zero-sequence clause: branch `index` of sequence `seq`, demanded by the value of `arg`.
    Branch { seq: u64, index: u64, arg: SigTerm, inner: Arc<Provenance> },
}

impl Provenance {
    /// Sequence branches demanded along this derivation, outermost first.
    pub fn demanded(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<(u64, u64)>) {
        match self {
            Provenance::Function(_, args) => args.iter().for_each(|a| a.collect(out)),
            Provenance::Case { inner, .. } => inner.collect(out),
            Provenance::Branch { seq, index, inner, .. } => {
                out.push((*seq, *index));
                inner.collect(out);
            }
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Function(c, args) if args.is_empty() => write!(f, "{}", c),
            Provenance::Function(c, args) => {
                write!(f, "({}", c)?;
                for a in args {
                    write!(f, " {}", a)?;
                }
                f.write_str(")")
            }
            Provenance::Case { then, inner } => write!(f, "(case {} {})", if *then { "then" } else { "else" }, inner),
            Provenance::Branch { seq, index, arg, inner } => write!(f, "(seq#{} {} <- {} {})", seq, index, arg, inner),
        }
    }
}

/// A member of a Herbrand set.
#[derive(Clone, Debug)]
pub struct Member {
    pub term: SigTerm,
    pub provenance: Arc<Provenance>,
}

/// `T^M_s`: closed σ-terms, structurally deduplicated and sorted.
#[derive(Clone, Debug, Default)]
pub struct HerbrandSet {
    pub members: Vec<Member>,
    /// Indices demanded at each zero-sequence node, keyed by sequence id.
    pub demanded: BTreeMap<u64, BTreeSet<u64>>,
}

impl HerbrandSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn terms(&self) -> Vec<SigTerm> {
        self.members.iter().map(|m| m.term.clone()).collect()
    }

    pub fn contains(&self, t: &SigTerm) -> bool {
        self.members.iter().any(|m| &m.term == t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HerbrandError {
    Rewrite(RewriteError),
    Semantics(SemError),
    Cap { cap: usize },
    IndexTooLarge(SigTerm),
}

impl From<RewriteError> for HerbrandError {
    fn from(e: RewriteError) -> HerbrandError {
        HerbrandError::Rewrite(e)
    }
}

impl From<SemError> for HerbrandError {
    fn from(e: SemError) -> HerbrandError {
        HerbrandError::Semantics(e)
    }
}

impl fmt::Display for HerbrandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HerbrandError::Rewrite(e) => write!(f, "{}", e),
            HerbrandError::Semantics(e) => write!(f, "{}", e),
            HerbrandError::Cap { cap } => write!(f, "term set exceeds the cap of {} terms", cap),
            HerbrandError::IndexTooLarge(t) => write!(f, "value of {} is too large to index a sequence", t),
        }
    }
}

type Set = Arc<Vec<Member>>;

struct Collector<'a, 'm> {
    m: &'m Structure,
    engine: &'a mut Engine,
    cap: usize,
    // keeps the keyed terms alive so addresses stay unique
    memo: BTreeMap<usize, (Term, Set)>,
    demanded: BTreeMap<u64, BTreeSet<u64>>,
}

impl Collector<'_, '_> {
    fn set(&mut self, s: &Term) -> Result<Set, HerbrandError> {
        if let Some((_, v)) = self.memo.get(&s.addr()) {
            return Ok(v.clone());
        }
        let (head, args) = analyze_spine(s)?;
        let out = match head {
            SpineHead::Const(c, _) => {
                let sets = args.iter().map(|a| self.set(a)).collect::<Result<Vec<_>, _>>()?;
                let mut acc: Vec<(Vec<SigTerm>, Vec<Arc<Provenance>>)> = alloc::vec![(Vec::new(), Vec::new())];
                for set in &sets {
                    if acc.len().saturating_mul(set.len()) > self.cap {
                        return Err(HerbrandError::Cap { cap: self.cap });
                    }
                    acc = acc
                        .iter()
                        .flat_map(|(ts, ps)| {
                            set.iter().map(move |mem| {
                                let mut ts = ts.clone();
                                let mut ps = ps.clone();
                                ts.push(mem.term.clone());
                                ps.push(mem.provenance.clone());
                                (ts, ps)
                            })
                        })
                        .collect();
                }
                acc.into_iter()
                    .map(|(ts, ps)| Member { term: SigTerm::App(c.clone(), ts), provenance: Arc::new(Provenance::Function(c.clone(), ps)) })
                    .collect()
            }
            SpineHead::Case(c) => {
                let k = c.vars.len();
                let mut out = Vec::new();
                for (then, a) in [(true, &args[k]), (false, &args[k + 1])] {
                    for mem in self.set(a)?.iter() {
                        out.push(Member { term: mem.term.clone(), provenance: Arc::new(Provenance::Case { then, inner: mem.provenance.clone() }) });
                    }
                }
                out
            }
            SpineHead::Seq(q) => {
                let mut out = Vec::new();
                let arg_set = self.set(&args[0])?;
                for r in arg_set.iter() {
                    let v = eval_sig_term(self.m, &r.term, &NatEnv::new())?;
                    let n = to_u64(&v).ok_or_else(|| HerbrandError::IndexTooLarge(r.term.clone()))?;
                    self.demanded.entry(q.id()).or_default().insert(n);
                    let branch = self.engine.normal_branch(&q, n)?;
                    for mem in self.set(&branch)?.iter() {
                        out.push(Member {
                            term: mem.term.clone(),
                            provenance: Arc::new(Provenance::Branch { seq: q.id(), index: n, arg: r.term.clone(), inner: mem.provenance.clone() }),
                        });
                    }
                }
                out
            }
        };
        let out = Arc::new(dedup(out));
        if out.len() > self.cap {
            return Err(HerbrandError::Cap { cap: self.cap });
        }
        self.memo.insert(s.addr(), (s.clone(), out.clone()));
        Ok(out)
    }
}

fn dedup(v: Vec<Member>) -> Vec<Member> {
    let mut seen: BTreeMap<SigTerm, Member> = BTreeMap::new();
    for m in v {
        seen.entry(m.term.clone()).or_insert(m);
    }
    seen.into_values().collect()
}

/// Computes `T^M_s` for a closed normal term `s` of type 0, demanding
/// branches through `engine`.
pub fn herbrand_set(m: &Structure, engine: &mut Engine, s: &Term, cap: usize) -> Result<HerbrandSet, HerbrandError> {
    let mut c = Collector { m, engine, cap, memo: BTreeMap::new(), demanded: BTreeMap::new() };
    let set = c.set(s)?;
    Ok(HerbrandSet { members: set.as_ref().clone(), demanded: c.demanded })
}

/// Truth of `A[x := r]` for one member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disjunct {
    pub term: SigTerm,
    pub instance: Formula,
    pub value: bool,
}

/// Evaluates `A[x := r]` for every `r` in `set`; the verdict is their disjunction.
pub fn verify_disjunction(m: &Structure, x: &str, a: &Formula, set: &HerbrandSet) -> Result<(Vec<Disjunct>, bool), SemError> {
    let mut out = Vec::new();
    for r in &set.members {
        let instance = a.substitute(x, &r.term);
        let value = eval_qf(m, &instance, &NatEnv::new())?;
        out.push(Disjunct { term: r.term.clone(), instance, value });
    }
    let verdict = out.iter().any(|d| d.value);
    Ok((out, verdict))
}

/// Pipeline settings.
#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub budget: Budget,
    pub cap: usize,
    /// Γ is sampled on all arguments up to this bound.
    pub gamma_bound: u64,
}

impl Default for PipelineOptions {
    fn default() -> PipelineOptions {
        PipelineOptions { budget: Budget::default(), cap: DEFAULT_CAP, gamma_bound: 4 }
    }
}

/// Everything the pipeline produced.
#[derive(Clone, Debug)]
pub struct HerbrandReport {
    pub goal: Formula,
    pub var: Name,
    pub matrix: Formula,
    pub witness: Term,
    pub normal: Term,
    pub set: HerbrandSet,
    pub disjuncts: Vec<Disjunct>,
    pub verdict: bool,
    pub gamma: GammaReport,
    /// Value of the normal form, and whether it equals the value of some member.
    pub value: u64,
    pub membership: bool,
    pub steps: u64,
    pub max_demand: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PipelineError {
    Goal(String),
    Extract(InterpError),
    Normalize(RewriteError),
    Herbrand(HerbrandError),
    Semantics(SemError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Goal(s) => write!(f, "goal: {}", s),
            PipelineError::Extract(e) => write!(f, "extract: {}", e),
            PipelineError::Normalize(e) => write!(f, "normalize: {}", e),
            PipelineError::Herbrand(e) => write!(f, "herbrand: {}", e),
            PipelineError::Semantics(e) => write!(f, "evaluate: {}", e),
        }
    }
}

/// Extract, normalize, collect `T^M_s` and verify the disjunction.
pub fn run_pipeline(p: &CheckedProof, m: &Structure, opts: &PipelineOptions) -> Result<HerbrandReport, PipelineError> {
    let goal = p.goal().clone();
    let (var, matrix) = match goal.as_exists() {
        Some((x, a)) if a.is_quantifier_free() && goal.is_closed() => (x.clone(), a.clone()),
        _ => return Err(PipelineError::Goal(format!("{} is not of the form ∃x A with A quantifier-free", goal))),
    };
    let gamma = check_gamma(m, &p.proof().gamma, opts.gamma_bound).map_err(PipelineError::Semantics)?;
    let wp = extract_witnesses(p).map_err(PipelineError::Extract)?;
    let witness = extract_existential_witness(&wp).map_err(PipelineError::Extract)?;
    let mut engine = Engine::new(opts.budget.clone());
    let normal = engine.normalize(&witness).map_err(PipelineError::Normalize)?;
    let set = herbrand_set(m, &mut engine, &normal, opts.cap).map_err(PipelineError::Herbrand)?;
    let (disjuncts, verdict) = verify_disjunction(m, &var, &matrix, &set).map_err(PipelineError::Semantics)?;
    let value = eval_normal(m, &mut engine, &normal).map_err(PipelineError::Semantics)?;
    let mut membership = false;
    for r in &set.members {
        if eval_sig_term(m, &r.term, &NatEnv::new()).map_err(PipelineError::Semantics)? == value {
            membership = true;
            break;
        }
    }
    let value = to_u64(&value).ok_or_else(|| PipelineError::Semantics(SemError::IndexTooLarge))?;
    Ok(HerbrandReport {
        goal,
        var,
        matrix,
        witness,
        normal,
        set,
        disjuncts,
        verdict,
        gamma,
        value,
        membership,
        steps: engine.steps(),
        max_demand: engine.max_depth(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::{numeral, Term as OTerm};
    use crate::proof::{check_proof, metastability_proof};
    use crate::semantics::tests::{metastability_sig, metastability_spec};

    fn g_iter(i: usize) -> SigTerm {
        let mut t = SigTerm::zero();
        for _ in 0..i {
            t = SigTerm::app("g", alloc::vec![t]);
        }
        t
    }

    fn expected(k: usize) -> Vec<SigTerm> {
        let mut v: Vec<SigTerm> = (0..=k.max(1)).map(g_iter).collect();
        v.sort();
        v
    }

    #[test]
    fn numeral_singleton() {
        let m = Structure::new(&metastability_sig(), &metastability_spec(2, 1)).unwrap();
        let mut e = Engine::new(Budget::default());
        let s = herbrand_set(&m, &mut e, &numeral(3), DEFAULT_CAP).unwrap();
        assert_eq!(s.terms(), alloc::vec![SigTerm::numeral(3)]);
        let z = herbrand_set(&m, &mut e, &OTerm::zero(), DEFAULT_CAP).unwrap();
        assert_eq!(z.terms(), alloc::vec![SigTerm::zero()]);
    }

    #[test]
    fn empty_set_is_false() {
        let m = Structure::new(&metastability_sig(), &metastability_spec(2, 1)).unwrap();
        let a = Formula::eq(SigTerm::var("x"), SigTerm::zero());
        let (d, v) = verify_disjunction(&m, "x", &a, &HerbrandSet::default()).unwrap();
        assert!(d.is_empty() && !v);
        let s = HerbrandSet { members: alloc::vec![Member { term: SigTerm::zero(), provenance: Arc::new(Provenance::Function(crate::syntax::name("0"), Vec::new())) }], demanded: BTreeMap::new() };
        assert!(verify_disjunction(&m, "x", &a, &s).unwrap().1);
    }

    #[test]
    fn corpus_sets() {
        let p = check_proof(metastability_proof().unwrap()).unwrap();
        for (k, g_plus) in [(2, 1), (0, 1), (1, 1), (2, 2), (3, 1), (5, 1), (8, 3)] {
            let m = Structure::new(&metastability_sig(), &metastability_spec(k, g_plus)).unwrap();
            let r = run_pipeline(&p, &m, &PipelineOptions::default()).unwrap();
            assert_eq!(r.set.terms(), expected(k as usize), "k={} g=n+{}", k, g_plus);
            assert!(r.verdict && r.membership && r.gamma.passed());
        }
    }
}
