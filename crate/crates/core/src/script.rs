//! Proof scripts: labelled steps whose justifications are primitive rules or
//! derived rules, expanded to a primitive proof by the proof builder.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::proof::{EqAxiom, Proof, ProofBuilder, Rule, Theory};
use crate::syntax::{Formula, Name, SigTerm, Signature};

pub type Label = u64;

/// Justification of a script step. Premises are labels of earlier steps.
///
/// Primitive rules whose conclusion cannot be computed from the listed
/// arguments need the step's stated formula; the optional arguments
/// (`(em φ)`, `(subst t ∀xφ)`, `(induction x φ)`, `(or-intro L ψ)`,
/// `(forall-intro L x)`) let the conclusion be computed instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptRule {
    Em(Option<Formula>),
    Subst(SigTerm, Option<Formula>),
    Equality(EqAxiom),
    Arith(Name),
    Gamma(usize),
    Induction(Option<(Name, Formula)>),
    OrIntro(Label, Option<Formula>),
    Contract(Label),
    Assoc(Label),
    Cut(Label, Label),
    ForallIntro(Label, Option<Name>),
    Commute(Label),
    /// Target is the stated formula.
    Permute(Label),
    Mp(Label, Label),
    Inst(Label, SigTerm),
    InstFront(Label, SigTerm),
    ExistsIntro(Label, Name, Formula, SigTerm),
    DnIntro(Label),
    DnElim(Label),
    Gen(Label, Name),
    Conj(Label, Label),
    AssocLeft(Label),
}

impl ScriptRule {
    pub fn premises(&self) -> Vec<Label> {
        use ScriptRule::*;
        match self {
            OrIntro(l, _) | Contract(l) | Assoc(l) | ForallIntro(l, _) | Commute(l) | Permute(l) | Inst(l, _)
            | InstFront(l, _) | ExistsIntro(l, ..) | DnIntro(l) | DnElim(l) | Gen(l, _) | AssocLeft(l) => {
                alloc::vec![*l]
            }
            Cut(a, b) | Mp(a, b) | Conj(a, b) => alloc::vec![*a, *b],
            _ => Vec::new(),
        }
    }

    pub fn is_primitive(&self) -> bool {
        use ScriptRule::*;
        matches!(
            self,
            Em(_) | Subst(..) | Equality(_) | Arith(_) | Gamma(_) | Induction(_) | OrIntro(..) | Contract(_)
                | Assoc(_) | Cut(..) | ForallIntro(..)
        )
    }
}

impl fmt::Display for ScriptRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ScriptRule::*;
        match self {
            Em(None) => f.write_str("(em)"),
            Em(Some(p)) => write!(f, "(em {})", p),
            Subst(t, None) => write!(f, "(subst {})", t),
            Subst(t, Some(p)) => write!(f, "(subst {} {})", t, p),
            Equality(a) => write!(f, "(equality {})", a),
            Arith(l) => write!(f, "(arith {})", l),
            Gamma(k) => write!(f, "(gamma {})", k),
            Induction(None) => f.write_str("(induction)"),
            Induction(Some((x, p))) => write!(f, "(induction {} {})", x, p),
            OrIntro(l, None) => write!(f, "(or-intro {})", l),
            OrIntro(l, Some(p)) => write!(f, "(or-intro {} {})", l, p),
            Contract(l) => write!(f, "(contract {})", l),
            Assoc(l) => write!(f, "(assoc {})", l),
            Cut(a, b) => write!(f, "(cut {} {})", a, b),
            ForallIntro(l, None) => write!(f, "(forall-intro {})", l),
            ForallIntro(l, Some(x)) => write!(f, "(forall-intro {} {})", l, x),
            Commute(l) => write!(f, "(commute {})", l),
            Permute(l) => write!(f, "(permute {})", l),
            Mp(a, b) => write!(f, "(mp {} {})", a, b),
            Inst(l, t) => write!(f, "(inst {} {})", l, t),
            InstFront(l, t) => write!(f, "(inst-front {} {})", l, t),
            ExistsIntro(l, x, p, t) => write!(f, "(exists-intro {} {} {} {})", l, x, p, t),
            DnIntro(l) => write!(f, "(dn-intro {})", l),
            DnElim(l) => write!(f, "(dn-elim {})", l),
            Gen(l, x) => write!(f, "(gen {} {})", l, x),
            Conj(a, b) => write!(f, "(conj {} {})", a, b),
            AssocLeft(l) => write!(f, "(assoc-left {})", l),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptStep {
    pub label: Label,
    pub rule: ScriptRule,
    pub formula: Option<Formula>,
}

#[derive(Clone, Debug)]
pub struct Script {
    pub theory: Theory,
    pub signature: Signature,
    pub gamma: Vec<Formula>,
    pub steps: Vec<ScriptStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptError {
    pub label: Label,
    pub message: String,
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.label, self.message)
    }
}

/// A primitive proof with, for each script step, its label and the index of
/// the primitive step carrying its conclusion.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub proof: Proof,
    pub labels: Vec<(Label, usize)>,
}

struct Expander {
    b: ProofBuilder,
    map: BTreeMap<Label, usize>,
}

impl Expander {
    fn new(theory: Theory, signature: Signature, gamma: Vec<Formula>) -> Expander {
        Expander { b: ProofBuilder::new(theory, signature, gamma), map: BTreeMap::new() }
    }

    fn step(&mut self, step: &ScriptStep) -> Result<usize, ScriptError> {
        let err = |message: String| ScriptError { label: step.label, message };
        if self.map.contains_key(&step.label) {
            return Err(err(format!("label {} used twice", step.label)));
        }
        let at = |l: &Label| self.map.get(l).copied().ok_or_else(|| err(format!("unknown premise {}", l)));
        let stated = step.formula.as_ref();
        let need = || stated.cloned().ok_or_else(|| err(format!("{} needs a stated formula", step.rule)));
        let b = &mut self.b;
        use ScriptRule::*;
        let r = match &step.rule {
            Em(None) => Ok(b.push(need()?, Rule::ExcludedMiddle)),
            Em(Some(p)) => Ok(b.em(p)),
            Subst(t, None) => Ok(b.push(need()?, Rule::Substitution(t.clone()))),
            Subst(t, Some(all)) => b.subst_axiom(all, t),
            Equality(a) => b.equality(a.clone()),
            Arith(l) => b.arith(l),
            Gamma(k) => b.gamma(*k),
            Induction(None) => Ok(b.push(need()?, Rule::Induction)),
            Induction(Some((x, p))) => b.induction(p, x),
            OrIntro(l, None) => Ok(b.push(need()?, Rule::OrIntro(at(l)?))),
            OrIntro(l, Some(p)) => Ok(b.or_intro(at(l)?, p)),
            Contract(l) => b.contract(at(l)?),
            Assoc(l) => b.assoc(at(l)?),
            Cut(i, j) => b.cut(at(i)?, at(j)?),
            ForallIntro(l, None) => Ok(b.push(need()?, Rule::ForallIntro(at(l)?))),
            ForallIntro(l, Some(x)) => b.forall_intro(at(l)?, x),
            Commute(l) => b.commute(at(l)?),
            Permute(l) => b.permute(at(l)?, &need()?),
            Mp(i, j) => b.mp(at(i)?, at(j)?),
            Inst(l, t) => b.instantiate(at(l)?, t),
            InstFront(l, t) => b.instantiate_front(at(l)?, t),
            ExistsIntro(l, x, p, t) => b.exists_intro(at(l)?, x, p, t),
            DnIntro(l) => b.dn_intro(at(l)?),
            DnElim(l) => b.dn_elim(at(l)?),
            Gen(l, x) => b.gen(at(l)?, x),
            Conj(i, j) => b.conj(at(i)?, at(j)?),
            AssocLeft(l) => b.assoc_left(at(l)?),
        };
        let idx = r.map_err(|e| err(e.0))?;
        if let Some(f) = stated {
            if self.b.formula(idx) != f {
                return Err(err(format!("derives {}, not the stated {}", self.b.formula(idx), f)));
            }
        }
        self.map.insert(step.label, idx);
        Ok(idx)
    }
}

/// Expands every step. Stated formulas are compared with what the rule derives.
pub fn expand(script: &Script) -> Result<Expansion, ScriptError> {
    let mut e = Expander::new(script.theory, script.signature.clone(), script.gamma.clone());
    let mut labels = Vec::new();
    for s in &script.steps {
        let idx = e.step(s)?;
        labels.push((s.label, idx));
    }
    Ok(Expansion { proof: e.b.finish(), labels })
}

impl Script {
    /// The primitive proof as a script, labels being step indices.
    pub fn from_proof(p: &Proof) -> Script {
        let steps = p
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let l = |j: &usize| *j as Label;
                let rule = match &s.rule {
                    Rule::ExcludedMiddle => ScriptRule::Em(None),
                    Rule::Substitution(t) => ScriptRule::Subst(t.clone(), None),
                    Rule::Equality(a) => ScriptRule::Equality(a.clone()),
                    Rule::Arith(n) => ScriptRule::Arith(n.clone()),
                    Rule::Induction => ScriptRule::Induction(None),
                    Rule::Gamma(k) => ScriptRule::Gamma(*k),
                    Rule::OrIntro(j) => ScriptRule::OrIntro(l(j), None),
                    Rule::Contraction(j) => ScriptRule::Contract(l(j)),
                    Rule::Assoc(j) => ScriptRule::Assoc(l(j)),
                    Rule::Cut(a, b) => ScriptRule::Cut(l(a), l(b)),
                    Rule::ForallIntro(j) => ScriptRule::ForallIntro(l(j), None),
                };
                ScriptStep { label: i as Label, rule, formula: Some(s.conclusion.clone()) }
            })
            .collect();
        Script { theory: p.theory, signature: p.signature.clone(), gamma: p.gamma.clone(), steps }
    }
}

/// Builds a script step by step, recording each derived conclusion as the
/// step's stated formula.
pub struct ScriptWriter {
    e: Expander,
    script: Script,
}

impl ScriptWriter {
    pub fn new(theory: Theory, signature: Signature, gamma: Vec<Formula>) -> ScriptWriter {
        let script = Script { theory, signature: signature.clone(), gamma: gamma.clone(), steps: Vec::new() };
        ScriptWriter { e: Expander::new(theory, signature, gamma), script }
    }

    /// Adds a step; `target` is required by `permute` and by primitive
    /// rules given without their optional arguments.
    pub fn step_to(&mut self, rule: ScriptRule, target: Option<Formula>) -> Result<Label, ScriptError> {
        let label = self.script.steps.len() as Label;
        let mut s = ScriptStep { label, rule, formula: target };
        let idx = self.e.step(&s)?;
        s.formula = Some(self.e.b.formula(idx).clone());
        self.script.steps.push(s);
        Ok(label)
    }

    pub fn step(&mut self, rule: ScriptRule) -> Result<Label, ScriptError> {
        self.step_to(rule, None)
    }

    pub fn finish(self) -> Script {
        self.script
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{check_proof, metastability_script};
    use crate::syntax::name;

    fn em_script(stated: Option<Formula>, rule: ScriptRule) -> Script {
        let mut sig = Signature::standard();
        sig.add_relation("P", 1).unwrap();
        Script {
            theory: Theory::ISigma1,
            signature: sig,
            gamma: Vec::new(),
            steps: alloc::vec![ScriptStep { label: 7, rule, formula: stated }],
        }
    }

    #[test]
    fn stated_formula_is_checked() {
        let p = Formula::atom("P", alloc::vec![SigTerm::zero()]);
        let em = Formula::or(Formula::not(p.clone()), p.clone());
        assert!(expand(&em_script(Some(em.clone()), ScriptRule::Em(None))).is_ok());
        assert!(expand(&em_script(Some(em.clone()), ScriptRule::Em(Some(p.clone())))).is_ok());
        let e = expand(&em_script(Some(p.clone()), ScriptRule::Em(Some(p.clone())))).unwrap_err();
        assert_eq!(e.label, 7);
        assert!(expand(&em_script(None, ScriptRule::Em(None))).is_err());
        assert!(expand(&em_script(Some(em), ScriptRule::Commute(3))).is_err());
    }

    #[test]
    fn labels_are_remapped() {
        let p = Formula::atom("P", alloc::vec![SigTerm::var("x")]);
        let mut s = em_script(None, ScriptRule::Em(Some(p.clone())));
        s.steps.push(ScriptStep { label: 3, rule: ScriptRule::Commute(7), formula: None });
        s.steps.push(ScriptStep { label: 9, rule: ScriptRule::ForallIntro(3, Some(name("y"))), formula: None });
        let e = expand(&s).unwrap();
        assert_eq!(e.labels[0], (7, 0));
        assert_eq!(e.labels[2].0, 9);
        assert_eq!(e.labels[2].1, e.proof.steps.len() - 1);
        check_proof(e.proof).unwrap();
        s.steps.push(ScriptStep { label: 3, rule: ScriptRule::Commute(7), formula: None });
        assert!(expand(&s).unwrap_err().message.contains("twice"));
    }

    #[test]
    fn corpus_script_expands() {
        let s = metastability_script().unwrap();
        assert!(s.steps.iter().all(|st| st.formula.is_some()));
        let e = expand(&s).unwrap();
        let primitive = Script::from_proof(&e.proof);
        let again = expand(&primitive).unwrap();
        assert_eq!(again.proof.steps, e.proof.steps);
        let c = check_proof(e.proof).unwrap();
        assert_eq!(c.goal(), &crate::proof::metastability_goal());
    }
}
