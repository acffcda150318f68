//! Rendering of normal forms, interpretations and pipeline reports.

use std::fmt::Write;

use herbrand_core::herbrand::HerbrandReport;
use herbrand_core::interp::Interp;
use herbrand_core::omega::{Kind, Term, Var};
use herbrand_core::rewrite::{Engine, RewriteError};
use serde_json::{json, Value};

/// Renders a term, showing the first `shown` normal branches of each
/// sequence down to `depth` nested sequences.
pub fn render_normal(engine: &mut Engine, t: &Term, shown: u64, depth: usize) -> Result<String, RewriteError> {
    let mut out = String::new();
    write_normal(engine, t, shown, depth, &mut out)?;
    Ok(out)
}

fn write_normal(engine: &mut Engine, t: &Term, shown: u64, depth: usize, out: &mut String) -> Result<(), RewriteError> {
    match t.kind() {
        Kind::Lam(v, b) => {
            let _ = write!(out, "(lambda ({} {}) ", v.name, v.ty);
            write_normal(engine, b, shown, depth, out)?;
            out.push(')');
        }
        Kind::App(..) => {
            let (h, args) = t.spine();
            out.push('(');
            write_normal(engine, &h, shown, depth, out)?;
            for a in args {
                out.push(' ');
                write_normal(engine, &a, shown, depth, out)?;
            }
            out.push(')');
        }
        Kind::Seq(s) => {
            let _ = write!(out, "(seq {} :shown (", s.elem());
            if depth > 0 {
                for i in 0..shown {
                    if i > 0 {
                        out.push(' ');
                    }
                    let b = engine.normal_branch(s, i)?;
                    write_normal(engine, &b, shown, depth - 1, out)?;
                }
            }
            out.push_str(") ...)");
        }
        _ => out.push_str(&t.render(0)),
    }
    Ok(())
}

fn typed(vs: &[Var]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| format!("({} {})", v.name, v.ty)).collect();
    format!("({})", parts.join(" "))
}

/// `(interpretation (formula φ) (u ((u1 τ1) ...)) (x (...)) (sh φ_Sh))`.
pub fn interp_sexpr(i: &Interp) -> String {
    format!(
        "(interpretation\n  (formula {})\n  (u {})\n  (x {})\n  (sh {}))",
        i.formula,
        typed(&i.u),
        typed(&i.x),
        i.sh
    )
}

/// The machine-readable report lines of `extract`.
pub fn report_lines(r: &HerbrandReport) -> Vec<String> {
    let mut out = vec![format!("GOAL {}", r.goal)];
    for m in &r.set.members {
        out.push(format!("HERBRAND_TERM {}", m.term));
    }
    for d in &r.disjuncts {
        out.push(format!("DISJUNCT {} {}", d.instance, d.value));
    }
    out.push(format!("VERDICT {}", r.verdict));
    let g = if r.gamma.passed() { "pass" } else { "fail" };
    out.push(format!("GAMMA_SAMPLE {} {}", g, r.gamma.bound));
    out.push(format!("VALUE {}", r.value));
    out.push(format!("MEMBERSHIP {}", r.membership));
    out.push(format!("STEPS {}", r.steps));
    out.push(format!("MAX_DEMAND {}", r.max_demand));
    out
}

pub fn report_json(r: &HerbrandReport) -> Value {
    let members: Vec<Value> = r
        .set
        .members
        .iter()
        .map(|m| json!({ "term": m.term.to_string(), "provenance": m.provenance.to_string() }))
        .collect();
    let disjuncts: Vec<Value> = r
        .disjuncts
        .iter()
        .map(|d| json!({ "term": d.term.to_string(), "instance": d.instance.to_string(), "value": d.value }))
        .collect();
    let demanded: Vec<Value> = r
        .set
        .demanded
        .iter()
        .map(|(seq, ix)| json!({ "seq": seq, "indices": ix.iter().collect::<Vec<_>>() }))
        .collect();
    let counterexamples: Vec<Value> = r
        .gamma
        .counterexamples
        .iter()
        .map(|(k, vals)| {
            let vals: serde_json::Map<String, Value> = vals.iter().map(|(n, v)| (n.to_string(), json!(v))).collect();
            json!({ "sentence": k, "values": vals })
        })
        .collect();
    json!({
        "goal": r.goal.to_string(),
        "variable": r.var.to_string(),
        "matrix": r.matrix.to_string(),
        "herbrand_terms": members,
        "disjuncts": disjuncts,
        "verdict": r.verdict,
        "gamma_sample": {
            "passed": r.gamma.passed(),
            "bound": r.gamma.bound,
            "checked": r.gamma.checked,
            "counterexamples": counterexamples,
        },
        "value": r.value,
        "membership": r.membership,
        "demanded": demanded,
        "steps": r.steps,
        "max_demand": r.max_demand,
    })
}
