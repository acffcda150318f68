//! Acceptance criteria 1-8, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use herbrand::corpus::{model_path, models, proof_path};
use herbrand::script::parse_script;
use herbrand::structure::parse_structure;
use herbrand::suites::{coherence_suites, normal_form_suite, semantics_suites, soundness_suite, Outcome};
use herbrand_core::example::{default_structure, expected_normal_forms, spines_agree, witness_terms};
use herbrand_core::herbrand::{herbrand_set, run_pipeline, HerbrandReport, PipelineOptions, DEFAULT_CAP};
use herbrand_core::omega::{numeral, Term};
use herbrand_core::proof::{check_proof, CheckedProof};
use herbrand_core::rewrite::{analyze_spine, Budget, Engine, SpineHead};
use herbrand_core::script::expand;
use herbrand_core::semantics::Structure;
use herbrand_core::syntax::SigTerm;

const SEED: u64 = 20_260_301;

type Verdict = Result<String, String>;

fn load_proof() -> Result<CheckedProof, String> {
    let src = std::fs::read_to_string(proof_path()).map_err(|e| e.to_string())?;
    let s = parse_script(&src).map_err(|e| e.to_string())?;
    let e = expand(&s).map_err(|e| e.to_string())?;
    check_proof(e.proof).map_err(|e| e.to_string())
}

fn extract(p: &CheckedProof, file: &str) -> Result<HerbrandReport, String> {
    let src = std::fs::read_to_string(model_path(file)).map_err(|e| e.to_string())?;
    let spec = parse_structure(&src).map_err(|e| format!("{}: {}", file, e))?;
    let m = Structure::new(&p.proof().signature, &spec).map_err(|e| e.to_string())?;
    run_pipeline(p, &m, &PipelineOptions::default()).map_err(|e| format!("{}: {}", file, e))
}

fn g_iter(i: u64) -> SigTerm {
    (0..i).fold(SigTerm::zero(), |t, _| SigTerm::app("g", vec![t]))
}

fn expected_set(k: u64) -> Vec<SigTerm> {
    (0..=k.max(1)).map(g_iter).collect()
}

fn sorted(mut v: Vec<SigTerm>) -> Vec<SigTerm> {
    v.sort_by_key(|t| t.to_string());
    v
}

fn show(v: &[SigTerm]) -> String {
    let parts: Vec<String> = v.iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let el = start.elapsed();
    if el < limit {
        Ok(el)
    } else {
        Err(format!("took {:.2?}, limit {:?}", el, limit))
    }
}

fn criterion1() -> Verdict {
    let start = Instant::now();
    let p = load_proof()?;
    let r = extract(&p, "k2.model")?;
    let got = sorted(r.set.terms());
    if got != sorted(expected_set(2)) {
        return Err(format!("set {}", show(&got)));
    }
    if !r.verdict {
        return Err("verdict false".into());
    }
    let at = |t: &SigTerm| r.disjuncts.iter().find(|d| &d.term == t).map(|d| d.value);
    if at(&SigTerm::zero()) != Some(false) || at(&g_iter(1)) != Some(true) {
        return Err(format!("disjunct values 0:{:?} (g 0):{:?}", at(&SigTerm::zero()), at(&g_iter(1))));
    }
    let el = within(start, Duration::from_secs(10))?;
    Ok(format!("S = {}, verdict true, disjunct (g 0) true, {:.2?}", show(&got), el))
}

fn criterion2() -> Verdict {
    let start = Instant::now();
    let p = load_proof()?;
    let mut sizes = Vec::new();
    for k in [0u64, 1, 2, 3, 5, 8] {
        let r = extract(&p, &format!("k{}.model", k))?;
        let got = sorted(r.set.terms());
        if got != sorted(expected_set(k)) {
            return Err(format!("k={}: set {}", k, show(&got)));
        }
        sizes.push(format!("k={}:{}", k, got.len()));
    }
    let el = within(start, Duration::from_secs(30))?;
    Ok(format!("sizes {}, {:.2?}", sizes.join(" "), el))
}

fn criterion3() -> Verdict {
    let p = load_proof()?;
    let files: Vec<String> = models().into_iter().filter(|m| m.k == 2).map(|m| m.file).collect();
    if files.len() < 4 {
        return Err(format!("only {} structures with k = 2", files.len()));
    }
    let mut first: Option<Vec<SigTerm>> = None;
    for f in &files {
        let got = sorted(extract(&p, f)?.set.terms());
        match &first {
            None => first = Some(got),
            Some(s) if *s != got => return Err(format!("{} gives {}, not {}", f, show(&got), show(s))),
            _ => {}
        }
    }
    Ok(format!("{} structures give {}", files.len(), show(&first.unwrap_or_default())))
}

fn criterion4() -> Verdict {
    let w = witness_terms().map_err(|e| e.to_string())?;
    let nf = expected_normal_forms();
    let mut e = Engine::new(Budget::default());
    let err = |e: herbrand_core::rewrite::RewriteError| e.to_string();
    for k in [0u64, 1, 2, 3, 5, 8] {
        let d = k + 2;
        let probe = |t: &Term| Term::app(t.clone(), numeral(k)).expect("zero sequence");
        let checks = [
            ("r'", spines_agree(&mut e, &probe(&w.r), &probe(&nf.r), d).map_err(err)?),
            ("a'", spines_agree(&mut e, &w.a, &nf.a, d).map_err(err)?),
            ("q'", spines_agree(&mut e, &w.q, &nf.q, d).map_err(err)?),
            ("m'", spines_agree(&mut e, &w.m, &nf.m, d).map_err(err)?),
        ];
        if let Some((n, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(format!("{} differs at depth {}", n, d));
        }
    }
    // the sequence u read off the normal form of the extracted a
    let a = e.normalize(&w.a).map_err(err)?;
    let (head, _) = analyze_spine(&a).map_err(err)?;
    let SpineHead::Seq(u) = head else { return Err("a' is not headed by a sequence".into()) };
    let m = default_structure(2).map_err(|e| e.to_string())?;
    for n in 0..=10u64 {
        let un = e.normal_branch(&u, n).map_err(err)?;
        let got = herbrand_set(&m, &mut e, &un, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let mut got = got.terms();
        got.sort_by_key(|t| t.as_numeral());
        let want: Vec<SigTerm> = (0..=n.saturating_sub(1)).map(SigTerm::numeral).collect();
        if got != want {
            return Err(format!("T(u_{}) = {}", n, show(&got)));
        }
    }
    Ok("r', a', q', m' agree at depth k+2 for k in {0,1,2,3,5,8}; T(u_n) for n <= 10".into())
}

fn summarize(outs: &[Outcome]) -> Verdict {
    let parts: Vec<String> = outs.iter().map(|o| format!("{} {}/{}", o.name, o.cases - o.failures.len(), o.cases)).collect();
    let bad: Vec<String> = outs.iter().flat_map(|o| o.failures.iter().take(3).map(move |f| format!("{}: {}", o.name, f))).collect();
    if bad.is_empty() {
        Ok(parts.join(", "))
    } else {
        Err(format!("{}; first failures: {}", parts.join(", "), bad.join(" | ")))
    }
}

fn criterion5() -> Verdict {
    summarize(&semantics_suites(SEED, 100))
}

fn criterion6() -> Verdict {
    summarize(&[normal_form_suite(SEED, 200, 30)])
}

fn criterion7() -> Verdict {
    summarize(&coherence_suites(SEED, 100))
}

fn criterion8() -> Verdict {
    summarize(&[soundness_suite(2, 1)])
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("end-to-end extraction at k = 2", criterion1),
        ("parametric Herbrand set", criterion2),
        ("uniformity in g and P", criterion3),
        ("intermediate normal forms", criterion4),
        ("derived-term semantics", criterion5),
        ("normal-form structure", criterion6),
        ("coherence through embedding", criterion7),
        ("soundness of step witnesses", criterion8),
    ];
    let worker = std::thread::Builder::new().stack_size(512 << 20).spawn(move || {
        let mut failed = 0;
        for (i, (name, run)) in criteria.iter().enumerate() {
            let start = Instant::now();
            let r = run();
            let el = start.elapsed();
            match r {
                Ok(msg) => println!("PASS {} {} ({:.2?}): {}", i + 1, name, el, msg),
                Err(msg) => {
                    failed += 1;
                    println!("FAIL {} {} ({:.2?}): {}", i + 1, name, el, msg)
                }
            }
        }
        failed
    });
    match worker.expect("spawn").join() {
        Ok(0) => ExitCode::SUCCESS,
        _ => ExitCode::FAILURE,
    }
}
