//! The acceptance suites under other seeds, at smaller sizes.

use herbrand::suites::{
    argmax_suite, case_suite, coherence_suites, normal_form_suite, oracle_p, recursor_suite, simultaneous_suite,
    soundness_suite, Outcome,
};
use num_rational::BigRational;

fn ok(o: Outcome) {
    assert!(o.passed(), "{}: {:?}", o.name, &o.failures[..o.failures.len().min(3)]);
    assert!(o.cases > 0);
}

#[test]
fn p_oracle_matches_rational_definition() {
    let a = |n: u64| BigRational::new(1.into(), (n as i64 + 1).into());
    for v in 0..12 {
        for w in 0..12 {
            for l in 0..6 {
                let exact = a(v) - a(w) <= BigRational::new((l as i64).into(), 3.into());
                assert_eq!(oracle_p(v, w, l), exact, "P({}, {}, {})", v, w, l);
            }
        }
    }
}

#[test]
fn derived_terms_other_seeds() {
    for seed in [1u64, 77, 4242] {
        ok(recursor_suite(seed, 25));
        ok(simultaneous_suite(seed, 25));
        ok(case_suite(seed, 25, true));
        ok(case_suite(seed, 25, false));
        ok(argmax_suite(seed, 25));
    }
}

#[test]
fn normal_forms_other_seeds() {
    for seed in [3u64, 99] {
        ok(normal_form_suite(seed, 60, 30));
    }
}

#[test]
fn coherence_other_seeds() {
    for seed in [5u64, 11] {
        coherence_suites(seed, 40).into_iter().for_each(ok);
    }
}

#[test]
fn soundness_at_other_k() {
    let h = std::thread::Builder::new().stack_size(256 << 20).spawn(|| {
        ok(soundness_suite(0, 7));
        ok(soundness_suite(5, 7));
    });
    h.unwrap().join().unwrap();
}
