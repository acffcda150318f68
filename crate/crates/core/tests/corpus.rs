use herbrand_core::example::metastability_spec;
use herbrand_core::herbrand::{run_pipeline, PipelineOptions};
use herbrand_core::proof::{check_proof, metastability_proof, Proof};
use herbrand_core::semantics::{Expr, Structure};
use herbrand_core::syntax::SigTerm;
use proptest::prelude::*;

fn on_big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new().stack_size(256 << 20).spawn(f).unwrap().join().unwrap()
}

fn proof() -> Proof {
    metastability_proof().unwrap()
}

#[test]
fn corpus_proof_checks() {
    let p = check_proof(proof()).unwrap();
    assert_eq!(p.goal().to_string(), "(exists m (P m (g m) (S 0)))");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Replacing one conclusion by a different formula breaks the proof.
    #[test]
    fn mutated_proofs_are_rejected(i in 0usize..10_000, j in 0usize..10_000) {
        let mut p = proof();
        let n = p.steps.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(p.steps[i].conclusion != p.steps[j].conclusion);
        p.steps[i].conclusion = p.steps[j].conclusion.clone();
        prop_assert!(check_proof(p).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// In any structure where a is decreasing with a_0 <= 1, the extracted set is
    /// {g^i 0 | i <= max(k,1)}, it contains the value of the witness, and the
    /// disjunction holds.
    #[test]
    fn herbrand_sets_are_sound(k in 0u64..6, c in 1i64..4, num in 1i64..3, d in 2i64..5) {
        let (set, membership, verdict) = on_big_stack(move || {
            let n = || Expr::name("n");
            let g = Expr::bin("+", n(), Expr::int(c)).unwrap();
            let a = Expr::bin("/", Expr::int(num), Expr::bin("+", n(), Expr::int(d)).unwrap()).unwrap();
            let p = check_proof(proof()).unwrap();
            let m = Structure::new(&p.proof().signature, &metastability_spec(k, g, a)).unwrap();
            let r = run_pipeline(&p, &m, &PipelineOptions::default()).unwrap();
            (r.set.terms(), r.membership, r.verdict)
        });
        let want: Vec<SigTerm> = (0..=k.max(1)).map(|i| (0..i).fold(SigTerm::zero(), |t, _| SigTerm::app("g", vec![t]))).collect();
        let mut got = set;
        got.sort_by_key(|t| t.size());
        prop_assert_eq!(got, want);
        prop_assert!(membership);
        prop_assert!(verdict);
    }
}
